"""Dependence between random vectors via collapsing functions.

The library collapses each random vector to a scalar series, measures
dependence between the collapsed series, and provides Kendall distributions
and copulas for Archimedean models, asymptotic and bootstrap confidence
intervals, a graphical independence assessment, and rolling-window
dependence tracking.
"""

from .archimedean import (
    ArchimedeanGenerator,
    ScenarioSpec,
    sample_archimedean,
    sample_scenario,
    tau_to_theta,
)
from .assess import AssessmentResult, Panel, assess_independence, render_svg
from .asymptotics import (
    VarianceEstimate,
    bootstrap_ci,
    sigma2_chi_case1,
    sigma2_chi_case2,
    tau_asymptotics_case1,
    tau_asymptotics_case2,
)
from .collapse import CollapseSpec, collapse_group, pair_indices
from .core import (
    CollapsedSample,
    GroupedData,
    pit_pseudo_observations,
    pseudo_observations,
    ranks,
)
from .errors import DataError, DegenerateError, UsageError, VecdepError
from .kendall import (
    EmpiricalKendall,
    JointKendallModel,
    MaxCollapsedModel,
    empirical_kendall_joint,
    kendall_copula_eval,
    kendall_joint,
    kendall_univariate,
    max_collapsed_cdf,
    max_collapsed_copula_eval,
    sample_kendall_copula,
)
from .measures import (
    DependenceEstimate,
    MeasureSpec,
    chi_collapsed,
    chi_pit_pearson,
    chi_pit_spearman,
    optimal_weights,
    pearson,
    spearman,
    tail_dependence,
    tau,
)
from .pipeline import estimate_dependence, point_estimate
from .rolling import RollingRow, rolling_dependence

__version__ = "0.1.0"

__all__ = [
    "ArchimedeanGenerator",
    "AssessmentResult",
    "CollapseSpec",
    "CollapsedSample",
    "DataError",
    "DegenerateError",
    "DependenceEstimate",
    "EmpiricalKendall",
    "GroupedData",
    "JointKendallModel",
    "MaxCollapsedModel",
    "MeasureSpec",
    "Panel",
    "RollingRow",
    "ScenarioSpec",
    "UsageError",
    "VarianceEstimate",
    "VecdepError",
    "assess_independence",
    "bootstrap_ci",
    "chi_collapsed",
    "chi_pit_pearson",
    "chi_pit_spearman",
    "collapse_group",
    "empirical_kendall_joint",
    "estimate_dependence",
    "kendall_copula_eval",
    "kendall_joint",
    "kendall_univariate",
    "max_collapsed_cdf",
    "max_collapsed_copula_eval",
    "optimal_weights",
    "pair_indices",
    "pearson",
    "pit_pseudo_observations",
    "point_estimate",
    "pseudo_observations",
    "ranks",
    "render_svg",
    "rolling_dependence",
    "sample_archimedean",
    "sample_kendall_copula",
    "sample_scenario",
    "sigma2_chi_case1",
    "sigma2_chi_case2",
    "spearman",
    "tail_dependence",
    "tau",
    "tau_asymptotics_case1",
    "tau_asymptotics_case2",
    "tau_to_theta",
]

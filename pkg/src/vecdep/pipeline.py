"""Glue that turns a (collapse, measure, CI method) request into a DependenceEstimate."""

from __future__ import annotations

import numpy as np

from .asymptotics import bootstrap_ci, sigma2_chi_case1, sigma2_chi_case2, tau_asymptotics_case1, tau_asymptotics_case2
from .collapse import CollapseSpec, collapse_group
from .core import GroupedData
from .errors import UsageError
from .measures import DependenceEstimate, MeasureSpec, chi_collapsed, chi_pit_pearson, chi_pit_spearman

__all__ = ["estimate_dependence", "point_estimate"]

_ASYMPTOTIC_MEASURES = {"pearson", "tau"}


def point_estimate(
    data: GroupedData, group_a: str, group_b: str, cspec: CollapseSpec, mspec: MeasureSpec, seed: int | None = None
) -> DependenceEstimate:
    if cspec.kind == "pit" and mspec.kind == "pearson":
        return chi_pit_pearson(data, group_a, group_b)
    if cspec.kind == "pit" and mspec.kind == "spearman":
        return chi_pit_spearman(data, group_a, group_b)
    return chi_collapsed(data, group_a, group_b, cspec, mspec, seed=seed)


def estimate_dependence(
    data: GroupedData,
    group_a: str,
    group_b: str,
    cspec: CollapseSpec,
    mspec: MeasureSpec,
    ci: str = "none",
    level: float = 0.95,
    n_boot: int = 1000,
    seed: int = 0,
) -> DependenceEstimate:
    """Point estimate with the requested confidence-interval method.

    Asymptotic intervals exist for Pearson and tau (delta method, routed to
    the one-sample or pairwise case by the collapse arity). The PIT estimator
    and the rank/tail measures get bootstrap intervals only.
    """
    if ci not in ("none", "asymptotic", "bootstrap"):
        raise UsageError(f"unknown ci method {ci!r}")
    if ci == "none":
        return point_estimate(data, group_a, group_b, cspec, mspec, seed=seed)

    if ci == "asymptotic":
        if cspec.kind == "pit":
            raise UsageError("bootstrap required for PIT: no asymptotic normality is available")
        if mspec.kind not in _ASYMPTOTIC_MEASURES:
            raise UsageError(f"asymptotic CI supports pearson and tau, not {mspec.kind!r}; use bootstrap")
        sa = collapse_group(data, group_a, cspec, seed=seed)
        sb = collapse_group(data, group_b, cspec, seed=seed)
        if cspec.arity == "one-sample":
            var = (
                sigma2_chi_case1(sa.values, sb.values)
                if mspec.kind == "pearson"
                else tau_asymptotics_case1(sa.values, sb.values)
            )
        else:
            var = (
                sigma2_chi_case2(sa.values, sb.values, data.n)
                if mspec.kind == "pearson"
                else tau_asymptotics_case2(sa.values, sb.values, data.n, seed=seed)
            )
        lo, hi = var.ci(level)
        return DependenceEstimate(
            value=var.value,
            std_error=var.std_error(),
            ci=(lo, hi),
            method="asymptotic",
            n=data.n,
            k=sa.k,
            degenerate_variance=var.clipped,
        )

    base = point_estimate(data, group_a, group_b, cspec, mspec, seed=seed)
    point, lo, hi, reps = bootstrap_ci(
        data,
        lambda d: point_estimate(d, group_a, group_b, cspec, mspec, seed=seed).value,
        n_boot=n_boot,
        level=level,
        seed=seed,
    )
    return DependenceEstimate(
        value=point,
        std_error=float(np.std(reps, ddof=1)),
        ci=(lo, hi),
        method="bootstrap",
        n=data.n,
        k=base.k,
    )

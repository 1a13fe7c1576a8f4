"""Univariate and joint Kendall distributions for Archimedean models, the
Kendall copula (evaluation and sampling), and max-collapsed distributions."""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, lgamma, log
from typing import Callable

import numpy as np

from .archimedean import ArchimedeanGenerator, log_neg_psi_deriv, psi, psi_inv, sample_frailty
from .core import pit_pseudo_observations
from .errors import UsageError, VecdepError

__all__ = [
    "JointKendallModel",
    "EmpiricalKendall",
    "MaxCollapsedModel",
    "kendall_univariate",
    "kendall_joint",
    "empirical_kendall_joint",
    "kendall_copula_eval",
    "sample_kendall_copula",
    "max_collapsed_cdf",
    "max_collapsed_copula_eval",
]

_BISECT_ITERS = 60


@dataclass(frozen=True)
class JointKendallModel:
    """Joint Kendall distribution of a (p+q)-dim exchangeable Archimedean model."""

    gen: ArchimedeanGenerator
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise UsageError("group dimensions must be >= 1")


@dataclass(frozen=True)
class EmpiricalKendall:
    """Leave-one-out PIT pseudo-observations of two groups, for the empirical estimator."""

    w1: np.ndarray
    w2: np.ndarray

    def __post_init__(self):
        w1 = np.asarray(self.w1, dtype=float)
        w2 = np.asarray(self.w2, dtype=float)
        if w1.shape != w2.shape or w1.ndim != 1:
            raise UsageError("w1 and w2 must be 1-d vectors of equal length")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)

    @classmethod
    def from_blocks(cls, xblock: np.ndarray, yblock: np.ndarray) -> "EmpiricalKendall":
        return cls(pit_pseudo_observations(xblock), pit_pseudo_observations(yblock))

    @property
    def n(self) -> int:
        return self.w1.size


@dataclass(frozen=True)
class MaxCollapsedModel:
    """Joint CDF oracle for (X, Y) with the maximum collapsing function applied per group.

    ``joint_cdf(xs, ys)`` takes a p-vector and a q-vector and returns
    F_{X,Y}(xs, ys). Marginal support bounds replace the +/- infinity arguments.
    """

    joint_cdf: Callable[[np.ndarray, np.ndarray], float]
    p: int
    q: int
    x_support: tuple[float, float] = (0.0, 1.0)
    y_support: tuple[float, float] = (0.0, 1.0)


def _scalar_kendall_univariate(gen: ArchimedeanGenerator, p: int, t: float) -> float:
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return 1.0
    x = float(psi_inv(gen, t))
    if x == 0.0:
        return 1.0
    logx = log(x)
    total = 0.0
    for k in range(p):
        total += exp(k * logx - lgamma(k + 1) + float(log_neg_psi_deriv(gen, k, x)))
    return min(total, 1.0)


def kendall_univariate(gen: ArchimedeanGenerator, p: int, t):
    """K(t) = P(C(U) <= t) for the p-dimensional Archimedean copula with generator psi."""
    if p < 1:
        raise UsageError("dimension p must be >= 1")
    t_arr = np.asarray(t, dtype=float)
    out = np.array([_scalar_kendall_univariate(gen, p, float(v)) for v in np.atleast_1d(t_arr)])
    return float(out[0]) if t_arr.shape == () else out.reshape(t_arr.shape)


def _scalar_kendall_joint(model: JointKendallModel, t1: float, t2: float) -> float:
    if t1 <= 0.0 or t2 <= 0.0:
        return 0.0
    if t1 >= 1.0:
        return _scalar_kendall_univariate(model.gen, model.q, t2)
    if t2 >= 1.0:
        return _scalar_kendall_univariate(model.gen, model.p, t1)
    gen = model.gen
    x1 = float(psi_inv(gen, t1))
    x2 = float(psi_inv(gen, t2))
    z = x1 + x2
    logx1, logx2 = log(x1), log(x2)
    # product of the two truncated Poisson sums: m = n + (m - n) with the
    # first index capped at p-1 and the second at q-1
    m_max = (model.p - 1) + (model.q - 1)
    total = 0.0
    for m in range(m_max + 1):
        inner = 0.0
        for n in range(max(0, m - (model.q - 1)), min(m, model.p - 1) + 1):
            inner += exp(n * logx1 - lgamma(n + 1) + (m - n) * logx2 - lgamma(m - n + 1))
        total += inner * exp(float(log_neg_psi_deriv(gen, m, z)))
    return min(total, 1.0)


def kendall_joint(model: JointKendallModel, t1, t2):
    """Joint Kendall distribution of two Archimedean groups sharing one generator."""
    t1a = np.asarray(t1, dtype=float)
    t2a = np.asarray(t2, dtype=float)
    b1, b2 = np.broadcast_arrays(np.atleast_1d(t1a), np.atleast_1d(t2a))
    out = np.array([_scalar_kendall_joint(model, float(a), float(b)) for a, b in zip(b1.ravel(), b2.ravel())])
    out = out.reshape(b1.shape)
    if t1a.shape == () and t2a.shape == ():
        return float(out[0])
    return out


def empirical_kendall_joint(ek: EmpiricalKendall, t1, t2):
    """Nonparametric step-function estimator of the joint Kendall distribution."""
    t1a = np.atleast_1d(np.asarray(t1, dtype=float))
    t2a = np.atleast_1d(np.asarray(t2, dtype=float))
    b1, b2 = np.broadcast_arrays(t1a, t2a)
    flat1, flat2 = b1.ravel(), b2.ravel()
    out = np.mean(
        (ek.w1[None, :] <= flat1[:, None]) & (ek.w2[None, :] <= flat2[:, None]), axis=1
    )
    out = out.reshape(b1.shape)
    if np.asarray(t1).shape == () and np.asarray(t2).shape == ():
        return float(out.ravel()[0])
    return out


def _invert_monotone(fn: Callable[[float], float], target: float, lo: float, hi: float) -> float:
    """Bisection inverse of a nondecreasing function on [lo, hi]."""
    if target <= fn(lo):
        return lo
    if target >= fn(hi):
        return hi
    a, b = lo, hi
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (a + b)
        if fn(mid) < target:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _scalar_kendall_copula(model: JointKendallModel, u1: float, u2: float) -> float:
    if not (0.0 <= u1 <= 1.0 and 0.0 <= u2 <= 1.0):
        raise UsageError("copula arguments must lie in [0, 1]")
    if u1 == 0.0 or u2 == 0.0:
        return 0.0
    if u1 == 1.0:
        return float(u2)
    if u2 == 1.0:
        return float(u1)
    t1 = _invert_monotone(lambda t: _scalar_kendall_univariate(model.gen, model.p, t), u1, 0.0, 1.0)
    t2 = _invert_monotone(lambda t: _scalar_kendall_univariate(model.gen, model.q, t), u2, 0.0, 1.0)
    return _scalar_kendall_joint(model, t1, t2)


def kendall_copula_eval(model: JointKendallModel, u1, u2):
    """Kendall copula C_K(u1, u2): joint Kendall distribution at the marginal quantiles."""
    b1, b2 = np.broadcast_arrays(np.asarray(u1, dtype=float), np.asarray(u2, dtype=float))
    out = np.array(
        [_scalar_kendall_copula(model, a, b) for a, b in zip(b1.ravel(), b2.ravel())]
    ).reshape(b1.shape)
    if b1.shape == ():
        return float(out)
    return out


def sample_kendall_copula(model: JointKendallModel, n: int, seed: int) -> np.ndarray:
    """n draws from the Kendall copula of the model, with uniform margins.

    Draws the (p+q)-dim Archimedean vector with shared frailty, collapses each
    block through its own copula (T = psi of the summed psi-inverses) and maps
    through the analytic marginal Kendall distributions.
    """
    if n < 1:
        raise UsageError("need n >= 1")
    rng = np.random.default_rng(seed)
    v = sample_frailty(model.gen, n, rng)
    e = rng.exponential(size=(n, model.p + model.q))
    t1 = psi(model.gen, e[:, : model.p].sum(axis=1) / v)
    t2 = psi(model.gen, e[:, model.p :].sum(axis=1) / v)
    u1 = kendall_univariate(model.gen, model.p, t1)
    u2 = kendall_univariate(model.gen, model.q, t2)
    return np.column_stack([u1, u2])


def max_collapsed_cdf(model: MaxCollapsedModel, x: float, y: float) -> float:
    """CDF of (max of the X block, max of the Y block): the oracle at the duplicated point."""
    return float(model.joint_cdf(np.full(model.p, x), np.full(model.q, y)))


def max_collapsed_copula_eval(model: MaxCollapsedModel, u: float, v: float) -> float:
    """Copula of the two block maxima, by quantile inversion of the marginal diagonals."""
    if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
        raise UsageError("copula arguments must lie in [0, 1]")
    if u == 0.0 or v == 0.0:
        return 0.0
    xlo, xhi = model.x_support
    ylo, yhi = model.y_support

    def f_sx(x: float) -> float:
        return max_collapsed_cdf(model, x, yhi)

    def f_sy(y: float) -> float:
        return max_collapsed_cdf(model, xhi, y)

    for fn, lo, hi, name in ((f_sx, xlo, xhi, "x"), (f_sy, ylo, yhi, "y")):
        if fn(hi) < fn(lo) - 1e-12:
            raise VecdepError(f"non-monotone marginal diagonal in {name}; invalid oracle")
    xq = _invert_monotone(f_sx, u, xlo, xhi)
    yq = _invert_monotone(f_sy, v, ylo, yhi)
    return max_collapsed_cdf(model, xq, yq)

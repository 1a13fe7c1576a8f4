"""Collapsed measures of association: Pearson, Spearman, Kendall tau, tail
dependence, the PIT estimators, and canonical-correlation optimal weights."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .collapse import CollapseSpec, collapse_group
from .core import GroupedData, pit_pseudo_observations, pseudo_observations
from .errors import DegenerateError, UsageError

__all__ = [
    "MeasureSpec",
    "DependenceEstimate",
    "pearson",
    "spearman",
    "tau",
    "tail_dependence",
    "empirical_copula_value",
    "chi_collapsed",
    "chi_pit_pearson",
    "chi_pit_spearman",
    "optimal_weights",
]

_MEASURES = {"pearson", "spearman", "tau", "tail-upper", "tail-lower"}


@dataclass(frozen=True)
class MeasureSpec:
    """Which bivariate association measure to apply to the collapsed samples."""

    kind: str = "pearson"
    tail_k: int | None = None  # tail kinds; None -> ceil(sqrt(n))

    def __post_init__(self):
        if self.kind not in _MEASURES:
            raise UsageError(f"unknown measure {self.kind!r}")


@dataclass(frozen=True)
class DependenceEstimate:
    """Point estimate of a collapsed association measure with optional CI."""

    value: float
    std_error: float | None = None
    ci: tuple[float, float] | None = None
    method: str = "none"  # asymptotic | bootstrap | none
    n: int = 0
    k: int = 0
    degenerate_variance: bool = False

    def __post_init__(self):
        if self.ci is not None:
            lo, hi = self.ci
            if not lo <= self.value <= hi:
                raise DegenerateError("confidence interval does not bracket the estimate")


def pearson(sx: np.ndarray, sy: np.ndarray) -> float:
    sx = np.asarray(sx, dtype=float)
    sy = np.asarray(sy, dtype=float)
    if sx.shape != sy.shape or sx.ndim != 1 or sx.size < 2:
        raise UsageError("pearson needs two equal-length vectors with n >= 2")
    dx = sx - sx.mean()
    dy = sy - sy.mean()
    vx = float(dx @ dx)
    vy = float(dy @ dy)
    scale = max(float(np.abs(sx).max()), float(np.abs(sy).max()), 1.0)
    if vx <= (1e-14 * scale) ** 2 * sx.size or vy <= (1e-14 * scale) ** 2 * sx.size:
        raise DegenerateError("degenerate collapsed sample: zero variance")
    r = float(dx @ dy) / math.sqrt(vx * vy)
    return min(1.0, max(-1.0, r))


def spearman(sx: np.ndarray, sy: np.ndarray) -> float:
    """Pearson correlation of the pseudo-observations (rank correlation)."""
    return pearson(pseudo_observations(sx), pseudo_observations(sy))


def tau(sx: np.ndarray, sy: np.ndarray) -> float:
    """Sample Kendall tau-a: (concordant - discordant) / C(n, 2); ties count as neither."""
    sx = np.asarray(sx, dtype=float)
    sy = np.asarray(sy, dtype=float)
    if sx.shape != sy.shape or sx.ndim != 1 or sx.size < 2:
        raise UsageError("tau needs two equal-length vectors with n >= 2")
    n = sx.size
    order = np.lexsort((sy, sx))
    y = sy[order]
    n0 = n * (n - 1) // 2

    def tie_pairs(v: np.ndarray) -> int:
        _, counts = np.unique(v, return_counts=True)
        return int(np.sum(counts * (counts - 1) // 2))

    n1 = tie_pairs(sx)
    n2 = tie_pairs(sy)
    pair_keys = np.rec.fromarrays([sx, sy])
    n3 = tie_pairs(pair_keys)
    if n0 - n1 - n2 + n3 == 0:
        raise DegenerateError("all pairs tied; tau undefined")
    # Knight's algorithm: after sorting by (x, y), discordant pairs among
    # x-untied pairs are exactly the strict inversions of y
    swaps = _count_inversions(y)
    con_minus_dis = n0 - n1 - n2 + n3 - 2 * swaps
    return float(con_minus_dis / n0)


def _count_inversions(y: np.ndarray) -> int:
    """Strict inversions (i < j with y_i > y_j) by mergesort, vectorized per level."""
    if y.size < 2:
        return 0
    mid = y.size // 2
    left = _count_inversions(y[:mid])
    right = _count_inversions(y[mid:])
    ls = np.sort(y[:mid])
    cross = int(np.sum(mid - np.searchsorted(ls, y[mid:], side="right")))
    return left + right + cross


def empirical_copula_value(ux: np.ndarray, uy: np.ndarray, u: float, v: float) -> float:
    """Empirical copula of a paired sample on (0,1)^2 evaluated at (u, v)."""
    ux = np.asarray(ux, dtype=float)
    uy = np.asarray(uy, dtype=float)
    return float(np.mean((ux <= u) & (uy <= v)))


def tail_dependence(ux: np.ndarray, uy: np.ndarray, side: str = "upper", k: int | None = None) -> float:
    """Finite-sample tail dependence of the pair (ux, uy) at tail level k."""
    ux = np.asarray(ux, dtype=float)
    uy = np.asarray(uy, dtype=float)
    if ux.shape != uy.shape or ux.ndim != 1:
        raise UsageError("tail_dependence needs equal-length vectors")
    n = ux.size
    if k is None:
        k = math.ceil(math.sqrt(n))
    if not 1 <= k < n:
        raise UsageError(f"tail level k={k} out of range 1..{n - 1}")
    if side == "upper":
        u = 1.0 - k / n
        lam = (1.0 - 2.0 * u + empirical_copula_value(ux, uy, u, u)) / (1.0 - u)
    elif side == "lower":
        u = k / n
        lam = empirical_copula_value(ux, uy, u, u) / u
    else:
        raise UsageError("side must be 'upper' or 'lower'")
    return min(1.0, max(0.0, lam))


def _apply_measure(sx: np.ndarray, sy: np.ndarray, mspec: MeasureSpec) -> float:
    if mspec.kind == "pearson":
        return pearson(sx, sy)
    if mspec.kind == "spearman":
        return spearman(sx, sy)
    if mspec.kind == "tau":
        return tau(sx, sy)
    side = "upper" if mspec.kind == "tail-upper" else "lower"
    return tail_dependence(pseudo_observations(sx), pseudo_observations(sy), side=side, k=mspec.tail_k)


def chi_collapsed(
    data: GroupedData,
    group_a: str,
    group_b: str,
    cspec: CollapseSpec,
    mspec: MeasureSpec,
    seed: int | None = None,
) -> DependenceEstimate:
    """Collapse both groups with the same spec (shared pair ordering) and apply the measure."""
    sa = collapse_group(data, group_a, cspec, seed=seed)
    sb = collapse_group(data, group_b, cspec, seed=seed)
    value = _apply_measure(sa.values, sb.values, mspec)
    return DependenceEstimate(value=value, method="none", n=data.n, k=sa.k)


def chi_pit_pearson(data: GroupedData, group_a: str, group_b: str) -> DependenceEstimate:
    """Pearson correlation of the leave-one-out PIT pseudo-observations of the two groups."""
    w1 = pit_pseudo_observations(data.group_matrix(group_a))
    w2 = pit_pseudo_observations(data.group_matrix(group_b))
    return DependenceEstimate(value=pearson(w1, w2), method="none", n=data.n, k=data.n)


def chi_pit_spearman(data: GroupedData, group_a: str, group_b: str) -> DependenceEstimate:
    """PIT estimator composed with the empirical marginal Kendall distributions."""
    w1 = pit_pseudo_observations(data.group_matrix(group_a))
    w2 = pit_pseudo_observations(data.group_matrix(group_b))
    k1 = np.searchsorted(np.sort(w1), w1, side="right") / w1.size
    k2 = np.searchsorted(np.sort(w2), w2, side="right") / w2.size
    return DependenceEstimate(value=pearson(k1, k2), method="none", n=data.n, k=data.n)


def optimal_weights(
    data: GroupedData, group_a: str, group_b: str, max_iter: int = 10_000, tol: float = 1e-12
) -> tuple[np.ndarray, np.ndarray, float]:
    """First canonical correlation pair between the two groups.

    Power iteration on inv(S_aa) S_ab inv(S_bb) S_ba with a trace-scaled ridge;
    weights are normalized to unit variance of the collapsed score.
    """
    xa = data.group_matrix(group_a)
    xb = data.group_matrix(group_b)
    n, p = xa.shape
    q = xb.shape[1]
    if n <= p + q:
        raise UsageError("optimal weights need n > p + q")
    xa = xa - xa.mean(axis=0)
    xb = xb - xb.mean(axis=0)
    s_aa = xa.T @ xa / (n - 1)
    s_bb = xb.T @ xb / (n - 1)
    s_ab = xa.T @ xb / (n - 1)
    ridge_a = 1e-8 * np.trace(s_aa) / p
    ridge_b = 1e-8 * np.trace(s_bb) / q
    s_aa = s_aa + ridge_a * np.eye(p)
    s_bb = s_bb + ridge_b * np.eye(q)
    try:
        aa_inv = np.linalg.inv(s_aa)
        bb_inv = np.linalg.inv(s_bb)
    except np.linalg.LinAlgError as exc:
        raise DegenerateError("singular within-group covariance after ridge") from exc
    m = aa_inv @ s_ab @ bb_inv @ s_ab.T
    w = np.ones(p) / math.sqrt(p)
    rho2_prev = -1.0
    for _ in range(max_iter):
        w_new = m @ w
        norm = np.linalg.norm(w_new)
        if norm == 0.0:
            rho2 = 0.0
            break
        w_new /= norm
        rho2 = float(w_new @ m @ w_new)
        if abs(rho2 - rho2_prev) < tol:
            w = w_new
            break
        rho2_prev = rho2
        w = w_new
    else:
        raise DegenerateError("power iteration did not converge")
    rho2 = float(max(w @ m @ w, 0.0))
    wa = w
    wb = bb_inv @ s_ab.T @ wa
    nb = np.linalg.norm(wb)
    if nb > 0:
        wb = wb / nb
    var_a = float(wa @ (s_aa @ wa))
    var_b = float(wb @ (s_bb @ wb))
    if var_a <= 0 or var_b <= 0:
        raise DegenerateError("degenerate canonical direction")
    wa = wa / math.sqrt(var_a)
    wb = wb / math.sqrt(var_b)
    cov = float(wa @ (s_ab @ wb))
    if cov < 0:
        wb = -wb
        cov = -cov
    rho = min(1.0, cov)
    return wa, wb, rho

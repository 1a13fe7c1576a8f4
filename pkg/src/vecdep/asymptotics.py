"""Delta-method asymptotic variances for collapsed correlation and tau
estimators, plus percentile bootstrap confidence intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np
from scipy.special import ndtri

from .core import GroupedData
from .errors import DegenerateError, UsageError

__all__ = [
    "VarianceEstimate",
    "gradient_f5",
    "gradient_f3",
    "f_corr",
    "f_tau",
    "sigma2_chi_case1",
    "sigma2_chi_case2",
    "condensed_to_square",
    "tau_case2_moments",
    "tau_asymptotics_case1",
    "tau_asymptotics_case2",
    "normal_quantile",
    "bootstrap_ci",
]

_BOUNDARY = 1.0 - 1e-12


@dataclass(frozen=True)
class VarianceEstimate:
    """Plug-in asymptotic variance of sqrt(n)-scaled estimator, with CI helper."""

    value: float
    sigma2: float
    case: str  # "one-sample" | "pairwise"
    n: int
    clipped: bool = False

    def std_error(self) -> float:
        return math.sqrt(self.sigma2 / self.n)

    def ci(self, level: float = 0.95) -> tuple[float, float]:
        z = normal_quantile(0.5 + level / 2.0)
        half = z * self.std_error()
        return (self.value - half, self.value + half)


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise UsageError("quantile level must lie in (0, 1)")
    return float(ndtri(p))


def f_corr(m: np.ndarray) -> float:
    """f(a,b,c,d,e) = (e - ab) / (sqrt(c - a^2) sqrt(d - b^2))."""
    a, b, c, d, e = m
    return (e - a * b) / (math.sqrt(c - a * a) * math.sqrt(d - b * b))


def gradient_f5(m: np.ndarray) -> np.ndarray:
    """Closed-form gradient of f_corr at the 5-vector of moments."""
    a, b, c, d, e = np.asarray(m, dtype=float)
    va = c - a * a
    vb = d - b * b
    if va <= 0 or vb <= 0:
        raise DegenerateError("degenerate variance in moment vector")
    sa, sb = math.sqrt(va), math.sqrt(vb)
    cov = e - a * b
    g1 = a * cov / (va**1.5 * sb) - b / (sa * sb)
    g2 = b * cov / (vb**1.5 * sa) - a / (sa * sb)
    g3 = -cov / (2.0 * va**1.5 * sb)
    g4 = -cov / (2.0 * vb**1.5 * sa)
    g5 = 1.0 / (sa * sb)
    return np.array([g1, g2, g3, g4, g5])


def f_tau(m: np.ndarray) -> float:
    """f(a,b,c) = (c - ab) / (sqrt(a - a^2) sqrt(b - b^2))."""
    a, b, c = m
    return (c - a * b) / (math.sqrt(a - a * a) * math.sqrt(b - b * b))


def gradient_f3(m: np.ndarray) -> np.ndarray:
    """Closed-form gradient of f_tau at the 3-vector of concordance moments."""
    a, b, c = np.asarray(m, dtype=float)
    va = a - a * a
    vb = b - b * b
    if va <= 0 or vb <= 0:
        raise DegenerateError("concordance moments at the boundary")
    sa, sb = math.sqrt(va), math.sqrt(vb)
    cov = c - a * b
    g1 = -b / (sa * sb) - cov * (1.0 - 2.0 * a) / (2.0 * va**1.5 * sb)
    g2 = -a / (sa * sb) - cov * (1.0 - 2.0 * b) / (2.0 * vb**1.5 * sa)
    g3 = 1.0 / (sa * sb)
    return np.array([g1, g2, g3])


def _check_not_boundary(value: float) -> None:
    if abs(value) >= _BOUNDARY:
        raise DegenerateError("estimate at the boundary; asymptotic variance undefined")


def sigma2_chi_case1(sx: np.ndarray, sy: np.ndarray) -> VarianceEstimate:
    """Plug-in variance for the collapsed correlation with a one-sample collapse."""
    sx = np.asarray(sx, dtype=float)
    sy = np.asarray(sy, dtype=float)
    if sx.shape != sy.shape or sx.size < 3:
        raise UsageError("need equal-length samples with n >= 3")
    n = sx.size
    z = np.column_stack([sx, sy, sx**2, sy**2, sx * sy])
    m = z.mean(axis=0)
    grad = gradient_f5(m)
    value = f_corr(m)
    _check_not_boundary(value)
    sigma = np.cov(z.T)
    s2 = float(grad @ sigma @ grad)
    clipped = s2 < 0
    return VarianceEstimate(value=value, sigma2=max(s2, 0.0), case="one-sample", n=n, clipped=clipped)


def condensed_to_square(condensed: np.ndarray, n: int) -> np.ndarray:
    """Expand the i<j condensed pairwise vector to a symmetric n x n matrix (zero diagonal)."""
    condensed = np.asarray(condensed, dtype=float)
    if condensed.size != n * (n - 1) // 2:
        raise UsageError("condensed length does not match n")
    out = np.zeros((n, n))
    iu, ju = np.triu_indices(n, k=1)
    out[iu, ju] = condensed
    out[ju, iu] = condensed
    return out


def sigma2_chi_case2(sx_pairs: np.ndarray, sy_pairs: np.ndarray, n: int) -> VarianceEstimate:
    """Plug-in variance for the collapsed correlation with a pairwise collapse.

    Inputs are the condensed i<j pairwise collapsed values of both groups (the
    collapsing function is symmetric in its two arguments).
    """
    if n < 3:
        raise UsageError("need n >= 3")
    ax = condensed_to_square(sx_pairs, n)
    ay = condensed_to_square(sy_pairs, n)
    iu, ju = np.triu_indices(n, k=1)
    m = np.array(
        [
            ax[iu, ju].mean(),
            ay[iu, ju].mean(),
            (ax[iu, ju] ** 2).mean(),
            (ay[iu, ju] ** 2).mean(),
            (ax[iu, ju] * ay[iu, ju]).mean(),
        ]
    )
    grad = gradient_f5(m)
    value = f_corr(m)
    _check_not_boundary(value)
    denom = n - 1
    gx = (ax.sum(axis=1)) / denom
    gy = (ay.sum(axis=1)) / denom
    gxx = (ax**2).sum(axis=1) / denom
    gyy = (ay**2).sum(axis=1) / denom
    gxy = (ax * ay).sum(axis=1) / denom
    sigma = np.cov(np.column_stack([gx, gy, gxx, gyy, gxy]).T)
    s2 = 4.0 * float(grad @ sigma @ grad)
    clipped = s2 < 0
    return VarianceEstimate(value=value, sigma2=max(s2, 0.0), case="pairwise", n=n, clipped=clipped)


def tau_asymptotics_case1(sx: np.ndarray, sy: np.ndarray) -> VarianceEstimate:
    """Delta-method variance of tau for one-sample collapsed scalars.

    Kernels are symmetrized; the marginal concordance moments of continuous
    data are 1/2 by symmetry and their conditional series are constant, so the
    variance is carried by the joint-concordance slot.
    """
    sx = np.asarray(sx, dtype=float)
    sy = np.asarray(sy, dtype=float)
    if sx.shape != sy.shape or sx.size < 3:
        raise UsageError("need equal-length samples with n >= 3")
    n = sx.size
    lex = sx[:, None] <= sx[None, :]
    ley = sy[:, None] <= sy[None, :]
    sym_x = 0.5 * (lex + lex.T).astype(float)
    sym_y = 0.5 * (ley + ley.T).astype(float)
    sym_xy = 0.5 * (lex & ley).astype(float) + 0.5 * (lex & ley).T.astype(float)
    np.fill_diagonal(sym_x, 0.0)
    np.fill_diagonal(sym_y, 0.0)
    np.fill_diagonal(sym_xy, 0.0)
    denom = n * (n - 1)
    m = np.array([sym_x.sum() / denom, sym_y.sum() / denom, sym_xy.sum() / denom])
    if not (0 < m[0] < 1 and 0 < m[1] < 1):
        raise DegenerateError("concordance moments at the boundary")
    value = f_tau(m)
    _check_not_boundary(value)
    grad = gradient_f3(m)
    hx = sym_x.sum(axis=1) / (n - 1)
    hy = sym_y.sum(axis=1) / (n - 1)
    hxy = sym_xy.sum(axis=1) / (n - 1)
    sigma = np.cov(np.column_stack([hx, hy, hxy]).T)
    s2 = 4.0 * float(grad @ sigma @ grad)
    clipped = s2 < 0
    return VarianceEstimate(value=value, sigma2=max(s2, 0.0), case="one-sample", n=n, clipped=clipped)


def _four_tuples(n: int, budget: int, seed: int) -> np.ndarray:
    """All C(n,4) index 4-tuples when they fit the budget, else `budget` random ones."""
    total = math.comb(n, 4)
    if budget >= total:
        return np.array(list(combinations(range(n), 4)), dtype=np.int64)
    rng = np.random.default_rng(seed)
    out = np.empty((budget, 4), dtype=np.int64)
    for b in range(budget):
        out[b] = rng.choice(n, size=4, replace=False)
    out.sort(axis=1)
    return out


def tau_case2_moments(
    sx_square: np.ndarray,
    sy_square: np.ndarray,
    tuples: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Symmetrized 4-tuple concordance moments (m_x, m_y, m_xy) and per-index
    conditional series for the pairwise-collapse tau.

    For each 4-tuple, the kernel compares the pairwise collapse of one pairing
    against the other, averaged over the 3 pairings and both orders.
    """
    n = sx_square.shape[0]
    pairings = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
    i, j, k, l = tuples[:, 0], tuples[:, 1], tuples[:, 2], tuples[:, 3]
    idx = {0: i, 1: j, 2: k, 3: l}
    vals_x = np.zeros(tuples.shape[0])
    vals_y = np.zeros(tuples.shape[0])
    vals_xy = np.zeros(tuples.shape[0])
    for a, b, c, d in pairings:
        sxa = sx_square[idx[a], idx[b]]
        sxb = sx_square[idx[c], idx[d]]
        sya = sy_square[idx[a], idx[b]]
        syb = sy_square[idx[c], idx[d]]
        for one, two, oy1, oy2 in ((sxa, sxb, sya, syb), (sxb, sxa, syb, sya)):
            lx = (one <= two).astype(float)
            ly = (oy1 <= oy2).astype(float)
            vals_x += lx
            vals_y += ly
            vals_xy += lx * ly
    vals_x /= 6.0
    vals_y /= 6.0
    vals_xy /= 6.0
    m = np.array([vals_x.mean(), vals_y.mean(), vals_xy.mean()])
    sums = np.zeros((n, 3))
    counts = np.zeros(n)
    for col in range(4):
        np.add.at(sums[:, 0], tuples[:, col], vals_x)
        np.add.at(sums[:, 1], tuples[:, col], vals_y)
        np.add.at(sums[:, 2], tuples[:, col], vals_xy)
        np.add.at(counts, tuples[:, col], 1.0)
    if np.any(counts == 0):
        raise DegenerateError("incomplete-U budget too small: some index untouched")
    h = sums / counts[:, None]
    return m, h


def tau_asymptotics_case2(
    sx_pairs: np.ndarray,
    sy_pairs: np.ndarray,
    n: int,
    budget: int | None = None,
    seed: int = 0,
) -> VarianceEstimate:
    """Delta-method variance of tau for pairwise collapses via (incomplete) U-statistics."""
    if n < 5:
        raise UsageError("need n >= 5")
    if budget is None:
        budget = min(math.comb(n, 4), 200_000)
    if budget < 1:
        raise UsageError("tuple budget must be >= 1")
    ax = condensed_to_square(sx_pairs, n)
    ay = condensed_to_square(sy_pairs, n)
    tuples = _four_tuples(n, budget, seed)
    m, h = tau_case2_moments(ax, ay, tuples)
    if not (0 < m[0] < 1 and 0 < m[1] < 1):
        raise DegenerateError("concordance moments at the boundary")
    value = f_tau(m)
    _check_not_boundary(value)
    grad = gradient_f3(m)
    sigma = np.cov(h.T)
    s2 = 16.0 * float(grad @ sigma @ grad)
    clipped = s2 < 0
    return VarianceEstimate(value=value, sigma2=max(s2, 0.0), case="pairwise", n=n, clipped=clipped)


def bootstrap_ci(
    data: GroupedData,
    estimator: Callable[[GroupedData], float],
    n_boot: int = 1000,
    level: float = 0.95,
    seed: int = 0,
) -> tuple[float, float, float, np.ndarray]:
    """Pairs bootstrap: resample rows, recompute the estimator, percentile interval.

    Returns (point estimate, lo, hi, replicate values). Estimator failures in
    more than 5% of the resamples abort with diagnostics.
    """
    if n_boot < 100:
        raise UsageError("bootstrap needs B >= 100")
    if not 0.0 < level < 1.0:
        raise UsageError("level must lie in (0, 1)")
    point = estimator(data)
    rng = np.random.default_rng(seed)
    n = data.n
    reps = []
    failures = 0
    for _ in range(n_boot):
        idx = rng.integers(0, n, size=n)
        resampled = GroupedData(
            values=data.values[idx], groups=data.groups, column_names=data.column_names
        )
        try:
            reps.append(estimator(resampled))
        except DegenerateError:
            failures += 1
    if failures > 0.05 * n_boot:
        raise DegenerateError(
            f"bootstrap estimator failed in {failures}/{n_boot} resamples (> 5%)"
        )
    reps_arr = np.asarray(reps, dtype=float)
    alpha = 1.0 - level
    lo = float(np.quantile(reps_arr, alpha / 2.0))
    hi = float(np.quantile(reps_arr, 1.0 - alpha / 2.0))
    lo = min(lo, point)
    hi = max(hi, point)
    return point, lo, hi, reps_arr

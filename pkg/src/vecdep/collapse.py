"""Collapsing functions: weighted/extreme averages, extrema, pairwise distances,
kernel similarities, the multivariate-rank indicator and the empirical PIT."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist

from .core import CollapsedSample, GroupedData, has_ties, pit_pseudo_observations, pseudo_observations
from .errors import DegenerateError, UsageError

__all__ = [
    "CollapseSpec",
    "ONE_SAMPLE_KINDS",
    "PAIRWISE_KINDS",
    "weighted_average",
    "extreme_average",
    "pairwise_distance",
    "kernel_similarity",
    "multivariate_rank_indicator",
    "collapse_group",
    "pair_indices",
]

ONE_SAMPLE_KINDS = {"weighted-average", "extreme-average", "maximum", "minimum", "pit"}
PAIRWISE_KINDS = {"distance", "kernel", "multivariate-rank"}
_METRICS = {"euclidean", "manhattan", "canberra", "minkowski"}
_KERNELS = {"linear", "polynomial", "gaussian", "von-mises"}


@dataclass(frozen=True)
class CollapseSpec:
    """Which collapsing function to apply to a group, with its parameters."""

    kind: str
    weights: tuple[float, ...] | None = None  # weighted-average
    m: int = 1  # extreme-average
    direction: str = "largest"  # extreme-average
    metric: str = "euclidean"  # distance
    order: float = 3.0  # minkowski order r
    kernel: str = "gaussian"  # kernel family
    degree: int = 2  # polynomial kernel
    sigma: float | None = None  # gaussian kernel; None -> median heuristic
    kappa: tuple[float, ...] | None = None  # von Mises concentration per coordinate
    rank_on_margins: bool = False

    def __post_init__(self):
        if self.kind not in ONE_SAMPLE_KINDS | PAIRWISE_KINDS:
            raise UsageError(f"unknown collapse kind {self.kind!r}")
        if self.weights is not None and abs(sum(self.weights) - 1.0) > 1e-12:
            raise UsageError("weights must sum to 1")
        if self.kind == "extreme-average":
            if self.m < 1:
                raise UsageError("extreme-average needs m >= 1")
            if self.direction not in ("largest", "smallest"):
                raise UsageError("direction must be 'largest' or 'smallest'")
        if self.kind == "distance":
            if self.metric not in _METRICS:
                raise UsageError(f"unknown distance metric {self.metric!r}")
            if self.metric == "minkowski" and self.order < 1:
                raise UsageError("Minkowski order must be >= 1")
        if self.kind == "kernel":
            if self.kernel not in _KERNELS:
                raise UsageError(f"unknown kernel {self.kernel!r}")
            if self.kernel == "polynomial" and self.degree < 1:
                raise UsageError("polynomial degree must be >= 1")
            if self.sigma is not None and self.sigma <= 0:
                raise UsageError("gaussian kernel needs sigma > 0")

    @property
    def arity(self) -> str:
        return "one-sample" if self.kind in ONE_SAMPLE_KINDS else "pairwise"


def weighted_average(x: np.ndarray, w: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if x.shape != w.shape:
        raise UsageError("weight vector length must match the coordinate count")
    if abs(w.sum() - 1.0) > 1e-12:
        raise UsageError("weights must sum to 1")
    return float(w @ x)


def extreme_average(x: np.ndarray, m: int, direction: str = "largest") -> float:
    x = np.asarray(x, dtype=float)
    p = x.size
    if not 1 <= m <= p:
        raise UsageError(f"m={m} out of range 1..{p}")
    s = np.sort(x)
    return float(s[-m:].mean() if direction == "largest" else s[:m].mean())


def pairwise_distance(x: np.ndarray, y: np.ndarray, metric: str = "euclidean", order: float = 3.0) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise UsageError("length mismatch")
    if metric == "euclidean":
        return float(np.sqrt(np.sum((x - y) ** 2)))
    if metric == "manhattan":
        return float(np.sum(np.abs(x - y)))
    if metric == "canberra":
        num = np.abs(x - y)
        den = np.abs(x) + np.abs(y)
        terms = np.divide(num, den, out=np.zeros_like(num), where=den != 0)
        return float(terms.sum())
    if metric == "minkowski":
        if order < 1:
            raise UsageError("Minkowski order must be >= 1")
        return float(np.sum(np.abs(x - y) ** order) ** (1.0 / order))
    raise UsageError(f"unknown metric {metric!r}")


def kernel_similarity(x: np.ndarray, y: np.ndarray, spec: CollapseSpec) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise UsageError("length mismatch")
    if spec.kernel == "linear":
        return float(x @ y)
    if spec.kernel == "polynomial":
        return float((1.0 + x @ y) ** spec.degree)
    if spec.kernel == "gaussian":
        sigma = spec.sigma
        if sigma is None:
            raise UsageError("gaussian kernel needs sigma (resolved from data in collapse_group)")
        return float(np.exp(-np.sum((x - y) ** 2) / (2.0 * sigma**2)))
    if spec.kernel == "von-mises":
        if spec.kappa is None or len(spec.kappa) != x.size:
            raise UsageError("von Mises kernel needs a kappa vector of the group dimension")
        kap = np.asarray(spec.kappa, dtype=float)
        return float(np.exp(np.sum(kap * np.cos(x - y))))
    raise UsageError(f"unknown kernel {spec.kernel!r}")


def multivariate_rank_indicator(x: np.ndarray, y: np.ndarray) -> int:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise UsageError("length mismatch")
    return int(np.all(x <= y))


def pair_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Fixed (i, j), i < j enumeration in lexicographic order, shared by all groups."""
    iu, ju = np.triu_indices(n, k=1)
    return iu, ju


def _median_pairwise_distance(block: np.ndarray) -> float:
    d = pdist(block, metric="euclidean")
    med = float(np.median(d)) if d.size else 0.0
    if med <= 0:
        raise DegenerateError("median pairwise distance is zero; specify sigma explicitly")
    return med


def collapse_group(data: GroupedData, group: str, spec: CollapseSpec, seed: int | None = None) -> CollapsedSample:
    """Collapse one group of columns to a CollapsedSample.

    One-sample kinds produce k = n values; pairwise kinds produce the
    n(n-1)/2 values enumerated over i < j in lexicographic pair order.
    """
    block = np.array(data.group_matrix(group), dtype=float)
    n, p = block.shape
    ties = any(has_ties(block[:, j]) for j in range(p))
    if spec.rank_on_margins:
        block = np.column_stack([pseudo_observations(block[:, j]) for j in range(p)])

    if spec.kind == "weighted-average":
        w = np.asarray(spec.weights if spec.weights is not None else np.full(p, 1.0 / p), dtype=float)
        if w.size != p:
            raise UsageError(f"weights length {w.size} != group dimension {p}")
        if abs(w.sum() - 1.0) > 1e-12:
            raise UsageError("weights must sum to 1")
        vals = block @ w
    elif spec.kind in ("maximum", "minimum", "extreme-average"):
        m = 1 if spec.kind in ("maximum", "minimum") else spec.m
        direction = (
            "largest" if spec.kind == "maximum" else "smallest" if spec.kind == "minimum" else spec.direction
        )
        if not 1 <= m <= p:
            raise UsageError(f"m={m} out of range 1..{p}")
        s = np.sort(block, axis=1)
        vals = s[:, -m:].mean(axis=1) if direction == "largest" else s[:, :m].mean(axis=1)
    elif spec.kind == "pit":
        vals = pit_pseudo_observations(block)
    elif spec.kind == "distance":
        if spec.metric == "canberra":
            iu, ju = pair_indices(n)
            num = np.abs(block[iu] - block[ju])
            den = np.abs(block[iu]) + np.abs(block[ju])
            vals = np.divide(num, den, out=np.zeros_like(num), where=den != 0).sum(axis=1)
        elif spec.metric == "minkowski":
            vals = pdist(block, metric="minkowski", p=spec.order)
        else:
            vals = pdist(block, metric="cityblock" if spec.metric == "manhattan" else spec.metric)
    elif spec.kind == "kernel":
        iu, ju = pair_indices(n)
        if spec.kernel == "linear":
            vals = np.sum(block[iu] * block[ju], axis=1)
        elif spec.kernel == "polynomial":
            vals = (1.0 + np.sum(block[iu] * block[ju], axis=1)) ** spec.degree
        elif spec.kernel == "gaussian":
            sigma = spec.sigma if spec.sigma is not None else _median_pairwise_distance(block)
            d2 = pdist(block, metric="sqeuclidean")
            vals = np.exp(-d2 / (2.0 * sigma**2))
        else:  # von Mises
            if spec.kappa is None or len(spec.kappa) != p:
                raise UsageError("von Mises kernel needs a kappa vector of the group dimension")
            kap = np.asarray(spec.kappa, dtype=float)
            vals = np.exp(np.sum(kap * np.cos(block[iu] - block[ju]), axis=1))
    elif spec.kind == "multivariate-rank":
        iu, ju = pair_indices(n)
        vals = np.all(block[iu] <= block[ju], axis=1).astype(float)
    else:  # pragma: no cover - guarded by CollapseSpec
        raise UsageError(f"unknown collapse kind {spec.kind!r}")

    return CollapsedSample(values=np.asarray(vals, dtype=float), arity=spec.arity, source_n=n, ties=ties)

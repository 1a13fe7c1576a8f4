"""Domain types, ranks, pseudo-observations and multivariate PIT pseudo-observations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from .errors import DataError, UsageError

__all__ = [
    "GroupedData",
    "CollapsedSample",
    "ranks",
    "has_ties",
    "pseudo_observations",
    "pit_pseudo_observations",
]


@dataclass(frozen=True)
class GroupedData:
    """An n x d data matrix with a named partition of its columns into groups.

    ``groups`` maps each group name to a list of column indices; the lists are
    non-empty, disjoint and reference columns of ``values``.
    """

    values: np.ndarray
    groups: list[tuple[str, list[int]]]
    column_names: list[str] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise DataError("data matrix must be two-dimensional")
        n, d = values.shape
        if n < 2:
            raise DataError("need at least 2 observations")
        seen: set[int] = set()
        names: set[str] = set()
        for name, cols in self.groups:
            if name in names:
                raise UsageError(f"duplicate group name {name!r}")
            names.add(name)
            if not cols:
                raise UsageError(f"group {name!r} has no columns")
            for c in cols:
                if not 0 <= c < d:
                    raise UsageError(f"group {name!r} references column {c} outside 0..{d - 1}")
                if c in seen:
                    raise UsageError(f"column {c} assigned to more than one group")
                seen.add(c)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]

    def group_names(self) -> list[str]:
        return [name for name, _ in self.groups]

    def group_columns(self, name: str) -> list[int]:
        for gname, cols in self.groups:
            if gname == name:
                return list(cols)
        raise UsageError(f"unknown group {name!r}")

    def group_matrix(self, name: str) -> np.ndarray:
        """Return the n x p sub-matrix of one group (a view, never a copy where possible)."""
        return self.values[:, self.group_columns(name)]


@dataclass(frozen=True)
class CollapsedSample:
    """Collapsed values of one group: k = n for one-sample collapses, n(n-1)/2 for pairwise."""

    values: np.ndarray
    arity: str  # "one-sample" | "pairwise"
    source_n: int
    ties: bool = field(default=False, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        n = self.source_n
        expect = n if self.arity == "one-sample" else n * (n - 1) // 2
        if values.shape != (expect,):
            raise UsageError(
                f"collapsed length {values.shape} does not match arity {self.arity} for n={n}"
            )

    @property
    def k(self) -> int:
        return self.values.shape[0]


def ranks(x: np.ndarray) -> np.ndarray:
    """1-based ranks with the average convention for ties."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DataError("ranks requires a non-empty 1-d input")
    return rankdata(x, method="average")


def has_ties(x: np.ndarray) -> bool:
    x = np.asarray(x, dtype=float)
    return np.unique(x).size < x.size


def pseudo_observations(x: np.ndarray) -> np.ndarray:
    """Pseudo-observations rank/(k+1), mapping a sample onto the open unit interval."""
    r = ranks(x)
    return r / (r.size + 1)


def _pit_counts_2d(block: np.ndarray) -> np.ndarray:
    """Componentwise-domination counts for p=2 in O(n log n) via a Fenwick tree."""
    n = block.shape[0]
    x1, x2 = block[:, 0], block[:, 1]
    uniq2 = np.unique(x2)
    r2 = np.searchsorted(uniq2, x2) + 1  # 1-based Fenwick positions
    m = uniq2.size
    tree = [0] * (m + 1)

    def update(i: int) -> None:
        while i <= m:
            tree[i] += 1
            i += i & (-i)

    def query(i: int) -> int:
        s = 0
        while i > 0:
            s += tree[i]
            i -= i & (-i)
        return s

    order = np.lexsort((x2, x1))
    counts = np.zeros(n, dtype=np.int64)
    i = 0
    while i < n:
        j = i
        while j < n and x1[order[j]] == x1[order[i]]:
            j += 1
        batch = order[i:j]
        # points with strictly smaller x1 are already in the tree
        for idx in batch:
            counts[idx] = query(int(r2[idx]))
        # equal-x1 points dominate each other when their x2 is <=
        b2 = np.sort(x2[batch])
        for idx in batch:
            counts[idx] += int(np.searchsorted(b2, x2[idx], side="right"))
        for idx in batch:
            update(int(r2[idx]))
        i = j
    return counts - 1  # remove self


def pit_pseudo_observations(data: np.ndarray) -> np.ndarray:
    """Leave-one-out multivariate PIT pseudo-observations.

    w_i = #{k != i : row_k <= row_i componentwise} / (n - 1), with weak
    componentwise comparison.
    """
    data = np.atleast_2d(np.asarray(data, dtype=float))
    if data.shape[0] < 2:
        raise DataError("PIT pseudo-observations require n >= 2")
    n, p = data.shape
    if p == 1:
        x = data[:, 0]
        counts = np.searchsorted(np.sort(x), x, side="right") - 1
    elif p == 2:
        counts = _pit_counts_2d(data)
    else:
        counts = np.zeros(n, dtype=np.int64)
        chunk = max(1, int(2e7) // max(n, 1))
        for start in range(0, n, chunk):
            stop = min(start + chunk, n)
            dominated = np.all(data[None, :, :] <= data[start:stop, None, :], axis=2)
            counts[start:stop] = dominated.sum(axis=1) - 1
    return counts / (n - 1)

"""Rolling-window dependence series over time-ordered samples."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .collapse import CollapseSpec
from .core import GroupedData
from .errors import UsageError
from .measures import MeasureSpec
from .pipeline import estimate_dependence

__all__ = ["RollingRow", "rolling_dependence", "thread_count"]


def thread_count() -> int:
    """Worker cap for parallel window/panel evaluation (VECDEP_THREADS, default 1)."""
    raw = os.environ.get("VECDEP_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"VECDEP_THREADS must be an integer, got {raw!r}") from None
    return max(1, value)


@dataclass(frozen=True)
class RollingRow:
    window_end: int  # 1-based index of the last row in the window
    estimate: float
    std_error: float | None
    ci_lo: float | None
    ci_hi: float | None


def rolling_dependence(
    data: GroupedData,
    group_a: str,
    group_b: str,
    cspec: CollapseSpec,
    mspec: MeasureSpec,
    window: int,
    step: int = 1,
    ci: str = "none",
    level: float = 0.95,
    n_boot: int = 200,
    seed: int = 0,
) -> list[RollingRow]:
    """Recompute the dependence estimate on each window [t-W+1, t], t = W, W+s, ..."""
    n = data.n
    if window > n:
        raise UsageError(f"window {window} exceeds sample size {n}")
    if window < 10:
        raise UsageError("windows shorter than 10 give unstable estimates; refused")
    if step < 1:
        raise UsageError("step must be >= 1")
    ends = list(range(window, n + 1, step))

    def one(end: int) -> RollingRow:
        sub = GroupedData(
            values=data.values[end - window : end],
            groups=data.groups,
            column_names=data.column_names,
        )
        est = estimate_dependence(
            sub, group_a, group_b, cspec, mspec, ci=ci, level=level, n_boot=n_boot, seed=seed
        )
        return RollingRow(
            window_end=end,
            estimate=est.value,
            std_error=est.std_error,
            ci_lo=None if est.ci is None else est.ci[0],
            ci_hi=None if est.ci is None else est.ci[1],
        )

    workers = thread_count()
    if workers == 1:
        return [one(end) for end in ends]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, ends))  # ordering fixed by window index

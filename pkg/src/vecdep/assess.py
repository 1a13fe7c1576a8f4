"""Graphical independence assessment: collapse every group, form
pseudo-observations, and emit all pairwise panels with numeric summaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .collapse import CollapseSpec, collapse_group
from .core import GroupedData, pseudo_observations
from .errors import DegenerateError, UsageError
from .measures import spearman, tail_dependence, tau

__all__ = ["Panel", "AssessmentResult", "assess_independence", "render_svg"]


@dataclass(frozen=True)
class Panel:
    """One pair of pseudo-observation series, with association summaries."""

    group_a: str
    group_b: str
    u_a: np.ndarray
    u_b: np.ndarray
    spearman_rho: float | None
    kendall_tau: float | None
    tail_upper: float | None

    @property
    def k(self) -> int:
        return self.u_a.size


@dataclass(frozen=True)
class AssessmentResult:
    panels: list[Panel]
    k: int
    arity: str


def assess_independence(data: GroupedData, cspec: CollapseSpec, seed: int | None = None) -> AssessmentResult:
    """All G(G-1)/2 pseudo-observation panels under a single collapse spec.

    A single spec keeps the arity (and hence the pairing of collapsed indices)
    identical across groups.
    """
    names = data.group_names()
    if len(names) < 2:
        raise UsageError("assessment needs at least 2 groups")
    pseudo: dict[str, np.ndarray] = {}
    for name in names:
        sample = collapse_group(data, name, cspec, seed=seed)
        pseudo[name] = pseudo_observations(sample.values)
    k = next(iter(pseudo.values())).size
    panels = []
    for gi in range(len(names)):
        for hi in range(gi + 1, len(names)):
            ua, ub = pseudo[names[gi]], pseudo[names[hi]]
            try:
                rho = spearman(ua, ub)
                t = tau(ua, ub)
                lam = tail_dependence(ua, ub, side="upper")
            except DegenerateError:
                rho = t = lam = None
            panels.append(
                Panel(
                    group_a=names[gi],
                    group_b=names[hi],
                    u_a=ua,
                    u_b=ub,
                    spearman_rho=rho,
                    kendall_tau=t,
                    tail_upper=lam,
                )
            )
    return AssessmentResult(panels=panels, k=k, arity=cspec.arity)


def render_svg(result: AssessmentResult, cell: int = 220, radius: float = 1.6) -> str:
    """Minimal static SVG: a lower-triangle grid of scatter cells, one point per pair."""
    names: list[str] = []
    for panel in result.panels:
        for name in (panel.group_a, panel.group_b):
            if name not in names:
                names.append(name)
    pos = {name: i for i, name in enumerate(names)}
    g = len(names)
    pad = 30
    size = pad + g * cell
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for panel in result.panels:
        col = pos[panel.group_a]
        row = pos[panel.group_b]
        x0 = pad + col * cell
        y0 = pad + (row - 1) * cell
        lines.append(
            f'<rect x="{x0}" y="{y0}" width="{cell}" height="{cell}" '
            'fill="none" stroke="black" stroke-width="1"/>'
        )
        lines.append(
            f'<text x="{x0 + 4}" y="{y0 + 14}" font-size="11" font-family="sans-serif">'
            f"{panel.group_a} vs {panel.group_b}</text>"
        )
        for ua, ub in zip(panel.u_a, panel.u_b):
            cx = x0 + ua * cell
            cy = y0 + (1.0 - ub) * cell
            lines.append(f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{radius}" fill="black"/>')
    lines.append("</svg>")
    return "\n".join(lines)

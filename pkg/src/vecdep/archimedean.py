"""Archimedean generators (Clayton, Gumbel, independence), their derivatives,
frailty-based samplers, and synthetic dependence scenarios."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lgamma

import numpy as np

from .core import GroupedData
from .errors import UsageError

__all__ = [
    "ArchimedeanGenerator",
    "ScenarioSpec",
    "K_MAX",
    "psi",
    "psi_inv",
    "psi_deriv",
    "log_neg_psi_deriv",
    "sample_frailty",
    "sample_archimedean",
    "tau_to_theta",
    "sample_scenario",
]

K_MAX = 64

_FAMILIES = {"clayton", "gumbel", "independence"}


@dataclass(frozen=True)
class ArchimedeanGenerator:
    """A completely monotone Archimedean generator psi with parameter theta."""

    family: str
    theta: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise UsageError(f"unknown Archimedean family {self.family!r}")
        if self.family == "clayton" and self.theta <= 0:
            raise UsageError("Clayton requires theta > 0")
        if self.family == "gumbel" and self.theta < 1:
            raise UsageError("Gumbel requires theta >= 1")


@dataclass(frozen=True)
class ScenarioSpec:
    """Synthetic two-group scenarios with uniform margins."""

    kind: str  # independent-groups | comonotone | countermonotone
    p: int = 1
    q: int = 1

    def __post_init__(self):
        if self.kind not in ("independent-groups", "comonotone", "countermonotone"):
            raise UsageError(f"unknown scenario {self.kind!r}")
        if self.p < 1 or self.q < 1:
            raise UsageError("group dimensions must be >= 1")


def psi(gen: ArchimedeanGenerator, t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise UsageError("psi requires t >= 0")
    if gen.family == "clayton":
        out = (1.0 + t) ** (-1.0 / gen.theta)
    elif gen.family == "gumbel":
        out = np.exp(-(t ** (1.0 / gen.theta)))
    else:
        out = np.exp(-t)
    return out if out.shape else float(out)


def psi_inv(gen: ArchimedeanGenerator, u):
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u > 1)):
        raise UsageError("psi_inv requires u in (0, 1]")
    if gen.family == "clayton":
        out = u ** (-gen.theta) - 1.0
    elif gen.family == "gumbel":
        out = (-np.log(u)) ** gen.theta
    else:
        out = -np.log(u)
    out = np.maximum(out, 0.0)  # guard tiny negative round-off at u=1
    return out if out.shape else float(out)


@lru_cache(maxsize=32)
def _gumbel_coeffs(alpha: float, k_max: int) -> list[np.ndarray]:
    """Positive coefficient rows b[k][j], j=1..k, of the expansion

        (-1)^k psi^(k)(t) = psi(t) * t^(-k) * sum_j b[k][j] * t^(j*alpha).

    Derived from the derivative recurrence of exp(-t^alpha); all entries are
    nonnegative for alpha in (0, 1].
    """
    rows: list[np.ndarray] = [np.array([1.0]), np.array([alpha])]
    for k in range(1, k_max):
        prev = rows[k]  # b[k][j], j = 1..k
        new = np.zeros(k + 1)
        j = np.arange(1, k + 2)
        new[: k] += (k - alpha * j[: k]) * prev
        new[1:] += alpha * prev
        rows.append(new)
    return rows


def log_neg_psi_deriv(gen: ArchimedeanGenerator, k: int, t):
    """log of (-1)^k psi^(k)(t); the sign of psi^(k) is (-1)^k by complete monotonicity."""
    if k < 0:
        raise UsageError("derivative order must be >= 0")
    if k > K_MAX:
        raise UsageError(f"derivative order {k} exceeds supported maximum {K_MAX}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise UsageError("derivatives require t >= 0")
    if gen.family == "independence":
        out = -t
    elif gen.family == "clayton":
        a = 1.0 / gen.theta
        out = lgamma(a + k) - lgamma(a) - (a + k) * np.log1p(t)
    else:  # gumbel
        alpha = 1.0 / gen.theta
        if k == 0:
            out = -(t**alpha)
        else:
            coeffs = _gumbel_coeffs(alpha, K_MAX)[k]  # b[j-1] for j=1..k
            with np.errstate(divide="ignore"):
                logt = np.log(t)
            j = np.arange(1, k + 1)
            # logsumexp over j of log(b_j) + j*alpha*log(t), then -t^alpha - k*log(t)
            logb = np.log(coeffs[: k])
            terms = logb[:, None] + (j * alpha)[:, None] * np.atleast_1d(logt)[None, :]
            mx = terms.max(axis=0)
            s = mx + np.log(np.exp(terms - mx).sum(axis=0))
            out = -(np.atleast_1d(t) ** alpha) - k * np.atleast_1d(logt) + s
            out = out.reshape(t.shape)
    out = np.asarray(out, dtype=float)
    return out if out.shape else float(out)


def psi_deriv(gen: ArchimedeanGenerator, k: int, t):
    """k-th derivative of psi at t > 0 (k = 0 allowed; sign is (-1)^k)."""
    t_arr = np.asarray(t, dtype=float)
    if k > 0 and np.any(t_arr <= 0):
        raise UsageError("higher derivatives require t > 0")
    out = (-1.0) ** k * np.exp(log_neg_psi_deriv(gen, k, t_arr))
    return out if np.asarray(out).shape else float(out)


def sample_frailty(gen: ArchimedeanGenerator, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw the mixing variable V with Laplace transform psi."""
    if gen.family == "clayton":
        return rng.gamma(shape=1.0 / gen.theta, scale=1.0, size=n)
    if gen.family == "gumbel":
        alpha = 1.0 / gen.theta
        if alpha == 1.0:
            return np.ones(n)
        # Chambers-Mallows-Stuck positive stable with E[exp(-tV)] = exp(-t^alpha)
        u = rng.uniform(0.0, np.pi, size=n)
        w = rng.exponential(size=n)
        return (
            np.sin(alpha * u) / np.sin(u) ** (1.0 / alpha) * (np.sin((1.0 - alpha) * u) / w) ** ((1.0 - alpha) / alpha)
        )
    return np.ones(n)


def sample_archimedean(gen: ArchimedeanGenerator, d: int, n: int, seed: int) -> np.ndarray:
    """n draws from the d-dimensional Archimedean copula via the frailty representation."""
    if d < 1 or n < 1:
        raise UsageError("need d >= 1 and n >= 1")
    rng = np.random.default_rng(seed)
    v = sample_frailty(gen, n, rng)
    e = rng.exponential(size=(n, d))
    return psi(gen, e / v[:, None])


def tau_to_theta(family: str, tau: float) -> float:
    """Invert the standard Kendall-tau formulas for Clayton and Gumbel."""
    if family == "independence":
        if abs(tau) > 1e-12:
            raise UsageError("independence only attains tau = 0")
        return 1.0
    if not 0 < tau < 1:
        raise UsageError("tau must lie in (0, 1) for Clayton/Gumbel")
    if family == "clayton":
        return 2.0 * tau / (1.0 - tau)
    if family == "gumbel":
        return 1.0 / (1.0 - tau)
    raise UsageError(f"unknown family {family!r}")


def sample_scenario(spec: ScenarioSpec, n: int, seed: int) -> GroupedData:
    """Two-group synthetic scenarios with uniform margins (groups 'x' and 'y')."""
    rng = np.random.default_rng(seed)
    p, q = spec.p, spec.q
    if spec.kind == "independent-groups":
        values = rng.uniform(size=(n, p + q))
    else:
        u = rng.uniform(size=n)
        xblock = np.tile(u[:, None], (1, p))
        yv = u if spec.kind == "comonotone" else 1.0 - u
        yblock = np.tile(yv[:, None], (1, q))
        values = np.column_stack([xblock, yblock])
    groups = [("x", list(range(p))), ("y", list(range(p, p + q)))]
    names = [f"x{j + 1}" for j in range(p)] + [f"y{j + 1}" for j in range(q)]
    return GroupedData(values=values, groups=groups, column_names=names)

"""Directional smoothness functions between point pairs.

Three upper-bound constants are provided for a pair (x, y):

* ``point_wise_D``: 2||grad f(y) - grad f(x)|| / ||y - x||, from two gradients.
* ``path_wise_A``: supremum over the chord of the quotient
  <grad f(x + t(y-x)) - grad f(x), y - x> / (t ||y - x||^2).
* ``optimal_H``: |f(y) - f(x) - <grad f(x), y - x>| / (||y - x||^2 / 2), the
  smallest constant for which the quadratic upper bound holds at the pair.

``directional_mu`` is the infimum analogue of A and yields the matching
quadratic lower bound for convex objectives.

Quadratics admit closed forms (the chord quotient is constant in t); other
objectives are handled by a log-uniform grid in t plus golden-section
refinement of the best bracket.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import CoincidentPointsError
from .problems import QuadraticObjective

__all__ = [
    "SmoothnessKind",
    "SmoothnessEstimate",
    "DirectionalMu",
    "ChordConfig",
    "point_wise_D",
    "path_wise_A",
    "optimal_H",
    "directional_mu",
    "estimate",
]

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class SmoothnessKind(enum.Enum):
    POINT_WISE_D = "D"
    PATH_WISE_A = "A"
    OPTIMAL_H = "H"
    GLOBAL_L = "L"


@dataclass(frozen=True)
class SmoothnessEstimate:
    value: float
    kind: SmoothnessKind
    eval_points: int = 1
    refined: bool = False


@dataclass(frozen=True)
class DirectionalMu:
    value: float
    eval_points: int = 1


@dataclass(frozen=True)
class ChordConfig:
    """Grid/refinement settings for the sup/inf over the chord.

    ``grid_points`` log-uniform nodes on [t_min, 1], then golden-section
    refinement of the best bracket to ``refine_tol`` in t. ``force_grid``
    disables the quadratic closed form (used to cross-check it).
    """

    grid_points: int = 65
    refine_tol: float = 1e-10
    t_min: float = 1e-6
    force_grid: bool = False


_DEFAULT_CONFIG = ChordConfig()


def _separation(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dist = float(np.linalg.norm(y - x))
    if dist <= 1e-14 * (1.0 + float(np.linalg.norm(x))):
        raise CoincidentPointsError(
            f"points coincide (distance {dist:.3e}); directional quantities undefined"
        )
    return x, y, dist


def point_wise_D(obj, x, y) -> SmoothnessEstimate:
    """Point-wise directional smoothness: 2||grad diff|| / distance."""
    x, y, dist = _separation(x, y)
    gx = obj.gradient(x)
    gy = obj.gradient(y)
    value = 2.0 * float(np.linalg.norm(gy - gx)) / dist
    return SmoothnessEstimate(value, SmoothnessKind.POINT_WISE_D, eval_points=2)


def optimal_H(obj, x, y) -> SmoothnessEstimate:
    """Optimal point-wise smoothness: the exact quadratic-model error, scaled.

    Keeps the absolute value, so the estimate is well defined for non-convex
    objectives too (where the first-order gap may be negative).
    """
    x, y, dist = _separation(x, y)
    gap = obj.value(y) - obj.value(x) - float(obj.gradient(x) @ (y - x))
    value = abs(gap) / (0.5 * dist * dist)
    return SmoothnessEstimate(value, SmoothnessKind.OPTIMAL_H, eval_points=2)


def _chord_quotient(obj, x, delta, dist2, ts):
    """q(t) = <grad f(x + t*delta) - grad f(x), delta> / (t ||delta||^2)."""
    g0 = obj.gradient(x)
    X = x[None, :] + np.asarray(ts)[:, None] * delta[None, :]
    G = obj.gradient_many(X)
    return ((G - g0[None, :]) @ delta) / (np.asarray(ts) * dist2)


def _golden_section(fun, a, b, tol, maximize):
    sign = -1.0 if maximize else 1.0
    lo, hi = a, b
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = sign * fun(c), sign * fun(d)
    evals = 2
    while hi - lo > tol:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = sign * fun(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = sign * fun(d)
        evals += 1
    t = 0.5 * (lo + hi)
    return t, sign * min(fc, fd), evals


def _chord_extremum(obj, x, y, config, maximize):
    x, y, dist = _separation(x, y)
    if isinstance(obj, QuadraticObjective) and not config.force_grid:
        delta = y - x
        value = float(delta @ obj.matvec(delta)) / (dist * dist)
        return value, 1, False
    delta = y - x
    dist2 = dist * dist
    ts = np.geomspace(config.t_min, 1.0, config.grid_points)
    q = _chord_quotient(obj, x, delta, dist2, ts)
    best = int(np.argmax(q)) if maximize else int(np.argmin(q))
    lo = ts[max(best - 1, 0)]
    hi = ts[min(best + 1, len(ts) - 1)]

    def q_at(t):
        return float(_chord_quotient(obj, x, delta, dist2, np.array([t]))[0])

    t_star, v_star, extra = _golden_section(q_at, lo, hi, config.refine_tol, maximize)
    value = max(v_star, float(q[best])) if maximize else min(v_star, float(q[best]))
    return value, config.grid_points + extra, True


def path_wise_A(obj, x, y, config: ChordConfig | None = None) -> SmoothnessEstimate:
    """Path-wise directional smoothness: sup of the chord quotient over t."""
    config = config or _DEFAULT_CONFIG
    value, evals, refined = _chord_extremum(obj, x, y, config, maximize=True)
    return SmoothnessEstimate(value, SmoothnessKind.PATH_WISE_A, evals, refined)


def directional_mu(obj, x, y, config: ChordConfig | None = None) -> DirectionalMu:
    """Directional strong convexity: inf of the chord quotient over t.

    Requires a convex objective; tiny negative grid values (float noise) are
    clamped to zero.
    """
    if not getattr(obj, "is_convex", False):
        raise ValueError("directional_mu requires an objective flagged convex")
    config = config or _DEFAULT_CONFIG
    value, evals, refined = _chord_extremum(obj, x, y, config, maximize=False)
    return DirectionalMu(max(value, 0.0), evals)


def estimate(obj, x, y, kind: SmoothnessKind, config: ChordConfig | None = None) -> SmoothnessEstimate:
    """Dispatch on the smoothness kind; GLOBAL_L ignores the pair."""
    if kind is SmoothnessKind.POINT_WISE_D:
        return point_wise_D(obj, x, y)
    if kind is SmoothnessKind.PATH_WISE_A:
        return path_wise_A(obj, x, y, config)
    if kind is SmoothnessKind.OPTIMAL_H:
        return optimal_H(obj, x, y)
    if kind is SmoothnessKind.GLOBAL_L:
        return SmoothnessEstimate(obj.smoothness_constant(), SmoothnessKind.GLOBAL_L)
    raise ValueError(f"unknown smoothness kind {kind!r}")

"""Step-size rules and the safeguarded root-finder for strongly adapted steps.

A step-size eta is *strongly adapted* to a smoothness function M at x when it
solves the implicit equation eta = 1 / M(x, x - eta * grad f(x)). On
quadratics this has closed forms: ||g|| / (2 ||Bg||) for the point-wise
smoothness (Dai's step) and g'g / g'Bg for the path-wise smoothness (the
Cauchy step). For general objectives the equation is solved numerically:
safeguarded Newton on a scalar residual for D (one Hessian-vector product per
Newton step), bisection for A.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import RayMinimizationError, StepSizeError, UnsupportedObjectiveError
from .problems import QuadraticObjective
from .smoothness import ChordConfig, SmoothnessKind, path_wise_A

__all__ = [
    "RootSolveConfig",
    "polyak_step",
    "dai_step",
    "cauchy_step",
    "solve_strongly_adapted",
    "FixedHorizon",
    "Anytime",
    "normalized_schedule_step",
    "StepSizeRule",
    "ConstantStep",
    "InverseLStep",
    "StronglyAdaptedStep",
    "PolyakStep",
    "CauchyStep",
    "DaiStep",
]

_MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class RootSolveConfig:
    """Settings for the strongly-adapted step solver.

    ``tol`` bounds the residual |eta * M(x, x - eta g) - 1| of the returned
    step. The bracket grows geometrically by ``bracket_growth`` from the
    initial guess 1 / (2 D(x, x - eps g)).
    """

    tol: float = 1e-10
    max_newton: int = 50
    max_bisect: int = 200
    bracket_growth: float = 2.0
    probe_eps: float = 1e-6

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.bracket_growth <= 1:
            raise ValueError("bracket_growth must exceed 1")


def polyak_step(obj, x, gamma, f_star) -> float:
    """Polyak step: gamma * (f(x) - f*) / ||grad f(x)||^2.

    Returns 0 at the optimum (zero gap, zero gradient). Raises when f(x) sits
    below f_star beyond round-off, or when the gradient vanishes while the
    gap is positive -- both signal an inconsistent f_star.
    """
    if not 0.0 < gamma < 2.0:
        raise StepSizeError(f"polyak gamma must be in (0, 2), got {gamma}")
    fx = obj.value(x)
    gap = fx - f_star
    slack = 1e-12 * (1.0 + abs(f_star))
    if gap < -slack:
        raise StepSizeError(
            f"f(x) = {fx!r} is below f_star = {f_star!r} beyond tolerance; "
            "inconsistent reference value"
        )
    g = obj.gradient(x)
    gn2 = float(g @ g)
    if gn2 == 0.0:
        if gap > slack:
            raise StepSizeError(
                "zero gradient with a positive optimality gap; inconsistent f_star"
            )
        return 0.0
    return gamma * max(gap, 0.0) / gn2


def dai_step(obj, x) -> float:
    """Dai's step ||g|| / (2 ||Bg||): strongly adapted to the point-wise
    smoothness on quadratics, where D(x, x - eta g) does not depend on eta."""
    if not isinstance(obj, QuadraticObjective):
        raise UnsupportedObjectiveError("dai_step is defined for quadratics only")
    g = obj.gradient(x)
    gn = float(np.linalg.norm(g))
    if gn == 0.0:
        raise StepSizeError("zero gradient")
    bg = float(np.linalg.norm(obj.matvec(g)))
    if bg == 0.0:
        raise StepSizeError("B grad = 0 with grad != 0: f is linear along the ray")
    return gn / (2.0 * bg)


def cauchy_step(obj, x) -> float:
    """Cauchy step g'g / g'Bg: the exact minimizer of eta -> f(x - eta g) and
    the strongly adapted step for the path-wise smoothness on quadratics."""
    if not isinstance(obj, QuadraticObjective):
        raise UnsupportedObjectiveError("cauchy_step is defined for quadratics only")
    g = obj.gradient(x)
    gn2 = float(g @ g)
    if gn2 == 0.0:
        raise StepSizeError("zero gradient")
    gbg = float(g @ obj.matvec(g))
    if gbg <= 0.0:
        raise StepSizeError("g'Bg = 0: flat direction, line minimum not attained")
    return gn2 / gbg


def _hvp_along(obj, point, g, g_at_point, eta):
    """Directional derivative d/d(eta) of grad f(x - eta g), i.e. -H(point) g.

    Falls back to a forward difference along g (relative step 1e-6) when the
    objective has no Hessian-vector product.
    """
    try:
        return -obj.hessian_vector_product(point, g)
    except UnsupportedObjectiveError:
        delta = 1e-6 * max(eta, 1e-12)
        g_shift = obj.gradient(point - delta * g)
        return (g_shift - g_at_point) / delta


def solve_strongly_adapted(obj, x, kind: SmoothnessKind, config: RootSolveConfig | None = None) -> float:
    """Solve eta = 1 / M(x, x - eta grad f(x)) for M in {D, A}.

    For D the equation is equivalent to the scalar root-finding problem
    ||grad f(x - eta g) - g|| = ||g|| / 2, solved by safeguarded Newton inside
    a sign-change bracket found by geometric growth. For A, plain bisection on
    phi(eta) = eta - 1 / A(x, x - eta g). Raises RayMinimizationError when the
    bracket search finds no sign change (the objective appears minimized along
    the ray, the existence dichotomy's other branch).
    """
    config = config or RootSolveConfig()
    x = np.asarray(x, dtype=float)
    g = obj.gradient(x)
    gn = float(np.linalg.norm(g))
    if gn == 0.0:
        raise StepSizeError("zero gradient: no direction to adapt along")
    if kind is SmoothnessKind.POINT_WISE_D:
        return _solve_adapted_D(obj, x, g, gn, config)
    if kind is SmoothnessKind.PATH_WISE_A:
        return _solve_adapted_A(obj, x, g, gn, config)
    raise ValueError(f"strongly adapted steps are defined for D and A, not {kind!r}")


def _solve_adapted_D(obj, x, g, gn, config):
    target = 0.5 * gn  # ||grad diff|| at the root, since eta * D = 2||diff||/||g||

    def grad_at(eta):
        return obj.gradient(x - eta * g)

    def h_of(diff_norm):
        return 0.5 * diff_norm * diff_norm - 0.5 * target * target

    eps = config.probe_eps
    d_probe = 2.0 * float(np.linalg.norm(grad_at(eps) - g)) / (eps * gn)
    eta = 1.0 / (2.0 * d_probe) if d_probe > 0.0 else 1.0

    # Establish h(lo) < 0 <= h(hi) by geometric shrink/growth.
    lo = eta
    diff = float(np.linalg.norm(grad_at(lo) - g))
    shrinks = 0
    while h_of(diff) >= 0.0:
        lo /= config.bracket_growth
        shrinks += 1
        if shrinks > _MAX_DOUBLINGS:
            raise StepSizeError("could not find a step with ||grad diff|| < ||g||/2")
        diff = float(np.linalg.norm(grad_at(lo) - g))
    hi = lo
    growths = 0
    while True:
        hi *= config.bracket_growth
        growths += 1
        if growths > _MAX_DOUBLINGS:
            raise RayMinimizationError(
                "no sign change after 60 bracket doublings: "
                "ray-minimization suspected"
            )
        diff = float(np.linalg.norm(grad_at(hi) - g))
        if h_of(diff) > 0.0:
            break

    eta = 0.5 * (lo + hi)
    newton_left = config.max_newton
    for _ in range(config.max_newton + config.max_bisect):
        g_eta = grad_at(eta)
        dvec = g_eta - g
        diff = float(np.linalg.norm(dvec))
        residual = 2.0 * diff / gn - 1.0  # = eta * D(x, x - eta g) - 1
        if abs(residual) <= config.tol:
            return eta
        if hi - lo <= 1e-14 * hi:
            # Bracket resolved to float precision: the residual measurement is
            # dominated by gradient round-off (tiny gradients near a
            # stationary point), and this eta is the best float64 can do.
            return eta
        h = h_of(diff)
        if h > 0.0:
            hi = eta
        else:
            lo = eta
        took_newton = False
        if newton_left > 0:
            dgrad = _hvp_along(obj, x - eta * g, g, g_eta, eta)
            hprime = float(dvec @ dgrad)
            if hprime != 0.0:
                cand = eta - h / hprime
                if lo < cand < hi:
                    eta = cand
                    took_newton = True
            newton_left -= 1
        if not took_newton:
            eta = 0.5 * (lo + hi)
    raise StepSizeError(
        f"adapted-D solve did not reach tol {config.tol:.1e} within the "
        "iteration budget"
    )


def _solve_adapted_A(obj, x, g, gn, config):
    chord = ChordConfig()

    def a_of(eta):
        return path_wise_A(obj, x, x - eta * g, chord).value

    def phi(eta):
        a = a_of(eta)
        if a <= 0.0:
            return -1.0  # flat so far: step is still too small
        return eta - 1.0 / a

    eps = config.probe_eps
    a0 = a_of(eps)
    lo = 1.0 / a0 if a0 > 0.0 else 1.0
    shrinks = 0
    while phi(lo) > 0.0:
        lo /= config.bracket_growth
        shrinks += 1
        if shrinks > _MAX_DOUBLINGS:
            raise StepSizeError("could not bracket from below: phi > 0 near 0")
    hi = lo
    growths = 0
    while True:
        hi *= config.bracket_growth
        growths += 1
        if growths > _MAX_DOUBLINGS:
            raise RayMinimizationError(
                "no sign change after 60 bracket doublings: "
                "ray-minimization suspected"
            )
        if phi(hi) > 0.0:
            break

    eta = lo
    for _ in range(config.max_bisect):
        mid = 0.5 * (lo + hi)
        a = a_of(mid)
        residual = mid * a - 1.0
        if abs(residual) <= config.tol or hi - lo <= 1e-14 * hi:
            return mid
        if residual > 0.0:
            hi = mid
        else:
            lo = mid
        eta = mid
    a = a_of(eta)
    if abs(eta * a - 1.0) <= config.tol:
        return eta
    raise StepSizeError(
        f"adapted-A bisection did not reach tol {config.tol:.1e} within "
        f"{config.max_bisect} iterations"
    )


@dataclass(frozen=True)
class FixedHorizon:
    """Constant schedule eta0 / sqrt(K) for a horizon K known in advance."""

    total: int

    def __post_init__(self):
        if self.total < 1:
            raise ValueError("horizon must be >= 1")


@dataclass(frozen=True)
class Anytime:
    """Decaying schedule eta0 / sqrt(k + 1), valid without a fixed horizon."""


def normalized_schedule_step(k, schedule, eta0) -> float:
    """Step length for normalized GD at iteration k; non-increasing in k."""
    if k < 0:
        raise ValueError("iteration index must be >= 0")
    if isinstance(schedule, FixedHorizon):
        return eta0 / math.sqrt(schedule.total)
    if isinstance(schedule, Anytime):
        return eta0 / math.sqrt(k + 1.0)
    raise ValueError(f"unknown schedule {schedule!r}")


class StepSizeRule:
    """A strategy producing eta_k from the current state of a GD run."""

    tag = "rule"

    def validate_for(self, obj) -> None:
        pass

    def step(self, obj, x, g, fx, k) -> float:
        raise NotImplementedError


class ConstantStep(StepSizeRule):
    def __init__(self, eta):
        if eta <= 0:
            raise StepSizeError(f"constant step must be positive, got {eta}")
        self.eta = float(eta)
        self.tag = f"constant({eta:g})"

    def step(self, obj, x, g, fx, k) -> float:
        return self.eta


class InverseLStep(StepSizeRule):
    tag = "inverse_L"

    def step(self, obj, x, g, fx, k) -> float:
        return 1.0 / obj.smoothness_constant()


class StronglyAdaptedStep(StepSizeRule):
    def __init__(self, kind: SmoothnessKind = SmoothnessKind.POINT_WISE_D,
                 config: RootSolveConfig | None = None):
        if kind not in (SmoothnessKind.POINT_WISE_D, SmoothnessKind.PATH_WISE_A):
            raise StepSizeError("strongly adapted rules support kinds D and A")
        self.kind = kind
        self.config = config or RootSolveConfig()
        self.tag = f"adapted({kind.value})"

    def step(self, obj, x, g, fx, k) -> float:
        return solve_strongly_adapted(obj, x, self.kind, self.config)


class PolyakStep(StepSizeRule):
    def __init__(self, gamma, f_star):
        if not 0.0 < gamma < 2.0:
            raise StepSizeError(f"polyak gamma must be in (0, 2), got {gamma}")
        self.gamma = float(gamma)
        self.f_star = float(f_star)
        self.tag = f"polyak(gamma={gamma:g})"

    def step(self, obj, x, g, fx, k) -> float:
        gap = fx - self.f_star
        slack = 1e-12 * (1.0 + abs(self.f_star))
        if gap < -slack:
            raise StepSizeError(
                f"f(x) = {fx!r} below f_star = {self.f_star!r}; inconsistent reference"
            )
        gn2 = float(g @ g)
        if gn2 == 0.0:
            return 0.0
        return self.gamma * max(gap, 0.0) / gn2


class CauchyStep(StepSizeRule):
    tag = "cauchy"

    def validate_for(self, obj) -> None:
        if not isinstance(obj, QuadraticObjective):
            raise UnsupportedObjectiveError("cauchy rule is valid on quadratics only")

    def step(self, obj, x, g, fx, k) -> float:
        return cauchy_step(obj, x)


class DaiStep(StepSizeRule):
    tag = "dai"

    def validate_for(self, obj) -> None:
        if not isinstance(obj, QuadraticObjective):
            raise UnsupportedObjectiveError("dai rule is valid on quadratics only")

    def step(self, obj, x, g, fx, k) -> float:
        return dai_step(obj, x)

"""Evaluates the path-dependent sub-optimality bounds along recorded traces.

Index convention: a BoundSeries is aligned 1:1 with the trace records, and
``values[k]`` bounds the target quantity at iterate x_k using only steps
i < k (step sizes, per-pair smoothness, gradient norms) and iterates up to
x_k. ``values[0]`` is the trivial bound (delta_0 or Delta_0) for recursive
bounds and the +inf sentinel for bounds whose denominator is an empty sum.

Each evaluator fills ``realized`` with the quantity its theorem actually
bounds (last iterate gap, squared distance, best-iterate gap, or the gap at
a weighted average iterate), under the key named by ``designated``.
Hypothesis checks (convexity, rule identity, schedule monotonicity, step
adaptedness) are performed programmatically and raise HypothesisError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import HypothesisError, MissingMetricsError
from .smoothness import SmoothnessKind, directional_mu
from .optimizers import Trace

__all__ = [
    "BoundSeries",
    "DominanceReport",
    "bound_sc_split",
    "bound_sc_iterates",
    "bound_convex_avg",
    "bound_agd",
    "bound_polyak",
    "bound_polyak_alternate",
    "bound_ngd",
    "bound_classic_L",
    "dominance_report",
    "polyak_curvature_constant",
]

_M_CLAMP = 1e-14


@dataclass
class BoundSeries:
    """Per-iteration theoretical bounds aligned with a Trace.

    ``target`` says whether values bound the optimality gap or the squared
    distance to the optimum. ``realized`` maps labels to the measured series
    the bound is checked against; ``designated`` names the label the theorem
    itself designates.
    """

    name: str
    values: np.ndarray
    target: str
    inputs_tag: str
    clamped_indices: list = field(default_factory=list)
    realized: dict = field(default_factory=dict)
    designated: str = ""
    aux: dict = field(default_factory=dict)

    def to_csv(self, path) -> None:
        clamped = set(self.clamped_indices)
        lines = ["k,bound_value,clamped"]
        for k, v in enumerate(self.values):
            cell = "inf" if math.isinf(v) else repr(float(v))
            lines.append(f"{k},{cell},{int(k in clamped)}")
        import pathlib

        pathlib.Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class DominanceReport:
    max_violation: float
    argmax: int
    checked: int

    @property
    def ok(self) -> bool:
        return self.max_violation <= 1e-9


def dominance_report(series: BoundSeries, label=None) -> DominanceReport:
    """Largest relative violation of bound >= realized over the series.

    Violations are normalized by 1 + |bound| + |realized|; indices with a
    missing realized value or an infinite bound are skipped.
    """
    label = label or series.designated
    if label not in series.realized:
        raise MissingMetricsError(
            f"series {self_name(series)} has no realized values under {label!r}"
        )
    realized = series.realized[label]
    worst, arg, n = -math.inf, -1, 0
    for k in range(len(series.values)):
        b, r = series.values[k], realized[k]
        if math.isnan(r) or math.isinf(b):
            continue
        v = (r - b) / (1.0 + abs(b) + abs(r))
        n += 1
        if v > worst:
            worst, arg = v, k
    return DominanceReport(worst, arg, n)


def self_name(series):
    return series.name


def _require_convex(trace: Trace):
    if not trace.meta.get("convex", False):
        raise HypothesisError(
            f"trace {trace.rule_tag} on {trace.objective_tag} is not flagged convex"
        )


def _step_arrays(trace: Trace):
    """(eta_i, grad_norm_i^2) over completed steps i < N."""
    n = trace.steps
    eta = trace.eta[:n]
    gn2 = trace.grad_norm[:n] ** 2
    if np.any(np.isnan(eta)):
        raise MissingMetricsError("trace has undefined step sizes mid-run")
    return eta, gn2


def _smoothness_steps(trace: Trace, kind: SmoothnessKind) -> np.ndarray:
    """Per-step smoothness M_i = M(x_i, x_{i+1}) by kind, for i < N."""
    n = trace.steps
    if kind is SmoothnessKind.GLOBAL_L:
        L = trace.meta.get("global_L")
        if L is None:
            raise MissingMetricsError("trace does not record a global L")
        return np.full(n, float(L))
    m = trace.metric(kind.value)[:n]
    if np.any(np.isnan(m)):
        raise MissingMetricsError(
            f"trace lacks recorded {kind.value} pair metrics; rerun with "
            "pair_metrics enabled"
        )
    return m


def _mu_series(trace: Trace, ref):
    """mu_i = mu(x_i, x*) for every record; lazily computed when missing.

    An iterate coincident with x* gets mu = 0 (its contribution is vacuous
    there) and is reported in the returned substitution list.
    """
    mu = trace.metric("mu_star").copy()
    substituted = []
    missing = np.isnan(mu)
    if not missing.any():
        return mu, substituted
    if trace.objective is None:
        raise MissingMetricsError(
            "trace lacks recorded mu(x_i, x*) and no live objective is "
            "attached for lazy evaluation"
        )
    pts = trace.points()
    for k in np.nonzero(missing)[0]:
        xk = pts[k]
        dist = float(np.linalg.norm(xk - ref.x_star))
        if dist <= 1e-14 * (1.0 + float(np.linalg.norm(xk))):
            mu[k] = 0.0
            substituted.append(int(k))
        else:
            mu[k] = directional_mu(trace.objective, xk, ref.x_star).value
    return mu, substituted


def _delta0(trace: Trace, ref) -> float:
    x0 = np.asarray(trace.meta["x0"], dtype=float)
    diff = x0 - ref.x_star
    return float(diff @ diff)


def _prefix_weighted_gap(trace: Trace, ref, weights, use_next_iterate=False):
    """gap at the weight-averaged iterate for every prefix: value at index k
    averages x_i (or x_{i+1}) with weights[i] over steps i < k."""
    obj = trace.objective
    if obj is None:
        return None
    pts = trace.points()
    n = trace.steps
    out = np.full(len(trace.records), math.nan)
    acc = np.zeros(pts.shape[1])
    wsum = 0.0
    for i in range(n):
        xi = pts[i + 1] if use_next_iterate else pts[i]
        acc = acc + weights[i] * xi
        wsum += weights[i]
        if wsum > 0.0:
            out[i + 1] = obj.value(acc / wsum) - ref.f_star
    return out


def _running_best_gap(trace: Trace, ref):
    """min_{i < k} (f(x_i) - f*) as a series over k; NaN at k = 0."""
    gaps = trace.gaps(ref)
    out = np.full(len(gaps), math.nan)
    best = math.inf
    for i in range(len(gaps) - 1):
        best = min(best, gaps[i])
        out[i + 1] = best
    return out


def bound_sc_split(trace: Trace, ref, kind: SmoothnessKind) -> BoundSeries:
    """Good-step/bad-step split bound on the optimality gap.

    With lambda_i = eta_i M_i - 2, good steps (lambda_i < 0) contract the gap
    by (1 + eta_i lambda_i mu_i); bad steps add eta_i lambda_i / 2 * ||g_i||^2.
    The series applies the per-step recursion exactly.
    """
    _require_convex(trace)
    eta, gn2 = _step_arrays(trace)
    m = _smoothness_steps(trace, kind)
    mu, substituted = _mu_series(trace, ref)
    gaps = trace.gaps(ref)

    n = trace.steps
    values = np.empty(n + 1)
    values[0] = gaps[0]
    bound = gaps[0]
    for i in range(n):
        lam = eta[i] * m[i] - 2.0
        if lam < 0.0:
            bound = (1.0 + eta[i] * lam * mu[i]) * bound
        else:
            bound = bound + 0.5 * eta[i] * lam * gn2[i]
        values[i + 1] = bound
    return BoundSeries(
        name="sc_split",
        values=values,
        target="gap",
        inputs_tag=f"M={kind.value}",
        clamped_indices=substituted,
        realized={"last": gaps},
        designated="last",
    )


def bound_sc_iterates(trace: Trace, ref, kind: SmoothnessKind) -> BoundSeries:
    """Distance bound with per-iteration linear progress:
    Delta_{k+1} <= |1 - mu_k eta_k| / (1 + mu_{k+1} eta_k) Delta_k
    + eta_k^2 (M_k eta_k - 1) / (1 + mu_{k+1} eta_k) ||g_k||^2."""
    _require_convex(trace)
    eta, gn2 = _step_arrays(trace)
    m = _smoothness_steps(trace, kind)
    mu, substituted = _mu_series(trace, ref)

    n = trace.steps
    values = np.empty(n + 1)
    values[0] = _delta0(trace, ref)
    bound = values[0]
    for i in range(n):
        denom = 1.0 + mu[i + 1] * eta[i]
        contraction = abs(1.0 - mu[i] * eta[i]) / denom
        correction = eta[i] ** 2 * (m[i] * eta[i] - 1.0) / denom * gn2[i]
        bound = contraction * bound + correction
        values[i + 1] = bound

    realized = {}
    try:
        realized["last"] = trace.distances2(ref)
    except MissingMetricsError:
        pass
    return BoundSeries(
        name="sc_iterates",
        values=values,
        target="distance",
        inputs_tag=f"M={kind.value}",
        clamped_indices=substituted,
        realized=realized,
        designated="last",
    )


def bound_convex_avg(trace: Trace, ref, kind: SmoothnessKind) -> BoundSeries:
    """Any-step-size bound at the eta-weighted average of the iterates
    x_{i+1}: (Delta_0 + sum eta_i^2 (eta_i M_i - 1) ||g_i||^2) / (2 sum eta_i)."""
    _require_convex(trace)
    eta, gn2 = _step_arrays(trace)
    m = _smoothness_steps(trace, kind)

    n = trace.steps
    values = np.full(n + 1, math.inf)
    delta0 = _delta0(trace, ref)
    s_eta, s_corr = 0.0, 0.0
    for i in range(n):
        s_eta += eta[i]
        s_corr += eta[i] ** 2 * (eta[i] * m[i] - 1.0) * gn2[i]
        if s_eta > 0.0:
            values[i + 1] = (delta0 + s_corr) / (2.0 * s_eta)

    realized = {}
    avg = _prefix_weighted_gap(trace, ref, eta, use_next_iterate=True)
    if avg is not None:
        realized["avg"] = avg
    return BoundSeries(
        name="convex_avg",
        values=values,
        target="gap",
        inputs_tag=f"M={kind.value}",
        realized=realized,
        designated="avg",
    )


def bound_agd(trace: Trace, ref, mu=None, gamma0=None, eta_min=None) -> BoundSeries:
    """Accelerated rates for AGD traces with adapted steps.

    Verifies post hoc that eta_k * H(y_k, x_{k+1}) <= 1 at every step (the
    descent condition the proof needs) and errors naming the first violating
    index. Strongly convex branch when mu > 0 and alpha0 = sqrt(eta_0 mu);
    otherwise the convex branch with gamma0 reconstructed from alpha0 when
    not supplied.
    """
    if "H_y_pair" not in trace.extras or "alpha" not in trace.extras:
        raise HypothesisError("bound_agd needs a trace produced by an AGD runner")
    eta, _ = _step_arrays(trace)
    h_pair = trace.extras["H_y_pair"]
    prod = eta * h_pair[: len(eta)]
    bad = np.nonzero(prod > 1.0 + 1e-9)[0]
    if bad.size:
        k = int(bad[0])
        raise HypothesisError(
            f"steps are not adapted: eta_{k} * H(y_{k}, x_{k + 1}) = {prod[k]:.6g} > 1"
        )

    mu = float(trace.meta.get("mu", 0.0)) if mu is None else float(mu)
    alpha0 = float(trace.extras["alpha"][0])
    eta0 = float(eta[0])
    delta0_gap = float(trace.gaps(ref)[0])
    dist0 = _delta0(trace, ref)
    n = trace.steps
    values = np.empty(n + 1)

    sc_branch = mu > 0.0 and abs(alpha0 - math.sqrt(eta0 * mu)) <= 1e-9 * max(alpha0, 1e-30)
    if sc_branch:
        init = delta0_gap + 0.5 * mu * dist0
        lam = 1.0
        values[0] = init
        for i in range(n):
            lam *= 1.0 - math.sqrt(mu * eta[i])
            values[i + 1] = lam * init
        tag = f"mu={mu:g},sc"
    else:
        if gamma0 is None:
            gamma0 = trace.meta.get("gamma0")
        if gamma0 is None:
            if alpha0 >= 1.0:
                raise HypothesisError("cannot reconstruct gamma0 from alpha0 = 1")
            gamma0 = (alpha0 ** 2 - eta0 * alpha0 * mu) / (eta0 * (1.0 - alpha0))
        gamma0 = float(gamma0)
        eta_min = float(np.min(eta)) if eta_min is None else float(eta_min)
        if not mu < gamma0 < mu + 3.0 / eta_min:
            raise HypothesisError(
                f"gamma0 = {gamma0:.6g} outside (mu, mu + 3/eta_min) = "
                f"({mu:.6g}, {mu + 3.0 / eta_min:.6g})"
            )
        init = delta0_gap + 0.5 * gamma0 * dist0
        scale = 4.0 / (eta_min * (gamma0 - mu))
        for k in range(n + 1):
            values[k] = scale * init / (k + 1.0) ** 2
        tag = f"mu={mu:g},gamma0={gamma0:g}"

    return BoundSeries(
        name="agd",
        values=values,
        target="gap",
        inputs_tag=tag,
        realized={"last": trace.gaps(ref)},
        designated="last",
    )


def polyak_curvature_constant(gamma) -> float:
    """c(gamma) = gamma / ((2 - gamma)(gamma - 1)) for gamma in (1, 2)."""
    if not 1.0 < gamma < 2.0:
        raise HypothesisError(f"polyak bound needs gamma in (1, 2), got {gamma}")
    return gamma / ((2.0 - gamma) * (gamma - 1.0))


def _require_rule(trace: Trace, prefix, what):
    if not trace.rule_tag.startswith(prefix):
        raise HypothesisError(
            f"{what} applies to {prefix}* traces, got rule {trace.rule_tag!r}"
        )


def bound_polyak(trace: Trace, ref, kind: SmoothnessKind, gamma) -> BoundSeries:
    """Polyak-step bound c(gamma) Delta_0 / (2 sum_{i<k} 1/M_i).

    Valid for any directional smoothness function M; holds at the
    1/M-weighted average iterate and at the best iterate. Near-zero M_i are
    clamped at 1e-14 (loosening the bound upward) and recorded.
    """
    _require_convex(trace)
    _require_rule(trace, "polyak", "bound_polyak")
    c = polyak_curvature_constant(gamma)
    m = _smoothness_steps(trace, kind)
    clamped = [int(i) for i in np.nonzero(m < _M_CLAMP)[0]]
    m = np.maximum(m, _M_CLAMP)
    inv = 1.0 / m

    n = trace.steps
    delta0 = _delta0(trace, ref)
    values = np.full(n + 1, math.inf)
    s = np.cumsum(inv)
    values[1:] = c * delta0 / (2.0 * s)

    realized = {"best": _running_best_gap(trace, ref)}
    avg = _prefix_weighted_gap(trace, ref, inv, use_next_iterate=False)
    if avg is not None:
        realized["avg"] = avg
    return BoundSeries(
        name="polyak",
        values=values,
        target="gap",
        inputs_tag=f"M={kind.value},gamma={gamma:g}",
        clamped_indices=clamped,
        realized=realized,
        designated="avg" if avg is not None else "best",
    )


def bound_polyak_alternate(trace: Trace, ref, gamma) -> BoundSeries:
    """Step-size-sum form of the Polyak bound: Delta_0 / ((2-gamma) sum eta_i),
    valid for any gamma < 2 at the eta-weighted average iterate."""
    _require_convex(trace)
    _require_rule(trace, "polyak", "bound_polyak_alternate")
    if not 0.0 < gamma < 2.0:
        raise HypothesisError(f"alternate polyak bound needs gamma in (0, 2), got {gamma}")
    eta, _ = _step_arrays(trace)

    n = trace.steps
    delta0 = _delta0(trace, ref)
    values = np.full(n + 1, math.inf)
    s = np.cumsum(eta)
    with np.errstate(divide="ignore"):
        values[1:] = np.where(s > 0.0, delta0 / ((2.0 - gamma) * s), math.inf)

    realized = {"best": _running_best_gap(trace, ref)}
    avg = _prefix_weighted_gap(trace, ref, eta, use_next_iterate=False)
    if avg is not None:
        realized["avg"] = avg
    return BoundSeries(
        name="polyak_alternate",
        values=values,
        target="gap",
        inputs_tag=f"gamma={gamma:g}",
        realized=realized,
        designated="avg" if avg is not None else "best",
    )


def bound_ngd(trace: Trace, ref, kind: SmoothnessKind = SmoothnessKind.POINT_WISE_D) -> BoundSeries:
    """Normalized-GD bound at the best iterate for non-increasing schedules.

    Evaluates (Delta_0 + sum eta_i^2) / (2 k^2) times the telescoped
    gradient-sum bound f(x_0)/eta_0^2 + sum_{0<i<k} f(x_i)(1/eta_i^2 -
    1/eta_{i-1}^2) - f*/eta_{k-1}^2 + sum M_i. For a constant schedule the
    middle (Abel) term vanishes and the expression is the familiar two-term
    display; for strictly decaying schedules the middle term is positive and
    must be kept for the bound to remain an upper bound (it telescopes out of
    the per-step descent inequality and is observable along the trace).

    The proof's smoothness quantity is the gradient-difference quotient, which
    the point-wise D (and any global L) upper-bounds; tighter kinds A and H do
    not, so only D and GlobalL are accepted here.
    """
    _require_convex(trace)
    _require_rule(trace, "normalized", "bound_ngd")
    if kind not in (SmoothnessKind.POINT_WISE_D, SmoothnessKind.GLOBAL_L):
        raise HypothesisError("bound_ngd supports kinds D and GlobalL only")
    eta, _ = _step_arrays(trace)
    if np.any(np.diff(eta) > 0.0):
        raise HypothesisError("normalized GD bound needs a non-increasing schedule")
    m = _smoothness_steps(trace, kind)

    n = trace.steps
    delta0 = _delta0(trace, ref)
    f = trace.f
    f_star = float(ref.f_star)
    values = np.full(n + 1, math.inf)
    s_eta2 = np.cumsum(eta ** 2)
    s_m = np.cumsum(m)
    inv2 = 1.0 / eta ** 2
    abel = 0.0
    for k in range(1, n + 1):
        if k >= 2:
            abel += f[k - 1] * (inv2[k - 1] - inv2[k - 2])
        lead = delta0 + s_eta2[k - 1]
        grad_sum = f[0] * inv2[0] + abel - f_star * inv2[k - 1] + s_m[k - 1]
        values[k] = lead * grad_sum / (2.0 * k * k)

    return BoundSeries(
        name="ngd",
        values=values,
        target="gap",
        inputs_tag=f"M={kind.value}",
        realized={"best": _running_best_gap(trace, ref)},
        designated="best",
    )


def bound_classic_L(trace: Trace, ref, L, flavor="gd") -> BoundSeries:
    """Classical global-smoothness baseline 2 L Delta_0 / k, the comparison
    bound for both plain GD and the Polyak step under L-smoothness."""
    if L <= 0:
        raise HypothesisError("L must be positive")
    if flavor not in ("gd", "polyak"):
        raise HypothesisError(f"unknown flavor {flavor!r}")
    n = trace.steps
    delta0 = _delta0(trace, ref)
    values = np.full(n + 1, math.inf)
    ks = np.arange(1, n + 1, dtype=float)
    values[1:] = 2.0 * L * delta0 / ks

    realized = {"last": trace.gaps(ref), "best": _running_best_gap(trace, ref)}
    return BoundSeries(
        name="classic_L",
        values=values,
        target="gap",
        inputs_tag=f"L={L:g},{flavor}",
        realized=realized,
        designated="last" if flavor == "gd" else "best",
    )

"""Optimization loops producing per-iteration Traces.

Runners: plain GD under any step-size rule, normalized GD under a
non-increasing schedule, Nesterov acceleration in its momentum and
estimating-sequence formulations (provably equivalent updates), and GD with
exponential search over a constant step-size.

A Trace stores one record per iterate: function value, gradient norm, the
step taken, and (optionally) the directional smoothness values D/A/H for the
pair (x_k, x_{k+1}) plus the directional strong convexity mu(x_k, x*) against
a reference solution. All runners are deterministic: re-running a
configuration reproduces the trace bit for bit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import (
    CoincidentPointsError,
    DirsmoothError,
    MissingMetricsError,
    OptimizationRunError,
    StepSizeError,
)
from .smoothness import (
    ChordConfig,
    SmoothnessKind,
    directional_mu,
    estimate,
    optimal_H,
    path_wise_A,
    point_wise_D,
)
from .stepsizes import FixedHorizon, StepSizeRule, normalized_schedule_step

__all__ = [
    "IterateRecord",
    "Trace",
    "RunOptions",
    "gd_run",
    "normalized_gd_run",
    "agd_momentum_run",
    "agd_estimating_run",
    "alpha0_from_gamma0",
    "ExpSearchResult",
    "exponential_search_gd",
]

_CSV_COLUMNS = ("k", "f", "grad_norm", "eta", "D", "A", "H", "mu_star")


@dataclass
class IterateRecord:
    k: int
    x: np.ndarray | None
    f: float
    grad_norm: float
    eta: float = math.nan
    D: float = math.nan
    A: float = math.nan
    H: float = math.nan
    mu_star: float = math.nan


@dataclass
class Trace:
    """Ordered iterate records for one optimizer run plus run metadata.

    ``objective`` holds the live objective when the trace was produced in
    process; it is not serialized, so traces loaded from disk carry only the
    recorded scalars and points.
    """

    records: list[IterateRecord]
    objective_tag: str
    rule_tag: str
    seed: int | None
    terminated_reason: str
    meta: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)
    objective: object | None = None

    def __len__(self):
        return len(self.records)

    @property
    def steps(self) -> int:
        """Number of completed steps (records minus the final iterate)."""
        return max(len(self.records) - 1, 0)

    def _column(self, name) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=float)

    @property
    def f(self) -> np.ndarray:
        return self._column("f")

    @property
    def grad_norm(self) -> np.ndarray:
        return self._column("grad_norm")

    @property
    def eta(self) -> np.ndarray:
        return self._column("eta")

    def metric(self, name) -> np.ndarray:
        if name not in ("D", "A", "H", "mu_star"):
            raise KeyError(name)
        return self._column(name)

    def points(self) -> np.ndarray:
        if any(r.x is None for r in self.records):
            raise MissingMetricsError(
                "trace was recorded in thin mode and stores no points"
            )
        return np.stack([r.x for r in self.records])

    def gaps(self, ref) -> np.ndarray:
        return self.f - ref.f_star

    def distances2(self, ref) -> np.ndarray:
        pts = self.points()
        diff = pts - ref.x_star[None, :]
        return np.einsum("ij,ij->i", diff, diff)

    def to_csv(self, path) -> None:
        lines = [",".join(_CSV_COLUMNS)]
        for r in self.records:
            cells = [str(r.k)]
            for name in _CSV_COLUMNS[1:]:
                v = getattr(r, name)
                cells.append("" if math.isnan(v) else repr(float(v)))
            lines.append(",".join(cells))
        Path(path).write_text("\n".join(lines) + "\n")

    def to_json(self, path) -> None:
        def scrub(v):
            if isinstance(v, float) and math.isnan(v):
                return None
            return v

        payload = {
            "objective_tag": self.objective_tag,
            "rule_tag": self.rule_tag,
            "seed": self.seed,
            "terminated_reason": self.terminated_reason,
            "meta": {
                k: (list(map(float, v)) if isinstance(v, np.ndarray) else v)
                for k, v in self.meta.items()
            },
            "extras": {k: list(map(float, v)) for k, v in self.extras.items()},
            "records": [
                {
                    "k": r.k,
                    "x": None if r.x is None else [float(t) for t in r.x],
                    "f": r.f,
                    "grad_norm": r.grad_norm,
                    "eta": scrub(r.eta),
                    "D": scrub(r.D),
                    "A": scrub(r.A),
                    "H": scrub(r.H),
                    "mu_star": scrub(r.mu_star),
                }
                for r in self.records
            ],
        }
        Path(path).write_text(json.dumps(payload) + "\n")

    @classmethod
    def from_json(cls, path) -> "Trace":
        d = json.loads(Path(path).read_text())

        def val(v):
            return math.nan if v is None else float(v)

        records = [
            IterateRecord(
                k=int(r["k"]),
                x=None if r["x"] is None else np.asarray(r["x"], dtype=float),
                f=float(r["f"]),
                grad_norm=float(r["grad_norm"]),
                eta=val(r["eta"]),
                D=val(r["D"]),
                A=val(r["A"]),
                H=val(r["H"]),
                mu_star=val(r["mu_star"]),
            )
            for r in d["records"]
        ]
        return cls(
            records=records,
            objective_tag=d["objective_tag"],
            rule_tag=d["rule_tag"],
            seed=d["seed"],
            terminated_reason=d["terminated_reason"],
            meta=d.get("meta", {}),
            extras={k: np.asarray(v, dtype=float) for k, v in d.get("extras", {}).items()},
        )


@dataclass
class RunOptions:
    """Per-run toggles shared by all runners.

    ``pair_metrics`` fills D/A/H for consecutive iterate pairs (and mu(x_k, x*)
    when ``reference`` is given). ``thin`` drops iterate points to keep long
    runs small. ``grad_tol`` > 0 stops the run once the gradient norm falls
    below it.
    """

    pair_metrics: bool = False
    grad_tol: float = 0.0
    reference: object | None = None
    thin: bool = False
    chord: ChordConfig = field(default_factory=ChordConfig)


def _base_meta(obj, x0, extra=None):
    meta = {
        "x0": [float(v) for v in x0],
        "convex": bool(getattr(obj, "is_convex", False)),
    }
    try:
        meta["global_L"] = float(obj.smoothness_constant())
    except DirsmoothError:
        pass
    if extra:
        meta.update(extra)
    return meta


def _mu_star(obj, x, opts):
    if not (opts.pair_metrics and opts.reference is not None):
        return math.nan
    try:
        return directional_mu(obj, x, opts.reference.x_star, opts.chord).value
    except CoincidentPointsError:
        return math.nan


def _pair_metrics(obj, x, x_next, opts):
    if not opts.pair_metrics:
        return math.nan, math.nan, math.nan
    try:
        d = point_wise_D(obj, x, x_next).value
        a = path_wise_A(obj, x, x_next, opts.chord).value
        h = optimal_H(obj, x, x_next).value
    except CoincidentPointsError:
        return math.nan, math.nan, math.nan
    return d, a, h


def _negligible_step(x, x_next):
    return float(np.linalg.norm(x_next - x)) <= 1e-14 * (1.0 + float(np.linalg.norm(x)))


def _keep(x, opts):
    return None if opts.thin else x.copy()


def gd_run(obj, x0, rule: StepSizeRule, iters, opts: RunOptions | None = None,
           seed=None) -> Trace:
    """Plain gradient descent x_{k+1} = x_k - eta_k grad f(x_k).

    Terminates early on an exactly stationary point (reason ``stationary``), a
    zero step from the rule (a Polyak step at the optimum), or on
    ``grad_norm <= opts.grad_tol`` when a tolerance is set. Rule failures
    abort the run with the iteration index attached and the partial trace on
    the exception.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    opts = opts or RunOptions()
    rule.validate_for(obj)
    x = np.asarray(x0, dtype=float).copy()
    records: list[IterateRecord] = []
    trace = Trace(records, obj.tag, rule.tag, seed, "max_iters",
                  meta=_base_meta(obj, x), objective=obj)

    def finalize(k, xk, fx, gn, reason):
        records.append(IterateRecord(k, _keep(xk, opts), fx, gn,
                                     mu_star=_mu_star(obj, xk, opts)))
        trace.terminated_reason = reason
        return trace

    for k in range(iters):
        fx = obj.value(x)
        g = obj.gradient(x)
        gn = float(np.linalg.norm(g))
        if gn == 0.0:
            return finalize(k, x, fx, gn, "stationary")
        if opts.grad_tol > 0.0 and gn <= opts.grad_tol:
            return finalize(k, x, fx, gn, "grad_tol")
        try:
            eta = rule.step(obj, x, g, fx, k)
        except StepSizeError as exc:
            trace.terminated_reason = f"error: iteration {k}: {exc}"
            records.append(IterateRecord(k, _keep(x, opts), fx, gn,
                                         mu_star=_mu_star(obj, x, opts)))
            raise OptimizationRunError(k, str(exc), trace) from exc
        if eta == 0.0:
            return finalize(k, x, fx, gn, "stationary")
        x_next = x - eta * g
        if _negligible_step(x, x_next):
            return finalize(k, x, fx, gn, "stationary")
        d, a, h = _pair_metrics(obj, x, x_next, opts)
        records.append(IterateRecord(k, _keep(x, opts), fx, gn, eta, d, a, h,
                                     _mu_star(obj, x, opts)))
        x = x_next

    fx = obj.value(x)
    gn = float(np.linalg.norm(obj.gradient(x)))
    return finalize(iters, x, fx, gn, "max_iters")


def normalized_gd_run(obj, x0, schedule, eta0, iters,
                      opts: RunOptions | None = None, seed=None) -> Trace:
    """Normalized GD: x_{k+1} = x_k - (eta_k / ||grad f(x_k)||) grad f(x_k),
    so every step has length exactly eta_k."""
    if iters < 1:
        raise ValueError("iters must be >= 1")
    opts = opts or RunOptions()
    x = np.asarray(x0, dtype=float).copy()
    if isinstance(schedule, FixedHorizon):
        sched_tag = f"fixed({schedule.total})"
    else:
        sched_tag = "anytime"
    records: list[IterateRecord] = []
    trace = Trace(records, obj.tag, f"normalized({sched_tag},eta0={eta0:g})",
                  seed, "max_iters", meta=_base_meta(obj, x), objective=obj)

    for k in range(iters):
        fx = obj.value(x)
        g = obj.gradient(x)
        gn = float(np.linalg.norm(g))
        if gn == 0.0:
            records.append(IterateRecord(k, _keep(x, opts), fx, gn,
                                         mu_star=_mu_star(obj, x, opts)))
            trace.terminated_reason = "stationary"
            return trace
        if opts.grad_tol > 0.0 and gn <= opts.grad_tol:
            records.append(IterateRecord(k, _keep(x, opts), fx, gn,
                                         mu_star=_mu_star(obj, x, opts)))
            trace.terminated_reason = "grad_tol"
            return trace
        eta = normalized_schedule_step(k, schedule, eta0)
        x_next = x - (eta / gn) * g
        d, a, h = _pair_metrics(obj, x, x_next, opts)
        records.append(IterateRecord(k, _keep(x, opts), fx, gn, eta, d, a, h,
                                     _mu_star(obj, x, opts)))
        x = x_next

    fx = obj.value(x)
    gn = float(np.linalg.norm(obj.gradient(x)))
    records.append(IterateRecord(iters, _keep(x, opts), fx, gn,
                                 mu_star=_mu_star(obj, x, opts)))
    return trace


def _eta_source(etas):
    if callable(etas):
        return etas
    if np.isscalar(etas):
        v = float(etas)
        return lambda k: v
    seq = [float(v) for v in etas]
    return lambda k: seq[k]


def alpha0_from_gamma0(gamma0, eta0, mu) -> float:
    """Momentum initialization matching an estimating-sequence run started at
    gamma0: the positive root of alpha^2 = eta0 (1 - alpha) gamma0 + eta0 alpha mu."""
    b = eta0 * (gamma0 - mu)
    return 0.5 * (-b + math.sqrt(b * b + 4.0 * eta0 * gamma0))


def _solve_alpha(b, c) -> float:
    """Positive root of alpha^2 + b*alpha - c = 0 (c > 0)."""
    return 0.5 * (-b + math.sqrt(b * b + 4.0 * c))


def agd_momentum_run(obj, x0, etas, mu, alpha0, iters,
                     opts: RunOptions | None = None, seed=None) -> Trace:
    """Accelerated GD in the momentum formulation.

    Per iteration: x_{k+1} = y_k - eta_k grad f(y_k); alpha_{k+1} solves
    alpha^2 = (1 - alpha) alpha_k^2 eta_{k+1}/eta_k + eta_{k+1} alpha mu (root
    in (0, 1]); y_{k+1} = x_{k+1} + [alpha_k(1-alpha_k)/(alpha_k^2 +
    alpha_{k+1})] (x_{k+1} - x_k).

    The trace records the x_k sequence. Extras carry the alpha sequence and
    H(y_k, x_{k+1}) per step, which downstream bound evaluators use to verify
    that the steps were adapted.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if mu < 0:
        raise ValueError("mu must be >= 0")
    if not 0.0 < alpha0 <= 1.0:
        raise ValueError(f"alpha0 must be in (0, 1], got {alpha0}")
    opts = opts or RunOptions()
    eta_at = _eta_source(etas)

    x = np.asarray(x0, dtype=float).copy()
    y = x.copy()
    alpha = float(alpha0)
    records: list[IterateRecord] = []
    alphas, h_y_pairs = [], []
    trace = Trace(records, obj.tag, f"agd_momentum(mu={mu:g})", seed, "max_iters",
                  meta=_base_meta(obj, x, {"mu": float(mu), "alpha0": float(alpha0),
                                           "form": "momentum"}),
                  objective=obj)

    def close(k, reason):
        fx = obj.value(x)
        gn = float(np.linalg.norm(obj.gradient(x)))
        records.append(IterateRecord(k, _keep(x, opts), fx, gn,
                                     mu_star=_mu_star(obj, x, opts)))
        trace.extras["alpha"] = np.asarray(alphas)
        trace.extras["H_y_pair"] = np.asarray(h_y_pairs)
        trace.terminated_reason = reason
        return trace

    for k in range(iters):
        g_y = obj.gradient(y)
        if float(np.linalg.norm(g_y)) == 0.0:
            return close(k, "stationary")
        eta = eta_at(k)
        if mu > 0.0 and eta > 1.0 / mu * (1.0 + 1e-12):
            raise StepSizeError(f"eta_{k} = {eta} exceeds 1/mu = {1.0 / mu}")
        x_next = y - eta * g_y
        if _negligible_step(y, x_next):
            return close(k, "stationary")

        fx = obj.value(x)
        gn = float(np.linalg.norm(obj.gradient(x)))
        d, a, h = _pair_metrics(obj, x, x_next, opts)
        records.append(IterateRecord(k, _keep(x, opts), fx, gn, eta, d, a, h,
                                     _mu_star(obj, x, opts)))
        alphas.append(alpha)
        h_y_pairs.append(optimal_H(obj, y, x_next).value)

        eta_next = eta_at(k + 1)
        ratio = eta_next / eta
        b = alpha * alpha * ratio - eta_next * mu
        alpha_next = _solve_alpha(b, alpha * alpha * ratio)
        if not 0.0 < alpha_next <= 1.0 + 1e-12:
            raise StepSizeError(
                f"alpha recursion left (0, 1] at iteration {k}: {alpha_next}"
            )
        alpha_next = min(alpha_next, 1.0)
        beta = alpha * (1.0 - alpha) / (alpha * alpha + alpha_next)
        y = x_next + beta * (x_next - x)
        x, alpha = x_next, alpha_next

    return close(iters, "max_iters")


def agd_estimating_run(obj, x0, etas, mu, gamma0, iters,
                       opts: RunOptions | None = None, seed=None) -> Trace:
    """Accelerated GD in the estimating-sequence formulation.

    Maintains (x_k, v_k, gamma_k) with y_k a convex combination of x_k and
    v_k; produces x_k sequences identical to the momentum form when alpha0 is
    initialized from gamma0 (see ``alpha0_from_gamma0``).
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    if mu < 0:
        raise ValueError("mu must be >= 0")
    if gamma0 <= 0:
        raise ValueError("gamma0 must be positive")
    opts = opts or RunOptions()
    eta_at = _eta_source(etas)

    x = np.asarray(x0, dtype=float).copy()
    v = x.copy()
    gamma = float(gamma0)
    records: list[IterateRecord] = []
    alphas, gammas, h_y_pairs = [], [], []
    trace = Trace(records, obj.tag, f"agd_estimating(mu={mu:g})", seed, "max_iters",
                  meta=_base_meta(obj, x, {"mu": float(mu), "gamma0": float(gamma0),
                                           "form": "estimating"}),
                  objective=obj)

    def close(k, reason):
        fx = obj.value(x)
        gn = float(np.linalg.norm(obj.gradient(x)))
        records.append(IterateRecord(k, _keep(x, opts), fx, gn,
                                     mu_star=_mu_star(obj, x, opts)))
        trace.extras["alpha"] = np.asarray(alphas)
        trace.extras["gamma"] = np.asarray(gammas)
        trace.extras["H_y_pair"] = np.asarray(h_y_pairs)
        trace.terminated_reason = reason
        return trace

    for k in range(iters):
        eta = eta_at(k)
        if mu > 0.0 and eta > 1.0 / mu * (1.0 + 1e-12):
            raise StepSizeError(f"eta_{k} = {eta} exceeds 1/mu = {1.0 / mu}")
        alpha = _solve_alpha(eta * (gamma - mu), eta * gamma)
        if not 0.0 < alpha <= 1.0 + 1e-12:
            raise StepSizeError(
                f"alpha recursion left (0, 1] at iteration {k}: {alpha}"
            )
        alpha = min(alpha, 1.0)
        gamma_next = (1.0 - alpha) * gamma + alpha * mu
        y = (alpha * gamma * v + gamma_next * x) / (gamma + alpha * mu)
        g_y = obj.gradient(y)
        if float(np.linalg.norm(g_y)) == 0.0:
            return close(k, "stationary")
        x_next = y - eta * g_y
        if _negligible_step(y, x_next):
            return close(k, "stationary")
        v = ((1.0 - alpha) * gamma * v + alpha * mu * y - alpha * g_y) / gamma_next

        fx = obj.value(x)
        gn = float(np.linalg.norm(obj.gradient(x)))
        d, a, h = _pair_metrics(obj, x, x_next, opts)
        records.append(IterateRecord(k, _keep(x, opts), fx, gn, eta, d, a, h,
                                     _mu_star(obj, x, opts)))
        alphas.append(alpha)
        gammas.append(gamma)
        h_y_pairs.append(optimal_H(obj, y, x_next).value)

        x, gamma = x_next, gamma_next

    return close(iters, "max_iters")


@dataclass
class _Probe:
    eta: float
    psi: float | None
    phi: float
    steps: int
    diverged: bool
    xs: list
    gs2: list
    ms: list


@dataclass
class ExpSearchResult:
    """Outcome of exponential search: the accepted step-size, which case of
    the guarantee applies, the winning run's trace and averaged iterate, and
    per-probe diagnostics (every phi evaluation in order)."""

    eta: float
    case: int
    inner_gd_steps: int
    trace: Trace
    x_bar: np.ndarray
    f_bar: float
    eta0: float
    horizon: int
    kind: SmoothnessKind
    eta_hi: float | None = None
    psi_eta_hi: float | None = None
    probes: list = field(default_factory=list)


_F_CAP = 1e280


def exponential_search_gd(obj, x0, eta0, K, kind: SmoothnessKind = SmoothnessKind.POINT_WISE_D,
                          chord: ChordConfig | None = None,
                          opts: RunOptions | None = None) -> ExpSearchResult:
    """Find a constant step adapted on average to the directional smoothness.

    Each probe runs K fixed-step GD iterations from x0 and evaluates
    phi(eta) = eta - psi(eta), with psi the gradient-norm-weighted harmonic
    mean of the smoothness values along the probe path. Case 1 accepts eta0
    outright when phi(eta0) <= 0; otherwise the outer loop lowers eta_lo to
    2^(-2^k) eta0 until a sign change appears and bisects on the geometric
    mean, maintaining phi(eta_hi) > 0 >= phi(eta_lo).

    Probes that overflow (constant-step GD at huge eta on a quadratic) count
    as phi > 0: the step is certainly too large. Probe results are memoized,
    and ``inner_gd_steps`` counts every GD step actually executed.
    """
    if eta0 <= 0:
        raise ValueError("eta0 must be positive")
    if K < 1:
        raise ValueError("K must be >= 1")
    chord = chord or ChordConfig()
    opts = opts or RunOptions()
    x0 = np.asarray(x0, dtype=float).copy()
    if float(np.linalg.norm(obj.gradient(x0))) == 0.0:
        raise StepSizeError("x0 is stationary; nothing to search for")

    cache: dict[float, _Probe] = {}
    state = {"steps": 0}
    probe_log: list = []

    def probe(eta) -> _Probe:
        if eta in cache:
            probe_log.append({"eta": eta, "phi": cache[eta].phi, "cached": True})
            return cache[eta]
        x = x0.copy()
        xs = [x.copy()]
        gs2, ms = [], []
        steps = 0
        diverged = False
        for _ in range(K):
            g = obj.gradient(x)
            gn2 = float(g @ g)
            if not np.isfinite(gn2) or gn2 > _F_CAP:
                diverged = True
                break
            if gn2 == 0.0:
                break
            x_next = x - eta * g
            if _negligible_step(x, x_next):
                break
            steps += 1
            f_next = obj.value(x_next)
            if not np.isfinite(f_next) or abs(f_next) > _F_CAP:
                diverged = True
                break
            m = estimate(obj, x, x_next, kind, chord).value
            gs2.append(gn2)
            ms.append(m)
            x = x_next
            xs.append(x.copy())
        den = float(np.dot(ms, gs2)) if ms else 0.0
        if diverged or den <= 0.0:
            psi = None
            phi = math.inf
        else:
            psi = float(np.sum(gs2)) / den
            phi = eta - psi
        res = _Probe(eta, psi, phi, steps, diverged, xs, gs2, ms)
        state["steps"] += steps
        cache[eta] = res
        probe_log.append({"eta": eta, "phi": phi, "cached": False, "steps": steps,
                          "diverged": diverged})
        return res

    def result_from(p: _Probe, case, eta_hi=None, psi_hi=None) -> ExpSearchResult:
        n_avg = min(K, len(p.xs))
        x_bar = np.mean(np.stack(p.xs[:n_avg]), axis=0)
        trace = _trace_from_probe(obj, p, opts)
        return ExpSearchResult(
            eta=p.eta, case=case, inner_gd_steps=state["steps"], trace=trace,
            x_bar=x_bar, f_bar=float(obj.value(x_bar)), eta0=eta0, horizon=K,
            kind=kind, eta_hi=eta_hi, psi_eta_hi=psi_hi, probes=probe_log,
        )

    first = probe(eta0)
    if first.phi <= 0.0:
        return result_from(first, case=1)

    for outer in range(1, 11):
        eta_lo = (2.0 ** -(2.0 ** outer)) * eta0
        if eta_lo == 0.0:
            break
        lo = probe(eta_lo)
        if lo.phi > 0.0:
            continue
        eta_hi = eta0
        while eta_hi > 2.0 * eta_lo:
            eta_mid = math.sqrt(eta_lo * eta_hi)
            if probe(eta_mid).phi > 0.0:
                eta_hi = eta_mid
            else:
                eta_lo = eta_mid
        winner = cache[eta_lo]
        hi_probe = cache[eta_hi]
        return result_from(winner, case=2, eta_hi=eta_hi, psi_hi=hi_probe.psi)

    raise StepSizeError(
        "exponential search found no bracket; the objective may not be smooth"
    )


def _trace_from_probe(obj, p: _Probe, opts: RunOptions) -> Trace:
    records = []
    for i, x in enumerate(p.xs):
        fx = obj.value(x)
        gn = float(np.linalg.norm(obj.gradient(x)))
        eta = p.eta if i < len(p.xs) - 1 else math.nan
        rec = IterateRecord(i, _keep(x, opts), fx, gn, eta)
        if i < len(p.ms):
            rec.D = point_wise_D(obj, p.xs[i], p.xs[i + 1]).value
        records.append(rec)
    reason = "max_iters" if not p.diverged else "error: probe diverged"
    return Trace(records, obj.tag, f"constant({p.eta:g})", None, reason,
                 meta=_base_meta(obj, p.xs[0]), objective=obj)

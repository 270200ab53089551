"""Command-line harness: experiment execution, bound evaluation, exponential
search, and multi-method comparisons.

Subcommands: ``run``, ``bounds``, ``expsearch``, ``compare``. Every run cell
(problem x rule x seed) writes a trace CSV (columns k, f, grad_norm, eta, D,
A, H, mu_star) plus a full-record JSON, and the coordinator writes a manifest
listing every output. Figures are rendered alongside the delimited output
unless ``--no-plots`` is given.

Exit codes: 0 success, 1 validation failure, 2 runtime failure in >= 1 cell.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import click
import numpy as np

from . import bounds as bounds_mod
from .exceptions import ConfigError, DirsmoothError, OptimizationRunError
from .optimizers import (
    RunOptions,
    Trace,
    exponential_search_gd,
    gd_run,
    normalized_gd_run,
)
from .problems import (
    IngestOptions,
    QuadraticObjective,
    ReferenceSolution,
    compute_reference_solution,
    default_x0,
    load_dataset_csv,
    make_power_law_quadratic,
    make_synthetic_logistic,
)
from .smoothness import SmoothnessKind
from .stepsizes import (
    Anytime,
    CauchyStep,
    ConstantStep,
    DaiStep,
    FixedHorizon,
    InverseLStep,
    PolyakStep,
    RootSolveConfig,
    StronglyAdaptedStep,
)

_VERSION = "0.1.0"

_DESK = {"d": 50, "iters": 2000, "seed_count": 5}
_PAPER = {"d": 300, "iters": 20000, "seed_count": 20}

_KIND_BY_NAME = {
    "D": SmoothnessKind.POINT_WISE_D,
    "A": SmoothnessKind.PATH_WISE_A,
    "H": SmoothnessKind.OPTIMAL_H,
    "L": SmoothnessKind.GLOBAL_L,
}


def _fail(message, code):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _check_keys(d, allowed, where):
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def validate_config(cfg, paper_scale=False, default_seed=0):
    """Validate and normalize an experiment config; fail before any compute."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    _check_keys(cfg, {"problem", "rules", "iters", "seeds", "metrics", "bounds"},
                "config")
    profile = _PAPER if paper_scale else _DESK

    problem = cfg.get("problem")
    if not isinstance(problem, dict) or "kind" not in problem:
        raise ConfigError("config needs a problem object with a 'kind'")
    problem = dict(problem)
    kind = problem["kind"]
    if kind == "power_law_quadratic":
        _check_keys(problem, {"kind", "d", "alpha", "L", "rotate"}, "problem")
        problem.setdefault("d", profile["d"])
        problem.setdefault("alpha", 3.0)
        problem.setdefault("L", 1000.0)
        problem.setdefault("rotate", True)
    elif kind == "quadratic":
        _check_keys(problem, {"kind", "diag", "B", "c"}, "problem")
        if ("diag" in problem) == ("B" in problem):
            raise ConfigError("quadratic problem needs exactly one of 'diag' or 'B'")
    elif kind == "synthetic_logistic":
        _check_keys(problem, {"kind", "n", "d", "flip"}, "problem")
        problem.setdefault("n", 200)
        problem.setdefault("d", 10)
        problem.setdefault("flip", 0.15)
    elif kind == "dataset":
        _check_keys(problem, {"kind", "path", "bias", "standardize"}, "problem")
        if "path" not in problem:
            raise ConfigError("dataset problem needs a 'path'")
        problem.setdefault("bias", False)
        problem.setdefault("standardize", False)
    else:
        raise ConfigError(f"unknown problem kind {kind!r}")

    rules = cfg.get("rules")
    if not isinstance(rules, list) or not rules:
        raise ConfigError("config needs a non-empty 'rules' list")
    norm_rules = [_validate_rule(r) for r in rules]

    iters = int(cfg.get("iters", profile["iters"]))
    if iters < 1:
        raise ConfigError("iters must be >= 1")

    seeds_cfg = cfg.get("seeds", {"master": int(default_seed),
                                  "count": profile["seed_count"]})
    if isinstance(seeds_cfg, list):
        seeds = [int(s) for s in seeds_cfg]
        seeds_meta = {"explicit": seeds}
    elif isinstance(seeds_cfg, dict):
        _check_keys(seeds_cfg, {"master", "count"}, "seeds")
        master = int(seeds_cfg.get("master", default_seed))
        count = int(seeds_cfg.get("count", profile["seed_count"]))
        if count < 1:
            raise ConfigError("seed count must be >= 1")
        ss = np.random.SeedSequence(master)
        seeds = [int(child.generate_state(1)[0]) for child in ss.spawn(count)]
        seeds_meta = {"master": master, "count": count, "derived": seeds}
    else:
        raise ConfigError("seeds must be a list or {master, count}")

    metrics = cfg.get("metrics", {"pairs": False})
    _check_keys(metrics, {"pairs"}, "metrics")
    pairs = bool(metrics.get("pairs", False))

    bound_specs = cfg.get("bounds", [])
    if not isinstance(bound_specs, list):
        raise ConfigError("bounds must be a list of selection strings")
    for sel in bound_specs:
        parse_bound_selection(sel)  # fail fast on bad selections

    return {
        "problem": problem,
        "rules": norm_rules,
        "iters": iters,
        "seeds": seeds,
        "seeds_meta": seeds_meta,
        "pairs": pairs,
        "bounds": list(bound_specs),
    }


def _validate_rule(r):
    if not isinstance(r, dict) or "rule" not in r:
        raise ConfigError("each rule must be an object with a 'rule' name")
    r = dict(r)
    name = r["rule"]
    if name == "constant":
        _check_keys(r, {"rule", "eta"}, "rule constant")
        if "eta" not in r or float(r["eta"]) <= 0:
            raise ConfigError("constant rule needs eta > 0")
    elif name == "inverse_l":
        _check_keys(r, {"rule"}, "rule inverse_l")
    elif name == "adapted":
        _check_keys(r, {"rule", "kind", "tol", "max_newton", "max_bisect",
                        "bracket_growth"}, "rule adapted")
        kind = r.setdefault("kind", "D")
        if kind not in ("D", "A"):
            raise ConfigError("adapted rule kind must be D or A")
    elif name == "polyak":
        _check_keys(r, {"rule", "gamma"}, "rule polyak")
        gamma = float(r.get("gamma", 1.5))
        if not 0.0 < gamma < 2.0:
            raise ConfigError("polyak gamma must be in (0, 2)")
        r["gamma"] = gamma
    elif name in ("cauchy", "dai"):
        _check_keys(r, {"rule"}, f"rule {name}")
    elif name == "normalized":
        _check_keys(r, {"rule", "schedule", "eta0"}, "rule normalized")
        sched = r.setdefault("schedule", "anytime")
        if sched not in ("anytime", "fixed"):
            raise ConfigError("normalized schedule must be 'anytime' or 'fixed'")
        r.setdefault("eta0", 1.0)
    else:
        raise ConfigError(f"unknown rule name {name!r}")
    return r


def build_problem(problem_cfg, seed):
    kind = problem_cfg["kind"]
    if kind == "power_law_quadratic":
        return make_power_law_quadratic(
            problem_cfg["d"], problem_cfg["alpha"], problem_cfg["L"], seed,
            rotate=problem_cfg.get("rotate", True),
        )
    if kind == "quadratic":
        B = problem_cfg.get("diag", problem_cfg.get("B"))
        return QuadraticObjective(np.asarray(B, dtype=float),
                                  problem_cfg.get("c"))
    if kind == "synthetic_logistic":
        return make_synthetic_logistic(problem_cfg["n"], problem_cfg["d"], seed,
                                       flip=problem_cfg["flip"])
    if kind == "dataset":
        opts = IngestOptions(add_bias=problem_cfg.get("bias", False),
                             standardize=problem_cfg.get("standardize", False))
        return load_dataset_csv(problem_cfg["path"], opts)
    raise ConfigError(f"unknown problem kind {kind!r}")


def _rule_label(rule_cfg):
    name = rule_cfg["rule"]
    if name == "constant":
        return f"constant_{rule_cfg['eta']:g}"
    if name == "adapted":
        return f"adapted_{rule_cfg['kind']}"
    if name == "polyak":
        return f"polyak_{rule_cfg['gamma']:g}"
    if name == "normalized":
        return f"normalized_{rule_cfg['schedule']}"
    return name


def _execute_rule(obj, x0, rule_cfg, iters, opts, ref, seed):
    name = rule_cfg["rule"]
    if name == "normalized":
        if rule_cfg["schedule"] == "fixed":
            schedule = FixedHorizon(iters)
        else:
            schedule = Anytime()
        return normalized_gd_run(obj, x0, schedule, float(rule_cfg["eta0"]),
                                 iters, opts, seed=seed)
    if name == "constant":
        rule = ConstantStep(float(rule_cfg["eta"]))
    elif name == "inverse_l":
        rule = InverseLStep()
    elif name == "adapted":
        cfg = RootSolveConfig(
            tol=float(rule_cfg.get("tol", 1e-10)),
            max_newton=int(rule_cfg.get("max_newton", 50)),
            max_bisect=int(rule_cfg.get("max_bisect", 200)),
            bracket_growth=float(rule_cfg.get("bracket_growth", 2.0)),
        )
        rule = StronglyAdaptedStep(_KIND_BY_NAME[rule_cfg["kind"]], cfg)
    elif name == "polyak":
        if ref is None:
            raise ConfigError("polyak rule needs a reference solution")
        rule = PolyakStep(float(rule_cfg["gamma"]), ref.f_star)
    elif name == "cauchy":
        rule = CauchyStep()
    elif name == "dai":
        rule = DaiStep()
    else:
        raise ConfigError(f"unknown rule name {name!r}")
    return gd_run(obj, x0, rule, iters, opts, seed=seed)


def _run_cell(payload):
    """One (problem x rule x seed) cell; module-level so workers can pickle it."""
    problem_cfg = payload["problem"]
    rule_cfg = payload["rule"]
    seed = payload["seed"]
    obj = build_problem(problem_cfg, seed)
    ref = ReferenceSolution.from_dict(payload["ref"]) if payload.get("ref") else None
    opts = RunOptions(pair_metrics=payload["pairs"], reference=ref)
    x0 = default_x0(obj.dim, seed)

    out_csv = Path(payload["out_csv"])
    out_json = Path(payload["out_json"])
    status, reason = "ok", ""
    try:
        trace = _execute_rule(obj, x0, rule_cfg, payload["iters"], opts, ref, seed)
        reason = trace.terminated_reason
    except OptimizationRunError as exc:
        trace = exc.partial_trace
        status, reason = "failed", str(exc)
    except DirsmoothError as exc:
        return {"status": "failed", "reason": str(exc), "outputs": [],
                "cell": payload["cell_id"]}
    trace.meta["problem_cfg"] = problem_cfg
    trace.meta["seed"] = seed
    trace.to_csv(out_csv)
    trace.to_json(out_json)
    return {
        "status": status,
        "reason": reason,
        "outputs": [str(out_csv), str(out_json)],
        "cell": payload["cell_id"],
    }


def attach_objective(trace: Trace):
    """Rebuild the live objective for a trace loaded from disk, when the trace
    embeds its problem config."""
    cfg = trace.meta.get("problem_cfg")
    if cfg is not None and trace.objective is None:
        trace.objective = build_problem(cfg, trace.meta.get("seed", 0))
    return trace


def parse_bound_selection(sel):
    """Parse 'name[:M][:gamma]' bound selections used by run and bounds."""
    parts = str(sel).split(":")
    name = parts[0]
    if name in ("sc_split", "sc_iterates", "convex_avg"):
        if len(parts) != 2 or parts[1] not in _KIND_BY_NAME:
            raise ConfigError(f"selection {sel!r} needs a smoothness kind D|A|H|L")
        return {"name": name, "kind": parts[1]}
    if name == "polyak":
        if len(parts) != 3 or parts[1] not in _KIND_BY_NAME:
            raise ConfigError(f"selection {sel!r} must be polyak:<M>:<gamma>")
        return {"name": name, "kind": parts[1], "gamma": float(parts[2])}
    if name == "polyak_alternate":
        if len(parts) != 2:
            raise ConfigError(f"selection {sel!r} must be polyak_alternate:<gamma>")
        return {"name": name, "gamma": float(parts[1])}
    if name == "ngd":
        if len(parts) != 2 or parts[1] not in ("D", "L"):
            raise ConfigError(f"selection {sel!r} must be ngd:D or ngd:L")
        return {"name": name, "kind": parts[1]}
    if name == "agd":
        if len(parts) != 1:
            raise ConfigError(f"selection {sel!r} takes no parameters")
        return {"name": name}
    if name == "classic_L":
        if len(parts) == 1:
            return {"name": name, "flavor": "gd"}
        if len(parts) == 2 and parts[1] in ("gd", "polyak"):
            return {"name": name, "flavor": parts[1]}
        raise ConfigError(f"selection {sel!r} must be classic_L[:gd|polyak]")
    raise ConfigError(f"unknown bound selection {sel!r}")


def evaluate_bound_selection(sel, trace, ref):
    spec = parse_bound_selection(sel)
    name = spec["name"]
    kind = _KIND_BY_NAME.get(spec.get("kind", ""))
    if name == "sc_split":
        return bounds_mod.bound_sc_split(trace, ref, kind)
    if name == "sc_iterates":
        return bounds_mod.bound_sc_iterates(trace, ref, kind)
    if name == "convex_avg":
        return bounds_mod.bound_convex_avg(trace, ref, kind)
    if name == "polyak":
        return bounds_mod.bound_polyak(trace, ref, kind, spec["gamma"])
    if name == "polyak_alternate":
        return bounds_mod.bound_polyak_alternate(trace, ref, spec["gamma"])
    if name == "ngd":
        return bounds_mod.bound_ngd(trace, ref, kind)
    if name == "agd":
        return bounds_mod.bound_agd(trace, ref)
    if name == "classic_L":
        L = trace.meta.get("global_L")
        if L is None:
            raise ConfigError("trace does not record global_L for classic_L")
        return bounds_mod.bound_classic_L(trace, ref, L, spec["flavor"])
    raise ConfigError(f"unknown bound selection {sel!r}")


def _config_hash(normalized, seed, paper_scale):
    payload = json.dumps({"cfg": normalized, "seed": seed, "paper": paper_scale},
                         sort_keys=True, default=str)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _write_manifest(out_dir, manifest):
    tmp = out_dir / "manifest.json.tmp"
    tmp.write_text(json.dumps(manifest, indent=2) + "\n")
    os.replace(tmp, out_dir / "manifest.json")


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Experiment config JSON.")
@click.option("--out", "out_dir", type=click.Path(), default="out",
              help="Output directory.")
@click.option("--seed", type=int, default=0, help="Master seed.")
@click.option("--workers", type=int, default=1, help="Concurrent run cells.")
@click.option("--paper-scale", is_flag=True, default=False,
              help="Use the full-scale experiment profile.")
@click.option("--plots/--no-plots", "plots", default=True,
              help="Render figures alongside the CSV output.")
@click.pass_context
def main(ctx, config_path, out_dir, seed, workers, paper_scale, plots):
    """Directional-smoothness optimization benchmark harness."""
    ctx.obj = {
        "config_path": config_path,
        "out": Path(out_dir),
        "seed": seed,
        "workers": max(1, workers),
        "paper_scale": paper_scale,
        "plots": plots,
    }


def _load_config(ctx):
    path = ctx.obj["config_path"]
    if path is None:
        _fail("--config is required for this command", 1)
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _fail(f"cannot read config: {exc}", 1)
    try:
        return validate_config(raw, ctx.obj["paper_scale"], ctx.obj["seed"])
    except ConfigError as exc:
        _fail(str(exc), 1)


@main.command()
@click.pass_context
def run(ctx):
    """Execute all (problem x rule x seed) cells and write traces + manifest."""
    cfg = _load_config(ctx)
    out = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()

    needs_ref = cfg["pairs"] or cfg["bounds"] or any(
        r["rule"] == "polyak" for r in cfg["rules"])
    refs = {}
    ref_files = {}
    for seed in cfg["seeds"]:
        if not needs_ref:
            break
        obj = build_problem(cfg["problem"], seed)
        try:
            ref = compute_reference_solution(obj, tol=1e-10)
        except DirsmoothError as exc:
            _fail(f"reference solve failed for seed {seed}: {exc}", 2)
        path = out / f"ref_seed{seed}.json"
        ref.save(path)
        refs[seed] = ref
        ref_files[seed] = str(path)

    payloads = []
    for seed in cfg["seeds"]:
        for rule_cfg in cfg["rules"]:
            label = _rule_label(rule_cfg)
            cell_id = f"{label}_seed{seed}"
            payloads.append({
                "cell_id": cell_id,
                "problem": cfg["problem"],
                "rule": rule_cfg,
                "seed": seed,
                "iters": cfg["iters"],
                "pairs": cfg["pairs"],
                "ref": refs[seed].to_dict() if seed in refs else None,
                "out_csv": str(out / f"trace_{cell_id}.csv"),
                "out_json": str(out / f"trace_{cell_id}.json"),
            })

    if ctx.obj["workers"] > 1:
        with concurrent.futures.ProcessPoolExecutor(ctx.obj["workers"]) as pool:
            results = list(pool.map(_run_cell, payloads))
    else:
        results = [_run_cell(p) for p in payloads]

    outputs = [p for r in results for p in r["outputs"]]
    outputs.extend(ref_files.values())

    agg_files = _write_aggregates(out, cfg, refs)
    outputs.extend(agg_files)

    bound_outputs, bound_failures, bound_skips = _run_config_bounds(out, cfg, refs)
    outputs.extend(bound_outputs)

    if ctx.obj["plots"]:
        outputs.extend(_render_run_figures(out, cfg, refs))

    failed = [r for r in results if r["status"] != "ok"]
    manifest = {
        "version": _VERSION,
        "config_hash": _config_hash(cfg, ctx.obj["seed"], ctx.obj["paper_scale"]),
        "paper_scale": ctx.obj["paper_scale"],
        "seeds": cfg["seeds_meta"],
        "cells": results,
        "bound_failures": bound_failures,
        "bound_skips": bound_skips,
        "outputs": sorted(set(outputs)),
        "wall_clock_s": round(time.perf_counter() - t0, 3),
    }
    _write_manifest(out, manifest)
    click.echo(f"ran {len(results)} cells, {len(failed)} failed; "
               f"manifest at {out / 'manifest.json'}")
    if failed or bound_failures:
        sys.exit(2)


def _iter_cell_traces(out, cfg):
    for seed in cfg["seeds"]:
        for rule_cfg in cfg["rules"]:
            cell_id = f"{_rule_label(rule_cfg)}_seed{seed}"
            path = out / f"trace_{cell_id}.json"
            if path.exists():
                yield seed, rule_cfg, attach_objective(Trace.from_json(path))


def _write_aggregates(out, cfg, refs):
    """Per-rule mean/std across seeds of gap, D and eta, aligned on k."""
    if len(cfg["seeds"]) < 2:
        return []
    written = []
    for rule_cfg in cfg["rules"]:
        label = _rule_label(rule_cfg)
        gaps, ds, etas = [], [], []
        for seed in cfg["seeds"]:
            path = out / f"trace_{label}_seed{seed}.json"
            if not path.exists():
                continue
            trace = Trace.from_json(path)
            ref = refs.get(seed)
            gaps.append(trace.gaps(ref) if ref else trace.f)
            ds.append(trace.metric("D"))
            etas.append(trace.eta)
        if not gaps:
            continue
        n = min(len(g) for g in gaps)
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            gap_m = np.mean([g[:n] for g in gaps], axis=0)
            gap_s = np.std([g[:n] for g in gaps], axis=0)
            d_m = np.nanmean([d[:n] for d in ds], axis=0) if ds else None
            d_s = np.nanstd([d[:n] for d in ds], axis=0) if ds else None
            eta_m = np.nanmean([e[:n] for e in etas], axis=0)
            eta_s = np.nanstd([e[:n] for e in etas], axis=0)
        lines = ["k,gap_mean,gap_std,D_mean,D_std,eta_mean,eta_std"]
        for k in range(n):
            cells = [str(k), repr(float(gap_m[k])), repr(float(gap_s[k]))]
            for arr in (d_m, d_s, eta_m, eta_s):
                v = float(arr[k]) if arr is not None else math.nan
                cells.append("" if math.isnan(v) else repr(v))
            lines.append(",".join(cells))
        path = out / f"aggregate_{label}.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(str(path))
    return written


def _run_config_bounds(out, cfg, refs):
    """Evaluate configured bound selections on every applicable cell trace.

    Hypothesis mismatches (e.g. a Polyak bound against a Dai trace) are
    recorded as skips, not failures: a config-level selection list naturally
    applies only to the rules whose hypotheses hold.
    """
    written, failures, skips = [], [], []
    if not cfg["bounds"]:
        return written, failures, skips
    from .exceptions import HypothesisError

    for seed, rule_cfg, trace in _iter_cell_traces(out, cfg):
        ref = refs.get(seed)
        if ref is None:
            continue
        label = _rule_label(rule_cfg)
        for sel in cfg["bounds"]:
            try:
                series = evaluate_bound_selection(sel, trace, ref)
            except HypothesisError as exc:
                skips.append({"cell": f"{label}_seed{seed}", "bound": sel,
                              "reason": str(exc)})
                continue
            except DirsmoothError as exc:
                failures.append({"cell": f"{label}_seed{seed}", "bound": sel,
                                 "error": str(exc)})
                continue
            safe = sel.replace(":", "_")
            path = out / f"bound_{safe}_{label}_seed{seed}.csv"
            series.to_csv(path)
            written.append(str(path))
    return written, failures, skips


def _render_run_figures(out, cfg, refs):
    from . import plotting

    written = []
    curves = {}
    d_curves, eta_curves = {}, {}
    for seed, rule_cfg, trace in _iter_cell_traces(out, cfg):
        if seed != cfg["seeds"][0]:
            continue
        label = _rule_label(rule_cfg)
        ref = refs.get(seed)
        curves[label] = trace.gaps(ref) if ref else trace.f
        d = trace.metric("D")
        if not np.all(np.isnan(d)):
            d_curves[label] = d
        eta_curves[label] = trace.eta
    if curves:
        path = out / "gap_curves.png"
        plotting.gap_figure(path, curves, title=f"seed {cfg['seeds'][0]}")
        written.append(str(path))
    if cfg["problem"]["kind"] in ("power_law_quadratic", "quadratic") and d_curves:
        L = build_problem(cfg["problem"], cfg["seeds"][0]).smoothness_constant()
        path = out / "quadratic_panels.png"
        plotting.quadratic_panels_figure(path, curves, d_curves, eta_curves, L=L)
        written.append(str(path))
    return written


@main.command("bounds")
@click.argument("trace_path", type=click.Path(exists=True))
@click.argument("ref_path", type=click.Path(exists=True))
@click.option("--select", "selections", multiple=True, required=True,
              help="Bound selection, e.g. polyak:H:1.5 or sc_split:D.")
@click.pass_context
def bounds_cmd(ctx, trace_path, ref_path, selections):
    """Evaluate bound series against a recorded trace and report dominance."""
    out = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    for sel in selections:
        try:
            parse_bound_selection(sel)
        except ConfigError as exc:
            _fail(str(exc), 1)
    trace = attach_objective(Trace.from_json(trace_path))
    ref = ReferenceSolution.load(ref_path)

    failures = 0
    overlay_bounds = {}
    realized = {}
    for sel in selections:
        try:
            series = evaluate_bound_selection(sel, trace, ref)
        except DirsmoothError as exc:
            click.echo(f"bound {sel}: hypothesis error: {exc}", err=True)
            failures += 1
            continue
        path = out / f"bound_{sel.replace(':', '_')}.csv"
        series.to_csv(path)
        rep = bounds_mod.dominance_report(series)
        state = "OK" if rep.ok else "VIOLATED"
        click.echo(
            f"bound {sel} [{series.inputs_tag}] -> {path.name}: dominance "
            f"{state}, max violation {rep.max_violation:.3e} at k={rep.argmax} "
            f"({rep.checked} checked, target {series.target} at "
            f"{series.designated!r})"
        )
        overlay_bounds[sel] = series.values
        realized.setdefault(f"realized ({series.designated})",
                            series.realized[series.designated])
    if ctx.obj["plots"] and overlay_bounds:
        from . import plotting

        path = out / "bounds_overlay.png"
        plotting.bounds_overlay_figure(path, realized, overlay_bounds)
        click.echo(f"figure at {path}")
    if failures:
        sys.exit(2)


@main.command()
@click.option("--eta0", type=float, required=True, help="Initial step-size.")
@click.option("--horizon", "-K", "horizon", type=int, default=200,
              help="Inner GD horizon K.")
@click.option("--kind", type=click.Choice(["D", "A", "H", "L"]), default="D")
@click.pass_context
def expsearch(ctx, eta0, horizon, kind):
    """Run exponential search on the configured problem; write a summary JSON."""
    cfg = _load_config(ctx)
    out = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    seed = cfg["seeds"][0]
    obj = build_problem(cfg["problem"], seed)
    if not obj.is_convex:
        _fail("exponential search requires a convex problem", 1)
    x0 = default_x0(obj.dim, seed)
    try:
        res = exponential_search_gd(obj, x0, eta0, horizon,
                                    _KIND_BY_NAME[kind])
    except DirsmoothError as exc:
        _fail(str(exc), 2)
    try:
        L = obj.smoothness_constant()
        budget = 2 * horizon * max(math.ceil(math.log2(math.log2(2 * eta0 * L))), 1)
    except DirsmoothError:
        L, budget = None, None
    summary = {
        "case": res.case,
        "eta": res.eta,
        "eta0": eta0,
        "horizon": horizon,
        "kind": kind,
        "inner_gd_steps": res.inner_gd_steps,
        "step_budget": budget,
        "global_L": L,
        "f_at_averaged_iterate": res.f_bar,
        "probes": [
            {k: p[k] for k in ("eta", "phi", "cached") if k in p}
            for p in res.probes
        ],
    }
    path = out / "expsearch.json"
    path.write_text(json.dumps(summary, indent=2, default=float) + "\n")
    click.echo(
        f"case {res.case}: eta = {res.eta:g} after {res.inner_gd_steps} inner "
        f"GD steps (budget {budget}); summary at {path}"
    )


@main.command()
@click.pass_context
def compare(ctx):
    """Run >= 2 rules on one problem instance and emit aligned gap columns."""
    cfg = _load_config(ctx)
    if len(cfg["rules"]) < 2:
        _fail("compare needs at least 2 rules", 1)
    out = ctx.obj["out"]
    out.mkdir(parents=True, exist_ok=True)
    seed = cfg["seeds"][0]
    obj = build_problem(cfg["problem"], seed)
    try:
        ref = compute_reference_solution(obj, tol=1e-10)
    except DirsmoothError as exc:
        _fail(f"reference solve failed: {exc}", 2)
    ref.save(out / "ref.json")
    x0 = default_x0(obj.dim, seed)

    columns = {}
    failures = 0
    for rule_cfg in cfg["rules"]:
        label = _rule_label(rule_cfg)
        opts = RunOptions(pair_metrics=cfg["pairs"], reference=ref)
        try:
            trace = _execute_rule(obj, x0, rule_cfg, cfg["iters"], opts, ref, seed)
        except OptimizationRunError as exc:
            click.echo(f"rule {label} failed: {exc}", err=True)
            failures += 1
            continue
        columns[label] = trace.gaps(ref)

    if not columns:
        sys.exit(2)
    n = max(len(v) for v in columns.values())
    labels = list(columns)
    lines = ["k," + ",".join(f"gap_{lb}" for lb in labels)]
    for k in range(n):
        cells = [str(k)]
        for lb in labels:
            v = columns[lb]
            cells.append(repr(float(v[k])) if k < len(v) else "")
        lines.append(",".join(cells))
    path = out / "compare.csv"
    path.write_text("\n".join(lines) + "\n")
    click.echo(f"compared {len(labels)} rules; table at {path}")
    if ctx.obj["plots"]:
        from . import plotting

        fig_path = out / "compare.png"
        plotting.gap_figure(fig_path, columns, title=obj.tag)
        click.echo(f"figure at {fig_path}")
    if failures:
        sys.exit(2)


if __name__ == "__main__":
    main()

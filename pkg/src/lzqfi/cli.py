"""Command line front end.

Every subcommand writes a CSV (or JSON) data file, a ``.meta.json`` sidecar
with the resolved configuration and integrator diagnostics, and a gnuplot
script that plots the data file by relative path.

Exit status: 0 on success, 2 for configuration errors, 3 for numerical
failures.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import json
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import (
    AsymptoticValidityWarning,
    DriveParams,
    LZParams,
    cfi_closed_form,
    optimal_measurement_vectors,
    qfi_controlled,
    qfi_controlled_omega_at,
    qfi_delta_improved,
    qfi_leading,
)
from .control import plan_for_delta, plan_for_omega, plan_for_v
from .dynamics import (
    TOL_MAX,
    TOL_MIN,
    IntegrationError,
    TwoLevelState,
    delta_problem,
    lz_schedule,
    omega_problem,
    periodic_schedule,
    propagate_with_derivative,
    v_problem,
)
from .fisher import MeasurementBasis, control_bound, fisher_curve
from .specfun import QuadratureError, eta1, log_gamma_complex, theta1_with_error

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
CURVE_COLUMNS = ("t", "qfi", "cfi", "p0", "p1", "bound", "analytic_overlay")
SCENARIOS = ("single", "single-controlled", "periodic", "periodic-controlled")
FIGURES = ("fig1", "fig2", "fig3")


class ConfigError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


# name -> (parser, default)
def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _int(text) -> int:
    f = float(text)
    if not math.isfinite(f) or f != int(f):
        raise ValueError(f"not an integer: {text!r}")
    return int(f)


PARAMS = {
    "v": (float, 1.0),
    "delta": (float, 1.0),
    "t0": (float, 100.0),
    "t": (float, 100.0),
    "time_unit": (str, "abs"),
    "eps0": (float, 0.0),
    "amp": (float, 1.0),
    "omega": (float, 1.0),
    "omega_c": (float, None),
    "cycles": (_int, 60),
    "frac": (float, 0.0),
    "target": (str, None),
    "v_c": (float, None),
    "delta_c": (float, None),
    "beta": (float, 0.0),
    "l": (_int, 0),
    "alpha": (float, None),
    "olch": (_bool, True),
    "tol": (float, 1e-10),
    "grid": (_int, 400),
    "control_estimate": (float, 0.9),
    # specfun
    "a_min": (float, 0.0),
    "a_max": (float, 4.0),
    # sweep
    "scenario": (str, "single"),
    "axis": (str, None),
    "min": (float, None),
    "max": (float, None),
    "count": (_int, 10),
    "spacing": (str, "linear"),
    "jobs": (_int, 1),
}
_FLOAT_PARAMS = [k for k, (p, _d) in PARAMS.items() if p is float]


# --------------------------------------------------------------------------
# configuration

def read_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"config {path}", str(exc)) from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}", "expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in PARAMS:
            raise ConfigError(f"{path}:{lineno}", f"unknown key {key!r}")
        out[key] = (value, f"{path}:{lineno}")
    return out


def resolve(file_values: dict, flag_values: dict) -> dict:
    """Defaults, then file values, then flags."""
    resolved = {k: d for k, (_p, d) in PARAMS.items()}
    for key, (text, where) in file_values.items():
        parser = PARAMS[key][0]
        try:
            resolved[key] = parser(text)
        except ValueError as exc:
            raise ConfigError(f"{where} ({key})", str(exc)) from None
    for key, value in flag_values.items():
        if value is not None:
            resolved[key] = value
    return resolved


def _need(cond: bool, name: str, msg: str):
    if not cond:
        raise ConfigError(name, msg)


def validate(scenario: str, p: dict) -> dict:
    """Check a resolved parameter map and fill scenario defaults."""
    p = dict(p)
    for name in _FLOAT_PARAMS:
        val = p.get(name)
        if val is not None:
            _need(math.isfinite(val), name, "must be finite")
    _need(TOL_MIN <= p["tol"] <= TOL_MAX, "tol",
          f"must lie in [{TOL_MIN:g}, {TOL_MAX:g}]")
    _need(2 <= p["grid"] <= 1_000_000, "grid", "must lie in [2, 1000000]")
    _need(p["time_unit"] in ("abs", "tau"), "time_unit", "must be 'abs' or 'tau'")
    if scenario in ("single", "single-controlled"):
        _need(p["v"] > 0, "v", "must be positive")
        _need(p["delta"] >= 0, "delta", "must be non-negative")
        scale = 1.0
        if p["time_unit"] == "tau":
            scale = max(p["delta"] / (2 * p["v"]), 1 / math.sqrt(p["v"]))
        t0, t = p["t0"] * scale, p["t"] * scale
        if scenario == "single":
            _need(t > -t0, "span", f"zero-length or reversed span [{-t0:g}, {t:g}]")
            _need(t0 > 0, "t0", "must be positive")
        else:
            _need(t > 0, "span", f"zero-length span [{-t:g}, {t:g}]")
        p["t0_abs"], p["t_abs"] = t0, t
        target = (p["target"] or "delta").lower()
        _need(target in ("delta", "v"), "target", "must be 'delta' or 'v'")
        p["target"] = target
        if p["alpha"] is None:
            p["alpha"] = math.pi
        for name in ("v_c", "delta_c"):
            if p[name] is not None:
                _need(p[name] > 0, name, "must be positive")
    elif scenario in ("periodic", "periodic-controlled"):
        _need(p["amp"] > 0, "amp", "must be positive")
        _need(p["omega"] > 0, "omega", "must be positive")
        _need(p["delta"] >= 0, "delta", "must be non-negative")
        _need(p["cycles"] >= 1, "cycles", "must be >= 1")
        _need(0 <= p["frac"] < 1, "frac", "must lie in [0, 1)")
        if p["omega_c"] is None:
            p["omega_c"] = p["omega"]
        _need(p["omega_c"] > 0, "omega_c", "must be positive")
        target = (p["target"] or "omega").lower()
        _need(target == "omega", "target", "periodic scenarios estimate omega")
        p["target"] = target
        if p["alpha"] is None:
            p["alpha"] = 0.5 * math.pi
        span = (p["cycles"] + p["frac"]) * math.pi / p["omega_c"]
        _need(span > 0, "span", "zero-length span")
    elif scenario == "specfun":
        _need(p["a_max"] >= p["a_min"], "a_max", "must be >= a_min")
    else:
        raise ConfigError("scenario", f"unknown scenario {scenario!r}")
    return p


# --------------------------------------------------------------------------
# scenario evaluation

@dataclass
class Dataset:
    columns: dict
    diagnostics: dict = field(default_factory=dict)
    markers: dict = field(default_factory=dict)


def _lz(p) -> LZParams:
    return LZParams(p["v"], p["delta"], p["t0_abs"], p["t_abs"])


def _diag(traj) -> dict:
    return {"max_norm_drift": traj.max_norm_drift, "steps": traj.steps,
            "rejected_steps": traj.rejected_steps, "local_tol": traj.local_tol}


def _overlay(times, fn) -> np.ndarray:
    out = np.full(times.shape, np.nan)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AsymptoticValidityWarning)
        for i, t in enumerate(times):
            try:
                out[i] = fn(float(t))
            except ValueError:
                pass
    return out


def _curve_dataset(traj, curve, overlay) -> Dataset:
    cols = {"t": traj.times, "qfi": curve.qfi, "cfi": curve.cfi, "p0": curve.p0,
            "p1": curve.p1, "bound": curve.bound, "analytic_overlay": overlay}
    diag = _diag(traj)
    if curve.divergent is not None:
        diag["divergent_cfi_points"] = int(np.count_nonzero(curve.divergent))
    return Dataset(cols, diag)


def run_single(p) -> Dataset:
    params = _lz(p)
    span = (-params.t0, params.t_end)
    problem = delta_problem(p["delta"]) if p["target"] == "delta" else v_problem(p["v"])
    psi0 = TwoLevelState.superposition(p["alpha"], p["beta"])
    traj = propagate_with_derivative(lz_schedule(p["v"], p["delta"]), problem, psi0,
                                     span, p["tol"], p["grid"])
    bound = control_bound(problem, span, traj.times)
    curve = fisher_curve(traj, MeasurementBasis.sigma_z(), bound)
    overlay = None
    if math.isclose(p["alpha"], math.pi):
        # asymptotic QFI from a ground start, only past the validity threshold
        tau = params.tau

        def fn(t):
            if t < 20 * tau:
                return math.nan
            q = LZParams(params.v, params.delta, params.t0, t)
            return qfi_delta_improved(q) if p["target"] == "delta" else qfi_leading("v", q)

        overlay = _overlay(traj.times, fn)
    ds = _curve_dataset(traj, curve, overlay)
    ds.markers["cfi_closed_form_at_T"] = cfi_closed_form(p["target"], params)
    return ds


def run_single_controlled(p, olch: bool = True) -> Dataset:
    T = p["t_abs"]
    params = LZParams(p["v"], p["delta"], T, T)
    if p["target"] == "delta":
        v_c = p["v_c"]
        plan = plan_for_delta(params, p["beta"], v_c, p["delta_c"])
        scen = "controlled-delta"
    else:
        v_c = p["v_c"]
        plan = plan_for_v(params, p["beta"], v_c, p["l"])
        if not olch:
            plan = type(plan)(plan.schedule.without_pulses(), plan.initial_state, plan.beta,
                              plan.control_estimates, plan.winding, plan.span, plan.problem)
        scen = "controlled-v"
    traj = propagate_with_derivative(plan.schedule, plan.problem, plan.initial_state,
                                     plan.span, p["tol"], p["grid"])
    bound = control_bound(plan.problem, plan.span, traj.times)

    def basis(t):
        return optimal_measurement_vectors(scen, t, params, p["beta"], v_c=v_c)

    # without the swap the closed-form basis is not the optimal one; report QFI only
    curve = fisher_curve(traj, basis if olch else None, bound)
    overlay = _overlay(traj.times, lambda t: qfi_controlled(p["target"], t, T)) if olch else None
    ds = _curve_dataset(traj, curve, overlay)
    ds.markers["control_estimates"] = plan.control_estimates
    return ds


def _drive(p) -> DriveParams:
    return DriveParams(p["eps0"], p["amp"], p["omega"], p["delta"], p["cycles"],
                       p["frac"], p["omega_c"])


def run_periodic(p) -> Dataset:
    d = _drive(p)
    span = (0.0, d.T)
    problem = omega_problem(d.amp, d.omega)
    psi0 = TwoLevelState.superposition(p["alpha"], p["beta"])
    traj = propagate_with_derivative(periodic_schedule(d.eps0, d.amp, d.omega, d.delta),
                                     problem, psi0, span, p["tol"], p["grid"])
    bound = control_bound(problem, span, traj.times)
    curve = fisher_curve(traj, MeasurementBasis.sigma_z(), bound)
    return _curve_dataset(traj, curve, None)


def run_periodic_controlled(p) -> Dataset:
    d = _drive(p)
    olch = p["olch"]
    plan = plan_for_omega(d, p["beta"], p["l"], olch)
    traj = propagate_with_derivative(plan.schedule, plan.problem, plan.initial_state,
                                     plan.span, p["tol"], p["grid"])
    bound = control_bound(plan.problem, plan.span, traj.times)

    def basis(t):
        return optimal_measurement_vectors("controlled-omega", t, d, p["beta"],
                                           with_olch=olch)

    curve = fisher_curve(traj, basis, bound)
    overlay = _overlay(traj.times, lambda t: qfi_controlled_omega_at(d, t, olch))
    ds = _curve_dataset(traj, curve, overlay)
    ds.markers["pulses"] = len(plan.schedule.pulses)
    return ds


def run_specfun(p) -> Dataset:
    a = np.linspace(p["a_min"], p["a_max"], p["grid"])
    th = np.empty_like(a)
    err = np.empty_like(a)
    et = np.empty_like(a)
    lm = np.empty_like(a)
    ar = np.empty_like(a)
    for i, x in enumerate(a):
        th[i], err[i] = theta1_with_error(x)
        et[i] = eta1(x)
        g = log_gamma_complex(1.0 - 1j * x)
        lm[i], ar[i] = g.log_modulus, g.argument
    return Dataset({"a": a, "theta1": th, "theta1_error": err, "eta1": et,
                    "log_abs_gamma": lm, "arg_gamma": ar})


RUNNERS = {
    "single": run_single,
    "single-controlled": run_single_controlled,
    "periodic": run_periodic,
    "periodic-controlled": run_periodic_controlled,
    "specfun": run_specfun,
}


# --------------------------------------------------------------------------
# output

def format_value(x) -> str:
    return "%.17g" % x


def present_columns(columns: dict) -> list[str]:
    keep = []
    for name, col in columns.items():
        if col is None:
            continue
        arr = np.asarray(col, dtype=float)
        if arr.size and np.all(np.isnan(arr)):
            continue
        keep.append(name)
    return keep


def render_csv(columns: dict) -> str:
    names = present_columns(columns)
    arrays = [np.asarray(columns[n], dtype=float) for n in names]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in zip(*arrays):
        w.writerow([format_value(x) for x in row])
    return buf.getvalue()


def parse_csv(text: str) -> dict:
    rows = list(csv.reader(io.StringIO(text)))
    names = rows[0]
    data = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float).reshape(-1, len(names))
    return {n: data[:, i] for i, n in enumerate(names)}


def render_json(columns: dict) -> str:
    names = present_columns(columns)

    def clean(x):
        x = float(x)
        return x if math.isfinite(x) else None

    body = {"columns": names,
            "data": {n: [clean(x) for x in np.asarray(columns[n], dtype=float)] for n in names}}
    return json.dumps(body, indent=1) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def gnuplot_script(data_name: str, names: list[str], title: str) -> str:
    x = names[0]
    ys = [n for n in names[1:] if n not in ("p0", "p1")]
    lines = [
        f"# {title}",
        "set datafile separator ','",
        "set key autotitle columnhead",
        f"set xlabel '{x}'",
        "set logscale y",
        "set format y '10^{%L}'",
    ]
    plots = [f"'{data_name}' using '{x}':'{y}' with lines" for y in ys]
    if plots:
        lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def write_outputs(ds: Dataset, out: Path, fmt: str, config: dict, title: str) -> list[str]:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    text = render_csv(ds.columns) if fmt == "csv" else render_json(ds.columns)
    out.write_text(text)
    names = present_columns(ds.columns)
    written = [out.name]
    if fmt == "csv":
        gp = out.with_suffix(".gp")
        gp.write_text(gnuplot_script(out.name, names, title))
        written.append(gp.name)
    meta = {
        "program": "lzqfi",
        "version": __version__,
        "title": title,
        "config": _jsonable(config),
        "columns": names,
        "diagnostics": _jsonable(ds.diagnostics),
        "markers": _jsonable(ds.markers),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    side = out.with_name(out.stem + ".meta.json")
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    written.append(side.name)
    return written


# --------------------------------------------------------------------------
# figures and sweeps

def figure_runs(name: str, p: dict) -> list[tuple[str, str, dict]]:
    """``(file stem, scenario, params)`` for each curve of a figure preset."""
    base = dict(p)
    if name in ("fig1", "fig2"):
        target = "delta" if name == "fig1" else "v"
        base.update(v=1.0, delta=1.0, t0=100.0, t=100.0, time_unit="abs", target=target)
        nocontrol = dict(base, alpha=math.pi)
        # controlled runs start in (|+x> - |-x>)/sqrt 2 = |1> for delta
        controlled = dict(base, beta=math.pi if target == "delta" else 0.0)
        runs = [(f"{name}_nocontrol", "single", nocontrol),
                (f"{name}_controlled", "single-controlled", controlled)]
        if target == "delta":
            mis = dict(controlled, v_c=p["control_estimate"] * base["v"])
            runs.append((f"{name}_mismatch", "single-controlled", mis))
        else:
            opt = dict(controlled, v_c=p["control_estimate"] * base["v"])
            runs.append((f"{name}_estimate", "single-controlled", opt))
            runs.append((f"{name}_no_olch", "single-controlled-no-olch", controlled))
        return runs
    if name == "fig3":
        base.update(eps0=0.0, amp=1.0, omega=1.0, delta=0.1, cycles=60, frac=0.0,
                    omega_c=None, target="omega", alpha=0.5 * math.pi, beta=0.0)
        return [("fig3_nocontrol", "periodic", base),
                ("fig3_och", "periodic-controlled", dict(base, olch=False)),
                ("fig3_och_olch", "periodic-controlled", dict(base, olch=True))]
    raise ConfigError("figure", f"unknown figure {name!r}; choose from {FIGURES}")


def _evaluate(scenario: str, p: dict) -> Dataset:
    if scenario == "single-controlled-no-olch":
        return run_single_controlled(validate("single-controlled", p), olch=False)
    return RUNNERS[scenario](validate(scenario, p))


def _sweep_point(args):
    scenario, p = args
    ds = _evaluate(scenario, p)
    row = {}
    for name in CURVE_COLUMNS[1:]:
        col = ds.columns.get(name)
        row[name] = math.nan if col is None else float(np.asarray(col)[-1])
    return row, ds.diagnostics


def sweep_values(p: dict) -> np.ndarray:
    lo, hi, n = p["min"], p["max"], p["count"]
    _need(lo is not None and hi is not None, "axis", "sweep needs --min and --max")
    _need(n >= 1, "count", "must be >= 1")
    if n == 1:
        return np.array([lo])
    if p["spacing"] == "log":
        _need(lo > 0 and hi > 0, "min", "log spacing needs positive bounds")
        return np.geomspace(lo, hi, n)
    _need(p["spacing"] == "linear", "spacing", "must be 'linear' or 'log'")
    return np.linspace(lo, hi, n)


def sweep_point_params(p: dict, axis: str, value: float) -> dict:
    q = dict(p)
    if axis == "gamma":
        _need(value > 0, "gamma", "must be positive")
        _need(q["delta"] > 0, "delta", "gamma sweeps hold delta fixed and need delta > 0")
        q["v"] = q["delta"] ** 2 / (4.0 * value)
    else:
        parser = PARAMS[axis][0]
        q[axis] = parser(value) if parser is not float else float(value)
    q["grid"] = 2
    return q


def run_sweep(p: dict) -> Dataset:
    axis = p["axis"]
    _need(axis is not None, "axis", "sweep needs --axis")
    _need(axis == "gamma" or (axis in PARAMS and PARAMS[axis][0] in (float, _int)),
          "axis", f"cannot sweep {axis!r}")
    scenario = p["scenario"]
    _need(scenario in SCENARIOS, "scenario", f"must be one of {SCENARIOS}")
    values = sweep_values(p)
    jobs = [(scenario, sweep_point_params(p, axis, x)) for x in values]
    # validate every point up front so config errors surface before any work
    for sc, q in jobs:
        validate(sc, q)
    if p["jobs"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=p["jobs"]) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]
    cols = {axis: values}
    for name in CURVE_COLUMNS[1:]:
        cols[name] = np.array([r[name] for r, _d in results])
    drift = max(d.get("max_norm_drift", 0.0) for _r, d in results)
    steps = sum(d.get("steps", 0) for _r, d in results)
    return Dataset(cols, {"max_norm_drift": drift, "steps": steps, "points": len(values)})


# --------------------------------------------------------------------------
# argument parsing

def _add_param_flags(ap: argparse.ArgumentParser, names):
    for name in names:
        parser, _default = PARAMS[name]
        flag = "--" + name.replace("_", "-")
        if parser is _bool:
            ap.add_argument(flag, dest=name, default=None,
                            action=argparse.BooleanOptionalAction)
        else:
            ap.add_argument(flag, dest=name, default=None,
                            type=parser if parser is not str else str)


_COMMON = ["tol", "grid", "beta"]
_LZ = ["v", "delta", "t0", "t", "time_unit", "target", "alpha"]
_DRIVE = ["eps0", "amp", "omega", "omega_c", "cycles", "frac", "alpha"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lzqfi",
                                 description="Fisher information of driven two-level systems.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, params):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="key = value parameter file")
        sp.add_argument("--out", "-o", help="output file (or directory for figure)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        _add_param_flags(sp, params)
        return sp

    add("single", "one LZ sweep without control", _LZ + _COMMON)
    add("single-controlled", "one LZ sweep under the optimal control plan",
        _LZ + _COMMON + ["v_c", "delta_c", "l"])
    add("periodic", "periodic drive without control", _DRIVE + _COMMON + ["delta"])
    add("periodic-controlled", "periodic drive with OCH and optional swaps",
        _DRIVE + _COMMON + ["delta", "l", "olch"])
    add("specfun", "tabulate theta1, eta1 and log Gamma(1 - i a)",
        ["a_min", "a_max", "grid"])
    fp = add("figure", "reproduce a figure dataset", ["tol", "grid", "control_estimate"])
    fp.add_argument("name", choices=FIGURES)
    add("sweep", "scan one parameter and record endpoint values",
        sorted(set(_LZ + _DRIVE + _COMMON + ["delta", "v_c", "delta_c", "l", "olch",
                                              "scenario", "axis", "min", "max", "count",
                                              "spacing", "jobs"])))
    return ap


def _flag_values(ns) -> dict:
    return {k: getattr(ns, k) for k in PARAMS if hasattr(ns, k)}


def main(argv=None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    try:
        file_vals = read_config_file(ns.config) if ns.config else {}
        p = resolve(file_vals, _flag_values(ns))
        cmd = ns.command
        if cmd == "figure":
            outdir = Path(ns.out or ns.name)
            written = []
            runs = figure_runs(ns.name, p)
            for stem, scen, q in runs:
                validate("single-controlled" if scen == "single-controlled-no-olch" else scen, q)
            for stem, scen, q in runs:
                ds = _evaluate(scen, q)
                cfg = {"command": "figure", "figure": ns.name, "scenario": scen,
                       "params": q}
                written += write_outputs(ds, outdir / f"{stem}.{ns.format}", ns.format,
                                         cfg, f"{ns.name} {stem}")
        elif cmd == "sweep":
            ds = run_sweep(p)
            out = Path(ns.out or f"sweep.{ns.format}")
            cfg = {"command": "sweep", "params": p}
            written = write_outputs(ds, out, ns.format, cfg, f"sweep {p['axis']}")
        else:
            q = validate(cmd, p)
            ds = RUNNERS[cmd](q)
            out = Path(ns.out or f"{cmd}.{ns.format}")
            cfg = {"command": cmd, "params": q}
            written = write_outputs(ds, out, ns.format, cfg, cmd)
    except ConfigError as exc:
        print(f"lzqfi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, QuadratureError, FloatingPointError, OverflowError) as exc:
        print(f"lzqfi: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for name in written:
        print(name)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Config-driven scenario runner.

    schrobundle run --config cfg.json [--out-dir DIR] [--seed N]
    schrobundle validate --config cfg.json
    schrobundle list-scenarios

Each run writes ``<scenario>.csv`` and ``summary.json`` into the output
directory.  Exit status: 0 when every metric meets its tolerance, 1 on a
tolerance failure, 2 on a configuration error.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bundle, gauge, oracles
from .gauge import GaussianPacket, PlaneWave, sample_wave, snap_boost
from .operator import HarmonicPotential, TabulatedPotential, UniformField, ZeroPotential
from .solver import SolverConfig, covariance_experiment, evolve
from .spacetime import Event, InertialFrame, Params, Velocity

log = logging.getLogger("schrobundle")

SCENARIOS = {
    "covariance": "evolve-then-boost vs boost-then-evolve on the grid",
    "oracle-compare": "free Gaussian evolution against the analytic packet",
    "bundle-props": "randomised action / representative-independence trials",
    "uniqueness": "quadrature reconstruction of the gauge phase and the c-defect",
    "evolve": "plain evolution with norm and energy diagnostics",
}

CSV_COLUMNS = {
    "covariance": ("t", "l2_error", "linf_error"),
    "evolve": ("t", "norm", "energy"),
    "uniqueness": ("probe_index", "quadrature_error", "defect_c0", "defect_c1"),
    "bundle-props": ("trial", "max_defect"),
    "oracle-compare": ("t", "l2_error_vs_oracle"),
}

EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


class ToleranceFailure(RuntimeError):
    pass


# --------------------------------------------------------------------------
# config parsing


@dataclass
class ScenarioConfig:
    scenario: str
    params: Params
    solver: SolverConfig | None = None
    boost: np.ndarray | None = None
    seed: int = 0
    out_dir: Path = Path("out")
    initial: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    trials: int = 200


def _get(d, key, path, kind=None, default=...):
    if not isinstance(d, dict):
        raise ConfigError(f"{path}: expected an object")
    if key not in d:
        if default is ...:
            raise ConfigError(f"{path}.{key}: required field missing")
        return default
    val = d[key]
    if kind is not None and (not isinstance(val, kind) or isinstance(val, bool)):
        name = "number" if kind == (int, float) else kind.__name__
        raise ConfigError(f"{path}.{key}: expected {name}")
    return val


def _vector(val, path, dim):
    if not isinstance(val, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in val):
        raise ConfigError(f"{path}: expected a list of numbers")
    if len(val) != dim:
        raise ConfigError(f"{path}: expected {dim} components, got {len(val)}")
    return np.array(val, dtype=float)


def _number(d, key, path, default=..., positive=False):
    val = _get(d, key, path, (int, float), default)
    if positive and not val > 0:
        raise ConfigError(f"{path}.{key}: must be positive")
    return float(val)


def _frame(d, path, dim):
    if d is None:
        return InertialFrame.fiducial(dim)
    origin = _get(d, "origin", path, dict, {"y": [0.0] * dim, "t": 0.0})
    y = _vector(_get(origin, "y", f"{path}.origin", list, [0.0] * dim), f"{path}.origin.y", dim)
    t = _number(origin, "t", f"{path}.origin", 0.0)
    vel = _vector(_get(d, "velocity", path, list, [0.0] * dim), f"{path}.velocity", dim)
    return InertialFrame(Event(y, t), Velocity(vel))


def _potential(d, path, dim, frame):
    kind = _get(d, "kind", path, str)
    if kind == "zero":
        return ZeroPotential(dim)
    if kind == "uniform_field":
        return UniformField(_vector(_get(d, "gradient", path, list), f"{path}.gradient", dim))
    if kind == "harmonic":
        wl = _frame(d.get("worldline_frame"), f"{path}.worldline_frame", dim) if "worldline_frame" in d else frame
        return HarmonicPotential(wl, _number(d, "stiffness", path, positive=True))
    if kind == "tabulated":
        axes = _get(d, "axes", path, list)
        if len(axes) != dim + 1:
            raise ConfigError(f"{path}.axes: expected {dim + 1} axes (spatial then time)")
        try:
            return TabulatedPotential(tuple(axes), np.array(_get(d, "values", path, list), dtype=float))
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None
    raise ConfigError(f"{path}.kind: unknown potential kind {kind!r}")


def _solver(d, params):
    path = "solver"
    dim = params.dim
    frame = _frame(d.get("frame"), f"{path}.frame", dim)
    pot = _potential(_get(d, "potential", path, dict, {"kind": "zero"}), f"{path}.potential", dim, frame)
    n_points = _get(d, "n_points", path, int)
    try:
        return SolverConfig(
            box_length=_number(d, "box_length", path, positive=True),
            n_points=n_points,
            dt=_number(d, "dt", path, positive=True),
            t_final=_number(d, "t_final", path, positive=True),
            frame=frame,
            potential=pot,
            params=params,
            record_every=_get(d, "record_every", path, int, 1),
        )
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def _initial(d, params):
    path = "initial"
    dim = params.dim
    kind = _get(d, "kind", path, str)
    if kind == "gaussian":
        _vector(_get(d, "center", path, list), f"{path}.center", dim)
        _vector(_get(d, "k0", path, list), f"{path}.k0", dim)
        _number(d, "width", path, positive=True)
        _number(d, "t0", path, 0.0)
    elif kind == "plane_wave":
        _vector(_get(d, "k", path, list), f"{path}.k", dim)
    else:
        raise ConfigError(f"{path}.kind: unknown initial wave {kind!r}")
    return dict(d)


def build_initial_wave(spec: dict, params: Params):
    if spec["kind"] == "gaussian":
        return GaussianPacket.make(spec["center"], spec["width"], spec["k0"], params, spec.get("t0", 0.0))
    return PlaneWave.free(spec["k"], params)


def parse_config(raw: dict, out_dir=None, seed=None) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config: top level must be a JSON object")
    scenario = _get(raw, "scenario", "config", str)
    if scenario not in SCENARIOS:
        raise ConfigError(f"config.scenario: unknown scenario {scenario!r}; choose from {sorted(SCENARIOS)}")
    p = _get(raw, "params", "config", dict, {})
    try:
        params = Params(
            hbar=_number(p, "hbar", "params", 1.0),
            mass=_number(p, "mass", "params", 1.0),
            dim=_get(p, "dim", "params", int, Params().dim),
        )
    except ValueError as exc:
        raise ConfigError(f"params: {exc}") from None

    solver = None
    if "solver" in raw:
        solver = _solver(_get(raw, "solver", "config", dict), params)
    elif scenario in ("covariance", "oracle-compare", "evolve"):
        raise ConfigError(f"config.solver: required for scenario {scenario!r}")

    boost = None
    if "boost" in raw:
        boost = _vector(raw["boost"], "config.boost", params.dim)
    elif scenario in ("covariance", "uniqueness"):
        raise ConfigError(f"config.boost: required for scenario {scenario!r}")

    initial = {}
    if solver is not None:
        default = {"kind": "gaussian", "center": [0.0] * params.dim, "width": 2.0,
                   "k0": [1.0] + [0.0] * (params.dim - 1), "t0": 0.0}
        initial = _initial(_get(raw, "initial", "config", dict, default), params)
        if scenario == "oracle-compare":
            if initial["kind"] != "gaussian":
                raise ConfigError("config.initial: oracle-compare needs a gaussian initial wave")
            if not isinstance(solver.potential, ZeroPotential):
                raise ConfigError("solver.potential: oracle-compare needs the zero potential")

    seed_val = _get(raw, "seed", "config", int, 0) if seed is None else seed
    if seed_val < 0:
        raise ConfigError("config.seed: must be a non-negative integer")
    tolerances = _get(raw, "tolerances", "config", dict, {})
    for k, v in tolerances.items():
        if not isinstance(v, (int, float)) or isinstance(v, bool) or v < 0:
            raise ConfigError(f"config.tolerances.{k}: must be a non-negative number")
    trials = _get(raw, "trials", "config", int, 200)
    if trials < 1:
        raise ConfigError("config.trials: must be positive")
    return ScenarioConfig(
        scenario=scenario,
        params=params,
        solver=solver,
        boost=boost,
        seed=int(seed_val),
        out_dir=Path(out_dir if out_dir is not None else _get(raw, "out_dir", "config", str, "out")),
        initial=initial,
        tolerances=dict(tolerances),
        trials=trials,
    )


def load_config(path, out_dir=None, seed=None) -> ScenarioConfig:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return parse_config(raw, out_dir=out_dir, seed=seed)


# --------------------------------------------------------------------------
# scenarios; each returns (rows, metrics, default tolerances, extras)


def _solver_initial(cfg: ScenarioConfig):
    s = cfg.solver
    wave = build_initial_wave(cfg.initial, cfg.params)
    return wave, sample_wave(wave, s.box_length, s.n_points, 0.0)


def run_covariance(cfg: ScenarioConfig):
    s = cfg.solver
    v = snap_boost(cfg.boost, s.box_length, cfg.params)
    _, psi0 = _solver_initial(cfg)
    rep = covariance_experiment(psi0, v, s)
    rows = list(zip(rep.times, rep.l2_errors, rep.linf_errors))
    metrics = {"final_l2_error": rep.final_l2, "boundary_tail": rep.boundary_tail}
    free = isinstance(s.potential, ZeroPotential)
    tols = {"final_l2_error": 1e-6 if free else 1e-5, "boundary_tail": 1e-12}
    return rows, metrics, tols, {"commensurate_boost_used": v.tolist(), "requested_boost": cfg.boost.tolist()}


def run_oracle_compare(cfg: ScenarioConfig):
    s = cfg.solver
    wave, psi0 = _solver_initial(cfg)
    res = evolve(psi0, s)
    rows = []
    for snap in res.snapshots:
        exact = sample_wave(wave, s.box_length, s.n_points, snap.time)
        rows.append((snap.time, gauge.l2_distance(snap, exact) / exact.norm()))
    metrics = {"final_l2_error_vs_oracle": rows[-1][1], "norm_drift": res.norm_drift(), "boundary_tail": res.boundary_tail}
    tols = {"final_l2_error_vs_oracle": 1e-6, "norm_drift": 1e-12, "boundary_tail": 1e-12}
    return rows, metrics, tols, {}


def run_evolve(cfg: ScenarioConfig):
    _, psi0 = _solver_initial(cfg)
    res = evolve(psi0, cfg.solver)
    rows = list(zip(res.times, res.norms, res.energy))
    metrics = {"norm_drift": res.norm_drift(), "max_kinetic_phase": res.max_kinetic_phase}
    return rows, metrics, {"norm_drift": 1e-12}, {"boundary_tail": res.boundary_tail}


def run_uniqueness(cfg: ScenarioConfig):
    params, v = cfg.params, cfg.boost
    dim = params.dim
    rng = np.random.default_rng(cfg.seed)
    ends_y = rng.uniform(-5.0, 5.0, size=(20, dim))
    ends_t = rng.uniform(0.0, 2.0, size=20)
    F = gauge.GaugePhase(v, params)
    paths = (oracles.axis_path, oracles.spatial_first_path)
    const = PlaneWave.constant(dim)
    rows = []
    for i, (y, t) in enumerate(zip(ends_y, ends_t)):
        exact = complex(F(y, t))
        qerr = max(abs(oracles.reconstruct_gauge_phase(v, params, path)(y, t) - exact) for path in paths)
        probe = (y[None, :], np.array([t]))
        d0 = gauge.representation_defect(v, v, 0.0, const, params, probe)
        d1 = gauge.representation_defect(v, v, 1.0, const, params, probe)
        rows.append((i, qerr, d0, d1))
    target = abs(math.e**2 - math.e)
    d1_full = gauge.representation_defect(v, v, 1.0, const, params)
    d0_full = gauge.representation_defect(v, v, 0.0, const, params)
    metrics = {
        "quadrature_max_error": max(r[1] for r in rows),
        "defect_c0": max(d0_full, max(r[2] for r in rows)),
        "defect_c1": d1_full,
        "defect_c1_deviation": abs(d1_full - target),
    }
    tols = {"quadrature_max_error": 1e-10, "defect_c0": 1e-12, "defect_c1_deviation": 1e-8}
    return rows, metrics, tols, {"defect_c1_expected": target}


def bundle_trial(rng: np.random.Generator, params: Params) -> float:
    """One randomised well-definedness trial; returns the largest observed defect."""
    dim = params.dim
    x0 = Event(rng.uniform(-1, 1, dim), rng.uniform(-1, 1))

    def vel():
        return Velocity(rng.uniform(-2, 2, dim))

    def cz():
        return complex(*rng.uniform(-2, 2, 2))

    x = Event(rng.uniform(-5, 5, dim), rng.uniform(-2, 2))
    e1 = bundle.BundleElement(vel(), x, cz())
    e2 = bundle.BundleElement(vel(), x, cz())
    v, v2 = rng.uniform(-2, 2, dim), rng.uniform(-2, 2, dim)
    a = cz()
    u = vel()
    d = []

    # action law and inverse
    lhs = bundle.act(v2, bundle.act(v, e1, params, x0), params, x0)
    rhs = bundle.act(v + v2, e1, params, x0)
    d.append(abs(lhs.z - rhs.z) + np.max(np.abs(lhs.u.w - rhs.u.w)))
    d.append(abs(bundle.act(-v, bundle.act(v, e1, params, x0), params, x0).z - e1.z))

    # representative independence
    e1s, e2s = bundle.act(v, e1, params, x0), bundle.act(v2, e2, params, x0)
    d.append(bundle.orbit_distance(bundle.add(e1, e2, params, x0), bundle.add(e1s, e2s, params, x0), params, x0))
    d.append(bundle.orbit_distance(bundle.scale(a, e1), bundle.scale(a, e1s), params, x0))
    d.append(abs(bundle.fiber_norm(e1) - bundle.fiber_norm(e1s)))
    y1, t1, z1 = bundle.trivialize(u, e1, params, x0)
    y2, t2, z2 = bundle.trivialize(u, e1s, params, x0)
    d.append(abs(z1 - z2) + np.max(np.abs(y1 - y2)) + abs(t1 - t2))

    # transition compatibility
    phi = gauge.transition_map(u, v, params)
    yy, tt, zz = phi(y1, t1, z1)
    y3, t3, z3 = bundle.trivialize(u + v, e1, params, x0)
    d.append(abs(complex(zz) - z3) + np.max(np.abs(yy - y3)) + abs(float(tt) - t3))
    return float(max(d))


def run_bundle_props(cfg: ScenarioConfig):
    rng = np.random.default_rng(cfg.seed)
    rows = [(i, bundle_trial(rng, cfg.params)) for i in range(cfg.trials)]
    return rows, {"max_defect": max(r[1] for r in rows)}, {"max_defect": 1e-12}, {"trials": cfg.trials}


RUNNERS = {
    "covariance": run_covariance,
    "oracle-compare": run_oracle_compare,
    "bundle-props": run_bundle_props,
    "uniqueness": run_uniqueness,
    "evolve": run_evolve,
}


# --------------------------------------------------------------------------
# output


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _json(obj, indent=0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_json(v, indent + 1) for v in obj) + "]"
    if obj is None:
        return "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        return "null"
    return fmt(obj)


def write_csv(path: Path, columns, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(x) for x in r])


def run_scenario(cfg: ScenarioConfig) -> dict:
    start = time.perf_counter()
    rows, metrics, tols, extras = RUNNERS[cfg.scenario](cfg)
    tols.update({k: float(v) for k, v in cfg.tolerances.items()})
    failing = [k for k, bound in tols.items() if k in metrics and not metrics[k] <= bound]
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(cfg.out_dir / f"{cfg.scenario}.csv", CSV_COLUMNS[cfg.scenario], rows)
    summary = {
        "scenario": cfg.scenario,
        "params": {"hbar": cfg.params.hbar, "mass": cfg.params.mass, "dim": cfg.params.dim},
        "seed": cfg.seed,
        "metrics": metrics,
        "tolerances": tols,
        "pass": not failing,
        "failing_metrics": failing,
        "runtime_seconds": time.perf_counter() - start,
        "commensurate_boost_used": extras.pop("commensurate_boost_used", None),
    }
    summary.update(extras)
    (cfg.out_dir / "summary.json").write_text(_json(summary) + "\n", encoding="utf-8")
    return summary


def check(summary: dict):
    if not summary["pass"]:
        raise ToleranceFailure(", ".join(summary["failing_metrics"]))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="schrobundle", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario")
    r.add_argument("--config", required=True)
    r.add_argument("--out-dir")
    r.add_argument("--seed", type=int)
    v = sub.add_parser("validate", help="check a config without running it")
    v.add_argument("--config", required=True)
    sub.add_parser("list-scenarios", help="print the available scenarios")
    ap.add_argument("-v", "--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "list-scenarios":
        for name, desc in SCENARIOS.items():
            print(f"{name:16s} {desc}")
        return EXIT_OK
    try:
        if args.command == "validate":
            cfg = load_config(args.config)
            print(f"ok: scenario {cfg.scenario}")
            return EXIT_OK
        cfg = load_config(args.config, out_dir=args.out_dir, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    summary = run_scenario(cfg)
    for k, val in summary["metrics"].items():
        bound = summary["tolerances"].get(k)
        mark = "" if bound is None else (" ok" if k not in summary["failing_metrics"] else " FAIL")
        print(f"{k:28s} {fmt(val)}" + ("" if bound is None else f"  (<= {fmt(bound)}){mark}"))
    try:
        check(summary)
    except ToleranceFailure as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Scenario-driven command line front end.

``spptransport run <config>`` executes a YAML scenario and writes CSV,
``spptransport validate <suite>`` runs the property suites, and
``spptransport list-scenarios`` prints the bundled scenario set.  Output is
deterministic: the CSV preamble carries the config hash and library
versions but no timestamps, so re-running a config reproduces the file
byte for byte.

Exit codes: 0 success, 2 config error, 3 numerical error, 4 validation
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import importlib.resources
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
import scipy
import yaml

from . import __version__
from .couplings import coupling_rates, coupling_sweep, spontaneous_rate
from .dispersion import solve_spp, trace_isofrequency
from .dynamics import evolve, initial_state, oracle_nonreciprocal, oracle_reciprocal
from .errors import ConfigError, SppTransportError
from .greens import DEFAULT_QUADRATURE, HalfSpaceScene
from .materials import DrudeMaterial
from .transport import efficiency_trace

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4

_SCENARIO_PKG = "spptransport.scenarios"


def bundled_scenarios():
    """Mapping of bundled scenario name -> config text."""
    root = importlib.resources.files(_SCENARIO_PKG)
    out = {}
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".yaml"):
            out[entry.name[:-5]] = entry.read_text()
    return out


def _require(cfg, key, types, context=""):
    cur = cfg
    for part in key.split("."):
        if not isinstance(cur, dict) or part not in cur:
            raise ConfigError(f"missing config key {key!r}{context}", key=key)
        cur = cur[part]
    if types is not None and not isinstance(cur, types):
        raise ConfigError(
            f"config key {key!r} has wrong type {type(cur).__name__}", key=key)
    return cur


def _material_from(block, key_prefix):
    for k in ("plasma_frequency", "damping", "drift_velocity"):
        if k not in block:
            raise ConfigError(f"missing config key {key_prefix}.{k}",
                              key=f"{key_prefix}.{k}")
    try:
        return DrudeMaterial(plasma_frequency=float(block["plasma_frequency"]),
                             damping=float(block["damping"]),
                             drift_velocity=float(block["drift_velocity"]))
    except SppTransportError as exc:
        raise ConfigError(f"invalid material block: {exc}", key=key_prefix)


def load_config(text):
    """Parse and schema-check a scenario config; raises ConfigError."""
    try:
        cfg = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config is not valid YAML: {exc}")
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a mapping")
    version = _require(cfg, "schema_version", int)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"unsupported schema_version {version} (expected {SCHEMA_VERSION})",
            key="schema_version")
    _require(cfg, "name", str)
    _require(cfg, "kind", str)
    _require(cfg, "output.filename", str)
    if cfg["kind"] not in _RUNNERS:
        raise ConfigError(f"unknown scenario kind {cfg['kind']!r}", key="kind")
    return cfg


def _scene_for(cfg, material, omega, key="geometry"):
    geo = _require(cfg, key, dict)
    lam = 2.0 * math.pi / omega
    z1 = float(_require(cfg, f"{key}.z1_over_lambda", (int, float))) * lam
    z2 = float(_require(cfg, f"{key}.z2_over_lambda", (int, float))) * lam
    try:
        return HalfSpaceScene(material=material, z1=z1, z2=z2, omega0=omega)
    except SppTransportError as exc:
        raise ConfigError(f"invalid geometry: {exc}", key=key)


def _sweep_grid(cfg, omega):
    lam = 2.0 * math.pi / omega
    lo = float(_require(cfg, "sweep.x_over_lambda_min", (int, float)))
    hi = float(_require(cfg, "sweep.x_over_lambda_max", (int, float)))
    n = _require(cfg, "sweep.samples", int)
    if not (0 <= lo < hi) or n < 2:
        raise ConfigError("sweep range must be nonempty with samples >= 2",
                          key="sweep")
    return np.linspace(lo * lam, hi * lam, n), lam


def _run_rate_sweep(cfg, settings, threads):
    material = _material_from(_require(cfg, "material", dict), "material")
    omega = float(_require(cfg, "frequency.omega_over_omega_p", (int, float)))
    scene = _scene_for(cfg, material, omega)
    part = cfg.get("part", "scattered")
    dxs, lam = _sweep_grid(cfg, omega)
    sw = coupling_sweep(scene, dxs, part=part, settings=settings)
    cols = ["x_over_lambda", "gamma12_over_gamma11", "gamma21_over_gamma11",
            "g12_over_gamma11", "g21_over_gamma11"]
    rows = np.column_stack([dxs / lam, sw.gamma12 / sw.gamma11,
                            sw.gamma21 / sw.gamma11, sw.g12 / sw.gamma11,
                            sw.g21 / sw.gamma11])
    return cols, rows


def _run_bound_margins(cfg, settings, threads):
    material = _material_from(_require(cfg, "material", dict), "material")
    omega = float(_require(cfg, "frequency.omega_over_omega_p", (int, float)))
    scene = _scene_for(cfg, material, omega)
    part = cfg.get("part", "scattered")
    dxs, lam = _sweep_grid(cfg, omega)
    sw = coupling_sweep(scene, dxs, part=part, settings=settings)
    # |G| / |Im G| at the source equals |Gamma/2 + i g| / (Gamma_11 / 2);
    # bounded by e under broken reciprocity
    pot21 = np.abs(sw.gamma21 / 2.0 + 1j * sw.g21) / (sw.gamma11 / 2.0)
    pot12 = np.abs(sw.gamma12 / 2.0 + 1j * sw.g12) / (sw.gamma11 / 2.0)
    cols = ["x_over_lambda", "gamma21_over_gamma11", "gamma12_over_gamma11",
            "abs_potential21_normalized", "abs_potential12_normalized"]
    rows = np.column_stack([dxs / lam, sw.gamma21 / sw.gamma11,
                            sw.gamma12 / sw.gamma11, pot21, pot12])
    return cols, rows


def _run_dispersion(cfg, settings, threads):
    freq = _require(cfg, "frequency", dict)
    lo = float(_require(cfg, "frequency.omega_min", (int, float)))
    hi = float(_require(cfg, "frequency.omega_max", (int, float)))
    n = _require(cfg, "frequency.samples", int)
    if not (0 < lo < hi) or n < 2:
        raise ConfigError("frequency grid must be nonempty", key="frequency")
    model = cfg.get("model", "full")
    envs = _environments(cfg, need_frequency=False)
    omegas = np.linspace(lo, hi, n)
    cols = ["omega_over_omega_p"]
    series = []
    for label, material, _omega, _part in envs:
        for suffix, phi in (("forward", 0.0), ("backward", math.pi)):
            cols.append(f"k_{label}_{suffix}")
            ks = []
            for w in omegas:
                pt = solve_spp(material, float(w), phi, model=model)
                ks.append(math.nan if pt is None else pt.k.real)
            series.append(ks)
    rows = np.column_stack([omegas] + series)
    return cols, rows


def _run_isofrequency(cfg, settings, threads):
    n = cfg.get("azimuth_samples", 64)
    model = cfg.get("model", "full")
    cols = ["phi"]
    series = []
    phis = None
    for label, material, omega, _part in _environments(cfg):
        contour = trace_isofrequency(material, omega, n_samples=n, model=model)
        phis = contour.phis
        cols.append(f"k_{label}")
        series.append(contour.wavenumbers())
    rows = np.column_stack([phis] + series)
    return cols, rows


def _environments(cfg, need_frequency=True):
    """Normalized (label, material, omega, part) tuples from the config."""
    envs = _require(cfg, "environments", list)
    if not envs:
        raise ConfigError("environments list must be nonempty", key="environments")
    out = []
    for i, env in enumerate(envs):
        key = f"environments[{i}]"
        if not isinstance(env, dict):
            raise ConfigError(f"{key} must be a mapping", key=key)
        label = env.get("label", f"env{i}")
        material = _material_from(env.get("material", {}), f"{key}.material")
        omega = None
        if need_frequency:
            if "frequency" not in env or "omega_over_omega_p" not in env["frequency"]:
                raise ConfigError(
                    f"missing config key {key}.frequency.omega_over_omega_p",
                    key=f"{key}.frequency.omega_over_omega_p")
            omega = float(env["frequency"]["omega_over_omega_p"])
        part = env.get("part", "scattered")
        if part not in ("scattered", "total", "vacuum"):
            raise ConfigError(f"{key}.part must be scattered/total/vacuum",
                              key=f"{key}.part")
        out.append((label, material, omega, part))
    return out


def _env_couplings(cfg, envs, settings, threads):
    """coupling_rates per environment at the configured spacing (threaded)."""
    gamma_in = float(cfg.get("rates", {}).get("gamma_in_over_gamma11", 0.0))
    gamma_out = float(cfg.get("rates", {}).get("gamma_out_over_gamma11", 0.0))
    x_over_lam = float(_require(cfg, "geometry.x_over_lambda", (int, float)))

    def one(env):
        label, material, omega, part = env
        scene = _scene_for(cfg, material, omega)
        dx = x_over_lam * scene.wavelength
        cset = coupling_rates(scene, dx, part=part, settings=settings)
        g11 = cset.gamma[0, 0]
        return label, cset.with_rates(gamma_in=gamma_in * g11,
                                      gamma_out=gamma_out * g11)

    if threads > 1 and len(envs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, envs))
    return [one(env) for env in envs]


def _time_grid(cfg, gamma11):
    t_max = float(_require(cfg, "time.t_max_gamma11", (int, float)))
    n = _require(cfg, "time.samples", int)
    if t_max <= 0 or n < 2:
        raise ConfigError("time grid must be nonempty", key="time")
    return np.linspace(0.0, t_max / gamma11, n)


def _run_dynamics(cfg, settings, threads):
    envs = _environments(cfg)
    kind = cfg.get("initial_state", "excited_first")
    csets = _env_couplings(cfg, envs, settings, threads)
    cols = ["t_gamma11"]
    series = []
    tnorm = None
    for label, cset in csets:
        g11 = cset.gamma[0, 0]
        times = _time_grid(cfg, g11)
        tnorm = times * g11
        res = evolve(cset, initial_state(2, kind), times)
        cols += [f"p1_{label}", f"p2_{label}"]
        series += [res.populations(1), res.populations(2)]
    rows = np.column_stack([tnorm] + series)
    return cols, rows


def _run_efficiency(cfg, settings, threads):
    envs = _environments(cfg)
    kind = cfg.get("initial_state", "excited_first")
    csets = _env_couplings(cfg, envs, settings, threads)
    cols = ["t_gamma11"]
    series = []
    tnorm = None
    for label, cset in csets:
        g11 = cset.gamma[0, 0]
        times = _time_grid(cfg, g11)
        tnorm = times * g11
        omega0 = None
        for lab2, mat2, om2, part2 in envs:
            if lab2 == label:
                omega0 = om2
        tr = efficiency_trace(cset, initial_state(2, kind), times, omega0=omega0)
        cols.append(f"chi_{label}")
        series.append(tr.chi)
    rows = np.column_stack([tnorm] + series)
    return cols, rows


_RUNNERS = {
    "rate_sweep": _run_rate_sweep,
    "bound_margins": _run_bound_margins,
    "dispersion": _run_dispersion,
    "isofrequency": _run_isofrequency,
    "dynamics": _run_dynamics,
    "efficiency": _run_efficiency,
}


def write_csv(path, cols, rows, cfg, config_text, settings):
    """Write the scenario output with a '#' metadata preamble.

    The preamble records the config hash and the library versions but
    nothing time-dependent, keeping repeated runs byte-identical.
    """
    sha = hashlib.sha256(config_text.encode()).hexdigest()
    lines = [
        f"# dataset: {cfg['name']}",
        f"# figure: {cfg.get('figure', 'n/a')}",
        f"# description: {' '.join(str(cfg.get('description', '')).split())}",
        f"# schema_version: {cfg['schema_version']}",
        f"# config_sha256: {sha}",
        f"# spptransport_version: {__version__}",
        f"# numpy_version: {np.__version__}",
        f"# scipy_version: {scipy.__version__}",
        f"# rel_tol: {settings.rel_tol:.3e}",
        ",".join(cols),
    ]
    rows = np.asarray(rows, dtype=float)
    for row in rows:
        lines.append(",".join(f"{v:.12e}" for v in row))
    path.write_text("\n".join(lines) + "\n")


def run_scenario(config_text, out_dir, settings, threads=1):
    """Execute one scenario config; returns the output path."""
    cfg = load_config(config_text)
    cols, rows = _RUNNERS[cfg["kind"]](cfg, settings, threads)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / cfg["output"]["filename"]
    write_csv(out_path, cols, rows, cfg, config_text, settings)
    return out_path


def _validate_oracles(settings, report):
    rng = np.random.default_rng(42)
    t = np.linspace(0.0, 10.0, 400)
    worst_r = 0.0
    for _ in range(10):
        g12 = rng.uniform(0.0, 0.95)
        c12 = rng.uniform(-1.0, 1.0)
        from .couplings import CouplingSet
        cset = CouplingSet(gamma=np.array([[1.0, g12], [g12, 1.0]]),
                           g=np.array([[0.0, c12], [c12, 0.0]]))
        res = evolve(cset, initial_state(2, "excited_first"), t)
        ora = oracle_reciprocal(cset, t)
        worst_r = max(worst_r,
                      float(np.max(np.abs(res.populations(1) - ora[:, 0]))),
                      float(np.max(np.abs(res.populations(2) - ora[:, 1]))))
    report.append(("oracle_reciprocal_max_err", worst_r, worst_r < 1e-6))
    worst_n = 0.0
    for _ in range(10):
        g21 = rng.uniform(0.0, 2.0)
        c21 = rng.uniform(-1.0, 1.0)
        from .couplings import CouplingSet
        cset = CouplingSet(gamma=np.array([[1.0, 0.0], [g21, 1.0]]),
                           g=np.array([[0.0, 0.0], [c21, 0.0]]))
        res = evolve(cset, initial_state(2, "excited_first"), t)
        ora = oracle_nonreciprocal(cset, t)
        worst_n = max(worst_n,
                      float(np.max(np.abs(res.populations(1) - ora[:, 0]))),
                      float(np.max(np.abs(res.populations(2) - ora[:, 1]))))
    report.append(("oracle_nonreciprocal_max_err", worst_n, worst_n < 1e-6))


def _validate_symmetry(settings, report):
    omega = 0.6
    lam = 2.0 * math.pi / omega
    scene = HalfSpaceScene(material=DrudeMaterial(), z1=lam / 40, z2=lam / 40,
                           omega0=omega)
    dxs = np.linspace(0.3 * lam, 1.5 * lam, 6)
    sw = coupling_sweep(scene, dxs, settings=settings)
    asym = float(np.max(np.abs(sw.gamma12 - sw.gamma21)) / sw.gamma11)
    report.append(("reciprocity_asymmetry", asym, asym < 1e-5))

    # drift reversal must swap the two transfer directions
    omega_b = 0.74
    lam_b = 2.0 * math.pi / omega_b
    dxs_b = np.array([0.5 * lam_b])
    sw_m = coupling_sweep(
        HalfSpaceScene(material=DrudeMaterial(drift_velocity=-0.008),
                       z1=lam_b / 40, z2=lam_b / 40, omega0=omega_b),
        dxs_b, settings=settings)
    sw_p = coupling_sweep(
        HalfSpaceScene(material=DrudeMaterial(drift_velocity=+0.008),
                       z1=lam_b / 40, z2=lam_b / 40, omega0=omega_b),
        dxs_b, settings=settings)
    swap = max(abs(sw_m.gamma21[0] - sw_p.gamma12[0]),
               abs(sw_m.gamma12[0] - sw_p.gamma21[0])) / sw_m.gamma11
    report.append(("drift_reversal_swap", float(swap), swap < 1e-5))


def _validate_limits(settings, report):
    omega = 0.6
    lam = 2.0 * math.pi / omega
    scene = HalfSpaceScene(material=DrudeMaterial(), z1=lam / 40, z2=lam / 40,
                           omega0=omega)
    dxs = np.linspace(0.05 * lam, 3.0 * lam, 12)
    sw = coupling_sweep(scene, dxs, settings=settings)
    r_margin = float(np.max(np.abs(sw.gamma12)) / sw.gamma11)
    report.append(("r_limit_margin", r_margin, r_margin <= 1.0 + 1e-6))

    omega_b = 0.74
    lam_b = 2.0 * math.pi / omega_b
    scene_b = HalfSpaceScene(material=DrudeMaterial(drift_velocity=-0.008),
                             z1=lam_b / 40, z2=lam_b / 40, omega0=omega_b)
    dxs_b = np.linspace(0.05 * lam_b, 3.0 * lam_b, 12)
    sw_b = coupling_sweep(scene_b, dxs_b, settings=settings)
    nr = np.abs(sw_b.gamma21 / 2 + 1j * sw_b.g21) / (math.e * sw_b.gamma11 / 2)
    nr_margin = float(np.max(nr))
    report.append(("nr_limit_margin", nr_margin, nr_margin <= 1.0 + 1e-3))
    broken = float(np.max(sw_b.gamma21) / sw_b.gamma11)
    report.append(("max_gamma21_over_gamma11", broken, broken > 1.0))


_SUITES = {
    "oracles": [_validate_oracles],
    "symmetry": [_validate_symmetry],
    "limits": [_validate_limits],
}
_SUITES["all"] = _SUITES["oracles"] + _SUITES["symmetry"] + _SUITES["limits"]


def run_validation(suite, settings, stream=sys.stdout):
    """Run a property suite; returns True when every property passes."""
    if suite not in _SUITES:
        raise ConfigError(f"unknown validation suite {suite!r}", key="suite")
    report = []
    for fn in _SUITES[suite]:
        fn(settings, report)
    ok = True
    for name, value, passed in report:
        ok = ok and passed
        stream.write(f"{name}: {value:.6e} [{'pass' if passed else 'FAIL'}]\n")
    stream.write(f"suite: {suite}\n")
    stream.write(f"result: {'pass' if ok else 'fail'}\n")
    return ok


def build_parser():
    p = argparse.ArgumentParser(
        prog="spptransport",
        description="Emitter-emitter excitation transport over a drift-biased "
                    "plasmonic interface: figure datasets and validation suites.")
    p.add_argument("--tolerance", type=float, default=DEFAULT_QUADRATURE.rel_tol,
                   help="relative tolerance for the Green's function quadrature")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for independent scenario points")
    p.add_argument("--out-dir", default=".", help="directory for output files")
    sub = p.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="run a scenario config (bundled name or path)")
    run_p.add_argument("config", help="bundled scenario name or YAML path")
    val_p = sub.add_parser("validate", help="run a property suite")
    val_p.add_argument("suite", choices=sorted(_SUITES),
                       help="which property suite to run")
    sub.add_parser("list-scenarios", help="list bundled scenario configs")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    settings = dataclasses.replace(DEFAULT_QUADRATURE, rel_tol=args.tolerance)
    try:
        if args.command == "list-scenarios":
            for name, text in bundled_scenarios().items():
                cfg = yaml.safe_load(text)
                desc = " ".join(str(cfg.get("description", "")).split())
                print(f"{name}: {desc}")
            return EXIT_OK
        if args.command == "run":
            bundled = bundled_scenarios()
            if args.config in bundled:
                text = bundled[args.config]
            else:
                path = Path(args.config)
                if not path.exists():
                    raise ConfigError(
                        f"{args.config!r} is neither a bundled scenario nor a file")
                text = path.read_text()
            out = run_scenario(text, args.out_dir, settings, threads=args.threads)
            print(f"wrote {out}")
            return EXIT_OK
        if args.command == "validate":
            ok = run_validation(args.suite, settings)
            return EXIT_OK if ok else EXIT_VALIDATION
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SppTransportError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

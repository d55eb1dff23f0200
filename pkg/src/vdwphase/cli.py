"""Command-line interface.

Every subcommand writes exactly one JSON summary and zero or more CSV files
into ``--out``. Settings come from built-in defaults, then a flat JSON
``--config`` file, then command-line flags (highest precedence).

Exit codes: 0 success, 2 invalid input, 3 no nonconstant solution,
4 internal or quadrature failure.
"""

import argparse
import json
import math
import sys
import warnings
from pathlib import Path

import numpy as np

from . import energy, eos, io, limits, maxwell, sharp, stability, viscous
from .errors import DomainError, NoSolutionError, VdwError

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NO_SOLUTION = 3
EXIT_INTERNAL = 4

DEFAULTS = {
    "a": 3.0,
    "b": 1.0 / 3.0,
    "R": 8.0 / 3.0,
    "theta": 0.85,
    "vbar": None,
    "epsilon": 0.02,
    "eps_start": 0.006,
    "eps_end": 0.0013,
    "eps_ratio": 0.8,
    "kind": "valley",
    "N": 1,
    "maxN": 2,
    "grid": None,
    "n_max": 200,
    "offset": None,
    "out": "out",
    "seed": 0,
}

FLAGS = {
    "theta": ("--theta", float),
    "vbar": ("--vbar", float),
    "epsilon": ("--epsilon", float),
    "eps_start": ("--eps-start", float),
    "eps_end": ("--eps-end", float),
    "eps_ratio": ("--eps-ratio", float),
    "kind": ("--kind", str),
    "N": ("--N", int),
    "maxN": ("--max-N", int),
    "grid": ("--grid", int),
    "n_max": ("--n-max", int),
    "offset": ("--offset", float),
    "out": ("--out", str),
    "seed": ("--seed", int),
}

COMMANDS = ("landscape", "sharp", "solve", "sweep", "stability", "energy-ordering")


# the sweep reaches small viscosities whose interfaces need a finer grid
DEFAULT_GRID = 4096
SWEEP_GRID = 32768


class ConfigError(DomainError):
    pass


def build_parser():
    parser = argparse.ArgumentParser(prog="vdwphase", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat JSON configuration file")
    for key, (flag, typ) in FLAGS.items():
        kw = {"type": typ, "default": None, "dest": key}
        if key == "kind":
            kw["choices"] = ["peak", "valley"]
        common.add_argument(flag, **kw)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def resolve_config(args):
    """Merge defaults, the config file and flags; validate before any compute."""
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a flat JSON object")
        unknown = sorted(set(data) - set(DEFAULTS))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(data)
    for key in FLAGS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    return validate(cfg, args.command)


def _num(cfg, key, positive=True):
    val = cfg[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)) or not math.isfinite(val):
        raise ConfigError(f"{key} must be a finite number, got {val!r}")
    if positive and not val > 0:
        raise ConfigError(f"{key} must be positive, got {val!r}")
    return float(val)


def validate(cfg, command=None):
    for key in ("a", "b", "R", "theta", "epsilon", "eps_start", "eps_end", "eps_ratio"):
        cfg[key] = _num(cfg, key)
    if not cfg["eps_ratio"] < 1:
        raise ConfigError("eps_ratio must lie in (0, 1)")
    if not cfg["eps_end"] < cfg["eps_start"]:
        raise ConfigError("eps_end must be below eps_start")
    if cfg["grid"] is None:
        cfg["grid"] = SWEEP_GRID if command == "sweep" else DEFAULT_GRID
    for key, low in (("N", 1), ("maxN", 1), ("grid", 64), ("n_max", 0), ("seed", 0)):
        val = cfg[key]
        if isinstance(val, bool) or not isinstance(val, int) or val < low:
            raise ConfigError(f"{key} must be an integer >= {low}, got {val!r}")
    if cfg["kind"] not in ("peak", "valley"):
        raise ConfigError(f"kind must be 'peak' or 'valley', got {cfg['kind']!r}")
    if cfg["vbar"] is not None:
        cfg["vbar"] = _num(cfg, "vbar")
        if not cfg["vbar"] > cfg["b"]:
            raise ConfigError(f"vbar must exceed b = {cfg['b']!r}")
    if cfg["offset"] is not None:
        cfg["offset"] = _num(cfg, "offset", positive=False)
    if not isinstance(cfg["out"], str) or not cfg["out"]:
        raise ConfigError("out must be a non-empty path")
    params = eos.EosParams(cfg["a"], cfg["b"], cfg["R"], cfg["theta"])
    if not params.subcritical:
        raise eos.SupercriticalError(
            f"theta = {params.theta!r} is not below theta_c = {params.theta_c!r}; "
            "a phase transition requires 0 < theta < theta_c")
    cfg["params"] = params
    return cfg


def _eos_block(params):
    return {"a": params.a, "b": params.b, "R": params.R, "theta": params.theta,
            "theta_c": params.theta_c}


def _vbar(cfg, land):
    return cfg["vbar"] if cfg["vbar"] is not None else 0.5 * (land.alpha0 + land.beta0)


def cmd_landscape(cfg, land, out):
    params = cfg["params"]
    d = land.as_dict()
    checks = {
        "ordering": bool(params.b < land.alpha_bar < land.alpha0 < land.alpha < land.beta
                         < land.beta0 < land.beta_bar),
        "maxwell_pressure_gap": abs(eos.pressure(params, land.alpha0)
                                    - eos.pressure(params, land.beta0)),
        "equal_area_residual": maxwell.area_residual(params, land.alpha, land.beta,
                                                     land.sigma0)[0],
        "triviality_threshold": viscous.triviality_threshold(params, land),
    }
    vmax = max(2.0 * land.beta0, 5.0 * params.b * 3.0)
    v = np.linspace(params.b, vmax, cfg["grid"] + 1)[1:]
    io.write_csv(out / "isotherm.csv", ["v", "p"], [v, eos.pressure(params, v)])
    summary = {"command": "landscape", "eos": _eos_block(params), "landscape": d,
               "checks": checks, "files": ["isotherm.csv"]}
    io.write_json(out / "landscape.json", summary)
    return summary


def cmd_sharp(cfg, land, out):
    params = cfg["params"]
    vbar = _vbar(cfg, land)
    feasible = sharp.exists_two_phase(land, vbar, params.b)
    if feasible:
        kind = "SinglePeak" if cfg["kind"] == "peak" else "SingleValley"
        l1, l2 = sharp.phase_lengths(land, vbar)
        lead = l1 if kind == "SinglePeak" else l2
        off = 0.5 * lead if cfg["offset"] is None else cfg["offset"]
        prof = sharp.build_profile(land, vbar, kind, off)
        verdict = "two-phase"
    else:
        prof = sharp.build_profile(land, vbar, "Constant")
        verdict = "stable/single-phase"
    x, v = sharp.sample(prof, cfg["grid"])
    io.write_csv(out / "sharp.csv", ["x", "v"], [x, v])
    summary = {"command": "sharp", "eos": _eos_block(params), "vbar": vbar,
               "verdict": verdict, "feasible": feasible,
               "weierstrass_erdmann": sharp.weierstrass_erdmann_check(params, land, prof),
               "profile": prof.as_dict(), "l1": prof.l1, "l2": prof.l2,
               "mean": prof.mean(), "files": ["sharp.csv"]}
    io.write_json(out / "sharp.json", summary)
    return summary


def cmd_solve(cfg, land, out):
    params = cfg["params"]
    vbar = _vbar(cfg, land)
    sol = viscous.solve_2N(params, land, vbar, cfg["epsilon"], cfg["N"], kind=cfg["kind"],
                           grid_size=cfg["grid"])
    e = energy.energy_E(params, vbar, sol)
    T1, T2 = viscous.plateau_times(sol)
    io.write_csv(out / "solution.csv", ["x", "y", "v"], [sol.x, sol.y, sol.v])
    summary = {"command": "solve", "eos": _eos_block(params), "solution": sol.header(),
               "energy": {"E": e,
                          "E_grid": energy.energy_grid(params, vbar, sol),
                          "leading": energy.leading_energy(params, land, vbar),
                          "slope_S": energy.asymptotic_S(params, land),
                          "excess": energy.excess_energy(params, land, vbar, sol)},
               "plateau_times": {"T1": T1, "T2": T2},
               "first_integral_defect": viscous.first_integral_defect(params, sol),
               "files": ["solution.csv"]}
    io.write_json(out / "solution.json", summary)
    return summary


def cmd_sweep(cfg, land, out):
    params = cfg["params"]
    vbar = _vbar(cfg, land)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = limits.run_sweep(params, land, vbar, cfg["eps_start"], cfg["eps_end"],
                               cfg["eps_ratio"], cfg["kind"], grid_size=cfg["grid"])
    names = ["epsilon", "sigma", "lam", "z1", "z2", "dz1", "dz2", "eT1", "eT2",
             "sup_distance", "energy", "energy_grid", "excess_energy", "residual"]
    io.write_csv(out / "sweep.csv", names, [res.column(n) for n in names])
    fits = None
    try:
        C1, C2, r1, r2 = limits.fit_decay(res)
        p1, p2 = limits.predicted_decay_rates(params, land, vbar)
        fits = {"C1": C1, "C2": C2, "r2_1": r1, "r2_2": r2,
                "predicted_C1": p1, "predicted_C2": p2}
    except DomainError as exc:
        fits = {"error": str(exc)}
    sup = res.column("sup_distance")
    verdicts = {
        "sup_distance_decreasing": bool(sup.size > 1 and np.all(np.diff(sup) < 0)),
        "final_sup_distance": float(sup[-1]) if sup.size else None,
        "final_eT1_over_l1": float(res.rows[-1].eT1 / res.l1) if res.rows else None,
        "final_eT2_over_l2": float(res.rows[-1].eT2 / res.l2) if res.rows else None,
    }
    summary = {"command": "sweep", "eos": _eos_block(params), "vbar": vbar,
               "kind": res.kind, "l1": res.l1, "l2": res.l2,
               "eps_ladder": res.eps_ladder, "rows_solved": len(res.rows),
               "warning": res.truncated, "message": res.message, "fits": fits,
               "verdicts": verdicts, "files": ["sweep.csv"]}
    io.write_json(out / "sweep.json", summary)
    return summary


def cmd_stability(cfg, land, out):
    params = cfg["params"]
    vbar = cfg["vbar"] if cfg["vbar"] is not None else 0.5 * (land.alpha + land.beta)
    rho0 = 1.0 / vbar
    spectrum = stability.unstable_band(params, rho0, cfg["epsilon"], cfg["n_max"])
    n = [m for m, _ in spectrum.modes]
    g = [gr for _, gr in spectrum.modes]
    io.write_csv(out / "spectrum.csv", ["n", "growth"], [n, g])
    d = spectrum.as_dict()
    d["expected_largest_unstable"] = (math.ceil(spectrum.cutoff) - 1) if spectrum.cutoff > 0 else 0
    summary = {"command": "stability", "eos": _eos_block(params), "vbar": vbar,
               "spectrum": d, "files": ["spectrum.csv"]}
    io.write_json(out / "stability.json", summary)
    return summary


def cmd_energy_ordering(cfg, land, out):
    params = cfg["params"]
    vbar = _vbar(cfg, land)
    rep = energy.energy_ordering(params, land, vbar, cfg["epsilon"], cfg["maxN"],
                                 grid_size=cfg["grid"])
    labels = [lab for lab, _ in rep.comparisons]
    vals = [e for _, e in rep.comparisons]
    io.write_csv(out / "energies.csv", ["label", "energy"], [labels, vals])
    summary = {"command": "energy-ordering", "eos": _eos_block(params), "vbar": vbar,
               "report": rep.as_dict(), "ordering_holds": energy.ordering_holds(rep),
               "triviality_threshold": viscous.triviality_threshold(params, land),
               "files": ["energies.csv"]}
    io.write_json(out / "energy.json", summary)
    return summary


HANDLERS = {
    "landscape": cmd_landscape,
    "sharp": cmd_sharp,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "stability": cmd_stability,
    "energy-ordering": cmd_energy_ordering,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        land = maxwell.construct(cfg["params"])
        if cfg["vbar"] is not None and args.command in ("solve", "energy-ordering"):
            if not land.alpha0 < cfg["vbar"] < land.beta0:
                raise NoSolutionError(
                    f"vbar = {cfg['vbar']!r} lies outside the Maxwell interval; "
                    "only the constant state exists")
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except VdwError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    out = Path(cfg["out"])
    try:
        out.mkdir(parents=True, exist_ok=True)
        summary = HANDLERS[args.command](cfg, land, out)
    except NoSolutionError as exc:
        thr = exc.threshold
        if thr is None:
            thr = viscous.triviality_threshold(cfg["params"], land)
        print(f"no solution: {exc}", file=sys.stderr)
        print(f"triviality threshold eps* = {thr!r}; for eps > eps* "
              "(eps^2 pi^2 > max p' on the spinodal interval) only the constant state exists",
              file=sys.stderr)
        return EXIT_NO_SOLUTION
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as exc:  # noqa: BLE001 - any other failure is internal
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(io.dumps(summary))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Subcommands: sample-pois, cost, optimize, bound, experiment. Stdout carries
short human summaries; files carry machine-readable data. Exit codes:
0 success, 2 usage or config error, 3 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bound as bound_mod
from . import experiments as exp_mod
from .cost import SpacecraftPose, SwarmConfig, information_cost
from .neldermead import NelderMeadOptions, optimize_swarm
from .sampling import UncertaintyEllipsoid, load_pois, sample_pois, save_pois

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_COMPUTE = 3


class CliError(Exception):
    def __init__(self, message, code=EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _json17(obj) -> str:
    """Serialize with 17 significant digits so floats round-trip."""

    def enc(x):
        if isinstance(x, float):
            return float(f"{x:.17g}")
        if isinstance(x, dict):
            return {k: enc(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [enc(v) for v in x]
        return x

    return json.dumps(enc(obj), indent=2)


def _load_swarm(path) -> SwarmConfig:
    """Read a swarm pose file: JSON with "ellipsoid" and a "spacecraft" list."""
    try:
        with open(path) as f:
            cfg = json.load(f)
    except json.JSONDecodeError as err:
        raise CliError(f"{path}: line {err.lineno}: {err.msg}")
    try:
        ell = cfg["ellipsoid"]
        ellipsoid = UncertaintyEllipsoid(
            np.asarray(ell.get("center", [0.0, 0.0, 0.0]), dtype=float),
            tuple(ell["radii"]),
        )
        poses = tuple(
            SpacecraftPose(np.asarray(p["position"], dtype=float),
                           p["theta"], p["nu"], p["phi"])
            for p in cfg["spacecraft"]
        )
        return SwarmConfig(poses, ellipsoid)
    except (KeyError, TypeError, ValueError) as err:
        raise CliError(f"{path}: malformed swarm pose file: {err}")


def cmd_sample_pois(args) -> int:
    if args.n < 1:
        raise CliError("--n must be at least 1")
    ellipsoid = UncertaintyEllipsoid.sphere(args.radius, tuple(args.center)) \
        if args.radii is None else \
        UncertaintyEllipsoid(np.asarray(args.center, dtype=float),
                             tuple(args.radii))
    pois = sample_pois(ellipsoid, args.n, args.seed)
    out = _output_path(args, "pois.csv")
    save_pois(out, pois)
    lo = pois.points.min(axis=0)
    hi = pois.points.max(axis=0)
    print(f"wrote {len(pois)} POIs to {out}")
    print(f"bounds: x [{lo[0]:g}, {hi[0]:g}]  y [{lo[1]:g}, {hi[1]:g}]  "
          f"z [{lo[2]:g}, {hi[2]:g}]")
    return EXIT_OK


def cmd_cost(args) -> int:
    pois = load_pois(args.pois)
    swarm = _load_swarm(args.swarm)
    breakdown = information_cost(swarm, pois, kappa_weight=args.kappa_weight)
    print(_json17(breakdown.to_json_dict()))
    if args.output:
        Path(args.output).write_text(_json17(breakdown.to_json_dict()) + "\n")
    return EXIT_OK


def cmd_optimize(args) -> int:
    pois = load_pois(args.pois)
    swarm = _load_swarm(args.swarm)
    opts = NelderMeadOptions(max_iterations=args.max_iterations)
    cost_mode = "deterministic"
    if args.position_stddev > 0.0:
        cost_mode = (args.position_stddev, args.mc_samples, args.seed)
    best, breakdown, result = optimize_swarm(
        pois, swarm, opts, cost_mode, kappa_weight=args.kappa_weight
    )
    payload = {
        "spacecraft": [
            {"position": p.position.tolist(), "theta": p.theta,
             "nu": p.nu, "phi": p.phi}
            for p in best.spacecraft
        ],
        "cost": breakdown.to_json_dict(),
        "iterations": result.iterations,
        "evaluations": result.evaluation_count,
        "converged": result.converged,
    }
    text = _json17(payload)
    print(text)
    if args.output:
        Path(args.output).write_text(text + "\n")
    return EXIT_OK


def cmd_bound(args) -> int:
    try:
        params, noise = bound_mod.load_bound_config(args.config)
    except (OSError, ValueError, TypeError) as err:
        raise CliError(f"{args.config}: {err}")
    try:
        if args.invert is not None:
            D = bound_mod.radius_for_success_probability(
                args.invert, args.time, args.v0, params, noise)
            print(_json17({"target_probability": args.invert, "radius": D}))
        else:
            result = bound_mod.evaluate_bound(
                args.distance, args.time, args.v0, params, noise,
                squared_distance=args.squared)
            print(_json17(result.to_json_dict()))
    except bound_mod.InfeasibleParamsError as err:
        raise CliError(f"infeasible parameters: {err}", EXIT_COMPUTE)
    except bound_mod.ExtrapolationError as err:
        raise CliError(str(err), EXIT_COMPUTE)
    return EXIT_OK


def cmd_experiment(args) -> int:
    try:
        config = exp_mod.load_experiment_config(args.config)
    except (OSError, json.JSONDecodeError) as err:
        raise CliError(f"{args.config}: {err}")
    except exp_mod.ConfigError as err:
        raise CliError(f"{args.config}: {err}")
    if args.seed is not None:
        config = exp_mod.config_from_dict({
            **json.loads(Path(args.config).read_text()),
            "master_seed": args.seed,
        })
    outdir = Path(args.output or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    report = exp_mod.run_experiment(config, threads=args.threads)
    report.write_json(outdir / "report.json")
    report.write_summary_csv(outdir / "summary.csv")
    print(f"{report.kind}: {len(report.trials)} trials -> "
          f"{outdir / 'report.json'}, {outdir / 'summary.csv'}")
    for row in report.aggregates:
        print("  " + "  ".join(f"{k}={v:.4g}" if isinstance(v, float)
                               else f"{k}={v}" for k, v in row.items()))
    return EXIT_OK


def _output_path(args, default_name):
    if args.output:
        return args.output
    return default_name


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoswarm",
        description="Encounter-uncertainty ellipsoids and information-optimal "
                    "swarm positioning",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="override the master seed where applicable")
    parser.add_argument("--output", "-o", default=None,
                        help="output file or directory")
    parser.add_argument("--format", choices=("csv", "json"), default="json",
                        help="preferred machine-readable output format")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for experiment cells")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample-pois", help="sample POIs inside an ellipsoid")
    p.add_argument("--radius", type=float, default=100.0,
                   help="sphere radius (km); ignored if --radii is given")
    p.add_argument("--radii", type=float, nargs=3, default=None,
                   help="per-axis ellipsoid radii (km)")
    p.add_argument("--center", type=float, nargs=3, default=(0.0, 0.0, 0.0))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0, dest="seed")
    p.set_defaults(func=cmd_sample_pois)

    p = sub.add_parser("cost", help="evaluate the information cost of a swarm")
    p.add_argument("--pois", required=True, help="POI file from sample-pois")
    p.add_argument("--swarm", required=True, help="swarm pose JSON file")
    p.add_argument("--kappa-weight", type=float, default=1.0)
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("optimize", help="optimize swarm positions/orientations")
    p.add_argument("--pois", required=True)
    p.add_argument("--swarm", required=True, help="initial swarm pose JSON")
    p.add_argument("--kappa-weight", type=float, default=1.0)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--position-stddev", type=float, default=0.0,
                   help="enable expected-cost mode with this stddev (km)")
    p.add_argument("--mc-samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, dest="seed")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("bound", help="evaluate the encounter probability bound")
    p.add_argument("--config", required=True,
                   help="JSON with contraction scalars and a noise history")
    p.add_argument("--distance", "-D", type=float, default=1.0)
    p.add_argument("--time", "-T", type=float, default=0.0)
    p.add_argument("--v0", type=float, default=0.0,
                   help="expected initial Lyapunov value")
    p.add_argument("--invert", type=float, default=None, metavar="P",
                   help="print the radius certifying success probability P")
    p.add_argument("--squared", action="store_true",
                   help="use the squared-distance denominator")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("experiment", help="run a simulation campaign")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_USAGE if err.code not in (0, None) else 0
    try:
        return args.func(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return err.code
    except (OSError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())

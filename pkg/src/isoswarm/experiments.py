"""Seeded Monte Carlo campaigns: single-craft view probability and swarm-size sweeps.

Per-cell random streams are derived from the master seed and the cell key
(radius index / trial index / swarm size), so adding cells never perturbs the
streams of existing ones and identical master seeds reproduce every per-trial
record exactly.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict

import numpy as np

from . import geometry
from .cost import SpacecraftPose, SwarmConfig
from .neldermead import NelderMeadOptions, optimize_swarm
from .sampling import UncertaintyEllipsoid, sample_pois

DEFAULT_PHI = np.pi / 3.0  # full camera aperture
DEFAULT_NU = DEFAULT_PHI / 2.0  # angular half-width of the FOV interval

# Reported -I values are commensurate with coverage percentages only when the
# angular-overlap term is scaled up from radians; the sweep defaults to a
# degrees-scale weight (configurable).
DEFAULT_KAPPA_WEIGHT = 180.0 / np.pi


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def _cell_rng(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([master_seed, *key]))


def _cell_seed(master_seed: int, *key: int) -> int:
    return int(np.random.SeedSequence([master_seed, *key]).generate_state(1)[0])


def _random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(3)
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class ViewProbabilityConfig:
    """Single-spacecraft view-probability campaign over several sphere radii."""

    iso_terminal_position: tuple[float, float, float]
    sphere_radii: tuple[float, ...]
    trials_per_radius: int
    initial_distance_range: tuple[int, int] = (100, 600)
    n_pois: int = 5000
    master_seed: int = 0
    phi: float = DEFAULT_PHI
    nu: float = DEFAULT_NU
    success_criterion: str = "center"  # or "sampled_truth"
    nm_options: NelderMeadOptions = field(
        default_factory=lambda: NelderMeadOptions(theta_initial_step=0.5))

    def __post_init__(self):
        if self.trials_per_radius < 1:
            raise ConfigError("trials_per_radius must be at least 1")
        lo, hi = self.initial_distance_range
        if not lo < hi:
            raise ConfigError("initial_distance_range must satisfy min < max")
        if self.success_criterion not in ("center", "sampled_truth"):
            raise ConfigError(f"unknown success criterion {self.success_criterion!r}")
        if self.n_pois < 1:
            raise ConfigError("n_pois must be at least 1")


@dataclass(frozen=True)
class SwarmSizeConfig:
    """Swarm-size sweep on one uncertainty sphere with shared POIs per trial."""

    sphere_radius: float
    n_pois: int
    spacecraft_range: tuple[int, int] = (1, 7)
    trials: int = 3
    master_seed: int = 0
    phi: float = DEFAULT_PHI
    nu: float = DEFAULT_NU
    kappa_weight: float = DEFAULT_KAPPA_WEIGHT
    initial_distance_factors: tuple[float, float] = (3.0, 6.0)
    nm_options: NelderMeadOptions = field(
        default_factory=lambda: NelderMeadOptions(theta_initial_step=0.5))

    def __post_init__(self):
        lo, hi = self.spacecraft_range
        if not 1 <= lo <= hi <= 32:
            raise ConfigError("spacecraft_range must lie within [1, 32]")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.n_pois < 1:
            raise ConfigError("n_pois must be at least 1")
        if self.sphere_radius <= 0.0:
            raise ConfigError("sphere_radius must be positive")


@dataclass
class ExperimentReport:
    """Per-trial records plus aggregates recomputable from them."""

    kind: str
    config: dict
    trials: list[dict]
    aggregates: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "config": self.config,
                "trials": self.trials, "aggregates": self.aggregates}

    def write_json(self, path) -> None:
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=2)
            f.write("\n")

    def write_summary_csv(self, path) -> None:
        if not self.aggregates:
            raise ValueError("report has no aggregates")
        keys = list(self.aggregates[0].keys())
        with open(path, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=keys)
            writer.writeheader()
            for row in self.aggregates:
                writer.writerow(row)


def _config_dict(config) -> dict:
    d = asdict(config)
    d["nm_options"] = asdict(config.nm_options)
    return json.loads(json.dumps(d, default=list))


def _run_view_probability_trial(config: ViewProbabilityConfig, r_idx: int,
                                radius: float, trial: int) -> dict:
    # Optimize in sphere-centered coordinates (the cost is translation
    # invariant) so the simplex steps scale with the encounter geometry, not
    # with the heliocentric magnitude of the ISO terminal position.
    iso_position = np.asarray(config.iso_terminal_position, dtype=float)
    center = np.zeros(3)
    ellipsoid = UncertaintyEllipsoid.sphere(radius, center)
    poi_seed = _cell_seed(config.master_seed, 1, r_idx, trial, 0)
    pois = sample_pois(ellipsoid, config.n_pois, poi_seed)

    rng = _cell_rng(config.master_seed, 1, r_idx, trial, 1)
    lo, hi = config.initial_distance_range
    distance = float(rng.integers(lo, hi + 1))
    position = center + _random_unit(rng) * distance
    theta0 = rng.uniform(0.0, 2.0 * np.pi)

    initial = SwarmConfig(
        (SpacecraftPose(position, theta0, config.nu, config.phi),), ellipsoid
    )
    best, breakdown, result = optimize_swarm(
        pois, initial, config.nm_options, orientation_mode="theta_tilt"
    )
    pose = best.spacecraft[0]
    fov = pose.fov(center, "theta_tilt")
    if config.success_criterion == "center":
        success = geometry.visible(center, fov, center)
    else:
        truth = center + _random_unit(rng) * radius * rng.random() ** (1.0 / 3.0)
        success = geometry.visible(truth, fov, center)

    return {
        "radius": radius,
        "trial": trial,
        "poi_seed": poi_seed,
        "initial_distance": distance,
        "initial_position": (iso_position + position).tolist(),
        "initial_theta": theta0,
        "final_position": (iso_position + pose.position).tolist(),
        "final_position_relative": pose.position.tolist(),
        "final_theta": pose.theta,
        "coverage_pct": breakdown.epsilon_term,
        "minus_info_cost": -breakdown.information_cost,
        "success": bool(success),
        "evaluations": result.evaluation_count,
    }


def run_view_probability(config: ViewProbabilityConfig,
                         threads: int = 1) -> ExperimentReport:
    """Estimate p = successes / trials per sphere radius.

    Each trial samples fresh POIs and a random single-spacecraft start at an
    integer distance from the sphere center, optimizes position and
    orientation, then checks whether the sphere center (or, optionally, a
    sampled true ISO position) is visible from the final pose.
    """
    cells = [
        (r_idx, radius, trial)
        for r_idx, radius in enumerate(config.sphere_radii)
        for trial in range(config.trials_per_radius)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trials = list(pool.map(
                lambda c: _run_view_probability_trial(config, *c), cells
            ))
    else:
        trials = [_run_view_probability_trial(config, *c) for c in cells]

    report = ExperimentReport("view_probability", _config_dict(config), trials)
    report.aggregates = aggregate(report)
    return report


def _run_swarm_size_cell(config: SwarmSizeConfig, trial: int, n_sc: int,
                         pois) -> dict:
    rng = _cell_rng(config.master_seed, 2, trial, n_sc)
    r = config.sphere_radius
    lo, hi = config.initial_distance_factors
    poses = []
    for _ in range(n_sc):
        distance = rng.uniform(lo * r, hi * r)
        position = pois.ellipsoid.center + _random_unit(rng) * distance
        theta0 = rng.uniform(0.0, 2.0 * np.pi)
        poses.append(SpacecraftPose(position, theta0, config.nu, config.phi))
    initial = SwarmConfig(tuple(poses), pois.ellipsoid)
    best, breakdown, result = optimize_swarm(
        pois, initial, config.nm_options, kappa_weight=config.kappa_weight
    )
    return {
        "trial": trial,
        "n_spacecraft": n_sc,
        "coverage_pct": breakdown.epsilon_term,
        "kappa_total": breakdown.kappa_total,
        "minus_info_cost": -breakdown.information_cost,
        "final_poses": [
            {"position": p.position.tolist(), "theta": p.theta}
            for p in best.spacecraft
        ],
        "evaluations": result.evaluation_count,
    }


def run_swarm_size_sweep(config: SwarmSizeConfig,
                         threads: int = 1) -> ExperimentReport:
    """Sweep the swarm size over a shared POI set per trial.

    Within a trial every swarm size sees the same sphere and the same POIs;
    spacecraft start a large distance away (a configurable multiple of the
    radius), each with an independent draw.
    """
    lo_n, hi_n = config.spacecraft_range
    cells = []
    for trial in range(config.trials):
        poi_seed = _cell_seed(config.master_seed, 2, trial, 0, 0)
        pois = sample_pois(
            UncertaintyEllipsoid.sphere(config.sphere_radius),
            config.n_pois, poi_seed,
        )
        for n_sc in range(lo_n, hi_n + 1):
            cells.append((trial, n_sc, pois, poi_seed))

    def run_cell(cell):
        trial, n_sc, pois, poi_seed = cell
        rec = _run_swarm_size_cell(config, trial, n_sc, pois)
        rec["poi_seed"] = poi_seed
        return rec

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            trials = list(pool.map(run_cell, cells))
    else:
        trials = [run_cell(c) for c in cells]

    report = ExperimentReport("swarm_size", _config_dict(config), trials)
    report.aggregates = aggregate(report)
    return report


def aggregate(report: ExperimentReport) -> list[dict]:
    """Per-cell mean and standard deviation, recomputed from per-trial rows."""
    if not report.trials:
        raise ValueError("report has no trials")
    if report.kind == "view_probability":
        rows = []
        for radius in sorted({t["radius"] for t in report.trials}):
            cell = [t for t in report.trials if t["radius"] == radius]
            successes = sum(t["success"] for t in cell)
            cov = [t["coverage_pct"] for t in cell]
            rows.append({
                "radius": radius,
                "trials": len(cell),
                "p_pct": 100.0 * successes / len(cell),
                "mean_coverage_pct": float(np.mean(cov)),
                "std_coverage_pct": float(np.std(cov)),
            })
        return rows
    if report.kind == "swarm_size":
        rows = []
        for n_sc in sorted({t["n_spacecraft"] for t in report.trials}):
            cell = [t for t in report.trials if t["n_spacecraft"] == n_sc]
            cov = [t["coverage_pct"] for t in cell]
            mi = [t["minus_info_cost"] for t in cell]
            rows.append({
                "n_spacecraft": n_sc,
                "trials": len(cell),
                "mean_coverage_pct": float(np.mean(cov)),
                "std_coverage_pct": float(np.std(cov)),
                "mean_minus_info_cost": float(np.mean(mi)),
                "std_minus_info_cost": float(np.std(mi)),
            })
        return rows
    raise ValueError(f"unknown report kind {report.kind!r}")


def config_from_dict(cfg: dict):
    """Parse an experiment config dict with a versioned schema."""
    cfg = dict(cfg)
    version = cfg.pop("schema_version", None)
    if version != 1:
        raise ConfigError(f"unsupported schema_version: {version!r}")
    kind = cfg.pop("type", None)
    nm = cfg.pop("nm_options", None)
    if kind == "view_probability":
        cls, tuple_fields = ViewProbabilityConfig, (
            "iso_terminal_position", "sphere_radii", "initial_distance_range")
    elif kind == "swarm_size":
        cls, tuple_fields = SwarmSizeConfig, (
            "spacecraft_range", "initial_distance_factors")
    else:
        raise ConfigError(f"unknown experiment type: {kind!r}")
    allowed = set(cls.__dataclass_fields__) - {"nm_options"}
    unknown = set(cfg) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for name in tuple_fields:
        if name in cfg:
            cfg[name] = tuple(cfg[name])
    if nm is not None:
        cfg["nm_options"] = NelderMeadOptions(**nm)
    try:
        return cls(**cfg)
    except TypeError as err:
        raise ConfigError(str(err)) from err


def load_experiment_config(path):
    with open(path) as f:
        return config_from_dict(json.load(f))


def run_experiment(config, threads: int = 1) -> ExperimentReport:
    if isinstance(config, ViewProbabilityConfig):
        return run_view_probability(config, threads)
    if isinstance(config, SwarmSizeConfig):
        return run_swarm_size_sweep(config, threads)
    raise ConfigError(f"unsupported config type {type(config).__name__}")

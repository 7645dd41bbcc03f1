"""Information cost of a swarm configuration.

The cost combines the summed pairwise angular overlap of the spacecraft FOV
intervals (kappa_total, radians) with the fraction of POIs visible to at
least one spacecraft (the coverage term), as I = w * kappa_total - coverage.
Lower is better; experiment reports use -I.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, ConeFov, as_vec3, visible_mask
from .sampling import PoiSet, UncertaintyEllipsoid

# Perturbation applied when two spacecraft share an orientation, so their
# overlap registers as (almost) the full interval instead of zero.
DEFAULT_IDENTICAL_THETA_DELTA = 1e-6


@dataclass(frozen=True)
class SpacecraftPose:
    """Terminal position plus FOV parameters of one spacecraft."""

    position: np.ndarray
    theta: float
    nu: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec3(self.position))
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        if not 0.0 < self.nu < np.pi:
            raise ValueError("nu must lie in (0, pi)")
        if not 0.0 < self.phi < np.pi:
            raise ValueError("phi must lie in (0, pi)")

    def fov(self, center, orientation_mode: str = "aimed") -> ConeFov:
        """Build this pose's viewing cone relative to the ellipsoid center.

        "aimed" points the axis at the center; "theta_tilt" tilts the axis
        away from the center direction by theta.
        """
        if orientation_mode == "aimed":
            return ConeFov.aimed(self.position, center, self.phi,
                                 self.theta, self.nu)
        if orientation_mode == "theta_tilt":
            return ConeFov.tilted(self.position, center, self.phi,
                                  self.theta, self.nu)
        raise ValueError(f"unknown orientation mode: {orientation_mode!r}")


@dataclass(frozen=True)
class SwarmConfig:
    """An ordered swarm of spacecraft observing one uncertainty ellipsoid."""

    spacecraft: tuple[SpacecraftPose, ...]
    ellipsoid: UncertaintyEllipsoid

    def __post_init__(self):
        sc = tuple(self.spacecraft)
        if len(sc) < 1:
            raise ValueError("swarm needs at least one spacecraft")
        object.__setattr__(self, "spacecraft", sc)

    def __len__(self):
        return len(self.spacecraft)


@dataclass(frozen=True)
class CostBreakdown:
    """Components of one information-cost evaluation."""

    kappa_total: float
    epsilon_term: float
    information_cost: float
    visible_poi_indices: frozenset[int]
    n_pois: int
    kappa_weight: float = 1.0

    def to_json_dict(self) -> dict:
        return {
            "kappa_total": self.kappa_total,
            "epsilon_pct": self.epsilon_term,
            "info_cost": self.information_cost,
            "visible_count": len(self.visible_poi_indices),
            "n_pois": self.n_pois,
        }


def fov_interval(pose: SpacecraftPose) -> tuple[float, float]:
    """Un-normalized angular FOV interval (theta - nu, theta + nu)."""
    return pose.theta - pose.nu, pose.theta + pose.nu


def pair_overlap(pose_i: SpacecraftPose, pose_j: SpacecraftPose,
                 delta: float = DEFAULT_IDENTICAL_THETA_DELTA) -> float:
    """Circular overlap (radians) between the FOV intervals of two spacecraft.

    Identical orientations are perturbed by delta so the overlap reads as
    2 nu - delta rather than a spurious zero.
    """
    nu = pose_i.nu
    ti, tj = pose_i.theta, pose_j.theta
    if ti == tj:
        tj += delta
    d = abs(ti - tj) % TWO_PI
    sep = min(d, TWO_PI - d)
    return max(0.0, 2.0 * nu - sep)


def kappa_total(swarm: SwarmConfig,
                delta: float = DEFAULT_IDENTICAL_THETA_DELTA) -> float:
    """Sum of pair_overlap over all unordered spacecraft pairs."""
    sc = swarm.spacecraft
    total = 0.0
    for i in range(len(sc)):
        for j in range(i + 1, len(sc)):
            total += pair_overlap(sc[i], sc[j], delta)
    return total


def coverage(swarm: SwarmConfig, pois: PoiSet,
             orientation_mode: str = "aimed") -> tuple[int, float, frozenset[int]]:
    """POIs visible to at least one spacecraft: count, percentage, indices."""
    if len(pois) == 0:
        raise ValueError("POI set is empty")
    center = swarm.ellipsoid.center
    seen = np.zeros(len(pois), dtype=bool)
    for pose in swarm.spacecraft:
        seen |= visible_mask(pois.points, pose.fov(center, orientation_mode),
                             center)
    count = int(np.count_nonzero(seen))
    pct = 100.0 * count / len(pois)
    return count, pct, frozenset(np.flatnonzero(seen).tolist())


def information_cost(swarm: SwarmConfig, pois: PoiSet,
                     kappa_weight: float = 1.0,
                     delta: float = DEFAULT_IDENTICAL_THETA_DELTA,
                     orientation_mode: str = "aimed",
                     coverage_as_count: bool = False) -> CostBreakdown:
    """Evaluate I = w * kappa_total - coverage for one configuration.

    The coverage term is the percentage of POIs seen (0-100) by default;
    coverage_as_count switches it to the raw visible count for sensitivity
    studies.
    """
    kappa = kappa_total(swarm, delta)
    count, pct, idx = coverage(swarm, pois, orientation_mode)
    eps = float(count) if coverage_as_count else pct
    return CostBreakdown(kappa, eps, kappa_weight * kappa - eps, idx,
                         len(pois), kappa_weight)


def expected_information_cost(swarm: SwarmConfig, pois: PoiSet,
                              position_stddev: float, n_samples: int,
                              seed: int, **cost_kwargs) -> float:
    """Monte Carlo mean of the information cost under Gaussian position noise.

    Each spacecraft position is perturbed by an isotropic zero-mean normal
    with the given standard deviation (km); orientations are unperturbed.
    Deterministic in the seed.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if position_stddev < 0.0:
        raise ValueError("position_stddev must be non-negative")
    if position_stddev == 0.0:
        # every sample is the unperturbed swarm; skip the averaging so the
        # result is bitwise equal to the deterministic cost
        return information_cost(swarm, pois, **cost_kwargs).information_cost
    rng = np.random.default_rng(seed)
    total = 0.0
    for _ in range(n_samples):
        noise = rng.normal(0.0, position_stddev, (len(swarm), 3))
        perturbed = SwarmConfig(
            tuple(
                SpacecraftPose(p.position + noise[k], p.theta, p.nu, p.phi)
                for k, p in enumerate(swarm.spacecraft)
            ),
            swarm.ellipsoid,
        )
        total += information_cost(perturbed, pois, **cost_kwargs).information_cost
    return total / n_samples

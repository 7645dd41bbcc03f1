"""Seed-driven uniform sampling of points of interest inside an uncertainty ellipsoid.

The generator is numpy's PCG64 (``np.random.default_rng``), so identical
(ellipsoid, n, seed) triples reproduce identical point lists bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import as_vec3


class EmptySampleError(ValueError):
    """Requested an empty POI set."""


@dataclass(frozen=True)
class UncertaintyEllipsoid:
    """Region where the ISO lies with the certified probability.

    center is in km; radii (a, b, c) are the per-axis semi-axes in km.
    Equal radii denote an uncertainty sphere.
    """

    center: np.ndarray
    radii: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec3(self.center))
        radii = tuple(float(r) for r in np.asarray(self.radii).ravel())
        if len(radii) != 3 or any(r <= 0.0 for r in radii):
            raise ValueError("ellipsoid radii must be three positive reals")
        object.__setattr__(self, "radii", radii)

    @classmethod
    def sphere(cls, radius: float, center=(0.0, 0.0, 0.0)):
        return cls(np.asarray(center, dtype=float), (radius, radius, radius))

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Boolean mask: which points satisfy the ellipsoid inequality."""
        rel = (np.atleast_2d(points) - self.center) / np.asarray(self.radii)
        return np.sum(rel**2, axis=1) <= 1.0


@dataclass(frozen=True)
class PoiSet:
    """Ordered list of sampled points of interest plus its provenance."""

    points: np.ndarray
    seed: int
    ellipsoid: UncertaintyEllipsoid

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError("points must have shape (n, 3)")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.points.shape[0]


def sample_pois(ellipsoid: UncertaintyEllipsoid, n: int, seed: int) -> PoiSet:
    """Sample n points uniformly by volume inside the ellipsoid.

    Uses the direction-radius construction: a normalized Gaussian triple for
    the direction, radius u**(1/3) for uniformity in the unit ball, then a
    componentwise stretch by the semi-axes.
    """
    if n < 1:
        raise EmptySampleError("need at least one POI")
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((n, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    r = rng.random(n) ** (1.0 / 3.0)
    pts = dirs * r[:, None] * np.asarray(ellipsoid.radii) + ellipsoid.center
    return PoiSet(pts, int(seed), ellipsoid)


def save_pois(path, pois: PoiSet) -> None:
    """Write a POI set as columnar text: a provenance header then x,y,z rows."""
    e = pois.ellipsoid
    with open(path, "w") as f:
        f.write(
            "# seed=%d radii=%.17g,%.17g,%.17g center=%.17g,%.17g,%.17g\n"
            % ((pois.seed,) + e.radii + tuple(e.center))
        )
        f.write("x,y,z\n")
        for p in pois.points:
            f.write("%.17g,%.17g,%.17g\n" % tuple(p))


def load_pois(path) -> PoiSet:
    """Read a POI file produced by save_pois."""
    with open(path) as f:
        header = f.readline().strip()
        if not header.startswith("# seed="):
            raise ValueError(f"{path}: missing POI provenance header")
        fields = dict(tok.split("=", 1) for tok in header[2:].split())
        seed = int(fields["seed"])
        radii = tuple(float(v) for v in fields["radii"].split(","))
        center = np.array([float(v) for v in fields["center"].split(",")])
        columns = f.readline().strip()
        if columns != "x,y,z":
            raise ValueError(f"{path}: expected 'x,y,z' column line")
        pts = [[float(v) for v in line.split(",")] for line in f if line.strip()]
    ellipsoid = UncertaintyEllipsoid(center, radii)
    return PoiSet(np.asarray(pts), seed, ellipsoid)

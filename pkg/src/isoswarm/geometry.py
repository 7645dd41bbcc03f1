"""Conal field-of-view geometry: axis construction, cone containment, hemisphere culling.

Positions are in kilometers, angles in radians. Points are numpy arrays of
shape (3,); point sets are arrays of shape (n, 3). All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi

_Z_HAT = np.array([0.0, 0.0, 1.0])
_X_HAT = np.array([1.0, 0.0, 0.0])


class DegenerateGeometryError(ValueError):
    """Cone apex coincides with the ellipsoid center."""


def as_vec3(v) -> np.ndarray:
    """Coerce to a finite float 3-vector."""
    a = np.asarray(v, dtype=float)
    if a.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector components must be finite")
    return a


def cone_axis(apex, ellipsoid_center) -> np.ndarray:
    """Unit direction from the cone apex toward the ellipsoid center."""
    apex = as_vec3(apex)
    center = as_vec3(ellipsoid_center)
    d = center - apex
    n = np.linalg.norm(d)
    if n == 0.0:
        raise DegenerateGeometryError("cone apex coincides with ellipsoid center")
    return d / n


def tilted_axis(apex, ellipsoid_center, tilt: float) -> np.ndarray:
    """Toward-center direction rotated by `tilt` radians about a fixed
    perpendicular axis.

    The rotation axis is chosen deterministically (perpendicular to the
    toward-center direction, derived from the z axis with an x-axis fallback
    near the poles), so the angle between the result and the toward-center
    direction equals the circular distance of `tilt` from zero.
    """
    toward = cone_axis(apex, ellipsoid_center)
    ref = _Z_HAT if abs(toward @ _Z_HAT) < 0.9 else _X_HAT
    u = np.cross(toward, ref)
    u /= np.linalg.norm(u)
    # rotate `toward` about u (u is perpendicular to toward)
    return toward * np.cos(tilt) + np.cross(u, toward) * np.sin(tilt)


@dataclass(frozen=True)
class ConeFov:
    """A camera field-of-view cone.

    apex: spacecraft position (km); axis: unit viewing direction;
    aperture_phi: full aperture angle; angular_position_theta: azimuthal FOV
    orientation used for overlap costs; angular_halfwidth_nu: angular
    half-width of the FOV interval (defaults to aperture_phi / 2).
    """

    apex: np.ndarray
    axis: np.ndarray
    aperture_phi: float
    angular_position_theta: float = 0.0
    angular_halfwidth_nu: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "apex", as_vec3(self.apex))
        axis = as_vec3(self.axis)
        n = np.linalg.norm(axis)
        if abs(n - 1.0) > 1e-9:
            raise ValueError("cone axis must be a unit vector")
        object.__setattr__(self, "axis", axis)
        if not 0.0 < self.aperture_phi < np.pi:
            raise ValueError("aperture_phi must lie in (0, pi)")
        theta = float(self.angular_position_theta) % TWO_PI
        object.__setattr__(self, "angular_position_theta", theta)
        nu = self.angular_halfwidth_nu
        if nu is None:
            nu = self.aperture_phi / 2.0
        if not 0.0 < nu < np.pi:
            raise ValueError("angular_halfwidth_nu must lie in (0, pi)")
        object.__setattr__(self, "angular_halfwidth_nu", float(nu))

    @classmethod
    def aimed(cls, apex, ellipsoid_center, aperture_phi, theta=0.0, nu=None):
        """Cone whose axis points from the apex at the ellipsoid center."""
        return cls(as_vec3(apex), cone_axis(apex, ellipsoid_center),
                   aperture_phi, theta, nu)

    @classmethod
    def tilted(cls, apex, ellipsoid_center, aperture_phi, theta, nu=None):
        """Cone whose axis is the toward-center direction tilted by theta."""
        return cls(as_vec3(apex), tilted_axis(apex, ellipsoid_center, theta),
                   aperture_phi, theta, nu)


def axial_distance(poi, fov: ConeFov) -> float:
    """Signed projection of (poi - apex) onto the cone axis, in km."""
    return float((as_vec3(poi) - fov.apex) @ fov.axis)


def cone_radius_at(d: float, aperture_phi: float) -> float:
    """Cone radius d * tan(phi / 2) at axial distance d >= 0."""
    if d < 0.0:
        raise ValueError("axial distance must be non-negative")
    return d * np.tan(aperture_phi / 2.0)


def orthogonal_distance(poi, fov: ConeFov) -> float:
    """Distance (km, >= 0) of the POI from the cone axis line."""
    rel = as_vec3(poi) - fov.apex
    return float(np.linalg.norm(rel - (rel @ fov.axis) * fov.axis))


def in_fov(poi, fov: ConeFov) -> bool:
    """Whether the POI lies inside the (forward) cone; boundary counts as in."""
    d = axial_distance(poi, fov)
    if d <= 0.0:
        return False
    return orthogonal_distance(poi, fov) <= cone_radius_at(d, fov.aperture_phi)


def in_near_hemisphere(poi, apex, center) -> bool:
    """Whether the POI lies in the half-space of the center-plane containing
    the spacecraft; points on the dividing plane count as visible."""
    apex = as_vec3(apex)
    center = as_vec3(center)
    if np.array_equal(apex, center):
        raise DegenerateGeometryError("apex coincides with center")
    return float((as_vec3(poi) - center) @ (apex - center)) >= 0.0


def visible(poi, fov: ConeFov, center) -> bool:
    """In the cone and in the near hemisphere of the ellipsoid."""
    return in_fov(poi, fov) and in_near_hemisphere(poi, fov.apex, center)


def in_fov_mask(points: np.ndarray, fov: ConeFov) -> np.ndarray:
    """Vectorized in_fov over an (n, 3) array of points."""
    rel = np.atleast_2d(points) - fov.apex
    d = rel @ fov.axis
    orth = np.linalg.norm(rel - d[:, None] * fov.axis, axis=1)
    return (d > 0.0) & (orth <= d * np.tan(fov.aperture_phi / 2.0))


def visible_mask(points: np.ndarray, fov: ConeFov, center) -> np.ndarray:
    """Vectorized visible() over an (n, 3) array of points."""
    center = as_vec3(center)
    pts = np.atleast_2d(points)
    near = (pts - center) @ (fov.apex - center) >= 0.0
    return in_fov_mask(pts, fov) & near

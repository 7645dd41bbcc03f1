"""Numeric evaluation of the hierarchical stochastic-contraction encounter bound.

Given the contraction-rate and metric-eigenvalue constants of the coupled
controller/estimator system plus an empirical noise-intensity history, this
module evaluates the closed-form upper bound on the probability that the
terminal delivery error exceeds a distance D, the complementary success
probability, the 2x2 rate-matrix feasibility condition behind the constants,
and the inversion of the success bound to an ellipsoid radius.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class InfeasibleParamsError(ValueError):
    """The rate-matrix condition does not hold for these parameters."""


class ExtrapolationError(ValueError):
    """Requested time lies beyond the recorded noise history."""


@dataclass(frozen=True)
class ContractionParams:
    """Scalar constants of the hierarchical contraction bound.

    alpha_c / alpha_e are the controller / estimator contraction rates (1/s);
    m_*_lower / m_*_upper bound the metric eigenvalues; eps_c / eps_e are the
    control / estimation policy approximation-error bounds; g_bar, u_bar,
    h_bar are norm/Lipschitz bounds on the input matrix, controller, and
    measurement map; ell_bar bounds the squared Frobenius norm of the
    estimation gain; gamma_c is the Young's-inequality split constant; lam
    weights the estimator block; alpha_s is the combined contraction rate.
    """

    alpha_c: float
    alpha_e: float
    m_c_lower: float
    m_c_upper: float
    m_e_lower: float
    m_e_upper: float
    eps_c: float
    eps_e: float
    g_bar: float
    u_bar: float
    h_bar: float
    ell_bar: float
    gamma_c: float
    lam: float
    alpha_s: float

    def __post_init__(self):
        strictly_positive = ("alpha_c", "alpha_e", "m_c_lower", "m_c_upper",
                             "m_e_lower", "m_e_upper", "gamma_c", "lam",
                             "alpha_s")
        for name in strictly_positive:
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        for name in ("eps_c", "eps_e", "g_bar", "u_bar", "h_bar", "ell_bar"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be non-negative")
        if self.m_c_lower > self.m_c_upper or self.m_e_lower > self.m_e_upper:
            raise ValueError("metric eigenvalue bounds must satisfy lower <= upper")

    @property
    def c_s(self) -> float:
        """Steady offset (m_c_upper * g_bar * eps_c)^2 / (2 alpha_s gamma_c)."""
        return (self.m_c_upper * self.g_bar * self.eps_c) ** 2 / (
            2.0 * self.alpha_s * self.gamma_c
        )

    @property
    def m_lower_combined(self) -> float:
        """Combined metric lower bound m_c_lower + lam * m_e_lower."""
        return self.m_c_lower + self.lam * self.m_e_lower


class RateMatrixCheck(NamedTuple):
    feasible: bool
    alpha_bar_c: float
    alpha_bar_e: float


def check_rate_matrix(params: ContractionParams) -> RateMatrixCheck:
    """Feasibility of the 2x2 coupled rate-matrix condition.

    Computes the effective rates alpha_bar_c = alpha_c * m_c_lower - gamma_c/2
    and alpha_bar_e = alpha_e * m_e_lower - m_e_upper * eps_e * h_bar, and
    requires both to be positive with

        [[-2 a_c, k], [k, -2 lam a_e]] + 2 alpha_s diag(m_c_upper, lam m_e_upper)

    negative semidefinite (k = m_c_upper * g_bar * u_bar), checked via
    trace <= 0 and determinant >= 0.
    """
    a_c = params.alpha_c * params.m_c_lower - params.gamma_c / 2.0
    a_e = params.alpha_e * params.m_e_lower - params.m_e_upper * params.eps_e * params.h_bar
    if a_c <= 0.0 or a_e <= 0.0:
        return RateMatrixCheck(False, a_c, a_e)
    k = params.m_c_upper * params.g_bar * params.u_bar
    d11 = -2.0 * a_c + 2.0 * params.alpha_s * params.m_c_upper
    d22 = -2.0 * params.lam * a_e + 2.0 * params.alpha_s * params.lam * params.m_e_upper
    trace = d11 + d22
    det = d11 * d22 - k * k
    return RateMatrixCheck(trace <= 0.0 and det >= 0.0, a_c, a_e)


def shifted_rate_matrix(params: ContractionParams) -> np.ndarray:
    """The 2x2 matrix whose negative semidefiniteness check_rate_matrix tests."""
    a_c = params.alpha_c * params.m_c_lower - params.gamma_c / 2.0
    a_e = params.alpha_e * params.m_e_lower - params.m_e_upper * params.eps_e * params.h_bar
    k = params.m_c_upper * params.g_bar * params.u_bar
    return np.array([
        [-2.0 * a_c + 2.0 * params.alpha_s * params.m_c_upper, k],
        [k, -2.0 * params.lam * a_e + 2.0 * params.alpha_s * params.lam * params.m_e_upper],
    ])


@dataclass(frozen=True)
class NoiseProfile:
    """Empirical history of the squared-Frobenius measurement-noise bound."""

    times: np.ndarray
    zetas: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        z = np.asarray(self.zetas, dtype=float)
        if t.ndim != 1 or t.shape != z.shape or t.size < 1:
            raise ValueError("times and zetas must be matching 1-D arrays")
        if t[0] != 0.0:
            raise ValueError("noise history must start at t = 0")
        if t.size > 1 and not np.all(np.diff(t) > 0.0):
            raise ValueError("noise sample times must be strictly increasing")
        if np.any(z < 0.0):
            raise ValueError("zeta values must be non-negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "zetas", z)

    @classmethod
    def constant(cls, zeta: float, t_end: float, n: int = 2):
        return cls(np.linspace(0.0, t_end, n), np.full(n, float(zeta)))

    @classmethod
    def from_pairs(cls, pairs):
        arr = np.asarray(pairs, dtype=float)
        return cls(arr[:, 0], arr[:, 1])

    def zeta_at(self, t: float) -> float:
        if t < self.times[0] or t > self.times[-1]:
            raise ExtrapolationError(
                f"t = {t} outside recorded noise history [0, {self.times[-1]}]"
            )
        return float(np.interp(t, self.times, self.zetas))


def zeta_integral(t: float, params: ContractionParams,
                  noise: NoiseProfile) -> float:
    """lam * m_e_upper * ell_bar * integral_0^t exp(2 alpha_s tau) zeta(tau) dtau.

    Trapezoidal quadrature on the noise sample grid restricted to [0, t],
    with zeta linearly interpolated at the endpoint.
    """
    if t < 0.0 or t > noise.times[-1]:
        raise ExtrapolationError(
            f"t = {t} outside recorded noise history [0, {noise.times[-1]}]"
        )
    if t == 0.0:
        return 0.0
    inner = noise.times[noise.times < t]
    grid = np.append(inner, t)
    z = np.interp(grid, noise.times, noise.zetas)
    integrand = np.exp(2.0 * params.alpha_s * grid) * z
    quad = np.trapezoid(integrand, grid)
    return params.lam * params.m_e_upper * params.ell_bar * quad


@dataclass(frozen=True)
class BoundResult:
    """Evaluated encounter bound at one (D, t) pair.

    failure_prob_upper / success_prob_lower are clamped to [0, 1]; the raw
    (unclamped) values are kept alongside since a vacuous bound above 1 is
    still informative.
    """

    failure_prob_upper: float
    success_prob_lower: float
    failure_prob_raw: float
    success_prob_raw: float
    c_s: float
    zeta_integral: float
    m_lower_combined: float

    def to_json_dict(self) -> dict:
        return {
            "failure_prob_upper": self.failure_prob_upper,
            "success_prob_lower": self.success_prob_lower,
            "failure_prob_raw": self.failure_prob_raw,
            "success_prob_raw": self.success_prob_raw,
            "c_s": self.c_s,
            "zeta_integral": self.zeta_integral,
            "m_lower_combined": self.m_lower_combined,
        }


def _numerator(t: float, v0_expected: float, params: ContractionParams,
               noise: NoiseProfile) -> float:
    decay = np.exp(-2.0 * params.alpha_s * t)
    return v0_expected * decay + params.c_s + decay * zeta_integral(t, params, noise)


def evaluate_bound(D: float, t: float, v0_expected: float,
                   params: ContractionParams, noise: NoiseProfile,
                   squared_distance: bool = False) -> BoundResult:
    """Evaluate the failure and success probability bounds at distance D.

    The denominator is D * m_lower as printed in the source bound;
    squared_distance switches to the dimensionally conventional D**2 form.
    """
    if D <= 0.0:
        raise ValueError("failure distance D must be positive")
    check = check_rate_matrix(params)
    if not check.feasible:
        raise InfeasibleParamsError(
            "rate-matrix condition violated "
            f"(alpha_bar_c = {check.alpha_bar_c:g}, alpha_bar_e = {check.alpha_bar_e:g})"
        )
    denom = (D * D if squared_distance else D) * params.m_lower_combined
    numerator = _numerator(t, v0_expected, params, noise)
    fail_raw = numerator / denom
    success_raw = 1.0 - fail_raw
    clamp = lambda p: min(1.0, max(0.0, p))
    return BoundResult(clamp(fail_raw), clamp(success_raw), fail_raw,
                       success_raw, params.c_s, zeta_integral(t, params, noise),
                       params.m_lower_combined)


def failure_probability_bound(D, t, v0_expected, params, noise,
                              squared_distance=False) -> float:
    """Clamped upper bound on P[delivery error >= D] at time t."""
    return evaluate_bound(D, t, v0_expected, params, noise,
                          squared_distance).failure_prob_upper


def success_probability(D, T, v0_expected, params, noise,
                        squared_distance=False) -> float:
    """Clamped lower bound on P[terminal error <= D]."""
    return evaluate_bound(D, T, v0_expected, params, noise,
                          squared_distance).success_prob_lower


def radius_for_success_probability(p_target: float, T: float,
                                   v0_expected: float,
                                   params: ContractionParams,
                                   noise: NoiseProfile) -> float:
    """Smallest D whose success bound certifies probability p_target.

    Inverts the success bound: D = B / ((1 - p_target) * m_lower), where B is
    the bound numerator at time T. B = 0 returns D = 0 (perfect delivery).
    """
    if not 0.0 < p_target < 1.0:
        raise ValueError("target probability must lie in (0, 1); the bound "
                         "never certifies probability 1 with a nonzero numerator")
    check = check_rate_matrix(params)
    if not check.feasible:
        raise InfeasibleParamsError(
            "rate-matrix condition violated "
            f"(alpha_bar_c = {check.alpha_bar_c:g}, alpha_bar_e = {check.alpha_bar_e:g})"
        )
    B = _numerator(T, v0_expected, params, noise)
    if B == 0.0:
        return 0.0
    return B / ((1.0 - p_target) * params.m_lower_combined)


def ellipsoid_radii_from_weights(D: float, axis_weights) -> tuple[float, float, float]:
    """Scale a certified radius into per-axis radii via diagonal norm weights.

    A weighted norm ||W x|| <= D with W = diag(w) certifies the ellipsoid with
    semi-axes D / w_i.
    """
    w = np.asarray(axis_weights, dtype=float)
    if w.shape != (3,) or np.any(w <= 0.0):
        raise ValueError("axis weights must be three positive reals")
    return tuple(D / w)


def params_from_dict(d: dict) -> ContractionParams:
    fields = {k: float(v) for k, v in d.items() if k != "noise"}
    return ContractionParams(**fields)


def load_bound_config(path) -> tuple[ContractionParams, NoiseProfile]:
    """Read a JSON config: flat scalar keys plus a "noise" array of [t, zeta]."""
    with open(path) as f:
        cfg = json.load(f)
    if "noise" not in cfg:
        raise ValueError(f"{path}: missing 'noise' array of [t, zeta] pairs")
    noise = NoiseProfile.from_pairs(cfg["noise"])
    return params_from_dict(cfg), noise

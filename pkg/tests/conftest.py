import numpy as np
import pytest

from isoswarm.bound import ContractionParams, check_rate_matrix


def draw_feasible_params(rng: np.random.Generator) -> ContractionParams:
    """Random parameter set satisfying the rate-matrix condition.

    alpha_s is placed inside the decoupled feasible range and the coupling
    bound u_bar is scaled back until the 2x2 condition holds.
    """
    while True:
        alpha_c = rng.uniform(0.5, 3.0)
        alpha_e = rng.uniform(0.5, 3.0)
        m_c_lower = rng.uniform(0.3, 2.0)
        m_c_upper = m_c_lower * rng.uniform(1.0, 3.0)
        m_e_lower = rng.uniform(0.3, 2.0)
        m_e_upper = m_e_lower * rng.uniform(1.0, 3.0)
        gamma_c = rng.uniform(0.1, 0.8) * 2.0 * alpha_c * m_c_lower
        h_bar = rng.uniform(0.1, 2.0)
        eps_e = rng.uniform(0.0, 0.5) * alpha_e * m_e_lower / (m_e_upper * h_bar)
        a_c = alpha_c * m_c_lower - gamma_c / 2.0
        a_e = alpha_e * m_e_lower - m_e_upper * eps_e * h_bar
        if a_c <= 0.0 or a_e <= 0.0:
            continue
        alpha_s = rng.uniform(0.2, 0.8) * min(a_c / m_c_upper, a_e / m_e_upper)
        lam = rng.uniform(0.2, 5.0)
        g_bar = rng.uniform(0.1, 2.0)
        d11 = -2.0 * a_c + 2.0 * alpha_s * m_c_upper
        d22 = -2.0 * lam * a_e + 2.0 * alpha_s * lam * m_e_upper
        k_max = np.sqrt(d11 * d22)
        u_bar = rng.uniform(0.0, 0.9) * k_max / (m_c_upper * g_bar)
        params = ContractionParams(
            alpha_c=alpha_c, alpha_e=alpha_e,
            m_c_lower=m_c_lower, m_c_upper=m_c_upper,
            m_e_lower=m_e_lower, m_e_upper=m_e_upper,
            eps_c=rng.uniform(0.0, 0.3), eps_e=eps_e,
            g_bar=g_bar, u_bar=u_bar, h_bar=h_bar,
            ell_bar=rng.uniform(0.1, 2.0),
            gamma_c=gamma_c, lam=lam, alpha_s=alpha_s,
        )
        if check_rate_matrix(params).feasible:
            return params


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

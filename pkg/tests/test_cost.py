import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoswarm.cost import (SpacecraftPose, SwarmConfig, coverage,
                           expected_information_cost, fov_interval,
                           information_cost, kappa_total, pair_overlap)
from isoswarm.geometry import visible
from isoswarm.sampling import PoiSet, UncertaintyEllipsoid, sample_pois

NU = 0.3
PHI = 1.0


def pose(theta, position=(300.0, 0.0, 0.0), nu=NU, phi=PHI):
    return SpacecraftPose(np.array(position, float), theta, nu, phi)


def swarm(*poses, radius=100.0):
    return SwarmConfig(tuple(poses), UncertaintyEllipsoid.sphere(radius))


def test_fov_interval_plain():
    s, e = fov_interval(pose(np.pi, nu=0.1))
    assert (s, e) == (np.pi - 0.1, np.pi + 0.1)


def test_fov_interval_straddles_wrap():
    s, e = fov_interval(pose(0.0, nu=0.2))
    assert (s, e) == (-0.2, 0.2)


def test_fov_interval_three_halves_pi():
    s, e = fov_interval(pose(3 * np.pi / 2, nu=np.pi / 6))
    assert s == pytest.approx(4.18879, abs=1e-5)
    assert e == pytest.approx(5.23599, abs=1e-5)


def test_pair_overlap_touching():
    assert pair_overlap(pose(0.0), pose(2 * NU)) == 0.0


def test_pair_overlap_half_offset():
    assert pair_overlap(pose(0.0), pose(NU)) == pytest.approx(NU)


def test_pair_overlap_identical_theta_perturbed():
    got = pair_overlap(pose(1.0), pose(1.0))
    assert got == pytest.approx(2 * NU - 1e-6, abs=1e-12)


def test_pair_overlap_wraps_circle():
    # theta 0.1 and 2*pi - 0.1 are only 0.2 apart on the circle
    assert pair_overlap(pose(0.1), pose(2 * np.pi - 0.1)) == pytest.approx(
        2 * NU - 0.2)


@settings(max_examples=200, deadline=None)
@given(ti=st.floats(0, 2 * np.pi, exclude_max=True),
       tj=st.floats(0, 2 * np.pi, exclude_max=True),
       nu=st.floats(0.01, 1.5))
def test_pair_overlap_symmetric_and_bounded(ti, tj, nu):
    a = pair_overlap(pose(ti, nu=nu), pose(tj, nu=nu))
    b = pair_overlap(pose(tj, nu=nu), pose(ti, nu=nu))
    if ti != tj:
        assert a == b
    assert 0.0 <= a <= 2 * nu


def test_kappa_total_single_craft():
    assert kappa_total(swarm(pose(0.0))) == 0.0


def test_kappa_total_disjoint():
    assert kappa_total(swarm(pose(0.0), pose(1.5), pose(3.0))) == 0.0


def test_kappa_total_hand_enumerated():
    # pairs (0, nu), (0, 2pi - nu) each overlap nu; (nu, 2pi - nu) disjoint
    s = swarm(pose(0.0), pose(NU), pose(2 * np.pi - NU))
    assert kappa_total(s) == pytest.approx(2 * NU)


def test_coverage_opposite_sides_full():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 500, 1)
    s = SwarmConfig(
        (pose(0.0, (400.0, 0, 0), phi=1.0), pose(1.0, (-400.0, 0, 0), phi=1.0)),
        e,
    )
    count, pct, idx = coverage(s, pois)
    assert count == 500 and pct == 100.0


def test_coverage_tiny_aperture_zero():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 500, 2)
    s = SwarmConfig((pose(0.0, (400.0, 1.7, 0), phi=1e-4),), e)
    count, pct, idx = coverage(s, pois)
    assert count == 0 and pct == 0.0 and idx == frozenset()


def test_coverage_matches_brute_force_oracle(rng):
    e = UncertaintyEllipsoid.sphere(80.0)
    pois = sample_pois(e, 300, 5)
    s = swarm(pose(0.2, (250.0, 40.0, -10.0)), pose(4.0, (-100.0, 200.0, 90.0)),
              radius=80.0)
    count, pct, idx = coverage(s, pois)
    expected = set()
    for i, p in enumerate(pois.points):
        for sc in s.spacecraft:
            if visible(p, sc.fov(e.center), e.center):
                expected.add(i)
                break
    assert idx == frozenset(expected)
    assert count == len(expected)


def test_coverage_empty_pois_rejected():
    with pytest.raises(ValueError):
        e = UncertaintyEllipsoid.sphere(1.0)
        coverage(swarm(pose(0.0), radius=1.0),
                 PoiSet(np.empty((0, 3)), 0, e))


def test_information_cost_full_coverage_single():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 200, 1)
    # one craft cannot see past the dividing plane; use the near half only
    near = pois.points[pois.points[:, 0] >= 0]
    pois_near = PoiSet(near, 1, e)
    s = SwarmConfig((pose(0.0, (500.0, 0, 0), phi=0.6),), e)
    b = information_cost(s, pois_near)
    assert b.epsilon_term == 100.0
    assert b.kappa_total == 0.0
    assert b.information_cost == -100.0


def test_information_cost_identical_poses_overlap_only():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 200, 3)
    p = pose(1.0, (400.0, 0, 0), phi=1e-4)
    b = information_cost(SwarmConfig((p, p), e), pois)
    assert b.epsilon_term == 0.0
    assert b.information_cost == pytest.approx(2 * NU - 1e-6, abs=1e-12)


def test_cost_identity_exact(rng):
    e = UncertaintyEllipsoid.sphere(60.0)
    pois = sample_pois(e, 100, 9)
    for _ in range(100):
        n = int(rng.integers(1, 5))
        poses = tuple(
            pose(rng.uniform(0, 2 * np.pi),
                 rng.uniform(-300, 300, 3), nu=0.4, phi=0.9)
            for _ in range(n)
        )
        s = SwarmConfig(poses, e)
        b = information_cost(s, pois)
        assert b.information_cost == b.kappa_total - b.epsilon_term


def test_coverage_monotone_in_swarm(rng):
    e = UncertaintyEllipsoid.sphere(70.0)
    pois = sample_pois(e, 400, 13)
    poses = [pose(rng.uniform(0, 2 * np.pi), rng.uniform(-400, 400, 3))
             for _ in range(5)]
    prev = 0
    for k in range(1, 6):
        count, _, _ = coverage(SwarmConfig(tuple(poses[:k]), e), pois)
        assert count >= prev
        prev = count


def test_permutation_invariance(rng):
    e = UncertaintyEllipsoid.sphere(70.0)
    pois = sample_pois(e, 300, 21)
    poses = [pose(rng.uniform(0, 2 * np.pi), rng.uniform(-400, 400, 3))
             for _ in range(4)]
    b1 = information_cost(SwarmConfig(tuple(poses), e), pois)
    b2 = information_cost(SwarmConfig(tuple(reversed(poses)), e), pois)
    assert b1.kappa_total == pytest.approx(b2.kappa_total, abs=1e-12)
    assert b1.epsilon_term == b2.epsilon_term


def test_expected_cost_zero_stddev_exact():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 300, 4)
    s = swarm(pose(0.5, (300.0, 50.0, 0.0)), pose(2.5, (-250.0, 0.0, 80.0)),
              radius=50.0)
    det = information_cost(s, pois).information_cost
    assert expected_information_cost(s, pois, 0.0, 10, 7) == det


def test_expected_cost_single_sample():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 300, 4)
    s = swarm(pose(0.5, (300.0, 50.0, 0.0)), radius=50.0)
    v1 = expected_information_cost(s, pois, 5.0, 1, 7)
    v2 = expected_information_cost(s, pois, 5.0, 1, 7)
    assert v1 == v2  # deterministic in seed


def test_expected_cost_mc_self_consistency():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 500, 8)
    s = swarm(pose(0.5, (220.0, 30.0, 0.0)), radius=50.0)
    small = np.array([
        expected_information_cost(s, pois, 5.0, 200, seed)
        for seed in range(10)
    ])
    big = expected_information_cost(s, pois, 5.0, 4000, 999)
    stderr = small.std(ddof=1) / np.sqrt(len(small))
    assert abs(small.mean() - big) < 4 * stderr + 0.5


def test_json_record_fields():
    e = UncertaintyEllipsoid.sphere(50.0)
    pois = sample_pois(e, 100, 4)
    d = information_cost(swarm(pose(0.1), radius=50.0), pois).to_json_dict()
    assert set(d) == {"kappa_total", "epsilon_pct", "info_cost",
                      "visible_count", "n_pois"}

import numpy as np
import pytest

from nlsperiodic.nonlinearity import SinglePower
from nlsperiodic.profile_ode import (
    CriticalPoint,
    LevelSetError,
    PotentialParams,
    classify_equilibrium,
    critical_points,
    integrate_orbit,
    orbit_period,
    phase_portrait,
)

CUBIC = SinglePower(3)


def kinds(points):
    return [(round(cp.r, 9), cp.kind) for cp in points]


# -- critical points, J = 0 ---------------------------------------------------


def test_defocusing_center_and_saddle():
    pts = critical_points(PotentialParams(CUBIC, a=1.0, b=-1.0))
    assert kinds(pts) == [(0.0, "center"), (1.0, "saddle")]


def test_focusing_positive_frequency_single_center():
    pts = critical_points(PotentialParams(CUBIC, a=1.0, b=1.0))
    assert kinds(pts) == [(0.0, "center")]


def test_focusing_negative_frequency_saddle_and_center():
    pts = critical_points(PotentialParams(CUBIC, a=-1.0, b=1.0))
    assert kinds(pts) == [(0.0, "saddle"), (1.0, "center")]


def test_origin_eigenvalues():
    cp = classify_equilibrium(PotentialParams(CUBIC, a=1.0, b=-1.0), 0.0)
    assert cp.kind == "center" and cp.lambda_sq == pytest.approx(-1.0)  # lambda = +-i
    cp = classify_equilibrium(PotentialParams(CUBIC, a=-1.0, b=1.0), 0.0)
    assert cp.kind == "saddle" and cp.lambda_sq == pytest.approx(1.0)  # lambda = +-1


def test_degenerate_origin_resolved_by_coupling_sign():
    assert classify_equilibrium(PotentialParams(CUBIC, a=0.0, b=1.0), 0.0).kind == "center"
    assert classify_equilibrium(PotentialParams(CUBIC, a=0.0, b=-1.0), 0.0).kind == "saddle"


def test_non_root_rejected():
    with pytest.raises(ValueError):
        classify_equilibrium(PotentialParams(CUBIC, a=1.0, b=-1.0), 0.5)


# -- critical points, J != 0 ---------------------------------------------------


K_MAX = 4 / 27  # max of k(r) = r^4 (1 - r^2) at r_c = sqrt(2/3), defocusing cubic


@pytest.mark.parametrize(
    "J_sq,count", [(0.5 * K_MAX, 2), (K_MAX, 1), (1.5 * K_MAX, 0)]
)
def test_defocusing_count_threshold(J_sq, count):
    params = PotentialParams(CUBIC, a=1.0, b=-1.0, J=np.sqrt(J_sq))
    pts = critical_points(params)
    assert len(pts) == count
    if count == 2:
        assert [cp.kind for cp in pts] == ["center", "saddle"]
    if count == 1:
        assert pts[0].kind == "saddle-node"
        assert pts[0].r == pytest.approx(np.sqrt(2 / 3), rel=1e-6)


def test_defocusing_smaller_root_is_center_via_convexity():
    params = PotentialParams(CUBIC, a=1.0, b=-1.0, J=0.3)
    pts = critical_points(params)
    r_Q = pts[0].r
    assert pts[0].kind == "center"
    assert float(params.Vpp(r_Q)) > 0  # convex at the smaller radius


@pytest.mark.parametrize("a", [1.0, -1.0])
def test_focusing_single_center_any_frequency(a):
    pts = critical_points(PotentialParams(CUBIC, a=a, b=1.0, J=0.5))
    assert len(pts) == 1 and pts[0].kind == "center"


def test_defocusing_nonpositive_frequency_no_equilibria():
    pts = critical_points(PotentialParams(CUBIC, a=-0.5, b=-1.0, J=0.4))
    assert pts == []


def test_classification_agrees_with_finite_difference_curvature():
    # independent oracle: central differences of the potential itself
    cases = [
        PotentialParams(CUBIC, a=1.0, b=-1.0),
        PotentialParams(CUBIC, a=-1.0, b=1.0),
        PotentialParams(CUBIC, a=1.0, b=-1.0, J=0.3),
        PotentialParams(CUBIC, a=-1.0, b=1.0, J=0.5),
    ]
    h = 1e-5
    for params in cases:
        for cp in critical_points(params):
            r = cp.r
            if r == 0.0 and params.J == 0:
                vpp_fd = (params.V(h) - 2 * params.V(0.0) + params.V(-h)) / h**2
            else:
                vpp_fd = (params.V(r + h) - 2 * params.V(r) + params.V(r - h)) / h**2
            if cp.kind == "saddle-node":
                assert abs(vpp_fd) < 1e-4
            elif cp.kind == "center":
                assert vpp_fd > 0
            else:
                assert vpp_fd < 0


def test_count_consistency_against_brute_force_scan():
    rng = np.random.default_rng(12)
    for _ in range(20):
        a = rng.uniform(0.2, 2.0)
        J = rng.uniform(0.05, 0.8)
        params = PotentialParams(CUBIC, a=a, b=-1.0, J=J)
        pts = critical_points(params)
        rs = np.geomspace(1e-4, 50, 20000)
        vp = params.Vp(rs)
        sign_changes = int(np.count_nonzero(np.sign(vp[:-1]) * np.sign(vp[1:]) < 0))
        simple = [cp for cp in pts if cp.kind != "saddle-node"]
        assert len(simple) == sign_changes


# -- orbit integration ---------------------------------------------------------


def test_small_oscillation_period_matches_harmonic_limit():
    params = PotentialParams(CUBIC, a=1.0, b=1.0)
    orbit = integrate_orbit(params, 0.01, 0.0, 30.0, step=1e-3)
    # measure the period from successive upward zero crossings of r
    r, x = orbit.r, orbit.x
    up = np.flatnonzero((r[:-1] < 0) & (r[1:] >= 0))
    crossings = x[up] + (x[up + 1] - x[up]) * (-r[up]) / (r[up + 1] - r[up])
    periods = np.diff(crossings)
    assert abs(np.mean(periods) - 2 * np.pi) / (2 * np.pi) < 0.01
    assert orbit.drift < 1e-12


def test_orbit_at_critical_point_is_constant():
    params = PotentialParams(CUBIC, a=-1.0, b=1.0)
    orbit = integrate_orbit(params, 1.0, 0.0, 10.0, step=1e-3)
    assert np.allclose(orbit.r, 1.0, atol=1e-14)
    assert orbit.drift == 0.0


def test_homoclinic_orbit_returns_to_origin():
    params = PotentialParams(CUBIC, a=-1.0, b=1.0)  # separatrix level E = V(0) = 0
    r0 = 0.01
    v0 = float(np.sqrt(-2 * params.V(r0)))
    # the loop u = sqrt(2) sech(x - x_peak) closes after 2 arccosh(sqrt(2)/r0)
    loop_time = 2 * np.arccosh(np.sqrt(2) / r0)
    orbit = integrate_orbit(params, r0, v0, loop_time, step=1e-3)
    assert orbit.drift < 1e-8
    assert orbit.r.max() == pytest.approx(np.sqrt(2), rel=1e-6)
    assert abs(orbit.r[-1]) < 0.02  # back near the origin


def test_drift_per_unit_length_bound():
    cases = [
        (PotentialParams(CUBIC, a=1.0, b=-1.0), 0.4, 0.0),
        (PotentialParams(CUBIC, a=-1.0, b=1.0), 1.2, 0.1),
        (PotentialParams(CUBIC, a=1.0, b=-1.0, J=0.3), 0.65, 0.0),
    ]
    for params, r0, v0 in cases:
        orbit = integrate_orbit(params, r0, v0, 50.0, step=1e-3)
        assert orbit.flag is None
        assert orbit.drift / orbit.x[-1] <= 1e-7


def test_time_reversal_symmetry():
    params = PotentialParams(CUBIC, a=-1.0, b=1.0)
    fwd = integrate_orbit(params, 1.3, 0.2, 10.0, step=1e-3)
    back = integrate_orbit(params, float(fwd.r[-1]), -float(fwd.rdot[-1]), 10.0, step=1e-3)
    assert abs(back.r[-1] - 1.3) < 1e-8
    assert abs(back.rdot[-1] + 0.2) < 1e-8


def test_singular_start_rejected_and_guard_band():
    params = PotentialParams(CUBIC, a=1.0, b=-1.0, J=0.3)
    with pytest.raises(ValueError):
        integrate_orbit(params, -0.1, 0.0, 1.0)
    with pytest.raises(ValueError):
        integrate_orbit(params, 1.0, 0.0, 1.0, step=0.0)
    # strongly inward-moving orbit hits the guard band and halts flagged
    falling = integrate_orbit(params, 0.2, -2.0, 5.0, step=1e-3, r_guard=0.05)
    assert falling.flag == "singular"


def test_blowup_flagged_not_fatal():
    params = PotentialParams(CUBIC, a=1.0, b=-1.0)  # V -> -inf, escaping orbit
    orbit = integrate_orbit(params, 1.5, 1.0, 50.0, step=1e-3, blow_up=100.0)
    assert orbit.flag == "blowup"
    assert orbit.r.size > 1


# -- periods -------------------------------------------------------------------


def test_period_approaches_harmonic_limit():
    params = PotentialParams(CUBIC, a=1.0, b=1.0)
    E_near = float(params.V(0.005))
    assert orbit_period(params, E_near) == pytest.approx(2 * np.pi, rel=1e-4)


def test_period_at_critical_level_is_linearization_value():
    params = PotentialParams(CUBIC, a=1.0, b=1.0)
    assert orbit_period(params, 0.0) == pytest.approx(2 * np.pi, rel=1e-12)
    params2 = PotentialParams(CUBIC, a=-1.0, b=1.0)
    V_min = float(params2.V(1.0))
    expected = 2 * np.pi / np.sqrt(float(params2.Vpp(1.0)))
    assert orbit_period(params2, V_min) == pytest.approx(expected, rel=1e-12)


def test_period_grows_monotonically_towards_separatrix():
    params = PotentialParams(CUBIC, a=1.0, b=-1.0)  # saddle level V(1) = 1/4
    saddle_level = float(params.V(1.0))
    levels = saddle_level * (1 - np.geomspace(1e-1, 1e-6, 6))
    periods = [orbit_period(params, float(E)) for E in levels]
    assert all(p2 > p1 for p1, p2 in zip(periods, periods[1:]))


def test_period_cross_checks_orbit_integration():
    params = PotentialParams(CUBIC, a=-1.0, b=1.0, J=0.4)
    center = critical_points(params)[0]
    E = center.V_value + 0.05
    T_quad = orbit_period(params, E, around=center.r)
    orbit = integrate_orbit(params, center.r, np.sqrt(2 * (E - center.V_value)), 3.2 * T_quad, step=5e-4)
    v = orbit.rdot
    up = np.flatnonzero((v[:-1] < 0) & (v[1:] >= 0))
    crossings = orbit.x[up] + (orbit.x[up + 1] - orbit.x[up]) * (-v[up]) / (v[up + 1] - v[up])
    assert np.diff(crossings).mean() == pytest.approx(T_quad, rel=1e-6)


def test_level_set_errors():
    params = PotentialParams(CUBIC, a=1.0, b=1.0)
    with pytest.raises(LevelSetError) as err:
        orbit_period(params, float(params.V(0.0)) - 1.0)
    assert err.value.reason == "empty"
    params2 = PotentialParams(CUBIC, a=1.0, b=-1.0)
    with pytest.raises(LevelSetError) as err:
        orbit_period(params2, float(params2.V(1.0)) + 0.5)
    assert err.value.reason == "unbounded"


# -- portraits -----------------------------------------------------------------


def test_portrait_structures():
    window = (-2.0, 2.0, -1.5, 1.5)
    port = phase_portrait(PotentialParams(CUBIC, a=1.0, b=-1.0), window)
    assert [cp.kind for cp in port.equilibria] == ["center", "saddle"]
    assert port.separatrix_levels == [pytest.approx(0.25)]
    assert len(port.orbits) > 3

    port = phase_portrait(PotentialParams(CUBIC, a=-1.0, b=1.0), window)
    assert [cp.kind for cp in port.equilibria] == ["saddle", "center"]

    port = phase_portrait(PotentialParams(CUBIC, a=-1.0, b=1.0, J=0.5), (0.05, 2.0, -1.5, 1.5))
    assert [cp.kind for cp in port.equilibria] == ["center"]
    assert port.separatrix_levels == []
    assert all(o.flag is None for o in port.orbits)


def test_portrait_orbits_conserve_energy():
    port = phase_portrait(PotentialParams(CUBIC, a=1.0, b=-1.0), (-2.0, 2.0, -1.5, 1.5))
    for orbit in port.orbits:
        if orbit.flag is None and orbit.x[-1] > 0:
            assert orbit.drift / orbit.x[-1] <= 1e-7


def test_critical_point_dataclass_contents():
    cp = critical_points(PotentialParams(CUBIC, a=1.0, b=-1.0))[1]
    assert isinstance(cp, CriticalPoint)
    assert cp.V_value == pytest.approx(0.25)
    assert cp.lambda_sq == pytest.approx(2.0)  # -V''(1) = -(1 - 3)

import numpy as np
import pytest

from nlsperiodic.errors import PreconditionError
from nlsperiodic.nonlinearity import MultiPower, SinglePower
from nlsperiodic.spectral import (
    PeriodicField,
    align_phase,
    center_peak,
    distance_mod_phase,
    energy,
    functionals,
    gradient_energy,
    inner,
    nehari_project,
    nonlinear_integrals,
    ode_residual,
    quadrature_points,
    random_field,
)

TWO_PI = 2 * np.pi
CUBIC = SinglePower(3)


# -- representation ---------------------------------------------------------


def test_constant_samples():
    u = PeriodicField.constant(TWO_PI, 1.0, 8)
    assert np.allclose(u.sample(32), 1.0)


def test_antiperiodic_mode_one_is_lowest_halfwave():
    u = PeriodicField.from_modes(TWO_PI, "anti-periodic", 8, {1: 1.0})
    n = 64
    x = u.grid(n)
    assert np.allclose(u.sample(n), np.exp(1j * np.pi * x / TWO_PI), atol=1e-13)


def test_cosine_samples():
    u = PeriodicField.from_modes(TWO_PI, "periodic", 8, {1: 0.5, -1: 0.5})
    x = u.grid(48)
    assert np.allclose(u.sample(48), np.cos(2 * np.pi * x / TWO_PI), atol=1e-13)


def test_antiperiodicity_of_samples():
    rng = np.random.default_rng(3)
    u = random_field(1.7, "anti-periodic", 6, rng)
    n = 50
    x = u.grid(n)
    left = u.sample(n)
    # u(x + T) = -u(x): evaluate the shifted field on the same grid
    right = u.shifted(-u.T).sample(n)
    assert np.allclose(right, -left, atol=1e-12)
    del x


def test_undersampling_rejected():
    u = PeriodicField.constant(TWO_PI, 1.0, 8)
    with pytest.raises(ValueError):
        u.sample(10)


def test_layout_validation():
    with pytest.raises(ValueError):
        PeriodicField(TWO_PI, "periodic", np.zeros(4, dtype=complex))  # even count
    with pytest.raises(ValueError):
        PeriodicField(TWO_PI, "anti-periodic", np.zeros(5, dtype=complex))  # odd count
    with pytest.raises(ValueError):
        PeriodicField(-1.0, "periodic", np.zeros(5, dtype=complex))
    with pytest.raises(ValueError):
        PeriodicField.from_modes(TWO_PI, "anti-periodic", 4, {2: 1.0})  # even mode


def test_coefficients_immutable():
    u = PeriodicField.constant(TWO_PI, 1.0, 4)
    with pytest.raises(ValueError):
        u.coeffs[0] = 1.0


@pytest.mark.parametrize("boundary", ["periodic", "anti-periodic"])
def test_plancherel_mass_vs_quadrature(boundary):
    rng = np.random.default_rng(11)
    for _ in range(5):
        u = random_field(3.1, boundary, 9, rng)
        n = 4 * u.n_min
        grid_mass = 0.5 * u.T / n * float(np.sum(np.abs(u.sample(n)) ** 2))
        assert grid_mass == pytest.approx(u.mass(), rel=1e-12)


# -- functionals ------------------------------------------------------------


def test_constant_energy_focusing():
    m = 1.0
    u = PeriodicField.constant(TWO_PI, np.sqrt(2 * m / TWO_PI), 16)
    vals = functionals(u, CUBIC, b=1.0)
    assert vals.M == pytest.approx(m, rel=1e-13)
    assert vals.E == pytest.approx(-1 / (2 * np.pi), rel=1e-12)


def test_plane_wave_energy_antiperiodic():
    m = 1.0
    u = PeriodicField.from_modes(TWO_PI, "anti-periodic", 16, {1: np.sqrt(2 * m / TWO_PI)})
    vals = functionals(u, CUBIC, b=-1.0)
    assert vals.M == pytest.approx(1.0, rel=1e-13)
    assert vals.E == pytest.approx(0.25 + 1 / (2 * np.pi), rel=1e-12)
    assert vals.P != 0.0


def test_real_fields_have_zero_momentum():
    rng = np.random.default_rng(5)
    for _ in range(5):
        u = random_field(TWO_PI, "periodic", 12, rng, real=True)
        assert abs(u.momentum()) < 1e-14


def test_action_and_nehari_definitions_on_random_fields():
    # S = E - aM and I = ||u_x||^2 - a||u||^2 - b int f(|u|)|u| recomputed
    # through an independent sampling path
    rng = np.random.default_rng(17)
    a, b = -0.7, 1.3
    for k in range(50):
        boundary = "periodic" if k % 2 == 0 else "anti-periodic"
        u = random_field(2.2, boundary, 8, rng)
        vals = functionals(u, CUBIC, b=b, a=a)
        assert vals.S == pytest.approx(vals.E - a * vals.M, rel=1e-12, abs=1e-12)
        n = 8 * quadrature_points(u, CUBIC)
        mod = np.abs(u.sample(n))
        du = u.derivative().sample(n)
        w = u.T / n
        I_direct = (
            w * float(np.sum(np.abs(du) ** 2))
            - a * w * float(np.sum(mod**2))
            - b * w * float(np.sum(CUBIC.f(mod) * mod))
        )
        assert vals.I == pytest.approx(I_direct, rel=1e-10, abs=1e-10)


# -- gradient ---------------------------------------------------------------


def test_gradient_of_constant():
    s0 = 0.8
    u = PeriodicField.constant(TWO_PI, s0, 8)
    g = gradient_energy(u, CUBIC, b=2.0)
    expected = PeriodicField.constant(TWO_PI, -2.0 * s0**3, 8)
    assert np.allclose(g.coeffs, expected.coeffs, atol=1e-14)


def test_gradient_of_zero_field():
    u = PeriodicField.zeros(TWO_PI, "periodic", 8)
    assert np.allclose(gradient_energy(u, CUBIC, 1.0).coeffs, 0.0)


def test_gradient_linear_part_is_laplacian_eigenvalue():
    eps = 1e-3
    u = PeriodicField.from_modes(TWO_PI, "periodic", 8, {1: eps})
    g = gradient_energy(u, CUBIC, b=0.0)
    idx = np.flatnonzero(u.modes == 1)[0]
    assert g.coeffs[idx] == pytest.approx((2 * np.pi / TWO_PI) ** 2 * eps, rel=1e-12)


@pytest.mark.parametrize("boundary", ["periodic", "anti-periodic"])
def test_gradient_matches_finite_differences(boundary):
    rng = np.random.default_rng(23)
    b = 0.9
    for _ in range(10):
        u = random_field(TWO_PI, boundary, 10, rng)
        v = random_field(TWO_PI, boundary, 10, rng)
        g = gradient_energy(u, CUBIC, b)
        errs = []
        for eps in (1e-4, 5e-5):
            ep = energy(u.with_coeffs(u.coeffs + eps * v.coeffs), CUBIC, b)
            em = energy(u.with_coeffs(u.coeffs - eps * v.coeffs), CUBIC, b)
            errs.append(abs((ep - em) / (2 * eps) - inner(g, v)))
        # second-order accuracy: halving eps divides the error by ~4
        assert errs[0] <= 1e-6 * (1 + abs(inner(g, v)))
        assert errs[1] <= 0.35 * errs[0] + 1e-12


def test_gradient_preserves_antiperiodic_class():
    # f(u) of an odd-frequency field keeps odd frequencies only: synthesizing
    # the gradient and recentering on a double grid shows no even content
    rng = np.random.default_rng(31)
    u = random_field(TWO_PI, "anti-periodic", 8, rng)
    g = gradient_energy(u, CUBIC, 1.0)
    n = 128
    half = g.sample(n)
    full = np.concatenate([half, -half])  # g(x + T) = -g(x)
    spectrum = np.fft.fft(full) / (2 * n)
    even_bins = spectrum[::2]
    assert float(np.max(np.abs(even_bins))) < 1e-12 * float(np.max(np.abs(spectrum)))


# -- residual and Nehari ray projection --------------------------------------


def test_residual_of_exact_constant_solution():
    for p, a, b in [(3.0, -1.0, 1.0), (2.5, 1.0, -0.5)]:
        spec = SinglePower(p)
        u = PeriodicField.constant(TWO_PI, (-a / b) ** (1 / (p - 1)), 12)
        assert ode_residual(u, spec, a, b) < 1e-12


def test_residual_of_zero_field():
    u = PeriodicField.zeros(TWO_PI, "periodic", 8)
    assert ode_residual(u, CUBIC, 1.0, 1.0) == 0.0


def test_residual_of_unit_constant_without_frequency():
    u = PeriodicField.constant(TWO_PI, 1.0, 8)
    assert ode_residual(u, CUBIC, 0.0, 1.0) == pytest.approx(np.sqrt(TWO_PI), rel=1e-12)


def test_nehari_projection_fixed_point():
    t0, proj = nehari_project(PeriodicField.constant(TWO_PI, 1.0, 8), CUBIC, a=-1.0, b=1.0)
    assert t0 == pytest.approx(1.0, rel=1e-12)
    assert np.allclose(proj.coeffs, PeriodicField.constant(TWO_PI, 1.0, 8).coeffs)


def test_nehari_projection_scales_down():
    t0, proj = nehari_project(PeriodicField.constant(TWO_PI, 2.0, 8), CUBIC, a=-1.0, b=1.0)
    assert t0 == pytest.approx(0.5, rel=1e-12)
    vals = functionals(proj, CUBIC, b=1.0, a=-1.0)
    assert abs(vals.I) < 1e-12


def test_nehari_projection_scales_up_defocusing():
    t0, proj = nehari_project(PeriodicField.constant(TWO_PI, 0.5, 8), CUBIC, a=1.0, b=-1.0)
    assert t0 == pytest.approx(2.0, rel=1e-12)
    assert proj.coeffs[8] == pytest.approx(1.0, rel=1e-12)


def test_nehari_projection_postcondition_on_random_fields():
    rng = np.random.default_rng(41)
    for _ in range(20):
        u = random_field(TWO_PI, "periodic", 8, rng)
        _, proj = nehari_project(u, CUBIC, a=-1.0, b=1.0)
        vals = functionals(proj, CUBIC, b=1.0, a=-1.0)
        scale = abs(vals.E) + abs(vals.M) + 1.0
        assert abs(vals.I) <= 1e-9 * scale


def test_nehari_projection_sign_mismatch_rejected():
    # defocusing with a high-frequency field: quadratic part positive,
    # nonlinear part negative -> the ray never crosses the manifold
    u = PeriodicField.from_modes(TWO_PI, "periodic", 8, {5: 1.0})
    with pytest.raises(PreconditionError):
        nehari_project(u, CUBIC, a=0.1, b=-1.0)


def test_nehari_projection_requires_single_power():
    u = PeriodicField.constant(TWO_PI, 1.0, 8)
    with pytest.raises(PreconditionError):
        nehari_project(u, MultiPower(((2.0, 1.0), (3.0, 1.0))), a=-1.0, b=1.0)


# -- gauges -------------------------------------------------------------------


def test_align_phase_makes_dominant_coefficient_real():
    rng = np.random.default_rng(2)
    u = random_field(TWO_PI, "periodic", 6, rng)
    v = align_phase(u)
    k = int(np.argmax(np.abs(v.coeffs)))
    assert abs(np.angle(v.coeffs[k])) < 1e-12
    assert distance_mod_phase(u, v) < 1e-12


def test_distance_mod_phase_ignores_global_phase():
    rng = np.random.default_rng(9)
    u = random_field(TWO_PI, "periodic", 6, rng)
    w = u.with_coeffs(u.coeffs * np.exp(1j * 0.7))
    assert distance_mod_phase(u, w) < 1e-12


def test_center_peak_moves_maximum_to_midpoint():
    u = PeriodicField.from_modes(TWO_PI, "periodic", 8, {0: 1.0, 1: 0.3, -1: 0.3})
    v = center_peak(u)
    n = 512
    x = v.grid(n)
    k = int(np.argmax(np.real(v.sample(n))))
    assert abs(x[k] - TWO_PI / 2) < TWO_PI / n * 1.5


def test_nonlinear_integrals_of_constant():
    u = PeriodicField.constant(TWO_PI, 2.0, 4)
    intF, intfu = nonlinear_integrals(u, CUBIC)
    assert intF == pytest.approx(TWO_PI * 2.0**4 / 4, rel=1e-12)
    assert intfu == pytest.approx(TWO_PI * 2.0**4, rel=1e-12)

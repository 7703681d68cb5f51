import numpy as np
import pytest

from nlsperiodic.rearrangement import fourier_rearrange
from nlsperiodic.spectral import PeriodicField, random_field

TWO_PI = 2 * np.pi


def test_real_cosine_is_fixed():
    u = PeriodicField.from_modes(TWO_PI, "anti-periodic", 8, {1: 0.5, -1: 0.5})
    v = fourier_rearrange(u)
    assert np.allclose(v.coeffs, u.coeffs, atol=1e-15)


def test_plane_wave_becomes_sqrt2_cosine():
    u = PeriodicField.from_modes(TWO_PI, "anti-periodic", 8, {1: 1.0})
    v = fourier_rearrange(u)
    expected = PeriodicField.from_modes(
        TWO_PI, "anti-periodic", 8, {1: 1 / np.sqrt(2), -1: 1 / np.sqrt(2)}
    )
    assert np.allclose(v.coeffs, expected.coeffs, atol=1e-15)
    ratio = (v.lp_norm(4) / u.lp_norm(4)) ** 4
    assert ratio == pytest.approx(1.5, abs=1e-10)


def test_norm_identities_and_lp_monotonicity_on_random_fields():
    rng = np.random.default_rng(101)
    for trial in range(200):
        N = 4 + trial % 7
        T = 1.0 + (trial % 5) * 0.7
        u = random_field(T, "anti-periodic", N, rng)
        v = fourier_rearrange(u)
        assert v.l2_norm_sq() == pytest.approx(u.l2_norm_sq(), rel=1e-12)
        assert v.h1_seminorm_sq() == pytest.approx(u.h1_seminorm_sq(), rel=1e-12)
        for p in (3, 5):
            assert v.lp_norm(p + 1) >= u.lp_norm(p + 1) - 1e-9


def test_output_is_real_on_grid():
    rng = np.random.default_rng(55)
    u = random_field(TWO_PI, "anti-periodic", 10, rng)
    v = fourier_rearrange(u)
    samples = v.sample(128)
    assert float(np.max(np.abs(samples.imag))) <= 1e-12 * float(np.max(np.abs(samples)))
    assert v.is_real()


def test_idempotence():
    rng = np.random.default_rng(56)
    u = random_field(TWO_PI, "anti-periodic", 10, rng)
    once = fourier_rearrange(u)
    twice = fourier_rearrange(once)
    assert np.allclose(once.coeffs, twice.coeffs, atol=1e-15)


def test_periodic_input_rejected():
    u = PeriodicField.constant(TWO_PI, 1.0, 4)
    with pytest.raises(ValueError):
        fourier_rearrange(u)

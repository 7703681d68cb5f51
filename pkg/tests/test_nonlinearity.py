import numpy as np
import pytest
from scipy.integrate import quad

from nlsperiodic.nonlinearity import (
    MultiPower,
    SinglePower,
    TriplePower,
    audit_hypotheses,
    default_audit_grid,
    eval_A,
    eval_h,
    eval_k,
    evaluate,
)
from nlsperiodic.triple_power import region_boundaries

TWO_PI = 2 * np.pi

SPECS = [
    SinglePower(3),
    SinglePower(1.7),
    MultiPower(((2.0, 1.0), (4.0, 0.5))),
    TriplePower(2.0),
    TriplePower(1.2),
]


def test_cubic_point_values():
    f, F, fp, fpp = evaluate(SinglePower(3), 2.0)
    assert (f, F, fp, fpp) == (8.0, 4.0, 12.0, 12.0)


@pytest.mark.parametrize("spec", SPECS)
def test_zero_point(spec):
    f, F, _, _ = evaluate(spec, 0.0)
    assert f == 0.0 and F == 0.0


def test_triple_power_point_values():
    f, F, _, _ = evaluate(TriplePower(2.0), 1.0)
    assert f == pytest.approx(0.0, abs=1e-15)
    assert F == pytest.approx(1 / 3 - 1 / 2 + 1 / 5, rel=1e-15)


def test_fsecond_nonfinite_at_zero_for_small_exponents():
    assert np.isinf(SinglePower(1.5).fsecond(0.0))
    assert SinglePower(2.0).fsecond(0.0) == 2.0
    assert SinglePower(3.0).fsecond(0.0) == 0.0


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        SinglePower(3).f(-1.0)
    with pytest.raises(ValueError):
        eval_h(SinglePower(3), 0.0)
    with pytest.raises(ValueError):
        eval_k(SinglePower(3), 0.0, 1.0, 1.0)


def test_invalid_specs_rejected():
    with pytest.raises(ValueError):
        SinglePower(1.0)
    with pytest.raises(ValueError):
        MultiPower(((3.0, -1.0),))
    with pytest.raises(ValueError):
        MultiPower(())
    with pytest.raises(ValueError):
        TriplePower(0.0)


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 4.5])
def test_h_closed_form_for_powers(p):
    # (s f - 2F)/s^2 simplifies to ((p-1)/(p+1)) s^(p-1) for pure powers
    s = np.geomspace(0.01, 10, 50)
    expected = (p - 1) / (p + 1) * s ** (p - 1)
    assert np.allclose(eval_h(SinglePower(p), s), expected, rtol=1e-13)


def test_h_cubic_value_and_small_s_limit():
    assert eval_h(SinglePower(3), 2.0) == pytest.approx(2.0, rel=1e-14)
    assert abs(eval_h(SinglePower(3), 1e-8)) < 1e-15


def test_A_cubic():
    spec = SinglePower(3)
    s = np.linspace(0.05, 2, 40)
    assert np.allclose(eval_A(spec, s, TWO_PI, 1.0), 1 - 2 * s**2, rtol=1e-12)
    assert eval_A(spec, 1 / np.sqrt(2), TWO_PI, 1.0) == pytest.approx(0.0, abs=1e-15)
    assert eval_A(spec, 1.0, TWO_PI, 1.0) == pytest.approx(-1.0, rel=1e-14)
    assert eval_A(spec, 1e-9, TWO_PI, 1.0) == pytest.approx(1.0, rel=1e-12)


def test_k_values():
    spec = SinglePower(3)
    k, kp = eval_k(spec, 1.0, 1.0, 1.0)
    assert k == pytest.approx(2.0, rel=1e-14)
    assert kp == pytest.approx(10.0, rel=1e-14)  # r^3 (4a + b f' + 3 b f/r)
    k_small, _ = eval_k(spec, 1e-4, 1.0, 1.0)
    assert abs(k_small) < 1e-15
    k_zero, _ = eval_k(spec, 1.0, -1.0, 1.0)
    assert k_zero == pytest.approx(0.0, abs=1e-15)


@pytest.mark.parametrize("spec", SPECS)
def test_derivative_consistency(spec):
    rng = np.random.default_rng(7)
    s = rng.uniform(0.1, 4.0, size=20)
    eps = 1e-5
    fd = (spec.f(s + eps) - spec.f(s - eps)) / (2 * eps)
    scale = 1.0 + np.abs(spec.fprime(s))
    assert np.all(np.abs(fd - spec.fprime(s)) <= 1e-7 * scale)


@pytest.mark.parametrize("spec", SPECS)
def test_F_is_antiderivative(spec):
    for s in (0.3, 1.0, 2.4, 5.0):
        integral, _ = quad(lambda t: float(spec.f(t)), 0.0, s, epsabs=0.0, epsrel=1e-12)
        assert integral == pytest.approx(float(spec.F(s)), rel=1e-10)


@pytest.mark.parametrize("p", [1.5, 3.0, 4.9])
def test_h_increasing_for_powers(p):
    grid = default_audit_grid()
    h = eval_h(SinglePower(p), grid)
    assert np.all(np.diff(h) > 0)


@pytest.mark.parametrize("gamma", [2.0, 2.5, 3.5])
def test_triple_quotient_monotonicity_pattern_above_sqrt3(gamma):
    rb = region_boundaries(gamma)
    spec = TriplePower(gamma)

    def quot_deriv(lo, hi):
        r = np.linspace(lo, hi, 200)[1:-1]
        q = spec.f(r) / r
        return np.diff(q)

    assert np.all(quot_deriv(1e-6, rb.r_minus) > 0)
    assert np.all(quot_deriv(rb.r_minus, rb.r_plus) < 0)
    assert np.all(quot_deriv(rb.r_plus, 3 * rb.r_plus) > 0)


@pytest.mark.parametrize("gamma", [0.5, 1.0, np.sqrt(3) - 1e-9])
def test_triple_quotient_globally_increasing_below_sqrt3(gamma):
    spec = TriplePower(gamma)
    r = np.geomspace(1e-4, 50, 500)
    q = spec.f(r) / r
    assert np.all(np.diff(q) > 0)


@pytest.mark.parametrize("b", [1.0, -1.0])
def test_audit_cubic_all_hold(b):
    report = audit_hypotheses(SinglePower(3), b)
    assert report.all_hold
    assert "p=" in report["H5"].detail  # fitted growth constants are reported


def test_audit_supercritical_power_fails_H5():
    report = audit_hypotheses(SinglePower(7), 1.0)
    assert report["H5"].status == "fails-at"
    assert report["H5"].witness is not None


def test_audit_quintic_fails_H5_boundary():
    # growth bound requires p strictly below 5
    report = audit_hypotheses(SinglePower(5), 1.0)
    assert not report["H5"].holds


def test_audit_triple_power_H3_witness_between_branch_points():
    report = audit_hypotheses(TriplePower(2.0), 1.0)
    v = report["H3"]
    assert v.status == "fails-at"
    assert 1 / 3 < v.witness < 1.0


def test_audit_grid_validation():
    spec = SinglePower(3)
    with pytest.raises(ValueError):
        audit_hypotheses(spec, 1.0, np.geomspace(1e-3, 10, 50))  # too few points
    bad = np.concatenate([np.geomspace(1e-3, 1, 60), np.geomspace(0.5, 10, 60)])
    with pytest.raises(ValueError):
        audit_hypotheses(spec, 1.0, bad)  # not increasing
    with pytest.raises(ValueError):
        audit_hypotheses(spec, 1.0, np.linspace(-1, 10, 200))  # not positive


def test_report_summary_mentions_every_hypothesis():
    report = audit_hypotheses(SinglePower(3), 1.0)
    text = report.summary()
    for name in ("H1", "H4", "H7"):
        assert name in text

"""Gauge-invariant nonlinearity families and structural-hypothesis audits.

A nonlinearity is f(z) = g(|z|^2) z; everything here works with its real
restriction f(s) for s >= 0.  Three parametric kinds are supported:

* ``SinglePower(p)``      : f(s) = s^p, p > 1
* ``MultiPower(terms)``   : f(s) = sum_j c_j s^{p_j}, p_j > 1, c_j > 0
* ``TriplePower(gamma)``  : f(s) = s^2 - gamma s^3 + s^4 (normalized form)

The structural hypotheses (monotone derivative, superquadratic growth,
subcritical growth bound, convexity-type inequality, ...) that gate the
variational results are *audited on a sample grid*, not proved; failures
come with a witness abscissa.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "SinglePower",
    "MultiPower",
    "TriplePower",
    "NonlinearitySpec",
    "evaluate",
    "eval_h",
    "eval_A",
    "eval_k",
    "f_odd",
    "Verdict",
    "HypothesisReport",
    "audit_hypotheses",
    "default_audit_grid",
    "HYPOTHESES",
]


def _check_nonneg(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("nonlinearity is evaluated on |z|; s must be >= 0")
    return s


@dataclass(frozen=True)
class SinglePower:
    """Pure power f(s) = s^p with p > 1."""

    p: float

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"exponent must be > 1, got p={self.p}")

    @property
    def max_exponent(self) -> float:
        return self.p

    def f(self, s):
        return _check_nonneg(s) ** self.p

    def F(self, s):
        s = _check_nonneg(s)
        return s ** (self.p + 1) / (self.p + 1)

    def fprime(self, s):
        s = _check_nonneg(s)
        return self.p * s ** (self.p - 1)

    def fsecond(self, s):
        # one-sided limit at 0 is +inf for p < 2; reported as such
        s = _check_nonneg(s)
        with np.errstate(divide="ignore"):
            return self.p * (self.p - 1) * s ** (self.p - 2)


@dataclass(frozen=True)
class MultiPower:
    """Sum of powers f(s) = sum_j c_j s^{p_j}; terms are (p_j, c_j) pairs."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(p), float(c)) for p, c in self.terms)
        if not terms:
            raise ValueError("MultiPower needs at least one (exponent, coefficient) term")
        for p, c in terms:
            if not p > 1:
                raise ValueError(f"all exponents must be > 1, got {p}")
            if not c > 0:
                raise ValueError(f"all coefficients must be > 0, got {c}")
        object.__setattr__(self, "terms", terms)

    @property
    def max_exponent(self) -> float:
        return max(p for p, _ in self.terms)

    def f(self, s):
        s = _check_nonneg(s)
        return sum(c * s**p for p, c in self.terms)

    def F(self, s):
        s = _check_nonneg(s)
        return sum(c * s ** (p + 1) / (p + 1) for p, c in self.terms)

    def fprime(self, s):
        s = _check_nonneg(s)
        return sum(c * p * s ** (p - 1) for p, c in self.terms)

    def fsecond(self, s):
        s = _check_nonneg(s)
        with np.errstate(divide="ignore"):
            return sum(c * p * (p - 1) * s ** (p - 2) for p, c in self.terms)


@dataclass(frozen=True)
class TriplePower:
    """Normalized cubic-quartic-quintic competition f(s) = s^2 - gamma s^3 + s^4."""

    gamma: float

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")

    @property
    def max_exponent(self) -> float:
        return 4.0

    def f(self, s):
        s = _check_nonneg(s)
        return s**2 - self.gamma * s**3 + s**4

    def F(self, s):
        s = _check_nonneg(s)
        return s**3 / 3 - self.gamma * s**4 / 4 + s**5 / 5

    def fprime(self, s):
        s = _check_nonneg(s)
        return 2 * s - 3 * self.gamma * s**2 + 4 * s**3

    def fsecond(self, s):
        s = _check_nonneg(s)
        return 2 - 6 * self.gamma * s + 12 * s**2


NonlinearitySpec = Union[SinglePower, MultiPower, TriplePower]


def evaluate(spec: NonlinearitySpec, s):
    """Return (f, F, f', f'') at s >= 0; F is the antiderivative with F(0)=0."""
    return spec.f(s), spec.F(s), spec.fprime(s), spec.fsecond(s)


def eval_h(spec: NonlinearitySpec, s):
    """h(s) = (s f(s) - 2 F(s)) / s^2 for s > 0."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValueError("h(s) is defined for s > 0")
    return (s * spec.f(s) - 2 * spec.F(s)) / s**2


def eval_A(spec: NonlinearitySpec, s, T: float, b: float):
    """A(s) = 4 pi^2 / T^2 + b (f(s)/s - f'(s)) for s > 0."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0):
        raise ValueError("A(s) is defined for s > 0")
    if not T > 0:
        raise ValueError("period T must be > 0")
    return 4 * np.pi**2 / T**2 + b * (spec.f(s) / s - spec.fprime(s))


def eval_k(spec: NonlinearitySpec, r, a: float, b: float):
    """Centrifugal-balance function k(r) = r^4 (a + b f(r)/r) and its derivative.

    Returns (k, k') with k'(r) = r^3 (4a + b f'(r) + 3 b f(r)/r).
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("k(r) is defined for r > 0")
    ratio = spec.f(r) / r
    k = r**4 * (a + b * ratio)
    kp = r**3 * (4 * a + b * spec.fprime(r) + 3 * b * ratio)
    return k, kp


def f_odd(spec: NonlinearitySpec, y):
    """Odd extension sign(y) f(|y|): the nonlinear force on real-valued profiles."""
    y = np.asarray(y, dtype=float)
    return np.sign(y) * spec.f(np.abs(y))


# ---------------------------------------------------------------------------
# Hypothesis audit
# ---------------------------------------------------------------------------

HYPOTHESES = ("H1", "H2", "H3", "H4", "H5", "H6", "H7")

_DESCRIPTIONS = {
    "H1": "f' non-decreasing on (0, inf)",
    "H2": "F(s)/s^2 -> inf as s -> inf",
    "H3": "f(s)/s increasing, with limit 0 at s -> 0",
    "H4": "h(s) = (s f - 2F)/s^2 strictly increasing, h(0+) = 0",
    "H5": "tail growth bound |f(s)| <= M s^p with p < 5",
    "H6": "s^2 f''(s) > s f'(s) - f(s) for s > 0",
    "H7": "f(s)/s - f'(s) -> -inf as s -> inf",
}


@dataclass(frozen=True)
class Verdict:
    """Outcome for one hypothesis: holds-on-grid / fails-at / not-applicable."""

    status: str
    witness: float | None = None
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.status == "holds-on-grid"


@dataclass(frozen=True)
class HypothesisReport:
    verdicts: dict
    grid: np.ndarray

    def __getitem__(self, name: str) -> Verdict:
        return self.verdicts[name]

    def holds(self, *names: str) -> bool:
        return all(self.verdicts[n].holds for n in names)

    @property
    def all_hold(self) -> bool:
        return self.holds(*HYPOTHESES)

    def summary(self) -> str:
        lines = []
        for name in HYPOTHESES:
            v = self.verdicts[name]
            loc = "" if v.witness is None else f" at s={v.witness:.6g}"
            lines.append(f"{name}: {v.status}{loc} ({_DESCRIPTIONS[name]})")
        return "\n".join(lines)


def default_audit_grid(s_min: float = 1e-4, s_max: float = 1e2, n: int = 400) -> np.ndarray:
    return np.geomspace(s_min, s_max, n)


def _monotone_violation(s, values, tol, decreasing=False):
    """First index where the sequence fails to be (non-)decreasing beyond tol."""
    d = np.diff(values)
    scale = 1.0 + np.abs(values[:-1]) + np.abs(values[1:])
    bad = (d > tol * scale) if decreasing else (d < -tol * scale)
    idx = np.flatnonzero(bad)
    if idx.size == 0:
        return None
    i = idx[0]
    return 0.5 * (s[i] + s[i + 1])


def audit_hypotheses(
    spec: NonlinearitySpec,
    b: float,
    grid: np.ndarray | None = None,
    *,
    tol: float = 1e-9,
    limit_small: float = 1e-3,
    limit_big: float = 10.0,
) -> HypothesisReport:
    """Audit the structural hypotheses on a positive sample grid.

    Inequalities and monotonicity are checked pointwise; genuine limits are
    replaced by a trend-plus-threshold rule at the grid ends (the value must
    pass ``limit_small``/``limit_big`` and the trend must be monotone over
    the outermost decade of the grid).  A failure records the witness
    abscissa where the stated property is violated by more than ``tol``
    (relative).  The coupling ``b`` does not enter any of the hypotheses; it
    is accepted for interface symmetry with the solvers that consume the
    report.
    """
    if grid is None:
        grid = default_audit_grid()
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 100:
        raise ValueError("audit grid must be 1-D with at least 100 points")
    if np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ValueError("audit grid must be strictly increasing and positive")

    s = grid
    fv = spec.f(s)
    Fv = spec.F(s)
    fp = spec.fprime(s)
    fpp = spec.fsecond(s)
    tail = s >= s[-1] / 10  # last decade
    verdicts = {}

    # H1: f' non-decreasing
    w = _monotone_violation(s, fp, tol)
    verdicts["H1"] = (
        Verdict("holds-on-grid")
        if w is None
        else Verdict("fails-at", w, "f' decreases across this point")
    )

    # H2: F/s^2 -> inf (trend + threshold on the last decade)
    q2 = Fv / s**2
    w = _monotone_violation(s[tail], q2[tail], tol)
    if w is not None:
        verdicts["H2"] = Verdict("fails-at", w, "F/s^2 not growing on the tail")
    elif q2[-1] < limit_big:
        verdicts["H2"] = Verdict(
            "fails-at", s[-1], f"F/s^2 = {q2[-1]:.3g} < {limit_big:g} at grid end"
        )
    else:
        verdicts["H2"] = Verdict("holds-on-grid")

    # H3: f/s increasing, limit 0 at 0
    q3 = fv / s
    w = _monotone_violation(s, q3, tol)
    if w is not None:
        verdicts["H3"] = Verdict("fails-at", w, "f(s)/s decreases across this point")
    elif q3[0] > limit_small:
        verdicts["H3"] = Verdict(
            "fails-at", s[0], f"f/s = {q3[0]:.3g} > {limit_small:g} at grid start"
        )
    else:
        verdicts["H3"] = Verdict("holds-on-grid")

    # H4: h strictly increasing, h(0+) = 0
    h = (s * fv - 2 * Fv) / s**2
    w = _monotone_violation(s, h, tol)
    if w is not None:
        verdicts["H4"] = Verdict("fails-at", w, "h decreases across this point")
    elif abs(h[0]) > limit_small:
        verdicts["H4"] = Verdict(
            "fails-at", s[0], f"|h| = {abs(h[0]):.3g} > {limit_small:g} at grid start"
        )
    else:
        verdicts["H4"] = Verdict("holds-on-grid")

    # H5: fitted tail exponent must stay below 5 (subcritical growth)
    ytail = np.abs(fv[tail])
    stail = s[tail]
    pos = ytail > 0
    if np.count_nonzero(pos) < 2:
        verdicts["H5"] = Verdict("not-applicable", None, "f vanishes on the tail")
    else:
        slope, intercept = np.polyfit(np.log(stail[pos]), np.log(ytail[pos]), 1)
        M_fit = float(np.exp(intercept))
        if slope < 5 - 1e-6:
            verdicts["H5"] = Verdict(
                "holds-on-grid",
                None,
                f"fitted |f| ~ M s^p with p={slope:.4g}, M={M_fit:.4g}, s0={stail[0]:.4g}",
            )
        else:
            verdicts["H5"] = Verdict(
                "fails-at", s[-1], f"fitted tail exponent p={slope:.4g} >= 5"
            )

    # H6: s^2 f'' > s f' - f
    gap = s**2 * fpp - (s * fp - fv)
    scale = 1.0 + np.abs(s**2 * fpp) + np.abs(s * fp - fv)
    bad = np.flatnonzero(gap < -tol * scale)
    verdicts["H6"] = (
        Verdict("holds-on-grid")
        if bad.size == 0
        else Verdict("fails-at", s[bad[0]], "s^2 f'' <= s f' - f here")
    )

    # H7: f/s - f' -> -inf (trend + threshold on the last decade)
    q7 = q3 - fp
    w = _monotone_violation(s[tail], q7[tail], tol, decreasing=True)
    if w is not None:
        verdicts["H7"] = Verdict("fails-at", w, "f/s - f' not decreasing on the tail")
    elif q7[-1] > -limit_big:
        verdicts["H7"] = Verdict(
            "fails-at", s[-1], f"f/s - f' = {q7[-1]:.3g} > -{limit_big:g} at grid end"
        )
    else:
        verdicts["H7"] = Verdict("holds-on-grid")

    return HypothesisReport(verdicts=verdicts, grid=s)

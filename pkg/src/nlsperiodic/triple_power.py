"""Region analysis for the normalized triple-power nonlinearity.

For f(s) = s^2 - gamma s^3 + s^4 the positive stationary radii of the
profile equation at frequency omega (= -a) are the positive roots of the
cubic r^3 - gamma r^2 + r = omega.  Their number is governed by the
critical values of f_1(r) = f(r)/r: one root for small gamma, and a
zero/one/two/three-solution partition of the (gamma, omega) plane once
f_1 loses monotonicity at gamma = sqrt(3).  The borderline where the
potential vanishes at the middle (saddle) radius carries half-kink
profiles; that curve is closed-form and starts at (4/sqrt(5), 2 sqrt(5)/27).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .nonlinearity import TriplePower
from .profile_ode import PotentialParams

__all__ = [
    "f1",
    "potential_value",
    "RegionBoundaries",
    "RegionAnalysis",
    "stationary_radii",
    "region_boundaries",
    "region_label",
    "half_kink_omega",
    "classify_portrait",
    "analyze_region",
    "scan_region_map",
    "potential_params",
    "RegionMap",
]

SQRT3 = math.sqrt(3.0)
HALF_KINK_GAMMA_MIN = 4.0 / math.sqrt(5.0)

PORTRAITS = (
    "no-positive-equilibrium",
    "single-center",
    "two-roots",
    "three-roots-Vc2-positive",
    "three-roots-half-kink",
    "three-roots-Vc2-negative",
)


def f1(gamma: float, r):
    """f(r)/r = r - gamma r^2 + r^3 for the normalized triple power."""
    r = np.asarray(r, dtype=float)
    return r - gamma * r**2 + r**3


def potential_value(gamma: float, omega: float, r):
    """Effective potential V(r) = -omega r^2/2 + F(r) of the radial equation."""
    r = np.asarray(r, dtype=float)
    F = np.abs(r) ** 3 / 3 - gamma * r**4 / 4 + np.abs(r) ** 5 / 5
    return -omega * r**2 / 2 + F


def potential_params(gamma: float, omega: float) -> PotentialParams:
    """Phase-plane parameters for this regime: spec TriplePower, a = -omega, b = 1."""
    return PotentialParams(spec=TriplePower(gamma), a=-omega, b=1.0, J=0.0)


def _cubic(gamma, omega, r):
    return r**3 - gamma * r**2 + r - omega


def _cubic_prime(gamma, r):
    return 3 * r**2 - 2 * gamma * r + 1


def _real_cubic_roots(gamma: float, omega: float) -> list:
    """Real roots of r^3 - gamma r^2 + r - omega by closed form (+degenerate branches)."""
    p = 1.0 - gamma**2 / 3.0
    q = -2.0 * gamma**3 / 27.0 + gamma / 3.0 - omega
    shift = gamma / 3.0
    disc = -4.0 * p**3 - 27.0 * q**2
    scale = 4.0 * abs(p) ** 3 + 27.0 * q**2 + 1e-300
    if abs(disc) <= 1e-14 * scale:
        if abs(p) <= 1e-14 * (1.0 + gamma**2):
            return [shift]  # triple root
        alpha = -1.5 * q / p  # double root
        beta = 3.0 * q / p
        return sorted([alpha, alpha, beta])
    if disc > 0:
        # three distinct real roots (requires p < 0)
        rho = 2.0 * math.sqrt(-p / 3.0)
        arg = min(1.0, max(-1.0, 3.0 * q / (p * rho)))
        phi = math.acos(arg)
        return sorted(rho * math.cos((phi - 2.0 * math.pi * k) / 3.0) + shift for k in range(3))
    # one real root; cancellation-safe Cardano
    sqrt_disc = math.sqrt(q**2 / 4.0 + p**3 / 27.0)
    if q == 0.0:
        A = float(np.cbrt(sqrt_disc))
    else:
        A = float(np.cbrt(-q / 2.0 - math.copysign(sqrt_disc, q)))
    B = 0.0 if A == 0.0 else -p / (3.0 * A)
    return [A + B + shift]


def stationary_radii(gamma: float, omega: float):
    """Sorted positive stationary radii with multiplicities.

    Closed-form cubic solution polished by a Newton step; a multiplicity-2
    root is reported once with its tangency recorded in the multiplicity
    array.  Returns (radii, multiplicities) as matching tuples.
    """
    if not gamma > 0:
        raise ValueError("gamma must be > 0")
    roots = _real_cubic_roots(gamma, omega)
    polished = []
    for r in roots:
        for _ in range(2):
            d = _cubic_prime(gamma, r)
            if abs(d) > 1e-8:
                r = r - _cubic(gamma, omega, r) / d
        polished.append(r)
    merged: list[list] = []
    for r in sorted(polished):
        if merged and abs(r - merged[-1][0]) <= 1e-7 * (1.0 + abs(r)):
            merged[-1][0] = 0.5 * (merged[-1][0] + r)
            merged[-1][1] += 1
        else:
            merged.append([r, 1])
    radii = tuple(r for r, _ in merged if r > 1e-12)
    mults = tuple(mult for r, mult in merged if r > 1e-12)
    return radii, mults


@dataclass(frozen=True)
class RegionBoundaries:
    """Critical structure of f_1: abscissas r-+ and ordinates f_1(r+-)."""

    gamma: float
    monotone: bool
    r_minus: Optional[float] = None
    r_plus: Optional[float] = None
    f1_r_plus: Optional[float] = None
    f1_r_minus: Optional[float] = None


def region_boundaries(gamma: float) -> RegionBoundaries:
    """Critical abscissas r+- = (gamma -+ sqrt(gamma^2-3))/3 and their ordinates.

    For gamma < sqrt(3) the quotient f_1 is strictly increasing ("monotone"
    marker); at gamma = sqrt(3) the two abscissas collapse to gamma/3.
    The ordinates use the closed form (gamma(9 - 2 gamma^2) -+
    2(gamma^2-3)^{3/2})/27.
    """
    if not gamma > 0:
        raise ValueError("gamma must be > 0")
    if gamma < SQRT3:
        return RegionBoundaries(gamma=gamma, monotone=True)
    root = math.sqrt(max(gamma**2 - 3.0, 0.0))
    r_minus = (gamma - root) / 3.0
    r_plus = (gamma + root) / 3.0
    lo = (gamma * (9.0 - 2.0 * gamma**2) - 2.0 * root**3) / 27.0
    hi = (gamma * (9.0 - 2.0 * gamma**2) + 2.0 * root**3) / 27.0
    return RegionBoundaries(
        gamma=gamma, monotone=False, r_minus=r_minus, r_plus=r_plus, f1_r_plus=lo, f1_r_minus=hi
    )


def region_label(gamma: float, omega: float, boundary_tol: float = 1e-12) -> int:
    """Number of positive stationary radii, decided from the closed-form boundaries.

    Root-finding is only used inside a guard band around the boundary
    curves, where the tangency convention applies (a double root counts
    once).  O(1) per point away from boundaries.
    """
    rb = region_boundaries(gamma)
    if rb.monotone:
        if abs(omega) <= boundary_tol:
            return len(stationary_radii(gamma, omega)[0])
        return 1 if omega > 0 else 0
    lo, hi = rb.f1_r_plus, rb.f1_r_minus
    near = min(abs(omega), abs(omega - lo), abs(omega - hi))
    if near <= boundary_tol * (1.0 + abs(omega)):
        return len(stationary_radii(gamma, omega)[0])
    if omega > 0 and lo < omega < hi:
        return 3
    if lo < omega < 0:
        return 2
    if omega > 0:
        return 1
    return 0


def half_kink_omega(gamma: float) -> float:
    """Frequency on which the half-kink connection exists, as a function of gamma.

    omega = (-5 gamma (5 gamma^2 - 24) + sqrt(5 (5 gamma^2 - 16)^3)) / 432,
    defined from gamma = 4/sqrt(5) where the radicand vanishes.
    """
    if gamma < HALF_KINK_GAMMA_MIN - 1e-12:
        raise ValueError(f"half-kink curve starts at gamma = 4/sqrt(5) ~= {HALF_KINK_GAMMA_MIN:.6f}")
    radicand = max(5.0 * gamma**2 - 16.0, 0.0)
    return (-5.0 * gamma * (5.0 * gamma**2 - 24.0) + math.sqrt(5.0 * radicand**3)) / 432.0


def classify_portrait(gamma: float, omega: float, tol: float = 1e-9) -> str:
    """Portrait kind from the stationary-radius count, refined by sign of V(c2).

    In the three-root configuration the middle radius c2 is the interior
    saddle; the connection structure switches with the sign of V(c2), and
    |V(c2)| <= tol is the half-kink borderline.
    """
    radii, _ = stationary_radii(gamma, omega)
    count = len(radii)
    if count == 0:
        return "no-positive-equilibrium"
    if count == 1:
        return "single-center"
    if count == 2:
        return "two-roots"
    v_c2 = float(potential_value(gamma, omega, radii[1]))
    if abs(v_c2) <= tol:
        return "three-roots-half-kink"
    return "three-roots-Vc2-positive" if v_c2 > 0 else "three-roots-Vc2-negative"


@dataclass(frozen=True)
class RegionAnalysis:
    gamma: float
    omega: float
    radii: tuple
    r_minus: Optional[float]
    r_plus: Optional[float]
    count: int
    portrait: str


def analyze_region(gamma: float, omega: float, tol: float = 1e-9) -> RegionAnalysis:
    radii, _ = stationary_radii(gamma, omega)
    rb = region_boundaries(gamma)
    return RegionAnalysis(
        gamma=gamma,
        omega=omega,
        radii=radii,
        r_minus=rb.r_minus,
        r_plus=rb.r_plus,
        count=len(radii),
        portrait=classify_portrait(gamma, omega, tol),
    )


@dataclass(frozen=True)
class RegionMap:
    gammas: np.ndarray
    omegas: np.ndarray
    labels: np.ndarray  # shape (len(omegas), len(gammas))
    curves: dict  # name -> (gamma array, omega array)


def scan_region_map(gamma_range, omega_range, resolution: int = 200) -> RegionMap:
    """Grid of solution counts plus the analytic overlay curves.

    ``gamma_range`` and ``omega_range`` are (min, max) pairs; the grid is
    resolution x resolution (or pass (min, max, count) triples).  Overlay
    curves: the two branch ordinates f_1(r+-)(gamma) and the half-kink line.
    """
    def _axis(rng):
        if len(rng) == 3:
            lo, hi, n = rng
        else:
            lo, hi = rng
            n = resolution
        return np.linspace(float(lo), float(hi), int(n))

    gammas = _axis(gamma_range)
    omegas = _axis(omega_range)
    labels = np.empty((omegas.size, gammas.size), dtype=np.int8)
    for i, w in enumerate(omegas):
        for j, g in enumerate(gammas):
            labels[i, j] = region_label(float(g), float(w))
    curves = {}
    g_hi = float(gammas[-1])
    if g_hi > SQRT3:
        gc = np.linspace(SQRT3, g_hi, 400)
        lo_vals = np.array([region_boundaries(g).f1_r_plus for g in gc])
        hi_vals = np.array([region_boundaries(g).f1_r_minus for g in gc])
        curves["f1_r_plus"] = (gc, lo_vals)
        curves["f1_r_minus"] = (gc, hi_vals)
    if g_hi > HALF_KINK_GAMMA_MIN:
        gk = np.linspace(HALF_KINK_GAMMA_MIN, g_hi, 400)
        curves["half_kink"] = (gk, np.array([half_kink_omega(g) for g in gk]))
    return RegionMap(gammas=gammas, omegas=omegas, labels=labels, curves=curves)

"""Phase-plane analysis of the real profile equation in polar form.

The radial dynamics of a standing-wave profile with angular momentum J is

    r_xx = J^2 / r^3 - a r - b f(r),

a Hamiltonian system with first integral E = r_x^2/2 + V_J(r) for the
effective potential V_J(r) = J^2/(2 r^2) + a r^2/2 + b F(r).  For J = 0 the
profile is real and the coordinate runs over the whole line (the potential
extends evenly); for J != 0 the radius stays positive.  This module locates
and classifies equilibria, integrates orbits with drift monitoring, computes
closed-orbit periods by turning-point quadrature, and assembles sampled
phase portraits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .nonlinearity import NonlinearitySpec, SinglePower, TriplePower, eval_k

__all__ = [
    "PotentialParams",
    "CriticalPoint",
    "Orbit",
    "PhasePortrait",
    "LevelSetError",
    "critical_points",
    "classify_equilibrium",
    "integrate_orbit",
    "orbit_period",
    "phase_portrait",
]


class LevelSetError(ValueError):
    """The requested first-integral level set is empty or unbounded."""

    def __init__(self, reason: str, message: str):
        super().__init__(message)
        self.reason = reason


@dataclass(frozen=True)
class PotentialParams:
    """Parameters of the effective potential: nonlinearity, frequency a, coupling b, momentum J."""

    spec: NonlinearitySpec
    a: float
    b: float
    J: float = 0.0

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("coupling b must be nonzero")

    def V(self, r):
        r = np.asarray(r, dtype=float)
        if self.J == 0:
            return self.a * r**2 / 2 + self.b * self.spec.F(np.abs(r))
        _require_positive(r)
        return self.J**2 / (2 * r**2) + self.a * r**2 / 2 + self.b * self.spec.F(r)

    def Vp(self, r):
        r = np.asarray(r, dtype=float)
        if self.J == 0:
            return self.a * r + self.b * np.sign(r) * self.spec.f(np.abs(r))
        _require_positive(r)
        return -self.J**2 / r**3 + self.a * r + self.b * self.spec.f(r)

    def Vpp(self, r):
        r = np.asarray(r, dtype=float)
        if self.J == 0:
            return self.a + self.b * self.spec.fprime(np.abs(r))
        _require_positive(r)
        return 3 * self.J**2 / r**4 + self.a + self.b * self.spec.fprime(r)

    def energy(self, r, rdot):
        return 0.5 * np.asarray(rdot, dtype=float) ** 2 + self.V(r)


def _require_positive(r):
    if np.any(np.asarray(r) <= 0):
        raise ValueError("radius must be > 0 when J != 0")


@dataclass(frozen=True)
class CriticalPoint:
    r: float
    kind: str  # "center" | "saddle" | "saddle-node"
    V_value: float
    lambda_sq: float


def _scalar_force(params: PotentialParams) -> Callable[[float], float]:
    """Fast scalar force r'' = J^2/r^3 - a r - b f(r) (odd-extended when J = 0)."""
    spec, a, b, J = params.spec, params.a, params.b, params.J
    if isinstance(spec, SinglePower):
        p = spec.p

        def f_odd(u):
            return math.copysign(abs(u) ** p, u)

    elif isinstance(spec, TriplePower):
        g = spec.gamma

        def f_odd(u):
            s = abs(u)
            return math.copysign(s * s * (1 + s * (s - g)), u)

    else:
        terms = spec.terms

        def f_odd(u):
            s = abs(u)
            return math.copysign(sum(c * s**p for p, c in terms), u)

    if J == 0:

        def force(u):
            return -a * u - b * f_odd(u)

    else:
        J2 = J * J

        def force(r):
            return J2 / r**3 - a * r - b * f_odd(r)

    return force


def critical_points(
    params: PotentialParams,
    r_max: float = 100.0,
    n_scan: int = 10_000,
    root_tol: float = 1e-12,
) -> list:
    """All equilibria of the radial system on (0, r_max] (plus r = 0 when J = 0).

    Roots of V_J' are bracketed by sign changes on a log-spaced scan and
    polished by bisection; for J != 0 the scan uses the smooth balance
    k(r) - J^2 (same zeros, no centrifugal pole) and a grazing maximum of k
    is reported as a saddle-node.  Returns classified points sorted by
    radius; the list is empty when no equilibrium exists in the scan range.
    """
    rs = np.geomspace(1e-6 * r_max, r_max, n_scan)
    roots: list[float] = []
    if params.J == 0:
        vals = params.a * rs + params.b * params.spec.f(rs)
        roots.extend(_bracketed_roots(lambda r: params.a * r + params.b * params.spec.f(r), rs, vals))
        merged = _merge_roots(roots, root_tol)
        points = [classify_equilibrium(params, 0.0)]
        points += [classify_equilibrium(params, r) for r, _ in merged]
        return sorted(points, key=lambda cp: cp.r)

    J2 = params.J**2
    kvals, kpvals = eval_k(params.spec, rs, params.a, params.b)
    g = kvals - J2
    roots.extend(_bracketed_roots(lambda r: eval_k(params.spec, r, params.a, params.b)[0] - J2, rs, g))
    # grazing case: k touches J^2 at an interior maximum without a sign change
    for rc in _bracketed_roots(lambda r: eval_k(params.spec, r, params.a, params.b)[1], rs, kpvals):
        k_rc = float(eval_k(params.spec, rc, params.a, params.b)[0])
        scale = abs(J2) + abs(k_rc) + 1e-300
        if abs(k_rc - J2) <= 1e-9 * scale and all(abs(rc - r) > 10 * max(root_tol, 1e-9) for r in roots):
            roots.append(rc)
    merged = _merge_roots(roots, root_tol)
    points = []
    for r, mult in merged:
        cp = classify_equilibrium(params, r)
        if mult > 1 and cp.kind != "saddle-node":
            cp = CriticalPoint(r=cp.r, kind="saddle-node", V_value=cp.V_value, lambda_sq=cp.lambda_sq)
        points.append(cp)
    return sorted(points, key=lambda cp: cp.r)


def _bracketed_roots(fun, rs, vals) -> list:
    roots = []
    sign = np.sign(vals)
    for i in np.flatnonzero(sign[:-1] * sign[1:] < 0):
        roots.append(float(brentq(fun, rs[i], rs[i + 1], xtol=1e-14)))
    for i in np.flatnonzero(vals == 0.0):
        roots.append(float(rs[i]))
    return roots


def _merge_roots(roots, root_tol: float) -> list:
    """Cluster near-identical roots; a merged pair marks a double root."""
    out = []
    for r in sorted(roots):
        if out and abs(r - out[-1][0]) <= 10 * max(root_tol, 1e-12 * (1 + abs(r))):
            out[-1] = (0.5 * (r + out[-1][0]), out[-1][1] + 1)
        else:
            out.append((r, 1))
    return out


def classify_equilibrium(
    params: PotentialParams,
    r0: float,
    root_tol: float = 1e-8,
    degenerate_tol: float = 1e-10,
) -> CriticalPoint:
    """Classify a zero of V_J' from the linearization eigenvalues lambda^2 = -V_J''.

    lambda^2 < 0 gives a center, lambda^2 > 0 a saddle.  Degenerate
    lambda^2 = 0 resolves by the sign of b at the origin (center for b > 0,
    saddle for b < 0) and as a saddle-node at an interior double root.
    """
    if r0 == 0.0:
        if params.J != 0:
            raise ValueError("r = 0 is not in the phase space when J != 0")
        lam_sq = -params.a
        V0 = 0.0
    else:
        Vp = float(params.Vp(r0))
        scale = 1.0 + abs(params.a * r0) + abs(params.b) * (1.0 + abs(float(params.spec.f(abs(r0)))))
        if abs(Vp) > root_tol * scale:
            raise ValueError(f"r0={r0} is not a critical point: V'(r0)={Vp:.3g}")
        lam_sq = -float(params.Vpp(r0))
        V0 = float(params.V(r0))
    scale = 1.0 + abs(params.a) + abs(params.b) * (1.0 + abs(float(params.spec.fprime(abs(r0)) if r0 else 0.0)))
    if abs(lam_sq) <= degenerate_tol * scale:
        if r0 == 0.0:
            kind = "center" if params.b > 0 else "saddle"
        else:
            kind = "saddle-node"
    else:
        kind = "center" if lam_sq < 0 else "saddle"
    return CriticalPoint(r=float(r0), kind=kind, V_value=V0, lambda_sq=float(lam_sq))


@dataclass(frozen=True)
class Orbit:
    """Fixed-step trajectory with first-integral bookkeeping."""

    x: np.ndarray
    r: np.ndarray
    rdot: np.ndarray
    E: float
    drift: float
    J: float
    flag: Optional[str] = None  # None | "singular" | "blowup"


def integrate_orbit(
    params: PotentialParams,
    r0: float,
    rdot0: float,
    length: float,
    step: float = 1e-3,
    r_guard: float = 1e-6,
    blow_up: float = 1e6,
) -> Orbit:
    """Classic fourth-order Runge-Kutta on (r, r_x) with energy-drift reporting.

    Integration halts early (flagged "singular") if the radius enters the
    guard band around 0 while J != 0, and (flagged "blowup") if the state
    exceeds ``blow_up``; unbounded trajectories are legitimate portrait
    content, so neither is an error.
    """
    if step <= 0:
        raise ValueError("step must be > 0")
    if params.J != 0 and r0 <= 0:
        raise ValueError("initial radius must be > 0 when J != 0")
    force = _scalar_force(params)
    n_steps = max(1, int(round(length / step)))
    h = float(step)
    xs = np.empty(n_steps + 1)
    rs = np.empty(n_steps + 1)
    vs = np.empty(n_steps + 1)
    r, v = float(r0), float(rdot0)
    xs[0], rs[0], vs[0] = 0.0, r, v
    flag = None
    n_done = n_steps
    singular = params.J != 0
    for i in range(1, n_steps + 1):
        k1r, k1v = v, force(r)
        r2, v2 = r + 0.5 * h * k1r, v + 0.5 * h * k1v
        if singular and r2 <= r_guard:
            flag, n_done = "singular", i - 1
            break
        k2r, k2v = v2, force(r2)
        r3, v3 = r + 0.5 * h * k2r, v + 0.5 * h * k2v
        if singular and r3 <= r_guard:
            flag, n_done = "singular", i - 1
            break
        k3r, k3v = v3, force(r3)
        r4, v4 = r + h * k3r, v + h * k3v
        if singular and r4 <= r_guard:
            flag, n_done = "singular", i - 1
            break
        k4r, k4v = v4, force(r4)
        r = r + h / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r)
        v = v + h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        if singular and r <= r_guard:
            flag, n_done = "singular", i - 1
            break
        xs[i], rs[i], vs[i] = i * h, r, v
        if abs(r) > blow_up or abs(v) > blow_up:
            flag, n_done = "blowup", i
            break
    xs, rs, vs = xs[: n_done + 1], rs[: n_done + 1], vs[: n_done + 1]
    E = params.energy(rs, vs)
    E0 = float(E[0])
    drift = float(np.max(np.abs(E - E0))) if E.size else 0.0
    return Orbit(x=xs, r=rs, rdot=vs, E=E0, drift=drift, J=params.J, flag=flag)


def _centers_and_saddles(points):
    centers = [cp for cp in points if cp.kind == "center"]
    saddles = [cp for cp in points if cp.kind == "saddle"]
    return centers, saddles


def _turning_point(params, E, start, direction, limit):
    """March from `start` towards `direction` until V crosses E; brentq the crossing."""
    h = max(1e-6, 1e-6 * (1 + abs(start)))
    u_prev = start
    clamp = 1e-12 if params.J != 0 else None
    while True:
        u = u_prev + direction * h
        at_limit = (direction > 0 and u >= limit) or (direction < 0 and u <= limit)
        if at_limit:
            u = limit
        if clamp is not None and u <= clamp:
            u, at_limit = clamp, True
        if float(params.V(u)) >= E:
            lo, hi = (u_prev, u) if u_prev < u else (u, u_prev)
            return float(brentq(lambda t: float(params.V(t)) - E, lo, hi, xtol=1e-14))
        if at_limit:
            return None
        u_prev = u
        h *= 1.5


def orbit_period(
    params: PotentialParams,
    E: float,
    around: Optional[float] = None,
    scan_limit: float = 1e3,
) -> float:
    """Period of the closed orbit at first-integral level E around a center.

    Evaluates 2 * int_{r_min}^{r_max} dr / sqrt(2 (E - V(r))) after the
    cosine substitution that removes the inverse-square-root endpoint
    singularity; relative accuracy ~1e-8.  Raises LevelSetError("empty") if
    no center lies below E and LevelSetError("unbounded") when the level
    set never turns around within the scan limit.
    """
    points = critical_points(params, r_max=min(scan_limit, 100.0))
    centers, _ = _centers_and_saddles(points)
    candidates = [cp for cp in centers if cp.V_value < E or abs(cp.V_value - E) <= 1e-13 * (1 + abs(E))]
    if around is not None:
        candidates = sorted(candidates, key=lambda cp: abs(cp.r - around))
    else:
        candidates = sorted(candidates, key=lambda cp: cp.V_value)
    if not candidates:
        raise LevelSetError("empty", f"no center with well minimum below E={E}")
    center = candidates[0]
    gap = E - center.V_value
    curv = float(params.Vpp(center.r)) if center.r != 0 or params.J != 0 else float(params.Vpp(0.0))
    if gap <= 1e-13 * (1 + abs(E)):
        # harmonic limit at the well bottom
        return 2 * np.pi / math.sqrt(curv)
    left_limit = 0.0 if params.J != 0 else -scan_limit
    r_hi = _turning_point(params, E, center.r, +1, scan_limit)
    r_lo = _turning_point(params, E, center.r, -1, left_limit)
    if r_hi is None or r_lo is None:
        raise LevelSetError("unbounded", f"level set E={E} does not close within |r|<={scan_limit}")
    mid, half = 0.5 * (r_lo + r_hi), 0.5 * (r_hi - r_lo)

    def integrand(theta):
        u = mid - half * math.cos(theta)
        du = half * math.sin(theta)
        gap_u = E - float(params.V(u))
        if gap_u <= 0:
            return 0.0
        return du / math.sqrt(2.0 * gap_u)

    val, _ = quad(integrand, 0.0, np.pi, limit=200, epsabs=0.0, epsrel=1e-10)
    return 2.0 * val


@dataclass(frozen=True)
class PhasePortrait:
    equilibria: list
    isocline_radii: list  # vertical isocline I0 abscissas; I_inf is the r-axis
    orbits: list
    separatrix_levels: list
    window: tuple


def phase_portrait(
    params: PotentialParams,
    window: tuple,
    n_levels: int = 7,
    step: float = 2e-3,
    separatrix_offset: float = 1e-6,
) -> PhasePortrait:
    """Sampled portrait: equilibria, isoclines, and orbits on a grid of levels.

    Orbits are seeded at turning points of first-integral levels filling each
    potential well; separatrix levels are seeded slightly inside the saddle
    level (offset ~1e-6 of the level gap) because exact separatrices are not
    robust under numerical integration.  Unbounded levels get edge-seeded
    escaping trajectories, cut at the window.
    """
    r_lo, r_hi, v_lo, v_hi = window
    points = critical_points(params, r_max=max(abs(r_lo), abs(r_hi), 1.0) * 2)
    visible = [cp for cp in points if r_lo <= cp.r <= r_hi]
    centers, saddles = _centers_and_saddles(points)
    orbits = []
    sep_levels = [cp.V_value for cp in saddles]
    # orbits crossing the window near a center carry at most this much energy
    e_kin = 0.5 * max(abs(v_lo), abs(v_hi)) ** 2

    span = max(r_hi - r_lo, v_hi - v_lo, 1.0)

    def integrate_level(E, start_r, start_v=0.0):
        period_guess = None
        try:
            period_guess = orbit_period(params, E, around=start_r)
        except LevelSetError:
            pass
        length = min(1.05 * period_guess, 400.0) if period_guess else 4.0 * (r_hi - r_lo + 1.0)
        orbits.append(integrate_orbit(params, start_r, start_v, length, step=step, blow_up=20 * span))

    for cp in centers:
        cap = cp.V_value + 1.1 * e_kin
        ceiling = min([s.V_value for s in saddles if s.V_value > cp.V_value], default=cap)
        ceiling = min(ceiling, cap)
        if ceiling <= cp.V_value:
            continue
        ladder = ceiling - cp.V_value
        for E in cp.V_value + ladder * np.linspace(0.08, 0.92, n_levels):
            left_limit = 0.0 if params.J != 0 else -(abs(r_lo) + abs(r_hi))
            r_start = _turning_point(params, float(E), cp.r, -1, left_limit)
            if r_start is None:
                continue
            integrate_level(float(E), r_start + 1e-9)
    for sp in saddles:
        near_center = min(centers, key=lambda c: abs(c.V_value - sp.V_value), default=None) if centers else None
        gap = abs(sp.V_value - near_center.V_value) if near_center else 1.0
        for sgn in (-1.0, +1.0):
            E = sp.V_value + sgn * separatrix_offset * gap
            for direction in (-1, +1):
                r_seed = sp.r + direction * 1e-4 * (1 + abs(sp.r))
                if params.J != 0 and r_seed <= 0:
                    continue
                gap_seed = E - float(params.V(r_seed))
                if gap_seed <= 0:
                    continue
                v_seed = math.sqrt(2 * gap_seed)
                orbits.append(
                    integrate_orbit(
                        params, r_seed, v_seed, 4.0 * (r_hi - r_lo + 1.0), step=step, blow_up=20 * span
                    )
                )
    return PhasePortrait(
        equilibria=visible,
        isocline_radii=[cp.r for cp in points],
        orbits=orbits,
        separatrix_levels=sep_levels,
        window=window,
    )

"""Band-limited complex fields on [0, T] and the standing-wave functionals.

A field is stored by its Fourier coefficients.  Two boundary classes exist:

* ``periodic``       u(x+T) =  u(x);  modes j = -N..N, frequency 2*pi*j/T.
* ``anti-periodic``  u(x+T) = -u(x);  odd modes j = -(2N-1)..(2N-1),
                     frequency pi*j/T (half-integer multiples of 2*pi/T).

All integrals run over one domain length [0, T].  Quadratic functionals
(mass, kinetic energy, momentum) are evaluated exactly from coefficients via
Plancherel; nonlinear integrals use trapezoidal quadrature on an oversampled
uniform grid, which is spectrally accurate for the smooth T-periodic
integrands that arise (every integrand is a function of |u|, or of u times
an opposite-parity factor, hence T-periodic even for anti-periodic u).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PreconditionError
from .nonlinearity import NonlinearitySpec, SinglePower

__all__ = [
    "PeriodicField",
    "FunctionalValues",
    "functionals",
    "energy",
    "gradient_energy",
    "ode_residual",
    "nehari_project",
    "align_phase",
    "center_peak",
    "distance_mod_phase",
    "inner",
    "random_field",
    "quadrature_points",
]

BOUNDARIES = ("periodic", "anti-periodic")


@dataclass(frozen=True)
class PeriodicField:
    """Immutable band-limited field; coefficients are ordered by ascending mode."""

    T: float
    boundary: str
    coeffs: np.ndarray

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("domain length T must be > 0")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}")
        c = np.array(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size < 2:
            raise ValueError("coeffs must be a 1-D array with at least 2 entries")
        if self.boundary == "periodic" and c.size % 2 == 0:
            raise ValueError("periodic fields store 2N+1 coefficients (odd count)")
        if self.boundary == "anti-periodic" and c.size % 2 == 1:
            raise ValueError("anti-periodic fields store 2N coefficients (even count)")
        if not np.all(np.isfinite(c.view(float))):
            raise ValueError("coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # -- layout -------------------------------------------------------------

    @property
    def N(self) -> int:
        """Mode cutoff: 2N+1 periodic coefficients or 2N anti-periodic ones."""
        n = self.coeffs.size
        return (n - 1) // 2 if self.boundary == "periodic" else n // 2

    @property
    def modes(self) -> np.ndarray:
        N = self.N
        if self.boundary == "periodic":
            return np.arange(-N, N + 1)
        return np.arange(-(2 * N - 1), 2 * N, 2)

    @property
    def freqs(self) -> np.ndarray:
        unit = 2 * np.pi / self.T if self.boundary == "periodic" else np.pi / self.T
        return unit * self.modes

    @property
    def n_min(self) -> int:
        return 2 * self.N + 1

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zeros(cls, T: float, boundary: str, N: int) -> "PeriodicField":
        size = 2 * N + 1 if boundary == "periodic" else 2 * N
        return cls(T, boundary, np.zeros(size, dtype=complex))

    @classmethod
    def constant(cls, T: float, value: complex, N: int) -> "PeriodicField":
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N] = value
        return cls(T, "periodic", c)

    @classmethod
    def from_modes(cls, T: float, boundary: str, N: int, amplitudes: dict) -> "PeriodicField":
        field = cls.zeros(T, boundary, N)
        c = field.coeffs.copy()
        modes = field.modes
        for j, value in amplitudes.items():
            where = np.flatnonzero(modes == j)
            if where.size == 0:
                raise ValueError(f"mode {j} not representable ({boundary}, N={N})")
            c[where[0]] = value
        return cls(T, boundary, c)

    def with_coeffs(self, coeffs: np.ndarray) -> "PeriodicField":
        return PeriodicField(self.T, self.boundary, coeffs)

    # -- synthesis / analysis -------------------------------------------------

    def grid(self, n: int) -> np.ndarray:
        return self.T * np.arange(n) / n

    def sample(self, n: int) -> np.ndarray:
        """Evaluate on the uniform grid x_k = k T / n; exact for the stored band."""
        if n < self.n_min:
            raise ValueError(f"need at least {self.n_min} points to resolve N={self.N}")
        N = self.N
        spectrum = np.zeros(n, dtype=complex)
        if self.boundary == "periodic":
            idx = np.arange(-N, N + 1) % n
            spectrum[idx] = self.coeffs
            return np.fft.ifft(spectrum) * n
        # anti-periodic: u = e^{i pi x / T} * w with w on the integer lattice
        w_modes = np.arange(-N, N) % n  # (j - 1) / 2 for odd j
        spectrum[w_modes] = self.coeffs
        w = np.fft.ifft(spectrum) * n
        return w * np.exp(1j * np.pi * np.arange(n) / n)

    def analyze_samples(self, values: np.ndarray) -> np.ndarray:
        """Project grid samples of a function in this boundary class onto the band."""
        n = values.size
        if n < self.n_min:
            raise ValueError("analysis grid is smaller than the stored band")
        N = self.N
        if self.boundary == "periodic":
            spectrum = np.fft.fft(values) / n
            return spectrum[np.arange(-N, N + 1) % n]
        w = values * np.exp(-1j * np.pi * np.arange(n) / n)
        spectrum = np.fft.fft(w) / n
        return spectrum[np.arange(-N, N) % n]

    def derivative(self) -> "PeriodicField":
        return self.with_coeffs(1j * self.freqs * self.coeffs)

    def shifted(self, dx: float) -> "PeriodicField":
        """Translate by dx: the returned field is x -> u(x - dx)."""
        return self.with_coeffs(self.coeffs * np.exp(-1j * self.freqs * dx))

    def conjugate(self) -> "PeriodicField":
        return self.with_coeffs(np.conj(self.coeffs[::-1]))

    # -- exact quadratic quantities --------------------------------------------

    def l2_norm_sq(self) -> float:
        return self.T * float(np.sum(np.abs(self.coeffs) ** 2))

    def h1_seminorm_sq(self) -> float:
        return self.T * float(np.sum(self.freqs**2 * np.abs(self.coeffs) ** 2))

    def mass(self) -> float:
        return 0.5 * self.l2_norm_sq()

    def momentum(self) -> float:
        return -0.5 * self.T * float(np.sum(self.freqs * np.abs(self.coeffs) ** 2))

    def is_real(self, tol: float = 1e-10) -> bool:
        sym = np.conj(self.coeffs[::-1])
        scale = np.max(np.abs(self.coeffs)) + 1e-300
        return float(np.max(np.abs(self.coeffs - sym))) <= tol * scale

    def lp_norm(self, q: float, n: Optional[int] = None) -> float:
        """L^q norm over [0, T] by oversampled trapezoidal quadrature."""
        if n is None:
            n = max(int(np.ceil(q + 1)) * self.n_min, self.n_min)
        u = self.sample(n)
        return float((self.T / n * np.sum(np.abs(u) ** q)) ** (1.0 / q))


def quadrature_points(field: PeriodicField, spec: NonlinearitySpec) -> int:
    """Grid size for nonlinear integrals: (ceil(p_max)+1)-fold oversampling."""
    factor = max(2, int(np.ceil(spec.max_exponent)) + 1)
    return factor * field.n_min


def inner(u: PeriodicField, v: PeriodicField) -> float:
    """Real L^2 inner product Re \\int u conj(v) over [0, T]."""
    _check_same_layout(u, v)
    return u.T * float(np.real(np.sum(u.coeffs * np.conj(v.coeffs))))


def _check_same_layout(u: PeriodicField, v: PeriodicField):
    if u.boundary != v.boundary or u.coeffs.size != v.coeffs.size or u.T != v.T:
        raise ValueError("fields live on different discretizations")


def _gauge_nonlinearity(spec: NonlinearitySpec, u: np.ndarray) -> np.ndarray:
    """f(u) = g(|u|^2) u for complex samples, with the removable 0/0 at u = 0."""
    mod = np.abs(u)
    ratio = np.zeros_like(mod)
    nz = mod > 0
    ratio[nz] = spec.f(mod[nz]) / mod[nz]
    return ratio * u


@dataclass(frozen=True)
class FunctionalValues:
    """Values of the conserved functionals at fixed (a, b, spec)."""

    E: float
    M: float
    P: float
    S: float
    I: float
    a: float
    b: float
    spec: NonlinearitySpec


def nonlinear_integrals(field: PeriodicField, spec: NonlinearitySpec, n: Optional[int] = None):
    """Return (int F(|u|) dx, int f(|u|) |u| dx) over [0, T]."""
    if n is None:
        n = quadrature_points(field, spec)
    mod = np.abs(field.sample(n))
    w = field.T / n
    return w * float(np.sum(spec.F(mod))), w * float(np.sum(spec.f(mod) * mod))


def energy(field: PeriodicField, spec: NonlinearitySpec, b: float, n: Optional[int] = None) -> float:
    intF, _ = nonlinear_integrals(field, spec, n)
    return 0.5 * field.h1_seminorm_sq() - b * intF


def functionals(
    field: PeriodicField, spec: NonlinearitySpec, b: float, a: float = 0.0
) -> FunctionalValues:
    intF, intfu = nonlinear_integrals(field, spec)
    kin = field.h1_seminorm_sq()
    l2 = field.l2_norm_sq()
    E = 0.5 * kin - b * intF
    M = 0.5 * l2
    P = field.momentum()
    S = E - a * M
    I = kin - a * l2 - b * intfu
    return FunctionalValues(E=E, M=M, P=P, S=S, I=I, a=a, b=b, spec=spec)


def gradient_energy(field: PeriodicField, spec: NonlinearitySpec, b: float) -> PeriodicField:
    """L^2 gradient of the energy, -u_xx - b f(u), projected back onto the band."""
    n = quadrature_points(field, spec)
    fu = _gauge_nonlinearity(spec, field.sample(n))
    fu_hat = field.analyze_samples(fu)
    return field.with_coeffs(field.freqs**2 * field.coeffs - b * fu_hat)


def ode_residual(field: PeriodicField, spec: NonlinearitySpec, a: float, b: float) -> float:
    """L^2 norm of u_xx + a u + b f(u) on the oversampled grid."""
    n = quadrature_points(field, spec)
    u = field.sample(n)
    uxx = field.with_coeffs(-field.freqs**2 * field.coeffs).sample(n)
    res = uxx + a * u + b * _gauge_nonlinearity(spec, u)
    return float(np.sqrt(field.T / n * np.sum(np.abs(res) ** 2)))


def nehari_project(field: PeriodicField, spec: NonlinearitySpec, a: float, b: float):
    """Scale u along its ray onto the natural constraint I(t u) = 0.

    Only homogeneous nonlinearities admit the closed-form scaling
    t0 = (Q / (b ||u||_{p+1}^{p+1}))^{1/(p-1)} with Q = ||u_x||^2 - a ||u||^2.
    Returns (t0, t0 * u).
    """
    if not isinstance(spec, SinglePower):
        raise PreconditionError("Nehari scaling projection requires a single-power nonlinearity")
    Q = field.h1_seminorm_sq() - a * field.l2_norm_sq()
    n = quadrature_points(field, spec)
    mod = np.abs(field.sample(n))
    D = b * field.T / n * float(np.sum(mod ** (spec.p + 1)))
    if D == 0.0 or Q == 0.0 or (Q > 0) != (D > 0):
        raise PreconditionError(
            "no Nehari representative on this ray: "
            f"||u_x||^2 - a||u||^2 = {Q:.6g} and b||u||_p+1^p+1 = {D:.6g} must share a sign"
        )
    t0 = (Q / D) ** (1.0 / (spec.p - 1))
    return t0, field.with_coeffs(t0 * field.coeffs)


def align_phase(field: PeriodicField) -> PeriodicField:
    """Fix the global gauge by making the largest coefficient real positive."""
    c = field.coeffs
    k = int(np.argmax(np.abs(c)))
    if c[k] == 0:
        return field
    return field.with_coeffs(c * np.exp(-1j * np.angle(c[k])))


def center_peak(field: PeriodicField, n: Optional[int] = None) -> PeriodicField:
    """Translate so the maximum of the real part sits at x = T/2."""
    if n is None:
        n = 8 * field.n_min
    x = field.grid(n)
    k = int(np.argmax(np.real(field.sample(n))))
    return field.shifted(field.T / 2 - x[k])


def distance_mod_phase(u: PeriodicField, v: PeriodicField) -> float:
    """L^2 distance min over global phases of ||u - e^{i phi} v||."""
    _check_same_layout(u, v)
    cross = u.T * np.sum(u.coeffs * np.conj(v.coeffs))
    d2 = u.l2_norm_sq() + v.l2_norm_sq() - 2 * abs(cross)
    return float(np.sqrt(max(d2, 0.0)))


def random_field(
    T: float,
    boundary: str,
    N: int,
    rng: np.random.Generator,
    mass: Optional[float] = None,
    real: bool = False,
    decay: float = 2.0,
) -> PeriodicField:
    """Seeded random band-limited field with algebraically decaying spectrum."""
    field = PeriodicField.zeros(T, boundary, N)
    modes = field.modes
    amp = (1.0 + np.abs(modes)) ** (-decay)
    c = amp * (rng.standard_normal(modes.size) + 1j * rng.standard_normal(modes.size))
    if real:
        c = 0.5 * (c + np.conj(c[::-1]))
    field = field.with_coeffs(c)
    if mass is not None:
        m0 = field.mass()
        if m0 == 0:
            raise ValueError("cannot rescale zero field to positive mass")
        field = field.with_coeffs(c * np.sqrt(mass / m0))
    return field

"""Spectra of the linearized operator -d^2/dx^2 - a - b f'(u) around profiles.

Around a constant state the spectrum is closed-form (the Lagrange multiplier
of the constant is substituted automatically); around a general real profile
the operator is assembled in the Fourier basis of the profile's boundary
class and diagonalized.  The Morse index (number of strictly negative
eigenvalues) is reported with a relative zero tolerance so the translation
zero mode of a non-constant profile is not miscounted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .nonlinearity import NonlinearitySpec
from .spectral import PeriodicField, quadrature_points

__all__ = ["SpectrumReport", "constant_spectrum", "hill_spectrum"]

DEFAULT_ZERO_TOL = 1e-8  # relative to the spectral radius


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray  # ascending, multiplicities expanded
    morse_index: int
    descriptor: dict
    truncation: int

    @property
    def zero_modes(self) -> int:
        scale = float(np.max(np.abs(self.eigenvalues))) or 1.0
        return int(np.count_nonzero(np.abs(self.eigenvalues) <= DEFAULT_ZERO_TOL * scale))


def _morse_index(eigs: np.ndarray, zero_tol: float) -> int:
    scale = float(np.max(np.abs(eigs))) or 1.0
    return int(np.count_nonzero(eigs < -zero_tol * scale))


def constant_spectrum(
    spec: NonlinearitySpec,
    b: float,
    m: float,
    T: float,
    n_max: int = 16,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> SpectrumReport:
    """Eigenvalues (2 pi n / T)^2 + b (f(s0)/s0 - f'(s0)) at s0 = sqrt(2m/T).

    These are the eigenvalues of the linearization around the constant state
    of mass m on the periodic interval, each n != 0 carrying multiplicity 2.
    """
    if not m > 0:
        raise ValueError("mass m must be > 0")
    if not T > 0:
        raise ValueError("period T must be > 0")
    s0 = math.sqrt(2 * m / T)
    offset = b * (float(spec.f(s0)) / s0 - float(spec.fprime(s0)))
    eigs = [offset]
    for n in range(1, n_max + 1):
        lam = (2 * np.pi * n / T) ** 2 + offset
        eigs.extend([lam, lam])
    eigs = np.sort(np.asarray(eigs))
    return SpectrumReport(
        eigenvalues=eigs,
        morse_index=_morse_index(eigs, zero_tol),
        descriptor={"kind": "constant", "b": b, "m": m, "T": T, "spec": repr(spec)},
        truncation=n_max,
    )


def hill_spectrum(
    profile: PeriodicField,
    spec: NonlinearitySpec,
    a: float,
    b: float,
    N: Optional[int] = None,
    zero_tol: float = DEFAULT_ZERO_TOL,
) -> SpectrumReport:
    """Diagonalize -d^2/dx^2 - a - b f'(u) in the Fourier basis of the profile.

    The profile must be real-valued (up to a gauge already removed); the
    multiplication operator f'(|u|) then couples modes j and k through the
    Fourier coefficient of f'(|u|) at the difference frequency, which always
    lies on the representable lattice because f' is even.  The assembled
    matrix is Hermitian-symmetrized before diagonalization, so the returned
    eigenvalues are exactly real.
    """
    if N is None:
        N = profile.N
    n_fft = max(quadrature_points(profile, spec), 4 * (2 * N + 1))
    u = profile.sample(n_fft)
    if float(np.max(np.abs(u.imag))) > 1e-8 * (float(np.max(np.abs(u))) + 1e-300):
        raise ValueError("hill_spectrum expects a real-valued profile")
    basis = PeriodicField.zeros(profile.T, profile.boundary, N)
    modes = basis.modes
    freqs = basis.freqs

    # Fourier coefficients of the T-periodic weight f'(|u|) on the integer lattice
    what = np.fft.fft(spec.fprime(np.abs(u.real))) / n_fft
    # periodic: j - k indexes the lattice directly; anti-periodic: j, k odd,
    # so j - k is even and (j - k)/2 is the lattice index
    diff_unit = 1 if profile.boundary == "periodic" else 2
    jj = modes[:, None] - modes[None, :]
    W = what[(jj // diff_unit) % n_fft]
    H = np.diag(freqs**2 - a) - b * W
    H = 0.5 * (H + H.conj().T)
    eigs = np.linalg.eigvalsh(H)
    return SpectrumReport(
        eigenvalues=eigs,
        morse_index=_morse_index(eigs, zero_tol),
        descriptor={
            "kind": "hill",
            "a": a,
            "b": b,
            "T": profile.T,
            "boundary": profile.boundary,
            "spec": repr(spec),
        },
        truncation=N,
    )

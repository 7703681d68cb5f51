"""Plain-text field files: diffable, bit-stable, language-neutral.

Layout: three header lines ``T=...``, ``boundary=...``, ``N=...`` followed
by one ``j re im`` triple per stored mode, all decimals printed with 17
significant digits (which round-trips IEEE doubles exactly).
"""

from __future__ import annotations

import numpy as np

from .spectral import PeriodicField

__all__ = ["write_field", "read_field", "format_field"]


def format_field(field: PeriodicField) -> str:
    lines = [
        f"T={field.T:.17g}",
        f"boundary={field.boundary}",
        f"N={field.N}",
    ]
    for j, c in zip(field.modes, field.coeffs):
        lines.append(f"{j} {c.real:.17g} {c.imag:.17g}")
    return "\n".join(lines) + "\n"


def write_field(path, field: PeriodicField) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_field(field))


def read_field(path) -> PeriodicField:
    with open(path, "r", encoding="ascii") as fh:
        raw = [line.strip() for line in fh if line.strip()]
    header = {}
    body_start = 0
    for i, line in enumerate(raw):
        if "=" in line:
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
            body_start = i + 1
        else:
            break
    for key in ("T", "boundary", "N"):
        if key not in header:
            raise ValueError(f"field file is missing header line {key}=...")
    T = float(header["T"])
    boundary = header["boundary"]
    N = int(header["N"])
    field = PeriodicField.zeros(T, boundary, N)
    modes = field.modes
    coeffs = np.zeros(modes.size, dtype=complex)
    seen = set()
    for line in raw[body_start:]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"malformed coefficient line: {line!r}")
        j = int(parts[0])
        where = np.flatnonzero(modes == j)
        if where.size == 0:
            raise ValueError(f"mode {j} not representable for boundary={boundary}, N={N}")
        if j in seen:
            raise ValueError(f"duplicate mode {j} in field file")
        seen.add(j)
        coeffs[where[0]] = complex(float(parts[1]), float(parts[2]))
    return field.with_coeffs(coeffs)

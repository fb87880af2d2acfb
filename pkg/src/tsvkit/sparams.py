"""Scattering parameters of the three-port from its impedance matrix.

Conversion uses the equal-real-reference form S = (Z - Z0 I)(Z + Z0 I)^-1 and
its algebraic inverse Z = Z0 (I + S)(I - S)^-1, computed with partial-pivoting
linear solves (never an explicit inverse).  Magnitudes are reported as
20*log10|s|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConversionError, NetworkDegeneracyError, ValidationError
from .network import ThreePortZ
from .numerics import condition_number, solve_extended

COND_LIMIT = 1e12


@dataclass(frozen=True)
class ThreePortS:
    """Scattering matrix at one frequency, referenced to a real z0 on all ports."""

    frequency: float
    s: np.ndarray
    z0: float = 50.0

    def __post_init__(self):
        s = np.asarray(self.s, dtype=complex)
        if s.shape != (3, 3):
            raise ValidationError(f"s must be 3x3, got shape {s.shape}")
        if not (self.z0 > 0 and math.isfinite(self.z0)):
            raise ValidationError(f"z0 must be finite and positive, got {self.z0!r}")
        object.__setattr__(self, "s", s)


def z_to_s(zp: ThreePortZ, z0: float = 50.0) -> ThreePortS:
    """Convert one impedance matrix to scattering parameters."""
    eye = np.eye(3)
    a = zp.z + z0 * eye
    cond = condition_number(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ConversionError(
            f"(Z + z0 I) is singular or ill-conditioned at {zp.frequency:.6g} Hz "
            f"(condition number {cond:.3e})", condition_number=cond)
    try:
        # S = (Z - z0 I) A^-1  via  S^T = solve(A^T, (Z - z0 I)^T)
        s = solve_extended(a.T, (zp.z - z0 * eye).T).T
    except NetworkDegeneracyError as err:
        raise ConversionError(
            f"(Z + z0 I) singular at {zp.frequency:.6g} Hz", condition_number=cond) from err
    return ThreePortS(frequency=zp.frequency, s=s, z0=z0)


def s_to_z(sp: ThreePortS) -> ThreePortZ:
    """Invert the scattering conversion: Z = z0 (I + S)(I - S)^-1."""
    eye = np.eye(3)
    a = eye - sp.s
    cond = condition_number(a)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ConversionError(
            f"(I - S) is singular or ill-conditioned at {sp.frequency:.6g} Hz "
            f"(condition number {cond:.3e}); S has a near-unit eigenvalue",
            condition_number=cond)
    try:
        z = solve_extended(a.T, (sp.z0 * (eye + sp.s)).T).T
    except NetworkDegeneracyError as err:
        raise ConversionError(
            f"(I - S) singular at {sp.frequency:.6g} Hz", condition_number=cond) from err
    return ThreePortZ(frequency=sp.frequency, z=z)


def s_sweep(zs: list[ThreePortZ], z0: float = 50.0) -> list[ThreePortS]:
    """Per-point conversion of a full sweep, preserving order."""
    if not zs:
        raise ValidationError("empty impedance sweep")
    out = []
    for zp in zs:
        try:
            out.append(z_to_s(zp, z0))
        except ConversionError as err:
            raise ConversionError(
                f"sweep conversion failed at {zp.frequency:.6g} Hz: {err}",
                condition_number=err.condition_number) from err
    return out


def magnitude_db(value: complex) -> float:
    """20*log10 of the magnitude; -inf for an exact zero."""
    mag = abs(value)
    return 20.0 * math.log10(mag) if mag > 0.0 else float("-inf")


def max_singular_value(sp: ThreePortS) -> float:
    return float(np.linalg.svd(sp.s, compute_uv=False)[0])


S_CSV_HEADER = "frequency_hz,s21_db,s31_db"

_FULL_COLS = [f"{part}_s{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3) for part in ("re", "im")]
S_CSV_HEADER_FULL = S_CSV_HEADER + "," + ",".join(_FULL_COLS)


def s_sweep_csv(sweep: list[ThreePortS], full: bool = False) -> str:
    """CSV of |S21| and |S31| in dB, optionally with all Re/Im entries."""
    lines = [S_CSV_HEADER_FULL if full else S_CSV_HEADER]
    for point in sweep:
        cells = [f"{point.frequency:.12e}",
                 f"{magnitude_db(point.s[1, 0]):.12e}",
                 f"{magnitude_db(point.s[2, 0]):.12e}"]
        if full:
            for i in range(3):
                for j in range(3):
                    cells.append(f"{point.s[i, j].real:.12e}")
                    cells.append(f"{point.s[i, j].imag:.12e}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"

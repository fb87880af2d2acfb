"""Three-port lumped network of the TSV pair and its impedance matrix.

Port numbering: 1 = signal via bottom, 2 = substrate, 3 = signal via top
(matrix indices 0, 1, 2).  The fixed topology is::

    port1 --[R/2 + L/2]-- mid --[R/2 + L/2]-- port3
                           |
                      [G_si || C_si]          lateral silicon path
                           |
                         port2                substrate node
                           |
                      [C_ox -- C_d]           MOS stack of the return via
                           |
                          gnd                 ground-via metal (reference)

i.e. the substrate node couples to the signal conductor through the lossy
lateral silicon path and returns to the reference through the oxide/depletion
stack.  With the element values of the default parameter set this arrangement
reproduces the expected coupling level (|S21| near -30 dB at 10 GHz) and the
diverging low-frequency Z12; tapping the substrate through the MOS stack
instead overstates the coupling by ~12 dB.

Two independent computation routes are provided: closed-form branch algebra
(`z_matrix_at`) and modified nodal analysis with unit current injection
(`z_matrix_mna`).  They must agree to 1e-9; `verify_dual_route` checks that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NetworkDegeneracyError, ValidationError
from .numerics import solve_extended
from .params import MaterialParams, TsvGeometry
from .rlgc import RlgcElements, c_ox, c_d, c_si_g_si, depletion_width, l_tsv, r_total

# Element values below this are rejected rather than stamped: they would make
# the nodal matrix numerically indistinguishable from singular.
MIN_ELEMENT = 1e-30

PORT_NODES = ("port1", "port2", "port3")
REFERENCE_NODE = "gnd"


@dataclass(frozen=True)
class FrequencyGrid:
    """Strictly increasing evaluation frequencies in Hz."""

    points: tuple
    spacing: str = "logarithmic"

    def __post_init__(self):
        if self.spacing not in ("linear", "logarithmic"):
            raise ValidationError(f"spacing must be 'linear' or 'logarithmic', got {self.spacing!r}")
        pts = tuple(float(f) for f in self.points)
        if not pts:
            raise ValidationError("frequency grid must be nonempty")
        if pts[0] <= 0:
            raise ValidationError("all grid frequencies must be positive")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValidationError("grid frequencies must be strictly increasing")
        object.__setattr__(self, "points", pts)

    @classmethod
    def logarithmic(cls, start: float = 1e6, stop: float = 100e9, n: int = 201) -> "FrequencyGrid":
        if n < 2 or start <= 0 or stop <= start:
            raise ValidationError("need n >= 2 and 0 < start < stop")
        return cls(points=tuple(np.logspace(math.log10(start), math.log10(stop), n)),
                   spacing="logarithmic")

    @classmethod
    def linear(cls, start: float, stop: float, n: int) -> "FrequencyGrid":
        if n < 2 or start <= 0 or stop <= start:
            raise ValidationError("need n >= 2 and 0 < start < stop")
        return cls(points=tuple(np.linspace(start, stop, n)), spacing="linear")

    @classmethod
    def default(cls) -> "FrequencyGrid":
        return cls.logarithmic()


@dataclass(frozen=True)
class ThreePortZ:
    """Open-circuit impedance matrix at one frequency (3x3 complex, ohms)."""

    frequency: float
    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        if z.shape != (3, 3):
            raise ValidationError(f"z must be 3x3, got shape {z.shape}")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class Branch:
    node_a: str
    node_b: str
    kind: str        # 'series_rl' | 'conductance' | 'capacitance' | 'series_capacitance'
    values: tuple


@dataclass(frozen=True)
class NetworkDescription:
    nodes: tuple
    reference: str
    branches: tuple


def assemble_topology(elements: RlgcElements) -> NetworkDescription:
    """Node/branch description of the fixed three-port network."""
    for name in ("r_half", "l_half", "c_ox", "c_d", "c_si", "g_si"):
        if getattr(elements, name) < MIN_ELEMENT:
            raise ValidationError(
                f"{name} = {getattr(elements, name)} below {MIN_ELEMENT}: "
                "degenerate element would produce a singular network"
            )
    return NetworkDescription(
        nodes=("port1", "mid", "port3", "port2"),
        reference=REFERENCE_NODE,
        branches=(
            Branch("port1", "mid", "series_rl", (elements.r_half, elements.l_half)),
            Branch("mid", "port3", "series_rl", (elements.r_half, elements.l_half)),
            Branch("mid", "port2", "conductance", (elements.g_si,)),
            Branch("mid", "port2", "capacitance", (elements.c_si,)),
            Branch("port2", REFERENCE_NODE, "series_capacitance", (elements.c_ox, elements.c_d)),
        ),
    )


def z_matrix_at(f: float, elements: RlgcElements) -> ThreePortZ:
    """Closed-form impedance matrix from branch algebra.

    With Z_seg = R/2 + sL/2, Z_stack = 1/sC_ox + 1/sC_d and
    Z_lat = 1/(G_si + sC_si), open-circuit injection gives

        Z11 = Z33 = Z_seg + Z_lat + Z_stack
        Z13       = Z_lat + Z_stack
        Z12 = Z22 = Z_stack         (all remaining entries)
    """
    if not (f > 0 and math.isfinite(f)):
        raise ValidationError(f"frequency must be finite and positive, got {f!r}")
    s = 2j * math.pi * f
    z_seg = elements.r_half + s * elements.l_half
    z_stack = 1.0 / (s * elements.c_ox) + 1.0 / (s * elements.c_d)
    z_lat = 1.0 / (elements.g_si + s * elements.c_si)
    z11 = z_seg + z_lat + z_stack
    z13 = z_lat + z_stack
    z12 = z_stack
    z = np.array([[z11, z12, z13],
                  [z12, z12, z12],
                  [z13, z12, z11]])
    if not np.isfinite(z).all():
        raise NetworkDegeneracyError("non-finite impedance entries", frequency=f)
    return ThreePortZ(frequency=f, z=z)


def _stamp(y: np.ndarray, index: dict, node_a: str, node_b: str, admittance: complex) -> None:
    a = index.get(node_a, -1)
    b = index.get(node_b, -1)
    if a >= 0:
        y[a, a] += admittance
    if b >= 0:
        y[b, b] += admittance
    if a >= 0 and b >= 0:
        y[a, b] -= admittance
        y[b, a] -= admittance


def nodal_admittance(f: float, description: NetworkDescription) -> tuple[np.ndarray, dict]:
    """Complex nodal admittance matrix with the reference node eliminated.

    Series RC stacks get their internal node stamped explicitly, so this route
    shares no algebra with the closed form beyond the element values.  The
    matrix is assembled and returned in clongdouble: the diagonal sums mix
    admittances ~12 orders of magnitude apart, and rounding the small ones
    into the large ones at double precision already costs ~1e-8 of the Z22
    entries at the bottom of the default grid.
    """
    s = np.clongdouble(2j * math.pi) * np.clongdouble(f)
    one = np.clongdouble(1.0)
    index = {}
    for node in description.nodes:
        index[node] = len(index)
    extra = 0
    rows = []
    for br in description.branches:
        if br.kind == "series_capacitance":
            internal = f"_x{extra}"
            extra += 1
            index[internal] = len(index)
            rows.append((br.node_a, internal, s * np.clongdouble(br.values[0])))
            rows.append((internal, br.node_b, s * np.clongdouble(br.values[1])))
        elif br.kind == "series_rl":
            r, l = br.values
            rows.append((br.node_a, br.node_b,
                         one / (np.clongdouble(r) + s * np.clongdouble(l))))
        elif br.kind == "conductance":
            rows.append((br.node_a, br.node_b, np.clongdouble(br.values[0])))
        elif br.kind == "capacitance":
            rows.append((br.node_a, br.node_b, s * np.clongdouble(br.values[0])))
        else:
            raise ValidationError(f"unknown branch kind {br.kind!r}")
    y = np.zeros((len(index), len(index)), dtype=np.clongdouble)
    for node_a, node_b, adm in rows:
        _stamp(y, index, node_a, node_b, adm)
    return y, index


def z_matrix_mna(f: float, elements: RlgcElements) -> ThreePortZ:
    """Impedance matrix by modified nodal analysis.

    Each column is obtained by injecting 1 A into one port and reading the
    open-circuit node voltages.
    """
    if not (f > 0 and math.isfinite(f)):
        raise ValidationError(f"frequency must be finite and positive, got {f!r}")
    description = assemble_topology(elements)
    y, index = nodal_admittance(f, description)
    ports = [index[p] for p in PORT_NODES]
    rhs = np.zeros((y.shape[0], 3), dtype=complex)
    for col, p in enumerate(ports):
        rhs[p, col] = 1.0
    try:
        v = solve_extended(y, rhs)
    except NetworkDegeneracyError as err:
        raise NetworkDegeneracyError(
            f"singular nodal matrix at {f:.6g} Hz", frequency=f) from err
    z = v[ports, :]
    if not np.isfinite(z).all():
        raise NetworkDegeneracyError(f"non-finite nodal solution at {f:.6g} Hz", frequency=f)
    return ThreePortZ(frequency=f, z=z)


def _elements_for_sweep(grid: FrequencyGrid, geom: TsvGeometry, mat: MaterialParams):
    """Per-point element sets with the static values computed once."""
    l_tot = l_tsv(geom, mat)
    cap_ox = c_ox(geom, mat)
    cap_d = c_d(geom, mat, depletion_width(mat))
    cap_si, cond_si = c_si_g_si(geom, mat)
    for f in grid.points:
        r_tot = r_total(f, geom, mat)
        yield RlgcElements(
            r_total=r_tot, r_half=r_tot / 2.0,
            l_total=l_tot, l_half=l_tot / 2.0,
            c_ox=cap_ox, c_d=cap_d, c_si=cap_si, g_si=cond_si,
            frequency=f,
        )


def z_sweep(grid: FrequencyGrid, geom: TsvGeometry, mat: MaterialParams) -> list[ThreePortZ]:
    """Closed-form impedance matrices over the grid, in grid order."""
    out = []
    for elements in _elements_for_sweep(grid, geom, mat):
        try:
            out.append(z_matrix_at(elements.frequency, elements))
        except (ValidationError, NetworkDegeneracyError) as err:
            raise NetworkDegeneracyError(
                f"sweep failed at {elements.frequency:.6g} Hz: {err}",
                frequency=elements.frequency) from err
    return out


def verify_dual_route(grid: FrequencyGrid, geom: TsvGeometry, mat: MaterialParams,
                      rtol: float = 1e-9) -> float:
    """Worst per-entry relative disagreement between the two Z routes.

    Raises :class:`NetworkDegeneracyError` if any grid point exceeds ``rtol``.
    """
    worst = 0.0
    for elements in _elements_for_sweep(grid, geom, mat):
        za = z_matrix_at(elements.frequency, elements).z
        zb = z_matrix_mna(elements.frequency, elements).z
        rel = float((np.abs(za - zb) / np.abs(za)).max())
        worst = max(worst, rel)
        if rel > rtol:
            raise NetworkDegeneracyError(
                f"branch-algebra and nodal routes disagree by {rel:.3e} "
                f"at {elements.frequency:.6g} Hz", frequency=elements.frequency)
    return worst


Z_CSV_HEADER = ("frequency_hz,re_z11,im_z11,re_z12,im_z12,re_z13,im_z13,"
                "re_z22,im_z22,re_z23,im_z23,re_z33,im_z33")

_UNIQUE_Z = ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))


def z_sweep_csv(sweep: list[ThreePortZ]) -> str:
    """CSV of the six unique entries of a reciprocal sweep (LF line endings)."""
    lines = [Z_CSV_HEADER]
    for point in sweep:
        cells = [f"{point.frequency:.12e}"]
        for i, j in _UNIQUE_Z:
            cells.append(f"{point.z[i, j].real:.12e}")
            cells.append(f"{point.z[i, j].imag:.12e}")
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"

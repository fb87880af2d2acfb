"""Geometry and material parameter sets for the signal-ground TSV pair.

All quantities are SI internally (meters, ohm-meters, kelvin, m^-3).  Unit
conversion belongs at I/O boundaries, never in formula code.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .constants import K_B, Q_E
from .errors import ConfigError, ValidationError


@dataclass(frozen=True)
class TsvGeometry:
    """Physical dimensions of the via pair."""

    height: float            # m
    radius: float            # m
    pitch: float             # m, center to center
    liner_thickness: float   # m, dielectric liner

    def __post_init__(self):
        for name in ("height", "radius", "pitch", "liner_thickness"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValidationError(f"{name} must be strictly positive, got {value!r}")
        if self.liner_thickness >= self.radius:
            raise ValidationError(
                f"liner_thickness {self.liner_thickness} must be below radius "
                f"{self.radius} (thin-liner radial capacitor model)"
            )
        if self.pitch <= 2.0 * (self.radius + self.liner_thickness):
            raise ValidationError(
                f"pitch {self.pitch} must exceed 2*(radius + liner_thickness) "
                f"= {2.0 * (self.radius + self.liner_thickness)}: the vias overlap"
            )


@dataclass(frozen=True)
class MaterialParams:
    """Conductor, liner and substrate properties plus temperature."""

    rho_cu: float       # conductor resistivity, ohm*m
    mu_r: float         # conductor relative permeability
    eps_ox: float       # liner relative permittivity
    eps_si: float       # silicon relative permittivity
    n_a: float          # acceptor doping, m^-3
    n_i: float          # intrinsic carrier density, m^-3
    sigma_si: float     # substrate conductivity, S/m
    temperature: float  # K

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValidationError(f"{f.name} must be strictly positive, got {value!r}")
        if self.n_a <= self.n_i:
            raise ValidationError(
                f"n_a ({self.n_a}) must exceed n_i ({self.n_i}); otherwise the "
                "depletion width is undefined"
            )

    @property
    def thermal_voltage(self) -> float:
        """kT/q in volts."""
        return K_B * self.temperature / Q_E


def sigma_from_mobility(n_a: float, mu_p: float = 0.045) -> float:
    """Substrate conductivity q*N_A*mu_p from hole mobility (default 450 cm^2/V/s).

    Consistency-check alternative to quoting a bulk resistivity directly.
    """
    if n_a <= 0 or mu_p <= 0:
        raise ValidationError("n_a and mu_p must be strictly positive")
    return Q_E * n_a * mu_p


# Default parameter set: typical 3D-IC process values for a 50 um copper via
# pair with a 0.5 um oxide liner in 0.12 ohm*m p-type silicon.
DEFAULT_GEOMETRY = TsvGeometry(
    height=50e-6,
    radius=2.5e-6,
    pitch=40e-6,
    liner_thickness=0.5e-6,
)

DEFAULT_MATERIALS = MaterialParams(
    rho_cu=1.68e-8,
    mu_r=1.0,
    eps_ox=3.9,
    eps_si=11.9,
    n_a=1.2e21,          # 1.2e15 cm^-3
    n_i=1.45e16,         # 1.45e10 cm^-3 at 300 K
    sigma_si=1.0 / 0.12,
    temperature=300.0,
)

GEOMETRY_KEYS = ("height", "radius", "pitch", "liner_thickness")
MATERIAL_KEYS = ("rho_cu", "mu_r", "eps_ox", "eps_si", "n_a", "n_i", "sigma_si", "temperature")


def parse_config_text(text: str, known_keys=None) -> dict:
    """Parse ``name = value`` lines into a dict.

    Blank lines and ``#`` comments are ignored.  Values are floats except for
    a handful of word-valued keys (e.g. ``spacing``).  Unknown keys raise
    :class:`ConfigError` when ``known_keys`` is given.
    """
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'name = value', got {raw!r}")
        name, _, value = line.partition("=")
        name = name.strip()
        value = value.strip()
        if not name or not value:
            raise ConfigError(f"line {lineno}: expected 'name = value', got {raw!r}")
        if known_keys is not None and name not in known_keys:
            raise ConfigError(f"line {lineno}: unknown key {name!r}")
        if name in out:
            raise ConfigError(f"line {lineno}: duplicate key {name!r}")
        try:
            out[name] = float(value)
        except ValueError:
            out[name] = value
    return out


def load_config(path, known_keys=None) -> dict:
    with open(path, "r", encoding="ascii") as fh:
        return parse_config_text(fh.read(), known_keys=known_keys)


def geometry_from_mapping(values: dict, base: TsvGeometry = DEFAULT_GEOMETRY) -> TsvGeometry:
    overrides = {k: float(values[k]) for k in GEOMETRY_KEYS if k in values}
    return replace(base, **overrides) if overrides else base


def materials_from_mapping(values: dict, base: MaterialParams = DEFAULT_MATERIALS) -> MaterialParams:
    overrides = {k: float(values[k]) for k in MATERIAL_KEYS if k in values}
    return replace(base, **overrides) if overrides else base

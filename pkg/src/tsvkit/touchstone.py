"""Touchstone v1 writer and reader for three-port S-parameter data.

Emitted dialect: LF line endings, ASCII, option line ``# Hz S <FMT> R <z0>``,
one matrix row per text line with the frequency leading the first row of each
record (the v1 convention for n >= 3 ports), all numeric fields with 9
significant digits.  The writer is byte-deterministic: identical sweeps give
identical files.  The exact grammar lives in docs/formats.md.

The reader tolerates arbitrary whitespace, blank lines and ``!`` comments,
accepts RI/MA/DB value formats and Hz/kHz/MHz/GHz units, and rejects (never
repairs) malformed option lines, wrong per-line value counts and
non-monotonic frequencies, each with the offending line number.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import TouchstoneError, ValidationError
from .sparams import ThreePortS

FREQUENCY_UNITS = {"HZ": 1.0, "KHZ": 1e3, "MHZ": 1e6, "GHZ": 1e9}
FORMATS = ("RI", "MA", "DB")
NPORTS = 3


@dataclass(frozen=True)
class TouchstoneDocument:
    """Parsed contents of a three-port Touchstone v1 file."""

    frequency_unit: str                 # 'Hz' | 'kHz' | 'MHz' | 'GHz' as written
    parameter_type: str                 # always 'S'
    value_format: str                   # 'RI' | 'MA' | 'DB'
    reference_resistance: float         # ohm
    records: tuple                      # ((frequency_hz, 3x3 complex ndarray), ...)
    comments: tuple = field(default=())

    def __post_init__(self):
        if not self.records:
            raise ValidationError("a Touchstone document needs at least one record")
        freqs = [rec[0] for rec in self.records]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValidationError("record frequencies must be strictly increasing")
        for f, m in self.records:
            if not (np.isfinite(m).all() and math.isfinite(f)):
                raise ValidationError("matrix entries and frequencies must be finite")

    def as_sparams(self) -> list[ThreePortS]:
        return [ThreePortS(frequency=f, s=m, z0=self.reference_resistance)
                for f, m in self.records]


def _format_pair(value: complex, fmt: str) -> tuple[float, float]:
    if fmt == "RI":
        return value.real, value.imag
    mag = abs(value)
    ang = math.degrees(math.atan2(value.imag, value.real))
    if fmt == "MA":
        return mag, ang
    # DB: 20*log10 magnitude; an exact zero has no finite dB image, refuse it
    if mag == 0.0:
        raise ValidationError("cannot represent a zero entry in DB format")
    return 20.0 * math.log10(mag), ang


def _num(x: float) -> str:
    return f"{x:.8e}"  # 9 significant digits


def write_s3p(sweep: list[ThreePortS], destination, fmt: str = "RI",
              comments=()) -> None:
    """Write a sweep as Touchstone v1 text to a path or text stream.

    ``comments`` become leading ``!`` lines (generator metadata, parameter
    set).  All points must share one reference impedance.
    """
    if not sweep:
        raise ValidationError("cannot write an empty sweep")
    fmt = fmt.upper()
    if fmt not in FORMATS:
        raise ValidationError(f"format must be one of {FORMATS}, got {fmt!r}")
    z0 = sweep[0].z0
    for point in sweep:
        if point.z0 != z0:
            raise ValidationError(
                f"non-uniform reference impedance in sweep: {point.z0} vs {z0}")
    freqs = [p.frequency for p in sweep]
    if any(b <= a for a, b in zip(freqs, freqs[1:])):
        raise ValidationError("sweep frequencies must be strictly increasing")

    lines = [f"! {c}" for c in comments]
    lines.append(f"# Hz S {fmt} R {z0:g}")
    for point in sweep:
        for row in range(NPORTS):
            cells = [_num(point.frequency)] if row == 0 else []
            for col in range(NPORTS):
                a, b = _format_pair(point.s[row, col], fmt)
                cells.append(_num(a))
                cells.append(_num(b))
            lines.append(" ".join(cells))
    text = "\n".join(lines) + "\n"

    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)


def _pair_to_complex(a: float, b: float, fmt: str) -> complex:
    if fmt == "RI":
        return complex(a, b)
    if fmt == "MA":
        mag, ang = a, math.radians(b)
    else:  # DB
        mag, ang = 10.0 ** (a / 20.0), math.radians(b)
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def _parse_option_line(line: str, lineno: int):
    tokens = line[1:].split()
    unit = "GHz"
    fmt = "MA"
    ptype = "S"
    resistance = 50.0
    i = 0
    seen_r = False
    while i < len(tokens):
        tok = tokens[i].upper()
        if tok in FREQUENCY_UNITS:
            unit = tokens[i]
        elif tok in ("S", "Y", "Z", "G", "H"):
            ptype = tok
        elif tok in FORMATS:
            fmt = tok
        elif tok == "R":
            if i + 1 >= len(tokens):
                raise TouchstoneError("option line: 'R' without a resistance value", lineno)
            try:
                resistance = float(tokens[i + 1])
            except ValueError:
                raise TouchstoneError(
                    f"option line: bad resistance {tokens[i + 1]!r}", lineno) from None
            seen_r = True
            i += 1
        else:
            raise TouchstoneError(f"option line: unrecognized token {tokens[i]!r}", lineno)
        i += 1
    if ptype != "S":
        raise TouchstoneError(f"only S-parameter files are supported, got type {ptype!r}", lineno)
    if resistance <= 0:
        raise TouchstoneError(f"reference resistance must be positive, got {resistance}", lineno)
    del seen_r
    return unit, fmt, resistance


def read_s3p(source) -> TouchstoneDocument:
    """Parse three-port Touchstone v1 content from a path, text stream or string."""
    if hasattr(source, "read"):
        text = source.read()
    elif isinstance(source, str) and "\n" in source:
        text = source
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="ascii") as fh:
            text = fh.read()
    else:
        raise TouchstoneError(f"unsupported source {source!r}")

    comments = []
    option = None
    data_lines = []  # (lineno, [floats])
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line, _, trailing = raw.partition("!")
        if trailing and option is None and not line.strip():
            comments.append(trailing.strip())
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if option is not None:
                raise TouchstoneError("second option line", lineno)
            option = _parse_option_line(line, lineno)
            continue
        if option is None:
            raise TouchstoneError("data before the option line", lineno)
        values = []
        for tok in line.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise TouchstoneError(f"not a number: {tok!r}", lineno) from None
        data_lines.append((lineno, values))

    if option is None:
        raise TouchstoneError("missing option line")
    unit, fmt, resistance = option
    if not data_lines:
        raise TouchstoneError("no data records")

    scale = FREQUENCY_UNITS[unit.upper()]
    per_row = 2 * NPORTS
    records = []
    i = 0
    last_f = None
    while i < len(data_lines):
        lineno, values = data_lines[i]
        if len(values) != per_row + 1:
            raise TouchstoneError(
                f"expected frequency plus {per_row} values on the first line of a "
                f"record, got {len(values)}", lineno)
        f = values[0] * scale
        if last_f is not None and f <= last_f:
            raise TouchstoneError(
                f"non-monotonic frequency {values[0]} {unit}", lineno)
        last_f = f
        rows = [values[1:]]
        for r in range(1, NPORTS):
            if i + r >= len(data_lines):
                raise TouchstoneError(
                    f"record truncated: missing matrix row {r + 1}", lineno)
            row_lineno, row_values = data_lines[i + r]
            if len(row_values) != per_row:
                raise TouchstoneError(
                    f"expected {per_row} values on matrix row {r + 1}, "
                    f"got {len(row_values)}", row_lineno)
            rows.append(row_values)
        matrix = np.empty((NPORTS, NPORTS), dtype=complex)
        for r, row_values in enumerate(rows):
            for c in range(NPORTS):
                matrix[r, c] = _pair_to_complex(row_values[2 * c], row_values[2 * c + 1], fmt)
        records.append((f, matrix))
        i += NPORTS

    return TouchstoneDocument(
        frequency_unit=unit,
        parameter_type="S",
        value_format=fmt,
        reference_resistance=resistance,
        records=tuple(records),
        comments=tuple(comments),
    )

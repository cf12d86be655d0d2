"""Parsing of unit-suffixed configuration quantities.

Physical quantities are written as strings with an explicit suffix, e.g.
``"4dB"``, ``"53.7deg"``, ``"7.2284GHz"``, ``"1us"``.  Parsing returns SI
values (gains stay in dB, angles become radians, frequencies Hz, times s).
"""

from __future__ import annotations

import math
import re

_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_RE = re.compile(rf"^\s*({_NUM})\s*([A-Za-zµ]*)\s*$")

SCALES = {
    "gain": {"dB": 1.0},
    "angle": {"deg": math.pi / 180.0, "rad": 1.0},
    "frequency": {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9},
}

# Canonical suffix used when a parsed value is written back out.
CANONICAL = {"gain": "dB", "angle": "deg", "frequency": "Hz", "time": "s"}


class UnitError(ValueError):
    pass


def parse_quantity(value, dimension: str) -> float:
    """Parse ``value`` carrying a suffix valid for ``dimension``."""
    if isinstance(value, bool) or not isinstance(value, str):
        raise UnitError(f"expected a {dimension} string with a unit suffix "
                        f"({', '.join(SCALES[dimension])}), got {value!r}")
    m = _RE.match(value)
    if not m:
        raise UnitError(f"cannot parse {value!r} as a {dimension}")
    number, suffix = m.groups()
    scales = SCALES[dimension]
    if suffix not in scales:
        raise UnitError(f"{value!r}: unit suffix must be one of {', '.join(scales)}")
    return float(number) * scales[suffix]


def parse_number(value, integer: bool = False, minimum: float | None = None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise UnitError(f"expected a number, got {value!r}")
    if isinstance(value, str):
        if not re.fullmatch(_NUM, value.strip()):
            raise UnitError(f"expected a plain number without units, got {value!r}")
        value = float(value)
    if integer:
        if float(value) != int(float(value)):
            raise UnitError(f"expected an integer, got {value!r}")
        value = int(float(value))
    if minimum is not None and value < minimum:
        raise UnitError(f"must be >= {minimum}, got {value!r}")
    return value

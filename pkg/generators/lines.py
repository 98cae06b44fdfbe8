from fractions import Fraction
from typing import List

from divides.divide import Divide
from divides.polylines import Polyline
from generators.family import FamilySpec
from lib.errors import DivideKitError, Failure


def tangent_lines(m: int) -> List[Polyline]:
    """Tangents y = 2ax - a^2 to the parabola at a = 1..m, cut off at x = 0 and x = m + 1."""
    if m < 2:
        raise DivideKitError(Failure.BAD_PARAMS, f"lines needs m >= 2, got {m}")
    width = Fraction(m + 1)
    low, high = Fraction(-(m * m) - 1), Fraction(m * m + 2 * m + 1)
    lines = []
    for a in range(1, m + 1):
        ends = [(Fraction(0), Fraction(-a * a)), (width, 2 * a * width - a * a)]
        lines.append(Polyline(False, tuple((x / width, (y - low) / (high - low)) for x, y in ends)))
    return lines


def generic_lines(m: int) -> Divide:
    return Divide.from_polylines(tangent_lines(m), name=f"lines({m})")


LINES_FAMILY = FamilySpec("lines", ("m",), (2,), generic_lines, "divide")

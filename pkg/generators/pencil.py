import logging
from collections import namedtuple
from fractions import Fraction
from itertools import combinations
from math import ceil
from typing import List, Optional, Tuple

import numpy as np

from divides.divide import Divide
from divides.polylines import Polyline
from generators.family import FamilySpec
from lib.errors import DivideKitError, Failure

Point = Tuple[Fraction, Fraction]
Line = namedtuple("Line", ["point", "direction"])

DENOMINATOR = 10_000


def _unit(angle: float) -> Point:
    """Rational point of the unit circle close to the given angle."""
    t = Fraction(float(np.tan(angle / 2))).limit_denominator(DENOMINATOR)
    return (1 - t * t) / (1 + t * t), 2 * t / (1 + t * t)


def _meet(a: Line, b: Line) -> Optional[Point]:
    (px, py), (dx, dy) = a
    (qx, qy), (ex, ey) = b
    denom = dx * ey - dy * ex
    if denom == 0:
        return None
    lam = ((qx - px) * ey - (qy - py) * ex) / denom
    return px + lam * dx, py + lam * dy


def _through(line: Line, p: Point) -> bool:
    (px, py), (dx, dy) = line
    return (p[0] - px) * dy - (p[1] - py) * dx == 0


def _angles(m: int) -> List[float]:
    return [np.pi * (i - 1) / m for i in range(1, m + 1)]


def pentagram(m: int, radius: Fraction = Fraction(1)) -> List[Line]:
    """Five tangents to a circle whose directions are the first five pencil angles."""
    theta = _angles(m)
    touch = [theta[0] - np.pi / 2, theta[2] - np.pi / 2, theta[4] - np.pi / 2, theta[1] + np.pi / 2, theta[3] + np.pi / 2]
    lines = []
    for alpha in touch:
        nx, ny = _unit(alpha)
        lines.append(Line((radius * nx, radius * ny), (-ny, nx)))
    return lines


def _offsets_generic(lines: List[Line], fixed: int) -> bool:
    for i, j, k in combinations(range(len(lines)), 3):
        if k < fixed:
            continue
        p = _meet(lines[i], lines[j])
        if p is not None and _through(lines[k], p):
            return False
    return True


def pencil_lines(m: int) -> List[Line]:
    """
    The pentagram plus lines 6..m, all passing close to one far point on the left so that
    their mutual crossings stay away from the star.
    """
    if m < 5:
        raise DivideKitError(Failure.BAD_PARAMS, f"pencil needs m >= 5, got {m}")
    lines = pentagram(m)
    if m == 5:
        return lines
    reach = max(max(abs(float(x)), abs(float(y))) for a, b in combinations(lines, 2) for x, y in [_meet(a, b)])
    far = Fraction(ceil((reach + 1) * np.sqrt(2) / np.sin(np.pi / m)) + m)
    theta = _angles(m)
    directions = [_unit(theta[j - 1]) for j in range(6, m + 1)]
    offsets = [Fraction(j - 5, 16) for j in range(6, m + 1)]
    for attempt in range(100):
        candidate = lines + [Line((-far, eps), d) for eps, d in zip(offsets, directions)]
        if any(_meet(a, b) is None for a, b in combinations(candidate, 2)):
            raise DivideKitError(Failure.BAD_PARAMS, f"pencil({m}) has parallel lines")
        if _offsets_generic(candidate, 5):
            if attempt:
                logging.debug(f"pencil({m}) needed {attempt} offset nudge(s)")
            return candidate
        offsets = [eps + Fraction(k + 1, 997 * (attempt + 1)) for k, eps in enumerate(offsets)]
    raise DivideKitError(Failure.BAD_PARAMS, f"pencil({m}) stays degenerate")


def _clip(line: Line, lo: Point, hi: Point) -> Tuple[Point, Point]:
    start, stop = None, None
    for axis in (0, 1):
        d = line.direction[axis]
        if d == 0:
            continue
        a = (lo[axis] - line.point[axis]) / d
        b = (hi[axis] - line.point[axis]) / d
        a, b = min(a, b), max(a, b)
        start = a if start is None else max(start, a)
        stop = b if stop is None else min(stop, b)

    def at(lam: Fraction) -> Point:
        return line.point[0] + lam * line.direction[0], line.point[1] + lam * line.direction[1]

    return at(start), at(stop)


def pencil_polylines(m: int) -> List[Polyline]:
    lines = pencil_lines(m)
    meets = [_meet(a, b) for a, b in combinations(lines, 2)]
    lo = (min(p[0] for p in meets) - 1, min(p[1] for p in meets) - 1)
    hi = (max(p[0] for p in meets) + 1, max(p[1] for p in meets) + 1)
    scale = (hi[0] - lo[0], hi[1] - lo[1])
    out = []
    for line in lines:
        ends = _clip(line, lo, hi)
        out.append(Polyline(False, tuple(((x - lo[0]) / scale[0], (y - lo[1]) / scale[1]) for x, y in ends)))
    return out


def deformed_pencil(m: int) -> Divide:
    return Divide.from_polylines(pencil_polylines(m), name=f"pencil({m})")


PENCIL_FAMILY = FamilySpec("pencil", ("m",), (5,), deformed_pencil, "divide")

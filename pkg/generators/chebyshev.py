import logging
from fractions import Fraction
from math import gcd
from typing import List, Set, Tuple

from divides.divide import Divide
from divides.polylines import Polyline
from generators.family import FamilySpec
from lib.errors import DivideKitError, Failure

Point = Tuple[Fraction, Fraction]
Direction = Tuple[int, int]


def _is_corner(p: Point) -> bool:
    return p[0] in (0, 1) and p[1] in (0, 1)


def _bounce(p: Point, d: Direction) -> Tuple[Point, Direction]:
    """Run from `p` along `d` to the next side of the unit square and reflect there."""
    reach = []
    for axis in (0, 1):
        target = 1 if d[axis] > 0 else 0
        reach.append(Fraction(target - p[axis], d[axis]))
    step = min(reach)
    q = (p[0] + step * d[0], p[1] + step * d[1])
    flipped = (-d[0] if reach[0] == step else d[0], -d[1] if reach[1] == step else d[1])
    return q, flipped


def _segment(a: Point, b: Point) -> frozenset:
    return frozenset((a, b))


def _trace(start: Point, d: Direction, used: Set[frozenset]) -> Tuple[List[Point], bool]:
    """Apexes of the billiard path from `start` until it reaches a corner or closes up."""
    points = [start]
    p = start
    while True:
        q, d = _bounce(p, d)
        used.add(_segment(p, q))
        if _is_corner(q) or q == start:
            return points + ([q] if q != start else []), q != start
        points.append(q)
        p = q


def _side_points(p: int, q: int) -> List[Point]:
    """Non-corner points of the sides where the zero set touches: ps + qt is even there."""
    out = []
    for k in range(1, p):
        for t in (0, 1):
            if (k + q * t) % 2 == 0:
                out.append((Fraction(k, p), Fraction(t)))
    for k in range(1, q):
        for s in (0, 1):
            if (p * s + k) % 2 == 0:
                out.append((Fraction(s), Fraction(k, q)))
    return sorted(out)


def _frame(points: List[Point]) -> Tuple[Tuple[Fraction, Fraction], ...]:
    return tuple(((x + 1) / 3, (y + 1) / 3) for x, y in points)


def billiard_polylines(p: int, q: int) -> List[Polyline]:
    """
    Zero set of T_p(x) - T_q(y) in billiard coordinates.

    In the parameter square the curve is the union of the lines ps +- qt = 2k; it reflects off
    the sides and ends only at corners. The square sits in the middle third of the disk and
    each end runs diagonally out to a corner of the disk.
    """
    if p < 2 or q < 2:
        raise DivideKitError(Failure.BAD_PARAMS, f"chebyshev needs p, q >= 2, got ({p}, {q})")
    used: Set[frozenset] = set()
    lines = []
    seen_ends = set()
    for corner in [(0, 0), (1, 0), (0, 1), (1, 1)]:
        if (p * corner[0] + q * corner[1]) % 2 or corner in seen_ends:
            continue
        start = (Fraction(corner[0]), Fraction(corner[1]))
        d = (q if corner[0] == 0 else -q, p if corner[1] == 0 else -p)
        points, _ = _trace(start, d, used)
        end = points[-1]
        seen_ends.update({corner, (int(end[0]), int(end[1]))})
        outward = [(3 * start[0] - 1, 3 * start[1] - 1)] + points + [(3 * end[0] - 1, 3 * end[1] - 1)]
        lines.append(Polyline(False, _frame(outward)))
    for apex in _side_points(p, q):
        for d in _directions_at(apex, p, q):
            nxt, _ = _bounce(apex, d)
            if _segment(apex, nxt) in used:
                continue
            points, _ = _trace(apex, d, used)
            lines.append(Polyline(True, _frame(points)))
    circles = sum(1 for pl in lines if pl.closed)
    if circles:
        logging.warning(f"chebyshev({p},{q}) carries {circles} immersed circle(s)")
    return lines


def _directions_at(apex: Point, p: int, q: int) -> List[Direction]:
    s, t = apex
    if t == 0:
        return [(q, p), (-q, p)]
    if t == 1:
        return [(q, -p), (-q, -p)]
    if s == 0:
        return [(q, p), (q, -p)]
    return [(-q, p), (-q, -p)]


def chebyshev_divide(p: int, q: int) -> Divide:
    d = Divide.from_polylines(billiard_polylines(p, q), name=f"chebyshev({p},{q})")
    if gcd(p, q) == 1 and len(d.crossings) != (p - 1) * (q - 1) // 2:
        raise DivideKitError(Failure.MODEL_MISMATCH, f"chebyshev({p},{q}) has {len(d.crossings)} crossings")
    return d


CHEBYSHEV_FAMILY = FamilySpec("chebyshev", ("p", "q"), (2, 2), chebyshev_divide, "divide")

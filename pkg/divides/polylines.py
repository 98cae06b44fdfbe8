import logging
from collections import namedtuple
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from lib.errors import DivideKitError, Failure

Point = Tuple[Fraction, Fraction]
Polyline = namedtuple("Polyline", ["closed", "points"])
Segment = namedtuple("Segment", ["line", "index", "start", "end"])

# position of a crossing along a segment and the slots leaving it forwards and backwards
Event = namedtuple("Event", ["t", "forward", "backward"])


def polyline(points: Sequence[Tuple], closed: bool = False) -> Polyline:
    return Polyline(closed, tuple((Fraction(x), Fraction(y)) for x, y in points))


def _sub(a: Point, b: Point) -> Point:
    return a[0] - b[0], a[1] - b[1]


def _cross(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _dot(a: Point, b: Point) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def on_boundary(p: Point) -> bool:
    x, y = p
    inside_x = 0 <= x <= 1
    inside_y = 0 <= y <= 1
    return (inside_x and y in (0, 1)) or (inside_y and x in (0, 1))


def strictly_inside(p: Point) -> bool:
    return 0 < p[0] < 1 and 0 < p[1] < 1


def perimeter_position(p: Point) -> Fraction:
    """Counterclockwise position along the unit square starting at the origin, in [0, 4)."""
    x, y = p
    if y == 0:
        return x
    if x == 1:
        return 1 + y
    if y == 1:
        return 2 + (1 - x)
    return 3 + (1 - y)


def _segments(lines: List[Polyline]) -> List[Segment]:
    out = []
    for i, pl in enumerate(lines):
        n = len(pl.points)
        for j in range(n if pl.closed else n - 1):
            out.append(Segment(i, j, pl.points[j], pl.points[(j + 1) % n]))
    return out


def _check_shape(lines: List[Polyline]) -> None:
    ends = []
    for i, pl in enumerate(lines):
        pts = pl.points
        if len(pts) < (3 if pl.closed else 2):
            raise DivideKitError(Failure.PARSE_ERROR, f"polyline {i} has too few points")
        inner = pts if pl.closed else pts[1:-1]
        for p in inner:
            if not strictly_inside(p):
                raise DivideKitError(Failure.NON_GENERIC_INTERSECTION, f"polyline {i} touches the boundary at {p}")
        if pl.closed:
            continue
        for end, nxt in ((pts[0], pts[1]), (pts[-1], pts[-2])):
            if not on_boundary(end):
                raise DivideKitError(Failure.ENDPOINT_IN_INTERIOR, f"polyline {i} ends at {end}")
            mid = ((end[0] + nxt[0]) / 2, (end[1] + nxt[1]) / 2)
            if not strictly_inside(mid):
                raise DivideKitError(Failure.NON_GENERIC_INTERSECTION, f"polyline {i} runs along the boundary")
            ends.append(end)
    if len(set(ends)) != len(ends):
        raise DivideKitError(Failure.NON_GENERIC_INTERSECTION, "two strands share a boundary point")


def _adjacent(a: Segment, b: Segment, lines: List[Polyline]) -> bool:
    if a.line != b.line:
        return False
    pl = lines[a.line]
    n = len(pl.points) if pl.closed else len(pl.points) - 1
    if abs(a.index - b.index) == 1:
        return True
    return pl.closed and {a.index, b.index} == {0, n - 1}


def _intersect(a: Segment, b: Segment) -> Optional[Tuple[Fraction, Fraction]]:
    """Parameters (t, u) of a transverse interior crossing, None when the segments miss."""
    r = _sub(a.end, a.start)
    s = _sub(b.end, b.start)
    qp = _sub(b.start, a.start)
    denom = _cross(r, s)
    if denom == 0:
        if _cross(qp, r) != 0:
            return None
        # collinear: any shared point is a tangency
        t0 = _dot(qp, r) / _dot(r, r)
        t1 = _dot(_sub(b.end, a.start), r) / _dot(r, r)
        if max(t0, t1) < 0 or min(t0, t1) > 1:
            return None
        raise DivideKitError(Failure.NON_GENERIC_INTERSECTION, f"collinear overlap near {a.start}")
    t = _cross(qp, s) / denom
    u = _cross(qp, r) / denom
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return None
    if t in (0, 1) or u in (0, 1):
        raise DivideKitError(Failure.NON_GENERIC_INTERSECTION, "strands meet at a polyline vertex")
    return t, u


def divide_from_polylines(lines: Sequence[Polyline], name: Optional[str] = None):
    from divides.divide import Divide

    lines = [Polyline(pl.closed, tuple((Fraction(x), Fraction(y)) for x, y in pl.points)) for pl in lines]
    _check_shape(lines)
    segments = _segments(lines)

    found: Dict[Point, Tuple[int, int, Fraction, Fraction]] = {}
    for i, a in enumerate(segments):
        for j in range(i + 1, len(segments)):
            b = segments[j]
            if _adjacent(a, b, lines):
                ra, rb = _sub(a.end, a.start), _sub(b.end, b.start)
                if _cross(ra, rb) == 0 and _dot(ra, rb) < 0:
                    raise DivideKitError(Failure.NON_GENERIC_INTERSECTION, f"polyline {a.line} folds back on itself")
                continue
            hit = _intersect(a, b)
            if hit is None:
                continue
            t, u = hit
            point = (a.start[0] + t * (a.end[0] - a.start[0]), a.start[1] + t * (a.end[1] - a.start[1]))
            if point in found:
                raise DivideKitError(Failure.NON_GENERIC_INTERSECTION, f"triple point at {point}")
            found[point] = (i, j, t, u)

    events: Dict[int, List[Event]] = {k: [] for k in range(len(segments))}
    crossings = {}
    for x, point in enumerate(sorted(found)):
        i, j, t, u = found[point]
        base = 4 * x
        crossings[x] = (base, base + 1, base + 2, base + 3)
        ra, rb = _sub(segments[i].end, segments[i].start), _sub(segments[j].end, segments[j].start)
        events[i].append(Event(t, base, base + 2))
        if _cross(ra, rb) > 0:
            events[j].append(Event(u, base + 1, base + 3))
        else:
            events[j].append(Event(u, base + 3, base + 1))

    n_slots = 4 * len(crossings)
    endpoints, ends_at = {}, []
    twin: Dict[int, int] = {}

    def join(out_forward: int, out_backward: int) -> None:
        twin[out_forward] = out_backward
        twin[out_backward] = out_forward

    offset = 0
    for li, pl in enumerate(lines):
        along = []
        for k in range(len(pl.points) if pl.closed else len(pl.points) - 1):
            along.extend(sorted(events[offset + k], key=lambda e: e.t))
        offset += len(pl.points) if pl.closed else len(pl.points) - 1
        if pl.closed:
            if not along:
                raise DivideKitError(Failure.MALFORMED_DIVIDE, f"closed polyline {li} meets nothing")
            for a, b in zip(along, along[1:] + along[:1]):
                join(a.forward, b.backward)
            continue
        first, last = len(crossings) + len(endpoints), len(crossings) + len(endpoints) + 1
        h_first, h_last = n_slots + len(endpoints), n_slots + len(endpoints) + 1
        endpoints[first] = h_first
        endpoints[last] = h_last
        ends_at.extend([(pl.points[0], first), (pl.points[-1], last)])
        chain = [h_first]
        for e in along:
            chain.extend([e.backward, e.forward])
        chain.append(h_last)
        for a, b in zip(chain[0::2], chain[1::2]):
            join(a, b)

    boundary = tuple(e for _, e in sorted(ends_at, key=lambda pe: perimeter_position(pe[0])))
    divide = Divide(crossings=crossings, endpoints=endpoints, twin=twin, boundary=boundary)
    logging.info(f"Ingested {name or 'divide'}: {len(crossings)} crossings, {len(lines)} polylines")
    return divide

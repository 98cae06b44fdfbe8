import logging
import re
from collections import namedtuple
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from divides.fiber import FiberComplex
from lib.errors import DivideKitError, Failure

Walk = Tuple[int, ...]

# turning data of a nowhere-vanishing field: where each polygon's slot order is cut, and
# how many extra turns the field makes along the strip leaving through a given end
ReferenceField = namedtuple("ReferenceField", ["name", "cut", "strip_turns"])

Base = namedtuple("Base", ["vertex"])
Loop = namedtuple("Loop", ["strip"])
Twist = namedtuple("Twist", ["along", "power", "target"])
CurveExpr = Union[Base, Loop, Twist]


def _cut_at_first(fiber: FiberComplex, h: int) -> int:
    return fiber.slot(h)


def _cut_at_second(fiber: FiberComplex, h: int) -> int:
    return (fiber.slot(h) + 1) % fiber.degree(fiber.polygon_of[h])


def _turns_on_lower(fiber: FiberComplex, h: int) -> int:
    return 0 if h < fiber.twin[h] else 1


def _turns_on_upper(fiber: FiberComplex, h: int) -> int:
    return 1 if h < fiber.twin[h] else 0


LOWER_CUT = ReferenceField("lower-cut", _cut_at_first, _turns_on_lower)
SHIFTED_CUT = ReferenceField("shifted-cut", _cut_at_second, _turns_on_upper)
REFERENCE_FIELDS = {f.name: f for f in (LOWER_CUT, SHIFTED_CUT)}


def check_walk(fiber: FiberComplex, walk: Sequence[int]) -> None:
    """
    Raise NotEmbedded unless `walk` is a closed walk of strip ends that can be drawn without
    self-intersections: it closes up, never runs the same strip twice in the same direction, and
    no two of its passages through a polygon cross.
    """
    if not walk:
        raise DivideKitError(Failure.NOT_EMBEDDED, "empty curve")
    if len(set(walk)) != len(walk):
        raise DivideKitError(Failure.NOT_EMBEDDED, "curve runs along a strip twice")
    passages: Dict[int, List[Tuple[int, int]]] = {}
    for i, g in enumerate(walk):
        if g not in fiber.twin:
            raise DivideKitError(Failure.NOT_EMBEDDED, f"{g} is not a strip end")
        arrive, leave = fiber.twin[g], walk[(i + 1) % len(walk)]
        polygon = fiber.polygon_of[arrive]
        if fiber.polygon_of[leave] != polygon:
            raise DivideKitError(Failure.NOT_EMBEDDED, f"curve jumps from polygon {polygon} at step {i}")
        passages.setdefault(polygon, []).append((fiber.slot(arrive), fiber.slot(leave)))
    for polygon, chords in passages.items():
        for i, (a, b) in enumerate(chords):
            for c, d in chords[i + 1 :]:
                if len({a, b, c, d}) == 4 and _interleave(a, b, c, d):
                    raise DivideKitError(Failure.NOT_EMBEDDED, f"curve crosses itself in polygon {polygon}")


def _interleave(a: int, b: int, c: int, d: int) -> bool:
    lo, hi = sorted((a, b))
    return (lo < c < hi) != (lo < d < hi)


def strips(fiber: FiberComplex) -> List[int]:
    """One end of every strip joining two different polygons, in edge order."""
    return [h for h, t in fiber.graph.embedding.edges if fiber.polygon_of[h] != fiber.polygon_of[t]]


def strip_loop(fiber: FiberComplex, k: int) -> Walk:
    """
    Boundary of the disk made of strip `k` and the two polygons it joins.

    The walk leaves through one end of the strip and comes back through the other, going all the
    way round each polygon on the way.
    """
    ends = strips(fiber)
    if not 0 <= k < len(ends):
        raise DivideKitError(Failure.DIMENSION_MISMATCH, f"o{k} names no strip between two polygons")
    h = ends[k]
    return h, fiber.twin[h]


def turning(fiber: FiberComplex, walk: Sequence[int], field: ReferenceField = LOWER_CUT) -> int:
    """
    Turning number of the curve relative to the reference field.

    Passing a polygon from slot a to slot b turns by (b - a)/d modulo one full turn; summed
    over a closed curve only the wrap-arounds past the cut survive, less the turns of the
    field along the strips.
    """
    total = 0
    for i, g in enumerate(walk):
        arrive, leave = fiber.twin[g], walk[(i + 1) % len(walk)]
        if field.cut(fiber, leave) <= field.cut(fiber, arrive):
            total += 1
        total -= field.strip_turns(fiber, g)
    return total


@dataclass(frozen=True)
class WindingFunction:
    """
    Winding numbers of the framing in which every distinguished vanishing cycle has winding 0.

    Two framings differ by a cohomology class, so the reference turning is corrected by the
    linear function that cancels it on the distinguished basis.
    """

    fiber: FiberComplex
    field: ReferenceField = LOWER_CUT

    @cached_property
    def _chain_basis(self) -> Tuple[Dict[int, int], np.ndarray, np.ndarray]:
        edges = self.fiber.graph.embedding.edges
        index = {h: i for i, (h, _) in enumerate(edges)}
        basis = np.stack([self._chain(self.fiber.curve(v), index) for v in range(self.fiber.mu)], axis=1)
        return index, basis, np.linalg.pinv(basis.astype(float))

    def _chain(self, walk: Sequence[int], index: Dict[int, int]) -> np.ndarray:
        chain = np.zeros(len(index), dtype=int)
        for g in walk:
            t = self.fiber.twin[g]
            if g < t:
                chain[index[g]] += 1
            else:
                chain[index[t]] -= 1
        return chain

    def homology(self, walk: Sequence[int]) -> np.ndarray:
        """Coordinates of the curve in the basis of distinguished cycles."""
        index, basis, inverse = self._chain_basis
        chain = self._chain(walk, index)
        coords = np.rint(inverse @ chain).astype(int)
        if not np.array_equal(basis @ coords, chain):
            raise DivideKitError(Failure.NOT_EMBEDDED, "curve is not a cycle of the fiber")
        return coords

    @cached_property
    def correction(self) -> np.ndarray:
        return -np.array([turning(self.fiber, self.fiber.curve(v), self.field) for v in range(self.fiber.mu)], dtype=int)

    def value(self, walk: Sequence[int]) -> int:
        check_walk(self.fiber, walk)
        return turning(self.fiber, walk, self.field) + int(self.correction @ self.homology(walk))

    def pairing(self, x: np.ndarray, y: np.ndarray) -> int:
        return int(x @ self.fiber.form @ y)

    @property
    def contractible_value(self) -> int:
        """Winding number of the disk boundary around the first strip."""
        return self.value(strip_loop(self.fiber, 0))


def winding(fiber: FiberComplex, walk: Sequence[int], field: ReferenceField = LOWER_CUT) -> int:
    return WindingFunction(fiber, field).value(walk)


def admissible(fiber: FiberComplex, walk: Sequence[int], wf: Optional[WindingFunction] = None) -> bool:
    """Nonseparating with winding 0; a curve is taken as nonseparating when its class is nonzero."""
    wf = wf or WindingFunction(fiber)
    if wf.value(walk) != 0:
        return False
    return bool(np.any(wf.homology(walk)))


def boundary_sum(fiber: FiberComplex, wf: Optional[WindingFunction] = None) -> int:
    wf = wf or WindingFunction(fiber)
    return sum(wf.value(walk) for walk in fiber.boundary_walks)


def random_curves(fiber: FiberComplex, count: int, rng: np.random.Generator, attempts: int = 50) -> List[Walk]:
    """Embedded closed curves through distinct polygons, grown by random self-avoiding walks."""
    polygons = sorted(fiber.ribbon)
    found: List[Walk] = []
    seen = set()
    for _ in range(count * attempts):
        if len(found) >= count:
            break
        start = polygons[rng.integers(len(polygons))]
        ends = fiber.ribbon[start]
        walk = [ends[rng.integers(len(ends))]]
        visited = {start}
        while True:
            here = fiber.polygon_of[fiber.twin[walk[-1]]]
            if here == start:
                break
            if here in visited:
                walk = []
                break
            visited.add(here)
            options = [g for g in fiber.ribbon[here] if g != fiber.twin[walk[-1]]]
            closing = [g for g in options if fiber.polygon_of[fiber.twin[g]] == start and g not in walk]
            if closing and rng.random() < 0.5:
                walk.append(closing[rng.integers(len(closing))])
                continue
            walk.append(options[rng.integers(len(options))])
        if len(walk) < 2:
            continue
        key = frozenset(walk)
        if key in seen:
            continue
        try:
            check_walk(fiber, walk)
        except DivideKitError:
            continue
        seen.add(key)
        found.append(tuple(walk))
    logging.debug(f"Sampled {len(found)} random curves")
    return found


TOKEN = re.compile(r"\s*(?:(?P<twist>T)|v(?P<vertex>\d+)|o(?P<loop>\d+)|(?P<open>\()|(?P<close>\))|\^(?P<power>[+-]?1))")


def _tokens(text: str) -> List[Tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DivideKitError(Failure.PARSE_ERROR, f"cannot read curve expression at {text[pos:]!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def parse_curve(text: str) -> CurveExpr:
    """Read `v<k>`, the strip loop `o<k>` or `T(<expr>)^<+-1>(<expr>)`."""
    tokens = _tokens(text)

    def expect(i: int, kind: str) -> str:
        if i >= len(tokens) or tokens[i][0] != kind:
            raise DivideKitError(Failure.PARSE_ERROR, f"expected {kind} in curve expression {text!r}")
        return tokens[i][1]

    def expr(i: int) -> Tuple[CurveExpr, int]:
        if i < len(tokens) and tokens[i][0] == "vertex":
            return Base(int(tokens[i][1])), i + 1
        if i < len(tokens) and tokens[i][0] == "loop":
            return Loop(int(tokens[i][1])), i + 1
        expect(i, "twist")
        expect(i + 1, "open")
        along, i = expr(i + 2)
        expect(i, "close")
        power = int(expect(i + 1, "power"))
        expect(i + 2, "open")
        target, i = expr(i + 3)
        expect(i, "close")
        return Twist(along, power, target), i + 1

    curve, end = expr(0)
    if end != len(tokens):
        raise DivideKitError(Failure.PARSE_ERROR, f"trailing input in curve expression {text!r}")
    return curve


def twist_eval(expr: CurveExpr, wf: WindingFunction) -> Tuple[np.ndarray, int]:
    """
    Homology class and winding number of a curve obtained from distinguished cycles by twists.

    T_c^e(d) = d + e<c,d> c, and the winding number changes by e<c,d> times the winding of c.
    """
    if isinstance(expr, Base):
        mu = wf.fiber.mu
        if not 0 <= expr.vertex < mu:
            raise DivideKitError(Failure.DIMENSION_MISMATCH, f"v{expr.vertex} is not a distinguished cycle")
        vector = np.zeros(mu, dtype=int)
        vector[expr.vertex] = 1
        return vector, wf.value(wf.fiber.curve(expr.vertex))
    if isinstance(expr, Loop):
        return np.zeros(wf.fiber.mu, dtype=int), wf.value(strip_loop(wf.fiber, expr.strip))
    along, along_value = twist_eval(expr.along, wf)
    target, target_value = twist_eval(expr.target, wf)
    meet = wf.pairing(along, target)
    return target + expr.power * meet * along, target_value + expr.power * meet * along_value


def format_curve(expr: CurveExpr) -> str:
    if isinstance(expr, Base):
        return f"v{expr.vertex}"
    if isinstance(expr, Loop):
        return f"o{expr.strip}"
    return f"T({format_curve(expr.along)})^{expr.power:+d}({format_curve(expr.target)})"

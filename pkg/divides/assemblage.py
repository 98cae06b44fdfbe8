import json
import logging
from collections import deque, namedtuple
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from divides.divide import Divide
from divides.fiber import FiberComplex, abstract_tree_surface, build_fiber
from divides.intersection_graph import AugmentedIntersectionGraph
from divides.toggle import TRIPOD_TYPES, OrientedIntersectionGraph, classify_tripod, format_script, toggle
from lib.config import config
from lib.errors import DivideKitError, Failure

TangentCycle = namedtuple("TangentCycle", ["vertex", "neighbors", "colored"])
Legality = namedtuple("Legality", ["legal", "components", "u_empty"])
Core = namedtuple("Core", ["vertices", "kind", "script", "moves"], defaults=((),))
Step = namedtuple("Step", ["vertex", "components", "absorbed", "genus", "boundary"])

CORE_SIZE = 10


@dataclass(frozen=True)
class ColoredState:
    graph: AugmentedIntersectionGraph
    colored: frozenset

    def __post_init__(self):
        if not self.colored:
            raise DivideKitError(Failure.DIMENSION_MISMATCH, "colored set is empty")
        stray = self.colored - set(self.graph.bounded_vertices)
        if stray:
            raise DivideKitError(Failure.DIMENSION_MISMATCH, f"{sorted(stray)} are not bounded vertices")
        if not _connected(self.graph.adjacency, self.colored):
            raise DivideKitError(Failure.DIMENSION_MISMATCH, f"colored set {sorted(self.colored)} is disconnected")

    def with_vertex(self, v: int) -> "ColoredState":
        return ColoredState(self.graph, self.colored | {v})

    @property
    def uncolored(self) -> List[int]:
        return [v for v in self.graph.bounded_vertices if v not in self.colored]


def _connected(adjacency: Mapping[int, Iterable[int]], vertices: Iterable[int]) -> bool:
    vertices = set(vertices)
    if not vertices:
        return True
    start = min(vertices)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w in vertices and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen == vertices


def tangent_space(graph: AugmentedIntersectionGraph, v: int, colored: Iterable[int] = ()) -> TangentCycle:
    """Neighbours of `v` in rotation order, `inf` possibly repeated, each flagged when colored."""
    colored = set(colored)
    lam = graph.embedding
    neighbors = tuple(lam.head(h) for h in lam.rotation(v))
    return TangentCycle(v, neighbors, tuple(w in colored for w in neighbors))


def _runs(flags: Sequence[bool]) -> int:
    if all(flags):
        return 1
    return sum(1 for i, f in enumerate(flags) if f and not flags[i - 1])


def is_legal(state: ColoredState, v: int) -> Legality:
    if v in state.colored or v not in state.graph.bounded_vertices:
        raise DivideKitError(Failure.DIMENSION_MISMATCH, f"{v} is not an uncolored bounded vertex")
    cycle = tangent_space(state.graph, v, state.colored)
    components = _runs(cycle.colored)
    return Legality(components == 1, components, all(cycle.colored))


def find_legal(state: ColoredState) -> int:
    for v in state.uncolored:
        if is_legal(state, v).legal:
            return v
    raise DivideKitError(Failure.NO_LEGAL_VERTEX, f"no vertex attaches to {sorted(state.colored)} along one arc")


def _grow(
    adj: Mapping[int, Set[int]], chosen: List[int], branches: List[List[int]], lengths: Sequence[int], centre: int
) -> Iterator[List[List[int]]]:
    i = next((k for k, b in enumerate(branches) if len(b) < lengths[k]), None)
    if i is None:
        yield [list(b) for b in branches]
        return
    tip = branches[i][-1] if branches[i] else centre
    for x in sorted(adj[tip]):
        if x in chosen:
            continue
        # induced: x sees nothing chosen except the vertex it hangs from
        if any(y in chosen and y != tip for y in adj[x]):
            continue
        chosen.append(x)
        branches[i].append(x)
        yield from _grow(adj, chosen, branches, lengths, centre)
        branches[i].pop()
        chosen.pop()


def _spans_genus_five(vertices: Sequence[int], adj: Mapping[int, Set[int]], fiber: Optional[FiberComplex]) -> bool:
    if fiber is not None:
        surface = fiber.subsurface(vertices)
        return (surface.genus, surface.boundary) == (5, 1)
    chosen = set(vertices)
    return abstract_tree_surface({v: adj[v] & chosen for v in vertices}) == (5, 1)


def detect_core(
    adjacency: Mapping[int, Iterable[int]],
    fiber: Optional[FiberComplex] = None,
    types: Sequence[Tuple[int, int, int]] = TRIPOD_TYPES,
) -> Optional[Core]:
    """
    First induced tripod of the listed types, scanning types in order and centres ascending.

    Returned vertices are the centre followed by the branches, each listed outward.
    """
    adj = {v: set(ws) for v, ws in adjacency.items()}
    for kind in types:
        for centre in sorted(adj):
            if len(adj[centre]) < 3:
                continue
            for lengths in sorted(set(permutations(kind))):
                for branches in _grow(adj, [centre], [[], [], []], lengths, centre):
                    vertices = [centre] + [v for b in branches for v in b]
                    if _spans_genus_five(vertices, adj, fiber):
                        logging.info(f"Found tripod core {kind} centred at {centre}")
                        return Core(tuple(vertices), kind, ())
    return None


def connected_subsets(adjacency: Mapping[int, Iterable[int]], size: int) -> Iterator[Tuple[int, ...]]:
    """Every connected vertex set of the given size exactly once, smallest vertex first."""
    adj = {v: set(ws) for v, ws in adjacency.items()}

    def extend(subset: List[int], frontier: List[int], root: int, around: Set[int]) -> Iterator[Tuple[int, ...]]:
        if len(subset) == size:
            yield tuple(sorted(subset))
            return
        frontier = list(frontier)
        while frontier:
            w = frontier.pop(0)
            fresh = [u for u in sorted(adj[w]) if u > root and u not in around]
            yield from extend(subset + [w], frontier + fresh, root, around | adj[w] | {w})

    for v in sorted(adj):
        start = [u for u in sorted(adj[v]) if u > v]
        yield from extend([v], start, v, adj[v] | {v})


def toggled_core(
    fiber: FiberComplex,
    depth: Optional[int] = None,
    limit: Optional[int] = None,
) -> Optional[Core]:
    """
    Ten curves with unimodular Gram matrix spanning a genus 5 subsurface, together with a
    toggle script of bounded length turning their graph into a tripod. Toggles that would
    add edges are skipped.
    """
    depth = config.get("CORE_SEARCH_DEPTH") if depth is None else depth
    limit = config.get("CORE_SEARCH_SUBSETS") if limit is None else limit
    graph = fiber.graph
    for count, subset in enumerate(connected_subsets(graph.adjacency, CORE_SIZE)):
        if count >= limit:
            logging.warning(f"Stopped the toggled core search after {limit} subsets")
            break
        idx = list(subset)
        gram = fiber.form[np.ix_(idx, idx)]
        if int(round(np.linalg.det(gram.astype(float)))) != 1:
            continue
        surface = fiber.subsurface(subset)
        if (surface.genus, surface.boundary) != (5, 1):
            continue
        start = OrientedIntersectionGraph(subset, np.eye(CORE_SIZE, dtype=int), gram)
        found = _search_toggles(start, depth)
        if found is not None:
            kind, script = found
            logging.info(f"Found toggled core {kind} on {subset} via {format_script(script)}")
            return Core(subset, kind, tuple(script))
    return None


def _search_toggles(start: OrientedIntersectionGraph, depth: int) -> Optional[Tuple[Tuple[int, int, int], List]]:
    queue = deque([(start, [])])
    seen = {start.vectors.tobytes()}
    while queue:
        g, script = queue.popleft()
        kind = classify_tripod(g.adjacency())
        if kind in TRIPOD_TYPES:
            return kind, script
        if len(script) >= depth:
            continue
        edges = len(g.edges())
        for a, b in sorted(g.edges()):
            try:
                nxt = toggle(g, a, b)
            except DivideKitError:
                continue
            key = nxt.vectors.tobytes()
            if key in seen or len(nxt.edges()) > edges:
                continue
            seen.add(key)
            queue.append((nxt, script + [(a, b)]))
    return None


Move = Tuple[int, int]


def isotopic_divides(d: Divide, depth: Optional[int] = None) -> Iterator[Tuple[Tuple[Move, ...], Divide]]:
    """
    Divides reachable from `d` by at most `depth` triangle moves, breadth first, each with the
    (half-edge, crossing) moves that reach it. The divide itself comes first with no moves.
    """
    depth = config.get("CORE_MOVE_DEPTH") if depth is None else depth
    queue = deque([((), d)])
    seen = {frozenset(d.twin.items())}
    while queue:
        moves, current = queue.popleft()
        yield moves, current
        if len(moves) >= depth:
            continue
        for edge, crossing in current.move_sites():
            moved = current.admissible_move(edge, crossing)
            key = frozenset(moved.twin.items())
            if key in seen:
                continue
            seen.add(key)
            queue.append((moves + ((edge, crossing),), moved))


def apply_moves(d: Divide, moves: Iterable[Move]) -> Divide:
    for edge, crossing in moves:
        d = d.admissible_move(edge, crossing)
    return d


def find_core(d: Divide, depth: Optional[int] = None) -> Tuple[FiberComplex, Core]:
    """
    Fiber of an isotopic divide carrying a tripod core, with that core.

    Induced tripods are looked for on every divide within `depth` triangle moves before the
    toggle search runs on any of them.
    """
    candidates = []
    for moves, moved in isotopic_divides(d, depth):
        fiber = build_fiber(moved)
        candidates.append((moves, fiber))
        core = detect_core(fiber.graph.adjacency, fiber)
        if core is not None:
            return fiber, core._replace(moves=moves)
    for moves, fiber in candidates:
        core = toggled_core(fiber)
        if core is not None:
            return fiber, core._replace(moves=moves)
    raise DivideKitError(
        Failure.NO_CORE, f"no tripod core within {len(candidates)} isotopic divide(s) of {len(d.crossings)} crossings"
    )


@dataclass
class AssemblageCertificate:
    core: Tuple[int, ...]
    core_type: Optional[Tuple[int, int, int]]
    script: Tuple[Move, ...]
    steps: List[Step]
    final: Tuple[int, int]
    moves: Tuple[Move, ...] = ()

    def to_dict(self) -> Dict:
        return {
            "moves": [{"edge": e, "crossing": x} for e, x in self.moves],
            "core": list(self.core),
            "core_type": None if self.core_type is None else "({},{},{})".format(*self.core_type),
            "script": [f"{a}->{b}" for a, b in self.script],
            "steps": [
                {
                    "vertex": s.vertex,
                    "components": s.components,
                    "absorbed": s.absorbed,
                    "genus": s.genus,
                    "boundary": s.boundary,
                }
                for s in self.steps
            ],
            "final": {"genus": self.final[0], "boundary": self.final[1]},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def resolve_core(fiber: FiberComplex) -> Core:
    core = detect_core(fiber.graph.adjacency, fiber) or toggled_core(fiber)
    if core is None:
        raise DivideKitError(Failure.NO_CORE, f"no tripod core among {fiber.mu} curves")
    return core


def assemble(fiber: FiberComplex, core: Optional[Core] = None) -> AssemblageCertificate:
    """Color the core, then repeatedly attach the smallest legal vertex until every curve is in."""
    graph = fiber.graph
    if graph.mu == 0:
        raise DivideKitError(Failure.NO_LEGAL_VERTEX, "diagram has no bounded vertices")
    core = core or resolve_core(fiber)
    state = ColoredState(graph, frozenset(core.vertices))
    steps = []
    while state.uncolored:
        v = find_legal(state)
        verdict = is_legal(state, v)
        state = state.with_vertex(v)
        surface = fiber.subsurface(state.colored)
        steps.append(Step(v, verdict.components, verdict.u_empty, surface.genus, surface.boundary))
        logging.debug(f"Attached {v}: genus {surface.genus}, {surface.boundary} boundary component(s)")
    final = fiber.subsurface(state.colored)
    certificate = AssemblageCertificate(
        core=tuple(core.vertices),
        core_type=core.kind,
        script=tuple(core.script),
        steps=steps,
        final=(final.genus, final.boundary),
        moves=tuple(core.moves),
    )
    logging.info(f"Assembled {graph.mu} curves from a core of {len(core.vertices)} in {len(steps)} step(s)")
    return certificate


def assemble_divide(d: Divide, depth: Optional[int] = None) -> Tuple[FiberComplex, AssemblageCertificate]:
    """Certificate for `d`, moving it by triangle moves first when its own diagram has no core."""
    fiber, core = find_core(d, depth)
    if core.moves:
        logging.info(f"Core found after {len(core.moves)} triangle move(s)")
    return fiber, assemble(fiber, core)


def replay(certificate: AssemblageCertificate, fiber: FiberComplex) -> None:
    """Recheck every recorded step; raise ReplayMismatch on the first disagreement."""
    graph = fiber.graph
    try:
        state = ColoredState(graph, frozenset(certificate.core))
    except DivideKitError as e:
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"core does not fit: {e.msg}")
    if certificate.core_type is not None and not certificate.script:
        chosen = set(certificate.core)
        kind = classify_tripod({v: graph.adjacency[v] & chosen for v in chosen})
        if kind != certificate.core_type:
            raise DivideKitError(Failure.REPLAY_MISMATCH, f"core spans {kind}, not {certificate.core_type}")
    genus = fiber.subsurface(state.colored).genus
    for i, step in enumerate(certificate.steps):
        if step.vertex in state.colored:
            raise DivideKitError(Failure.REPLAY_MISMATCH, f"step {i} recolors {step.vertex}")
        verdict = is_legal(state, step.vertex)
        if not verdict.legal or (verdict.components, verdict.u_empty) != (step.components, step.absorbed):
            raise DivideKitError(Failure.REPLAY_MISMATCH, f"step {i} at {step.vertex} gives {verdict}")
        state = state.with_vertex(step.vertex)
        surface = fiber.subsurface(state.colored)
        if (surface.genus, surface.boundary) != (step.genus, step.boundary) or surface.genus < genus:
            raise DivideKitError(Failure.REPLAY_MISMATCH, f"step {i} reaches {surface.genus, surface.boundary}")
        genus = surface.genus
    if state.uncolored:
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"{state.uncolored} never attached")
    if certificate.final != (fiber.genus, fiber.boundary):
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"final surface {certificate.final} is not the fiber")


def replay_divide(certificate: AssemblageCertificate, d: Divide) -> FiberComplex:
    """Reapply the recorded triangle moves to `d`, then replay the steps on the moved fiber."""
    try:
        moved = apply_moves(d, certificate.moves)
    except DivideKitError as e:
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"recorded moves do not apply: {e.msg}")
    fiber = build_fiber(moved)
    replay(certificate, fiber)
    return fiber

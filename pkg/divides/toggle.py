import json
import logging
import re
from collections import deque, namedtuple
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

from divides.fiber import FiberComplex, abstract_tree_surface
from divides.intersection_graph import AugmentedIntersectionGraph
from lib.errors import DivideKitError, Failure

TRIPOD_TYPES = [(1, 2, 6), (1, 4, 4), (2, 3, 4), (2, 2, 5)]

ReplayReport = namedtuple("ReplayReport", ["name", "steps", "tripod", "surface", "invariants"])

STEP = re.compile(r"^\s*[A-Za-z]*(\d+)\s*->\s*[A-Za-z]*(\d+)\s*$")


@dataclass(frozen=True)
class OrientedIntersectionGraph:
    """
    Configuration of curves given by homology vectors over a fixed lattice.

    `base` is the skew intersection form of the lattice basis and row i of `vectors` the class of
    the curve at `vertices[i]`. An edge a->b means <a, b> = +1.
    """

    vertices: Tuple[int, ...]
    vectors: np.ndarray
    base: np.ndarray

    @property
    def gram(self) -> np.ndarray:
        return self.vectors @ self.base @ self.vectors.T

    def index(self, v: int) -> int:
        try:
            return self.vertices.index(v)
        except ValueError:
            raise DivideKitError(Failure.DIMENSION_MISMATCH, f"{v} is not a vertex of the configuration")

    def pairing(self, a: int, b: int) -> int:
        return int(self.gram[self.index(a), self.index(b)])

    def adjacency(self) -> Dict[int, Set[int]]:
        gram = self.gram
        return {
            v: {w for j, w in enumerate(self.vertices) if gram[i, j] != 0} for i, v in enumerate(self.vertices)
        }

    def edges(self) -> List[Tuple[int, int]]:
        """Directed edges (a, b) with <a, b> = +1."""
        gram = self.gram
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[j]) for i in range(n) for j in range(n) if gram[i, j] == 1]

    def triangles(self) -> List[Tuple[int, int, int]]:
        adj = self.adjacency()
        return [
            t for t in combinations(self.vertices, 3) if t[1] in adj[t[0]] and t[2] in adj[t[0]] and t[2] in adj[t[1]]
        ]

    def coherent(self, triangle: Tuple[int, int, int]) -> bool:
        a, b, c = triangle
        signs = (self.pairing(a, b), self.pairing(b, c), self.pairing(c, a))
        return signs in ((1, 1, 1), (-1, -1, -1))

    def check_simple(self) -> None:
        gram = self.gram
        if np.any(np.abs(gram) > 1):
            raise DivideKitError(Failure.INCOHERENT_TRIANGLE, "two curves meet more than once")

    def to_json(self) -> str:
        payload = {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges()],
        }
        return json.dumps(payload, indent=2)


def orient(graph: AugmentedIntersectionGraph, fiber: FiberComplex) -> OrientedIntersectionGraph:
    mu = graph.mu
    oriented = OrientedIntersectionGraph(tuple(range(mu)), np.eye(mu, dtype=int), fiber.form.copy())
    adjacency = oriented.adjacency()
    if adjacency != {v: set(ws) for v, ws in graph.adjacency.items()}:
        raise DivideKitError(Failure.NO_COHERENT_ORIENTATION, "intersection form disagrees with the diagram")
    bad = [t for t in oriented.triangles() if not oriented.coherent(t)]
    if bad:
        raise DivideKitError(Failure.NO_COHERENT_ORIENTATION, f"incoherent triangles {bad[:3]}")
    return oriented


def orient_coherently(adjacency: Mapping[int, Iterable[int]]) -> OrientedIntersectionGraph:
    """
    Orient an abstract graph so that every triangle is a directed cycle.

    Around a triangle a<b<c the edges ab and bc point the same way and ac the other way; these
    parity constraints are propagated edge by edge. Unconstrained edges point from low to high.
    """
    vertices = tuple(sorted(adjacency))
    adj = {v: set(adjacency[v]) for v in vertices}
    edges = sorted({tuple(sorted((u, w))) for u in vertices for w in adj[u]})
    constraints: Dict[Tuple[int, int], List[Tuple[Tuple[int, int], int]]] = {e: [] for e in edges}
    for a, b, c in combinations(vertices, 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            for e, f, parity in (((a, b), (b, c), 1), ((a, b), (a, c), -1), ((b, c), (a, c), -1)):
                constraints[e].append((f, parity))
                constraints[f].append((e, parity))
    sign: Dict[Tuple[int, int], int] = {}
    for start in edges:
        if start in sign:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            e = queue.popleft()
            for f, parity in constraints[e]:
                want = sign[e] * parity
                if f not in sign:
                    sign[f] = want
                    queue.append(f)
                elif sign[f] != want:
                    raise DivideKitError(Failure.NO_COHERENT_ORIENTATION, f"edges {e} and {f} disagree")
    index = {v: i for i, v in enumerate(vertices)}
    base = np.zeros((len(vertices), len(vertices)), dtype=int)
    for (u, w), s in sign.items():
        base[index[u], index[w]] = s
        base[index[w], index[u]] = -s
    return OrientedIntersectionGraph(vertices, np.eye(len(vertices), dtype=int), base)


def toggle(g: OrientedIntersectionGraph, a: int, b: int) -> OrientedIntersectionGraph:
    """
    Replace b by T_a(b) along the edge a->b, which is b + a in homology.

    Coherent triangles through a and b lose their edge at b; neighbours of a alone gain one.
    """
    _check_edge(g, a, b)
    for t in g.triangles():
        if a in t and b in t and not g.coherent(t):
            raise DivideKitError(Failure.INCOHERENT_TRIANGLE, f"triangle {t} is not coherent")
    vectors = g.vectors.copy()
    vectors[g.index(b)] += vectors[g.index(a)]
    toggled = OrientedIntersectionGraph(g.vertices, vectors, g.base)
    toggled.check_simple()
    logging.debug(f"Toggled {b} along {a}")
    return toggled


def untoggle(g: OrientedIntersectionGraph, a: int, b: int) -> OrientedIntersectionGraph:
    """Inverse of `toggle`: replace b by b - a along the edge a->b."""
    _check_edge(g, a, b)
    vectors = g.vectors.copy()
    vectors[g.index(b)] -= vectors[g.index(a)]
    restored = OrientedIntersectionGraph(g.vertices, vectors, g.base)
    restored.check_simple()
    return restored


def _check_edge(g: OrientedIntersectionGraph, a: int, b: int) -> None:
    pairing = g.pairing(a, b)
    if pairing == 0:
        raise DivideKitError(Failure.INCOHERENT_TRIANGLE, f"{a} and {b} are not adjacent")
    if pairing != 1:
        raise DivideKitError(Failure.INCOHERENT_TRIANGLE, f"the edge runs {b}->{a}, not {a}->{b}")


def parse_script(text: str) -> List[Tuple[int, int]]:
    steps = []
    for part in text.split(";"):
        if not part.strip():
            continue
        m = STEP.match(part)
        if not m:
            raise DivideKitError(Failure.PARSE_ERROR, f"cannot read toggle {part.strip()!r}, expected 'a->b'")
        steps.append((int(m.group(1)), int(m.group(2))))
    return steps


def format_script(steps: Sequence[Tuple[int, int]]) -> str:
    return "; ".join(f"{a}->{b}" for a, b in steps)


def apply_script(g: OrientedIntersectionGraph, steps: Sequence[Tuple[int, int]]) -> List[OrientedIntersectionGraph]:
    history = [g]
    for a, b in steps:
        history.append(toggle(history[-1], a, b))
    return history


def smith_invariants(g: OrientedIntersectionGraph) -> Tuple[int, ...]:
    """Invariant factors of the Gram matrix of the configuration."""
    snf = smith_normal_form(Matrix(g.gram.tolist()), domain=ZZ)
    return tuple(abs(int(snf[i, i])) for i in range(min(snf.shape)))


def classify_tripod(adjacency: Mapping[int, Iterable[int]]) -> Optional[Tuple[int, int, int]]:
    """Sorted branch lengths when the graph is a tree with one trivalent vertex and no higher valence."""
    adj = {v: set(ws) for v, ws in adjacency.items()}
    edges = sum(len(ws) for ws in adj.values()) // 2
    if edges != len(adj) - 1:
        return None
    degrees = {v: len(ws) for v, ws in adj.items()}
    centres = [v for v, k in degrees.items() if k == 3]
    if len(centres) != 1 or any(k > 3 for k in degrees.values()):
        return None
    centre = centres[0]
    lengths = []
    seen = {centre}
    for start in sorted(adj[centre]):
        length, here = 0, start
        while here is not None:
            seen.add(here)
            length += 1
            ahead = [w for w in adj[here] if w not in seen]
            here = ahead[0] if ahead else None
        lengths.append(length)
    if len(seen) != len(adj):
        return None
    return tuple(sorted(lengths))  # type: ignore


def replay_case(name: str) -> ReplayReport:
    from generators.fixtures import load_graph_fixture

    fixture = load_graph_fixture(name)
    history = apply_script(orient_coherently(fixture.adjacency), fixture.script)
    undone = history[-1]
    for a, b in reversed(fixture.script):
        undone = untoggle(undone, a, b)
    if not np.array_equal(undone.vectors, history[0].vectors):
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"{name}: undoing the script does not restore the curves")
    invariants = {smith_invariants(g) for g in history}
    if len(invariants) != 1:
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"{name}: Smith invariants changed along the script")
    result = history[-1].adjacency()
    tripod = classify_tripod(result)
    if tripod != fixture.expected:
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"{name}: expected tripod {fixture.expected}, got {tripod}")
    surface = abstract_tree_surface(result)
    if surface != (5, 1):
        raise DivideKitError(Failure.REPLAY_MISMATCH, f"{name}: tripod spans {surface}, not genus 5 with one boundary")
    logging.info(f"Replayed {name}: {len(fixture.script)} toggle(s) to tripod {tripod}")
    return ReplayReport(name, len(fixture.script), tripod, surface, invariants.pop())

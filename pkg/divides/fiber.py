import logging
from collections import deque, namedtuple
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from divides.divide import Divide
from divides.intersection_graph import AugmentedIntersectionGraph, build
from divides.invariants import record_from_divide
from lib.errors import DivideKitError, Failure

Subsurface = namedtuple("Subsurface", ["vertices", "chi", "boundary", "genus", "components", "crossings", "filled"])

OUT = "out"
BACK = "back"


def _count_components(vertices: Sequence[int], edges: Iterable[Tuple[int, int]]) -> int:
    if not vertices:
        return 0
    index = {v: i for i, v in enumerate(vertices)}
    pairs = [(index[u], index[w]) for u, w in edges]
    rows = [a for a, _ in pairs]
    cols = [b for _, b in pairs]
    n = len(vertices)
    count, _ = connected_components(coo_matrix((np.ones(len(pairs)), (rows, cols)), shape=(n, n)), directed=False)
    return int(count)


def _orbits(rotation: Mapping[Hashable, Sequence[Hashable]], twin: Mapping[Hashable, Hashable]) -> List[Tuple]:
    """Boundary cycles of a ribbon graph: orbits of rotation after twin."""
    sigma = {}
    for hs in rotation.values():
        for i, h in enumerate(hs):
            sigma[h] = hs[(i + 1) % len(hs)]
    seen: Set[Hashable] = set()
    out = []
    for h in sorted(sigma, key=repr):
        if h in seen:
            continue
        walk = []
        while h not in seen:
            seen.add(h)
            walk.append(h)
            h = sigma[twin[h]]
        out.append(tuple(walk))
    return out


def configuration_surface(
    vertices: Sequence[int],
    order: Mapping[int, Sequence[int]],
    sign: Callable[[int, int], int],
) -> Tuple[int, int, int]:
    """
    (chi, boundary, components) of a regular neighbourhood of simple closed curves that meet
    once for every edge of the configuration.

    `order[u]` lists the curves met by `u` in the order they are met along it and `sign(u, w)`
    is the algebraic intersection of u with w. Every meeting point becomes a four-valent
    vertex of a ribbon graph whose edges are the arcs of the curves.
    """
    rotation: Dict[Tuple[int, int], List[Tuple]] = {}
    twin: Dict[Tuple, Tuple] = {}
    annuli = 0
    edges = set()
    for u in vertices:
        seq = order[u]
        if not seq:
            annuli += 1
        for i, w in enumerate(seq):
            twin[(u, i, OUT)] = (u, i, BACK)
            twin[(u, i, BACK)] = (u, i, OUT)
            edges.add(tuple(sorted((u, w))))
    for u, w in sorted(edges):
        iu, iw = list(order[u]).index(w), list(order[w]).index(u)
        u_out, u_back = (u, iu, OUT), (u, (iu - 1) % len(order[u]), BACK)
        w_out, w_back = (w, iw, OUT), (w, (iw - 1) % len(order[w]), BACK)
        if sign(u, w) > 0:
            rotation[(u, w)] = [u_out, w_out, u_back, w_back]
        else:
            rotation[(u, w)] = [u_out, w_back, u_back, w_out]
    boundary = len(_orbits(rotation, twin)) + 2 * annuli
    return -len(edges), boundary, _count_components(list(vertices), edges)


def _genus(chi: int, boundary: int, components: int) -> int:
    twice = 2 * components - chi - boundary
    if twice < 0 or twice % 2:
        raise DivideKitError(Failure.MODEL_MISMATCH, f"chi={chi}, b={boundary} on {components} component(s)")
    return twice // 2


def abstract_tree_surface(adjacency: Mapping[int, Iterable[int]]) -> Tuple[int, int]:
    """(genus, boundary) of the surface filled by curves whose intersection graph is the given tree."""
    vertices = sorted(adjacency)
    neighbors = {v: sorted(set(adjacency[v])) for v in vertices}
    edges = {tuple(sorted((u, w))) for u in vertices for w in neighbors[u]}
    if any(u == w for u, w in edges):
        raise DivideKitError(Failure.NOT_A_TREE, "graph has a loop")
    if len(edges) != len(vertices) - 1 or _count_components(vertices, edges) != 1:
        raise DivideKitError(Failure.NOT_A_TREE, f"{len(vertices)} vertices and {len(edges)} edges")
    chi, boundary, components = configuration_surface(vertices, neighbors, lambda u, w: 1 if u < w else -1)
    return _genus(chi, boundary, components), boundary


@dataclass(frozen=True)
class FiberComplex:
    """
    Milnor fiber as a ribbon surface over the augmented intersection graph.

    Every face of the graph is a polygon and every edge a strip glued between the two polygons
    it separates. Faces are two-coloured; black polygons keep the orientation of the plane and
    white ones reverse it, which makes the glued surface orientable. Half-edges of the graph
    double as the ends of the strips: half-edge `h` is the end sitting in the polygon on its left.
    """

    graph: AugmentedIntersectionGraph
    black: Dict[int, bool]
    polygon_of: Dict[int, int]
    corners: Dict[int, frozenset]
    ribbon: Dict[int, List[int]]
    form: np.ndarray
    _slot: Dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for hs in self.ribbon.values():
            self._slot.update({h: i for i, h in enumerate(hs)})

    @property
    def mu(self) -> int:
        return self.graph.mu

    @property
    def twin(self) -> Dict[int, int]:
        return self.graph.embedding.twin

    @property
    def polygons(self) -> int:
        return len(self.ribbon)

    @property
    def vertical_edges(self) -> int:
        return len(self.graph.embedding.edges)

    @property
    def chi(self) -> int:
        return self.polygons - self.vertical_edges

    def slot(self, h: int) -> int:
        return self._slot[h]

    def degree(self, polygon: int) -> int:
        return len(self.ribbon[polygon])

    @cached_property
    def boundary_walks(self) -> List[Tuple[int, ...]]:
        return _orbits(self.ribbon, self.twin)

    @property
    def boundary(self) -> int:
        return len(self.boundary_walks)

    @property
    def genus(self) -> int:
        return _genus(self.chi, self.boundary, 1)

    def curve(self, v: int) -> Tuple[int, ...]:
        """Vanishing cycle of bounded vertex `v` as a walk of strip ends, counterclockwise around `v`."""
        if not 0 <= v < self.mu:
            raise DivideKitError(Failure.DIMENSION_MISMATCH, f"no distinguished cycle for vertex {v}")
        lam = self.graph.embedding
        return tuple(lam.twin[h] for h in lam.rotation(v))

    def pairing(self, u: int, w: int) -> int:
        return int(self.form[u, w])

    def subsurface(self, vertices: Iterable[int]) -> Subsurface:
        colored = set(vertices)
        stray = colored - set(self.graph.bounded_vertices)
        if stray:
            raise DivideKitError(Failure.DIMENSION_MISMATCH, f"{sorted(stray)} are not bounded vertices")
        lam = self.graph.embedding
        order = {u: [w for w in (lam.head(h) for h in lam.rotation(u)) if w in colored] for u in colored}
        chi, boundary, components = configuration_surface(sorted(colored), order, self.pairing)
        filled = tuple(f for f, cs in sorted(self.corners.items()) if cs <= colored)
        crossings = tuple(sorted({tuple(sorted((u, w))) for u in colored for w in order[u]}))
        chi += len(filled)
        boundary -= len(filled)
        return Subsurface(
            vertices=tuple(sorted(colored)),
            chi=chi,
            boundary=boundary,
            genus=_genus(chi, boundary, components),
            components=components,
            crossings=crossings,
            filled=filled,
        )

    def curve_pieces(self, colored: Set[int], v: int) -> Tuple[int, bool]:
        """
        Components of a_v inside the subsurface of `colored` and whether a_v lies inside it.

        Along its walk a_v alternates between strips and passages through polygons. A strip lies
        in the subsurface when the vertex at its far end is coloured, a passage when every other
        corner of its polygon is.
        """
        vertex_of = self.graph.embedding.vertex_of
        segments = []
        for g in self.curve(v):
            segments.append(vertex_of[g] in colored)
            polygon = self.polygon_of[self.twin[g]]
            corners = {vertex_of[x] for x in self.ribbon[polygon]} - {v}
            segments.append(corners <= colored)
        if all(segments):
            return 1, True
        pieces = sum(1 for i, inside in enumerate(segments) if inside and not segments[i - 1])
        return pieces, False


def _two_colouring(graph: AugmentedIntersectionGraph, face_of: Dict[int, int], faces: List[int]) -> Dict[int, bool]:
    lam = graph.embedding
    across: Dict[int, List[int]] = {f: [] for f in faces}
    for h, t in lam.edges:
        across[face_of[h]].append(face_of[t])
        across[face_of[t]].append(face_of[h])
    black: Dict[int, bool] = {}
    for start in faces:
        if start in black:
            continue
        black[start] = True
        queue = deque([start])
        while queue:
            f = queue.popleft()
            for g in across[f]:
                if g not in black:
                    black[g] = not black[f]
                    queue.append(g)
                elif black[g] == black[f]:
                    raise DivideKitError(Failure.MODEL_MISMATCH, f"faces {f} and {g} cannot be coloured apart")
    return black


def build_fiber(d: Divide, graph: Optional[AugmentedIntersectionGraph] = None) -> FiberComplex:
    graph = graph or build(d)
    lam = graph.embedding
    faces = lam.faces()
    face_of = lam.face_index(faces)
    black = _two_colouring(graph, face_of, [f.id for f in faces])

    ribbon = {}
    for f in faces:
        cycle = list(f.cycle) if black[f.id] else list(reversed(f.cycle))
        start = cycle.index(min(cycle))
        ribbon[f.id] = cycle[start:] + cycle[:start]
    corners = {f.id: frozenset(lam.vertex_of[h] for h in f.cycle) for f in faces}

    mu = graph.mu
    form = np.zeros((mu, mu), dtype=int)
    for h in lam.half_edges:
        u, w = lam.vertex_of[h], lam.head(h)
        if u < mu and w < mu and u != w:
            form[u, w] = 1 if black[face_of[h]] else -1

    fiber = FiberComplex(graph=graph, black=black, polygon_of=face_of, corners=corners, ribbon=ribbon, form=form)

    record = record_from_divide(d)
    found = (fiber.chi, fiber.boundary, fiber.genus)
    expected = (1 - record.mu, record.b, record.g)
    if found != expected:
        raise DivideKitError(Failure.MODEL_MISMATCH, f"fiber has (chi, b, g) = {found}, invariants give {expected}")
    if not np.array_equal(form, -form.T):
        raise DivideKitError(Failure.MODEL_MISMATCH, "intersection form is not skew")
    logging.info(f"Built fiber: genus {fiber.genus}, {fiber.boundary} boundary component(s), {fiber.polygons} polygons")
    return fiber

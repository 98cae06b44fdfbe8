import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Set, Tuple

from divides.divide import Divide
from divides.planar_map import PlanarMap, dual
from lib.errors import DivideKitError, Failure

SADDLE = "saddle"
EXTREMUM = "extremum"
UNBOUNDED = "unbounded"


def blowup(d: Divide) -> PlanarMap:
    """
    Replace every crossing by a small circle through four new vertices.

    Circle vertex ids are the slot half-edge ids; endpoints keep their half-edge as the only
    edge and get vertex id `base + endpoint id`. The outer marker sits on a boundary leaf.
    """
    base = max(d.twin) + 1
    circle = 2 * base
    rotation: Dict[int, List[int]] = {}
    twin = dict(d.twin)
    for x in sorted(d.crossings):
        hs = d.crossings[x]
        for i, h in enumerate(hs):
            to_next, to_prev = circle + 2 * h, circle + 2 * h + 1
            rotation[h] = [h, to_next, to_prev]
            partner = circle + 2 * hs[(i + 1) % 4] + 1
            twin[to_next] = partner
            twin[partner] = to_next
    for e, h in d.endpoints.items():
        rotation[base + e] = [h]
    return PlanarMap.from_rotations(rotation, twin, outer=d.endpoints[d.boundary[0]])


@dataclass(frozen=True)
class AugmentedIntersectionGraph:
    """
    Planar dual of the blowup with every face meeting the disk boundary collapsed into `inf`.

    Vertices 0..delta-1 are saddles in crossing-id order, then extrema ordered by the smallest
    blowup half-edge of their region, then `inf` = mu. `raw` keeps every dual edge; `embedding`
    merges parallel edges between bounded vertices.
    """

    embedding: PlanarMap
    raw: PlanarMap
    kinds: Dict[int, str]
    crossing_of: Dict[int, int]
    inf: int

    @property
    def mu(self) -> int:
        return self.inf

    @property
    def bounded_vertices(self) -> List[int]:
        return list(range(self.inf))

    def label(self, v: int) -> str:
        if v == self.inf:
            return "inf"
        if self.kinds[v] == SADDLE:
            return f"s{self.crossing_of[v]}"
        return f"e{v - len(self.crossing_of)}"

    @cached_property
    def adjacency(self) -> Dict[int, Set[int]]:
        """Simple adjacency of the bounded diagram."""
        adj: Dict[int, Set[int]] = {v: set() for v in self.bounded_vertices}
        for h, t in self.embedding.edges:
            u, v = self.embedding.vertex_of[h], self.embedding.vertex_of[t]
            if u != self.inf and v != self.inf and u != v:
                adj[u].add(v)
                adj[v].add(u)
        return adj

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((u, v) for u, vs in self.adjacency.items() for v in vs if u < v)

    def bounded(self) -> PlanarMap:
        return self.embedding.delete_vertices([self.inf])

    def face_census(self) -> Tuple[int, int]:
        """
        (bigons, triangles) over every face of the sphere map, faces at `inf` included.

        Raises FaceCensusViolation on any other face size. A2 gives (2, 2) and a coprime
        Chebyshev divide with delta crossings gives (2, 4 delta - 2).
        """
        sizes = Counter(len(f.cycle) for f in self.embedding.faces())
        bad = {k: n for k, n in sizes.items() if k not in (2, 3)}
        if bad:
            raise DivideKitError(Failure.FACE_CENSUS_VIOLATION, f"faces of sizes {sorted(bad)} in the diagram")
        return sizes.get(2, 0), sizes.get(3, 0)

    def rotation_lists(self) -> Dict[int, List[int]]:
        return {v: [self.embedding.head(h) for h in hs] for v, hs in sorted(self.embedding.rotations().items())}

    def to_json(self) -> str:
        payload = {
            "vertices": [{"id": v, "label": self.label(v), "kind": self.kind(v)} for v in range(self.inf + 1)],
            "edges": [list(e) for e in self.edges()],
            "rotation": {str(v): ns for v, ns in self.rotation_lists().items()},
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["graph intersection {"]
        for v in range(self.inf + 1):
            lines.append(f'  {self.label(v)} [kind="{self.kind(v)}"];')
        for h, t in self.embedding.edges:
            u, v = sorted((self.embedding.vertex_of[h], self.embedding.vertex_of[t]))
            lines.append(f"  {self.label(u)} -- {self.label(v)};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def kind(self, v: int) -> str:
        return UNBOUNDED if v == self.inf else self.kinds[v]


def build(d: Divide) -> AugmentedIntersectionGraph:
    bl = blowup(d)
    faces = bl.faces()
    lam, _ = dual(bl)

    circle_base = 2 * (max(d.twin) + 1)
    saddle_face = {}
    for f in faces:
        circle_hs = [h for h in f.cycle if h >= circle_base]
        if f.bounded and circle_hs and len(circle_hs) == len(f.cycle):
            slot = (min(circle_hs) - circle_base) // 2
            saddle_face[f.id] = d.slot_of[slot][0]
    outer = [f.id for f in faces if not f.bounded]
    extrema = [f.id for f in faces if f.bounded and f.id not in saddle_face]

    order = sorted(saddle_face, key=saddle_face.get) + extrema
    mapping = {fid: i for i, fid in enumerate(order)}
    inf = len(order)
    mapping.update({fid: inf for fid in outer})
    raw = lam.renamed(mapping)

    kinds = {mapping[f]: SADDLE for f in saddle_face}
    kinds.update({mapping[f]: EXTREMUM for f in extrema})
    crossing_of = {mapping[f]: x for f, x in saddle_face.items()}

    by_pair = defaultdict(list)
    for h, t in raw.edges:
        u, v = raw.vertex_of[h], raw.vertex_of[t]
        if inf not in (u, v):
            by_pair[tuple(sorted((u, v)))].append(h)
    extra = [h for hs in by_pair.values() for h in sorted(hs)[1:]]
    embedding = raw
    if extra:
        logging.warning(f"Merging {len(extra)} parallel edge(s) between bounded vertices of the diagram")
        embedding = raw.delete_edges(extra)

    graph = AugmentedIntersectionGraph(embedding=embedding, raw=raw, kinds=kinds, crossing_of=crossing_of, inf=inf)
    logging.info(f"Built intersection graph: {inf} bounded vertices, {len(graph.edges())} edges")
    return graph

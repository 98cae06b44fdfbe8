import logging
from collections import namedtuple
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from divides.planar_map import PlanarMap
from lib.errors import DivideKitError, Failure

Strand = namedtuple("Strand", ["index", "kind", "half_edges", "crossings"])
RegionCensus = namedtuple("RegionCensus", ["r", "delta", "b", "circles"])
Violation = namedtuple("Violation", ["code", "detail"])

INTERVAL = "interval"
CIRCLE = "circle"

DISCONNECTED_DIAGRAM = "DisconnectedDiagram"
DISJOINT_BRANCHES = "DisjointBranches"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    circles: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]


@dataclass(frozen=True)
class Divide:
    """
    Combinatorial divide.

    `crossings` maps a crossing id to its four slot half-edges in counterclockwise order; slots
    i and i+2 lie on the same strand. `endpoints` maps an endpoint id to its single half-edge.
    `twin` pairs slot and endpoint half-edges into the edges of the divide, and `boundary`
    lists the endpoint ids counterclockwise along the disk boundary.
    """

    crossings: Dict[int, Tuple[int, int, int, int]]
    endpoints: Dict[int, int]
    twin: Dict[int, int]
    boundary: Tuple[int, ...]

    def __post_init__(self):
        self.check()

    @cached_property
    def slot_of(self) -> Dict[int, Tuple[int, int]]:
        return {h: (x, i) for x, hs in self.crossings.items() for i, h in enumerate(hs)}

    def opposite(self, h: int) -> int:
        x, i = self.slot_of[h]
        return self.crossings[x][(i + 2) % 4]

    def check(self) -> None:
        if set(self.crossings) & set(self.endpoints):
            raise DivideKitError(Failure.MALFORMED_DIVIDE, "crossing and endpoint ids overlap")
        slots = [h for hs in self.crossings.values() for h in hs]
        if any(len(hs) != 4 for hs in self.crossings.values()):
            raise DivideKitError(Failure.MALFORMED_DIVIDE, "every crossing needs exactly four half-edges")
        ends = list(self.endpoints.values())
        owned = slots + ends
        if len(set(owned)) != len(owned):
            raise DivideKitError(Failure.MALFORMED_DIVIDE, "a half-edge is attached twice")
        if set(self.twin) != set(owned):
            raise DivideKitError(Failure.MALFORMED_DIVIDE, "edges must pair exactly the crossing and endpoint half-edges")
        for h, t in self.twin.items():
            if t == h or self.twin.get(t) != h:
                raise DivideKitError(Failure.MALFORMED_DIVIDE, f"edge pairing is not an involution at {h}")
        if sorted(self.boundary) != sorted(self.endpoints):
            raise DivideKitError(Failure.MALFORMED_DIVIDE, "boundary must list every endpoint exactly once")
        if not self.endpoints:
            raise DivideKitError(Failure.MALFORMED_DIVIDE, "a divide needs at least one immersed interval")
        count, _ = self.closed_map.components()
        if count != 1:
            raise DivideKitError(Failure.MALFORMED_DIVIDE, "part of the divide never reaches the disk boundary")
        # raises MalformedMap on a non-planar rotation, e.g. interleaved disjoint strands
        try:
            self.closed_map.faces()
        except DivideKitError as e:
            raise DivideKitError(Failure.MALFORMED_DIVIDE, e.msg)

    @cached_property
    def boundary_half_edges(self) -> Tuple[Dict[int, int], Dict[int, int]]:
        """Half-edges of the boundary edges: (to next endpoint, to previous endpoint) per endpoint."""
        base = max(self.twin) + 1
        k = len(self.boundary)
        forward = {e: base + 2 * i for i, e in enumerate(self.boundary)}
        backward = {self.boundary[(i + 1) % k]: base + 2 * i + 1 for i in range(k)}
        return forward, backward

    @cached_property
    def closed_map(self) -> PlanarMap:
        """The divide with the disk boundary added as a cycle of edges through the endpoints."""
        forward, backward = self.boundary_half_edges
        rotation = {x: list(hs) for x, hs in self.crossings.items()}
        twin = dict(self.twin)
        for i, e in enumerate(self.boundary):
            rotation[e] = [forward[e], self.endpoints[e], backward[e]]
            nxt = self.boundary[(i + 1) % len(self.boundary)]
            twin[forward[e]] = backward[nxt]
            twin[backward[nxt]] = forward[e]
        first = self.boundary[0]
        return PlanarMap(
            twin=twin,
            next_at_vertex={h: hs[(i + 1) % len(hs)] for hs in rotation.values() for i, h in enumerate(hs)},
            vertex_of={h: v for v, hs in rotation.items() for h in hs},
            vertices=tuple(sorted(rotation)),
            outer=backward[first],
        )

    @cached_property
    def strands(self) -> List[Strand]:
        """Intervals in boundary order, then circles by smallest half-edge."""
        out: List[Strand] = []
        seen = set()
        position = {e: i for i, e in enumerate(self.boundary)}
        end_of = {h: e for e, h in self.endpoints.items()}
        for e in sorted(self.endpoints, key=position.get):
            h = self.endpoints[e]
            if h in seen:
                continue
            walk, crossings = [h], []
            t = self.twin[h]
            while t not in end_of:
                crossings.append(self.slot_of[t][0])
                h = self.opposite(t)
                walk.append(h)
                t = self.twin[h]
            seen.update(walk)
            seen.update(self.twin[w] for w in walk)
            out.append(Strand(len(out), INTERVAL, tuple(walk), tuple(crossings)))
        for h0 in sorted(self.slot_of):
            if h0 in seen:
                continue
            walk, crossings = [], []
            h = h0
            while True:
                walk.append(h)
                t = self.twin[h]
                crossings.append(self.slot_of[t][0])
                h = self.opposite(t)
                if h == h0:
                    break
            seen.update(walk)
            seen.update(self.twin[w] for w in walk)
            out.append(Strand(len(out), CIRCLE, tuple(walk), tuple(crossings)))
        return out

    @cached_property
    def strand_of(self) -> Dict[int, int]:
        owner = {}
        for s in self.strands:
            for h in s.half_edges:
                owner[h] = s.index
                owner[self.twin[h]] = s.index
        return owner

    @property
    def intervals(self) -> List[Strand]:
        return [s for s in self.strands if s.kind == INTERVAL]

    @property
    def circles(self) -> List[Strand]:
        return [s for s in self.strands if s.kind == CIRCLE]

    def crossing_strands(self, x: int) -> Tuple[int, int]:
        hs = self.crossings[x]
        return self.strand_of[hs[0]], self.strand_of[hs[1]]

    def nu(self) -> np.ndarray:
        """Crossings between each pair of strands; the diagonal counts self-crossings."""
        n = len(self.strands)
        nu = np.zeros((n, n), dtype=int)
        for x in self.crossings:
            i, j = self.crossing_strands(x)
            if i == j:
                nu[i, i] += 1
            else:
                nu[i, j] += 1
                nu[j, i] += 1
        return nu

    @cached_property
    def region_faces(self) -> List[int]:
        """Ids of closed-map faces that are bounded complement regions away from the disk boundary."""
        pm = self.closed_map
        boundary_hs = set(pm.twin) - set(self.twin)
        return [f.id for f in pm.faces() if f.bounded and not boundary_hs.intersection(f.cycle)]

    def region_census(self) -> RegionCensus:
        return RegionCensus(
            r=len(self.region_faces),
            delta=len(self.crossings),
            b=len(self.strands),
            circles=len(self.circles),
        )

    def diagram_adjacency(self) -> Tuple[List[Tuple[str, int]], List[Tuple[int, int]]]:
        """
        Vertices and edges of the bounded intersection diagram, read off the closed map: a
        crossing meets every region at its corners, two regions meet across a divide edge.
        """
        pm = self.closed_map
        faces = {f.id: f for f in pm.faces()}
        face_of = pm.face_index(list(faces.values()))
        regions = set(self.region_faces)
        vertices = [("s", x) for x in sorted(self.crossings)] + [("e", f) for f in sorted(regions)]
        index = {v: i for i, v in enumerate(vertices)}
        edges = set()
        for f in regions:
            for h in faces[f].cycle:
                v = pm.vertex_of[h]
                if v in self.crossings:
                    edges.add(tuple(sorted((index[("s", v)], index[("e", f)]))))
        for h, t in self.twin.items():
            a, b = face_of[h], face_of[t]
            if a != b and a in regions and b in regions:
                edges.add(tuple(sorted((index[("e", a)], index[("e", b)]))))
        return vertices, sorted(edges)

    def validate(self) -> ValidationReport:
        """Report a disconnected intersection diagram and pairs of strands that never cross."""
        report = ValidationReport(circles=len(self.circles))
        vertices, edges = self.diagram_adjacency()
        if vertices:
            n = len(vertices)
            rows = [a for a, _ in edges]
            cols = [b for _, b in edges]
            adjacency = coo_matrix((np.ones(len(edges)), (rows, cols)), shape=(n, n))
            count, _ = connected_components(adjacency, directed=False)
            if count > 1:
                report.violations.append(Violation(DISCONNECTED_DIAGRAM, f"{count} components"))
        nu = self.nu()
        for i in range(len(self.strands)):
            for j in range(i + 1, len(self.strands)):
                if nu[i, j] == 0:
                    report.violations.append(Violation(DISJOINT_BRANCHES, f"({i},{j})"))
        if report.circles:
            logging.warning(f"Divide carries {report.circles} immersed circle(s)")
        return report

    def move_sites(self) -> List[Tuple[int, int]]:
        """(half-edge, crossing) pairs where the triangle move applies."""
        pm = self.closed_map
        sites = []
        for f in pm.faces():
            if len(f.cycle) != 3 or not f.bounded:
                continue
            corners = [pm.vertex_of[h] for h in f.cycle]
            if len(set(corners)) == 3 and all(v in self.crossings for v in corners):
                sites.append((f.cycle[1], corners[0]))
        return sorted(sites)

    def admissible_move(self, edge: int, crossing: int) -> "Divide":
        """
        Push the divide edge through `edge` across `crossing`.

        The edge and the crossing must span a triangular face whose corners are three distinct
        crossings. Applying the move twice with the same arguments gives back the divide.
        """
        pm = self.closed_map
        triangle = None
        for start in (edge, self.twin.get(edge)):
            if start is None or start not in pm.twin:
                continue
            cycle = [start, pm.face_next(start), pm.face_next(pm.face_next(start))]
            if pm.face_next(cycle[2]) != start:
                continue
            corners = [pm.vertex_of[h] for h in cycle]
            if crossing in corners and len(set(corners)) == 3 and all(v in self.crossings for v in corners):
                triangle = cycle
                break
        if triangle is None:
            raise DivideKitError(Failure.MOVE_NOT_APPLICABLE, f"edge {edge} and crossing {crossing} span no triangle")

        # g[i] runs from corner i to corner i+1 with the triangle on its left; o[i] and u[i] are
        # the outward slots at corner i on the strands of g[i] and g[i-1]
        g = triangle
        o = [self.opposite(g[i]) for i in range(3)]
        u = [self.opposite(self.twin[g[i - 1]]) for i in range(3)]
        ext = set(o) | set(u)

        # flipping the triangle swaps the two outer ends of each of its three strands
        relocated = {}
        for i in range(3):
            relocated[u[(i + 1) % 3]] = o[i]
            relocated[o[(i - 1) % 3]] = u[i]

        twin = dict(self.twin)
        for old, new in relocated.items():
            far = self.twin[old]
            target = relocated[far] if far in ext else far
            twin[new] = target
            twin[target] = new
        moved = Divide(crossings=dict(self.crossings), endpoints=dict(self.endpoints), twin=twin, boundary=self.boundary)
        logging.debug(f"Moved edge {edge} across crossing {crossing}")
        return moved

    def relabel(self, offset: int) -> "Divide":
        return Divide(
            crossings={x: tuple(h + offset for h in hs) for x, hs in self.crossings.items()},
            endpoints={e: h + offset for e, h in self.endpoints.items()},
            twin={h + offset: t + offset for h, t in self.twin.items()},
            boundary=self.boundary,
        )

    @classmethod
    def from_polylines(cls, polylines, name: Optional[str] = None) -> "Divide":
        from divides.polylines import divide_from_polylines

        return divide_from_polylines(polylines, name=name)

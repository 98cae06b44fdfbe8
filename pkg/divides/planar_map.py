import logging
from collections import namedtuple
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from lib.errors import DivideKitError, Failure

# a face is the cycle of half-edges that keep it on their left
Face = namedtuple("Face", ["id", "cycle", "bounded", "vertex"])


@dataclass(frozen=True)
class PlanarMap:
    """
    Combinatorial map given by a rotation system.

    Half-edges are integers. `next_at_vertex` is the counterclockwise successor of a half-edge
    around the vertex it leaves, `twin` pairs the two halves of an edge. `outer` names a
    half-edge on the unbounded face; when it is None every face of the map counts as bounded
    (a map on the sphere).
    """

    twin: Dict[int, int]
    next_at_vertex: Dict[int, int]
    vertex_of: Dict[int, int]
    vertices: Tuple[int, ...]
    outer: Optional[int] = None
    _prev: Dict[int, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self._prev.update({nxt: h for h, nxt in self.next_at_vertex.items()})

    @classmethod
    def from_rotations(
        cls,
        rotation: Mapping[int, Sequence[int]],
        twin: Mapping[int, int],
        outer: Optional[int] = None,
    ) -> "PlanarMap":
        next_at_vertex = {}
        vertex_of = {}
        for v, hs in rotation.items():
            for i, h in enumerate(hs):
                if h in vertex_of:
                    raise DivideKitError(Failure.MALFORMED_MAP, f"half-edge {h} appears twice in the rotation")
                vertex_of[h] = v
                next_at_vertex[h] = hs[(i + 1) % len(hs)]
        pm = cls(
            twin=dict(twin),
            next_at_vertex=next_at_vertex,
            vertex_of=vertex_of,
            vertices=tuple(sorted(rotation)),
            outer=outer,
        )
        pm.check()
        return pm

    @property
    def half_edges(self) -> List[int]:
        return sorted(self.twin)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return [(h, t) for h, t in sorted(self.twin.items()) if h < t]

    def prev_at_vertex(self, h: int) -> int:
        return self._prev[h]

    def rotation(self, v: int) -> List[int]:
        """Half-edges leaving `v` in counterclockwise order, starting from the smallest id."""
        return self._walk([h for h, u in self.vertex_of.items() if u == v])

    def _walk(self, hs: List[int]) -> List[int]:
        if not hs:
            return []
        start = min(hs)
        out = [start]
        h = self.next_at_vertex[start]
        while h != start:
            out.append(h)
            h = self.next_at_vertex[h]
        return out

    def rotations(self) -> Dict[int, List[int]]:
        by_vertex: Dict[int, List[int]] = {v: [] for v in self.vertices}
        for h in self.half_edges:
            by_vertex[self.vertex_of[h]].append(h)
        return {v: self._walk(hs) for v, hs in by_vertex.items()}

    def degree(self, v: int) -> int:
        return sum(1 for u in self.vertex_of.values() if u == v)

    def head(self, h: int) -> int:
        return self.vertex_of[self.twin[h]]

    def face_next(self, h: int) -> int:
        return self._prev[self.twin[h]]

    def face_prev(self, h: int) -> int:
        return self.twin[self.next_at_vertex[h]]

    def check(self) -> None:
        for h, t in self.twin.items():
            if t == h or self.twin.get(t) != h:
                raise DivideKitError(Failure.MALFORMED_MAP, f"twin is not a fixed-point-free involution at {h}")
        if set(self.next_at_vertex) != set(self.twin) or set(self.next_at_vertex.values()) != set(self.twin):
            raise DivideKitError(Failure.MALFORMED_MAP, "rotation is not a permutation of the half-edges")
        for h, nxt in self.next_at_vertex.items():
            if self.vertex_of[h] != self.vertex_of[nxt]:
                raise DivideKitError(Failure.MALFORMED_MAP, f"rotation at {h} leaves its vertex")
        stray = set(self.vertex_of.values()) - set(self.vertices)
        if stray:
            raise DivideKitError(Failure.MALFORMED_MAP, f"half-edges at undeclared vertices {sorted(stray)}")
        if self.outer is not None and self.outer not in self.twin:
            raise DivideKitError(Failure.MALFORMED_MAP, f"outer half-edge {self.outer} is not in the map")

    def components(self) -> Tuple[int, Dict[int, int]]:
        """Connected components as (count, vertex -> label)."""
        index = {v: i for i, v in enumerate(self.vertices)}
        rows = [index[self.vertex_of[h]] for h in self.half_edges]
        cols = [index[self.head(h)] for h in self.half_edges]
        n = len(self.vertices)
        adjacency = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
        count, labels = connected_components(adjacency, directed=False)
        return count, {v: int(labels[index[v]]) for v in self.vertices}

    def _face_cycles(self) -> List[Tuple[int, ...]]:
        seen: Set[int] = set()
        cycles = []
        for h in self.half_edges:
            if h in seen:
                continue
            cycle = [h]
            seen.add(h)
            nxt = self.face_next(h)
            while nxt != h:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self.face_next(nxt)
            cycles.append(tuple(cycle))
        return cycles

    def faces(self) -> List[Face]:
        """
        Enumerate the faces of the map.

        Every isolated vertex contributes one empty face. In the component holding `outer` the
        face through it is unbounded; in any other component of a map with an outer face the
        longest face is taken as unbounded.
        """
        _, label = self.components()
        cycles = self._face_cycles()
        raw = [(cycle, label[self.vertex_of[cycle[0]]], None) for cycle in cycles]
        used = set(self.vertex_of.values())
        isolated = [v for v in self.vertices if v not in used]
        raw.extend(((), label[v], v) for v in isolated)

        unbounded: Set[int] = set()
        if self.outer is not None:
            outer_label = label[self.vertex_of[self.outer]]
            by_label: Dict[int, List[int]] = {}
            for i, (cycle, lab, _) in enumerate(raw):
                by_label.setdefault(lab, []).append(i)
            for lab, idx in by_label.items():
                if lab == outer_label:
                    unbounded.update(i for i in idx if self.outer in raw[i][0])
                else:
                    unbounded.add(max(idx, key=lambda i: (len(raw[i][0]), -min(raw[i][0], default=0))))

        faces = [Face(i, cycle, i not in unbounded, v) for i, (cycle, _, v) in enumerate(raw)]
        self.euler_check(faces)
        return faces

    def face_index(self, faces: Optional[List[Face]] = None) -> Dict[int, int]:
        faces = faces if faces is not None else self.faces()
        return {h: f.id for f in faces for h in f.cycle}

    def euler_check(self, faces: List[Face]) -> None:
        count, label = self.components()
        v_count = np.zeros(count, dtype=int)
        e_count = np.zeros(count, dtype=int)
        f_count = np.zeros(count, dtype=int)
        for v in self.vertices:
            v_count[label[v]] += 1
        for h, _ in self.edges:
            e_count[label[self.vertex_of[h]]] += 1
        for f in faces:
            vertex = f.vertex if f.vertex is not None else self.vertex_of[f.cycle[0]]
            f_count[label[vertex]] += 1
        euler = v_count - e_count + f_count
        if np.any(euler != 2):
            raise DivideKitError(
                Failure.MALFORMED_MAP, f"Euler characteristic per component is {euler.tolist()}, expected 2"
            )

    def renamed(self, mapping: Mapping[int, int]) -> "PlanarMap":
        return PlanarMap(
            twin=dict(self.twin),
            next_at_vertex=dict(self.next_at_vertex),
            vertex_of={h: mapping[v] for h, v in self.vertex_of.items()},
            vertices=tuple(sorted({mapping[v] for v in self.vertices})),
            outer=self.outer,
        )

    def neighbors(self, v: int) -> List[int]:
        return sorted({self.head(h) for h in self.rotation(v)})

    def delete_edges(self, doomed: Iterable[int]) -> "PlanarMap":
        """Remove the edges through the given half-edges; the outer marker follows the merged face."""
        gone: Set[int] = set()
        for h in doomed:
            gone.update((h, self.twin[h]))
        rotation = {v: [h for h in hs if h not in gone] for v, hs in self.rotations().items()}
        twin = {h: t for h, t in self.twin.items() if h not in gone}
        return PlanarMap.from_rotations(rotation, twin, self._surviving_outer(gone))

    def delete_vertices(self, doomed: Iterable[int]) -> "PlanarMap":
        doomed = set(doomed)
        gone = {h for h, v in self.vertex_of.items() if v in doomed}
        gone |= {self.twin[h] for h in gone}
        rotation = {v: [h for h in hs if h not in gone] for v, hs in self.rotations().items() if v not in doomed}
        twin = {h: t for h, t in self.twin.items() if h not in gone}
        outer = self.outer
        if outer is None and gone:
            # the removed vertex was a face of the surrounding sphere map
            outer = min(gone)
        return PlanarMap.from_rotations(rotation, twin, self._surviving_outer(gone, outer))

    def _surviving_outer(self, gone: Set[int], outer: Optional[int] = None) -> Optional[int]:
        outer = self.outer if outer is None else outer
        if outer is None or outer not in gone:
            return outer
        # walk the old face until a half-edge survives; fall back to its rotation neighbours
        h = outer
        for _ in range(len(self.twin)):
            h = self.face_next(h)
            if h not in gone:
                return h
            back = self._prev[h]
            while back != h:
                if back not in gone:
                    return back
                back = self._prev[back]
        logging.debug("outer face vanished with the deleted edges")
        return None


def dual(pm: PlanarMap, skip_self_adjacent: bool = True) -> Tuple[PlanarMap, Dict[int, int]]:
    """
    Planar dual as a sphere map.

    Dual half-edge `h` leaves the face to the left of primal `h`. Edges whose two sides lie on
    the same face are dropped when `skip_self_adjacent` is set. Returns the dual and the
    correspondence face id -> dual vertex id (they coincide).
    """
    faces = pm.faces()
    face_of = pm.face_index(faces)
    kept = {h for h in pm.half_edges if not skip_self_adjacent or face_of[h] != face_of[pm.twin[h]]}
    rotation: Dict[int, List[int]] = {}
    for f in faces:
        rotation[f.id] = [h for h in f.cycle if h in kept]
    twin = {h: pm.twin[h] for h in kept}
    return PlanarMap.from_rotations(rotation, twin), {f.id: f.id for f in faces}


def unbounded_faces(pm: PlanarMap) -> List[int]:
    return [f.id for f in pm.faces() if not f.bounded]


def bounded_dual(pm: PlanarMap) -> PlanarMap:
    """Dual with the vertices of unbounded faces and their edges removed."""
    d, _ = dual(pm)
    return d.delete_vertices(unbounded_faces(pm))

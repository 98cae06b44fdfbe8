import json
from collections import deque, namedtuple
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from divides.assemblage import isotopic_divides
from divides.divide import Divide
from divides.formats import parse_polylines
from divides.intersection_graph import build
from divides.polylines import Polyline
from divides.toggle import parse_script
from generators.chebyshev import chebyshev_divide
from generators.family import FamilySpec
from lib.errors import DivideKitError, Failure

DATA_DIR = Path(__file__).parent / "data"

GraphFixture = namedtuple("GraphFixture", ["name", "adjacency", "script", "expected", "caption", "source"])
FixtureSource = namedtuple("FixtureSource", ["family", "params", "moves"])

GRAPH_FIXTURES = [
    "dual37",
    "dual38",
    "case39",
    "mult32branches",
    "mult3branch3cases",
    "case1",
    "case2",
    "case3",
    "case4",
    "case5",
]
POLYLINE_FIXTURES = ["disconnected", "disjoint"]
SOURCE_FAMILIES = {"chebyshev": chebyshev_divide}


def fixture_names() -> List[str]:
    return GRAPH_FIXTURES + POLYLINE_FIXTURES


def tripod_adjacency(branches: List[List[int]], chords: List[List[int]]) -> Dict[int, Set[int]]:
    """Tripod centred at 0 with the listed branches, plus extra edges."""
    adj: Dict[int, Set[int]] = {0: set()}
    edges = [pair for b in branches for pair in zip([0] + b, b)] + [tuple(c) for c in chords]
    for u, w in edges:
        adj.setdefault(u, set()).add(w)
        adj.setdefault(w, set()).add(u)
    return adj


def fixture_text(name: str) -> str:
    if name in GRAPH_FIXTURES:
        path = DATA_DIR / f"{name}.json"
    elif name in POLYLINE_FIXTURES:
        path = DATA_DIR / f"{name}.poly"
    else:
        raise DivideKitError(Failure.UNKNOWN_FIXTURE, f"{name!r}; known fixtures are {', '.join(fixture_names())}")
    return path.read_text()


def load_graph_fixture(name: str) -> GraphFixture:
    if name not in GRAPH_FIXTURES:
        raise DivideKitError(Failure.UNKNOWN_FIXTURE, f"{name!r} is not an intersection-graph fixture")
    raw = json.loads(fixture_text(name))
    return GraphFixture(
        name=raw["name"],
        adjacency=tripod_adjacency(raw["branches"], raw["chords"]),
        script=parse_script(raw["script"]),
        expected=tuple(sorted(raw["tripod"])),
        caption=raw["caption"],
        source=FixtureSource(**raw["source"]) if "source" in raw else None,
    )


def load_polyline_fixture(name: str) -> List[Polyline]:
    if name not in POLYLINE_FIXTURES:
        raise DivideKitError(Failure.UNKNOWN_FIXTURE, f"{name!r} is not a polyline fixture")
    return parse_polylines(fixture_text(name))


def load_fixture_divide(name: str) -> Divide:
    return Divide.from_polylines(load_polyline_fixture(name), name=name)


FIXTURE_FAMILY = FamilySpec("fixture", ("id",), (), fixture_text, "fixture")


def induced_copy(pattern: Mapping[int, Iterable[int]], host: Mapping[int, Iterable[int]]) -> Optional[Dict[int, int]]:
    """Map from pattern vertices to host vertices whose image spans exactly the pattern's edges, if any."""
    pat = {v: set(ws) for v, ws in pattern.items()}
    hst = {v: set(ws) for v, ws in host.items()}
    order: List[int] = []
    for start in sorted(pat, key=lambda v: (-len(pat[v]), v)):
        if start in order:
            continue
        order.append(start)
        queue = deque([start])
        while queue:
            for w in sorted(pat[queue.popleft()]):
                if w not in order:
                    order.append(w)
                    queue.append(w)

    def extend(mapping: Dict[int, int]) -> Optional[Dict[int, int]]:
        if len(mapping) == len(order):
            return dict(mapping)
        v = order[len(mapping)]
        used = set(mapping.values())
        for x in sorted(hst):
            if x in used or len(hst[x]) < len(pat[v]):
                continue
            if any((w in pat[v]) != (mapping[w] in hst[x]) for w in mapping):
                continue
            mapping[v] = x
            found = extend(mapping)
            if found is not None:
                return found
            del mapping[v]
        return None

    return extend({})


def locate_fixture(name: str) -> Optional[Tuple[Tuple[Tuple[int, int], ...], Dict[int, int]]]:
    """
    Find a fixture inside the diagram it was taken from.

    Returns the triangle moves applied to the source divide and the placement of the fixture's
    vertices among its diagram vertices, or None when the fixture records no source.
    """
    fixture = load_graph_fixture(name)
    if fixture.source is None:
        return None
    if fixture.source.family not in SOURCE_FAMILIES:
        raise DivideKitError(Failure.UNKNOWN_FIXTURE, f"{name} comes from unknown family {fixture.source.family!r}")
    d = SOURCE_FAMILIES[fixture.source.family](*fixture.source.params)
    for moves, moved in isotopic_divides(d, fixture.source.moves):
        placement = induced_copy(fixture.adjacency, build(moved).adjacency)
        if placement is not None:
            return moves, placement
    raise DivideKitError(
        Failure.MODEL_MISMATCH,
        f"{name} is not an induced subgraph of {fixture.source.family}{tuple(fixture.source.params)}",
    )

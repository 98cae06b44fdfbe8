import json

import pytest

from divides.intersection_graph import EXTREMUM, SADDLE, UNBOUNDED, blowup, build
from divides.invariants import record_from_divide
from generators.chebyshev import chebyshev_divide
from generators.lines import generic_lines


@pytest.fixture(scope="module")
def a2_graph():
    return build(chebyshev_divide(2, 3))


def test_blowup__four_vertices_per_crossing() -> None:
    d = generic_lines(3)
    bl = blowup(d)
    assert len(bl.vertices) == 4 * len(d.crossings) + len(d.endpoints)
    bl.check()


def test_build__a2_vertices(a2_graph) -> None:
    assert a2_graph.mu == 2
    assert [a2_graph.kind(v) for v in range(3)] == [SADDLE, EXTREMUM, UNBOUNDED]
    assert [a2_graph.label(v) for v in range(3)] == ["s0", "e0", "inf"]
    assert a2_graph.edges() == [(0, 1)]


def test_face_census__a2(a2_graph) -> None:
    assert a2_graph.face_census() == (2, 2)


@pytest.mark.parametrize("p, q", [(2, 5), (3, 4), (3, 5), (2, 7)])
def test_face_census__coprime_chebyshev(p, q) -> None:
    delta = (p - 1) * (q - 1) // 2
    assert build(chebyshev_divide(p, q)).face_census() == (2, 4 * delta - 2)


def test_build__mu_matches_invariants() -> None:
    d = generic_lines(4)
    assert build(d).mu == record_from_divide(d).mu


def test_build__saddles_touch_only_extrema() -> None:
    graph = build(chebyshev_divide(3, 4))
    for u, w in graph.edges():
        assert {graph.kind(u), graph.kind(w)} != {SADDLE}
    assert len(graph.edges()) == 9


def test_to_json__shape(a2_graph) -> None:
    payload = json.loads(a2_graph.to_json())
    assert [v["kind"] for v in payload["vertices"]] == [SADDLE, EXTREMUM, UNBOUNDED]
    assert payload["edges"] == [[0, 1]]
    assert set(payload["rotation"]) == {"0", "1", "2"}


def test_to_dot__labels(a2_graph) -> None:
    dot = a2_graph.to_dot()
    assert dot.startswith("graph intersection {")
    assert "s0 -- e0;" in dot
    assert 'inf [kind="unbounded"];' in dot

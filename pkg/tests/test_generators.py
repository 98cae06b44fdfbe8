from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from divides.assemblage import apply_moves
from divides.fiber import build_fiber
from divides.framing import WindingFunction, admissible
from divides.intersection_graph import build
from divides.invariants import record_from_divide
from divides.polylines import on_boundary
from divides.toggle import classify_tripod
from generators.chebyshev import billiard_polylines, chebyshev_divide
from generators.diagrams import an_diagram, dn_diagram
from generators.families import Families
from generators.fixtures import (
    GRAPH_FIXTURES,
    fixture_names,
    fixture_text,
    induced_copy,
    load_graph_fixture,
    load_polyline_fixture,
    locate_fixture,
    tripod_adjacency,
)
from generators.lines import tangent_lines
from generators.pencil import _meet, deformed_pencil, pencil_lines, pentagram
from lib.errors import DivideKitError, Failure


def test_billiard_polylines__a2() -> None:
    lines = billiard_polylines(2, 3)
    assert [pl.closed for pl in lines] == [False]
    ends = lines[0].points[0], lines[0].points[-1]
    assert all(on_boundary(p) for p in ends)
    assert all(0 <= c <= 1 for p in lines[0].points for c in p)


def test_billiard_polylines__square_has_circle() -> None:
    assert sorted(pl.closed for pl in billiard_polylines(3, 3)) == [False, True]


@pytest.mark.parametrize("p, q", [(1, 3), (3, 1), (0, 0)])
def test_chebyshev_divide__bad_params(p, q) -> None:
    with pytest.raises(DivideKitError) as e:
        chebyshev_divide(p, q)
    assert e.value.error_type == Failure.BAD_PARAMS


@pytest.mark.parametrize("p, q", [(2, 5), (3, 5), (4, 5), (3, 8)])
def test_chebyshev_divide__one_branch(p, q) -> None:
    d = chebyshev_divide(p, q)
    assert len(d.strands) == 1
    assert d.validate().ok


def test_chebyshev_divide__symmetric_in_p_and_q() -> None:
    assert record_from_divide(chebyshev_divide(3, 7)).mu == record_from_divide(chebyshev_divide(7, 3)).mu == 12


def test_tangent_lines__too_few() -> None:
    with pytest.raises(DivideKitError) as e:
        tangent_lines(1)
    assert e.value.error_type == Failure.BAD_PARAMS


def test_pentagram__rational_points_on_circle() -> None:
    for line in pentagram(5):
        x, y = line.point
        assert x * x + y * y == 1
        assert isinstance(x, Fraction)


def test_pencil_lines__too_few() -> None:
    with pytest.raises(DivideKitError) as e:
        pencil_lines(4)
    assert e.value.error_type == Failure.BAD_PARAMS


@pytest.mark.parametrize("m", [5, 6])
def test_deformed_pencil__lines_in_general_position(m) -> None:
    d = deformed_pencil(m)
    record = record_from_divide(d)
    assert (record.mu, record.b) == ((m - 1) ** 2, m)
    assert np.array_equal(d.nu(), np.ones((m, m), dtype=int) - np.eye(m, dtype=int))


@pytest.mark.parametrize("m", [6, 7])
def test_pencil_lines__extra_crossings_stay_off_the_star(m) -> None:
    lines = pencil_lines(m)
    star = [_meet(a, b) for a, b in combinations(lines[:5], 2)]
    extra = [_meet(lines[i], lines[j]) for i, j in combinations(range(m), 2) if j >= 5]
    reach = max(max(abs(x), abs(y)) for x, y in star)
    assert len(extra) == m * (m - 1) // 2 - 10
    assert all(max(abs(x), abs(y)) > reach + 1 for x, y in extra)


def test_an_diagram__chain() -> None:
    assert an_diagram(3) == {0: {1}, 1: {0, 2}, 2: {1}}
    with pytest.raises(DivideKitError):
        an_diagram(0)


def test_dn_diagram__tripod() -> None:
    assert dn_diagram(5) == {0: {1, 2, 3}, 1: {0}, 2: {0}, 3: {0, 4}, 4: {3}}
    with pytest.raises(DivideKitError) as e:
        dn_diagram(3)
    assert e.value.error_type == Failure.BAD_PARAMS


def test_tripod_adjacency__chords() -> None:
    adj = tripod_adjacency([[1], [2, 3]], [[1, 3]])
    assert adj == {0: {1, 2}, 1: {0, 3}, 2: {0, 3}, 3: {2, 1}}


def test_fixture_names() -> None:
    assert len(fixture_names()) == 12
    assert fixture_names()[: len(GRAPH_FIXTURES)] == GRAPH_FIXTURES


def test_fixture_text__unknown() -> None:
    with pytest.raises(DivideKitError) as e:
        fixture_text("case9")
    assert e.value.error_type == Failure.UNKNOWN_FIXTURE


def test_load_graph_fixture__case2() -> None:
    fixture = load_graph_fixture("case2")
    assert fixture.expected == (1, 4, 4)
    assert fixture.script == [(3, 4), (8, 9)]
    assert len(fixture.adjacency) == 10


def test_load_fixture__wrong_kind() -> None:
    with pytest.raises(DivideKitError) as e:
        load_graph_fixture("disjoint")
    assert e.value.error_type == Failure.UNKNOWN_FIXTURE
    with pytest.raises(DivideKitError) as e:
        load_polyline_fixture("case2")
    assert e.value.error_type == Failure.UNKNOWN_FIXTURE


def test_load_polyline_fixture__disjoint() -> None:
    assert [pl.closed for pl in load_polyline_fixture("disjoint")] == [False, False, False]


def test_families__mapping() -> None:
    assert sorted(Families.mapping) == ["an", "chebyshev", "dn", "fixture", "lines", "pencil"]
    assert Families.mapping["pencil"] is Families.PENCIL


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_chebyshev_divide__two_gives_chain(q) -> None:
    adjacency = build(chebyshev_divide(2, q)).adjacency
    assert len(adjacency) == q - 1
    assert all(len(ws) <= 2 for ws in adjacency.values())
    assert sum(len(ws) for ws in adjacency.values()) == 2 * (q - 2)
    assert classify_tripod(adjacency) is None


def test_deformed_pencil__distinguished_cycles_admissible() -> None:
    fiber = build_fiber(deformed_pencil(5))
    wf = WindingFunction(fiber)
    assert all(admissible(fiber, fiber.curve(v), wf) for v in range(fiber.mu))


def test_induced_copy__needs_missing_edges_too() -> None:
    k4 = {v: {w for w in range(4) if w != v} for v in range(4)}
    assert induced_copy(an_diagram(3), k4) is None
    assert induced_copy(an_diagram(3), an_diagram(6)) == {0: 0, 1: 1, 2: 2}
    assert induced_copy(dn_diagram(5), an_diagram(9)) is None


@pytest.mark.parametrize("name, p, q, moves", [("case39", 3, 9, 0), ("dual37", 3, 7, 1)])
def test_locate_fixture__induced_in_its_diagram(name, p, q, moves) -> None:
    fixture = load_graph_fixture(name)
    assert (fixture.source.params, fixture.source.moves) == ([p, q], moves)
    found, placement = locate_fixture(name)
    assert len(found) == moves
    host = build(apply_moves(chebyshev_divide(p, q), found)).adjacency
    image = set(placement.values())
    assert len(image) == 10
    for v, ws in fixture.adjacency.items():
        assert host[placement[v]] & image == {placement[w] for w in ws}


def test_locate_fixture__dual37_needs_the_move() -> None:
    fixture = load_graph_fixture("dual37")
    assert induced_copy(fixture.adjacency, build(chebyshev_divide(3, 7)).adjacency) is None


def test_locate_fixture__synthetic_cases() -> None:
    assert load_graph_fixture("case2").source is None
    assert locate_fixture("case2") is None

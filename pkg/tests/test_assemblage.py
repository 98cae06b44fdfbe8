import dataclasses
import json

import pytest

from divides.assemblage import (
    ColoredState,
    Core,
    apply_moves,
    assemble,
    assemble_divide,
    connected_subsets,
    detect_core,
    find_core,
    find_legal,
    is_legal,
    isotopic_divides,
    replay,
    replay_divide,
    tangent_space,
)
from divides.fiber import build_fiber
from generators.chebyshev import chebyshev_divide
from generators.diagrams import an_diagram, dn_diagram
from generators.fixtures import load_graph_fixture
from generators.pencil import deformed_pencil
from divides.toggle import TRIPOD_TYPES
from job.audit import certificate_problems, random_colored
from lib.errors import DivideKitError, Failure

K4 = {v: {w for w in range(4) if w != v} for v in range(4)}


@pytest.fixture(scope="module")
def a2_fiber():
    return build_fiber(chebyshev_divide(2, 3))


@pytest.fixture(scope="module")
def e6_fiber():
    return build_fiber(chebyshev_divide(3, 4))


@pytest.fixture(scope="module")
def certified():
    fiber = build_fiber(chebyshev_divide(3, 10))
    return fiber, assemble(fiber)


def test_colored_state__rejects() -> None:
    graph = build_fiber(chebyshev_divide(2, 3)).graph
    for colored in (frozenset(), frozenset({2}), frozenset({7})):
        with pytest.raises(DivideKitError) as e:
            ColoredState(graph, colored)
        assert e.value.error_type == Failure.DIMENSION_MISMATCH


def test_colored_state__disconnected(e6_fiber) -> None:
    graph = e6_fiber.graph
    u = 0
    far = next(v for v in graph.bounded_vertices if v != u and v not in graph.adjacency[u])
    with pytest.raises(DivideKitError) as e:
        ColoredState(graph, frozenset({u, far}))
    assert e.value.error_type == Failure.DIMENSION_MISMATCH


def test_tangent_space__a2(a2_fiber) -> None:
    cycle = tangent_space(a2_fiber.graph, 1, {0})
    assert 0 in cycle.neighbors
    assert a2_fiber.graph.inf in cycle.neighbors
    assert cycle.colored == tuple(w == 0 for w in cycle.neighbors)


def test_is_legal__a2(a2_fiber) -> None:
    verdict = is_legal(ColoredState(a2_fiber.graph, frozenset({0})), 1)
    assert verdict.legal
    assert (verdict.components, verdict.u_empty) == (1, False)


def test_is_legal__colored_vertex(a2_fiber) -> None:
    with pytest.raises(DivideKitError) as e:
        is_legal(ColoredState(a2_fiber.graph, frozenset({0})), 0)
    assert e.value.error_type == Failure.DIMENSION_MISMATCH


def test_is_legal__matches_fiber(e6_fiber, rng) -> None:
    graph = e6_fiber.graph
    for _ in range(40):
        colored = random_colored(graph, rng)
        for v in graph.bounded_vertices:
            if v in colored:
                continue
            verdict = is_legal(ColoredState(graph, frozenset(colored)), v)
            assert (verdict.components, verdict.u_empty) == e6_fiber.curve_pieces(colored, v)


def test_find_legal__always_attaches(e6_fiber, rng) -> None:
    graph = e6_fiber.graph
    for _ in range(40):
        colored = random_colored(graph, rng)
        state = ColoredState(graph, frozenset(colored))
        v = find_legal(state)
        assert v not in colored
        assert is_legal(state, v).legal


def test_connected_subsets__complete_graph() -> None:
    assert sorted(connected_subsets(K4, 2)) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert len(list(connected_subsets(K4, 3))) == 4


def test_connected_subsets__path() -> None:
    assert list(connected_subsets(an_diagram(5), 3)) == [(0, 1, 2), (1, 2, 3), (2, 3, 4)]


@pytest.mark.parametrize("n", [4, 9, 10, 20])
def test_detect_core__a_and_d_have_none(n) -> None:
    assert detect_core(an_diagram(n)) is None
    assert detect_core(dn_diagram(n)) is None


def test_detect_core__tripod_fixture() -> None:
    core = detect_core(load_graph_fixture("dual38").adjacency)
    assert core.kind == (1, 2, 6)
    assert core.vertices[0] == 0
    assert sorted(core.vertices) == list(range(10))


def test_detect_core__pencil() -> None:
    fiber = build_fiber(deformed_pencil(5))
    core = detect_core(fiber.graph.adjacency, fiber)
    assert core.kind == (1, 2, 6)


def test_assemble__a2_from_one_curve(a2_fiber) -> None:
    certificate = assemble(a2_fiber, Core((0,), None, ()))
    assert [s.vertex for s in certificate.steps] == [1]
    assert certificate.final == (1, 1)
    replay(certificate, a2_fiber)


def test_assemble__chebyshev_3_10(certified) -> None:
    fiber, certificate = certified
    assert certificate.core_type == (1, 2, 6)
    assert certificate.final == (9, 1)
    assert len(certificate.core) + len(certificate.steps) == fiber.mu
    replay(certificate, fiber)


def test_assemble__genus_never_drops(certified) -> None:
    _, certificate = certified
    genera = [s.genus for s in certificate.steps]
    assert genera == sorted(genera)
    assert genera[0] >= 5


def test_to_json__keys(certified) -> None:
    _, certificate = certified
    payload = json.loads(certificate.to_json())
    assert set(payload) == {"moves", "core", "core_type", "script", "steps", "final"}
    assert payload["moves"] == []
    assert payload["core_type"] == "(1,2,6)"
    assert payload["final"] == {"genus": 9, "boundary": 1}
    assert set(payload["steps"][0]) == {"vertex", "components", "absorbed", "genus", "boundary"}


def test_replay__tampered_final(certified) -> None:
    fiber, certificate = certified
    with pytest.raises(DivideKitError) as e:
        replay(dataclasses.replace(certificate, final=(8, 3)), fiber)
    assert e.value.error_type == Failure.REPLAY_MISMATCH


def test_replay__tampered_step(certified) -> None:
    fiber, certificate = certified
    steps = list(certificate.steps)
    steps[0] = steps[0]._replace(genus=steps[0].genus + 1)
    with pytest.raises(DivideKitError) as e:
        replay(dataclasses.replace(certificate, steps=steps), fiber)
    assert e.value.error_type == Failure.REPLAY_MISMATCH


def test_replay__missing_step(certified) -> None:
    fiber, certificate = certified
    with pytest.raises(DivideKitError) as e:
        replay(dataclasses.replace(certificate, steps=certificate.steps[:-1]), fiber)
    assert e.value.error_type == Failure.REPLAY_MISMATCH


def test_assemble__a2_has_no_core(a2_fiber) -> None:
    with pytest.raises(DivideKitError) as e:
        assemble(a2_fiber)
    assert e.value.error_type == Failure.NO_CORE
    with pytest.raises(DivideKitError) as e:
        find_core(chebyshev_divide(2, 3))
    assert e.value.error_type == Failure.NO_CORE


def test_certificate_problems__needs_a_tripod(a2_fiber) -> None:
    certificate = assemble(a2_fiber, Core((0,), None, ()))
    assert certificate_problems(certificate, a2_fiber)[0] == "core type None is no tripod"


def test_isotopic_divides__breadth_first() -> None:
    d = chebyshev_divide(4, 5)
    reached = list(isotopic_divides(d, 2))
    assert reached[0] == ((), d)
    assert [len(moves) for moves, _ in reached] == sorted(len(moves) for moves, _ in reached)
    assert len({frozenset(moved.twin.items()) for _, moved in reached}) == len(reached)
    for moves, moved in reached:
        assert apply_moves(d, moves).twin == moved.twin
        assert len(moved.crossings) == len(d.crossings)


def test_assemble_divide__chebyshev_4_5_needs_a_move() -> None:
    d = chebyshev_divide(4, 5)
    assert detect_core(build_fiber(d).graph.adjacency) is None
    fiber, certificate = assemble_divide(d)
    assert len(certificate.moves) == 1
    assert certificate.core_type in TRIPOD_TYPES
    assert certificate.script == ()
    assert certificate.final == (6, 1)
    assert len(certificate.core) + len(certificate.steps) == fiber.mu == 12
    assert certificate_problems(certificate, fiber) == []
    replay_divide(certificate, d)
    payload = json.loads(certificate.to_json())
    assert [tuple(m.values()) for m in payload["moves"]] == [tuple(m) for m in certificate.moves]


def test_replay_divide__without_the_moves() -> None:
    d = chebyshev_divide(4, 5)
    _, certificate = assemble_divide(d)
    with pytest.raises(DivideKitError) as e:
        replay_divide(dataclasses.replace(certificate, moves=()), d)
    assert e.value.error_type == Failure.REPLAY_MISMATCH

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from divides.fiber import abstract_tree_surface, build_fiber
from generators.chebyshev import chebyshev_divide
from generators.diagrams import an_diagram, dn_diagram
from generators.fixtures import tripod_adjacency
from job.helpers import build_family
from lib.errors import DivideKitError, Failure


@pytest.fixture(scope="module")
def a2_fiber():
    return build_fiber(chebyshev_divide(2, 3))


def test_build_fiber__a2(a2_fiber) -> None:
    assert (a2_fiber.genus, a2_fiber.boundary, a2_fiber.chi) == (1, 1, -1)
    assert a2_fiber.mu == 2


def test_build_fiber__form_is_skew(a2_fiber) -> None:
    assert np.array_equal(a2_fiber.form, -a2_fiber.form.T)
    assert abs(a2_fiber.pairing(0, 1)) == 1


@pytest.mark.parametrize("family, params, genus, boundary", [("chebyshev", ["3", "7"], 6, 1), ("lines", ["4"], 3, 4)])
def test_build_fiber__genus_and_boundary(family, params, genus, boundary) -> None:
    fiber = build_fiber(build_family(family, params))
    assert (fiber.genus, fiber.boundary) == (genus, boundary)


def test_subsurface__single_curve_is_annulus(a2_fiber) -> None:
    s = a2_fiber.subsurface([0])
    assert (s.chi, s.boundary, s.genus, s.components) == (0, 2, 0, 1)


def test_subsurface__everything(a2_fiber) -> None:
    s = a2_fiber.subsurface([0, 1])
    assert (s.genus, s.boundary) == (1, 1)
    assert s.crossings == ((0, 1),)


def test_subsurface__unknown_vertex(a2_fiber) -> None:
    with pytest.raises(DivideKitError) as e:
        a2_fiber.subsurface([2])
    assert e.value.error_type == Failure.DIMENSION_MISMATCH


def test_curve__inf_has_no_cycle(a2_fiber) -> None:
    with pytest.raises(DivideKitError) as e:
        a2_fiber.curve(2)
    assert e.value.error_type == Failure.DIMENSION_MISMATCH


def test_curve_pieces__no_colored_neighbour(a2_fiber) -> None:
    assert a2_fiber.curve_pieces(set(), 0) == (0, False)


@pytest.mark.parametrize(
    "branches, expected",
    [
        ([[1], [2, 3], [4, 5, 6, 7, 8, 9]], (5, 1)),
        ([[1], [2, 3, 4, 5], [6, 7, 8, 9]], (5, 1)),
        ([[1, 2], [3, 4, 5], [6, 7, 8, 9]], (5, 1)),
        ([[1, 2], [3, 4], [5, 6, 7, 8, 9]], (5, 1)),
        ([[1], [2, 3], [4, 5]], (3, 1)),
    ],
)
def test_abstract_tree_surface__tripods(branches, expected) -> None:
    assert abstract_tree_surface(tripod_adjacency(branches, [])) == expected


def test_abstract_tree_surface__small_trees() -> None:
    assert abstract_tree_surface(an_diagram(3)) == (1, 2)
    assert abstract_tree_surface(an_diagram(1)) == (0, 2)
    assert abstract_tree_surface(dn_diagram(4)) == (1, 3)


def test_abstract_tree_surface__cycle() -> None:
    with pytest.raises(DivideKitError) as e:
        abstract_tree_surface(tripod_adjacency([[1], [2, 3], [4]], [[3, 4]]))
    assert e.value.error_type == Failure.NOT_A_TREE


@st.composite
def _relabelled_trees(draw):
    n = draw(st.integers(min_value=2, max_value=9))
    parents = [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, n)]
    labels = draw(st.permutations(range(n)))
    tree = {v: set() for v in range(n)}
    for child, parent in enumerate(parents, start=1):
        tree[child].add(parent)
        tree[parent].add(child)
    relabelled = {labels[v]: {labels[w] for w in ws} for v, ws in tree.items()}
    return tree, relabelled


@given(_relabelled_trees())
def test_abstract_tree_surface__relabelling(trees) -> None:
    tree, relabelled = trees
    genus, boundary = abstract_tree_surface(tree)
    assert abstract_tree_surface(relabelled) == (genus, boundary)
    assert 2 - 2 * genus - boundary == 1 - len(tree)

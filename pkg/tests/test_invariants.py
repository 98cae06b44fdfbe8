from math import gcd

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from divides.invariants import (
    census,
    genus_ak_with_smooth,
    genus_from_mu,
    genus_three_smooth,
    milnor_irreducible,
    milnor_total,
    newton_from_puiseux,
    puiseux_from_pq,
    record_from_divide,
)
from generators.chebyshev import chebyshev_divide
from generators.lines import generic_lines
from lib.errors import DivideKitError, Failure


def test_newton_from_puiseux__two_pairs() -> None:
    newton = newton_from_puiseux([(2, 3), (2, 7)])
    assert newton == [(2, 3), (2, 13)]
    assert milnor_irreducible(newton) == 16


@pytest.mark.parametrize("bad", [[(2, 4)], [], [(3, 2)], [(2, 5), (2, 9)]])
def test_check_puiseux__rejects(bad) -> None:
    with pytest.raises(DivideKitError) as e:
        newton_from_puiseux(bad)
    assert e.value.error_type == Failure.INVALID_PUISEUX


@pytest.mark.parametrize("p, q, mu", [(2, 3, 2), (3, 7, 12), (7, 3, 12), (4, 5, 12)])
def test_puiseux_from_pq__milnor(p, q, mu) -> None:
    assert milnor_irreducible(newton_from_puiseux(puiseux_from_pq(p, q))) == mu


def test_milnor_total__asymmetric() -> None:
    with pytest.raises(DivideKitError) as e:
        milnor_total([0, 0], [[0, 1], [2, 0]], 2)
    assert e.value.error_type == Failure.DIMENSION_MISMATCH


def test_milnor_total__wrong_size() -> None:
    with pytest.raises(DivideKitError) as e:
        milnor_total([0, 0, 0], [[0, 1], [1, 0]], 2)
    assert e.value.error_type == Failure.DIMENSION_MISMATCH


def test_genus_from_mu__odd() -> None:
    with pytest.raises(DivideKitError) as e:
        genus_from_mu(3, 1)
    assert e.value.error_type == Failure.INCOHERENT_DIVIDE


@given(st.integers(min_value=1, max_value=30))
def test_genus_ak_with_smooth__equals_multiplicity(nu) -> None:
    assert genus_ak_with_smooth(2, nu) == nu


def test_genus_three_smooth() -> None:
    assert genus_three_smooth(1, 1, 1) == 1


def test_record_from_divide__a2() -> None:
    record = record_from_divide(chebyshev_divide(2, 3))
    assert (record.mu, record.delta, record.r, record.b, record.g) == (2, 1, 1, 1, 1)
    assert record.as_lines() == ["mu: 2", "delta: 1", "regions: 1", "branches: 1", "genus: 1"]


def test_record_from_divide__circle_counts_twice() -> None:
    d = chebyshev_divide(3, 3)
    c = census(d)
    record = record_from_divide(d)
    assert (c.circles, c.intervals) == (1, 1)
    assert (record.mu, record.b, record.g) == (4, 3, 1)


@given(st.integers(min_value=2, max_value=4), st.integers(min_value=3, max_value=9))
def test_chebyshev__matches_puiseux(p, q) -> None:
    assume(p < q and gcd(p, q) == 1)
    record = record_from_divide(chebyshev_divide(p, q))
    assert record.mu == milnor_irreducible(newton_from_puiseux(puiseux_from_pq(p, q)))
    assert record.delta == (p - 1) * (q - 1) // 2
    assert record.b == 1


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_generic_lines__census(m) -> None:
    record = record_from_divide(generic_lines(m))
    assert record.mu == (m - 1) ** 2
    assert record.delta == m * (m - 1) // 2
    assert record.b == m


def test_generic_lines__five() -> None:
    record = record_from_divide(generic_lines(5))
    assert (record.mu, record.r) == (16, 6)
    assert (record_from_divide(generic_lines(4)).g, record_from_divide(generic_lines(4)).b) == (3, 4)

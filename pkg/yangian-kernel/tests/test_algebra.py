"""
Unit tests for algebra descriptors.
"""
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError
from sympy import QQ

from app.logic.algebra import AlgebraKind, Series
from app.logic.errors import IndexOutOfRange, InvalidAlgebra
from app.logic.exact_arith import SCALARS

kinds = st.builds(
    lambda series, rank: AlgebraKind(series=series, rank=rank),
    st.sampled_from(list(Series)),
    st.integers(2, 6),
)


@pytest.mark.parametrize(
    "code, expected",
    [("B2", [-2, -1, 0, 1, 2]), ("A3", [1, 2, 3]), ("C2", [-1, 0, 1, 2]), ("D3", [-2, -1, 0, 1, 2, 3])],
)
def test_index_set(code, expected):
    assert AlgebraKind.parse(code).index_set() == expected


def test_parse_rejects_bad_codes():
    with pytest.raises(InvalidAlgebra):
        AlgebraKind.parse("E8")
    with pytest.raises(InvalidAlgebra):
        AlgebraKind.parse("A1")


def test_direct_construction_validates_rank():
    with pytest.raises(ValidationError):
        AlgebraKind(series=Series.B, rank=1)


def test_parse_is_case_insensitive(b2):
    assert AlgebraKind.parse(" b2 ") == b2
    assert b2.code == "B2"
    assert str(b2) == "B2"


def test_epsilon(c2, b2):
    assert c2.epsilon(1) == -1
    assert c2.epsilon(0) == 1
    assert b2.epsilon(-2) == 1
    with pytest.raises(IndexOutOfRange):
        c2.epsilon(5)


def test_prime(a3, b2, d2):
    assert a3.prime(1) == 3
    assert b2.prime(2) == -2
    assert d2.prime(1) == 0


@given(kinds)
def test_prime_is_an_involution(kind):
    for i in kind.index_set():
        assert kind.prime(kind.prime(i)) == i
        assert kind.prime(i) in kind.index_set()


def test_kappa(a2, b2, c2, d2):
    assert a2.kappa() is None
    assert b2.kappa() == SCALARS(QQ(3, 2))
    assert c2.kappa() == 3
    assert d2.kappa() == 1


def test_dimension(a3, b2, c2, d2):
    assert [a3.dimension, b2.dimension, c2.dimension, d2.dimension] == [3, 5, 4, 4]


def test_roots_and_cartans(a3, b2, c2):
    assert a3.roots() == [1, 2]
    assert a3.cartans() == [1, 2, 3]
    assert b2.roots() == [0, 1]
    assert b2.cartans() == [0, 1, 2]
    assert c2.cartans() == [1, 2]


def test_root_coordinate(d2, b2):
    """D-type alpha_0 sits on F_{2,0}; every other root on F_{i+1,i}."""
    assert d2.root_coordinate(0) == (2, 0)
    assert d2.root_partner(0) == 2
    assert d2.root_coordinate(1) == (2, 1)
    assert b2.root_coordinate(0) == (1, 0)
    with pytest.raises(IndexOutOfRange):
        b2.root_coordinate(2)

"""
Unit tests for exact scalar arithmetic.
"""
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import QQ

from app.logic.errors import InvalidKernel
from app.logic.exact_arith import (
    SCALARS,
    RegionTag,
    c,
    c_expansion,
    c_valuation,
    canonical_pair,
    cs,
    half,
    kernel_coefficient,
    lift,
    pc,
    pu,
    pv,
    ratfn_normalize,
    reexpansion_coefficient,
    render,
    solve_in_span,
)

# Polynomials in c with small integer coefficients
polys = st.lists(st.integers(-5, 5), min_size=1, max_size=4).map(
    lambda ks: sum((k * c ** e for e, k in enumerate(ks)), SCALARS.zero)
)


def test_ratfn_normalize_cancels_common_factor():
    """(c^2 - 1)/(c - 1) reduces to c + 1."""
    assert ratfn_normalize(c ** 2 - 1, c - 1) == c + 1


def test_ratfn_normalize_zero_numerator():
    assert not ratfn_normalize(0, c), "Zero numerator should give zero"


def test_ratfn_normalize_zero_denominator():
    with pytest.raises(InvalidKernel):
        ratfn_normalize(c, 0)


def test_canonical_pair_has_monic_denominator():
    """f(u, v) = (u - v + c)/(u - v) keeps a monic denominator."""
    value = ratfn_normalize(pu - pv + pc, pu - pv)
    num, den = canonical_pair(value)
    assert den == pu - pv
    assert num == pu - pv + pc


@settings(max_examples=50, deadline=None)
@given(polys, polys, polys)
def test_scalar_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x + y == y + x
    assume(y)
    assert x / y * y == x


@settings(max_examples=50, deadline=None)
@given(polys, polys, polys)
def test_normalization_is_congruent(p, q, r):
    """Scaling numerator and denominator by the same factor changes nothing."""
    assume(q and r)
    assert ratfn_normalize(p * r, q * r) == ratfn_normalize(p, q)


def test_c_valuation():
    assert c_valuation(c ** 2 / (c + 1)) == 2
    assert c_valuation(1 / c) == -1
    assert c_valuation(SCALARS(7)) == 0
    with pytest.raises(InvalidKernel):
        c_valuation(SCALARS.zero)


def test_render_is_deterministic():
    assert render(c + 1) == "c + 1"
    assert render(1 / c) == "(1)/(c)"
    assert render(half(3)) == "3/2"


def test_lift_embeds_c():
    assert lift(c) == cs
    assert lift(half(1)) * 2 == lift(SCALARS(1))


def test_kernel_coefficient_geometric_series():
    """Coefficient of v^2 u^-3 in 1/(u - v) is 1, and of v^5 u^-3 is 0."""
    assert kernel_coefficient(0, RegionTag.FIRST_INVERSE, 2, 2) == 1
    assert not kernel_coefficient(0, RegionTag.FIRST_INVERSE, 5, 2)


def test_kernel_coefficient_second_region_sign():
    """With y large, 1/(x - y) = -sum x^a y^(-a-1)."""
    assert kernel_coefficient(0, RegionTag.SECOND_INVERSE, 1, 1) == -1
    assert kernel_coefficient(c, RegionTag.SECOND_INVERSE, 0, 2) == -(c ** 2)


def test_kernel_coefficient_rejects_negative_bidegree():
    with pytest.raises(InvalidKernel):
        kernel_coefficient(0, RegionTag.FIRST_INVERSE, -1, 0)


def test_c_expansion_of_geometric_fraction():
    """1/(c^2 - c) = -1/c - 1 - c - c^2 - ..."""
    expansion = c_expansion(1 / (c ** 2 - c), 2)
    assert expansion == {-1: QQ(-1), 0: QQ(-1), 1: QQ(-1), 2: QQ(-1)}


def test_c_expansion_of_polynomial_and_zero():
    assert c_expansion(3 * c ** 2 + half(1), 5) == {0: QQ(1, 2), 2: QQ(3)}
    assert c_expansion(SCALARS.zero, 3) == {}


def test_c_expansion_respects_top():
    assert c_expansion(c ** 3, 2) == {}


def test_reexpansion_examples():
    assert reexpansion_coefficient(0, 2, 2) == 1
    assert reexpansion_coefficient(0, -2, -2) == 1
    assert reexpansion_coefficient(c / 2, 0, 1) == c / 2
    assert not reexpansion_coefficient(c, 2, 1), "Higher modes never feed lower ones"
    assert not reexpansion_coefficient(c, -1, 0), "Minus and plus halves never mix"


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 4), st.integers(0, 4), st.booleans())
def test_reexpansion_composes(a, b, low, gap, plus):
    """Shifting by a then by b equals shifting by a + b."""
    m = low if plus else -low - 1 - gap
    big = m + gap
    composed = sum(
        (reexpansion_coefficient(a * c, m, k) * reexpansion_coefficient(b * c, k, big) for k in range(m, big + 1)),
        SCALARS.zero,
    )
    assert composed == reexpansion_coefficient((a + b) * c, m, big)


def test_solve_in_span():
    columns = [{"x": SCALARS(1)}, {"y": SCALARS(1), "x": SCALARS(1)}]
    solution = solve_in_span(columns, {"x": SCALARS(3), "y": c})
    assert solution == [3 - c, c]


def test_solve_in_span_inconsistent_and_empty():
    assert solve_in_span([{"x": SCALARS(1)}], {"y": SCALARS(1)}) is None
    assert solve_in_span([{"x": SCALARS(1)}], {}) == [SCALARS.zero]


def test_solve_in_span_over_rationals():
    columns = [{("a", 0): QQ(2)}, {("a", 0): QQ(1), ("b", 1): QQ(1)}]
    assert solve_in_span(columns, {("a", 0): QQ(5), ("b", 1): QQ(1)}, QQ) == [QQ(2), QQ(1)]
    assert solve_in_span(columns, {("c", 0): QQ(1)}, QQ) is None

"""
Unit tests for the truncated mode algebra.
"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.logic.elements import Element, Gen, TensorElement
from app.logic.errors import Inconclusive, InvalidAlgebra, WindowOverflow
from app.logic.exact_arith import SCALARS, c
from app.logic.mode_algebra import (
    AlgebraCheck,
    Cut,
    ModeAlgebra,
    Strategy,
    verify_algebra_check,
    window_generators,
)
from app.schemas import Status, TrustBox

T12, T21, T11, T22 = Gen(1, 2, 0), Gen(2, 1, 0), Gen(1, 1, 0), Gen(2, 2, 0)

A2_GENS = [Gen(i, j, m) for m in (-1, 0, 1) for i in (1, 2) for j in (1, 2)]

words = st.lists(st.sampled_from(A2_GENS), min_size=0, max_size=2).map(tuple)
elements = st.dictionaries(words, st.integers(-3, 3), max_size=3).map(
    lambda terms: Element({w: SCALARS(k) for w, k in terms.items()})
)


def test_mode_zero_commutator(a2_algebra):
    """[T_12[0], T_21[0]] = c (T_22[0] - T_11[0])."""
    value = a2_algebra.normal_form(a2_algebra.commutator_rule(T12, T21))
    assert value == Element.gen(2, 2, 0, c) - Element.gen(1, 1, 0, c)


def test_commutator_of_generator_with_itself(a2_algebra):
    assert not a2_algebra.commutator_rule(T12, T12)


def test_reordering_uses_the_rule(a2_algebra):
    """T_21[0] T_12[0] minus its reordering is the commutator."""
    product = a2_algebra.normal_form(Element.from_word((T21, T12)))
    reordered = Element.from_word((T12, T21))
    assert product - reordered == a2_algebra.normal_form(a2_algebra.commutator_rule(T21, T12))


def test_unit_is_fixed(a2_algebra):
    assert a2_algebra.normal_form(Element.unit()) == Element.unit()


def test_window_overflow(a2_algebra):
    with pytest.raises(WindowOverflow):
        a2_algebra.check_generator(Gen(1, 1, 100))
    with pytest.raises(WindowOverflow):
        a2_algebra.commutator_rule(Gen(1, 2, 100), T21)


def test_index_outside_algebra(a2_algebra):
    with pytest.raises(InvalidAlgebra):
        a2_algebra.check_generator(Gen(0, 1, 0))


def test_cut_order(a2, tiny_box):
    """The F cut puts minus modes first, the E cut plus modes first."""
    minus, plus = Gen(1, 2, -1), Gen(1, 2, 0)
    assert ModeAlgebra(a2, tiny_box, cut=Cut.F).is_ordered((minus, plus))
    assert ModeAlgebra(a2, tiny_box, cut=Cut.E).is_ordered((plus, minus))


def test_fuel_exhaustion_is_inconclusive(a2):
    alg = ModeAlgebra(a2, TrustBox(lminus=1, lplus=1, maxlen=3, fuel=1))
    with pytest.raises(Inconclusive):
        alg.normal_form(Element.from_word((T22, T21, T12)))


def test_free_algebra_never_reorders(a2, small_box):
    alg = ModeAlgebra(a2, small_box, reduce=False)
    word = Element.from_word((T21, T12))
    assert alg.normal_form(word) == word


@settings(max_examples=25, deadline=None)
@given(elements)
def test_normal_form_idempotent_and_confluent(a2_algebra, e):
    first = a2_algebra.normal_form(e)
    assert a2_algebra.normal_form(first) == first
    assert a2_algebra.normal_form(e, Strategy.RIGHTMOST) == first


@settings(max_examples=15, deadline=None)
@given(elements, elements)
def test_normal_form_is_linear(a2_algebra, x, y):
    nf = a2_algebra.normal_form
    assert nf(x + y) == nf(x) + nf(y)


def test_inverse_unital(a2_algebra):
    x = Element.unit() + Element.gen(1, 2, 0)
    inv = a2_algebra.inverse_unital(x)
    assert a2_algebra.multiply(x, inv) == Element.unit()


def test_inverse_needs_invertible_constant(a2_algebra):
    with pytest.raises(Inconclusive):
        a2_algebra.inverse_unital(Element.gen(1, 2, 0))


def test_coproduct_at_mode_zero(a2_algebra):
    """Delta T_12[0] = T_12[0] (x) 1 + 1 (x) T_12[0]."""
    expected = TensorElement.pure(Element.gen(1, 2, 0), Element.unit()) + TensorElement.pure(
        Element.unit(), Element.gen(1, 2, 0)
    )
    assert a2_algebra.coproduct_standard(T12) == expected


def test_coproduct_is_a_homomorphism_at_mode_zero(a2_algebra):
    a, b = Element.from_word((T12,)), Element.from_word((T21,))
    lhs = a2_algebra.coproduct(a2_algebra.commutator(a, b))
    da, db = a2_algebra.coproduct(a), a2_algebra.coproduct(b)
    rhs = a2_algebra.normal_form_tensor(da * db - db * da)
    assert lhs == rhs


def test_z_series_has_unit_leading_term(b2_algebra):
    z = b2_algebra.z_series(True)
    assert z.unit_part() == 1


def test_z_series_needs_crossing_parameter(a2_algebra):
    with pytest.raises(InvalidAlgebra):
        a2_algebra.z_series(True)


def test_equal_mod_z(b2_algebra):
    e = Element.gen(1, 1, 0)
    assert b2_algebra.equal_mod_z(e, e)
    member = b2_algebra.multiply(b2_algebra.z_modes(True)[0], e)
    assert b2_algebra.equal_mod_z(member, Element(), multipliers=[(Gen(1, 1, 0),)], signs=(True,))


def test_equal_mod_z_is_equality_for_a(a2_algebra):
    assert not a2_algebra.equal_mod_z(Element.gen(1, 1, 0), Element.gen(2, 2, 0))


def test_rules_survive_export(a2, small_box, fresh_rules):
    alg = ModeAlgebra(a2, small_box)
    alg.commutator_rule(T12, T21)
    payload = alg.export_rules()
    assert payload, "Deriving a commutator should populate the shared table"
    fresh_rules.clear()
    restored = ModeAlgebra(a2, small_box)
    assert restored.load_rules(payload) == len(payload)
    assert restored.rules[(T12, T21)] == alg.rules[(T12, T21)]


def test_kappa_override_keeps_private_table(b2, tiny_box):
    shared = ModeAlgebra(b2, tiny_box)
    private = ModeAlgebra(b2, tiny_box, kappa=b2.kappa() + 1)
    assert shared.rules is not private.rules


def test_window_generators(a2, small_box):
    gens = window_generators(ModeAlgebra(a2, small_box))
    assert len(gens) == 4 * len(small_box.trusted_modes)
    assert window_generators(ModeAlgebra(a2, small_box), signs=(True,))[0].mode == 0


@pytest.mark.parametrize("check", [AlgebraCheck.ANTISYMMETRY, AlgebraCheck.JACOBI, AlgebraCheck.CONFLUENCE])
def test_sampled_algebra_checks(a2, small_box, check):
    report = verify_algebra_check(a2, check, small_box, samples=20)
    assert report.status == Status.VERIFIED, f"{check.value}: {report.counterexample}"
    assert report.identity == f"algebra:{check.value}"


def test_sampled_checks_are_reproducible(a2, small_box):
    first = verify_algebra_check(a2, AlgebraCheck.JACOBI, small_box, samples=5, seed=3)
    second = verify_algebra_check(a2, AlgebraCheck.JACOBI, small_box, samples=5, seed=3)
    assert first.model_dump(exclude={"elapsed_ms"}) == second.model_dump(exclude={"elapsed_ms"})


def test_centrality(b2, tiny_box):
    report = verify_algebra_check(b2, AlgebraCheck.CENTRALITY, tiny_box)
    assert report.status != Status.FAILED, f"centrality: {report.counterexample}"


def test_centrality_rejected_for_a(a2, small_box):
    with pytest.raises(InvalidAlgebra):
        verify_algebra_check(a2, AlgebraCheck.CENTRALITY, small_box)


def test_crossing_relation_at_mode_zero(b2_algebra):
    """T_{0,1}[0] + T_{-1,0}[0] vanishes in the Yangian but not under the commutator rules alone."""
    e = Element.gen(0, 1, 0) + Element.gen(-1, 0, 0)
    assert b2_algebra.normal_form(e)
    assert not b2_algebra.residual(e)


def test_residual_keeps_non_members(b2_algebra):
    e = Element.gen(0, 1, 0)
    assert b2_algebra.residual(e) == b2_algebra.normal_form(e)


def test_diagonal_crossing_entries_agree(b2_algebra):
    entries = b2_algebra.crossing_matrix(True)
    z = b2_algebra.z_series(True)
    for i in b2_algebra.kind.index_set():
        assert not b2_algebra.residual(entries[(i, i)].mode(0) - z.mode(0), signs=(True,))


def test_z_mode_is_one_in_the_quotient(b2_algebra):
    z0 = b2_algebra.z_modes(True)[0]
    assert z0
    assert b2_algebra.equal_mod_z(z0, Element(), signs=(True,))
    assert not b2_algebra.equal_mod_z(Element.gen(0, 1, 0), Element(), signs=(True,))


def test_residual_is_normal_form_for_a(a2_algebra):
    e = Element.from_word((T21, T12))
    assert a2_algebra.residual(e, mod_z=True) == a2_algebra.normal_form(e)


def test_scoped_trust(a2, tiny_box):
    alg = ModeAlgebra(a2, tiny_box)
    alg.dropped = alg.leaked = True
    assert not alg.trusted
    with alg.scoped_trust():
        assert alg.trusted
    assert not alg.trusted


def test_scoped_trust_keeps_the_union(a2, tiny_box):
    alg = ModeAlgebra(a2, tiny_box)
    with alg.scoped_trust():
        alg.dropped = alg.leaked = True
    assert not alg.trusted

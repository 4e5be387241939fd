"""
Unit tests for Gauss coordinates and the identity catalog.
"""
import pytest

from app.logic.algebra import AlgebraKind
from app.logic.elements import Element
from app.logic.errors import IndexOutOfRange
from app.logic.exact_arith import SCALARS
from app.logic.gauss import (
    IdentityTag,
    _check_cartan_identifications,
    double_hat_shift,
    expect_series_equal,
    extract_gauss,
    invert_T,
    tags_for,
    tilde_gauss,
    triangular_inverse,
    verify_gauss_identity,
)
from app.logic.mode_algebra import ModeAlgebra
from app.logic.verdict import Verdict
from app.schemas import Status, TrustBox

A_TAGS = [
    IdentityTag.ROUND_TRIP,
    IdentityTag.TILDE_TWO_ROUTE,
    IdentityTag.INVERSE,
    IdentityTag.A_HAT,
    IdentityTag.DOUBLE_HAT,
]


@pytest.fixture(scope="module")
def a2_plus(a2_algebra):
    return extract_gauss(a2_algebra, True)


def test_last_cartan_is_the_corner_entry(a2_plus):
    """For gl_2, k+_2(u) = T+_22(u) identically."""
    assert a2_plus.k(2).modes() == {m: Element.gen(2, 2, m) for m in (0, 1)}


def test_first_coordinates(a2_plus):
    """F+_{2,1} sits in T_{1,2} and E+_{1,2} in T_{2,1} at mode 0."""
    assert a2_plus.f(2, 1).mode(0) == Element.gen(1, 2, 0)
    assert a2_plus.e(1, 2).mode(0) == Element.gen(2, 1, 0)


def test_unit_and_zero_coordinates(a2_plus):
    assert a2_plus.f(1, 1).unit_part() == 1
    assert not a2_plus.f(1, 2).coefficients


def test_adjacent_tilde_is_negated(a2_algebra, a2_plus):
    f_tilde, e_tilde = tilde_gauss(a2_algebra, a2_plus)
    assert f_tilde[(2, 1)].modes() == (-a2_plus.f(2, 1)).modes()
    assert e_tilde[(1, 2)].modes() == (-a2_plus.e(1, 2)).modes()


def test_tilde_chain_of_length_two(a3, small_box):
    """F~_{3,1} = -F_{3,1} + F_{2,1} F_{3,2}, and back substitution agrees."""
    alg = ModeAlgebra(a3, small_box)
    table = extract_gauss(alg, True)
    chains, _ = tilde_gauss(alg, table)
    back, _ = triangular_inverse(alg, table)
    # mode 1 is the first one where the product term shows up
    expected = -table.f(3, 1).mode(1) + alg.multiply(table.f(2, 1).mode(0), table.f(3, 2).mode(0))
    assert alg.normal_form(chains[(3, 1)].mode(1)) == alg.normal_form(expected)
    assert not alg.normal_form(chains[(3, 1)].mode(1) - back[(3, 1)].mode(1))


def test_inverse_entries(a2_algebra, a2_plus):
    inv = invert_T(a2_algebra, a2_plus)
    assert inv[(1, 1)].unit_part() == 1
    assert a2_algebra.normal_form(inv[(1, 2)].mode(0)) == -Element.gen(1, 2, 0)


@pytest.mark.parametrize("tag", A_TAGS)
def test_a_identities(a2, small_box, tag):
    report = verify_gauss_identity(a2, tag, small_box)
    assert report.status == Status.VERIFIED, f"{tag.value}: {report.counterexample}"


@pytest.mark.parametrize("tag", [IdentityTag.ROUND_TRIP, IdentityTag.A_HAT])
def test_a3_identities_plus(a3, tiny_box, tag):
    report = verify_gauss_identity(a3, tag, tiny_box, signs=(True,))
    assert report.status == Status.VERIFIED, f"{tag.value}: {report.counterexample}"


@pytest.mark.parametrize(
    "code, tag",
    [
        ("B2", IdentityTag.B_IDENTIFICATIONS),
        ("B2", IdentityTag.B_INVERSIONS),
        ("B2", IdentityTag.SHIFT_IDENTITY),
        ("C2", IdentityTag.C_IDENTIFICATIONS),
        ("C2", IdentityTag.BCD_HAT),
        ("D2", IdentityTag.D_IDENTIFICATIONS),
        ("D2", IdentityTag.D_PROPOSITION),
        ("D2", IdentityTag.DOUBLE_HAT),
    ],
)
def test_bcd_identities(code, tag, tiny_box):
    report = verify_gauss_identity(AlgebraKind.parse(code), tag, tiny_box, signs=(True,))
    assert report.status == Status.VERIFIED, f"{code} {tag.value}: {report.counterexample}"


def test_k0_constraint_never_fails(b2, tiny_box):
    """k_0 lines that the z = 1 quotient does not settle stay inconclusive."""
    report = verify_gauss_identity(b2, IdentityTag.B_K0_CONSTRAINT, tiny_box, signs=(True,))
    assert report.status != Status.FAILED, f"{report.counterexample}"


def test_mod_z_mismatch_fails(b2_algebra):
    table = extract_gauss(b2_algebra, True)
    verdict = Verdict("k-mismatch", b2_algebra.kind, b2_algebra.box)
    expect_series_equal(verdict, b2_algebra, table.k(1), table.k(2), "k", mod_z=True)
    assert verdict.status == Status.FAILED
    assert verdict.counterexample.monomial.startswith("k+[0]")


def test_mod_z_mismatch_on_k0_is_inconclusive(b2_algebra):
    table = extract_gauss(b2_algebra, True)
    verdict = Verdict("k0-mismatch", b2_algebra.kind, b2_algebra.box)
    expect_series_equal(verdict, b2_algebra, table.k(0), table.k(1), "k0", mod_z=True, uses_k0=True)
    assert verdict.status == Status.INCONCLUSIVE


def test_perturbed_k_identification_fails(c2, small_box):
    """Negative control on the Cartan lines alone: they are compared modulo z."""
    alg = ModeAlgebra(c2, small_box)
    table = extract_gauss(alg, True)
    verdict = Verdict("k-id", c2, small_box)
    _check_cartan_identifications(verdict, alg, table, SCALARS(1), inverted=True)
    assert verdict.status == Status.FAILED
    assert verdict.counterexample.monomial.startswith("k-id")


def test_free_algebra_round_trip(b2, tiny_box):
    """Matrix factorization holds without any reordering."""
    report = verify_gauss_identity(b2, IdentityTag.ROUND_TRIP, tiny_box, signs=(True,), reduce=False)
    assert report.status == Status.VERIFIED


def test_perturbed_identification_fails(c2, small_box):
    """Negative control: moving the identification shift by c breaks it."""
    report = verify_gauss_identity(
        c2, IdentityTag.C_IDENTIFICATIONS, small_box, signs=(True,), perturb=SCALARS(1)
    )
    assert report.status == Status.FAILED
    assert report.counterexample.monomial.startswith("F-id")


def test_tag_must_match_series(a2, small_box):
    with pytest.raises(IndexOutOfRange):
        verify_gauss_identity(a2, IdentityTag.B_INVERSIONS, small_box)


def test_tags_for(a2, d2):
    assert IdentityTag.A_HAT in tags_for(a2)
    assert IdentityTag.BCD_HAT not in tags_for(a2)
    assert IdentityTag.D_PROPOSITION in tags_for(d2)
    assert IdentityTag.SHIFT_IDENTITY in tags_for(d2)


@pytest.mark.parametrize("code, amount", [("A2", 2), ("A3", 3), ("B2", 3), ("C2", 6), ("D2", 2)])
def test_double_hat_shift(code, amount):
    assert double_hat_shift(AlgebraKind.parse(code)) == amount


def test_gauss_table_json_keys(a2_plus):
    dump = a2_plus.to_json()
    assert set(dump) == {"F+[2,1]", "k+[1]", "k+[2]", "E+[1,2]"}
    assert set(dump["k+[2]"]) == {"0", "1"}


def test_empty_trust_region_is_inconclusive(a2):
    """A check without comparisons never verifies."""
    report = verify_gauss_identity(a2, IdentityTag.ROUND_TRIP, TrustBox(lminus=1, lplus=1, maxlen=1), signs=())
    assert report.status == Status.INCONCLUSIVE

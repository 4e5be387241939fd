"""
Unit tests for the current realization and the relation catalog.
"""
import pytest

from app.logic.currents import (
    CATALOG,
    CurrentId,
    CurrentRealization,
    Family,
    RelationTag,
    check_current,
    coproduct_drinfeld,
    delta_coefficient,
    current_modes,
    negative_alias,
    negative_indices,
    relation_tags,
    verify_current_relation,
)
from app.logic.elements import Element
from app.logic.errors import IndexOutOfRange
from app.logic.exact_arith import SCALARS, half
from app.logic.mode_algebra import ModeAlgebra
from app.schemas import Status


@pytest.mark.parametrize(
    "code, expected",
    [
        ("B2", (0, half(1), -1)),
        ("C2", (1, SCALARS(-2), -1)),
        ("D2", (1, SCALARS(0), -1)),
    ],
)
def test_negative_alias(code, expected, request):
    kind = request.getfixturevalue(code.lower())
    assert negative_alias(kind, -1) == expected


def test_negative_alias_range(a2, c2):
    with pytest.raises(IndexOutOfRange):
        negative_alias(a2, -1)
    with pytest.raises(IndexOutOfRange):
        negative_alias(c2, -2)


def test_negative_indices(a2, b2, c2, d2):
    assert negative_indices(a2) == []
    assert negative_indices(b2) == [-2, -1]
    assert negative_indices(c2) == [-1]
    assert negative_indices(d2) == [-1]


def test_check_current(a2, b2):
    check_current(a2, Family.K, 2)
    check_current(b2, Family.F, 0)
    with pytest.raises(IndexOutOfRange):
        check_current(a2, Family.F, 2)
    with pytest.raises(IndexOutOfRange):
        check_current(a2, Family.E, 0)


def test_plus_modes_are_gauss_coordinates(a2, small_box):
    modes = current_modes(a2, Family.F, 1, small_box)
    assert set(modes) == {-1, 0, 1}
    assert modes[0] == Element.gen(1, 2, 0)


def test_cartan_modes_cover_the_window(a2, small_box):
    modes = current_modes(a2, "K", 1, small_box)
    assert sorted(modes) == small_box.trusted_modes


def test_fork_current_comes_from_its_own_coordinate(d2, tiny_box):
    cur = CurrentRealization(ModeAlgebra(d2, tiny_box), signs=(True,))
    assert cur.current(Family.F, 0)[0] == cur.table(True).f(2, 0).mode(0)
    assert cur.current(Family.E, 0)[0] == cur.table(True).e(0, 2).mode(0)


def test_plus_only_realization_has_no_minus_modes(a2, small_box):
    cur = CurrentRealization(ModeAlgebra(a2, small_box), signs=(True,))
    assert sorted(cur.current(Family.E, 1)) == small_box.plus_modes
    assert cur.ratio_mode(1, -1) is None


def test_drinfeld_coproduct_counit(a2, small_box):
    cid = CurrentId(Family.F, 1, 0)
    image = coproduct_drinfeld(a2, cid, small_box)
    assert image.counit_left() == Element.gen(1, 2, 0)
    assert image.counit_right() == Element.gen(1, 2, 0)


def test_drinfeld_coproduct_outside_window(a2, small_box):
    with pytest.raises(IndexOutOfRange):
        coproduct_drinfeld(a2, CurrentId(Family.F, 1, 5), small_box)


def test_catalog_lines(a2, b2, c2, d2):
    assert RelationTag.NEGATIVE_ALIAS not in relation_tags(a2)
    assert RelationTag.FF_SHORT in relation_tags(b2)
    assert RelationTag.FF_LONG_ADJACENT in relation_tags(c2)
    assert RelationTag.FF_FORK_ADJACENT in relation_tags(d2)
    assert all(RelationTag.EF_DELTA in tags for tags in CATALOG.values())


@pytest.mark.parametrize(
    "tag",
    [
        RelationTag.KF_DIAGONAL,
        RelationTag.KE_NEXT,
        RelationTag.FF_SAME,
        RelationTag.EE_SAME,
        RelationTag.EF_DELTA,
        RelationTag.COPRODUCT_COUNIT,
    ],
)
def test_a2_relations_verified(a2, tiny_box, tag):
    report = verify_current_relation(a2, tag, tiny_box, signs=(True,))
    assert report.status == Status.VERIFIED, f"{tag.value}: {report.counterexample}"
    assert report.identity == f"relation:{tag.value}"


def test_two_sided_delta(a2, tiny_box):
    report = verify_current_relation(a2, "EF-delta", tiny_box)
    assert report.status == Status.VERIFIED, f"{report.counterexample}"


def test_adjacent_roots(a3, tiny_box):
    report = verify_current_relation(a3, RelationTag.FF_ADJACENT, tiny_box, signs=(True,))
    assert report.status == Status.VERIFIED, f"{report.counterexample}"


def test_line_without_instance_is_inconclusive(a2, tiny_box):
    """gl_2 has no adjacent pair of roots."""
    report = verify_current_relation(a2, RelationTag.FF_ADJACENT, tiny_box, signs=(True,))
    assert report.status == Status.INCONCLUSIVE


@pytest.mark.parametrize(
    "code, tag",
    [
        ("B2", RelationTag.NEGATIVE_ALIAS),
        ("C2", RelationTag.FF_LONG),
        ("D2", RelationTag.FF_FORK_COMMUTE),
    ],
)
def test_bcd_relations_never_fail(code, tag, tiny_box, request):
    """A sample at unit scale; the full catalogs run through the suite command."""
    kind = request.getfixturevalue(code.lower())
    report = verify_current_relation(kind, tag, tiny_box, signs=(True,))
    assert report.status != Status.FAILED, f"{code} {tag.value}: {report.counterexample}"


def test_serre_is_reserved(a2, tiny_box):
    report = verify_current_relation(a2, RelationTag.SERRE_F, tiny_box)
    assert report.status == Status.INCONCLUSIVE


def test_foreign_relation_rejected(a2, tiny_box):
    with pytest.raises(IndexOutOfRange):
        verify_current_relation(a2, RelationTag.KF_SHORT, tiny_box)


def test_perturbed_exchange_fails(a2, small_box):
    """Negative control: FF-same with its shift moved by c."""
    report = verify_current_relation(a2, RelationTag.FF_SAME, small_box, perturb=1, signs=(True,))
    assert report.status == Status.FAILED
    assert report.counterexample.monomial.startswith("FF-same")


@pytest.mark.parametrize("r", [-3, -1, 0, 2])
def test_delta_pairs_each_mode_with_its_mirror(r):
    """delta(u - v) = sum over all n of u^(-n-1) v^n."""
    assert delta_coefficient(r, r) == 1
    assert not delta_coefficient(r, r + 1)
    assert not delta_coefficient(r, r - 1)

"""
Unit tests for truncated generating series.
"""
import pytest

from app.logic.elements import Element
from app.logic.errors import InternalInconsistency
from app.logic.exact_arith import c
from app.logic.series import ModeSeries, inverse, product, scalar_series, series_sum, shift


def _t11(alg, plus=True):
    return alg.t_series(1, 1, plus)


def test_modes_and_unit_part(a2_algebra):
    s = _t11(a2_algebra)
    assert s.unit_part() == 1
    assert s.mode_range() == [0, 1]
    assert s.mode(1) == Element.gen(1, 1, 1)


def test_minus_series_layout(a2_algebra):
    s = _t11(a2_algebra, plus=False)
    assert s.mode_range()[0] == -1
    assert s.mode(-1) == Element.gen(1, 1, -1), "Mode -1 shares u^0 with the unit"
    with pytest.raises(InternalInconsistency):
        s.mode(0)


def test_power_outside_series_rejected():
    with pytest.raises(InternalInconsistency):
        ModeSeries(True, 2, {1: Element.unit()})


def test_plus_and_minus_do_not_mix(a2_algebra):
    with pytest.raises(InternalInconsistency):
        _t11(a2_algebra) + _t11(a2_algebra, plus=False)


def test_shift_by_zero_is_identity(a2_algebra):
    s = _t11(a2_algebra)
    shifted = shift(a2_algebra, s, 0)
    assert shifted.modes() == s.modes()
    assert shifted.unit_part() == s.unit_part()


def test_shift_round_trip_on_plus_series(a2_algebra):
    s = a2_algebra.t_series(1, 2, True)
    back = shift(a2_algebra, shift(a2_algebra, s, c / 2), -c / 2)
    assert back.modes() == s.modes()


def test_shift_only_feeds_higher_modes(a2_algebra):
    """A plus series with only mode 1 keeps mode 0 empty after shifting."""
    s = ModeSeries.from_modes(True, 2, {1: Element.gen(1, 2, 1)})
    shifted = shift(a2_algebra, s, c)
    assert not shifted.mode(0)
    assert shifted.mode(1) == Element.gen(1, 2, 1)


def test_shift_of_mode_zero(a2_algebra):
    """X(u - a) gains a * X[0] at mode 1."""
    s = ModeSeries.from_modes(True, 2, {0: Element.gen(1, 2, 0)})
    shifted = shift(a2_algebra, s, c)
    assert shifted.mode(1) == Element.gen(1, 2, 0, c)


def test_inverse_is_a_right_inverse(a2_algebra):
    s = _t11(a2_algebra)
    result = product(a2_algebra, s, inverse(a2_algebra, s))
    assert result.unit_part() == 1
    assert all(not x for x in result.modes().values())


def test_series_sum_and_scale(a2_algebra):
    s = _t11(a2_algebra)
    total = series_sum([s, s.scale(-1)])
    assert not total.coefficients


def test_scalar_series():
    s = scalar_series(True, 2, {0: 1, -1: c})
    assert s.unit_part() == 1
    assert s.mode(0) == Element.unit(c)

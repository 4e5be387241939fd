"""
Truncated one-sided generating series with Element coefficients.

A plus series carries powers u^0, u^-1, ..., u^-depth (modes 0..depth-1); a
minus series carries u^0, ..., u^(depth-1) (modes -1..-depth). The u^0
coefficient of a plus series is a scalar; for a minus series it also holds
mode -1. Products and inverses go through an algebra object providing
multiply(), truncate() and inverse_unital().
"""
from typing import Callable, Dict, Iterable, List, Optional
import logging

from .elements import Element
from .errors import InternalInconsistency
from .exact_arith import ScalarLike, reexpansion_coefficient

logger = logging.getLogger(__name__)


class ModeSeries:
    def __init__(self, plus: bool, depth: int, coefficients: Optional[Dict[int, Element]] = None):
        self.plus = plus
        self.depth = depth
        self.coefficients: Dict[int, Element] = {}
        for power, value in (coefficients or {}).items():
            if power not in self.power_range():
                raise InternalInconsistency(f"power {power} outside a depth-{depth} series")
            if value:
                self.coefficients[power] = value

    @classmethod
    def constant(cls, plus: bool, depth: int, value=1) -> "ModeSeries":
        return cls(plus, depth, {0: Element.unit(value)})

    @classmethod
    def from_modes(cls, plus: bool, depth: int, modes: Dict[int, Element], unit=0) -> "ModeSeries":
        coefficients: Dict[int, Element] = {}
        if unit:
            coefficients[0] = Element.unit(unit)
        for m, value in modes.items():
            power = -m - 1
            coefficients[power] = coefficients.get(power, Element()) + value
        return cls(plus, depth, coefficients)

    def power_range(self) -> range:
        return range(-self.depth, 1) if self.plus else range(0, self.depth)

    def mode_range(self) -> List[int]:
        return list(range(self.depth)) if self.plus else list(range(-1, -self.depth - 1, -1))

    def at(self, power: int) -> Element:
        return self.coefficients.get(power, Element())

    def mode(self, m: int) -> Element:
        """Coefficient of u^(-m-1) with the scalar unit part removed."""
        if m not in self.mode_range():
            raise InternalInconsistency(f"mode {m} is not carried by this series")
        value = self.at(-m - 1)
        return value.without_unit() if m == -1 else value

    def unit_part(self):
        return self.at(0).constant()

    def modes(self) -> Dict[int, Element]:
        return {m: self.mode(m) for m in self.mode_range()}

    def map(self, fn: Callable[[Element], Element]) -> "ModeSeries":
        return ModeSeries(self.plus, self.depth, {p: fn(x) for p, x in self.coefficients.items()})

    def _check(self, other: "ModeSeries") -> None:
        if self.plus != other.plus:
            raise InternalInconsistency("cannot combine plus and minus series")

    def __add__(self, other: "ModeSeries") -> "ModeSeries":
        self._check(other)
        depth = min(self.depth, other.depth)
        acc: Dict[int, Element] = {}
        for series in (self, other):
            for power, value in series.coefficients.items():
                if power in ModeSeries(self.plus, depth).power_range():
                    acc[power] = acc.get(power, Element()) + value
        return ModeSeries(self.plus, depth, acc)

    def __neg__(self) -> "ModeSeries":
        return self.map(lambda x: -x)

    def __sub__(self, other: "ModeSeries") -> "ModeSeries":
        return self + (-other)

    def scale(self, factor) -> "ModeSeries":
        return self.map(lambda x: x.scale(factor))

    def __repr__(self) -> str:
        sign = "+" if self.plus else "-"
        return f"ModeSeries({sign}, depth={self.depth}, {self.coefficients!r})"


def series_sum(items: Iterable[ModeSeries]) -> ModeSeries:
    items = list(items)
    total = items[0]
    for item in items[1:]:
        total = total + item
    return total


def product(alg, a: ModeSeries, b: ModeSeries) -> ModeSeries:
    """Series product a(u) b(u), coefficients normal-ordered by alg."""
    a._check(b)
    depth = min(a.depth, b.depth)
    powers = ModeSeries(a.plus, depth).power_range()
    acc: Dict[int, Element] = {}
    for pa, xa in a.coefficients.items():
        for pb, xb in b.coefficients.items():
            if pa + pb in powers:
                acc[pa + pb] = acc.get(pa + pb, Element()) + xa * xb
    return ModeSeries(a.plus, depth, {p: alg.normal_form(x) for p, x in acc.items()})


def product_chain(alg, factors: List[ModeSeries]) -> ModeSeries:
    result = factors[0]
    for factor in factors[1:]:
        result = product(alg, result, factor)
    return result


def inverse(alg, a: ModeSeries) -> ModeSeries:
    """
    Right inverse b with a b = 1.

    The u^0 coefficient must be a unital element (nonzero scalar plus
    higher-degree terms); it is inverted by alg.inverse_unital.
    """
    lead_inv = alg.inverse_unital(a.at(0))
    powers = list(a.power_range())
    order = sorted(powers, key=abs)
    b: Dict[int, Element] = {0: lead_inv}
    for power in order[1:]:
        rest = Element()
        for pa, xa in a.coefficients.items():
            if pa != 0 and power - pa in b:
                rest = rest + xa * b[power - pa]
        b[power] = alg.normal_form(-(lead_inv * alg.normal_form(rest)))
    return ModeSeries(a.plus, a.depth, b)


def shift(alg, a: ModeSeries, amount: ScalarLike) -> ModeSeries:
    """
    Re-expand a(x) as a series in u where x = u - amount.

    Plus modes only feed higher modes, so plus shifts are exact. Minus mode M
    receives every deeper mode; the result is exact for modes within
    depth - maxlen of the top.
    """
    out: Dict[int, Element] = {}
    unit = a.unit_part()
    if unit:
        out[0] = Element.unit(unit)
    source = a.modes()
    for big in a.mode_range():
        acc = Element()
        for small, value in source.items():
            if not value:
                continue
            coefficient = reexpansion_coefficient(amount, small, big)
            if coefficient:
                acc = acc + value.scale(coefficient)
        if acc:
            power = -big - 1
            out[power] = out.get(power, Element()) + alg.truncate(acc)
    return ModeSeries(a.plus, a.depth, out)


def scalar_series(plus: bool, depth: int, coefficients: Dict[int, object]) -> ModeSeries:
    """Series with scalar coefficients keyed by power."""
    return ModeSeries(plus, depth, {p: Element.unit(x) for p, x in coefficients.items() if x})

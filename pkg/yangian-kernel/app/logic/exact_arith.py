"""
Exact scalar arithmetic.

Coefficients of algebra elements live in the field QQ(c) of rational functions
in the deformation parameter. R-matrix entries additionally depend on the
spectral symbols u, v, w and live in QQ(u, v, w, c). Both fields are sympy
sparse rational-function fields, so equal values have identical canonical forms.

Also provided here:
  * the coefficient streams of 1/(x - y + shift) in both expansion regions,
  * the binomial re-expansion coefficients used by spectral shifts,
  * exact linear solves over QQ(c) (sympy DomainMatrix).
"""
from enum import Enum
from math import comb
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union
import logging

from sympy import QQ
from sympy.polys.fields import FracElement, field
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, ring

from .errors import InvalidKernel

logger = logging.getLogger(__name__)

SCALARS, c = field("c", QQ)
SCALAR_DOMAIN = SCALARS.to_domain()

SPECTRAL_RING, pu, pv, pw, pc = ring("u,v,w,c", QQ)
SPECTRAL = SPECTRAL_RING.to_field()
u, v, w, cs = (SPECTRAL(g) for g in (pu, pv, pw, pc))

Scalar = FracElement
ScalarLike = Union[int, FracElement, PolyElement]


class RegionTag(str, Enum):
    """Which spectral slot of 1/(x - y + shift) is expanded in inverse powers."""

    FIRST_INVERSE = "first"
    SECOND_INVERSE = "second"


def to_scalar(value: ScalarLike) -> Scalar:
    """Coerce an int, rational or polynomial in c into QQ(c)."""
    if isinstance(value, FracElement) and value.field == SCALARS:
        return value
    return SCALARS(value)


def half(numerator: int) -> Scalar:
    """numerator/2 as a scalar (half-integers appear in the B-type shifts)."""
    return SCALARS(QQ(numerator, 2))


def ratfn_normalize(num: ScalarLike, den: ScalarLike) -> FracElement:
    """
    Build the reduced fraction num/den.

    Both arguments must live in the same field (QQ(c) or QQ(u,v,w,c)) or be
    polynomials of its ring. The sympy field keeps fractions reduced, so equal
    inputs give identical objects; use canonical_pair() for the monic form.

    Raises:
        InvalidKernel: if den is zero.
    """
    if not den:
        raise InvalidKernel("zero denominator in rational function")
    target = _field_of(num) or _field_of(den) or SCALARS
    return target(num) / target(den)


def _field_of(value) -> Optional[object]:
    if isinstance(value, FracElement):
        return value.field
    if isinstance(value, PolyElement):
        return value.ring.to_field()
    return None


def canonical_pair(value: FracElement) -> Tuple[PolyElement, PolyElement]:
    """Numerator and denominator scaled so that the denominator is monic."""
    lc = value.denom.LC
    return value.numer.quo_ground(lc), value.denom.quo_ground(lc)


def lift(value: Scalar) -> FracElement:
    """Embed an element of QQ(c) into QQ(u, v, w, c)."""
    value = to_scalar(value)
    num = SPECTRAL_RING.from_dict({(0, 0, 0, e): k for (e,), k in value.numer.terms()})
    den = SPECTRAL_RING.from_dict({(0, 0, 0, e): k for (e,), k in value.denom.terms()})
    return SPECTRAL(num) / SPECTRAL(den)


def c_valuation(value: Scalar) -> int:
    """Order of vanishing at c = 0 (negative for poles)."""
    if not value:
        raise InvalidKernel("valuation of zero is undefined")
    low_num = min(m[0] for m in value.numer.monoms())
    low_den = min(m[0] for m in value.denom.monoms())
    return low_num - low_den


def c_expansion(value: Scalar, top: int) -> Dict[int, object]:
    """
    Laurent coefficients of value at c = 0, up to and including c^top.

    Keys are powers of c, values are QQ elements; zero coefficients are omitted.
    """
    value = to_scalar(value)
    if not value:
        return {}
    num = {e: k for (e,), k in value.numer.terms()}
    den = {e: k for (e,), k in value.denom.terms()}
    low = min(den)
    num = {e - low: k for e, k in num.items()}
    den = {e - low: k for e, k in den.items()}
    lead = den[0]
    out: Dict[int, object] = {}
    for power in range(min(num), top + 1):
        acc = num.get(power, QQ.zero)
        for e, k in den.items():
            if e and power - e in out:
                acc -= k * out[power - e]
        if acc:
            out[power] = acc / lead
    return out


def render(value: FracElement) -> str:
    """Deterministic text form used in reports and exports."""
    num, den = canonical_pair(value)
    if den == den.ring.one:
        return str(num)
    return f"({num})/({den})"


def kernel_coefficient(shift: ScalarLike, region: RegionTag, a: int, b: int) -> Scalar:
    """
    Coefficient of one bidegree in the expansion of 1/(x - y + shift).

    FIRST_INVERSE: x is large, 1/(x-y+s) = sum_b (y-s)^b x^(-b-1); returns the
    coefficient of x^(-b-1) y^a. SECOND_INVERSE: y is large; returns the
    coefficient of y^(-b-1) x^a.
    """
    if a < 0 or b < 0:
        raise InvalidKernel(f"bidegree ({a}, {b}) must be nonnegative")
    if a > b:
        return SCALARS.zero
    s = to_scalar(shift)
    if region == RegionTag.FIRST_INVERSE:
        return comb(b, a) * (-s) ** (b - a)
    if region == RegionTag.SECOND_INVERSE:
        return -comb(b, a) * s ** (b - a)
    raise InvalidKernel(f"unknown region {region!r}")


def reexpansion_coefficient(a: ScalarLike, m: int, M: int) -> Scalar:
    """
    Coefficient carrying mode m of S(x) into mode M of S(x - a).

    Plus modes (m, M >= 0) use binom(M, m) a^(M-m); minus modes (m, M < 0) use
    binom(-m-1, -M-1) (-a)^(M-m). Modes never move between the two halves and
    never decrease.
    """
    if (m >= 0) != (M >= 0) or M < m:
        return SCALARS.zero
    shift = to_scalar(a)
    if m >= 0:
        return comb(M, m) * shift ** (M - m)
    return comb(-m - 1, -M - 1) * (-shift) ** (M - m)


def solve_in_span(
    columns: Sequence[Dict[Hashable, Scalar]],
    target: Dict[Hashable, Scalar],
    domain=SCALAR_DOMAIN,
) -> Optional[List[Scalar]]:
    """
    Solve sum_k x_k * columns[k] = target over QQ(c), or over another sympy domain.

    Vectors are sparse dicts keyed by basis labels. Returns one solution (free
    variables set to zero) or None if the system is inconsistent.
    """
    if not target:
        return [domain.zero] * len(columns)
    labels = sorted({key for col in columns for key in col} | set(target), key=repr)
    row_of = {label: r for r, label in enumerate(labels)}
    width = len(columns) + 1
    rows: Dict[int, Dict[int, Scalar]] = {}
    for k, col in enumerate(columns):
        for label, value in col.items():
            if value:
                rows.setdefault(row_of[label], {})[k] = value
    for label, value in target.items():
        if value:
            rows.setdefault(row_of[label], {})[width - 1] = value
    matrix = DomainMatrix(rows, (len(labels), width), domain)
    reduced, pivots = matrix.rref()
    if width - 1 in pivots:
        return None
    solution = [domain.zero] * len(columns)
    for r, p in enumerate(pivots):
        solution[p] = reduced[r, width - 1].element
    logger.debug(f"span solve: {len(labels)} rows, {len(columns)} columns, rank {len(pivots)}")
    return solution

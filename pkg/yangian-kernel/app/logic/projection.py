"""
Projections onto the intersections of standard and current Borel subalgebras.

An element is brought to the F-cut (minus modes before plus modes) or to the
E-cut normal form. Every normal word then splits as a minus word times a plus
word, and the counit kills each nonempty factor on the discarded side.
Composed currents are ordered products of simple-root currents at one
spectral point, summed coefficientwise over the window; their projections are
compared with Gauss coordinates on the modes that survive growing the window.
"""
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, combinations_with_replacement
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging

from sympy import QQ

from ..schemas import Report, TrustBox
from .algebra import AlgebraKind, Series
from .currents import (
    CurrentId,
    CurrentRealization,
    Family,
    RelationTag,
    bidegree_range,
    bidegrees,
    check_relation_line,
    expect_relation,
)
from .elements import EMPTY, Element, Word
from .errors import IndexOutOfRange, WindowOverflow
from .exact_arith import SCALARS, Scalar, c, half, pc, pu, pv, render
from .gauss import (
    IdentityTag,
    expect_series_equal,
    extract_gauss,
    hat_gauss,
    shift_series,
    tilde_gauss,
    verify_gauss_identity,
)
from .mode_algebra import Cut, ModeAlgebra
from .series import ModeSeries, product
from .verdict import Verdict, run_check

logger = logging.getLogger(__name__)

# coefficients of a two-sided series keyed by the power of u
PowerDict = Dict[int, Element]
Modes = Dict[int, Element]


class Projection(str, Enum):
    PF_PLUS = "Pf+"
    PF_MINUS = "Pf-"
    PE_PLUS = "Pe+"
    PE_MINUS = "Pe-"

    @property
    def family(self) -> Family:
        return Family.F if self.value.startswith("Pf") else Family.E

    @property
    def plus(self) -> bool:
        return self.value.endswith("+")


class BorelTag(str, Enum):
    F_MINUS = "XF-"
    F_PLUS = "XF+"
    E_PLUS = "XE+"
    E_MINUS = "XE-"

    @property
    def family(self) -> Family:
        return Family.F if self.value.startswith("XF") else Family.E

    @property
    def plus(self) -> bool:
        return self.value.endswith("+")

    @property
    def with_cartans(self) -> bool:
        """k+ modes sit in the F-side plus half, k- modes in the E-side minus half."""
        return self in (BorelTag.F_PLUS, BorelTag.E_MINUS)


@dataclass
class SpanFamily:
    """Ordered monomials over the generators of one Borel tag, each with its canonical Element."""

    tag: BorelTag
    box: TrustBox
    generators: List[CurrentId] = field(default_factory=list)
    words: List[Tuple[CurrentId, ...]] = field(default_factory=list)
    elements: List[Element] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.words)


def _as_powers(modes: Modes) -> PowerDict:
    return {-m - 1: x for m, x in modes.items()}


def coinciding_product(alg: ModeAlgebra, factors: Sequence[PowerDict]) -> PowerDict:
    """Product of series taken at one spectral point, over the powers each factor provides."""
    acc: PowerDict = {0: Element.unit()}
    for factor in factors:
        step: PowerDict = {}
        for p, x in acc.items():
            for q, y in factor.items():
                if x and y:
                    step[p + q] = step.get(p + q, Element()) + alg.multiply(x, y)
        acc = step
    return acc


# ---- composed currents ----------------------------------------------------------


def composed_factors(kind: AlgebraKind, i: int, j: int) -> Tuple[int, List[int]]:
    """
    (sign, indices) with F_{j,i}(u) = sign * F_{t_1}(u) ... F_{t_r}(u).

    For D a product crossing zero uses F_0 in place of F_{-1} (with sign -1),
    a product starting at 0 skips F_1, and the pair (0, 1) gives sign 0.
    """
    idx = kind.index_set()
    if i not in idx or j not in idx or i >= j:
        raise IndexOutOfRange(f"({i}, {j}) is not an ordered index pair of {kind.code}")
    if kind.series != Series.D:
        return 1, list(range(i, j))
    if (i, j) == (0, 1):
        return 0, []
    if j <= 0 or i >= 1:
        return 1, list(range(i, j))
    if j == 1:
        return -1, list(range(i, -1)) + [0]
    if i == 0:
        return 1, [0] + list(range(2, j))
    return -1, list(range(i, -1)) + [0] + list(range(1, j))


class TopFormula(NamedTuple):
    name: str
    coordinate: Tuple[int, int]
    sign: int
    # (root, shift in units of c): F_root(u + shift * c)
    factors: List[Tuple[int, Scalar]]


FORMULA_NAMES = {Series.A: "top-A", Series.B: "top-B", Series.C: "top-C", Series.D: "top-D"}


def top_formula(kind: AlgebraKind) -> TopFormula:
    """Right-upper F coordinate as a signed product of shifted simple-root currents."""
    n = kind.rank
    zero = SCALARS.zero
    name = FORMULA_NAMES[kind.series]
    if kind.series == Series.A:
        return TopFormula(name, (n, 1), 1, [(k, zero) for k in range(1, n)])
    tail = [(k, zero) for k in range(0, n)]
    if kind.series == Series.B:
        wing = [(k, half(1) - k) for k in range(n - 1, 0, -1)] + [(0, half(1))]
        return TopFormula(name, (n, -n), (-1) ** n, wing + tail)
    if kind.series == Series.C:
        wing = [(k, SCALARS(-(k + 1))) for k in range(n - 1, 0, -1)]
        return TopFormula(name, (n, -n + 1), (-1) ** (n - 1), wing + tail)
    wing = [(k, SCALARS(-(k - 1))) for k in range(n - 1, 1, -1)]
    return TopFormula(name, (n, -n + 1), (-1) ** (n - 1), wing + tail)


def formula_tree(kind: AlgebraKind, name: Optional[str] = None) -> dict:
    """Expression tree of the top formula: signed list of shifted current factors."""
    formula = top_formula(kind)
    if name is not None and name != formula.name:
        raise IndexOutOfRange(f"formula {name!r} does not belong to {kind.code}; expected {formula.name}")
    return {
        "formula": formula.name,
        "algebra": kind.code,
        "coordinate": list(formula.coordinate),
        "sign": formula.sign,
        "factors": [{"root": root, "shift": render(c * amount)} for root, amount in formula.factors],
    }


def to_sexpr(tree: dict) -> str:
    factors = " ".join(f"(current {f['root']} (shift {f['shift']}))" for f in tree["factors"])
    body = f"(times {factors})"
    return f"(neg {body})" if tree["sign"] < 0 else body


# ---- projector --------------------------------------------------------------------


class Projector:
    """
    Projections and composed currents of one (kind, TrustBox).

    F-side work runs in the F-cut algebra, E-side work in the E-cut algebra;
    both share the same T-mode generators.
    """

    def __init__(self, kind: AlgebraKind, box: TrustBox, signs: Sequence[bool] = (True, False)):
        self.kind = kind
        self.box = box
        self.f_side = CurrentRealization(ModeAlgebra(kind, box, cut=Cut.F), signs)
        self.e_alg = ModeAlgebra(kind, box, cut=Cut.E)
        self._tildes = None

    @property
    def alg(self) -> ModeAlgebra:
        return self.f_side.alg

    @property
    def trusted(self) -> bool:
        return self.alg.trusted and self.e_alg.trusted

    def side(self, family: Family) -> ModeAlgebra:
        return self.alg if family == Family.F else self.e_alg

    def modes(self) -> List[int]:
        return sorted(self.f_side.window(False) + self.f_side.window(True))

    def tildes(self):
        if self._tildes is None:
            self._tildes = tilde_gauss(self.alg, self.f_side.table(False))
        return self._tildes

    # ---- splitting ----------------------------------------------------------

    def decompose(self, e: Element, family: Family = Family.F) -> List[Tuple[Word, Element]]:
        """
        Pairs (minus word, plus Element) with e = sum minus * plus (F side) or plus * minus (E side).

        The pairs are read off the cut normal form, so the minus words are
        distinct and the counit image does not depend on any choice.
        """
        alg = self.side(family)
        leading_plus = family == Family.E
        groups: Dict[Word, Dict[Word, Scalar]] = {}
        for word, x in alg.normal_form(e).terms.items():
            cut = 0
            while cut < len(word) and word[cut].is_plus == leading_plus:
                cut += 1
            if leading_plus:
                plus, minus = word[:cut], word[cut:]
            else:
                minus, plus = word[:cut], word[cut:]
            groups.setdefault(minus, {})[plus] = x
        return [(minus, Element(groups[minus])) for minus in sorted(groups, key=lambda w: (len(w), w))]

    def project(self, e: Element, which: Projection) -> Element:
        """Apply the counit to the discarded half of every split term."""
        which = Projection(which)
        out = Element()
        for minus, plus in self.decompose(e, which.family):
            if which.plus:
                if minus == EMPTY:
                    out = out + plus
            else:
                out = out + Element.from_word(minus, plus.constant())
        return out

    def project_modes(self, modes: Modes, which: Projection) -> Modes:
        return {m: self.project(x, which) for m, x in modes.items()}

    # ---- currents -------------------------------------------------------------

    def series_modes(self, series: ModeSeries) -> Modes:
        """Window modes of a one-sided series; the other side reads as zero."""
        out = {m: Element() for m in self.modes()}
        for m in self.f_side.window(series.plus):
            out[m] = series.mode(m)
        return out

    def one_sided_powers(self, series: ModeSeries) -> PowerDict:
        if series.plus not in self.f_side.signs:
            return {}
        window = self.f_side.window(series.plus)
        return {p: series.at(p) for p in series.power_range() if p == 0 or -p - 1 in window}

    def shifted_current(self, family: Family, index: int, amount: Scalar = SCALARS.zero) -> Modes:
        """Window modes of X_index(u + amount * c)."""
        if not amount:
            return self.f_side.current(family, index)
        modes: Modes = {}
        for plus in self.f_side.signs:
            series = shift_series(self.alg, self.f_side.coordinate(family, index, plus), -c * amount)
            for m in self.f_side.window(plus):
                modes[m] = series.mode(m) if plus else -series.mode(m)
        return modes

    def product_modes(self, family: Family, factors: Sequence[Tuple[int, Scalar]], sign: int = 1) -> Modes:
        alg = self.side(family)
        series = [_as_powers(self.shifted_current(family, index, amount)) for index, amount in factors]
        total = coinciding_product(alg, series)
        return {m: total.get(-m - 1, Element()).scale(sign) for m in self.modes()}

    def composed(self, family: Family, i: int, j: int) -> Modes:
        """F_{j,i}(u) or E_{i,j}(u); the E product runs in reverse order."""
        sign, indices = composed_factors(self.kind, i, j)
        if family == Family.E:
            indices = list(reversed(indices))
        return self.product_modes(family, [(t, SCALARS.zero) for t in indices], sign)

    def projected(self, which: Projection, i: int, j: int) -> Modes:
        which = Projection(which)
        return self.project_modes(self.composed(which.family, i, j), which)

    def target(self, which: Projection, i: int, j: int) -> Modes:
        """F+_{j,i}, F~-_{j,i}, E+_{i,j} or E~-_{i,j} as window modes."""
        which = Projection(which)
        if which.plus not in self.f_side.signs:
            return {m: Element() for m in self.modes()}
        if which == Projection.PF_PLUS:
            series = self.f_side.table(True).f(j, i)
        elif which == Projection.PE_PLUS:
            series = self.f_side.table(True).e(i, j)
        elif which == Projection.PF_MINUS:
            series = self.tildes()[0][(j, i)]
        else:
            series = self.tildes()[1][(i, j)]
        return self.series_modes(series)


def span_family(kind: AlgebraKind, tag: BorelTag, box: TrustBox) -> SpanFamily:
    """
    Every ordered monomial of length <= maxlen over the window generators of tag.

    Words are nondecreasing in the cut order (currents before Cartans, then by
    mode; E-side modes run downwards) and carry the normal form of their product.
    """
    tag = BorelTag(tag)
    proj = Projector(kind, box)
    cur = proj.f_side
    alg = proj.side(tag.family)
    window = cur.window(tag.plus)
    gens: List[Tuple[CurrentId, Element]] = []
    for i in kind.roots():
        modes = cur.current(tag.family, i)
        gens += [(CurrentId(tag.family, i, m), modes[m]) for m in window]
    if tag.with_cartans:
        for j in kind.cartans():
            series = cur.cartan(j, tag.plus)
            gens += [(CurrentId(Family.K, j, m), series.mode(m)) for m in window]
    direction = 1 if tag.family == Family.F else -1
    gens.sort(key=lambda item: (item[0].family == Family.K, direction * item[0].mode, item[0].index))
    family = SpanFamily(tag, box, generators=[g for g, _ in gens])
    for length in range(box.maxlen + 1):
        for positions in combinations_with_replacement(range(len(gens)), length):
            family.words.append(tuple(gens[p][0] for p in positions))
            family.elements.append(alg.multiply(*[gens[p][1] for p in positions]))
    logger.debug(f"span family {tag.value} for {kind}: {len(gens)} generators, {len(family)} words")
    return family


def decompose_minus_plus(kind: AlgebraKind, e: Element, box: TrustBox) -> List[Tuple[Word, Element]]:
    return Projector(kind, box).decompose(e, Family.F)


def project(kind: AlgebraKind, e: Element, which: Projection, box: TrustBox) -> Element:
    return Projector(kind, box).project(e, which)


def composed_current(kind: AlgebraKind, family: Family, i: int, j: int, box: TrustBox) -> Modes:
    return Projector(kind, box).composed(Family(family), i, j)


# ---- comparisons ------------------------------------------------------------------

# composed-current lines are only certified when these modes survive window growth
REQUIRED_STABLE_MODES = (0, 1)


class StabilityCheck(NamedTuple):
    """
    A window-sensitive identity.

    lhs is recomputed under every window; rhs is read off the smallest one.
    Single-current lines are exact and compare every mode of one window.
    """

    label: str
    family: Family
    lhs: Callable[[Projector], Modes]
    rhs: Callable[[Projector], Modes]
    exact: bool = False


def stable_modes(verdict: Verdict, runs: Sequence[Modes], label: str) -> List[int]:
    """Modes of the first run that agree in every later run; the rest are flagged unstable."""
    first = runs[0]
    stable = []
    for m in sorted(first):
        if all(m in other and not (other[m] - first[m]) for other in runs[1:]):
            stable.append(m)
        else:
            verdict.unstable(f"{label} mode {m} changes as the window grows")
    return stable


def _compare(verdict: Verdict, alg: ModeAlgebra, lhs: Modes, rhs: Modes, label: str, modes: Sequence[int]) -> None:
    for m in modes:
        residual = alg.residual(lhs[m] - rhs.get(m, Element()))
        verdict.expect_zero(residual, f"{label}[{m}]", trusted=alg.trusted)


def check_stability(verdict: Verdict, projectors: Sequence[Projector], check: StabilityCheck) -> None:
    """
    Compare check.lhs with check.rhs on the modes that agree under every projector.

    A stable mismatch fails. Unstable modes, and required modes the window
    does not carry, leave the line inconclusive.
    """
    first = projectors[0]
    lhs = check.lhs(first)
    rhs = check.rhs(first)
    alg = first.side(check.family)
    if check.exact:
        _compare(verdict, alg, lhs, rhs, check.label, sorted(lhs))
        return
    runs = [lhs] + [check.lhs(p) for p in projectors[1:]]
    stable = stable_modes(verdict, runs, check.label)
    missing = [m for m in REQUIRED_STABLE_MODES if m not in lhs]
    if missing:
        verdict.inconclusive(f"{check.label}: modes {missing} lie outside the window")
    _compare(verdict, alg, lhs, rhs, check.label, stable)


def _growing(box: TrustBox, boxes: Optional[Sequence[TrustBox]]) -> List[TrustBox]:
    larger = [box.grown()] if boxes is None else list(boxes)
    windows = [box] + larger
    for small, big in zip(windows, windows[1:]):
        if big.lminus <= small.lminus or big.lplus <= small.lplus:
            raise WindowOverflow("window stability needs strictly growing windows")
    return windows


def _run_stability(verdict: Verdict, kind: AlgebraKind, check: StabilityCheck, windows: Sequence[TrustBox]) -> None:
    projectors = [Projector(kind, b) for b in (windows[:1] if check.exact else windows)]
    check_stability(verdict, projectors, check)


def composed_projection_check(kind: AlgebraKind, i: int, j: int, which: Projection) -> StabilityCheck:
    """P+_f F_{j,i} = F+_{j,i} and its three companions as a stability check."""
    which = Projection(which)
    _, indices = composed_factors(kind, i, j)
    return StabilityCheck(
        f"{which.value}({i},{j})",
        which.family,
        lambda p: p.projected(which, i, j),
        lambda p: p.target(which, i, j),
        exact=len(indices) <= 1,
    )


def top_coordinate_check(kind: AlgebraKind) -> StabilityCheck:
    formula = top_formula(kind)
    j, i = formula.coordinate

    def lhs(p: Projector) -> Modes:
        return p.project_modes(p.product_modes(Family.F, formula.factors, formula.sign), Projection.PF_PLUS)

    return StabilityCheck(
        formula.name,
        Family.F,
        lhs,
        lambda p: p.target(Projection.PF_PLUS, i, j),
        exact=len(formula.factors) == 1,
    )


def verify_composed_projection(
    kind: AlgebraKind,
    i: int,
    j: int,
    which: Projection,
    box: TrustBox,
    boxes: Optional[Sequence[TrustBox]] = None,
) -> Report:
    """
    P+_f F_{j,i} = F+_{j,i}, P-_f F_{j,i} = F~-_{j,i}, P+_e E_{i,j} = E+_{i,j}, P-_e E_{i,j} = E~-_{i,j}.

    boxes are the larger windows used to certify products of two or more currents
    (default: the box grown by one).
    """
    check = composed_projection_check(kind, i, j, which)
    windows = _growing(box, boxes)
    return run_check(
        f"composed-projection:{Projection(which).value}:{i},{j}",
        kind,
        box,
        lambda verdict: _run_stability(verdict, kind, check, windows),
    )


def top_coordinate(kind: AlgebraKind, box: TrustBox, boxes: Optional[Sequence[TrustBox]] = None) -> Report:
    """The right-upper F+ coordinate against its signed product of shifted currents."""
    check = top_coordinate_check(kind)
    windows = _growing(box, boxes)
    return run_check(f"top-coordinate:{check.label}", kind, box, lambda verdict: _run_stability(verdict, kind, check, windows))


def window_stability(kind: AlgebraKind, check: StabilityCheck, boxes: Sequence[TrustBox]) -> Report:
    """
    Run check under every box and verify its stable modes against the right-hand side.

    Raises:
        WindowOverflow: for fewer than two boxes or windows that do not grow.
    """
    if len(boxes) < 2:
        raise WindowOverflow("window stability needs at least two boxes")
    windows = _growing(boxes[0], boxes[1:])

    def body(verdict: Verdict) -> None:
        check_stability(verdict, [Projector(kind, b) for b in windows], check)

    return run_check(f"window-stability:{check.label}", kind, boxes[0], body)


# ---- recursions and two-point commutators -------------------------------------------


class RecursionStep(NamedTuple):
    target: Tuple[int, int]
    previous: int
    current: int
    sign: int
    plus: bool


def recursion_steps(kind: AlgebraKind) -> List[RecursionStep]:
    """
    Plus steps F+_{j,k} = sign * P+_f(F+_{prev,k} F_t); for gl_N also the minus steps
    F~-_{j,i} = P-_f(F_i F~-_{j,i+1}).
    """
    steps = []
    for k, j in combinations(kind.index_set(), 2):
        if kind.series != Series.D or j <= 0 or k >= 1:
            steps.append(RecursionStep((j, k), j - 1, j - 1, 1, True))
        elif j == 1 and k <= -2:
            steps.append(RecursionStep((1, k), -1, 0, -1, True))
        elif j == 2 and k <= -1:
            steps.append(RecursionStep((2, k), 1, 1, 1, True))
        elif j >= 3:
            steps.append(RecursionStep((j, k), j - 1, j - 1, 1, True))
        if kind.series == Series.A:
            steps.append(RecursionStep((j, k), j, k, 1, False))
    return steps


def _recursion_value(p: Projector, step: RecursionStep) -> Modes:
    j, k = step.target
    current = _as_powers(p.f_side.current(Family.F, step.current))
    if step.plus:
        previous = p.one_sided_powers(p.f_side.table(True).f(step.previous, k))
        total = coinciding_product(p.alg, [previous, current])
        which = Projection.PF_PLUS
    else:
        rest = {0: Element.unit()} if j == k + 1 else p.one_sided_powers(p.tildes()[0][(j, k + 1)])
        total = coinciding_product(p.alg, [current, rest])
        which = Projection.PF_MINUS
    return {m: p.project(total.get(-m - 1, Element()).scale(step.sign), which) for m in p.modes()}


def _check_recursion(verdict: Verdict, projectors: Sequence[Projector], step: RecursionStep) -> None:
    j, k = step.target
    which = Projection.PF_PLUS if step.plus else Projection.PF_MINUS
    check = StabilityCheck(
        f"{which.value} recursion ({k},{j})",
        Family.F,
        lambda p: _recursion_value(p, step),
        lambda p: p.target(which, k, j),
        exact=step.previous == k if step.plus else j == k + 1,
    )
    check_stability(verdict, projectors, check)


SeriesRef = Tuple[Optional[ModeSeries], str]


def _ref_value(cur: CurrentRealization, ref: SeriesRef, power: int) -> Optional[Element]:
    series, _ = ref
    if series is None:
        return Element.unit() if power == 0 else Element()
    return cur.one_sided(series, power)


def two_point_coefficient(
    cur: CurrentRealization, terms: Sequence[Tuple[object, SeriesRef, SeriesRef]], a: int, b: int
) -> Optional[Element]:
    """Coefficient of u^a v^b of sum kernel(u, v) X(.) Y(.) over one-sided series; None beyond the window."""
    total = Element()
    for kernel, first, second in terms:
        for (s, t), x in bidegrees(kernel).items():
            powers = {"u": a - s, "v": b - t}
            left = _ref_value(cur, first, powers[first[1]])
            right = _ref_value(cur, second, powers[second[1]])
            if left is None or right is None:
                return None
            if left and right:
                total = total + (left * right).scale(x)
    return total


def _commutator_pairs(kind: AlgebraKind) -> List[Tuple[int, int]]:
    idx = kind.index_set()
    pairs = list(zip(idx, idx[1:]))
    if kind.series in (Series.C, Series.D):
        pairs = [(low, high) for low, high in pairs if low >= 1]
    return pairs


def gauss_commutator_lines(cur: CurrentRealization, low: int, high: int) -> List[Tuple[str, list]]:
    """
    Cleared two-point relations between E+_{low,high}(v), F-_{high,low}(u) and k+_low(v).

    (v - u)[E+(v), F-(u)] = c (psi-(u) - psi+(v)) with psi = k_low k_high^{-1};
    (u - v) k+(v) F-(u) = (u - v + c) F-(u) k+(v) - c F+(v) k+(v), and for the
    short root of o_{2n+1} the version carrying F+(v + c/2).
    """
    alg = cur.alg
    up, down = cur.table(True), cur.table(False)
    psi_plus = product(alg, up.k(low), up.k_inv(high))
    psi_minus = product(alg, down.k(low), down.k_inv(high))
    e_plus, f_minus, f_plus, k_plus = up.e(low, high), down.f(high, low), up.f(high, low), up.k(low)
    lines = [
        (
            f"[E+[{low},{high}](v), F-[{high},{low}](u)]",
            [
                (pv - pu, (e_plus, "v"), (f_minus, "u")),
                (pu - pv, (f_minus, "u"), (e_plus, "v")),
                (-pc, (psi_minus, "u"), (None, "v")),
                (pc, (psi_plus, "v"), (None, "u")),
            ],
        )
    ]
    fk = product(alg, f_plus, k_plus)
    if cur.kind.series == Series.B and (low, high) == (0, 1):
        fk_shifted = product(alg, shift_series(alg, f_plus, -c * half(1)), k_plus)
        d = pv - pu
        h = pc * QQ(1, 2)
        lines.append(
            (
                "k+[0](v) F-[1,0](u)",
                [
                    (d * (d + h), (k_plus, "v"), (f_minus, "u")),
                    (-(d + pc) * (d - h), (f_minus, "u"), (k_plus, "v")),
                    (-pc * (d + h), (fk, "v"), (None, "u")),
                    (pc * d, (fk_shifted, "v"), (None, "u")),
                ],
            )
        )
    else:
        lines.append(
            (
                f"k+[{low}](v) F-[{high},{low}](u)",
                [
                    (pu - pv, (k_plus, "v"), (f_minus, "u")),
                    (-(pu - pv + pc), (f_minus, "u"), (k_plus, "v")),
                    (pc, (fk, "v"), (None, "u")),
                ],
            )
        )
    return lines


def _check_gauss_commutators(verdict: Verdict, cur: CurrentRealization) -> None:
    kind = cur.kind
    for low, high in _commutator_pairs(kind):
        uses_k0 = kind.series != Series.A and low <= 0
        for label, terms in gauss_commutator_lines(cur, low, high):
            for a in bidegree_range(cur.box):
                for b in bidegree_range(cur.box):
                    value = two_point_coefficient(cur, terms, a, b)
                    if value is not None:
                        expect_relation(verdict, cur, value, f"{label} u^{a} v^{b}", uses_k0)


def verify_recursions(kind: AlgebraKind, box: TrustBox, boxes: Optional[Sequence[TrustBox]] = None) -> Report:
    """Two-point Gauss commutators and the recursive construction of the F coordinates."""

    def body(verdict: Verdict) -> None:
        projectors = [Projector(kind, b) for b in _growing(box, boxes)]
        _check_gauss_commutators(verdict, projectors[0].f_side)
        for step in recursion_steps(kind):
            _check_recursion(verdict, projectors, step)

    return run_check("recursions", kind, box, body)


# ---- hat automorphism ------------------------------------------------------------------


class HatRealization(CurrentRealization):
    """Currents read off the Gauss coordinates of (T^{-1})^t."""

    def table(self, plus: bool):
        if plus not in self._tables:
            self._tables[plus] = hat_gauss(self.alg, extract_gauss(self.alg, plus))
        return self._tables[plus]


HAT_RELATION_SAMPLE = [RelationTag.KF_DIAGONAL, RelationTag.FF_SAME, RelationTag.EE_SAME, RelationTag.EF_DELTA]


def _hat_factors(kind: AlgebraKind, family: Family, i: int, j: int) -> List[Tuple[int, Scalar]]:
    """X^_t(u) = -X_{N-t}(u - (N-t)c) for t = i..j-1, in product order."""
    n = kind.rank
    order = range(i, j) if family == Family.F else reversed(range(i, j))
    return [(n - t, SCALARS(-(n - t))) for t in order]


def _check_hat_currents(verdict: Verdict, proj: Projector, hat: HatRealization) -> None:
    alg = proj.alg
    n = proj.kind.rank
    for i in proj.kind.roots():
        for family in (Family.F, Family.E):
            image = proj.shifted_current(family, n - i, SCALARS(-(n - i)))
            for m, x in hat.current(family, i).items():
                verdict.expect_equal(
                    alg.normal_form(x), alg.normal_form(-image[m]), f"{family.value}^{i}[{m}]", trusted=alg.trusted
                )


def _check_hat_lines(verdict: Verdict, projectors: Sequence[Projector]) -> None:
    """Projections of hat composed currents and the shifted tilde/hat coordinate identities."""
    proj = projectors[0]
    kind, alg = proj.kind, proj.alg
    n = kind.rank
    hats = {plus: hat_gauss(alg, proj.f_side.table(plus)) for plus in (True, False)}
    plus_tilde_f, plus_tilde_e = tilde_gauss(alg, proj.f_side.table(True))
    minus_tilde_f, minus_tilde_e = proj.tildes()
    down = proj.f_side.table(False)
    for i, j in combinations(kind.index_set(), 2):
        ip, jp = kind.prime(i), kind.prime(j)
        single = j == i + 1
        sign = (-1) ** (j - i)
        expect_series_equal(
            verdict, alg, hats[True].f(j, i), shift_series(alg, plus_tilde_f[(ip, jp)], c * (n + 1 - j)), f"F^+[{j},{i}]"
        )
        expect_series_equal(
            verdict, alg, hats[True].e(i, j), shift_series(alg, plus_tilde_e[(jp, ip)], c * (n + 1 - j)), f"E^+[{i},{j}]"
        )
        expect_series_equal(
            verdict, alg, minus_tilde_f[(j, i)], shift_series(alg, hats[False].f(ip, jp), -c * i), f"F~-[{j},{i}]"
        )
        expect_series_equal(
            verdict, alg, minus_tilde_e[(i, j)], shift_series(alg, hats[False].e(jp, ip), -c * i), f"E~-[{i},{j}]"
        )
        cases = [
            (Projection.PF_PLUS, proj.series_modes(hats[True].f(j, i))),
            (Projection.PE_PLUS, proj.series_modes(hats[True].e(i, j))),
            (Projection.PF_MINUS, proj.series_modes(shift_series(alg, down.f(ip, jp), c * (n - i)))),
            (Projection.PE_MINUS, proj.series_modes(shift_series(alg, down.e(jp, ip), c * (n - i)))),
        ]
        for which, rhs in cases:

            def compute(p: Projector, which=which) -> Modes:
                return p.project_modes(p.product_modes(which.family, _hat_factors(kind, which.family, i, j), sign), which)

            check = StabilityCheck(f"{which.value} hat({i},{j})", which.family, compute, lambda p, rhs=rhs: rhs, exact=single)
            check_stability(verdict, projectors, check)


def verify_hat_projections(kind: AlgebraKind, box: TrustBox, boxes: Optional[Sequence[TrustBox]] = None) -> Report:
    """
    Double hat shift for every series; for gl_N also the hat current map, a
    sample of relations among hat currents, and the projection lines of hat
    composed currents.
    """

    def body(verdict: Verdict) -> None:
        verdict.absorb(verify_gauss_identity(kind, IdentityTag.DOUBLE_HAT, box))
        if kind.series != Series.A:
            return
        projectors = [Projector(kind, b) for b in _growing(box, boxes)]
        proj = projectors[0]
        hat = HatRealization(proj.alg, signs=(True,))
        _check_hat_currents(verdict, proj, hat)
        for tag in HAT_RELATION_SAMPLE:
            check_relation_line(verdict, hat, tag)
        _check_hat_lines(verdict, projectors)

    return run_check("hat-projections", kind, box, body)

"""
The truncated Yangian double as a rewrite system on T-operator modes.

Commutators [T^mu_ij[l], T^nu_kl[m]] are read off the RTT relation after
clearing its denominators (u - v)(u - v + c kappa): with X(u, v) the
commutator series and RHS the cleared right-hand side, D(u, v) X(u, v) = RHS
holds coefficientwise, and the resulting recurrence in the two powers is
triangular in a direction that depends on the sign pattern. Normal forms put
every word into the order of the active cut; every stored term has filtration
degree (word length plus c-valuation) at most maxlen.

For B, C and D the quotient by the crossing relation T(u - c kappa)^t T(u) =
z(u) I is not a rewrite rule: residual() decides membership in the ideal it
generates by an exact linear solve.
"""
from contextlib import contextmanager
from enum import Enum
from typing import Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple
import logging
import random

from sympy import QQ, Rational

from ..schemas import Report, TrustBox
from .algebra import AlgebraKind
from .elements import EMPTY, Element, Gen, TensorElement, Word, degree, word_weight
from .errors import Inconclusive, InternalInconsistency, InvalidAlgebra, WindowOverflow
from .exact_arith import SCALARS, Scalar, c, c_expansion, c_valuation, solve_in_span, to_scalar
from .series import ModeSeries, product, series_sum, shift
from .verdict import Verdict, run_check

logger = logging.getLogger(__name__)

# (mu plus?, nu plus?, i, j, k, l)
FamilyKey = Tuple[bool, bool, int, int, int, int]

IDEAL_CLOSURE_ROUNDS = 2
MAX_IDEAL_COLUMNS = 4000


class Cut(str, Enum):
    """Linear cut of the cyclic generator order."""

    F = "F"  # minus modes before plus modes
    E = "E"  # plus modes before minus modes


class Strategy(str, Enum):
    LEFTMOST = "leftmost"
    RIGHTMOST = "rightmost"


class RuleStore:
    """Commutator tables keyed by content hash, shared by every ModeAlgebra of one (kind, TrustBox)."""

    def __init__(self):
        self._tables: Dict[str, Dict[Tuple[Gen, Gen], Element]] = {}

    def table(self, key: str) -> Dict[Tuple[Gen, Gen], Element]:
        return self._tables.setdefault(key, {})

    def clear(self) -> None:
        self._tables.clear()


RULE_STORE = RuleStore()


class Relation(NamedTuple):
    """One generator of the crossing ideal, indexed by its lowest-degree words."""

    name: str
    element: Element
    floor: int
    leading: Tuple[Word, ...]

    @classmethod
    def of(cls, name: str, element: Element, floor: int, extra: Tuple[Word, ...] = ()) -> "Relation":
        low = min(degree(w, x) for w, x in element)
        leading = tuple(w for w, x in element.sorted_terms() if degree(w, x) == low)
        return cls(name, element, floor, leading + tuple(w for w in extra if w not in leading))


def graded_terms(e: Element, maxlen: int) -> Dict[Tuple[Word, int], object]:
    """Rational coefficients of c^p word, for every word with len(word) + p <= maxlen."""
    out: Dict[Tuple[Word, int], object] = {}
    for word, x in e:
        for power, q in c_expansion(x, maxlen - len(word)).items():
            out[(word, power)] = q
    return out


class ModeAlgebra:
    """
    Rewrite system of one (kind, TrustBox).

    reduce=False gives the free algebra on the same generators (products are
    only truncated, never reordered); matrix-factorization identities hold
    there as well. kappa overrides the crossing parameter for negative
    controls.
    """

    def __init__(
        self,
        kind: AlgebraKind,
        box: TrustBox,
        cut: Cut = Cut.F,
        reduce: bool = True,
        kappa: Optional[Scalar] = None,
    ):
        self.kind = kind
        self.box = box
        self.cut = cut
        self.reduce = reduce
        self.kappa = kind.kappa() if kappa is None else to_scalar(kappa)
        # kappa overrides keep a private table
        self.rules: Dict[Tuple[Gen, Gen], Element] = (
            RULE_STORE.table(box.content_hash(kind.code)) if kappa is None else {}
        )
        self._families: Dict[FamilyKey, Dict[Tuple[int, int], Element]] = {}
        self._ztables: Dict[bool, ModeSeries] = {}
        self._crossing: Dict[bool, Dict[Tuple[int, int], ModeSeries]] = {}
        self._relations: Dict[bool, Tuple[List[Relation], List[Relation]]] = {}
        self._placements: Dict[Tuple[Word, str, Word], Dict[Tuple[Word, int], object]] = {}
        self.dropped = False
        self.leaked = False
        self.fuel_used = 0
        self._index = set(kind.index_set())

    @property
    def trusted(self) -> bool:
        """False once a computation both dropped terms and met a negative c-valuation."""
        return not (self.dropped and self.leaked)

    def reset_trust(self) -> None:
        self.dropped = False
        self.leaked = False

    @contextmanager
    def scoped_trust(self) -> Iterator["ModeAlgebra"]:
        """
        Track dropped and leaked terms for one computation.

        Inside the block trusted reflects only that computation; on exit the
        instance flags keep the union of both.
        """
        dropped, leaked = self.dropped, self.leaked
        self.reset_trust()
        try:
            yield self
        finally:
            self.dropped = self.dropped or dropped
            self.leaked = self.leaked or leaked

    # ---- generators and order -------------------------------------------------

    def check_generator(self, g: Gen) -> None:
        if g.i not in self._index or g.j not in self._index:
            raise InvalidAlgebra(f"{g} has an index outside {self.kind.index_set()}")
        lo, hi = self.box.generator_bounds
        if not lo <= g.mode <= hi:
            raise WindowOverflow(f"{g} lies outside the generator window [{lo}, {hi}]")

    def order_key(self, g: Gen) -> Tuple[int, int, int, int]:
        if self.cut == Cut.F:
            return (0 if g.mode < 0 else 1, g.mode, g.i, g.j)
        return (0 if g.mode >= 0 else 1, g.mode, g.i, g.j)

    def is_ordered(self, word: Word) -> bool:
        return all(self.order_key(a) <= self.order_key(b) for a, b in zip(word, word[1:]))

    # ---- commutator rules -----------------------------------------------------

    def _coef(self, plus: bool, i: int, j: int, power: int) -> Element:
        """Coefficient of u^power in T^{plus/minus}_ij(u)."""
        if plus:
            if power == 0:
                return Element.unit(1) if i == j else Element()
            return Element.gen(i, j, -power - 1) if power < 0 else Element()
        if power < 0:
            return Element()
        value = Element.gen(i, j, -power - 1)
        return value + Element.unit(1) if power == 0 and i == j else value

    def _a_term(self, key: FamilyKey, P: int, Q: int) -> Element:
        mu, nu, i, j, k, l = key
        return self._coef(nu, k, j, Q) * self._coef(mu, i, l, P) - self._coef(mu, k, j, P) * self._coef(nu, i, l, Q)

    def _b_term(self, key: FamilyKey, P: int, Q: int) -> Element:
        mu, nu, i, j, k, l = key
        kind = self.kind
        acc = Element()
        if k == kind.prime(i):
            for p in kind.index_set():
                acc = acc + (self._coef(mu, p, j, P) * self._coef(nu, kind.prime(p), l, Q)).scale(
                    kind.epsilon(p) * kind.epsilon(i)
                )
        if l == kind.prime(j):
            for p in kind.index_set():
                acc = acc - (self._coef(nu, k, kind.prime(p), Q) * self._coef(mu, i, p, P)).scale(
                    kind.epsilon(p) * kind.epsilon(j)
                )
        return acc

    def _rhs(self, key: FamilyKey, P: int, Q: int) -> Element:
        if self.kappa is None:
            return self._a_term(key, P, Q).scale(c)
        ck = c * self.kappa
        a_part = self._a_term(key, P - 1, Q) - self._a_term(key, P, Q - 1) + self._a_term(key, P, Q).scale(ck)
        b_part = self._b_term(key, P - 1, Q) - self._b_term(key, P, Q - 1)
        return (a_part + b_part).scale(c)

    @staticmethod
    def _supported(plus: bool, power: int) -> bool:
        return power <= -1 if plus else power >= 0

    def _family_value(self, key: FamilyKey, p: int, q: int) -> Element:
        """Coefficient of u^p v^q in [T^mu_ij(u), T^nu_kl(v)]."""
        mu, nu = key[0], key[1]
        if not (self._supported(mu, p) and self._supported(nu, q)):
            return Element()
        memo = self._families.setdefault(key, {})
        if (p, q) in memo:
            return memo[(p, q)]
        X = lambda a, b: self._family_value(key, a, b)  # noqa: E731
        if self.kappa is None:
            if mu:
                value = self._rhs(key, p + 1, q) + X(p + 1, q - 1)
            elif nu:
                value = X(p - 1, q + 1) - self._rhs(key, p, q + 1)
            else:
                value = self._rhs(key, p + 1, q) + X(p + 1, q - 1)
        else:
            ck = c * self.kappa
            if mu:
                value = (
                    self._rhs(key, p + 2, q)
                    + X(p + 1, q - 1).scale(2)
                    - X(p + 2, q - 2)
                    - X(p + 1, q).scale(ck)
                    + X(p + 2, q - 1).scale(ck)
                )
            elif nu:
                value = (
                    self._rhs(key, p, q + 2)
                    - X(p - 2, q + 2)
                    + X(p - 1, q + 1).scale(2)
                    - X(p - 1, q + 2).scale(ck)
                    + X(p, q + 1).scale(ck)
                )
            else:
                inner = self._rhs(key, p + 1, q) - X(p - 1, q) + X(p, q - 1).scale(2) - X(p + 1, q - 2)
                value = inner.scale(1 / ck) + X(p + 1, q - 1)
        memo[(p, q)] = value
        return value

    def commutator_rule(self, g1: Gen, g2: Gen) -> Element:
        """
        [g1, g2] as an (unordered) Element.

        Raises:
            WindowOverflow: if either generator lies outside the window.
            InternalInconsistency: if the result violates mode-boundedness.
        """
        self.check_generator(g1)
        self.check_generator(g2)
        if g1 == g2:
            return Element()
        pair = (g1, g2)
        if pair in self.rules:
            return self.rules[pair]
        key: FamilyKey = (g1.is_plus, g2.is_plus, g1.i, g1.j, g2.i, g2.j)
        value = self._family_value(key, -g1.mode - 1, -g2.mode - 1)
        bound = g1.weight + g2.weight + (1 if not (g1.is_plus or g2.is_plus) else -1)
        for word, _ in value:
            if word_weight(word) > bound:
                raise InternalInconsistency(f"[{g1}, {g2}] produced {word} above weight {bound}")
        self.rules[pair] = value
        return value

    # ---- normal forms ---------------------------------------------------------

    def truncate(self, e: Element) -> Element:
        kept: Dict[Word, Scalar] = {}
        for word, x in e:
            d = degree(word, x)
            if c_valuation(x) < 0:
                self.leaked = True
            if d > self.box.maxlen:
                self.dropped = True
                continue
            kept[word] = x
        return Element(kept)

    def normal_form(self, e: Element, strategy: Strategy = Strategy.LEFTMOST) -> Element:
        """
        Canonical form of e.

        Raises:
            Inconclusive: if the reduction fuel runs out or a rewrite needs a
                generator outside the window.
        """
        if not self.reduce:
            return self.truncate(e)
        pending: Dict[Word, Scalar] = dict(e.terms)
        done: Dict[Word, Scalar] = {}
        fuel = self.box.fuel
        while pending:
            word, x = pending.popitem()
            if not x:
                continue
            if c_valuation(x) < 0:
                self.leaked = True
            if degree(word, x) > self.box.maxlen:
                self.dropped = True
                continue
            pos = self._descent(word, strategy)
            if pos is None:
                done[word] = done.get(word, SCALARS.zero) + x
                continue
            fuel -= 1
            if fuel < 0:
                raise Inconclusive(f"reduction fuel ({self.box.fuel}) exhausted for {self.kind}")
            g1, g2 = word[pos], word[pos + 1]
            try:
                rule = self.commutator_rule(g1, g2)
            except WindowOverflow as err:
                raise Inconclusive(f"rewrite left the window: {err}") from err
            head, tail = word[:pos], word[pos + 2:]
            swapped = head + (g2, g1) + tail
            pending[swapped] = pending.get(swapped, SCALARS.zero) + x
            for w, y in rule:
                target = head + w + tail
                pending[target] = pending.get(target, SCALARS.zero) + x * y
        self.fuel_used += self.box.fuel - fuel
        return Element(done)

    def _descent(self, word: Word, strategy: Strategy) -> Optional[int]:
        positions = range(len(word) - 1)
        if strategy == Strategy.RIGHTMOST:
            positions = reversed(positions)
        for k in positions:
            if self.order_key(word[k]) > self.order_key(word[k + 1]):
                return k
        return None

    def multiply(self, *factors: Element) -> Element:
        result = Element.unit()
        for factor in factors:
            result = self.normal_form(result * factor)
        return result

    def commutator(self, a: Element, b: Element) -> Element:
        return self.normal_form(a * b - b * a)

    def inverse_unital(self, e: Element) -> Element:
        """
        Inverse of lambda + X with lambda a nonzero scalar, by the truncated geometric series.

        Raises:
            Inconclusive: if the series does not terminate within the filtration bound.
        """
        lam = e.constant()
        if not lam:
            raise Inconclusive("leading coefficient is not invertible")
        lam_inv = 1 / lam
        step = e.without_unit().scale(-lam_inv)
        total = Element.unit(lam_inv)
        power = Element.unit(lam_inv)
        for _ in range(4 * self.box.maxlen + 4):
            power = self.normal_form(power * step)
            if not power:
                return total
            total = total + power
        raise Inconclusive("geometric series for an inverse did not terminate")

    # ---- generating series ----------------------------------------------------

    def depth(self, plus: bool) -> int:
        return self.box.lplus if plus else self.box.minus_depth

    def t_series(self, i: int, j: int, plus: bool, depth: Optional[int] = None) -> ModeSeries:
        depth = self.depth(plus) if depth is None else depth
        modes = range(depth) if plus else range(-1, -depth - 1, -1)
        return ModeSeries.from_modes(
            plus, depth, {m: Element.gen(i, j, m) for m in modes}, unit=1 if i == j else 0
        )

    def t_matrix(self, plus: bool) -> Dict[Tuple[int, int], ModeSeries]:
        idx = self.kind.index_set()
        return {(i, j): self.t_series(i, j, plus) for i in idx for j in idx}

    # ---- crossing relations, z(u) and the z = 1 quotient ------------------------

    def crossing_matrix(self, plus: bool) -> Dict[Tuple[int, int], ModeSeries]:
        """
        Entries of T(u - c kappa)^t T(u).

        In the Yangian this matrix is z(u) I. The commutator rules alone do not
        impose that, so its off-diagonal entries and the differences of its
        diagonal entries generate the crossing ideal used by residual().

        Raises:
            InvalidAlgebra: for type A (no crossing parameter).
        """
        if self.kappa is None:
            raise InvalidAlgebra("the crossing relation exists only for B, C and D")
        if plus in self._crossing:
            return self._crossing[plus]
        kind = self.kind
        idx = kind.index_set()
        dropped = self.dropped
        matrix = self.t_matrix(plus)
        shifted = {key: shift(self, s, c * self.kappa) for key, s in matrix.items()}
        entries: Dict[Tuple[int, int], ModeSeries] = {}
        for i in idx:
            for j in idx:
                terms = []
                for p in idx:
                    sign = kind.epsilon(i) * kind.epsilon(p)
                    left = shifted[(kind.prime(p), kind.prime(i))].scale(sign)
                    terms.append(product(self, left, matrix[(p, j)]))
                entries[(i, j)] = series_sum(terms)
        # terms dropped here lie above the filtration bound of every comparison
        self.dropped = dropped
        self._crossing[plus] = entries
        return entries

    def z_series(self, plus: bool) -> ModeSeries:
        """
        z(u), read off the first diagonal entry of T(u - c kappa)^t T(u).

        The other diagonal entries agree with it modulo the crossing ideal.

        Raises:
            InvalidAlgebra: for type A (no crossing parameter).
            InternalInconsistency: if a diagonal entry does not start with 1.
        """
        if plus in self._ztables:
            return self._ztables[plus]
        entries = self.crossing_matrix(plus)
        idx = self.kind.index_set()
        for i in idx:
            if entries[(i, i)].unit_part() != 1:
                raise InternalInconsistency(f"diagonal entry ({i},{i}) of the crossing matrix does not start with 1")
        reference = entries[(idx[0], idx[0])]
        logger.debug(f"z series ({'+' if plus else '-'}) for {self.kind}: {sum(len(x) for x in reference.coefficients.values())} terms")
        self._ztables[plus] = reference
        return reference

    def z_modes(self, plus: bool) -> Dict[int, Element]:
        """Trusted modes of z(u), unit part removed."""
        series = self.z_series(plus)
        modes = self.box.plus_modes if plus else self.box.minus_modes
        return {m: series.mode(m) for m in modes}

    def _relation_floor(self, plus: bool, m: int) -> int:
        """Lowest power of c a relation of mode m may be multiplied by without feeling the series cutoff."""
        return 0 if plus else max(0, -self.box.lminus - 1 - m)

    def crossing_relations(self, plus: bool) -> Tuple[List[Relation], List[Relation]]:
        """Generators of the crossing ideal and the modes of z - 1, for one sign."""
        if plus in self._relations:
            return self._relations[plus]
        entries = self.crossing_matrix(plus)
        idx = self.kind.index_set()
        ref = idx[0]
        sign = "+" if plus else "-"
        modes = self.box.plus_modes if plus else ModeSeries(plus, self.depth(plus)).mode_range()
        crossing: List[Relation] = []
        central: List[Relation] = []
        for m in modes:
            floor = self._relation_floor(plus, m)
            for i in idx:
                for j in idx:
                    if i == j == ref:
                        continue
                    if i == j:
                        value = self.normal_form(entries[(i, i)].mode(m) - entries[(ref, ref)].mode(m))
                        name = f"S{sign}[{i},{i}]-[{ref},{ref}]({m})"
                    else:
                        value = entries[(i, j)].mode(m)
                        name = f"S{sign}[{i},{j}]({m})"
                    if value:
                        crossing.append(Relation.of(name, value, floor))
            z = entries[(ref, ref)].mode(m)
            if z:
                diagonal = tuple((Gen(i, i, m),) for i in idx)
                central.append(Relation.of(f"z{sign}({m})", z, floor, diagonal))
        logger.debug(f"crossing ideal ({sign}) for {self.kind}: {len(crossing)} relations, {len(central)} z modes")
        self._relations[plus] = (crossing, central)
        return crossing, central

    def _placed(self, left: Word, relation: Relation, right: Word) -> Dict[Tuple[Word, int], object]:
        """c-expansion of normal_form(left * relation * right)."""
        key = (left, relation.name, right)
        if key not in self._placements:
            value = self.normal_form(Element.from_word(left) * relation.element * Element.from_word(right))
            self._placements[key] = graded_terms(value, self.box.maxlen)
        return self._placements[key]

    def residual(
        self,
        e: Element,
        mod_z: bool = False,
        signs: Sequence[bool] = (True, False),
        multipliers: Optional[Iterable[Word]] = None,
    ) -> Element:
        """
        Normal form of e, or zero when e lies in the crossing ideal.

        With mod_z the ideal also contains z(u) - 1. Membership is decided by an
        exact solve over QQ, coefficientwise in c up to the filtration bound,
        against the relations placed between cofactors taken from the words of
        e (and of the explicit multipliers). For type A and for the free algebra
        this is the normal form.
        """
        value = self.normal_form(e)
        if not value or self.kappa is None or not self.reduce:
            return value
        dropped, leaked = self.dropped, self.leaked
        member = self._in_crossing_ideal(value, mod_z, signs, multipliers or ())
        self.dropped, self.leaked = dropped, leaked
        return Element() if member else value

    def _in_crossing_ideal(self, value: Element, mod_z: bool, signs: Sequence[bool], multipliers: Iterable[Word]) -> bool:
        maxlen = self.box.maxlen
        index: Dict[Word, List[Relation]] = {}
        zs: List[Relation] = []
        for plus in signs:
            crossing, central = self.crossing_relations(plus)
            active = crossing + central if mod_z else crossing
            for relation in active:
                for word in relation.leading:
                    index.setdefault(word, []).append(relation)
            if mod_z:
                zs += central
        columns: List[Dict[Tuple[Word, int], object]] = []
        placed = set()

        def place(left: Word, relation: Relation, right: Word) -> Iterable[Word]:
            if (left, relation.name, right) in placed or len(columns) >= MAX_IDEAL_COLUMNS:
                return ()
            placed.add((left, relation.name, right))
            graded = self._placed(left, relation, right)
            for k in range(relation.floor, maxlen + 1):
                column = {
                    (w, p + k): q for (w, p), q in graded.items() if len(w) + p + k <= maxlen
                }
                if column:
                    columns.append(column)
            return {w for w, _ in graded}

        for word in multipliers:
            for z in zs:
                place(EMPTY, z, word)
                place(word, z, EMPTY)
        seen = set()
        frontier = set(value.terms)
        for _ in range(IDEAL_CLOSURE_ROUNDS):
            grown = set()
            for word in sorted(frontier - seen, key=lambda w: (len(w), w)):
                seen.add(word)
                for a in range(len(word)):
                    for b in range(a + 1, len(word) + 1):
                        for relation in index.get(word[a:b], ()):
                            grown |= set(place(word[:a], relation, word[b:]))
            frontier = grown
        if len(columns) >= MAX_IDEAL_COLUMNS:
            logger.warning(f"crossing-ideal solve for {self.kind} capped at {MAX_IDEAL_COLUMNS} columns")
        solution = solve_in_span(columns, graded_terms(value, maxlen), QQ)
        logger.debug(
            f"crossing-ideal solve ({'mod z' if mod_z else 'exact'}) with {len(columns)} columns: "
            f"{'member' if solution is not None else 'not a member'}"
        )
        return solution is not None

    def equal_mod_z(
        self,
        e1: Element,
        e2: Element,
        multipliers: Optional[Iterable[Word]] = None,
        signs: Sequence[bool] = (True, False),
    ) -> bool:
        """Whether e1 = e2 in the z = 1 quotient; plain equality for type A."""
        return not self.residual(e1 - e2, mod_z=True, signs=signs, multipliers=multipliers)

    # ---- standard coproduct ---------------------------------------------------

    def coproduct_standard(self, g: Gen) -> TensorElement:
        """Mode g of sum_l T_lj(u) (x) T_il(u), unit part removed."""
        self.check_generator(g)
        power = -g.mode - 1
        parts = range(power, 1) if g.is_plus else range(0, power + 1)
        acc = TensorElement()
        for l in self.kind.index_set():
            for p1 in parts:
                left = self._coef(g.is_plus, l, g.j, p1)
                right = self._coef(g.is_plus, g.i, l, power - p1)
                if left and right:
                    acc = acc + TensorElement.pure(left, right)
        if power == 0 and g.i == g.j:
            acc = acc - TensorElement.pure(Element.unit(), Element.unit())
        return acc

    def coproduct(self, e: Element) -> TensorElement:
        """Extend the coproduct multiplicatively to an Element."""
        acc = TensorElement()
        for word, x in e:
            image = TensorElement.pure(Element.unit(), Element.unit())
            for g in word:
                image = image * self.coproduct_standard(g)
            acc = acc + image.scale(x)
        return self.normal_form_tensor(acc)

    def normal_form_tensor(self, t: TensorElement) -> TensorElement:
        """Normal-order both legs; the filtration degree counts both words."""
        acc: Dict[Tuple[Word, Word], Scalar] = {}
        for (left, right), x in t.terms.items():
            if len(left) + len(right) + c_valuation(x) > self.box.maxlen:
                self.dropped = True
                continue
            nl = self.normal_form(Element.from_word(left))
            nr = self.normal_form(Element.from_word(right))
            for wl, xl in nl:
                for wr, xr in nr:
                    if len(wl) + len(wr) + c_valuation(x * xl * xr) > self.box.maxlen:
                        self.dropped = True
                        continue
                    acc[(wl, wr)] = acc.get((wl, wr), SCALARS.zero) + x * xl * xr
        return TensorElement(acc)

    # ---- table export ---------------------------------------------------------

    def export_rules(self) -> List[dict]:
        """JSON-ready dump of every commutator derived so far."""
        return [
            {"pair": [list(g1), list(g2)], "value": encode_element(value)}
            for (g1, g2), value in sorted(self.rules.items())
        ]

    def load_rules(self, payload: List[dict]) -> int:
        """
        Merge cached commutators into the shared table; nothing is merged if any entry is malformed.

        Raises:
            KeyError, TypeError, ValueError: for a malformed payload.
        """
        decoded = {}
        for item in payload:
            g1, g2 = (Gen(*g) for g in item["pair"])
            decoded[(g1, g2)] = decode_element(item["value"])
        self.rules.update(decoded)
        logger.debug(f"loaded {len(decoded)} cached commutators for {self.kind}")
        return len(decoded)


def _encode_poly(poly) -> List[List]:
    return [[e, str(k)] for (e,), k in sorted(poly.terms())]


def _decode_poly(data: List[List]):
    ring = SCALARS.ring
    return ring.from_dict({(e,): QQ.from_sympy(Rational(k)) for e, k in data})


def encode_scalar(x: Scalar) -> dict:
    return {"num": _encode_poly(x.numer), "den": _encode_poly(x.denom)}


def decode_scalar(data: dict) -> Scalar:
    return SCALARS(_decode_poly(data["num"])) / SCALARS(_decode_poly(data["den"]))


def encode_element(e: Element) -> List[dict]:
    return [{"word": [list(g) for g in word], "coefficient": encode_scalar(x)} for word, x in e.sorted_terms()]


def decode_element(data: List[dict]) -> Element:
    return Element({tuple(Gen(*g) for g in item["word"]): decode_scalar(item["coefficient"]) for item in data})


# ---- consistency checks -----------------------------------------------------------


class AlgebraCheck(str, Enum):
    ANTISYMMETRY = "antisymmetry"
    JACOBI = "jacobi"
    CONFLUENCE = "confluence"
    CENTRALITY = "centrality"


def window_generators(alg: ModeAlgebra, signs: Sequence[bool] = (True, False)) -> List[Gen]:
    idx = alg.kind.index_set()
    modes = []
    for plus in signs:
        modes += alg.box.plus_modes if plus else alg.box.minus_modes
    return [Gen(i, j, m) for m in sorted(modes) for i in idx for j in idx]


def _sampled_elements(alg: ModeAlgebra, rng: random.Random, count: int) -> List[Element]:
    gens = window_generators(alg)
    out = []
    for _ in range(count):
        terms = {}
        for _ in range(rng.randint(1, 3)):
            word = tuple(rng.choice(gens) for _ in range(rng.randint(1, 2)))
            terms[word] = SCALARS(rng.randint(-3, 3)) + c * rng.randint(0, 1)
        out.append(Element(terms))
    return out


def verify_algebra_check(
    kind: AlgebraKind,
    check: AlgebraCheck,
    box: TrustBox,
    samples: int = 100,
    seed: int = 0,
) -> Report:
    """
    Sampled consistency of the rewrite system.

    Samples come from a seeded generator, so reports are reproducible.
    """
    check = AlgebraCheck(check)
    if check == AlgebraCheck.CENTRALITY and kind.kappa() is None:
        raise InvalidAlgebra(f"centrality of z(u) does not apply to {kind.code}")

    def body(verdict: Verdict) -> None:
        alg = ModeAlgebra(kind, box)

        def guarded(label: str, compute) -> None:
            with alg.scoped_trust():
                try:
                    compute()
                except Inconclusive as err:
                    verdict.inconclusive(f"{label}: {err}")

        rng = random.Random(seed)
        gens = window_generators(alg)
        if check == AlgebraCheck.ANTISYMMETRY:
            for _ in range(samples):
                g1, g2 = rng.choice(gens), rng.choice(gens)
                guarded(f"[{g1}, {g2}]", lambda: verdict.expect_zero(
                    alg.normal_form(alg.commutator_rule(g1, g2) + alg.commutator_rule(g2, g1)),
                    f"[{g1}, {g2}] + [{g2}, {g1}]",
                    trusted=alg.trusted,
                ))
        elif check == AlgebraCheck.JACOBI:
            for _ in range(samples):
                a, b, x = (Element.from_word((rng.choice(gens),)) for _ in range(3))
                guarded("jacobi", lambda: verdict.expect_zero(
                    alg.normal_form(
                        alg.commutator(alg.commutator(a, b), x)
                        + alg.commutator(alg.commutator(b, x), a)
                        + alg.commutator(alg.commutator(x, a), b)
                    ),
                    f"jacobi({a}, {b}, {x})",
                    trusted=alg.trusted,
                ))
        elif check == AlgebraCheck.CONFLUENCE:
            for e in _sampled_elements(alg, rng, samples):

                def compare(e=e):
                    left = alg.normal_form(e, Strategy.LEFTMOST)
                    verdict.expect_equal(alg.normal_form(left), left, f"idempotence {e}", trusted=alg.trusted)
                    verdict.expect_equal(alg.normal_form(e, Strategy.RIGHTMOST), left, f"confluence {e}", trusted=alg.trusted)

                guarded("confluence", compare)
        else:
            for plus in (True, False):
                for m, z_mode in sorted(alg.z_modes(plus).items()):
                    for g in gens:
                        guarded(f"z[{m}]", lambda: verdict.expect_zero(
                            alg.residual(alg.commutator(z_mode, Element.from_word((g,)))),
                            f"[z({m}), {g}]",
                            trusted=alg.trusted,
                        ))

    return run_check(f"algebra:{check.value}", kind, box, body)

"""
Noncommutative polynomials in T-operator modes.

A generator T_{i,j}[l] is a Gen; l >= 0 belongs to the plus series, l < 0 to
the minus series. An Element maps words (tuples of Gen) to coefficients in
QQ(c); the unit is the empty word. Multiplication here is free concatenation,
reordering is the job of ModeAlgebra.normal_form.
"""
from typing import Callable, Dict, Iterable, Iterator, NamedTuple, Optional, Tuple

from .exact_arith import SCALARS, Scalar, c_valuation, render, to_scalar


class Gen(NamedTuple):
    i: int
    j: int
    mode: int

    @property
    def is_plus(self) -> bool:
        return self.mode >= 0

    @property
    def weight(self) -> int:
        """mode + 1 on the plus series, -mode on the minus series."""
        return self.mode + 1 if self.mode >= 0 else -self.mode

    def __str__(self) -> str:
        return f"T[{self.i},{self.j}]({self.mode})"


Word = Tuple[Gen, ...]
EMPTY: Word = ()


def word_weight(word: Word) -> int:
    return sum(g.weight for g in word)


def render_word(word: Word) -> str:
    return "*".join(str(g) for g in word) if word else "1"


def degree(word: Word, coefficient: Scalar) -> int:
    """Filtration degree: word length plus c-valuation of the coefficient."""
    return len(word) + c_valuation(coefficient)


class Element:
    """Finite linear combination of words with QQ(c) coefficients. Treat as immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Scalar]] = None):
        self.terms: Dict[Word, Scalar] = {w: x for w, x in (terms or {}).items() if x}

    @classmethod
    def zero(cls) -> "Element":
        return cls()

    @classmethod
    def unit(cls, coefficient=1) -> "Element":
        return cls({EMPTY: to_scalar(coefficient)})

    @classmethod
    def gen(cls, i: int, j: int, mode: int, coefficient=1) -> "Element":
        return cls({(Gen(i, j, mode),): to_scalar(coefficient)})

    @classmethod
    def from_word(cls, word: Word, coefficient=1) -> "Element":
        return cls({tuple(word): to_scalar(coefficient)})

    @classmethod
    def accumulate(cls, pairs: Iterable[Tuple[Word, Scalar]]) -> "Element":
        acc: Dict[Word, Scalar] = {}
        for word, x in pairs:
            acc[word] = acc.get(word, SCALARS.zero) + x
        return cls(acc)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Tuple[Word, Scalar]]:
        return iter(self.terms.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Element") -> "Element":
        acc = dict(self.terms)
        for word, x in other.terms.items():
            acc[word] = acc.get(word, SCALARS.zero) + x
        return Element(acc)

    def __neg__(self) -> "Element":
        return Element({w: -x for w, x in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, factor) -> "Element":
        factor = to_scalar(factor)
        if not factor:
            return Element()
        return Element({w: x * factor for w, x in self.terms.items()})

    def __mul__(self, other: "Element") -> "Element":
        """Free product (concatenation of words)."""
        return Element.accumulate(
            (wa + wb, xa * xb) for wa, xa in self.terms.items() for wb, xb in other.terms.items()
        )

    def constant(self) -> Scalar:
        """Coefficient of the unit; equals the counit since every generator is killed."""
        return self.terms.get(EMPTY, SCALARS.zero)

    def without_unit(self) -> "Element":
        return Element({w: x for w, x in self.terms.items() if w})

    def select(self, keep: Callable[[Word], bool]) -> "Element":
        return Element({w: x for w, x in self.terms.items() if keep(w)})

    def generators(self) -> Iterator[Gen]:
        for word in self.terms:
            yield from word

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda item: (len(item[0]), item[0]))

    def first_term(self) -> Optional[Tuple[str, str]]:
        """Deterministic (monomial, coefficient) pair for counterexamples."""
        if not self.terms:
            return None
        word, x = self.sorted_terms()[0]
        return render_word(word), render(x)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({render(x)})*{render_word(w)}" for w, x in self.sorted_terms())


TensorWord = Tuple[Word, Word]


class TensorElement:
    """Element of the tensor square, stored as (left word, right word) -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[TensorWord, Scalar]] = None):
        self.terms: Dict[TensorWord, Scalar] = {k: x for k, x in (terms or {}).items() if x}

    @classmethod
    def pure(cls, left: Element, right: Element) -> "TensorElement":
        return cls.accumulate(
            ((wl, wr), xl * xr) for wl, xl in left.terms.items() for wr, xr in right.terms.items()
        )

    @classmethod
    def accumulate(cls, pairs: Iterable[Tuple[TensorWord, Scalar]]) -> "TensorElement":
        acc: Dict[TensorWord, Scalar] = {}
        for key, x in pairs:
            acc[key] = acc.get(key, SCALARS.zero) + x
        return cls(acc)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElement):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement.accumulate(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "TensorElement":
        return TensorElement({k: -x for k, x in self.terms.items()})

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + (-other)

    def scale(self, factor) -> "TensorElement":
        factor = to_scalar(factor)
        return TensorElement({k: x * factor for k, x in self.terms.items()})

    def __mul__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement.accumulate(
            ((la + lb, ra + rb), xa * xb)
            for (la, ra), xa in self.terms.items()
            for (lb, rb), xb in other.terms.items()
        )

    def counit_left(self) -> Element:
        """(counit x id): keep terms whose left word is empty."""
        return Element.accumulate((r, x) for (l, r), x in self.terms.items() if not l)

    def counit_right(self) -> Element:
        """(id x counit): keep terms whose right word is empty."""
        return Element.accumulate((l, x) for (l, r), x in self.terms.items() if not r)

    def first_term(self) -> Optional[Tuple[str, str]]:
        if not self.terms:
            return None
        (l, r), x = sorted(self.terms.items(), key=lambda item: (len(item[0][0]) + len(item[0][1]), item[0]))[0]
        return f"{render_word(l)} (x) {render_word(r)}", render(x)

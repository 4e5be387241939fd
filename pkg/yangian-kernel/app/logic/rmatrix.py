"""
Exact R-matrix operators.

Operators on V^{(x)m} (m = 2 or 3) are sparse maps (row tuple, column tuple) ->
QQ(u, v, w, c). The checks work with the polynomial form
D(x, y) R(x, y), where D = (x - y) for type A and (x - y)(x - y + c kappa)
otherwise; every identity below is homogeneous in R, so clearing the common
denominator changes nothing.
"""
from typing import Dict, Iterable, Optional, Tuple
import logging

from sympy.polys.fields import FracElement

from ..schemas import Report
from .algebra import AlgebraKind
from .exact_arith import SPECTRAL, Scalar, cs, lift, pc, to_scalar, u, v, w
from .verdict import Verdict, run_check

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]
Entries = Dict[Tuple[Index, Index], FracElement]


class TensorOp:
    """Sparse operator on a tensor power of the defining representation."""

    def __init__(self, kind: AlgebraKind, factors: int, entries: Optional[Entries] = None):
        self.kind = kind
        self.factors = factors
        self.entries: Entries = {k: x for k, x in (entries or {}).items() if x}

    @classmethod
    def identity(cls, kind: AlgebraKind, factors: int = 2, scalar=None) -> "TensorOp":
        value = SPECTRAL.one if scalar is None else SPECTRAL(scalar)
        return cls(kind, factors, {(idx, idx): value for idx in _basis(kind, factors)})

    @property
    def shape(self) -> Tuple[int, int]:
        size = self.kind.dimension ** self.factors
        return size, size

    def __add__(self, other: "TensorOp") -> "TensorOp":
        acc = dict(self.entries)
        for key, x in other.entries.items():
            acc[key] = acc.get(key, SPECTRAL.zero) + x
        return TensorOp(self.kind, self.factors, acc)

    def __sub__(self, other: "TensorOp") -> "TensorOp":
        return self + other.scale(-1)

    def scale(self, factor) -> "TensorOp":
        factor = SPECTRAL(factor)
        return TensorOp(self.kind, self.factors, {k: x * factor for k, x in self.entries.items()})

    def __matmul__(self, other: "TensorOp") -> "TensorOp":
        by_row: Dict[Index, Dict[Index, FracElement]] = {}
        for (r, k), x in other.entries.items():
            by_row.setdefault(r, {})[k] = x
        acc: Entries = {}
        for (r, m), x in self.entries.items():
            for col, y in by_row.get(m, {}).items():
                acc[(r, col)] = acc.get((r, col), SPECTRAL.zero) + x * y
        return TensorOp(self.kind, self.factors, acc)

    def apply(self, vector: Dict[Index, FracElement]) -> Dict[Index, FracElement]:
        out: Dict[Index, FracElement] = {}
        for (r, col), x in self.entries.items():
            if col in vector:
                out[r] = out.get(r, SPECTRAL.zero) + x * vector[col]
        return {k: x for k, x in out.items() if x}

    def trace(self) -> FracElement:
        return sum((x for (r, col), x in self.entries.items() if r == col), SPECTRAL.zero)

    def embed(self, slots: Tuple[int, int], factors: int = 3) -> "TensorOp":
        """Place a two-factor operator on the given slots of a `factors`-fold product."""
        if self.factors != 2:
            raise ValueError("only two-factor operators can be embedded")
        others = [k for k in range(factors) if k not in slots]
        acc: Entries = {}
        for rest in _basis(self.kind, len(others)):
            for (r, col), x in self.entries.items():
                row_idx, col_idx = [0] * factors, [0] * factors
                for pos, slot in enumerate(slots):
                    row_idx[slot], col_idx[slot] = r[pos], col[pos]
                for pos, slot in enumerate(others):
                    row_idx[slot] = col_idx[slot] = rest[pos]
                acc[(tuple(row_idx), tuple(col_idx))] = x
        return TensorOp(self.kind, factors, acc)

    def first_term(self):
        if not self.entries:
            return None
        (r, col), x = sorted(self.entries.items())[0]
        return f"entry{r}x{col}", str(x)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorOp):
            return NotImplemented
        return self.factors == other.factors and self.entries == other.entries

    __hash__ = None  # type: ignore[assignment]


def _basis(kind: AlgebraKind, factors: int) -> Iterable[Index]:
    idx = kind.index_set()
    result = [()]
    for _ in range(factors):
        result = [r + (i,) for r in result for i in idx]
    return result


def build_identity(kind: AlgebraKind) -> TensorOp:
    return TensorOp.identity(kind, 2)


def build_P(kind: AlgebraKind) -> TensorOp:
    """P = sum e_ij (x) e_ji."""
    idx = kind.index_set()
    return TensorOp(kind, 2, {((i, j), (j, i)): SPECTRAL.one for i in idx for j in idx})


def build_Q(kind: AlgebraKind) -> TensorOp:
    """Q = sum eps_i eps_j e_ij (x) e_i'j'."""
    idx = kind.index_set()
    return TensorOp(
        kind,
        2,
        {
            ((i, kind.prime(i)), (j, kind.prime(j))): SPECTRAL(kind.epsilon(i) * kind.epsilon(j))
            for i in idx
            for j in idx
        },
    )


def denominator(kind: AlgebraKind, x: FracElement, y: FracElement, kappa: Optional[Scalar] = None) -> FracElement:
    """Common denominator D(x, y) of R(x, y)."""
    kappa = kind.kappa() if kappa is None else to_scalar(kappa)
    if kappa is None:
        return x - y
    return (x - y) * (x - y + cs * lift(kappa))


def build_R(
    kind: AlgebraKind,
    x: FracElement = u,
    y: FracElement = v,
    cleared: bool = False,
    kappa: Optional[Scalar] = None,
) -> TensorOp:
    """
    R(x, y) = I + cP/(x - y) - cQ/(x - y + c kappa); the Q-term is absent for A.

    cleared=True returns D(x, y) R(x, y). kappa overrides the series value
    (used for negative controls).
    """
    kappa = kind.kappa() if kappa is None else to_scalar(kappa)
    ident, p_op = build_identity(kind), build_P(kind)
    if kappa is None:
        if cleared:
            return ident.scale(x - y) + p_op.scale(cs)
        return ident + p_op.scale(cs / (x - y))
    shifted = x - y + cs * lift(kappa)
    q_op = build_Q(kind)
    if cleared:
        return ident.scale((x - y) * shifted) + p_op.scale(cs * shifted) - q_op.scale(cs * (x - y))
    return ident + p_op.scale(cs / (x - y)) - q_op.scale(cs / shifted)


def check_structure(kind: AlgebraKind) -> Report:
    def body(verdict: Verdict) -> None:
        ident, p_op = build_identity(kind), build_P(kind)
        verdict.expect_equal(p_op @ p_op, ident, "P^2 - I")
        if kind.kappa() is None:
            return
        q_op = build_Q(kind)
        sign = -1 if kind.is_symplectic else 1
        verdict.expect_equal(q_op @ q_op, q_op.scale(kind.dimension), "Q^2 - NQ")
        verdict.expect_equal(p_op @ q_op, q_op.scale(sign), "PQ - sign Q")
        verdict.expect_equal(q_op @ p_op, q_op.scale(sign), "QP - sign Q")
        verdict.expect_zero(q_op.trace() - SPECTRAL(kind.dimension), "tr Q - N")

    return run_check("rmatrix:structure", kind, None, body)


def ybe_residual(kind: AlgebraKind, kappa: Optional[Scalar] = None) -> TensorOp:
    r12 = build_R(kind, u, v, cleared=True, kappa=kappa).embed((0, 1))
    r13 = build_R(kind, u, w, cleared=True, kappa=kappa).embed((0, 2))
    r23 = build_R(kind, v, w, cleared=True, kappa=kappa).embed((1, 2))
    return (r12 @ r13 @ r23) - (r23 @ r13 @ r12)


def check_ybe(kind: AlgebraKind, kappa: Optional[Scalar] = None) -> Report:
    def body(verdict: Verdict) -> None:
        residual = ybe_residual(kind, kappa)
        logger.debug(f"YBE residual for {kind}: {len(residual.entries)} nonzero entries")
        verdict.expect_zero(residual, "YBE")

    return run_check("rmatrix:ybe", kind, None, body)


def unitarity_factor() -> FracElement:
    """The scalar 1 - c^2/(u - v)^2 in R(u,v)R(v,u) = factor * I."""
    return SPECTRAL.one - cs ** 2 / (u - v) ** 2


def check_unitarity(kind: AlgebraKind, kappa: Optional[Scalar] = None) -> Report:
    def body(verdict: Verdict) -> None:
        product = build_R(kind, u, v, cleared=True, kappa=kappa) @ build_R(kind, v, u, cleared=True, kappa=kappa)
        scalar = denominator(kind, u, v, kappa) * denominator(kind, v, u, kappa) * unitarity_factor()
        verdict.expect_equal(product, TensorOp.identity(kind, 2, scalar), "R(u,v)R(v,u)")

    return run_check("rmatrix:unitarity", kind, None, body)


Matrix = Dict[Tuple[int, int], FracElement]


def transpose_t(kind: AlgebraKind, matrix: Matrix) -> Matrix:
    """(M^t)_ij = eps_i eps_j M_{j'i'}."""
    out: Matrix = {}
    for (a, b), x in matrix.items():
        i, j = kind.prime(b), kind.prime(a)
        out[(i, j)] = x * (kind.epsilon(i) * kind.epsilon(j))
    return {k: x for k, x in out.items() if x}


def usual_transpose(matrix: Matrix) -> Matrix:
    return {(j, i): x for (i, j), x in matrix.items()}


def build_U(kind: AlgebraKind) -> Matrix:
    """U = sum eps_i e_{i,i'}; U^{-1} = U for gl and o, -U for sp."""
    return {(i, kind.prime(i)): SPECTRAL(kind.epsilon(i)) for i in kind.index_set()}


def inverse_U(kind: AlgebraKind) -> Matrix:
    sign = -1 if kind.is_symplectic else 1
    return {k: x * sign for k, x in build_U(kind).items()}


def matmul(a: Matrix, b: Matrix) -> Matrix:
    by_row: Dict[int, Dict[int, FracElement]] = {}
    for (r, k), x in b.items():
        by_row.setdefault(r, {})[k] = x
    acc: Matrix = {}
    for (i, m), x in a.items():
        for j, y in by_row.get(m, {}).items():
            acc[(i, j)] = acc.get((i, j), SPECTRAL.zero) + x * y
    return {k: x for k, x in acc.items() if x}


def at_c_zero(op: TensorOp) -> TensorOp:
    """Substitute c = 0 in every entry."""
    entries = {}
    for key, x in op.entries.items():
        entries[key] = SPECTRAL(x.numer.subs(pc, 0)) / SPECTRAL(x.denom.subs(pc, 0))
    return TensorOp(op.kind, op.factors, entries)

"""
Descriptors of the classical series gl_N, o_{2n+1}, sp_{2n} and o_{2n}.

An AlgebraKind fixes the signed index set, the epsilon signs, the prime
involution, the crossing parameter kappa and the labels of simple roots and
Cartan currents. Everything else in the kernel is parametrized by it.
"""
from enum import Enum
from typing import List, Optional
import logging
import re

from pydantic import BaseModel, ConfigDict, model_validator
from sympy import QQ

from .errors import IndexOutOfRange, InvalidAlgebra
from .exact_arith import SCALARS, Scalar

logger = logging.getLogger(__name__)

_CODE = re.compile(r"^([ABCD])(\d+)$")


class Series(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


class AlgebraKind(BaseModel):
    """Classical series and rank (N for A, n for B/C/D)."""

    model_config = ConfigDict(frozen=True)

    series: Series
    rank: int

    @model_validator(mode="after")
    def _check_rank(self) -> "AlgebraKind":
        if self.rank < 2:
            raise InvalidAlgebra(f"{self.series.value}{self.rank}: rank must be at least 2")
        return self

    @classmethod
    def parse(cls, code: str) -> "AlgebraKind":
        """Parse a textual code such as 'A3' or 'B2'."""
        match = _CODE.match(code.strip().upper())
        if not match:
            raise InvalidAlgebra(f"unknown algebra code {code!r}; expected A<N>, B<n>, C<n> or D<n>")
        rank = int(match.group(2))
        if rank < 2:
            raise InvalidAlgebra(f"{code}: rank must be at least 2")
        return cls(series=Series(match.group(1)), rank=rank)

    @property
    def code(self) -> str:
        return f"{self.series.value}{self.rank}"

    @property
    def dimension(self) -> int:
        """Size N of the defining representation."""
        if self.series == Series.A:
            return self.rank
        if self.series == Series.B:
            return 2 * self.rank + 1
        return 2 * self.rank

    @property
    def is_symplectic(self) -> bool:
        return self.series == Series.C

    def index_set(self) -> List[int]:
        n = self.rank
        if self.series == Series.A:
            return list(range(1, n + 1))
        if self.series == Series.B:
            return list(range(-n, n + 1))
        return list(range(-n + 1, n + 1))

    def _check(self, i: int) -> None:
        if i not in self.index_set():
            raise IndexOutOfRange(f"index {i} is not in the index set of {self.code}")

    def epsilon(self, i: int) -> int:
        """+1 for gl and o types; -sgn(i - 1/2) for sp."""
        self._check(i)
        if self.series == Series.C:
            return -1 if i >= 1 else 1
        return 1

    def prime(self, i: int) -> int:
        """The involution i -> i' of the index set."""
        self._check(i)
        if self.series == Series.A:
            return self.rank + 1 - i
        if self.series == Series.B:
            return -i
        return -i + 1

    def kappa(self) -> Optional[Scalar]:
        """
        Crossing parameter: None for A (no Q-term), N/2 - 1 for o_N, n + 1 for sp_2n.
        """
        if self.series == Series.A:
            return None
        if self.series == Series.C:
            return SCALARS(self.rank + 1)
        return SCALARS(QQ(self.dimension - 2, 2))

    def roots(self) -> List[int]:
        """Labels i of the simple roots alpha_i."""
        if self.series == Series.A:
            return list(range(1, self.rank))
        return list(range(0, self.rank))

    def cartans(self) -> List[int]:
        """Labels of the Cartan currents k_j entering the current realization."""
        if self.series == Series.A:
            return list(range(1, self.rank + 1))
        if self.series == Series.B:
            return list(range(0, self.rank + 1))
        return list(range(1, self.rank + 1))

    def root_coordinate(self, i: int) -> tuple:
        """
        (row, column) labels of the Gauss coordinate F_{row,col} behind F_i.

        D-type alpha_0 is carried by F_{2,0}; every other root by F_{i+1,i}.
        """
        if i not in self.roots():
            raise IndexOutOfRange(f"{i} is not a simple root label of {self.code}")
        if self.series == Series.D and i == 0:
            return (2, 0)
        return (i + 1, i)

    def root_partner(self, i: int) -> int:
        """Index j with F_i pairing against k_i k_j^{-1} (j = i+1, or 2 for D-type alpha_0)."""
        return self.root_coordinate(i)[0]

    def __str__(self) -> str:
        return self.code

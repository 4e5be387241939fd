"""
Data models shared by the command line, the verifiers and the cache.
"""
from enum import Enum
from typing import List, Optional, Tuple
import hashlib
import json

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Bump whenever the commutator derivation changes; cached tables from other versions are ignored.
RULE_DERIVATION_VERSION = "rtt-cleared-1"


class Status(str, Enum):
    VERIFIED = "verified"
    FAILED = "failed"
    INCONCLUSIVE = "inconclusive"


class TrustBox(BaseModel):
    """
    Truncation parameters of one computation.

    lminus/lplus bound the trusted output modes (-lminus..-1 and 0..lplus-1);
    maxlen bounds the filtration degree (word length plus c-valuation) of
    every stored term.
    """

    model_config = ConfigDict(frozen=True)

    lminus: int = Field(default=2, ge=1)
    lplus: int = Field(default=2, ge=1)
    maxlen: int = Field(default=3, ge=1)
    fuel: int = Field(default=200_000, ge=1)

    @property
    def plus_modes(self) -> List[int]:
        return list(range(self.lplus))

    @property
    def minus_modes(self) -> List[int]:
        return list(range(-1, -self.lminus - 1, -1))

    @property
    def trusted_modes(self) -> List[int]:
        return sorted(self.minus_modes + self.plus_modes)

    @property
    def minus_depth(self) -> int:
        """Minus modes carried internally; spectral shifts need maxlen extra modes."""
        return self.lminus + self.maxlen

    @property
    def generator_bounds(self) -> Tuple[int, int]:
        """Lowest and highest generator mode admitted by the rewrite rules."""
        return -(self.minus_depth + self.maxlen + 1), self.lplus + self.maxlen

    def grown(self, step: int = 1) -> "TrustBox":
        return TrustBox(
            lminus=self.lminus + step, lplus=self.lplus + step, maxlen=self.maxlen, fuel=self.fuel
        )

    def content_hash(self, algebra_code: str) -> str:
        payload = json.dumps(
            {
                "algebra": algebra_code,
                "box": self.model_dump(),
                "version": RULE_DERIVATION_VERSION,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()


class Counterexample(BaseModel):
    """First offending term of a failed comparison."""

    monomial: str
    coefficient: str


class Report(BaseModel):
    """Machine-readable verdict for one identity."""

    identity: str
    algebra: str
    box: Optional[TrustBox] = None
    status: Status
    elapsed_ms: float = 0.0
    counterexample: Optional[Counterexample] = None
    stable: bool = True

    @model_validator(mode="after")
    def _check_invariants(self) -> "Report":
        if self.status == Status.FAILED and self.counterexample is None:
            raise ValueError("a failed report must carry a counterexample")
        if self.status == Status.VERIFIED and not self.stable:
            raise ValueError("a verified report must be stable")
        return self

    def line(self) -> str:
        """One JSON line with sorted keys."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True)


class RunConfig(BaseModel):
    """Parameters of one CLI run."""

    algebra: str
    identities: List[str] = Field(default_factory=lambda: ["all"])
    box: TrustBox = Field(default_factory=TrustBox)
    output: Optional[str] = None
    use_cache: bool = True

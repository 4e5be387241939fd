"""
Accumulates comparisons into a Report.
"""
from typing import Callable, List, Optional
import logging
import time

from ..schemas import Counterexample, Report, Status, TrustBox
from .algebra import AlgebraKind
from .errors import Inconclusive, InternalInconsistency
from .exact_arith import render

logger = logging.getLogger(__name__)


class Verdict:
    """
    Running verdict of one identity check.

    Status only ever moves towards "worse": verified -> inconclusive -> failed.
    The first failing comparison supplies the counterexample.
    """

    def __init__(self, identity: str, kind: AlgebraKind, box: Optional[TrustBox] = None):
        self.identity = identity
        self.kind = kind
        self.box = box
        self.status = Status.VERIFIED
        self.counterexample: Optional[Counterexample] = None
        self.stable = True
        self.comparisons = 0
        self.notes: List[str] = []
        self._started = time.perf_counter()

    def fail(self, monomial: str, coefficient: str) -> None:
        if self.status != Status.FAILED:
            self.counterexample = Counterexample(monomial=monomial, coefficient=coefficient)
            logger.info(f"{self.identity} [{self.kind}]: counterexample {monomial} -> {coefficient}")
        self.status = Status.FAILED

    def inconclusive(self, reason: str) -> None:
        self.notes.append(reason)
        if self.status == Status.VERIFIED:
            self.status = Status.INCONCLUSIVE
        logger.warning(f"{self.identity} [{self.kind}]: inconclusive: {reason}")

    def unstable(self, reason: str) -> None:
        self.stable = False
        self.inconclusive(reason)

    def expect_zero(self, residual, label: str = "", trusted: bool = True) -> bool:
        """
        Record one comparison whose residual should vanish.

        residual is an Element, a TensorElement, or a scalar. A nonzero
        residual from an untrusted computation only makes the verdict
        inconclusive.
        """
        self.comparisons += 1
        if not residual:
            return True
        if hasattr(residual, "first_term"):
            monomial, coefficient = residual.first_term()
        else:
            monomial, coefficient = "1", render(residual)
        if label:
            monomial = f"{label}: {monomial}"
        if trusted:
            self.fail(monomial, coefficient)
        else:
            self.inconclusive(f"untrusted residual at {monomial}")
        return False

    def expect_equal(self, lhs, rhs, label: str = "", trusted: bool = True) -> bool:
        return self.expect_zero(lhs - rhs, label, trusted)

    def expect(self, condition: bool, label: str) -> bool:
        self.comparisons += 1
        if not condition:
            self.fail(label, "false")
        return condition

    def absorb(self, report: Report) -> None:
        """Fold a sub-check into this verdict."""
        self.comparisons += 1
        if report.status == Status.FAILED and report.counterexample is not None:
            self.fail(f"{report.identity}: {report.counterexample.monomial}", report.counterexample.coefficient)
        elif report.status == Status.INCONCLUSIVE:
            self.inconclusive(f"{report.identity} was inconclusive")
        if not report.stable:
            self.stable = False

    def report(self) -> Report:
        elapsed = (time.perf_counter() - self._started) * 1000.0
        return Report(
            identity=self.identity,
            algebra=self.kind.code,
            box=self.box,
            status=self.status,
            elapsed_ms=round(elapsed, 3),
            counterexample=self.counterexample,
            stable=self.stable,
        )


def run_check(
    identity: str,
    kind: AlgebraKind,
    box: Optional[TrustBox],
    body: Callable[[Verdict], None],
) -> Report:
    """Run body against a fresh Verdict; kernel signals become report statuses."""
    verdict = Verdict(identity, kind, box)
    try:
        body(verdict)
    except Inconclusive as e:
        verdict.inconclusive(str(e))
    except InternalInconsistency as e:
        logger.error(f"{identity} [{kind}]: internal inconsistency: {e}")
        verdict.fail("internal", str(e))
    if verdict.status == Status.VERIFIED and verdict.comparisons == 0:
        verdict.inconclusive("no comparison inside the trust region")
    report = verdict.report()
    if report.status == Status.INCONCLUSIVE:
        extra = f", {len(verdict.notes) - 1} more" if len(verdict.notes) > 1 else ""
        logger.info(f"{identity} [{kind}]: inconclusive ({verdict.comparisons} comparisons): {verdict.notes[0]}{extra}")
    else:
        logger.info(f"{identity} [{kind}]: {report.status.value} ({verdict.comparisons} comparisons)")
    return report

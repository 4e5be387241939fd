"""
Subcommand handlers for the Yangian kernel command line.
"""
from functools import partial
from itertools import combinations
from typing import Callable, Iterator, List, Optional, Tuple
import logging

from .database import init_db, session_scope
from .logic import rmatrix
from .logic.algebra import AlgebraKind
from .logic.currents import CATALOG, RelationTag, verify_current_relation
from .logic.errors import IndexOutOfRange, InvalidAlgebra
from .logic.gauss import IdentityTag, extract_gauss, tags_for, verify_gauss_identity
from .logic.mode_algebra import AlgebraCheck, ModeAlgebra, verify_algebra_check
from .logic.projection import (
    FORMULA_NAMES,
    Projection,
    composed_factors,
    formula_tree,
    to_sexpr,
    top_coordinate,
    verify_composed_projection,
    verify_hat_projections,
    verify_recursions,
)
from .models import CommutatorTableRecord
from .schemas import RULE_DERIVATION_VERSION, Report, TrustBox

logger = logging.getLogger(__name__)

RMATRIX_CHECKS = {
    "structure": rmatrix.check_structure,
    "ybe": rmatrix.check_ybe,
    "unitarity": rmatrix.check_unitarity,
}

PROJECTION_IDENTITIES = ["composed-projection", "top-coordinate", "recursions", "hat-projections"]


class UsageError(ValueError):
    """Malformed command-line input; maps to exit code 3."""


def parse_algebra(code: str) -> AlgebraKind:
    try:
        return AlgebraKind.parse(code)
    except InvalidAlgebra as e:
        raise UsageError(str(e)) from e


# ---- derived-table cache ------------------------------------------------------------


def load_cached_rules(kind: AlgebraKind, box: TrustBox) -> int:
    """
    Preload the shared commutator table of (kind, box) from the cache.

    Returns:
        The number of commutators loaded; 0 on a miss, a stale version or a
        corrupt row (the table is then derived again).
    """
    init_db()
    key = box.content_hash(kind.code)
    try:
        with session_scope() as db:
            record = db.query(CommutatorTableRecord).filter(CommutatorTableRecord.content_hash == key).first()
            if record is None or record.version != RULE_DERIVATION_VERSION:
                logger.info(f"Cache miss for {kind} ({key[:12]})")
                return 0
            payload = record.rules
        loaded = ModeAlgebra(kind, box).load_rules(payload)
    except (KeyError, TypeError, ValueError) as e:
        logger.warning(f"Ignoring corrupt commutator table for {kind} ({key[:12]}): {e}")
        return 0
    logger.info(f"Cache hit for {kind} ({key[:12]}): {loaded} commutators")
    return loaded


def store_rules(kind: AlgebraKind, box: TrustBox) -> int:
    """Write the shared commutator table of (kind, box) back to the cache."""
    init_db()
    key = box.content_hash(kind.code)
    payload = ModeAlgebra(kind, box).export_rules()
    try:
        with session_scope() as db:
            record = db.query(CommutatorTableRecord).filter(CommutatorTableRecord.content_hash == key).first()
            if record is None:
                record = CommutatorTableRecord(content_hash=key, algebra=kind.code)
                db.add(record)
            record.version = RULE_DERIVATION_VERSION
            record.rules = payload
    except Exception as e:
        logger.error(f"Error storing commutator table for {kind}: {e}")
        return 0
    logger.info(f"Stored {len(payload)} commutators for {kind} ({key[:12]})")
    return len(payload)


# ---- identity catalog ---------------------------------------------------------------


def identity_catalog(kind: AlgebraKind) -> List[str]:
    """Every identity name the verify and suite commands accept for kind, in suite order."""
    names = [f"rmatrix:{name}" for name in RMATRIX_CHECKS]
    names += [
        f"algebra:{check.value}"
        for check in AlgebraCheck
        if check != AlgebraCheck.CENTRALITY or kind.kappa() is not None
    ]
    names += [tag.value for tag in tags_for(kind)]
    names += [f"relation:{tag.value}" for tag in CATALOG[kind.series]]
    return names + PROJECTION_IDENTITIES


def _unknown(kind: AlgebraKind, identity: str) -> UsageError:
    options = ", ".join(identity_catalog(kind))
    return UsageError(f"unknown identity {identity!r} for {kind.code}; valid options: {options}")


def _composed_pairs(kind: AlgebraKind, i: Optional[int], j: Optional[int]) -> List[Tuple[int, int]]:
    if (i is None) != (j is None):
        raise UsageError("--i and --j must be given together")
    if i is None:
        return list(combinations(kind.index_set(), 2))
    try:
        composed_factors(kind, i, j)
    except IndexOutOfRange as e:
        raise UsageError(str(e)) from e
    return [(i, j)]


def resolve_identity(
    kind: AlgebraKind,
    identity: str,
    box: TrustBox,
    i: Optional[int] = None,
    j: Optional[int] = None,
    which: Optional[str] = None,
) -> List[Callable[[], Report]]:
    """
    Turn an identity name into the checks it stands for, without running them.

    Raises:
        UsageError: if the identity does not exist for kind or its arguments are invalid.
    """
    head, _, tail = identity.partition(":")
    try:
        if head == "rmatrix":
            check = RMATRIX_CHECKS[tail]
            return [lambda: check(kind)]
        if head == "algebra":
            algebra_check = AlgebraCheck(tail)
            if algebra_check == AlgebraCheck.CENTRALITY and kind.kappa() is None:
                raise _unknown(kind, identity)
            return [lambda: verify_algebra_check(kind, algebra_check, box)]
        if head == "relation":
            tag = RelationTag(tail)
            if tag not in CATALOG[kind.series]:
                raise _unknown(kind, identity)
            return [lambda: verify_current_relation(kind, tag, box)]
        if identity == "composed-projection":
            projections = [Projection(which)] if which else list(Projection)
            return [
                partial(verify_composed_projection, kind, a, b, projection, box)
                for a, b in _composed_pairs(kind, i, j)
                for projection in projections
            ]
        if identity == "top-coordinate":
            return [lambda: top_coordinate(kind, box)]
        if identity == "recursions":
            return [lambda: verify_recursions(kind, box)]
        if identity == "hat-projections":
            return [lambda: verify_hat_projections(kind, box)]
        tag = IdentityTag(identity)
        if tag not in tags_for(kind):
            raise _unknown(kind, identity)
        return [lambda: verify_gauss_identity(kind, tag, box)]
    except (KeyError, ValueError) as e:
        if isinstance(e, UsageError):
            raise
        raise _unknown(kind, identity) from e


def verify_identity(
    kind: AlgebraKind,
    identity: str,
    box: TrustBox,
    i: Optional[int] = None,
    j: Optional[int] = None,
    which: Optional[str] = None,
) -> Iterator[Report]:
    checks = resolve_identity(kind, identity, box, i, j, which)
    logger.info(f"Verifying {identity} for {kind}: {len(checks)} checks")
    return (check() for check in checks)


def run_suite(kind: AlgebraKind, box: TrustBox) -> Iterator[Report]:
    """The full acceptance catalog for one algebra, in catalog order."""
    for identity in identity_catalog(kind):
        yield from verify_identity(kind, identity, box)


# ---- artifacts ----------------------------------------------------------------------------


def gauss_table(kind: AlgebraKind, box: TrustBox, plus: bool) -> dict:
    """Gauss coordinates of T+ or T- as JSON-ready mode tables."""
    table = extract_gauss(ModeAlgebra(kind, box), plus)
    return {"algebra": kind.code, "sign": "+" if plus else "-", "box": box.model_dump(), "coordinates": table.to_json()}


def export_formula(kind: AlgebraKind, formula: Optional[str], fmt: str):
    """
    Expression tree of the top-coordinate formula as a dict (json) or a string (sexpr).
    """
    if formula is not None and formula not in FORMULA_NAMES.values():
        valid = ", ".join(sorted(FORMULA_NAMES.values()))
        raise UsageError(f"unknown formula {formula!r}; valid options: {valid}")
    try:
        tree = formula_tree(kind, formula)
    except IndexOutOfRange as e:
        raise UsageError(str(e)) from e
    return tree if fmt == "json" else to_sexpr(tree)

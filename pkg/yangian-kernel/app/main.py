"""
Main entry point for the Yangian kernel command line.
"""
from typing import Iterable, List, Optional, Sequence
import argparse
import json
import logging
import os
import sys

from pydantic import ValidationError

from app.routes import (
    RMATRIX_CHECKS,
    UsageError,
    export_formula,
    gauss_table,
    identity_catalog,
    load_cached_rules,
    parse_algebra,
    run_suite,
    store_rules,
    verify_identity,
)
from app.schemas import Report, RunConfig, Status, TrustBox

logger = logging.getLogger(__name__)

EXIT_VERIFIED = 0
EXIT_FAILED = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="yangian-kernel", description="Exact symbolic checks for Yangian doubles")
    parser.add_argument("--log-level", default=os.getenv("YANGIAN_LOG_LEVEL", "WARNING"))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_box(p: argparse.ArgumentParser) -> None:
        p.add_argument("--algebra", required=True)
        p.add_argument("--lminus", type=int, default=2)
        p.add_argument("--lplus", type=int, default=2)
        p.add_argument("--maxlen", type=int, default=3)
        p.add_argument("--output")
        p.add_argument("--no-cache", action="store_true")

    r = sub.add_parser("rmatrix", help="R-matrix structure, Yang-Baxter and unitarity checks")
    r.add_argument("--algebra", required=True)
    r.add_argument("--check", choices=sorted(RMATRIX_CHECKS) + ["all"], default="all")
    r.add_argument("--output")

    g = sub.add_parser("gauss", help="dump the Gauss coordinates of T+ or T-")
    with_box(g)
    g.add_argument("--sign", choices=["plus", "minus"], default="plus")

    v = sub.add_parser("verify", help="verify one identity")
    with_box(v)
    v.add_argument("--identity", required=True)
    v.add_argument("--i", type=int)
    v.add_argument("--j", type=int)
    v.add_argument("--which", choices=["Pf+", "Pf-", "Pe+", "Pe-"])

    c = sub.add_parser("catalog", help="list the identities of an algebra")
    c.add_argument("--algebra", required=True)

    e = sub.add_parser("export", help="export a top-coordinate formula")
    e.add_argument("--algebra", required=True)
    e.add_argument("--formula")
    e.add_argument("--format", choices=["json", "sexpr"], default="json")

    s = sub.add_parser("suite", help="run the whole catalog for one algebra")
    with_box(s)
    return parser


def _emit(lines: Iterable[str], output: Optional[str]) -> None:
    handle = open(output, "w") if output else None
    try:
        for line in lines:
            sys.stdout.write(line + "\n")
            sys.stdout.flush()
            if handle:
                handle.write(line + "\n")
    finally:
        if handle:
            handle.close()


def exit_code(reports: Sequence[Report]) -> int:
    statuses = {r.status for r in reports}
    if Status.FAILED in statuses:
        return EXIT_FAILED
    if Status.INCONCLUSIVE in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_VERIFIED


def _config(args: argparse.Namespace, identities: List[str]) -> RunConfig:
    box = TrustBox(lminus=args.lminus, lplus=args.lplus, maxlen=args.maxlen)
    return RunConfig(
        algebra=args.algebra,
        identities=identities,
        box=box,
        output=args.output,
        use_cache=not args.no_cache,
    )


def _verify(args: argparse.Namespace) -> List[Report]:
    """Run verify or suite, streaming each report line as soon as it exists."""
    config = _config(args, [args.identity] if args.command == "verify" else ["all"])
    kind = parse_algebra(config.algebra)
    if args.command == "verify":
        source = verify_identity(kind, args.identity, config.box, args.i, args.j, args.which)
    else:
        source = run_suite(kind, config.box)
    if config.use_cache:
        load_cached_rules(kind, config.box)
    reports: List[Report] = []

    def lines():
        for report in source:
            reports.append(report)
            yield report.line()

    _emit(lines(), config.output)
    if config.use_cache:
        store_rules(kind, config.box)
    return reports


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run one command; returns 0 (all verified), 1 (a failure), 2 (inconclusive) or 3 (usage error).
    """
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    logger.info(f"Starting {args.command}")
    try:
        if args.command == "catalog":
            kind = parse_algebra(args.algebra)
            _emit((json.dumps({"identity": name}) for name in identity_catalog(kind)), None)
            return EXIT_VERIFIED
        if args.command == "export":
            kind = parse_algebra(args.algebra)
            result = export_formula(kind, args.formula, args.format)
            _emit([json.dumps(result, sort_keys=True) if args.format == "json" else result], None)
            return EXIT_VERIFIED
        if args.command == "gauss":
            config = _config(args, [])
            kind = parse_algebra(config.algebra)
            table = gauss_table(kind, config.box, args.sign == "plus")
            _emit([json.dumps(table, sort_keys=True)], config.output)
            return EXIT_VERIFIED
        if args.command == "rmatrix":
            kind = parse_algebra(args.algebra)
            names = sorted(RMATRIX_CHECKS) if args.check == "all" else [args.check]
            reports = [RMATRIX_CHECKS[name](kind) for name in names]
            _emit((r.line() for r in reports), args.output)
            return exit_code(reports)
        reports = _verify(args)
    except (UsageError, ValidationError) as e:
        logger.error(f"Usage error: {e}")
        sys.stderr.write(f"usage error: {e}\n")
        return EXIT_USAGE
    code = exit_code(reports)
    logger.info(f"Finished {args.command} with exit code {code}")
    return code


if __name__ == "__main__":
    sys.exit(run())

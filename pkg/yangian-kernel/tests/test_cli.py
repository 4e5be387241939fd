"""
Tests for the command line: output lines, exit codes and the table cache.
"""
import json

from app.logic.algebra import AlgebraKind
from app.main import EXIT_USAGE, EXIT_VERIFIED, run
from app.models import CommutatorTableRecord
from app.routes import load_cached_rules
from app.schemas import RULE_DERIVATION_VERSION, TrustBox

BOX_ARGS = ["--lminus", "1", "--lplus", "1", "--maxlen", "2"]


def _lines(capsys):
    return [json.loads(line) for line in capsys.readouterr().out.splitlines() if line]


def test_catalog(capsys):
    assert run(["catalog", "--algebra", "A2"]) == EXIT_VERIFIED
    names = [line["identity"] for line in _lines(capsys)]
    assert names[:3] == ["rmatrix:structure", "rmatrix:ybe", "rmatrix:unitarity"]
    assert "relation:EF-delta" in names
    assert "algebra:centrality" not in names
    assert names[-1] == "hat-projections"


def test_catalog_of_orthogonal_series(capsys):
    run(["catalog", "--algebra", "B2"])
    names = [line["identity"] for line in _lines(capsys)]
    assert "algebra:centrality" in names
    assert "relation:FF-short" in names
    assert "b-inversions" in names


def test_rmatrix_check(capsys):
    assert run(["rmatrix", "--algebra", "C2", "--check", "ybe"]) == EXIT_VERIFIED
    (line,) = _lines(capsys)
    assert line["identity"] == "rmatrix:ybe"
    assert line["algebra"] == "C2"
    assert line["status"] == "verified"


def test_export_json(capsys):
    assert run(["export", "--algebra", "C2", "--formula", "top-C"]) == EXIT_VERIFIED
    tree = json.loads(capsys.readouterr().out)
    assert tree["formula"] == "top-C"
    assert tree["sign"] == -1


def test_export_sexpr(capsys):
    assert run(["export", "--algebra", "A3", "--format", "sexpr"]) == EXIT_VERIFIED
    assert capsys.readouterr().out.strip() == "(times (current 1 (shift 0)) (current 2 (shift 0)))"


def test_export_wrong_formula(capsys):
    assert run(["export", "--algebra", "C2", "--formula", "top-B"]) == EXIT_USAGE
    assert run(["export", "--algebra", "C2", "--formula", "nope"]) == EXIT_USAGE
    assert "valid options" in capsys.readouterr().err


def test_unknown_identity(capsys):
    assert run(["verify", "--algebra", "A2", "--identity", "no-such-thing", "--no-cache"] + BOX_ARGS) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "valid options" in err
    assert "rmatrix:ybe" in err


def test_identity_from_another_series(capsys):
    code = run(["verify", "--algebra", "A2", "--identity", "relation:FF-short", "--no-cache"] + BOX_ARGS)
    assert code == EXIT_USAGE


def test_bad_algebra(capsys):
    assert run(["catalog", "--algebra", "E8"]) == EXIT_USAGE
    assert run(["rmatrix", "--algebra", "B1"]) == EXIT_USAGE


def test_bad_box(capsys):
    assert run(["verify", "--algebra", "A2", "--identity", "inverse", "--lminus", "0", "--no-cache"]) == EXIT_USAGE


def test_missing_subcommand(capsys):
    assert run([]) == EXIT_USAGE


def test_half_given_pair(capsys):
    code = run(["verify", "--algebra", "D2", "--identity", "composed-projection", "--i", "1", "--no-cache"] + BOX_ARGS)
    assert code == EXIT_USAGE


def test_verify_relation(capsys):
    code = run(["verify", "--algebra", "A2", "--identity", "relation:FF-same", "--no-cache"] + BOX_ARGS)
    assert code == EXIT_VERIFIED
    (line,) = _lines(capsys)
    assert line["identity"] == "relation:FF-same"
    assert (line["box"]["lminus"], line["box"]["lplus"], line["box"]["maxlen"]) == (1, 1, 2)


def test_verify_single_composed_projection(capsys):
    argv = ["verify", "--algebra", "D2", "--identity", "composed-projection", "--i=-1", "--j=0", "--which", "Pf+"]
    assert run(argv + ["--no-cache"] + BOX_ARGS) == EXIT_VERIFIED
    (line,) = _lines(capsys)
    assert line["identity"] == "composed-projection:Pf+:-1,0"


def test_output_file_mirrors_stdout(capsys, tmp_path):
    target = tmp_path / "reports.jsonl"
    run(["rmatrix", "--algebra", "D2", "--output", str(target)])
    assert target.read_text() == capsys.readouterr().out


def test_runs_are_deterministic(capsys):
    argv = ["verify", "--algebra", "A2", "--identity", "algebra:jacobi", "--no-cache"] + BOX_ARGS
    run(argv)
    first = _lines(capsys)
    run(argv)
    second = _lines(capsys)
    for line in first + second:
        line.pop("elapsed_ms")
    assert first == second


def test_gauss_dump(capsys):
    assert run(["gauss", "--algebra", "A2", "--no-cache"] + BOX_ARGS) == EXIT_VERIFIED
    (dump,) = _lines(capsys)
    assert dump["sign"] == "+"
    assert "F+[2,1]" in dump["coordinates"]


def test_cache_round_trip(capsys, test_db, fresh_rules):
    """A verify run stores its commutator table; a fresh process can preload it."""
    run(["verify", "--algebra", "A2", "--identity", "inverse"] + BOX_ARGS)
    records = test_db.query(CommutatorTableRecord).all()
    assert len(records) == 1
    assert records[0].algebra == "A2"
    assert records[0].rules

    fresh_rules.clear()
    box = TrustBox(lminus=1, lplus=1, maxlen=2)
    assert load_cached_rules(AlgebraKind.parse("A2"), box) == len(records[0].rules)


def test_cache_miss(test_db, fresh_rules):
    assert load_cached_rules(AlgebraKind.parse("B2"), TrustBox(lminus=1, lplus=1, maxlen=2)) == 0


def _corrupt_record(db, kind: AlgebraKind, box: TrustBox, rules_json: str) -> None:
    db.add(
        CommutatorTableRecord(
            content_hash=box.content_hash(kind.code),
            algebra=kind.code,
            version=RULE_DERIVATION_VERSION,
            rules_json=rules_json,
        )
    )
    db.commit()


def test_corrupt_cache_row_is_ignored(test_db, fresh_rules):
    kind, box = AlgebraKind.parse("A2"), TrustBox(lminus=1, lplus=1, maxlen=2)
    _corrupt_record(test_db, kind, box, "{not json")
    assert load_cached_rules(kind, box) == 0


def test_malformed_cache_entry_loads_nothing(test_db, fresh_rules):
    kind, box = AlgebraKind.parse("A2"), TrustBox(lminus=1, lplus=1, maxlen=2)
    good = {"pair": [[1, 2, 0], [2, 1, -1]], "value": []}
    bad = {"pair": [[1, 2, 0]], "value": [{"word": [], "coefficient": {"num": [[0, "x"]], "den": [[0, "1"]]}}]}
    _corrupt_record(test_db, kind, box, json.dumps([good, bad]))
    assert load_cached_rules(kind, box) == 0
    assert not fresh_rules.table(box.content_hash(kind.code))


def test_verify_recomputes_after_corrupt_row(capsys, test_db, fresh_rules):
    kind, box = AlgebraKind.parse("A2"), TrustBox(lminus=1, lplus=1, maxlen=2)
    _corrupt_record(test_db, kind, box, "[{\"pair\": 3}]")
    run(["verify", "--algebra", "A2", "--identity", "inverse"] + BOX_ARGS)
    test_db.expire_all()
    (record,) = test_db.query(CommutatorTableRecord).all()
    assert record.rules

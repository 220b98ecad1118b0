import os
import pathlib

import pytest

import iostd

CORPUS = pathlib.Path(os.environ.get("IOSTD_CORPUS_DIR", pathlib.Path(__file__).parents[2] / "corpus"))


def text(name):
    return (CORPUS / name).read_text()


def test_bank_validates_and_formats_stably():
    src = text("bank.iostd")
    assert not [f for f in iostd.validate(src) if f["severity"] == "error"]
    once = iostd.format_behavior(src)
    assert iostd.format_behavior(once) == once


def test_mutant_rejected_with_code():
    findings = iostd.validate(text("mutants/01_overlap_idle_open.iostd"))
    assert "OverlappingStateLabels" in {f["code"] for f in findings}


def test_syntax_error_raises_with_code():
    with pytest.raises(iostd.IostdError) as err:
        iostd.validate("behavior {")
    assert err.value.code == "ParseError"


def test_run_is_deterministic_and_replays():
    manifest = str(CORPUS / "two_transfers_run.manifest")
    a = iostd.run(manifest)
    assert a == iostd.run(manifest)
    assert iostd.audit(a) == []
    assert iostd.replay(a, manifest) == a
    assert a == text("golden/two_transfers_run.trace")


def test_seed_override_changes_header():
    trace = iostd.run(str(CORPUS / "two_transfers_run.manifest"), seed=3, policy="havoc")
    assert "# seed 3" in trace
    assert "# policy havoc" in trace


def test_explore_two_transfers():
    r = iostd.explore(str(CORPUS / "two_transfers.manifest"))
    assert r["configurations"] == 18
    assert r["terminals"] == 1
    assert r["violations"] == []


def test_budget_error():
    with pytest.raises(iostd.IostdError) as err:
        iostd.explore(str(CORPUS / "two_transfers.manifest"), bound=0)
    assert err.value.code == "BudgetExceeded"


def test_double_spend_not_serializable():
    findings = iostd.check_serializability(str(CORPUS / "double_spend.manifest"))
    assert findings and all(f["code"] == "NonSerializable" for f in findings)
    assert findings[0]["attachment"].startswith("# iostd-trace")


def test_export_purse():
    m = iostd.export_machine(str(CORPUS / "purse.manifest"))
    lines = [l for l in m.splitlines() if " | " in l and not l.startswith("init")]
    assert len(lines) == 44

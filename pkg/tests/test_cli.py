from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest
from conftest import CORPUS_DIR, ROOT
from hypothesis import given, strategies as st

from finmod import corpus as corpus_mod
from finmod.abelian import MalformedInput
from finmod.cli import main
from finmod.instances import canonical_json, dumps, from_json, load, loads, plain


@pytest.fixture(autouse=True)
def _restore_guard(monkeypatch):
    monkeypatch.delenv("FINMOD_MAX_SIZE", raising=False)


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name: str, obj) -> str:
    p = tmp_path / f"{name}.json"
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


# -- instances --------------------------------------------------------------------------------


@given(st.lists(st.integers(1, 10**30), max_size=4), st.text(max_size=20))
def test_instance_round_trip(orders, notes):
    inst = plain(orders, name="x", notes=notes)
    text = dumps(inst)
    again = loads(text)
    assert again == inst and dumps(again) == text


def test_big_integers_are_exact():
    big = (1 << 60) + 1
    text = canonical_json({"orders": [big, 3]})
    assert f'"{big}"' in text and ",3]" in text
    assert loads(text).orders == (big, 3)


def test_ring_instance_round_trip():
    for inst in corpus_mod.read(CORPUS_DIR).instances:
        assert loads(dumps(inst)) == inst
        assert (CORPUS_DIR / f"{inst.name}.json").read_text() == dumps(inst) + "\n"


@pytest.mark.parametrize(
    "bad",
    [
        "[1, 2]",
        "{}",
        '{"orders": 4}',
        '{"orders": [0]}',
        '{"orders": [true]}',
        '{"orders": [2], "ring": {"generators": [{"label": "a", "matrix": [[1, 0]]}]}}',
        '{"orders": [2, 4], "ring": {"generators": [{"label": "a", "matrix": [[1, 0], [1, 1]]}]}}',
        "not json",
    ],
)
def test_malformed_instances(bad):
    with pytest.raises(MalformedInput):
        loads(bad)


def test_load_uses_file_stem(tmp_path):
    p = write(tmp_path, "stem", {"orders": [4]})
    assert load(p).name == "stem"
    with pytest.raises(FileNotFoundError):
        load(tmp_path / "missing.json")
    assert from_json({"orders": [2], "extra": 1}).to_json()["extra"] == 1


# -- check -------------------------------------------------------------------------------------------


def test_check_exit_codes_and_schema(capsys):
    code, out, _ = run(capsys, "check", "dual-cs-baer", str(CORPUS_DIR / "z2_z16.json"))
    doc = json.loads(out)
    assert code == 1 and doc["verdict"] is False
    assert set(doc) == {"instance", "property", "flags", "verdict", "certificate", "engine_version"}
    code, out, _ = run(capsys, "check", "dual-cs-baer", str(CORPUS_DIR / "z16.json"))
    assert code == 0 and json.loads(out)["verdict"] is True


def test_check_relative_and_dual(capsys):
    code, out, _ = run(capsys, "check", "cs-baer", str(CORPUS_DIR / "z6.json"), "--codomain", str(CORPUS_DIR / "z4.json"), "--strong")
    assert code == 0 and json.loads(out)["certificate"]["codomain"] == "z4"
    code, out, _ = run(capsys, "check", "cs-baer", "--dual", str(CORPUS_DIR / "z2_z16.json"))
    assert code == 1 and json.loads(out)["property"] == "dual_cs_baer"


def test_check_audit_and_timing(capsys):
    code, out, _ = run(capsys, "check", "extending", str(CORPUS_DIR / "z4_z8.json"), "--audit")
    doc = json.loads(out)
    assert doc["replay"]["ok"] and doc["replay"]["scope"] == "complete" and "wall_time" not in doc
    _, out, _ = run(capsys, "check", "extending", str(CORPUS_DIR / "z4_z8.json"), "--timing")
    assert json.loads(out)["wall_time"] >= 0


def test_check_is_deterministic(capsys):
    a = run(capsys, "check", "cs-baer", str(CORPUS_DIR / "z4_z8.json"), "--strong")
    b = run(capsys, "check", "cs-baer", str(CORPUS_DIR / "z4_z8.json"), "--strong")
    assert a == b


@pytest.mark.parametrize(
    "argv,code",
    [
        (["check", "nonsense", "{z4}"], "invalid_property"),
        (["check", "sip", "{z4}", "--strong"], "invalid_property"),
        (["check", "extending", "{missing}"], "io_error"),
        (["check", "extending", "{bad}"], "parse_error"),
        (["check", "cs-baer", "{z4}", "--codomain", "{swap}"], "context_mismatch"),
        (["check", "extending", "{big}", "--max-size", "100"], "size_guard"),
        (["verify", "--suite", "nope", "{dir}"], "unknown_suite"),
        (["verify", "--suite", "st00", "{missing}"], "io_error"),
        (["classify", "--p", "4", "--max-sum", "2"], "invalid_argument"),
        (["classify", "--p", "2", "--max-sum", "2", "--property", "extending"], "invalid_argument"),
        (["check"], "usage_error"),
        (["frobnicate"], "usage_error"),
    ],
)
def test_error_codes(capsys, tmp_path, argv, code):
    paths = {
        "{z4}": str(CORPUS_DIR / "z4.json"),
        "{swap}": str(CORPUS_DIR / "swap_z2_z2.json"),
        "{missing}": str(tmp_path / "missing.json"),
        "{bad}": write(tmp_path, "bad", "{oops"),
        "{big}": write(tmp_path, "big", {"orders": [2, 2, 2, 2, 2, 2, 2, 2]}),
        "{dir}": str(CORPUS_DIR),
    }
    argv = [paths.get(a, a) for a in argv]
    status, out, _ = run(capsys, *argv)
    assert status == 2
    assert json.loads(out)["error"]["code"] == code


# -- classify / verify / corpus ----------------------------------------------------------------------


def test_classify_table_and_json(capsys, tmp_path):
    code, out, err = run(capsys, "classify", "--p", "3", "--max-sum", "3")
    assert code == 0 and out.splitlines()[0].split()[:3] == ["partition", "orders", "verdict"]
    assert json.loads(err) == {"property": "dual_cs_baer", "strong": False, "p": 3, "max_sum": 3, "rows": 6, "mismatches": 0}
    target = tmp_path / "rows.jsonl"
    code, out, _ = run(capsys, "classify", "--p", "2", "--max-sum", "3", "--strong", "--format", "json", "--out", str(target))
    rows = [json.loads(line) for line in target.read_text().splitlines()]
    assert code == 0 and json.loads(out)["mismatches"] == 0
    assert [r["partition"] for r in rows] == [[1], [2], [1, 1], [3], [2, 1], [1, 1, 1]]
    assert [r["verdict"] for r in rows] == [True, True, False, True, False, False]


def test_classify_mixed(capsys):
    code, out, err = run(capsys, "classify", "--mixed", "32")
    assert code == 0 and json.loads(err)["mismatches"] == 0
    assert "engine" in out.splitlines()[0]


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "socrad", str(CORPUS_DIR))
    doc = json.loads(out)
    assert code == 0 and doc["violations"] == 0 and doc["reports"]
    code, out, _ = run(capsys, "verify", "--suite", "nonsingular", str(CORPUS_DIR), "--format", "table")
    assert code == 0 and out.splitlines()[0].split() == ["suite", "instance", "checks", "skipped", "violations"]


def test_corpus_commands(capsys, tmp_path):
    target = tmp_path / "c"
    code, out, _ = run(capsys, "corpus", "build", str(target))
    assert code == 0 and json.loads(out)["written"] == len(list(target.glob("*.json")))
    for p in CORPUS_DIR.glob("*.json"):
        assert (target / p.name).read_bytes() == p.read_bytes()
    code, out, _ = run(capsys, "corpus", "list", str(target))
    names = [json.loads(line)["name"] for line in out.splitlines()]
    assert code == 0 and "z4_z8" in names
    code, out, _ = run(capsys, "corpus", "run", str(target), "--property", "weak-duo")
    rows = {json.loads(line)["instance"]: json.loads(line)["verdict"] for line in out.splitlines()}
    assert rows["z2_z2"] is False and rows["z4"] is True


def _cli(*argv: str) -> subprocess.CompletedProcess:
    return subprocess.run([sys.executable, "-m", "finmod.cli", *argv], capture_output=True, cwd=ROOT, check=False)


def test_outputs_identical_across_worker_counts():
    for argv in (
        ["verify", "--suite", "st00", str(CORPUS_DIR)],
        ["verify", "--suite", "essip", str(CORPUS_DIR)],
        ["classify", "--p", "2", "--max-sum", "4"],
        ["corpus", "run", str(CORPUS_DIR), "--property", "cs-baer"],
    ):
        one = _cli(*argv, "--workers", "1")
        two = _cli(*argv, "--workers", "2")
        assert one.returncode == two.returncode == 0, one.stderr
        assert one.stdout == two.stdout


def test_max_size_flag_does_not_leak(capsys):
    run(capsys, "check", "extending", str(CORPUS_DIR / "z4.json"), "--max-size", "100")
    assert "FINMOD_MAX_SIZE" not in os.environ

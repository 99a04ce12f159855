import json

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker
from sqlalchemy.pool import StaticPool

from tuplecert import cli
from tuplecert.cli import main
from tuplecert.models import Run
from tuplecert.schemas import ENVELOPE_FIELDS


def run(capsys, *args):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_compatible(capsys, systems):
    code, out, _ = run(capsys, "check", systems / "toy.trs", systems / "toy.int")
    assert code == 0
    assert out.endswith("Compatible (13/13 rules)\n")


def test_check_incompatible(capsys, systems):
    code, out, _ = run(capsys, "check", systems / "toy.trs", systems / "toy-uncorrected.int")
    assert code == 1
    assert "    witness: {}\n" in out


def test_json_envelope(capsys, systems):
    code, out, _ = run(capsys, "--json", "check", systems / "add.trs", systems / "add.int")
    assert code == 0
    envelope = json.loads(out)
    assert set(envelope) == ENVELOPE_FIELDS
    assert envelope["command"] == "check"
    assert envelope["verdict"] == "Compatible"
    assert sorted(envelope["inputs"]) == ["add.int", "add.trs"]
    assert all(len(sha) == 64 for sha in envelope["inputs"].values())
    assert envelope["details"]["oriented"] == envelope["details"]["total"] == 2


def test_search_writes_a_checkable_interpretation(capsys, systems, tmp_path):
    found = tmp_path / "dbl.int"
    code, out, _ = run(capsys, "search", systems / "dbl.trs", "--kmax", 1, "--emit-int", found)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "strata: {dbl}"
    assert "stratum 1, additive at k=1: no model" in lines
    assert "stratum 1, linear at k=1: solved" in lines
    assert "YES" in lines
    assert "J dbl x : cost = x + 1 ; size = 2 * x" in found.read_text(encoding="utf-8")
    code, out, _ = run(capsys, "check", systems / "dbl.trs", found)
    assert code == 0
    assert out.endswith("Compatible (2/2 rules)\n")


def test_search_maybe(capsys, systems):
    code, out, _ = run(capsys, "--json", "search", systems / "loop.trs", "--kmax", 1, "--seed", 9)
    assert code == 2
    envelope = json.loads(out)
    assert envelope["verdict"] == "MAYBE"
    assert envelope["seed"] == 9


def test_search_emits_smt(capsys, systems, tmp_path):
    code, _, _ = run(capsys, "search", systems / "dbl.trs", "--kmax", 1, "--emit-smt", tmp_path / "smt")
    assert code == 0
    text = (tmp_path / "smt" / "stratum_1.smt2").read_text(encoding="utf-8")
    assert text.startswith("; stratum 1: dbl (linear, k=1)\n")


def test_bound(capsys, systems):
    code, out, _ = run(capsys, "bound", systems / "toy.trs", systems / "toy.int")
    assert code == 0
    assert out.splitlines()[-1] == "irc: O(n^2)"
    code, out, _ = run(capsys, "bound", systems / "add.trs", systems / "add.int", "--max-size", 3)
    assert code == 0
    assert out.endswith("irc: O(n)\nn\tbound(n)\n1\t2\n2\t3\n3\t4\n")


def test_bound_inconclusive_and_not_derived(capsys, systems):
    code, out, _ = run(capsys, "bound", systems / "add.trs", systems / "exp-size.int")
    assert code == 2
    assert out.splitlines()[-1] == "irc: Inconclusive (constructor sizes not additive: s)"
    code, out, _ = run(capsys, "bound", systems / "toy.trs", systems / "toy-uncorrected.int")
    assert code == 1
    assert out == "irc: not derived, interpretation is Incompatible (12/13 rules)\n"


def test_oracle(capsys, systems):
    code, out, _ = run(capsys, "oracle", systems / "add.trs", "--max-size", 5)
    assert code == 0
    assert out == "n\tirc(n)\n1\t0\n2\t0\n3\t1\n4\t2\n5\t3\n"


def test_oracle_divergence(capsys, systems):
    code, out, _ = run(
        capsys, "--json", "oracle", systems / "toyama.trs", "--relation", "full", "--max-size", 8, "--budget", 50
    )
    assert code == 0
    envelope = json.loads(out)
    assert envelope["verdict"] == "diverged"
    assert envelope["details"]["start"] == "ground"
    assert envelope["details"]["diverging_term"] == "f 0 1 (g 0 1)"
    assert envelope["details"]["irc"][5:] == [None, None, None]


def test_export_smt(capsys, systems, tmp_path):
    code, out, _ = run(capsys, "export-smt", systems / "dbl.trs", "--shape", "linear", "--out", tmp_path)
    assert code == 0
    assert out.startswith("stratum_1.smt2: dbl, ")
    text = (tmp_path / "stratum_1.smt2").read_text(encoding="utf-8")
    assert "(set-logic QF_NIA)" in text
    assert "(declare-const d_dbl_1_1 Int)" in text


def test_export_smt_checks_a_model(capsys, systems, tmp_path):
    good = tmp_path / "good.model"
    good.write_text("a_0_1 = 0\na_s_1 = 1\nc_dbl_0 = 1\nc_dbl_1 = 1\nd_dbl_1_0 = 0\nd_dbl_1_1 = 2\n", encoding="utf-8")
    code, out, _ = run(capsys, "export-smt", systems / "dbl.trs", "--shape", "linear", "--out", tmp_path, "--model", good)
    assert code == 0
    assert "stratum 1: model satisfies the constraints" in out
    bad = tmp_path / "bad.model"
    bad.write_text(good.read_text(encoding="utf-8").replace("d_dbl_1_1 = 2", "d_dbl_1_1 = 1"), encoding="utf-8")
    code, out, _ = run(capsys, "export-smt", systems / "dbl.trs", "--shape", "linear", "--out", tmp_path, "--model", bad)
    assert code == 1
    assert "stratum 1: model violates the constraints" in out


@pytest.mark.parametrize(
    "args",
    [
        ["check"],
        ["frobnicate"],
        ["check", "missing.trs", "missing.int"],
        ["search", "missing.trs"],
        ["oracle", "--relation", "outermost", "x"],
    ],
)
def test_usage_errors(capsys, args):
    code, _, _ = run(capsys, *args)
    assert code == 64


def test_parse_errors(capsys, systems, tmp_path):
    broken = tmp_path / "broken.trs"
    broken.write_text("SORTS nat\nSIG 0 : nat\nRULES\n0 -> y\n", encoding="utf-8")
    code, _, err = run(capsys, "oracle", broken)
    assert code == 65
    assert "error:" in err
    binary = tmp_path / "binary.trs"
    binary.write_bytes(b"\xff\xfe")
    code, _, err = run(capsys, "oracle", binary)
    assert code == 65
    code, _, err = run(capsys, "check", systems / "add.trs", systems / "toy.int")
    assert code == 65


def test_record_stores_the_run(capsys, systems, monkeypatch):
    engine = create_engine("sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool)
    Session = sessionmaker(autocommit=False, autoflush=False, bind=engine)
    monkeypatch.setattr(cli, "engine", engine)
    monkeypatch.setattr(cli, "SessionLocal", Session)
    code, _, _ = run(capsys, "--record", "check", systems / "add.trs", systems / "add.int")
    assert code == 0
    with Session() as db:
        runs = db.query(Run).all()
    assert len(runs) == 1
    assert runs[0].command == "check"
    assert runs[0].verdict == "Compatible"
    assert json.loads(runs[0].inputs).keys() == {"add.trs", "add.int"}

import json
from pathlib import Path

import pytest

from robba.cli import main

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_malformed_character_exits_2(capsys):
    code, _, err = run(capsys, "rank1", "--p", "5", "--char", "m=1,s=7")
    assert code == 2
    assert "^" in err


def test_rank1_trivial(capsys):
    code, out, _ = run(capsys, "rank1", "--char", "m=0,s=0")
    doc = json.loads(out)
    assert code == 0
    assert doc["report"]["euler_char"] == -1
    assert doc["config"]["window"] == {"L": 4, "M": 200, "N": 14, "ntol": 7}


def test_iwasawa_prep_distinguished(capsys):
    code, out, _ = run(capsys, "iwasawa", "prep", "--f", "p^2 + p*X + X^3")
    W = json.loads(out)["weierstrass"]
    assert code == 0 and (W["mu"], W["lambda"]) == (0, 3)


def test_iwasawa_zero_is_a_precondition_failure(capsys):
    code, _, err = run(capsys, "iwasawa", "prep", "--f", "0")
    assert code == 4 and "IndistinguishableFromZero" in err


def test_fildmod_filtration(capsys):
    code, out, _ = run(capsys, "fildmod", "filtration", "--input", str(DATA / "ell.json"))
    doc = json.loads(out)
    assert code == 0
    assert doc["D"]["-1"] == [] and len(doc["D"]["1"]) == 2


def test_fildmod_check(capsys):
    code, out, _ = run(capsys, "fildmod", "check", "--input", str(DATA / "ell.json"))
    assert code == 0 and json.loads(out)["search"]["unique"]


@pytest.mark.parametrize("conv, lo", [("s23", -2), ("intro", 0)])
def test_selmer_conventions(capsys, conv, lo):
    code, out, _ = run(capsys, "selmer", "cone", "--input", str(DATA / "selmer.json"), "--shift-convention", conv)
    assert code == 0 and json.loads(out)["range"][0] == lo


def test_height(capsys):
    code, out, _ = run(capsys, "height", "--input", str(DATA / "height.json"))
    assert json.loads(out)["height_gram"]["0"] == [["1", "6"], ["2", "8"]]


def test_bad_json_exits_2(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    code, _, _ = run(capsys, "fildmod", "filtration", "--input", str(f))
    assert code == 2


def test_missing_key_exits_2(tmp_path, capsys):
    f = tmp_path / "partial.json"
    f.write_text('{"dim": 1}')
    code, _, _ = run(capsys, "fildmod", "filtration", "--input", str(f))
    assert code == 2


def test_series_apply_psi(capsys):
    code, out, _ = run(capsys, "series", "apply", "--op", "psi", "--f", "X^-1")
    assert code == 0 and json.loads(out)["output"].startswith("X^-1 + O(")


def test_pairing_d2(capsys):
    code, out, _ = run(capsys, "pairing", "--p", "5", "--m", "2")
    assert code == 0 and json.loads(out)["matrix"]["det_valuation"] == 0


def test_tiny_window_is_not_stabilized(capsys):
    code, _, err = run(capsys, "check", "all", "--M", "20")
    assert code == 3 and "NotStabilized" in err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "cocycles", "--m", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["cocycles"]["alpha"]["cocycle_defect"] >= 11

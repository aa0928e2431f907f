import csv
import io
import json

import pytest

from spinmirror.chain import make_chain
from spinmirror.cli import run


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def spec_file(tmp_path):
    def write(obj):
        p = tmp_path / "chain.json"
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


def test_certificate_json():
    code, out, _ = _run("certificate", "--n", "6")
    assert code == 0
    data = json.loads(out)
    assert data["branch"] == "Mod4Plus2" and data["n"] == 6


def test_scan_bose_csv(tmp_path):
    path = tmp_path / "scan.csv"
    code, out, _ = _run("scan", "--preset", "bose", "--n", "80", "--t-max", "4000",
                        "--format", "csv", "--out", str(path))
    assert code == 0
    assert "peak_fidelity" in out
    rows = list(csv.DictReader(path.open()))
    assert list(rows[0]) == ["t", "re_f", "im_f", "abs_f", "avg_fidelity"]
    peak = max(float(r["avg_fidelity"]) for r in rows)
    assert 2 / 3 < peak < 0.85


def test_bad_spec_exit_2(spec_file):
    path = spec_file({"n": 3, "delta": 1, "couplings": [1, 0]})
    code, out, err = _run("spectrum", "--spec", path)
    assert code == 2 and out == ""
    assert "coupling 1" in err


def test_malformed_json_exit_2(spec_file):
    code, _, _ = _run("spec", "--spec", spec_file("{not json"))
    assert code == 2


def test_missing_file_exit_4(tmp_path):
    code, _, err = _run("spec", "--spec", str(tmp_path / "nope.json"))
    assert code == 4 and "I/O" in err


def test_unknown_verb_exit_2(capsys):
    code, _, _ = _run("frobnicate")
    assert code == 2


def test_canonicalize_round_trip(spec_file):
    path = spec_file({"n": 3, "delta": "1", "couplings": ["1/2", 0.5], "fields": [0, 0, 0]})
    code, out, _ = _run("spec", "--spec", path, "--canonicalize")
    assert code == 0
    code2, out2, _ = _run("spec", "--spec", spec_file(out), "--canonicalize")
    assert code2 == 0 and out2 == out


def test_format_changes_only_serialisation():
    _, js, _ = _run("spmc", "--preset", "xx", "--n", "5")
    _, txt, _ = _run("spmc", "--preset", "xx", "--n", "5", "--format", "text")
    data = json.loads(js)
    assert data["satisfied"] is True
    assert "satisfied" in txt and "True" in txt.replace("true", "True")
    assert str(data["even_integers"][0]) in txt


def test_out_file_not_written_on_failure(tmp_path, spec_file):
    target = tmp_path / "out.json"
    path = spec_file({"n": 3, "delta": 1, "couplings": [1, 2]})
    code, _, _ = _run("fold", "--spec", path, "--out", str(target))
    assert code == 2 and not target.exists()


def test_identities_verb(spec_file):
    path = spec_file(make_chain(5, 1, ["1/2", 3, 3, "1/2"]).to_dict())
    code, out, _ = _run("identities", "--spec", path)
    data = json.loads(out)
    assert code == 0 and data["ratio"] == 5 and data["trace_ok"]


def test_mirror_and_spectrum_verbs():
    code, out, _ = _run("mirror", "--preset", "xx", "--n", "6")
    assert code == 0 and json.loads(out)["mirror_time_over_pi"] == pytest.approx(1)
    code, out, _ = _run("mirror", "--preset", "heisenberg", "--n", "3")
    assert code == 0 and json.loads(out)["mirror_time"] is None
    code, out, _ = _run("spectrum", "--preset", "heisenberg", "--n", "2")
    assert json.loads(out)["eigenvalues"] == pytest.approx([-3, 1])


def test_verify_and_design_verbs():
    code, out, _ = _run("verify", "--n", "3", "4", "--trials", "5")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = _run("design", "--n", "2", "--budget", "40", "--restarts", "2")
    assert code == 0 and json.loads(out)["best_abs_f"] == pytest.approx(1, abs=1e-9)

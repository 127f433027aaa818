import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from welchbanach.cli import run
from welchbanach.continuous import ContinuousASF, FiniteMeasure
from welchbanach.fixtures import dual_basis, jordan_pair, mercedes_benz, sic_qubit
from welchbanach.serialize import matrix_from_csv, save_casf, save_pair


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, pair in [("basis", dual_basis(3)), ("mb", mercedes_benz()), ("sic", sic_qubit()),
                       ("jordan", jordan_pair())]:
        paths[name] = tmp_path / f"{name}.json"
        save_pair(pair, paths[name])
    paths["mbc"] = tmp_path / "mbc.json"
    save_casf(ContinuousASF(FiniteMeasure.uniform(3, 2 / 3), mercedes_benz()), paths["mbc"])
    paths["dir"] = tmp_path
    return paths


def test_report_dual_basis_all_equalities(files, tmp_path):
    out_json = tmp_path / "rep.json"
    code, out, _ = call("report", "--input", str(files["basis"]), "--json", str(out_json))
    assert code == 0
    rep = json.loads(out_json.read_text())
    first = [r for r in rep["report"]["records"] if r["name"].endswith("[m=1]")]
    assert first and all(r["equality"] for r in first)
    assert "metadata" in rep and "generated" in rep["metadata"]


def test_report_mercedes_benz(files, tmp_path):
    out_json = tmp_path / "rep.json"
    code, out, _ = call("report", "--input", str(files["mb"]), "--orders", "1", "--p", "4", "--json", str(out_json))
    assert code == 0
    recs = {r["name"]: r for r in json.loads(out_json.read_text())["report"]["records"]}
    for name in ("welch_sum[m=1]", "welch_max_product[m=1]", "welch_max_single[m=1]", "p_sum[p=4]"):
        assert recs[name]["equality"]
    assert "welch_max_single[m=1]" in out


def test_report_body_is_deterministic(files, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    call("report", "--input", str(files["sic"]), "--orders", "1,2", "--json", str(a))
    call("report", "--input", str(files["sic"]), "--orders", "1,2", "--json", str(b))
    ja, jb = json.loads(a.read_text()), json.loads(b.read_text())
    ja.pop("metadata"), jb.pop("metadata")
    assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)


def test_adversarial_pair_exits_zero(files):
    code, out, _ = call("report", "--input", str(files["jordan"]))
    assert code == 0
    assert "not diagonalizable" in out


def test_violation_exit_code(files, tmp_path, monkeypatch):
    from welchbanach import cli
    from welchbanach.bounds import make_record

    real = cli.full_report

    def broken(*a, **k):
        rep = real(*a, **k)
        rep.records.append(make_record("planted", 0.0, 1.0, True))
        return rep

    monkeypatch.setattr(cli, "full_report", broken)
    code, _, _ = call("report", "--input", str(files["mb"]))
    assert code == 2


def test_gram_csv(files, tmp_path):
    code, out, _ = call("gram", "--input", str(files["mb"]))
    assert code == 0
    g = matrix_from_csv(out)
    np.testing.assert_allclose(g[~np.eye(3, dtype=bool)], -0.5)
    target = tmp_path / "g.csv"
    assert call("gram", "--input", str(files["mb"]), "--out", str(target))[0] == 0
    np.testing.assert_array_equal(matrix_from_csv(target.read_text()), g)


def test_lift_with_cross_check(files):
    code, out, _ = call("lift", "--input", str(files["sic"]), "--m", "2", "--explicit")
    assert code == 0
    assert "consistent" in out


def test_continuous(files, tmp_path):
    out_json = tmp_path / "c.json"
    code, out, _ = call("continuous", "--input", str(files["mbc"]), "--p", "4", "--json", str(out_json))
    assert code == 0
    recs = {r["name"]: r for r in json.loads(out_json.read_text())["report"]["records"]}
    assert recs["cont_welch_max_single[m=1]"]["rhs"] == pytest.approx(0.25)
    assert recs["cont_p_sum[p=4]"]["equality"]


def test_metrics(files):
    code, out, _ = call("metrics", "--input", str(files["sic"]))
    assert code == 0
    assert "0.57735" in out and "equiangular.flag" in out


def test_search_etf(tmp_path):
    target = tmp_path / "r.json"
    code, out, _ = call("search", "--mode", "etf", "--dim", "2", "--restarts", "4", "--out", str(target))
    assert code == 0
    obj = json.loads(target.read_text())
    assert obj["search"]["value"] < 1e-6
    assert {"field", "dim", "p", "vectors", "functionals"} <= set(obj)


def test_search_not_converged_exit_code(tmp_path):
    code, _, _ = call("search", "--mode", "grassmannian", "--dim", "2", "--count", "5", "--p", "inf",
                      "--restarts", "1", "--max-iters", "5")
    assert code == 4


def test_search_needs_count():
    code, _, err = call("search", "--mode", "potential", "--dim", "2")
    assert code == 3 and "--count" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["report", "--input", "missing.json"],
        ["report"],
        ["frobnicate"],
        ["report", "--input", "x.json", "--orders", "one"],
    ],
)
def test_input_errors_exit_three(argv, files):
    code, _, err = call(*argv)
    assert code == 3
    assert err.count("\n") == 1


def test_invalid_json_exits_three(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call("metrics", "--input", str(bad))[0] == 3
    bad.write_text(json.dumps({"field": "real", "dim": 2, "p": 2, "vectors": [[1, 0]], "functionals": []}))
    assert call("metrics", "--input", str(bad))[0] == 3


def test_tolerance_flags(files):
    code, out, _ = call("report", "--input", str(files["jordan"]), "--tol-diag-cond", "1e20")
    assert code == 0
    assert "not diagonalizable" not in out
    assert call("report", "--input", str(files["mb"]), "--tol-rank", "0")[0] == 3


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "welchbanach.cli", "metrics", "--input", str(files["mb"])],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "correlation" in proc.stdout

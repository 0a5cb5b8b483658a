import json
import subprocess
import sys

import pytest

from qlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(ln) for ln in text.splitlines() if ln.strip()]


@pytest.mark.parametrize("n,k,expect", [
    (4, "0", {"0": {"betti": 2, "torsion": []}}),
    (7, "1", {"1": {"betti": 0, "torsion": [3]}}),
    (5, "1", {"1": {"betti": 6, "torsion": []}}),
    (7, "0-1", {"0": {"betti": 0, "torsion": []}, "1": {"betti": 0, "torsion": [3]}}),
])
def test_homology_command(capsys, n, k, expect):
    code, out, _ = run(capsys, "homology", "--n", str(n), "--p", "2", "--a", "1", "--k", k)
    assert code == 0
    (rec,) = records(out)
    assert rec["homology"] == expect


def test_graph_command(capsys):
    code, out, _ = run(capsys, "graph", "--n", "4")
    g = json.loads(out)
    assert code == 0 and len(g["vertices"]) == 6 and len(g["edges"]) == 3
    code, out, _ = run(capsys, "graph", "--n", "5", "--p", "2", "--kneser")
    assert json.loads(out)["kind"] == "kneser"


def test_complex_command_cache(capsys, tmp_path):
    args = ("complex", "--n", "6", "--max-dim", "2", "--cache-dir", str(tmp_path))
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    r1, r2 = json.loads(out1), json.loads(out2)
    assert r1["simplices"] == [15, 45, 15, 0]
    assert (r1["cache"]["status"], r2["cache"]["status"]) == ("miss", "hit")
    assert r1["cache"]["hash"] == r2["cache"]["hash"]


def test_homology_writes_log(capsys, tmp_path):
    run(capsys, "homology", "--n", "5", "--k", "1", "--cache-dir", str(tmp_path))
    run(capsys, "homology", "--n", "5", "--k", "1", "--cache-dir", str(tmp_path))
    lines = (tmp_path / "results.jsonl").read_text().splitlines()
    assert len(lines) == 2
    a, b = map(json.loads, lines)
    assert a["homology"] == b["homology"]
    assert (a["cache"]["status"], b["cache"]["status"]) == ("miss", "hit")


def test_sweep_json_and_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--n-min", "5", "--n-max", "9", "--k", "1")
    recs = records(out)
    assert code == 0 and len(recs) == 6
    assert recs[-1]["vanishing_from"] == 8 and "within computed range" in recs[-1]["note"]
    code, out, _ = run(capsys, "sweep", "--n-min", "2", "--n-max", "8", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "n,H0_betti,H0_torsion,error"
    assert lines[3] == "4,2,,"
    assert lines[-1].startswith("#") and "within computed range" in lines[-1]


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "dimension", "--p", "2", "--a", "1", "--n", "6")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["n_checks"] == 1
    code, out, _ = run(capsys, "verify", "dimension", "--p", "2", "--a", "2", "--n", "4")
    rep = json.loads(out)
    assert code == 1 and rep["failures"][0]["dimension"] == 2
    code, out, _ = run(capsys, "verify", "kneser-acyclicity", "--p", "3", "--k", "0")
    assert code == 0 and json.loads(out)["n_checks"] == 1
    code, out, _ = run(capsys, "verify", "snf", "--trials", "50")
    assert code == 0 and json.loads(out)["n_checks"] == 50
    code, out, _ = run(capsys, "verify", "cone", "--p", "3", "--a", "1", "--s-max", "3", "--t-max", "6")
    assert code == 0
    code, _, _ = run(capsys, "verify", "generator-degree", "--n", "6", "--p", "2", "--a", "2", "--k", "0-2")
    assert code == 0
    code, _, _ = run(capsys, "verify", "theorem-a", "--p", "2", "--a", "1", "--k", "0")
    assert code == 0


def test_budget_exit_code(capsys):
    code, out, err = run(capsys, "homology", "--n", "9", "--k", "2", "--budget-entries", "100")
    assert code == 2 and out == ""
    assert "budget exceeded" in err and "entries=" in err


def test_invalid_parameters(capsys):
    assert run(capsys, "homology", "--n", "5", "--p", "4")[0] == 3
    assert run(capsys, "homology", "--n", "5", "--k", "2", "--max-dim", "1")[0] == 3
    assert run(capsys, "homology", "--k", "1")[0] == 3
    assert run(capsys, "sweep", "--n-min", "5")[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["homology", "--a", "1", "--unbounded"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 3


def test_env_precedence(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("QLAB_BUDGET_ENTRIES", "100")
    assert run(capsys, "homology", "--n", "9", "--k", "2")[0] == 2
    # the flag wins over the environment
    assert run(capsys, "homology", "--n", "9", "--k", "2", "--budget-entries", "1000000")[0] == 0
    monkeypatch.setenv("QLAB_FORMAT", "csv")
    _, out, _ = run(capsys, "sweep", "--n-min", "4", "--n-max", "5")
    assert out.startswith("n,")
    _, out, _ = run(capsys, "sweep", "--n-min", "4", "--n-max", "5", "--format", "json")
    assert out.startswith("{")
    monkeypatch.setenv("QLAB_CACHE_DIR", str(tmp_path / "c"))
    _, out, _ = run(capsys, "complex", "--n", "5")
    assert json.loads(out)["cache"]["status"] == "miss"
    monkeypatch.setenv("QLAB_THREADS", "many")
    assert run(capsys, "graph", "--n", "4")[0] == 3


def test_unbounded_and_kneser_homology(capsys):
    _, out, _ = run(capsys, "homology", "--n", "6", "--unbounded", "--k", "0-1")
    rec = json.loads(out)
    assert rec["a"] == "unbounded"
    _, out, _ = run(capsys, "homology", "--n", "8", "--kneser", "--p", "2", "--k", "0-1")
    rec = json.loads(out)
    assert rec["kind"] == "kneser" and all(v == {"betti": 0, "torsion": []} for v in rec["homology"].values())


def test_threads_give_identical_output(capsys):
    outs = set()
    for t in ("1", "4"):
        _, out, _ = run(capsys, "homology", "--n", "8", "--p", "2", "--a", "2", "--k", "0-1", "--threads", t)
        outs.add(json.dumps(json.loads(out)["homology"], sort_keys=True))
    assert len(outs) == 1


def test_reproduce_subset(capsys, tmp_path):
    code, out, err = run(capsys, "reproduce", "--criteria", "1,3", "--cache-dir", str(tmp_path))
    recs = records(out)
    assert code == 0
    assert [r["criterion"] for r in recs[:-1]] == [1, 3]
    assert recs[-1] == {"passed": 2, "total": 2}
    assert "[PASS] criterion  1" in err


def test_reproduce_warm_cache_and_corruption(capsys, tmp_path, caplog):
    def details():
        out = run(capsys, "reproduce", "--criteria", "2,3,7", "--cache-dir", str(tmp_path))[1]
        return [r["detail"] for r in records(out)[:-1]]

    cold = details()
    warm = details()
    assert cold == warm
    for f in tmp_path.glob("complex-*.txt"):
        f.write_text(f.read_text() + "0: 1\n")
    assert details() == cold
    assert "corrupted" in caplog.text


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "qlab", "homology", "--n", "7", "--k", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["homology"]["1"] == {"betti": 0, "torsion": [3]}
    proc = subprocess.run([sys.executable, "-m", "qlab", "homology", "--n", "7", "--p", "6"],
                          capture_output=True, text=True)
    assert proc.returncode == 3

import subprocess
import sys

import pytest

from seqhints.cli import main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    assert run("synth", "--sentences", 900, "--sizes", "d1=200,d2=150,unlab=400,test=100,dev=50",
               "--seed", 2, "--out", out) == 0
    return out


def index_rows(path):
    lines = (path / "index.tsv").read_text().splitlines()
    head = lines[0].split("\t")
    return [dict(zip(head, ln.split("\t"))) for ln in lines[1:]]


def manifest(path):
    return dict(ln.split("\t", 1) for ln in (path / "manifest.tsv").read_text().splitlines()[1:])


def test_synth_writes_splits(dataset):
    for name in ("d1", "d2", "unlab", "test", "dev", "synth.cfg"):
        assert (dataset / (name if "." in name else f"{name}.conll")).exists()
    first = (dataset / "d2.conll").read_text().splitlines()[1]
    assert first.split()[1:3] == ["_", "_"]


def test_train_decode_eval(dataset, tmp_path, capsys):
    model = tmp_path / "m.txt"
    assert run("train", "--data", dataset / "d2.conll", "--out", model) == 0
    pred = tmp_path / "pred.conll"
    assert run("decode", "--model", model, "--data", dataset / "test.conll", "--out", pred) == 0
    capsys.readouterr()
    assert run("eval", "--gold", dataset / "test.conll", "--pred", pred, "--against", pred) == 0
    out = capsys.readouterr().out
    assert out.startswith("system\tprecision")
    assert "\ttie\n" in out


def test_train_task1_perceptron(dataset, tmp_path):
    model = tmp_path / "m1.txt"
    assert run("train", "--learner", "perceptron", "--epochs", 1, "--task", 1,
               "--data", dataset / "d1.conll", "--out", model) == 0
    assert model.read_text().startswith("seqhints-perceptron")


def test_analyze_commands(dataset, tmp_path, capsys):
    model = tmp_path / "m.txt"
    run("train", "--data", dataset / "d2.conll", "--out", model)
    capsys.readouterr()
    assert run("analyze", "discrimination", "--model", model, "--data", dataset / "unlab.conll") == 0
    assert "discrimination\t" in capsys.readouterr().out
    assert run("analyze", "weak-usefulness", "--model", model, "--data", dataset / "test.conll") == 0
    assert capsys.readouterr().out.startswith("coverage_ok")
    assert run("analyze", "bound", "--random", 3, "--out", tmp_path / "b.tsv") == 0
    assert len((tmp_path / "b.tsv").read_text().splitlines()) == 4


def test_exit_codes(tmp_path, capsys):
    assert run("train", "--data", tmp_path / "missing.conll", "--out", tmp_path / "m") == 2
    bad = tmp_path / "bad.conll"
    bad.write_text("a NN B-NP\n\n")
    assert run("train", "--data", bad, "--out", tmp_path / "m") == 2
    with pytest.raises(SystemExit) as err:
        run("train", "--bogus")
    assert err.value.code == 1
    assert run("experiment", "--mode", "nonsense", "--out", tmp_path / "x") == 1
    assert run("experiment", "--mode", "pos-feature", "--learner", "hmm", "--out", tmp_path / "x") == 1


def test_experiment_grid_and_tables(dataset, tmp_path):
    out = tmp_path / "run"
    code = run("experiment", "--mode", "baseline,self-train,one-sided-hints", "--n", "50,100", "--m", 200,
               "--iterations", 1, "--seed", "0,1", "--data-dir", dataset, "--out", out)
    assert code == 0
    rows = index_rows(out)
    assert len(rows) == 3 * 2 * 2
    assert all(r["status"] == "ok" for r in rows)
    assert all(r["discrimination"] for r in rows if r["mode"] == "one-sided-hints")
    cell = out / "one-sided-hints_n50_m200_s0"
    for name in ("metrics.tsv", "trace.tsv", "discrimination.tsv", "predictions.conll"):
        assert (cell / name).exists()
    table = (out / "win_tie_lose.tsv").read_text().splitlines()
    assert table[0] == "\tSelf-T vs Base\tHints vs Base\tHints vs Self-T"
    counts = [sum(int(x) for x in ln.split("\t")[1:]) for ln in table[1:]]
    assert sum(counts) == 3 * 4  # three comparisons over four (n, seed) cells


def test_experiment_sweeps_count_cells(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "mode = baseline\n"
        "sizes.d1 = 10\nsizes.d2 = 1600\nsizes.unlab = 10\nsizes.test = 50\n"
        "synth.mean_len = 6\nsynth.max_len = 12\n"
    )
    n_out = tmp_path / "n"
    assert run("experiment", "--config", cfg, "--n", "100,200,400,800,1600", "--m", 500, "--out", n_out) == 0
    assert len(index_rows(n_out)) == 5
    m_out = tmp_path / "m"
    assert run("experiment", "--config", cfg, "--n", 200, "--m", "500,1000,2000,4000,8936", "--out", m_out) == 0
    assert len(index_rows(m_out)) == 5
    single = tmp_path / "one"
    assert run("experiment", "--config", cfg, "--out", single) == 0
    assert len(index_rows(single)) == 1


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "mode = baseline\nlearner = perceptron\niterations = 7\nepochs = 1\n"
        "sizes.d1 = 10\nsizes.d2 = 60\nsizes.unlab = 10\nsizes.test = 30\n"
        "synth.mean_len = 5\nsynth.max_len = 10\n"
    )
    out = tmp_path / "r"
    assert run("experiment", "--config", cfg, "--learner", "hmm", "--n", 50, "--out", out) == 0
    m = manifest(out)
    assert m["learner"] == "hmm"
    assert m["iterations"] == "7"
    assert m["synth.mean_len"] == "5"


def test_failed_cells_recorded_and_exit_three(dataset, tmp_path):
    out = tmp_path / "fail"
    code = run("experiment", "--mode", "baseline", "--n", "100,5000", "--data-dir", dataset, "--out", out)
    assert code == 3
    status = [r["status"] for r in index_rows(out)]
    assert status[0] == "ok" and status[1].startswith("failed")
    assert (out / "baseline_n5000_m2000_s0" / "error.txt").exists()


def test_experiment_two_sided_and_pos_feature(dataset, tmp_path):
    out = tmp_path / "two"
    code = run("experiment", "--mode", "pos-feature,two-sided-hints", "--learner", "perceptron", "--n", 100,
               "--m", 200, "--iterations", 1, "--top-r", 10, "--data-dir", dataset, "--out", out)
    assert code == 0
    rows = {r["mode"]: r for r in index_rows(out)}
    assert rows["two-sided-hints"]["task1_f1"]
    assert (out / "win_tie_lose.tsv").read_text().startswith("\tHints2 vs POS-F")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "seqhints", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "seqhints" in proc.stdout

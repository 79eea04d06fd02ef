import json

import numpy as np
import pytest

import shuffle_sgd as ss
from shuffle_sgd.cli import main


def write_identity_dataset(path, n):
    lines = [f"0 {i + 1}:1\n" for i in range(n)]
    path.write_text("".join(lines))


@pytest.fixture
def identity6(tmp_path):
    p = tmp_path / "identity6.svm"
    write_identity_dataset(p, 6)
    return p


class TestAnalyze:
    def test_identity_ratio_is_n(self, identity6, tmp_path):
        out = tmp_path / "report"
        code = main([
            "analyze", "--input", str(identity6), "--b", "1",
            "--num-perms", "5", "--seed", "3", "--out", str(out), "--tol", "1e-10",
        ])
        assert code == 0
        payload = json.loads((tmp_path / "report.json").read_text())
        assert payload["schema_version"] == 1
        assert payload["ratios_L_over_hatL"]["mean"] == pytest.approx(6.0, rel=1e-6)
        assert "config" in payload
        csv_text = (tmp_path / "report.csv").read_text()
        assert csv_text.splitlines()[0] == "perm_seed,hatL,tildeL,ratio"
        assert len(csv_text.splitlines()) == 6

    def test_missing_file_exit_2(self, tmp_path, capsys):
        code = main([
            "analyze", "--input", str(tmp_path / "nope.svm"), "--out", str(tmp_path / "r"),
        ])
        assert code == 2
        assert "nope.svm" in capsys.readouterr().err

    def test_parse_error_names_line(self, tmp_path, capsys):
        bad = tmp_path / "bad.svm"
        bad.write_text("1 1:1\n1 1:zzz\n")
        code = main(["analyze", "--input", str(bad), "--out", str(tmp_path / "r")])
        assert code == 2
        assert "line 2" in capsys.readouterr().err

    def test_deterministic_bytes(self, identity6, tmp_path):
        args = [
            "analyze", "--input", str(identity6), "--b", "2",
            "--num-perms", "4", "--seed", "11",
        ]
        main(args + ["--out", str(tmp_path / "a")])
        main(args + ["--out", str(tmp_path / "b")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()

    def test_budget_guardrail(self, tmp_path, capsys):
        big = tmp_path / "big.svm"
        write_identity_dataset(big, 200)
        code = main([
            "analyze", "--input", str(big), "--num-perms", "1000",
            "--max-cost", "1e3", "--out", str(tmp_path / "r"),
        ])
        assert code == 2
        assert "--force" in capsys.readouterr().err
        code = main([
            "analyze", "--input", str(big), "--num-perms", "2",
            "--max-cost", "1e3", "--force", "--out", str(tmp_path / "r"),
        ])
        assert code == 0


class TestGaussianSweep:
    def test_single_point_and_determinism(self, tmp_path):
        args = [
            "gaussian-sweep", "--fixed", "d", "--fixed-value", "8",
            "--grid", "6", "--perms", "3", "--seed", "5",
        ]
        assert main(args + ["--out", str(tmp_path / "a")]) == 0
        assert main(args + ["--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
        summary = (tmp_path / "a.summary.csv").read_text().splitlines()
        assert summary[0] == "n,d,num_perms,mean_ratio,std_ratio"
        assert len(summary) == 2

    def test_empty_grid_rejected(self, tmp_path):
        code = main([
            "gaussian-sweep", "--fixed", "d", "--fixed-value", "8",
            "--grid", "", "--out", str(tmp_path / "x"),
        ])
        assert code == 2


class TestBatchSweep:
    def test_non_divisor_rejected(self, identity6, tmp_path, capsys):
        code = main([
            "batch-sweep", "--input", str(identity6), "--b-grid", "1,4",
            "--out", str(tmp_path / "x"),
        ])
        assert code == 2
        assert "divisors" in capsys.readouterr().err

    def test_b1_ratio_one_and_bn_full_reduction(self, identity6, tmp_path):
        out = tmp_path / "bs"
        code = main([
            "batch-sweep", "--input", str(identity6), "--b-grid", "1,2,3,6",
            "--perms", "4", "--tol", "1e-10", "--out", str(out),
        ])
        assert code == 0
        payload = json.loads((tmp_path / "bs.json").read_text())
        means = payload["mean_ratios"]
        assert means[0] == pytest.approx(1.0, rel=1e-9)  # b=1 tightness
        # b=n: ratio = L / L_full = 1 / (1/6) = 6 for identity rows
        assert means[-1] == pytest.approx(6.0, rel=1e-6)
        assert "loglog_slope" in payload


class TestHistogram:
    def test_single_perm_single_bin(self, identity6, tmp_path):
        out = tmp_path / "h"
        code = main([
            "histogram", "--input", str(identity6), "--num-perms", "1",
            "--bins", "10", "--out", str(out),
        ])
        assert code == 0
        rows = (tmp_path / "h.csv").read_text().splitlines()[1:]
        densities = [float(r.split(",")[2]) for r in rows]
        assert sum(1 for v in densities if v > 0) == 1

    def test_density_normalized(self, tmp_path):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((16, 4))
        ds = ss.SparseDataset.from_dense(A, labels=np.zeros(16))
        p = tmp_path / "h.svm"
        p.write_text(ss.serialize_libsvm(ds))
        code = main([
            "histogram", "--input", str(p), "--num-perms", "30", "--bins", "8",
            "--out", str(tmp_path / "hh"),
        ])
        assert code == 0
        rows = (tmp_path / "hh.csv").read_text().splitlines()[1:]
        mass = sum(
            (float(r.split(",")[1]) - float(r.split(",")[0])) * float(r.split(",")[2])
            for r in rows
        )
        assert mass == pytest.approx(1.0, rel=1e-9)

    def test_deterministic(self, identity6, tmp_path):
        args = [
            "histogram", "--input", str(identity6), "--num-perms", "5", "--seed", "2",
        ]
        main(args + ["--out", str(tmp_path / "a")])
        main(args + ["--out", str(tmp_path / "b")])
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


class TestOptimize:
    def test_interpolation_decreasing_objective(self, tmp_path):
        # n < d least squares interpolates; theoretical step must descend
        rng = np.random.default_rng(0)
        A = rng.standard_normal((4, 8))
        x_true = rng.standard_normal(8)
        ds = ss.SparseDataset.from_dense(A, labels=A @ x_true)
        p = tmp_path / "interp.svm"
        p.write_text(ss.serialize_libsvm(ds))
        out = tmp_path / "run"
        code = main([
            "optimize", "--input", str(p), "--loss", "squared", "--scheme", "RR",
            "--b", "4", "--epochs", "8", "--step", "theoretical",
            "--seeds", "0", "--perms", "10", "--out", str(out),
        ])
        assert code == 0
        rows = (tmp_path / "run.csv").read_text().splitlines()[1:]
        f_vals = [float(r.split(",")[2]) for r in rows]
        assert all(b <= a + 1e-12 for a, b in zip(f_vals, f_vals[1:]))
        payload = json.loads((tmp_path / "run.json").read_text())
        assert payload["mean_final_gap"] >= -1e-12

    def test_fixed_step_multi_seed(self, identity6, tmp_path):
        out = tmp_path / "ms"
        code = main([
            "optimize", "--input", str(identity6), "--loss", "squared",
            "--scheme", "SO", "--b", "2", "--epochs", "3", "--step", "0.2",
            "--seeds", "0,1,2", "--out", str(out),
        ])
        assert code == 0
        payload = json.loads((tmp_path / "ms.json").read_text())
        assert len(payload["final_gaps"]) == 3

    def test_divergent_step_all_seeds_exit_1(self, tmp_path, capsys):
        rng = np.random.default_rng(1)
        A = 100.0 * rng.standard_normal((4, 2))
        ds = ss.SparseDataset.from_dense(A, labels=rng.standard_normal(4))
        p = tmp_path / "ill.svm"
        p.write_text(ss.serialize_libsvm(ds))
        code = main([
            "optimize", "--input", str(p), "--loss", "squared", "--scheme", "RR",
            "--b", "1", "--epochs", "50", "--step", "5.0",
            "--seeds", "0,1", "--out", str(tmp_path / "dv"),
        ])
        assert code == 1
        assert "diverged" in capsys.readouterr().err


class TestWorkerPoolDeterminism:
    def test_optimize_identical_across_thread_counts(self, identity6, tmp_path, monkeypatch):
        outs = []
        for threads in ("1", "4"):
            monkeypatch.setenv("SHUFFLE_SGD_THREADS", threads)
            out = tmp_path / f"t{threads}"
            code = main([
                "optimize", "--input", str(identity6), "--loss", "squared",
                "--scheme", "RR", "--b", "2", "--epochs", "4", "--step", "0.05",
                "--seeds", "0,1,2,3", "--out", str(out),
            ])
            assert code == 0
            outs.append((tmp_path / f"t{threads}.csv").read_bytes())
        assert outs[0] == outs[1]


class TestVerifyBound:
    def test_ig_on_small_least_squares(self, tmp_path):
        rng = np.random.default_rng(7)
        A = rng.standard_normal((12, 3))
        ds = ss.SparseDataset.from_dense(A, labels=rng.standard_normal(12))
        p = tmp_path / "ls.svm"
        p.write_text(ss.serialize_libsvm(ds))
        out = tmp_path / "v"
        code = main([
            "verify-bound", "--bound", "ig", "--input", str(p), "--loss", "squared",
            "--b", "3", "--epochs", "10", "--out", str(out),
        ])
        assert code == 0
        payload = json.loads((tmp_path / "v.json").read_text())
        assert payload["verdict"] == "holds"
        assert payload["empirical_mean_gap"] <= payload["rhs"]

    def test_rr_monte_carlo(self, tmp_path):
        rng = np.random.default_rng(8)
        A = rng.standard_normal((8, 2))
        ds = ss.SparseDataset.from_dense(A, labels=rng.standard_normal(8))
        p = tmp_path / "ls2.svm"
        p.write_text(ss.serialize_libsvm(ds))
        code = main([
            "verify-bound", "--bound", "rr", "--input", str(p), "--loss", "squared",
            "--b", "2", "--epochs", "5", "--seeds", "30", "--perms", "40",
            "--out", str(tmp_path / "v2"),
        ])
        assert code == 0

    def test_nonsmooth_planted(self, tmp_path):
        code = main([
            "verify-bound", "--bound", "nonsmooth", "--planted",
            "--gaussian", "20,4", "--b", "1", "--epochs", "8", "--seeds", "20",
            "--perms", "30", "--out", str(tmp_path / "v3"),
        ])
        assert code == 0
        payload = json.loads((tmp_path / "v3.json").read_text())
        assert payload["verdict"] == "holds"

    def test_general_rr(self, tmp_path):
        rng = np.random.default_rng(9)
        A = rng.standard_normal((6, 2))
        ds = ss.SparseDataset.from_dense(A, labels=rng.standard_normal(6))
        p = tmp_path / "g.svm"
        p.write_text(ss.serialize_libsvm(ds))
        code = main([
            "verify-bound", "--bound", "general-rr", "--input", str(p),
            "--loss", "squared", "--b", "2", "--epochs", "4", "--seeds", "15",
            "--perms", "30", "--out", str(tmp_path / "v4"),
        ])
        assert code == 0

    def test_inconclusive_when_no_finite_minimizer(self, tmp_path, capsys):
        # separable logistic data: the reference minimizer cannot converge
        ds = ss.SparseDataset.from_dense(
            np.array([[1.0], [2.0], [0.5], [1.5]]), labels=[1.0, 1.0, 1.0, 1.0]
        )
        p = tmp_path / "sep.svm"
        p.write_text(ss.serialize_libsvm(ds))
        code = main([
            "verify-bound", "--bound", "rr", "--input", str(p), "--loss", "logistic",
            "--b", "1", "--epochs", "2", "--seeds", "3", "--perms", "5",
            "--out", str(tmp_path / "inc"),
        ])
        assert code == 1
        payload = json.loads((tmp_path / "inc.json").read_text())
        assert payload["verdict"] == "inconclusive"

    def test_unknown_bound_kind(self, tmp_path):
        code = main([
            "verify-bound", "--bound", "sgdplain", "--gaussian", "4,2",
            "--out", str(tmp_path / "v5"),
        ])
        assert code == 2

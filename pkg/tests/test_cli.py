import json

import numpy as np
import pytest

from stealthq import datagen
from stealthq.classical import windowed_mean_abs
from stealthq.cli import (
    EXIT_DATA,
    EXIT_OK,
    EXIT_USAGE,
    ExperimentPlan,
    cmd_run_all,
    main,
)
from stealthq.errors import InvalidArgumentError

SMALL = "series_length = 400\nn_samples = 60\n"


@pytest.fixture(scope="module")
def generated(tmp_path_factory):
    out = tmp_path_factory.mktemp("gen")
    assert main(["gen-data", "--out", str(out)]) == EXIT_OK
    return out


@pytest.fixture(scope="module")
def small_config(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "small.txt"
    path.write_text(SMALL)
    return path


def read_csv(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


class TestGenData:
    def test_default_files(self, generated):
        header, rows = read_csv(generated / "dataset.csv")
        assert header == list(datagen.DATASET_HEADER)
        assert len(rows) == 600
        assert sum(int(r[-1]) for r in rows) == 300
        header, rows = read_csv(generated / "series.csv")
        assert header == list(datagen.SERIES_HEADER)
        assert len(rows) == 2 * 10000

    def test_resolved_config_round_trips(self, generated):
        cfg = datagen.load_config(generated / "config.txt")
        assert cfg == datagen.GeneratorConfig()

    def test_byte_identical(self, small_config, tmp_path):
        for d in ("a", "b"):
            assert main(["gen-data", "--config", str(small_config), "--out", str(tmp_path / d)]) == 0
        for name in ("dataset.csv", "series.csv", "config.txt"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_unknown_key_exits_with_usage_code(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("sigma_q = 0.1\nnoise_level = 3\n")
        assert main(["gen-data", "--config", str(bad), "--out", str(tmp_path / "o")]) == EXIT_USAGE
        assert "noise_level" in capsys.readouterr().err

    def test_stealth_violation_exits_with_usage_code(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("delta_f = 0.5\n")
        assert main(["gen-data", "--config", str(bad), "--out", str(tmp_path / "o")]) == EXIT_USAGE


RUN_MODELS = "svm,vqc-medium,hybrid-svm"


@pytest.fixture(scope="module")
def run_dir(generated, tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    code = main(["run-all", "--dataset", str(generated / "dataset.csv"),
                 "--models", RUN_MODELS, "--out", str(out)])
    assert code == EXIT_OK
    return out


class TestRunAll:
    MODELS = RUN_MODELS

    def test_one_metric_per_model(self, run_dir):
        metrics = json.loads((run_dir / "metrics.json").read_text())
        assert [m["model"] for m in metrics] == self.MODELS.split(",")

    def test_accuracy_matches_confusion_file(self, run_dir):
        metrics = {m["model"]: m for m in json.loads((run_dir / "metrics.json").read_text())}
        for name, m in metrics.items():
            header, rows = read_csv(run_dir / f"confusion_{name}.csv")
            assert header == ["true_label", "pred_0", "pred_1"]
            (_, tn, fp), (_, fn, tp) = [[int(v) for v in r] for r in rows]
            assert tn + fp + fn + tp == 180
            assert m["accuracy"] == pytest.approx((tn + tp) / 180, abs=1e-12)

    def test_manifest(self, run_dir, generated):
        man = json.loads((run_dir / "manifest.json").read_text())
        assert man["split"]["n_train"] == 420 and man["split"]["n_test"] == 180
        assert man["seeds"] == {"split": 42, "training": 42}
        assert man["plan"]["vqc"] == {"vqc-medium": {"depth": 2, "optimizer": "spsa"}}
        assert man["inputs"]["dataset_sha256"]
        for name in man["files"]:
            assert (run_dir / name).exists()
        assert "loss_vqc-medium.csv" in man["files"]
        assert "loss_svm.csv" not in man["files"]

    def test_split_is_shared(self, run_dir, generated):
        man = json.loads((run_dir / "manifest.json").read_text())
        ds = datagen.read_dataset_csv(generated / "dataset.csv")
        assert man["split"]["hash"] == datagen.split_hash(datagen.stratified_split(ds.y, 0.7, 42))

    def test_loss_trace(self, run_dir):
        header, rows = read_csv(run_dir / "loss_vqc-medium.csv")
        assert header == ["iteration", "loss"]
        assert [int(r[0]) for r in rows] == list(range(201))
        assert all(float(r[1]) >= 0 for r in rows)

    def test_feature_and_pca_exports(self, run_dir):
        header, rows = read_csv(run_dir / "features_hybrid.csv")
        assert header[0] == "sample_id" and header[-2:] == ["label", "split"]
        assert len(header) == 10 and len(rows) == 600
        assert sum(r[-1] == "train" for r in rows) == 420
        for space in ("classical", "hybrid"):
            header, rows = read_csv(run_dir / f"pca_{space}.csv")
            assert header == ["sample_id", "pc1", "pc2", "label", "split"]
            pcs = np.array([[float(r[1]), float(r[2])] for r in rows])
            train = np.array([r[-1] == "train" for r in rows])
            # components are centred on the training rows
            np.testing.assert_allclose(pcs[train].mean(axis=0), 0, atol=1e-10)

    def test_byte_identical_tree(self, small_config, tmp_path):
        trees = []
        for d in ("a", "b"):
            out = tmp_path / d
            assert main(["run-all", "--config", str(small_config), "--out", str(out),
                         "--models", "logreg,vqc,hybrid-logreg", "--depth", "1"]) == 0
            trees.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
        assert trees[0] == trees[1]

    def test_generic_vqc_settings(self, small_config, tmp_path):
        out = tmp_path / "o"
        args = ["run-all", "--config", str(small_config), "--out", str(out), "--models", "vqc",
                "--depth", "3", "--optimizer", "simplex"]
        assert main(args) == 0
        man = json.loads((out / "manifest.json").read_text())
        assert man["plan"]["vqc"] == {"vqc": {"depth": 3, "optimizer": "simplex"}}
        assert len(read_csv(out / "loss_vqc.csv")[1]) == 81
        assert "features_hybrid.csv" not in man["files"]

    @pytest.mark.parametrize("models", ["", ",", "svm,bogus", "svm,svm"])
    def test_bad_plan(self, small_config, tmp_path, models):
        args = ["run-all", "--config", str(small_config), "--out", str(tmp_path), "--models", models]
        assert main(args) == EXIT_USAGE

    def test_empty_plan_object(self):
        with pytest.raises(InvalidArgumentError):
            ExperimentPlan(models=())

    def test_single_class_dataset(self, generated, tmp_path, capsys):
        lines = (generated / "dataset.csv").read_text().splitlines()
        normal_only = [lines[0]] + [ln for ln in lines[1:] if ln.endswith(",0")]
        path = tmp_path / "normal.csv"
        path.write_text("\n".join(normal_only) + "\n")
        assert main(["run-all", "--dataset", str(path), "--out", str(tmp_path / "o")]) == EXIT_DATA
        assert "both" in capsys.readouterr().err

    def test_malformed_dataset(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n")
        assert main(["run-all", "--dataset", str(path), "--out", str(tmp_path / "o")]) == EXIT_DATA

    def test_missing_dataset(self, tmp_path):
        args = ["run-all", "--dataset", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "o")]
        assert main(args) != EXIT_OK

    def test_product_mode(self, small_config, tmp_path):
        plan = ExperimentPlan(models=("hybrid-logreg",), feature_mode="product")
        man = cmd_run_all(None, tmp_path, plan, config_path=small_config)
        assert man.plan["feature_mode"] == "product"


class TestWindowAnalysis:
    def run(self, generated, tmp_path, win, step):
        out = tmp_path / "w.csv"
        code = main(["window-analysis", "--series", str(generated / "series.csv"),
                     "--win", str(win), "--step", str(step), "--out", str(out)])
        return code, out

    def test_default_windows(self, generated, tmp_path):
        code, out = self.run(generated, tmp_path, 2000, 2000)
        assert code == 0
        header, rows = read_csv(out)
        assert header == ["window", "start", "normal_mean_abs_f_dev", "attack_mean_abs_f_dev"]
        assert [int(r[1]) for r in rows] == [0, 2000, 4000, 6000, 8000]

    def test_matches_library(self, generated, tmp_path):
        _, out = self.run(generated, tmp_path, 1500, 700)
        _, rows = read_csv(out)
        _, X, label = datagen.read_series_csv(generated / "series.csv")
        for col, cls in ((2, 0), (3, 1)):
            ref = windowed_mean_abs(X[label == cls, 1], 1500, 700)
            np.testing.assert_array_equal([float(r[col]) for r in rows], ref)

    def test_single_full_window(self, generated, tmp_path):
        code, out = self.run(generated, tmp_path, 10000, 10000)
        assert code == 0 and len(read_csv(out)[1]) == 1

    @pytest.mark.parametrize("win, step", [(10001, 1), (0, 1), (10, 0)])
    def test_bad_window(self, generated, tmp_path, win, step):
        code, _ = self.run(generated, tmp_path, win, step)
        assert code == EXIT_USAGE


class TestParser:
    def test_no_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == EXIT_USAGE

    def test_bad_depth(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["run-all", "--out", str(tmp_path), "--depth", "4"])
        assert exc.value.code == EXIT_USAGE

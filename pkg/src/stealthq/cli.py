"""
Generate stealth-attack data and train and compare detectors from the command line.

Subcommands
-----------
gen-data
    Write the labelled dataset CSV and the raw series CSV for a config.
run-all
    Train every model in a plan on one shared stratified split and write
    metrics, confusion matrices, loss traces, feature and PCA exports and a
    manifest describing the run.
window-analysis
    Mean ``|f_dev|`` over fixed windows of the normal and attack series.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 training divergence.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, datagen
from .classical import (
    compute_metrics,
    pca_fit,
    pca_transform,
    predict_logreg,
    predict_svm,
    train_logreg,
    train_svm_smo,
    windowed_mean_abs,
)
from .encoding import FEATURES, fit_normalizer
from .errors import (
    DegenerateFeatureError,
    DivergenceError,
    InvalidArgumentError,
    StealthViolationError,
)
from .qfeatures import COLUMNS, FeatureMode, extract_hybrid
from .vqc import OPTIMIZERS, predict, train_vqc

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_DIVERGED = 0, 1, 2, 3

CLASSICAL_MODELS = ("logreg", "svm")
HYBRID_MODELS = ("hybrid-logreg", "hybrid-svm")
# preset VQC runs: (depth, optimizer); "vqc" takes --depth and --optimizer
VQC_PRESETS = {
    "vqc-shallow": (1, "simplex"),
    "vqc-medium": (2, "spsa"),
    "vqc-deep": (3, "spsa"),
}
DEFAULT_MODELS = CLASSICAL_MODELS + tuple(VQC_PRESETS) + HYBRID_MODELS
MODELS = DEFAULT_MODELS + ("vqc",)
SPLIT_FRACTION = 0.7


class DataError(Exception):
    """Input data unusable for the requested run."""


@dataclass(frozen=True)
class ExperimentPlan:
    models: tuple[str, ...] = DEFAULT_MODELS
    feature_mode: FeatureMode = FeatureMode.CORRELATION
    optimizer: str = "spsa"
    depth: int = 2
    seed: int = 42

    def __post_init__(self):
        if not self.models:
            raise InvalidArgumentError("experiment plan has no models")
        unknown = [m for m in self.models if m not in MODELS]
        if unknown:
            raise InvalidArgumentError(f"unknown model(s) {unknown}; choose from {list(MODELS)}")
        if len(set(self.models)) != len(self.models):
            raise InvalidArgumentError("duplicate model in plan")
        if self.optimizer not in OPTIMIZERS:
            raise InvalidArgumentError(f"unknown optimizer {self.optimizer!r}")
        object.__setattr__(self, "feature_mode", FeatureMode(self.feature_mode))

    def vqc_setting(self, model: str) -> tuple[int, str]:
        return VQC_PRESETS.get(model, (self.depth, self.optimizer))

    def to_dict(self) -> dict:
        return {
            "models": list(self.models),
            "feature_mode": self.feature_mode.value,
            "optimizer": self.optimizer,
            "depth": self.depth,
            "seed": self.seed,
            "vqc": {m: dict(zip(("depth", "optimizer"), self.vqc_setting(m)))
                    for m in self.models if m.startswith("vqc")},
        }


@dataclass
class RunManifest:
    version: str
    inputs: dict
    plan: dict
    split: dict
    metrics: list[dict] = field(default_factory=list)
    files: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        body = {
            "version": self.version,
            "module_versions": {"stealthq": self.version, "numpy": np.__version__},
            "inputs": self.inputs,
            "plan": self.plan,
            "seeds": {"split": self.split["seed"], "training": self.plan["seed"]},
            "split": self.split,
            "metrics": self.metrics,
            "files": sorted(self.files),
        }
        return json.dumps(body, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# writers


class _Out:
    """Collects written files relative to an output directory."""

    def __init__(self, root: Path):
        self.root = root
        self.files: list[str] = []
        root.mkdir(parents=True, exist_ok=True)

    def text(self, name: str, content: str) -> Path:
        path = self.root / name
        path.write_text(content)
        self.files.append(name)
        return path

    def csv(self, name: str, header, rows) -> Path:
        lines = [",".join(header)]
        lines += [",".join(_cell(v) for v in row) for row in rows]
        return self.text(name, "\n".join(lines) + "\n")


def _cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer, str)):
        return str(v)
    return repr(float(v))


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# commands


def cmd_gen_data(config_path, out_dir) -> dict[str, Path]:
    """Write ``dataset.csv``, ``series.csv`` and the resolved ``config.txt``."""
    config = datagen.load_config(config_path) if config_path else datagen.GeneratorConfig()
    dataset = datagen.build_dataset(config)
    out = _Out(Path(out_dir))
    return {
        "dataset": out.text("dataset.csv", datagen.dataset_csv(dataset)),
        "series": out.text("series.csv", datagen.series_csv(config, dataset.series)),
        "config": out.text("config.txt", datagen.dump_config(config)),
    }


def _load_dataset(dataset_path, config_path) -> tuple[datagen.LabeledDataset, dict]:
    if dataset_path:
        try:
            dataset = datagen.read_dataset_csv(dataset_path)
        except InvalidArgumentError as exc:
            raise DataError(str(exc)) from None
        return dataset, {"dataset": str(dataset_path), "dataset_sha256": _sha256(dataset_path)}
    config = datagen.load_config(config_path) if config_path else datagen.GeneratorConfig()
    dataset = datagen.build_dataset(config)
    return dataset, {"generator_config": dataclasses.asdict(config)}


def cmd_run_all(dataset_path, out_dir, plan: ExperimentPlan = ExperimentPlan(),
                config_path=None) -> RunManifest:
    """Run ``plan`` on one shared split and write all artifacts under ``out_dir``."""
    dataset, inputs = _load_dataset(dataset_path, config_path)
    X, y = dataset.X, dataset.y
    if np.unique(y).size < 2:
        raise DataError("dataset must contain both normal and attack rows")
    try:
        mask = datagen.stratified_split(y, SPLIT_FRACTION, plan.seed)
    except InvalidArgumentError as exc:
        raise DataError(str(exc)) from None
    Xtr, ytr, Xte, yte = X[mask], y[mask], X[~mask], y[~mask]
    try:
        stats = fit_normalizer(Xtr)
    except DegenerateFeatureError as exc:
        raise DataError(str(exc)) from None

    out = _Out(Path(out_dir))
    split = {
        "train_fraction": SPLIT_FRACTION,
        "seed": plan.seed,
        "n_train": int(mask.sum()),
        "n_test": int((~mask).sum()),
        "hash": datagen.split_hash(mask),
    }
    Ztr, Zte = stats.zscore(Xtr), stats.zscore(Xte)
    H = extract_hybrid(X, stats, plan.feature_mode)
    Htr, Hte = H[mask], H[~mask]

    metrics = []
    for name in plan.models:
        if name in CLASSICAL_MODELS or name in HYBRID_MODELS:
            tr, te = (Htr, Hte) if name in HYBRID_MODELS else (Ztr, Zte)
            if name.endswith("svm"):
                y_pred = predict_svm(train_svm_smo(tr, ytr), te)
            else:
                y_pred = predict_logreg(train_logreg(tr, ytr), te)
        else:
            depth, optimizer = plan.vqc_setting(name)
            run = train_vqc(Xtr, ytr, stats, depth=depth, optimizer=optimizer, seed=plan.seed)
            y_pred = predict(run.model, Xte)
            out.csv(f"loss_{name}.csv", ("iteration", "loss"), run.trace)
        report = compute_metrics(yte, y_pred)
        metrics.append({"model": name, "accuracy": report.accuracy, "f1": report.f1,
                        "confusion": report.confusion})
        out.csv(f"confusion_{name}.csv", ("true_label", "pred_0", "pred_1"),
                [(0, report.tn, report.fp), (1, report.fn, report.tp)])

    ids = np.arange(y.size)
    split_col = np.where(mask, "train", "test")
    if any(m in HYBRID_MODELS for m in plan.models):
        out.csv("features_hybrid.csv", ("sample_id", *COLUMNS, "label", "split"),
                [(i, *h, lbl, s) for i, h, lbl, s in zip(ids, H, y, split_col)])
    Z = stats.zscore(X)
    for space, feats in (("classical", Z), ("hybrid", H)):
        # axes fitted on the training rows only
        scores = pca_transform(pca_fit(feats[mask], k=2), feats)
        out.csv(f"pca_{space}.csv", ("sample_id", "pc1", "pc2", "label", "split"),
                [(i, *p, lbl, s) for i, p, lbl, s in zip(ids, scores, y, split_col)])

    out.text("metrics.json", json.dumps(metrics, indent=2, sort_keys=True) + "\n")
    manifest = RunManifest(__version__, inputs, plan.to_dict(), split, metrics,
                           out.files + ["manifest.json"])
    out.text("manifest.json", manifest.to_json())
    return manifest


def cmd_window_analysis(series_path, win: int, step: int, out_path) -> Path:
    """Per-class windowed mean ``|f_dev|``; shorter class columns are left blank."""
    _, X, label = datagen.read_series_csv(series_path)
    f_col = FEATURES.index("f_dev")
    cols = []
    for cls in (0, 1):
        f = X[label == cls, f_col]
        if f.size == 0:
            raise DataError(f"series has no rows with label {cls}")
        cols.append(windowed_mean_abs(f, win, step))
    n = max(c.size for c in cols)
    rows = []
    for k in range(n):
        cells = [repr(float(c[k])) if k < c.size else "" for c in cols]
        rows.append(f"{k},{k * step}," + ",".join(cells))
    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = "window,start,normal_mean_abs_f_dev,attack_mean_abs_f_dev"
    path.write_text("\n".join([header, *rows]) + "\n")
    return path


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _models_arg(text: str) -> tuple[str, ...]:
    return tuple(m.strip() for m in text.split(",") if m.strip())


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stealthq", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-data", help="generate dataset and series CSVs")
    g.add_argument("--config", help="key = value generator config (defaults if omitted)")
    g.add_argument("--out", required=True, help="output directory")

    r = sub.add_parser("run-all", help="train and evaluate a model plan")
    src = r.add_mutually_exclusive_group()
    src.add_argument("--dataset", help="dataset CSV from gen-data")
    src.add_argument("--config", help="generate the dataset from this config instead")
    r.add_argument("--out", required=True, help="output directory")
    r.add_argument("--models", type=_models_arg, default=DEFAULT_MODELS,
                   help=f"comma-separated subset of {','.join(MODELS)}")
    r.add_argument("--feature-mode", choices=[m.value for m in FeatureMode],
                   default=FeatureMode.CORRELATION.value)
    r.add_argument("--optimizer", choices=OPTIMIZERS, default="spsa",
                   help="optimizer for the 'vqc' model")
    r.add_argument("--depth", type=int, choices=(1, 2, 3), default=2,
                   help="ansatz depth for the 'vqc' model")
    r.add_argument("--seed", type=int, default=42, help="split and training seed")

    w = sub.add_parser("window-analysis", help="windowed mean |f_dev| per class")
    w.add_argument("--series", required=True, help="series CSV from gen-data")
    w.add_argument("--win", type=int, default=2000)
    w.add_argument("--step", type=int, default=2000)
    w.add_argument("--out", required=True, help="output CSV path")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen-data":
            paths = cmd_gen_data(args.config, args.out)
            print(f"wrote {paths['dataset']} and {paths['series']}")
        elif args.command == "run-all":
            plan = ExperimentPlan(args.models, args.feature_mode, args.optimizer,
                                  args.depth, args.seed)
            manifest = cmd_run_all(args.dataset, args.out, plan, config_path=args.config)
            for m in manifest.metrics:
                print(f"{m['model']:<14} accuracy {m['accuracy']:.3f}  f1 {m['f1']:.3f}")
        else:
            path = cmd_window_analysis(args.series, args.win, args.step, args.out)
            print(f"wrote {path}")
    except DataError as exc:
        print(f"stealthq: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DivergenceError as exc:
        print(f"stealthq: training diverged: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (InvalidArgumentError, StealthViolationError, OSError) as exc:
        print(f"stealthq: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

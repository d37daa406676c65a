"""
Classical, quantum-only and hybrid detectors on one shared split.

Run with ``python3 demos/03_pipeline.py``. Artifacts land in ``demo_out/``.
"""
from pathlib import Path

import numpy as np

from stealthq.cli import ExperimentPlan, cmd_run_all
from stealthq.classical import pca_fit
from stealthq.datagen import GeneratorConfig, build_dataset, stratified_split
from stealthq.encoding import fit_normalizer
from stealthq.qfeatures import extract_hybrid
from stealthq.vqc import train_vqc

out = Path("demo_out")
manifest = cmd_run_all(None, out, ExperimentPlan())
print(f"{'model':<14} accuracy  f1     [[TN, FP], [FN, TP]]")
for m in manifest.metrics:
    print(f"{m['model']:<14} {m['accuracy']:.3f}     {m['f1']:.3f}  {m['confusion']}")
print("split hash", manifest.split["hash"][:12], "| files in", out)

# The training curve of the medium VQC.
ds = build_dataset(GeneratorConfig())
mask = stratified_split(ds.y, 0.7, 42)
stats = fit_normalizer(ds.X[mask])
run = train_vqc(ds.X[mask], ds.y[mask], stats, depth=2, optimizer="spsa", seed=42)
losses = np.array([loss for _, loss in run.trace])
print("\nSPSA loss every 25 iterations:", losses[::25].round(3))

# How much of the hybrid feature variance do two principal axes carry?
H = extract_hybrid(ds.X, stats)
pca = pca_fit(H[mask], k=7)
share = pca.explained_variance / pca.explained_variance.sum()
print("hybrid feature variance share per axis:", share.round(3))

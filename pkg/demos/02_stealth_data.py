"""
Synthetic normal operation, stealth injection and the envelope check.

Run with ``python3 demos/02_stealth_data.py``.
"""
import numpy as np

from stealthq import datagen
from stealthq.classical import windowed_mean_abs

np.set_printoptions(precision=4, suppress=True)

config = datagen.GeneratorConfig()
print(datagen.dump_config(config))

ds = datagen.build_dataset(config)
normal, attack = ds.X[ds.y == 0], ds.X[ds.y == 1]
print(f"{len(ds)} rows: {len(normal)} normal, {len(attack)} attack")

# Q is right-skewed: the walk idles near its set-point with occasional excursions.
q = ds.series["normal"][:, 0]
print("Q quantiles (5, 50, 95, max):", np.quantile(q, [0.05, 0.5, 0.95, 1.0]))

# Each attack shifts Q, slides f_dev along the droop curve and nudges V.
a = ds.series["attack"] - ds.series["baseline"]
print("attack vector range per component:")
for name, col, bound in zip(("a_q", "a_f", "a_v"), a.T, (config.bound_q, config.bound_f, config.bound_v)):
    print(f"  {name}: [{col.min():+.4f}, {col.max():+.4f}]  bound {bound}")

# Every attack row sits inside the widened min/max box of the normal rows.
lo, hi = datagen.normal_envelope(config, normal)
print("envelope low ", lo)
print("envelope high", hi)
print("attack rows inside:", int(np.all((attack >= lo) & (attack <= hi), axis=1).sum()))

# Residual off the droop curve is where the attack leaves a trace.
for label, rows in (("normal", normal), ("attack", attack)):
    resid = rows[:, 1] - config.droop(rows[:, 0])
    print(f"{label} f_dev residual mean {resid.mean():+.4f}  std {resid.std():.4f}")

# Windowed mean |f_dev| looks the same for both classes, which is the point.
for label in ("normal", "attack"):
    print(label, "windowed mean |f_dev|:", windowed_mean_abs(ds.series[label][:, 1], 2000, 2000))

mask = datagen.stratified_split(ds.y, 0.7, 42)
print(f"split: {mask.sum()} train / {(~mask).sum()} test, hash {datagen.split_hash(mask)[:12]}")

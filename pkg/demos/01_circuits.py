"""
Three-qubit encoding and the hybrid feature map, step by step.

Run with ``python3 demos/01_circuits.py``.
"""
import numpy as np

from stealthq import qsim
from stealthq.encoding import encode_state, fit_normalizer, to_angles
from stealthq.qfeatures import COLUMNS, FeatureMode, features_from_state
from stealthq.vqc import AnsatzParams, apply_ansatz

np.set_printoptions(precision=4, suppress=True)

# A single Ry rotation: <Z> traces out cos(theta).
for theta in (0.0, np.pi / 3, np.pi / 2, np.pi):
    state = qsim.apply_ry(qsim.init_zero(1), 0, theta)
    z = qsim.expectation_zstring(state, qsim.ZString.on(1, [0]))
    print(f"Ry({theta:.3f})|0>  <Z> = {z:+.4f}   cos = {np.cos(theta):+.4f}")

# The encoding ladder (CNOT 0->1, then 1->2) turns a pi/2 rotation on qubit 0
# into a three-qubit GHZ state.
ghz = encode_state([np.pi / 2, 0.0, 0.0])
print("\nencoded (pi/2, 0, 0):")
print("  amplitudes", ghz.amplitudes.real)
for mode in FeatureMode:
    feats = features_from_state(ghz, mode)
    print(f"  {mode.value:<12}", dict(zip(COLUMNS, feats.round(4).tolist())))

# Correlation features read the joint Z-strings; product features multiply the
# single-qubit values. They agree whenever the state is a product state.
angles = np.array([0.4, -1.1, 0.7])
flat = encode_state(angles, entangled=False)
diff = features_from_state(flat, "product") - features_from_state(flat, "correlation")
print("\nunentangled state, product minus correlation:", diff)

# Real measurements go through z-scores and a min/max rescale to [-pi/2, pi/2].
rng = np.random.default_rng(0)
X = rng.normal([0.1, -0.05, 0.98], [0.05, 0.03, 0.01], (50, 3))
stats = fit_normalizer(X)
print("\nfirst three rows as angles:\n", to_angles(X[:3], stats))

# A depth-2 ansatz acts on the encoded batch; the classifier reads <Z> on qubit 0.
params = AnsatzParams.random(2, rng)
states = apply_ansatz(encode_state(to_angles(X[:5], stats)), params)
scores = qsim.expectation_zstring(states, qsim.ZString.on(3, [0]))
print("VQC scores for five rows:", scores)

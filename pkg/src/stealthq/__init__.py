"""
stealthq: quantum-feature and classical detectors for coordinated stealth
attacks on a distributed generator's measurements.

Subpackages and modules
-----------------------
qsim
    Batched statevector simulator (Ry, CNOT, Pauli-Z strings).
encoding
    Feature normalization and angle encoding onto three entangled qubits.
vqc
    Variational quantum classifier trained on a squared-error loss.
optim
    SPSA and Nelder-Mead simplex minimizers.
qfeatures
    Seven-dimensional Pauli-Z feature map for classical learners.
classical
    Logistic regression, SMO-trained RBF SVM, Jacobi PCA and metrics.
datagen
    Synthetic droop-manifold generator with stealth attack injection.
cli
    ``stealthq`` command line: data generation, full runs, window analysis.
"""
__version__ = "0.1.0"

from . import classical, datagen, encoding, optim, qfeatures, qsim, vqc
from .errors import (
    DegenerateFeatureError,
    DivergenceError,
    InvalidArgumentError,
    NotFittedError,
    StealthViolationError,
)

__all__ = [
    "__version__",
    "classical",
    "datagen",
    "encoding",
    "optim",
    "qfeatures",
    "qsim",
    "vqc",
    "DegenerateFeatureError",
    "DivergenceError",
    "InvalidArgumentError",
    "NotFittedError",
    "StealthViolationError",
]

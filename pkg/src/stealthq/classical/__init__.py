"""Classical learning heads, PCA and evaluation metrics."""
from .logreg import LogRegModel, predict_logreg, predict_proba, train_logreg
from .metrics import MetricsReport, compute_metrics, windowed_mean_abs
from .pca import PcaModel, jacobi_eigh, pca_fit, pca_transform
from .svm import SvmModel, predict_svm, rbf_kernel, scale_gamma, train_svm_smo

__all__ = [
    "LogRegModel", "train_logreg", "predict_logreg", "predict_proba",
    "SvmModel", "train_svm_smo", "predict_svm", "rbf_kernel", "scale_gamma",
    "PcaModel", "pca_fit", "pca_transform", "jacobi_eigh",
    "MetricsReport", "compute_metrics", "windowed_mean_abs",
]

"""
Модуль оценки: выбор измерений, классификация, поиск и восстановление сигналов.
"""

from sslvm.evaluation.metrics import (
    average_precision,
    classification_accuracy,
    mean_average_precision,
    mean_precision_recall_curve,
    nn_classify,
    precision_recall_curve,
    rank_by_distance,
    relevance_from_labels,
)
from sslvm.evaluation.recovery import abs_correlation, signal_recovery_report
from sslvm.evaluation.schemas import (
    ClassificationReport,
    EvalMode,
    RecoveryReport,
    ReportFormat,
    RetrievalReport,
    ViewSelection,
)
from sslvm.evaluation.selection import (
    lengthscale_threshold_reproduces,
    select_dims_by_gamma,
    select_dims_by_lengthscale,
    shared_dims,
)

__all__ = [
    "ClassificationReport",
    "EvalMode",
    "RecoveryReport",
    "ReportFormat",
    "RetrievalReport",
    "ViewSelection",
    "abs_correlation",
    "average_precision",
    "classification_accuracy",
    "lengthscale_threshold_reproduces",
    "mean_average_precision",
    "mean_precision_recall_curve",
    "nn_classify",
    "precision_recall_curve",
    "rank_by_distance",
    "relevance_from_labels",
    "select_dims_by_gamma",
    "select_dims_by_lengthscale",
    "shared_dims",
    "signal_recovery_report",
]

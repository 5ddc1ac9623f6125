"""
Насколько выведенные латентные измерения воспроизводят истинные сигналы.
"""

import numpy as np

from sslvm.errors import ShapeError
from sslvm.evaluation.schemas import RecoveryReport


def abs_correlation(inferred: np.ndarray, truth: np.ndarray) -> np.ndarray:
    """
    Матрица |корреляций Пирсона| между столбцами inferred и truth.

    Для столбца с нулевой дисперсией корреляция равна 0.
    """
    inferred = np.asarray(inferred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if inferred.shape[0] != truth.shape[0]:
        raise ShapeError(f"число строк различается: {inferred.shape[0]} и {truth.shape[0]}")

    def standardize(matrix: np.ndarray) -> np.ndarray:
        centred = matrix - matrix.mean(axis=0)
        norm = np.linalg.norm(centred, axis=0)
        return np.divide(centred, norm, out=np.zeros_like(centred), where=norm > 0)

    return np.abs(standardize(inferred).T @ standardize(truth))


def signal_recovery_report(inferred_mu: np.ndarray, true_latents: np.ndarray) -> RecoveryReport:
    """
    Жадное взаимно однозначное сопоставление измерений сигналам.

    На каждом шаге выбирается пара (измерение, сигнал) с наибольшей |корреляцией|
    среди ещё не назначенных.

    Args:
        inferred_mu: Выведенные средние N×Q
        true_latents: Истинные сигналы N×S

    Returns:
        RecoveryReport
    """
    correlation = abs_correlation(inferred_mu, true_latents)
    num_dims, num_signals = correlation.shape
    assignment: list[int | None] = [None] * num_signals
    scores = [0.0] * num_signals
    available = correlation.copy()
    for _ in range(min(num_dims, num_signals)):
        dim, signal = np.unravel_index(np.argmax(available), available.shape)
        assignment[signal] = int(dim)
        scores[signal] = float(correlation[dim, signal])
        available[dim, :] = -1.0
        available[:, signal] = -1.0
    return RecoveryReport(assignment=assignment, scores=scores, correlation=correlation.tolist())

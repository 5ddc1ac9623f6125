"""
Постолбцовая стандартизация данных.
"""

import numpy as np
from loguru import logger

from sslvm.data.schemas import Normalization
from sslvm.errors import ShapeError

STD_FLOOR = 1e-12


def normalize_columns(matrix: np.ndarray) -> tuple[np.ndarray, Normalization]:
    """
    Привести столбцы к нулевому среднему и единичной дисперсии.

    Постоянные столбцы (std < 1e-12) становятся нулевыми, их std хранится как 1.

    Returns:
        (нормированная матрица, статистики для apply_normalization)
    """
    matrix = np.asarray(matrix, dtype=float)
    mean = matrix.mean(axis=0)
    std = matrix.std(axis=0)
    constant = std < STD_FLOOR
    if np.any(constant):
        logger.warning(f"⚠️ Постоянные столбцы {np.flatnonzero(constant).tolist()} заменены нулями")
        mean = np.where(constant, matrix[0], mean)
        std = np.where(constant, 1.0, std)
    stats = Normalization(mean=mean, std=std)
    return apply_normalization(matrix, stats), stats


def apply_normalization(matrix: np.ndarray, stats: Normalization) -> np.ndarray:
    """Применить сохранённые статистики (например, к тестовым данным)."""
    matrix = np.asarray(matrix, dtype=float)
    if matrix.ndim != 2 or matrix.shape[1] != stats.mean.shape[0]:
        raise ShapeError(f"матрица {matrix.shape} не согласована со статистиками длины {stats.mean.shape[0]}")
    return (matrix - stats.mean) / stats.std


def replicate_columns(matrix: np.ndarray, k: int) -> np.ndarray:
    """
    Повторить столбцы матрицы k раз блоками: [X, X, ..., X].

    Raises:
        ValueError: k < 1
    """
    if int(k) != k or k < 1:
        raise ValueError(f"k должно быть целым ≥ 1, получено {k}")
    return np.tile(np.asarray(matrix, dtype=float), (1, int(k)))

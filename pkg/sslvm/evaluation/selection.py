"""
Выбор активных латентных измерений по γ или по масштабам ядра.
"""

import numpy as np


def select_dims_by_gamma(gamma: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Номера q с γ_q ≥ threshold по возрастанию."""
    return np.flatnonzero(np.asarray(gamma, dtype=float).ravel() >= threshold)


def select_dims_by_lengthscale(lengthscales: np.ndarray, threshold: float) -> np.ndarray:
    """Номера q с ℓ_q ≤ threshold по возрастанию (короткий масштаб — активное измерение)."""
    return np.flatnonzero(np.asarray(lengthscales, dtype=float).ravel() <= threshold)


def shared_dims(gamma_matrix: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Измерения, включённые во всех видах: γ_cq ≥ threshold для каждого c."""
    gamma_matrix = np.atleast_2d(np.asarray(gamma_matrix, dtype=float))
    return np.flatnonzero(np.all(gamma_matrix >= threshold, axis=0))


def lengthscale_threshold_reproduces(selected: np.ndarray, lengthscales: np.ndarray) -> bool:
    """
    Существует ли порог t, при котором {q: ℓ_q ≤ t} совпадает с selected.

    Args:
        selected: Номера измерений (например, выбранные по γ)
        lengthscales: Масштабы ℓ (длины Q)

    Returns:
        True, если все выбранные масштабы строго меньше всех невыбранных
    """
    lengthscales = np.asarray(lengthscales, dtype=float).ravel()
    chosen = np.zeros(lengthscales.shape[0], dtype=bool)
    chosen[np.asarray(selected, dtype=int)] = True
    if chosen.all() or not chosen.any():
        return True
    return bool(lengthscales[chosen].max() < lengthscales[~chosen].min())

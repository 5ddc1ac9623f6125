"""
Проверка входов ψ-статистик.
"""

import numpy as np

from sslvm.errors import HyperparameterError, ShapeError
from sslvm.kernels.schemas import KernelFamily, KernelSpec
from sslvm.variational.schemas import SlabPosterior


def check_psi_inputs(
    spec: KernelSpec,
    post: SlabPosterior,
    gamma: np.ndarray,
    Z: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Проверить согласованность размерностей.

    Returns:
        (gamma как вектор длины Q, Z как матрица float)
    """
    input_dim = post.input_dim
    gamma = np.asarray(gamma, dtype=float).ravel()
    Z = np.asarray(Z, dtype=float)
    if Z.ndim != 2 or Z.shape[1] != input_dim:
        raise ShapeError(f"Z должна иметь {input_dim} столбцов, получено {Z.shape}")
    if gamma.shape[0] != input_dim:
        raise ShapeError(f"длина gamma {gamma.shape[0]} не равна Q={input_dim}")
    if spec.family == KernelFamily.EXPQUAD and len(spec.lengthscales) != input_dim:
        raise ShapeError(f"число lengthscales {len(spec.lengthscales)} не равно Q={input_dim}")
    if np.any(gamma < 0) or np.any(gamma > 1):
        raise ValueError("gamma должна лежать в [0, 1]")
    if not np.all(post.var > 0):
        raise HyperparameterError("дисперсии s должны быть положительными")
    return gamma, Z

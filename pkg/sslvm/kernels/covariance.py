"""
Значения ядер, ковариационные матрицы и разложение Холецкого с jitter.
"""

import numpy as np
from loguru import logger
from scipy import linalg
from scipy.spatial.distance import cdist

from sslvm.errors import HyperparameterError, NumericalError, ShapeError
from sslvm.kernels.schemas import KernelFamily, KernelSpec

# Политика jitter: от 1e-6·mean(diag) с шагом ×10 до 1e-2·mean(diag)
JITTER_START = 1e-6
JITTER_STOP = 1e-2


def check_hyperparameters(spec: KernelSpec) -> None:
    """
    Проверить σ_f² и ℓ перед вычислениями.

    Проверяет и спецификации, собранные без валидации (model_copy(update=...), model_construct).

    Raises:
        HyperparameterError: Неположительная или неконечная дисперсия или масштаб
    """
    if not np.isfinite(spec.variance) or spec.variance <= 0:
        raise HyperparameterError(f"variance должна быть положительной, получено {spec.variance}")
    if spec.lengthscales is not None:
        ell = np.asarray(spec.lengthscales, dtype=float)
        if not np.all(np.isfinite(ell)) or np.any(ell <= 0):
            raise HyperparameterError(f"lengthscales должны быть положительными, получено {spec.lengthscales}")


def _check_input_dim(spec: KernelSpec, dim: int) -> None:
    check_hyperparameters(spec)
    if spec.family == KernelFamily.EXPQUAD and dim != len(spec.lengthscales):
        raise ShapeError(
            f"размерность входа {dim} не совпадает с числом lengthscales {len(spec.lengthscales)}"
        )


def kernel_eval(spec: KernelSpec, x: np.ndarray, x_prime: np.ndarray) -> float:
    """
    Значение ядра k(x, x').

    Args:
        spec: Параметры ядра
        x: Вектор длины Q
        x_prime: Вектор длины Q

    Returns:
        Значение ядра
    """
    x = np.asarray(x, dtype=float).ravel()
    x_prime = np.asarray(x_prime, dtype=float).ravel()
    if x.shape != x_prime.shape:
        raise ShapeError(f"векторы разной длины: {x.shape[0]} и {x_prime.shape[0]}")
    _check_input_dim(spec, x.shape[0])

    if spec.family == KernelFamily.LINEAR:
        return float(spec.variance * np.dot(x, x_prime))

    scaled = (x - x_prime) / spec.ell
    return float(spec.variance * np.exp(-0.5 * np.dot(scaled, scaled)))


def kernel_matrix(spec: KernelSpec, A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
    """
    Ковариационная матрица K(A, B).

    Если B не передана, считается K(A, A), симметричная по построению.

    Args:
        spec: Параметры ядра
        A: Матрица N×Q
        B: Матрица M×Q или None

    Returns:
        Матрица N×M
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    symmetric = B is None
    B = A if symmetric else np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise ShapeError(f"число столбцов не совпадает: {A.shape[1]} и {B.shape[1]}")
    _check_input_dim(spec, A.shape[1])

    if spec.family == KernelFamily.LINEAR:
        K = spec.variance * (A @ B.T)
        if symmetric:
            K = 0.5 * (K + K.T)
        return K

    sqdist = cdist(A / spec.ell, B / spec.ell, "sqeuclidean")
    return spec.variance * np.exp(-0.5 * sqdist)


def jittered_cholesky(
    matrix: np.ndarray,
    name: str,
    always_jitter: bool = True,
) -> tuple[np.ndarray, float]:
    """
    Нижний множитель Холецкого с наращиванием jitter.

    При always_jitter=True к диагонали всегда добавляется минимум
    1e-6·mean(diag); иначе сначала пробуется матрица как есть.

    Args:
        matrix: Симметричная матрица
        name: Имя матрицы для диагностики
        always_jitter: Добавлять ли jitter с первой попытки

    Returns:
        (L, c): множитель и относительный jitter c (добавлено c·mean(diag)·I)

    Raises:
        NumericalError: Разложение не удалось при jitter 1e-2·mean(diag)
    """
    scale = float(np.mean(np.diag(matrix)))
    if not np.isfinite(scale):
        raise NumericalError(name, "матрица содержит неконечные значения")
    if scale <= 0:
        scale = 1.0

    levels = [] if always_jitter else [0.0]
    level = JITTER_START
    while level <= JITTER_STOP * (1 + 1e-9):
        levels.append(level)
        level *= 10

    identity = np.eye(matrix.shape[0])
    for index, level in enumerate(levels):
        try:
            L = linalg.cholesky(matrix + level * scale * identity, lower=True)
        except linalg.LinAlgError:
            continue
        if index > 0:
            logger.warning(f"⚠️ {name}: jitter увеличен до {level:.0e}·mean(diag)")
        return L, level

    raise NumericalError(name, f"разложение Холецкого не удалось при jitter {JITTER_STOP:.0e}")


def kernel_matrix_gradients(
    spec: KernelSpec,
    Z: np.ndarray,
    d_K: np.ndarray,
) -> tuple[np.ndarray, float, np.ndarray | None]:
    """
    Градиенты F по Z и гиперпараметрам через K = K(Z, Z).

    Args:
        spec: Параметры ядра
        Z: Входы M×Q
        d_K: ∂F/∂K (M×M), симметризуется

    Returns:
        (∂F/∂Z, ∂F/∂σ_f², ∂F/∂ℓ или None для linear)
    """
    d_K = 0.5 * (d_K + d_K.T)
    K = kernel_matrix(spec, Z)
    d_variance = float(np.sum(d_K * K)) / spec.variance

    if spec.family == KernelFamily.LINEAR:
        return 2.0 * spec.variance * d_K @ Z, d_variance, None

    ell = spec.ell
    weighted = d_K * K  # M×M
    diff = Z[:, None, :] - Z[None, :, :]  # M×M×Q
    d_Z = 2.0 * np.sum(weighted[..., None] * (-diff / ell**2), axis=1)
    d_ell = np.sum(weighted[..., None] * diff**2 / ell**3, axis=(0, 1))
    return d_Z, d_variance, d_ell

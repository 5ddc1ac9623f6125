"""
Модуль ядер: ARD-ядра и ковариационные матрицы.
"""

from sslvm.kernels.covariance import (
    jittered_cholesky,
    kernel_eval,
    kernel_matrix,
    kernel_matrix_gradients,
)
from sslvm.kernels.schemas import KernelFamily, KernelSpec

__all__ = [
    "KernelFamily",
    "KernelSpec",
    "jittered_cholesky",
    "kernel_eval",
    "kernel_matrix",
    "kernel_matrix_gradients",
]

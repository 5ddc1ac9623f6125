"""
Выбор формул ψ-статистик по семейству ядра.
"""

import numpy as np

from sslvm.kernels.schemas import KernelFamily, KernelSpec
from sslvm.psi.expquad import psi_expquad, psi_expquad_gradients
from sslvm.psi.linear import psi_linear, psi_linear_gradients
from sslvm.psi.schemas import PsiGradients, PsiStats
from sslvm.variational.schemas import SlabPosterior


def psi_stats(
    spec: KernelSpec,
    post: SlabPosterior,
    gamma: np.ndarray,
    Z: np.ndarray,
) -> PsiStats:
    """ψ-статистики для ядра spec."""
    if spec.family == KernelFamily.LINEAR:
        return psi_linear(spec, post, gamma, Z)
    return psi_expquad(spec, post, gamma, Z)


def psi_gradients(
    spec: KernelSpec,
    post: SlabPosterior,
    gamma: np.ndarray,
    Z: np.ndarray,
    d_psi0: float,
    d_psi1: np.ndarray,
    d_psi2: np.ndarray,
) -> PsiGradients:
    """Градиенты через ψ-статистики для ядра spec."""
    if spec.family == KernelFamily.LINEAR:
        return psi_linear_gradients(spec, post, gamma, Z, d_psi0, d_psi1, d_psi2)
    return psi_expquad_gradients(spec, post, gamma, Z, d_psi0, d_psi1, d_psi2)

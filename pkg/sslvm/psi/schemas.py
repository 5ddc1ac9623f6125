"""
Pydantic схемы ψ-статистик.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict


class PsiStats(BaseModel):
    """
    Ожидания ядерных величин по вариационному распределению.

    Attributes:
        psi0: ψ₀ = Tr E[K_ff]
        psi1: Ψ₁ = E[K_fu] (N×M)
        psi2: Ψ₂ = E[K_fuᵀ K_fu] (M×M)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    psi0: float
    psi1: np.ndarray
    psi2: np.ndarray


class PsiGradients(BaseModel):
    """
    Градиенты скалярной функции от (ψ₀, Ψ₁, Ψ₂) по параметрам.

    Attributes:
        mu: По средним μ (N×Q)
        var: По дисперсиям s (N×Q)
        gamma: По вероятностям переключателей γ (Q)
        Z: По индуцирующим входам (M×Q)
        variance: По σ_f²
        lengthscales: По ℓ (Q) или None для linear
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    mu: np.ndarray
    var: np.ndarray
    gamma: np.ndarray
    Z: np.ndarray
    variance: float
    lengthscales: np.ndarray | None = None

"""
Pydantic схемы нижней границы и её градиентов.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict


class BoundTerms(BaseModel):
    """
    Слагаемые нижней границы.

    Attributes:
        data_term: Σ_d F̃_d (по всем видам)
        kl_term: KL-член
        total: data_term − kl_term
        per_dim: Значения F̃_d по выходным измерениям (виды подряд)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    data_term: float
    kl_term: float
    total: float
    per_dim: np.ndarray


class ViewGradients(BaseModel):
    """Градиенты по параметрам одного вида (в исходных координатах)."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    Z: np.ndarray
    variance: float
    lengthscales: np.ndarray | None = None
    beta: float


class GradientSet(BaseModel):
    """
    Градиенты нижней границы в исходных (ограниченных) координатах.

    Attributes:
        mu: ∂/∂μ (N×Q)
        var: ∂/∂s (N×Q)
        gamma: ∂/∂γ (C×Q)
        views: Градиенты по параметрам видов
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    mu: np.ndarray
    var: np.ndarray
    gamma: np.ndarray
    views: list[ViewGradients]

"""
Pydantic схемы ядер.
"""

from enum import StrEnum

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator


class KernelFamily(StrEnum):
    """Семейства ядер."""

    LINEAR = "linear"
    EXPQUAD = "expquad"


class KernelSpec(BaseModel):
    """
    Ядро с ARD-параметризацией.

    Attributes:
        family: Семейство ядра
        variance: Дисперсия сигнала σ_f²
        lengthscales: Масштабы ℓ_q по латентным измерениям (только для expquad)
    """

    family: KernelFamily
    variance: float = Field(..., description="σ_f² > 0")
    lengthscales: list[float] | None = Field(default=None, description="ℓ_q > 0, длины Q")

    @field_validator("variance")
    @classmethod
    def check_variance(cls, value: float) -> float:
        if not np.isfinite(value) or value <= 0:
            raise ValueError(f"variance должна быть положительной, получено {value}")
        return value

    @field_validator("lengthscales")
    @classmethod
    def check_lengthscales(cls, value: list[float] | None) -> list[float] | None:
        if value is None:
            return value
        if len(value) == 0:
            raise ValueError("lengthscales не может быть пустым")
        if any(not np.isfinite(ell) or ell <= 0 for ell in value):
            raise ValueError(f"lengthscales должны быть положительными, получено {value}")
        return value

    @model_validator(mode="after")
    def check_family(self) -> "KernelSpec":
        if self.family == KernelFamily.EXPQUAD and self.lengthscales is None:
            raise ValueError("expquad требует lengthscales")
        if self.family == KernelFamily.LINEAR and self.lengthscales is not None:
            raise ValueError("linear не имеет lengthscales")
        return self

    @property
    def ell(self) -> np.ndarray:
        """Масштабы как массив (для linear — пустой)."""
        if self.lengthscales is None:
            return np.zeros(0)
        return np.asarray(self.lengthscales, dtype=float)

    @property
    def num_params(self) -> int:
        """Число гиперпараметров ядра в упакованном векторе."""
        return 1 + len(self.lengthscales or [])

    @classmethod
    def default(cls, family: KernelFamily, input_dim: int) -> "KernelSpec":
        """Ядро по умолчанию: σ_f²=1, ℓ_q=1."""
        if family == KernelFamily.LINEAR:
            return cls(family=family, variance=1.0)
        return cls(family=family, variance=1.0, lengthscales=[1.0] * input_dim)

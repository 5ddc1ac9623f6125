"""
Pydantic схемы наборов данных и статистик нормализации.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator


class SyntheticDataset(BaseModel):
    """
    Синтетический двухвидовой набор.

    Attributes:
        latents: Истинные сигналы 50×3 (нормированные)
        view1: [s1, s3]·A₁ᵀ (50×12)
        view2: [s2, s3]·A₂ᵀ (50×12)
        mixing1: A₁ (12×2)
        mixing2: A₂ (12×2)
        grid: Точки x на [0, 2π]
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    latents: np.ndarray
    view1: np.ndarray
    view2: np.ndarray
    mixing1: np.ndarray
    mixing2: np.ndarray
    grid: np.ndarray


class Normalization(BaseModel):
    """
    Статистики постолбцовой стандартизации.

    Attributes:
        mean: Средние столбцов
        std: Стандартные отклонения (для постоянных столбцов — 1)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    mean: np.ndarray
    std: np.ndarray

    @field_validator("mean", "std", mode="before")
    @classmethod
    def as_vector(cls, value) -> np.ndarray:
        return np.asarray(value, dtype=float).ravel()

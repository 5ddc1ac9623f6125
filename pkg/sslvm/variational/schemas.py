"""
Pydantic схемы вариационных распределений и априорных параметров.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Отсечение вероятностей переключателей: γ ∈ [ε, 1−ε]
GAMMA_EPS = 1e-8


def clip_gamma(gamma: np.ndarray) -> np.ndarray:
    """Отсечь вероятности переключателей в [ε, 1−ε]."""
    return np.clip(np.asarray(gamma, dtype=float), GAMMA_EPS, 1.0 - GAMMA_EPS)


class SlabPosterior(BaseModel):
    """
    Гауссова («slab») часть апостериорного распределения q(x | b=1).

    Attributes:
        mu: Средние μ (N×Q)
        var: Дисперсии s (N×Q), строго положительные
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    mu: np.ndarray
    var: np.ndarray

    @field_validator("mu", "var", mode="before")
    @classmethod
    def as_matrix(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float, ndmin=2)
        if array.ndim != 2:
            raise ValueError(f"ожидалась матрица N×Q, получено {array.ndim} измерений")
        return array

    @field_validator("var")
    @classmethod
    def check_var(cls, value: np.ndarray) -> np.ndarray:
        if not np.all(value > 0):
            raise ValueError("дисперсии s должны быть строго положительными")
        return value

    @model_validator(mode="after")
    def check_shapes(self) -> "SlabPosterior":
        if self.mu.shape != self.var.shape:
            raise ValueError(f"формы mu {self.mu.shape} и var {self.var.shape} не совпадают")
        return self

    @property
    def num_data(self) -> int:
        return self.mu.shape[0]

    @property
    def input_dim(self) -> int:
        return self.mu.shape[1]


class SSPosterior(SlabPosterior):
    """
    Spike-and-slab апостериорное распределение одновидовой модели.

    Attributes:
        gamma: Вероятности включения измерений γ_q (длины Q), отсечены в [ε, 1−ε]
    """

    gamma: np.ndarray

    @field_validator("gamma", mode="before")
    @classmethod
    def as_clipped_vector(cls, value) -> np.ndarray:
        return clip_gamma(np.array(value, dtype=float).ravel())

    @model_validator(mode="after")
    def check_gamma_length(self) -> "SSPosterior":
        if self.gamma.shape[0] != self.mu.shape[1]:
            raise ValueError(f"длина gamma {self.gamma.shape[0]} не равна Q={self.mu.shape[1]}")
        return self


class SSPrior(BaseModel):
    """
    Априорные параметры: p(b_q) = Bernoulli(π), slab — N(0, 1).

    Attributes:
        pi: Априорная вероятность включения измерения
    """

    pi: float = Field(default=0.5, gt=0.0, lt=1.0, description="π ∈ (0, 1)")


class MRDSwitchPosterior(BaseModel):
    """
    Вероятности переключателей по видам γ_cq.

    Attributes:
        gamma: Матрица C×Q, отсечена в [ε, 1−ε]
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    gamma: np.ndarray

    @field_validator("gamma", mode="before")
    @classmethod
    def as_clipped_matrix(cls, value) -> np.ndarray:
        array = np.array(value, dtype=float, ndmin=2)
        if array.ndim != 2:
            raise ValueError("gamma должна быть матрицей C×Q")
        return clip_gamma(array)

    @property
    def num_views(self) -> int:
        return self.gamma.shape[0]

"""
Pydantic схемы результатов вывода латентных координат.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class InferenceResult(BaseModel):
    """
    Апостериорные slab-параметры тестовых точек.

    Attributes:
        mu: Средние μ* (N*×Q)
        var: Дисперсии s* (N*×Q)
        objective: Значение частичной нижней границы по точкам (N*)
        errors: Номер точки → сообщение об ошибке; для таких точек
            возвращается начальное приближение
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    mu: np.ndarray
    var: np.ndarray
    objective: np.ndarray
    errors: dict[int, str] = Field(default_factory=dict)

    @property
    def num_points(self) -> int:
        return self.mu.shape[0]

    @property
    def ok(self) -> bool:
        return not self.errors

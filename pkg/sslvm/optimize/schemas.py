"""
Pydantic схемы настроек оптимизации и журнала итераций.
"""

from pydantic import BaseModel, Field, field_validator

from sslvm.model.transforms import ParamGroup


class StageSpec(BaseModel):
    """
    Этап оптимизации: активные группы параметров и бюджет итераций.

    Attributes:
        groups: Оптимизируемые группы, остальные заморожены
        iters: Число итераций этапа
    """

    groups: list[ParamGroup] = Field(..., min_length=1)
    iters: int = Field(..., ge=1)

    @field_validator("groups")
    @classmethod
    def unique_groups(cls, value: list[ParamGroup]) -> list[ParamGroup]:
        return list(dict.fromkeys(value))


class OptConfig(BaseModel):
    """
    Настройки оптимизации нижней границы.

    Attributes:
        max_iters: Общий бюджет итераций (0 = без оптимизации)
        gtol: Порог по бесконечной норме градиента
        ftol: Порог по относительному изменению целевой функции
        stage_schedule: Этапы; None — расписание по умолчанию
        seed: Зерно выбора среди равноудалённых обучающих точек в начальном приближении вывода
        max_failures: Допустимое число подряд неконечных значений целевой функции
    """

    max_iters: int = Field(default=1000, ge=0)
    gtol: float = Field(default=1e-5, gt=0.0)
    ftol: float = Field(default=1e-9, gt=0.0)
    stage_schedule: list[StageSpec] | None = None
    seed: int = 0
    max_failures: int = Field(default=10, ge=1)


class TraceRow(BaseModel):
    """Строка журнала: итерация, значение границы и норма градиента."""

    iteration: int
    elbo: float
    grad_norm: float
    stage: int = 0

"""
Pydantic схемы отчётов оценки качества.
"""

from enum import StrEnum

from pydantic import BaseModel, Field


class EvalMode(StrEnum):
    """Режимы оценки."""

    CLASSIFY = "classify"
    RETRIEVE = "retrieve"
    RECOVERY = "recovery"


class ReportFormat(StrEnum):
    """Формат отчёта eval."""

    JSON = "json"
    CSV = "csv"


class RecoveryReport(BaseModel):
    """
    Сопоставление выведенных измерений с истинными сигналами.

    Attributes:
        assignment: Для каждого сигнала — номер выведенного измерения (или None)
        scores: |корреляция| в назначенной паре (0, если измерений не хватило)
        correlation: Матрица |корреляций| (измерения × сигналы)
    """

    assignment: list[int | None]
    scores: list[float]
    correlation: list[list[float]]

    @property
    def min_score(self) -> float:
        return min(self.scores) if self.scores else 0.0


class RetrievalReport(BaseModel):
    """Итог поиска: mAP, число учтённых запросов и выбранные измерения."""

    mean_average_precision: float = Field(..., ge=0.0, le=1.0)
    num_queries: int
    num_skipped: int
    dims: list[int]


class ClassificationReport(BaseModel):
    """Итог классификации 1-NN."""

    accuracy: float = Field(..., ge=0.0, le=1.0)
    num_test: int
    dims: list[int]


class ViewSelection(BaseModel):
    """
    Выбор измерений одного вида по γ и согласованность с порогом по масштабам.

    Attributes:
        name: Имя вида
        gamma: γ вида
        selected: Измерения с γ ≥ порога
        lengthscales: ℓ вида (None для линейного ядра)
        lengthscale_reproduces: Найдётся ли порог по ℓ с тем же выбором
    """

    name: str
    gamma: list[float]
    selected: list[int]
    lengthscales: list[float] | None = None
    lengthscale_reproduces: bool | None = None

"""
Pydantic схемы параметров команд CLI.

Значения собираются из флагов, JSON-файла --config и значений по умолчанию
(флаги важнее файла).
"""

from typing import Any

from pydantic import BaseModel, Field, field_validator

from sslvm.evaluation.schemas import EvalMode, ReportFormat
from sslvm.kernels.schemas import KernelFamily
from sslvm.model.initialization import DEFAULT_NUM_INDUCING, InitStrategy


def _split(value: Any) -> Any:
    if isinstance(value, str):
        return [item.strip() for item in value.split(",") if item.strip()]
    return value


class CommonOptions(BaseModel):
    """Общие параметры команд."""

    threads: int | None = Field(default=None, ge=1)
    diagnostics: str = "diagnostics.json"


class SynthOptions(CommonOptions):
    """Параметры команды synth."""

    seed: int = 0
    out_dir: str = "."


class DataOptions(CommonOptions):
    """Параметры чтения обучающих данных."""

    normalize: bool = False
    header: bool = False
    replicate: list[int] | None = None

    @field_validator("replicate", mode="before")
    @classmethod
    def split_replicate(cls, value: Any) -> Any:
        return _split(value)

    def replication(self, num_views: int) -> list[int]:
        """Множители повторения столбцов по видам."""
        if self.replicate is None:
            return [1] * num_views
        if len(self.replicate) != num_views:
            raise ValueError(f"--replicate задаёт {len(self.replicate)} множителей, видов {num_views}")
        return self.replicate


class TrainOptions(DataOptions):
    """Параметры команды train."""

    data: list[str] = Field(..., min_length=1)
    q: int = Field(..., ge=1)
    m: int = Field(default=DEFAULT_NUM_INDUCING, ge=1)
    kernel: KernelFamily = KernelFamily.EXPQUAD
    init: InitStrategy = InitStrategy.PCA
    iters: int = Field(default=1000, ge=0)
    seed: int = 0
    checkpoint: str
    trace: str | None = None
    labels: str | None = None

    @field_validator("data", mode="before")
    @classmethod
    def split_data(cls, value: Any) -> Any:
        return _split(value)


class InferOptions(DataOptions):
    """Параметры команды infer."""

    checkpoint: str
    data: str
    train_data: list[str] = Field(..., min_length=1)
    view: int = Field(default=0, ge=0)
    out: str
    iters: int = Field(default=200, ge=0)
    seed: int = 0

    @field_validator("train_data", mode="before")
    @classmethod
    def split_train_data(cls, value: Any) -> Any:
        return _split(value)


class EvalOptions(CommonOptions):
    """Параметры команды eval."""

    checkpoint: str
    mode: EvalMode
    view: int = Field(default=0, ge=0)
    threshold: float = 0.5
    labels: str | None = None
    test_latents: str | None = None
    test_labels: str | None = None
    queries: str | None = None
    truth: str | None = None
    header: bool = False
    out: str | None = None
    report_format: ReportFormat = ReportFormat.JSON
    curve: str | None = None

"""
Pydantic схемы моделей SSGP-LVM и SSMRD.

Индуцирующие переменные u аналитически проинтегрированы и не хранятся.
"""

from typing import Any, Literal

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from sslvm.kernels.schemas import KernelFamily, KernelSpec
from sslvm.variational.schemas import MRDSwitchPosterior, SlabPosterior, SSPosterior, SSPrior


def _as_data_matrix(value: Any) -> np.ndarray | None:
    if value is None:
        return None
    array = np.array(value, dtype=float, ndmin=2)
    if array.ndim != 2:
        raise ValueError("данные должны быть матрицей N×D")
    if not np.all(np.isfinite(array)):
        raise ValueError("данные содержат неконечные значения")
    return array


def _fill_shapes(data: Any) -> Any:
    """Заполнить num_data/output_dim по Y, если они не заданы явно."""
    if isinstance(data, dict) and data.get("Y") is not None:
        data = dict(data)
        Y = np.atleast_2d(np.asarray(data["Y"]))
        data.setdefault("num_data", Y.shape[0])
        data.setdefault("output_dim", Y.shape[1])
    return data


def _warn_inducing(num_inducing: int, num_data: int, name: str) -> None:
    if num_inducing > num_data:
        logger.warning(f"⚠️ {name}: M={num_inducing} больше N={num_data}")


class ViewRecord(BaseModel):
    """
    Один вид данных: наблюдения, ядро, точность шума и индуцирующие входы.

    Attributes:
        name: Имя вида (для логов и отчётов)
        Y: Данные N×D_c или None (чекпоинт без данных)
        num_data: N
        output_dim: D_c
        kernel: Ядро вида
        beta: Точность шума β_c
        Z: Индуцирующие входы M_c×Q
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str = "view"
    Y: np.ndarray | None = None
    num_data: int = Field(..., ge=1)
    output_dim: int = Field(..., ge=1)
    kernel: KernelSpec
    beta: float = Field(..., gt=0.0)
    Z: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def fill_shapes(cls, data: Any) -> Any:
        return _fill_shapes(data)

    @field_validator("Y", mode="before")
    @classmethod
    def check_data(cls, value: Any) -> np.ndarray | None:
        return _as_data_matrix(value)

    @field_validator("Z", mode="before")
    @classmethod
    def as_matrix(cls, value: Any) -> np.ndarray:
        return np.array(value, dtype=float, ndmin=2)

    @model_validator(mode="after")
    def check_view(self) -> "ViewRecord":
        if self.Y is not None and self.Y.shape != (self.num_data, self.output_dim):
            raise ValueError(
                f"форма Y {self.Y.shape} не совпадает с ({self.num_data}, {self.output_dim})"
            )
        if self.kernel.lengthscales is not None and len(self.kernel.lengthscales) != self.Z.shape[1]:
            raise ValueError("число lengthscales не совпадает с размерностью Z")
        return self

    @property
    def num_inducing(self) -> int:
        return self.Z.shape[0]


class SSGPLVMModel(BaseModel):
    """
    Одновидовая модель SSGP-LVM.

    Attributes:
        Y: Данные N×D или None (чекпоинт без данных)
        num_data: N
        output_dim: D
        posterior: q(b, X): μ, s, γ
        Z: Индуцирующие входы M×Q
        kernel: Ядро
        beta: Точность шума β
        prior: Априорные параметры (π)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    Y: np.ndarray | None = None
    num_data: int = Field(..., ge=1)
    output_dim: int = Field(..., ge=1)
    posterior: SSPosterior
    Z: np.ndarray
    kernel: KernelSpec
    beta: float = Field(..., gt=0.0)
    prior: SSPrior = Field(default_factory=SSPrior)

    @model_validator(mode="before")
    @classmethod
    def fill_shapes(cls, data: Any) -> Any:
        return _fill_shapes(data)

    @field_validator("Y", mode="before")
    @classmethod
    def check_data(cls, value: Any) -> np.ndarray | None:
        return _as_data_matrix(value)

    @field_validator("Z", mode="before")
    @classmethod
    def as_matrix(cls, value: Any) -> np.ndarray:
        return np.array(value, dtype=float, ndmin=2)

    @model_validator(mode="after")
    def check_model(self) -> "SSGPLVMModel":
        input_dim = self.posterior.input_dim
        if self.posterior.num_data != self.num_data:
            raise ValueError(f"posterior имеет {self.posterior.num_data} строк, N={self.num_data}")
        if self.Y is not None and self.Y.shape != (self.num_data, self.output_dim):
            raise ValueError(f"форма Y {self.Y.shape} не совпадает с метаданными")
        if self.Z.shape[1] != input_dim:
            raise ValueError(f"Z имеет {self.Z.shape[1]} столбцов, Q={input_dim}")
        if self.kernel.lengthscales is not None and len(self.kernel.lengthscales) != input_dim:
            raise ValueError("число lengthscales не равно Q")
        _warn_inducing(self.Z.shape[0], self.num_data, "SSGP-LVM")
        return self

    @property
    def input_dim(self) -> int:
        return self.posterior.input_dim

    @property
    def slab(self) -> SlabPosterior:
        return self.posterior

    @property
    def gamma_matrix(self) -> np.ndarray:
        """γ как матрица 1×Q."""
        return self.posterior.gamma[None, :]

    @property
    def views(self) -> list[ViewRecord]:
        """Модель как единственный вид."""
        return [
            ViewRecord.model_construct(
                name="view",
                Y=self.Y,
                num_data=self.num_data,
                output_dim=self.output_dim,
                kernel=self.kernel,
                beta=self.beta,
                Z=self.Z,
            )
        ]


class MRDModel(BaseModel):
    """
    Многовидовая модель SSMRD: общее slab-распределение и переключатели по видам.

    Attributes:
        views: Виды данных со своими ядрами, β_c и Z_c
        posterior: Общая slab-часть (μ, s)
        switches: Переключатели γ_cq
        prior: Априорные параметры (общее π)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    views: list[ViewRecord] = Field(..., min_length=1)
    posterior: SlabPosterior
    switches: MRDSwitchPosterior
    prior: SSPrior = Field(default_factory=SSPrior)

    @model_validator(mode="after")
    def check_model(self) -> "MRDModel":
        num_data, input_dim = self.posterior.mu.shape
        if self.switches.gamma.shape != (len(self.views), input_dim):
            raise ValueError(
                f"форма switches {self.switches.gamma.shape} не равна ({len(self.views)}, {input_dim})"
            )
        for view in self.views:
            if view.num_data != num_data:
                raise ValueError(f"вид {view.name}: N={view.num_data}, ожидалось {num_data}")
            if view.Z.shape[1] != input_dim:
                raise ValueError(f"вид {view.name}: Z имеет {view.Z.shape[1]} столбцов, Q={input_dim}")
            _warn_inducing(view.num_inducing, num_data, view.name)
        return self

    @property
    def num_data(self) -> int:
        return self.posterior.num_data

    @property
    def input_dim(self) -> int:
        return self.posterior.input_dim

    @property
    def slab(self) -> SlabPosterior:
        return self.posterior

    @property
    def gamma_matrix(self) -> np.ndarray:
        return self.switches.gamma


AnyModel = SSGPLVMModel | MRDModel


class ArrayEntry(BaseModel):
    """Запись таблицы массивов чекпоинта: имя и форма (порядок — порядок в файле)."""

    name: str
    shape: list[int]

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=int))


class ViewMeta(BaseModel):
    """Метаданные вида в заголовке чекпоинта."""

    name: str
    num_data: int = Field(..., ge=1)
    output_dim: int = Field(..., ge=1)
    num_inducing: int = Field(..., ge=1)
    family: KernelFamily


class CheckpointHeader(BaseModel):
    """
    JSON-заголовок чекпоинта.

    Attributes:
        version: Версия формата
        kind: "ssgplvm" или "mrd"
        num_data: N
        input_dim: Q
        views: Метаданные видов (данные Y не сохраняются)
        arrays: Таблица массивов '<f8' в порядке записи
    """

    version: int
    kind: Literal["ssgplvm", "mrd"]
    num_data: int = Field(..., ge=1)
    input_dim: int = Field(..., ge=1)
    views: list[ViewMeta] = Field(..., min_length=1)
    arrays: list[ArrayEntry]

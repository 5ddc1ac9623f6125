"""
Хранение моделей в файлах чекпоинтов.

Формат файла:
    8 байт   сигнатура b"SSLVMCKP"
    8 байт   длина заголовка L (uint64, little-endian)
    L байт   JSON-заголовок (CheckpointHeader, UTF-8)
    далее    массивы '<f8' (row-major) в порядке header.arrays

Массивы: mu, var, gamma; для каждого вида c: views.c.y_shape (N, D_c),
views.c.Z, views.c.kernel (σ_f², затем ℓ), views.c.beta; в конце prior.pi.
Данные Y в файл не пишутся, их подключает attach_data.
"""

import json
import os
from pathlib import Path

import numpy as np
from loguru import logger
from pydantic import ValidationError

from sslvm.errors import CheckpointError, DataFormatError, ShapeError, UnsupportedVersionError
from sslvm.kernels.schemas import KernelSpec
from sslvm.model.schemas import (
    AnyModel,
    ArrayEntry,
    CheckpointHeader,
    MRDModel,
    SSGPLVMModel,
    ViewMeta,
    ViewRecord,
)
from sslvm.variational.schemas import MRDSwitchPosterior, SlabPosterior, SSPosterior, SSPrior

MAGIC = b"SSLVMCKP"
CHECKPOINT_VERSION = 1
_LENGTH_BYTES = 8
_DTYPE = np.dtype("<f8")


def _collect_arrays(model: AnyModel) -> list[tuple[str, np.ndarray]]:
    gamma = model.posterior.gamma if isinstance(model, SSGPLVMModel) else model.switches.gamma
    arrays = [("mu", model.slab.mu), ("var", model.slab.var), ("gamma", gamma)]
    for index, view in enumerate(model.views):
        prefix = f"views.{index}"
        arrays += [
            (f"{prefix}.y_shape", np.array([view.num_data, view.output_dim], dtype=float)),
            (f"{prefix}.Z", view.Z),
            (f"{prefix}.kernel", np.concatenate([[view.kernel.variance], view.kernel.ell])),
            (f"{prefix}.beta", np.array([view.beta])),
        ]
    arrays.append(("prior.pi", np.array([model.prior.pi])))
    return arrays


def encode(model: AnyModel) -> bytes:
    """Сериализовать модель в байты чекпоинта."""
    arrays = _collect_arrays(model)
    header = CheckpointHeader(
        version=CHECKPOINT_VERSION,
        kind="ssgplvm" if isinstance(model, SSGPLVMModel) else "mrd",
        num_data=model.num_data,
        input_dim=model.input_dim,
        views=[
            ViewMeta(
                name=view.name,
                num_data=view.num_data,
                output_dim=view.output_dim,
                num_inducing=view.num_inducing,
                family=view.kernel.family,
            )
            for view in model.views
        ],
        arrays=[ArrayEntry(name=name, shape=list(np.shape(array))) for name, array in arrays],
    )
    header_bytes = header.model_dump_json().encode("utf-8")
    payload = b"".join(np.ascontiguousarray(array, dtype=_DTYPE).tobytes() for _, array in arrays)
    return MAGIC + len(header_bytes).to_bytes(_LENGTH_BYTES, "little") + header_bytes + payload


def _read_header(raw: bytes) -> tuple[CheckpointHeader, int]:
    if raw[: len(MAGIC)] != MAGIC:
        raise CheckpointError("файл не является чекпоинтом sslvm")
    start = len(MAGIC) + _LENGTH_BYTES
    if len(raw) < start:
        raise CheckpointError("чекпоинт усечён: нет длины заголовка")
    length = int.from_bytes(raw[len(MAGIC) : start], "little")
    if len(raw) < start + length:
        raise CheckpointError("чекпоинт усечён: заголовок неполный")
    try:
        document = json.loads(raw[start : start + length].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"повреждённый заголовок: {e}") from e
    if not isinstance(document, dict):
        raise CheckpointError("заголовок должен быть JSON-объектом")
    version = document.get("version")
    if version != CHECKPOINT_VERSION:
        raise UnsupportedVersionError(
            f"версия чекпоинта {version} не поддерживается (ожидалась {CHECKPOINT_VERSION})"
        )
    try:
        header = CheckpointHeader.model_validate(document)
    except ValidationError as e:
        raise CheckpointError(f"некорректный заголовок: {e}") from e
    return header, start + length


def decode(raw: bytes) -> AnyModel:
    """
    Восстановить модель из байтов чекпоинта.

    Raises:
        UnsupportedVersionError: Неизвестная версия формата
        CheckpointError: Файл повреждён или усечён
    """
    header, offset = _read_header(raw)
    expected = sum(entry.size for entry in header.arrays) * _DTYPE.itemsize
    if len(raw) - offset != expected:
        raise CheckpointError(
            f"чекпоинт усечён или повреждён: {len(raw) - offset} байт данных, ожидалось {expected}"
        )

    arrays: dict[str, np.ndarray] = {}
    for entry in header.arrays:
        size = entry.size * _DTYPE.itemsize
        arrays[entry.name] = (
            np.frombuffer(raw, dtype=_DTYPE, count=entry.size, offset=offset)
            .reshape(entry.shape)
            .astype(float)
        )
        offset += size

    try:
        return _build_model(header, arrays)
    except (KeyError, ValueError, ValidationError) as e:
        raise CheckpointError(f"несогласованный чекпоинт: {e}") from e


def _build_views(header: CheckpointHeader, arrays: dict[str, np.ndarray]) -> list[ViewRecord]:
    views = []
    for index, meta in enumerate(header.views):
        prefix = f"views.{index}"
        y_shape = arrays[f"{prefix}.y_shape"]
        if tuple(y_shape.astype(int)) != (meta.num_data, meta.output_dim):
            raise ValueError(f"вид {meta.name}: форма Y в заголовке и в данных различается")
        params = arrays[f"{prefix}.kernel"]
        lengthscales = params[1:].tolist() if params.shape[0] > 1 else None
        views.append(
            ViewRecord(
                name=meta.name,
                num_data=meta.num_data,
                output_dim=meta.output_dim,
                kernel=KernelSpec(family=meta.family, variance=float(params[0]), lengthscales=lengthscales),
                beta=float(arrays[f"{prefix}.beta"][0]),
                Z=arrays[f"{prefix}.Z"],
            )
        )
    return views


def _build_model(header: CheckpointHeader, arrays: dict[str, np.ndarray]) -> AnyModel:
    views = _build_views(header, arrays)
    prior = SSPrior(pi=float(arrays["prior.pi"][0]))
    if header.kind == "ssgplvm":
        view = views[0]
        return SSGPLVMModel(
            num_data=view.num_data,
            output_dim=view.output_dim,
            posterior=SSPosterior(mu=arrays["mu"], var=arrays["var"], gamma=arrays["gamma"]),
            Z=view.Z,
            kernel=view.kernel,
            beta=view.beta,
            prior=prior,
        )
    return MRDModel(
        views=views,
        posterior=SlabPosterior(mu=arrays["mu"], var=arrays["var"]),
        switches=MRDSwitchPosterior(gamma=arrays["gamma"]),
        prior=prior,
    )


class CheckpointRepository:
    """
    Репозиторий чекпоинтов в одном файле.

    Attributes:
        path: Путь к файлу чекпоинта
    """

    def __init__(self, path: str | Path) -> None:
        """
        Инициализация репозитория.

        Args:
            path: Путь к файлу чекпоинта
        """
        self.path = Path(path)

    def exists(self) -> bool:
        return self.path.is_file()

    def save(self, model: AnyModel) -> Path:
        """
        Записать модель. Файл заменяется целиком (через временный файл).

        Args:
            model: Модель

        Returns:
            Путь к записанному файлу
        """
        raw = encode(model)
        tmp_path = self.path.with_name(self.path.name + ".tmp")
        try:
            tmp_path.write_bytes(raw)
            os.replace(tmp_path, self.path)
        finally:
            tmp_path.unlink(missing_ok=True)
        logger.debug(f"💾 Чекпоинт записан: {self.path} ({len(raw)} байт)")
        return self.path

    def load(self) -> AnyModel:
        """
        Прочитать модель (без данных Y).

        Returns:
            SSGPLVMModel или MRDModel

        Raises:
            CheckpointError: Файл повреждён или усечён
            UnsupportedVersionError: Неизвестная версия формата
        """
        model = decode(self.path.read_bytes())
        logger.debug(f"📂 Чекпоинт прочитан: {self.path}")
        return model


def save(model: AnyModel, path: str | Path) -> Path:
    """Записать модель в чекпоинт path."""
    return CheckpointRepository(path).save(model)


def load(path: str | Path) -> AnyModel:
    """Прочитать модель из чекпоинта path."""
    return CheckpointRepository(path).load()


def attach_data(model: AnyModel, Ys: list[np.ndarray]) -> AnyModel:
    """
    Подключить данные к модели, прочитанной из чекпоинта.

    Args:
        model: Модель
        Ys: Данные видов в порядке model.views

    Returns:
        Копия модели с данными

    Raises:
        ShapeError: Число видов или формы данных не совпадают с метаданными
    """
    if len(Ys) != len(model.views):
        raise ShapeError(f"передано {len(Ys)} матриц, у модели {len(model.views)} видов")
    checked = []
    for view, Y in zip(model.views, Ys, strict=True):
        Y = np.array(Y, dtype=float, ndmin=2)
        if Y.shape != (view.num_data, view.output_dim):
            raise ShapeError(
                f"вид {view.name}: форма данных {Y.shape}, ожидалось ({view.num_data}, {view.output_dim})"
            )
        if not np.all(np.isfinite(Y)):
            raise DataFormatError(f"вид {view.name}: данные содержат неконечные значения")
        checked.append(Y)

    if isinstance(model, SSGPLVMModel):
        return model.model_copy(update={"Y": checked[0]})
    views = [view.model_copy(update={"Y": Y}) for view, Y in zip(model.views, checked, strict=True)]
    return model.model_copy(update={"views": views})

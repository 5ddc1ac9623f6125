"""
Переход между параметрами модели и плоским вектором без ограничений.

Положительные величины (s, σ_f², ℓ, β) — через логарифм, γ — через logit,
μ и Z — как есть.
"""

from enum import StrEnum
from typing import NamedTuple

import numpy as np
from scipy.special import expit, logit

from sslvm.bound.schemas import GradientSet
from sslvm.model.schemas import AnyModel, SSGPLVMModel
from sslvm.variational.schemas import clip_gamma


class ParamGroup(StrEnum):
    """Группы параметров для поэтапной оптимизации."""

    MU = "mu"
    VAR = "var"
    GAMMA = "gamma"
    INDUCING = "inducing"
    KERNEL = "kernel"
    BETA = "beta"


ALL_GROUPS = frozenset(ParamGroup)


class Segment(NamedTuple):
    """Участок упакованного вектора."""

    group: ParamGroup
    field: str
    view: int | None
    index: slice
    shape: tuple[int, ...]


def layout(model: AnyModel) -> list[Segment]:
    """
    Раскладка упакованного вектора.

    Порядок: μ, log s, logit γ, затем по видам: Z, log σ_f², log ℓ, log β.
    """
    segments: list[Segment] = []
    offset = 0

    def add(group: ParamGroup, field: str, shape: tuple[int, ...], view: int | None = None):
        nonlocal offset
        size = int(np.prod(shape))
        segments.append(Segment(group, field, view, slice(offset, offset + size), shape))
        offset += size

    add(ParamGroup.MU, "mu", model.slab.mu.shape)
    add(ParamGroup.VAR, "var", model.slab.var.shape)
    gamma_shape = model.posterior.gamma.shape if isinstance(model, SSGPLVMModel) else model.switches.gamma.shape
    add(ParamGroup.GAMMA, "gamma", gamma_shape)
    for index, view in enumerate(model.views):
        add(ParamGroup.INDUCING, "Z", view.Z.shape, index)
        add(ParamGroup.KERNEL, "variance", (), index)
        if view.kernel.lengthscales is not None:
            add(ParamGroup.KERNEL, "lengthscales", (len(view.kernel.lengthscales),), index)
        add(ParamGroup.BETA, "beta", (), index)
    return segments


def group_mask(model: AnyModel, groups: frozenset[ParamGroup] | set[ParamGroup]) -> np.ndarray:
    """Булева маска координат, принадлежащих группам groups."""
    segments = layout(model)
    mask = np.zeros(segments[-1].index.stop, dtype=bool)
    for segment in segments:
        if segment.group in groups:
            mask[segment.index] = True
    return mask


def _gamma_values(model: AnyModel) -> np.ndarray:
    if isinstance(model, SSGPLVMModel):
        return model.posterior.gamma
    return model.switches.gamma


def _raw_value(model: AnyModel, segment: Segment) -> np.ndarray:
    if segment.field == "mu":
        return model.slab.mu
    if segment.field == "var":
        return np.log(model.slab.var)
    if segment.field == "gamma":
        return logit(_gamma_values(model))
    view = model.views[segment.view]
    if segment.field == "Z":
        return view.Z
    if segment.field == "variance":
        return np.log(view.kernel.variance)
    if segment.field == "lengthscales":
        return np.log(view.kernel.ell)
    return np.log(view.beta)


def pack(model: AnyModel) -> np.ndarray:
    """
    Упаковать параметры модели в вектор без ограничений.

    Args:
        model: Модель

    Returns:
        Плоский вектор float64
    """
    return np.concatenate(
        [np.ravel(_raw_value(model, segment)) for segment in layout(model)]
    ).astype(float)


def unpack(
    model: AnyModel,
    theta: np.ndarray,
    groups: frozenset[ParamGroup] | set[ParamGroup] = ALL_GROUPS,
) -> AnyModel:
    """
    Собрать модель из вектора без ограничений.

    Параметры вне groups берутся из model без изменений (побитово).

    Args:
        model: Модель-шаблон (не изменяется)
        theta: Упакованный вектор
        groups: Группы, значения которых берутся из theta

    Returns:
        Новая модель

    Raises:
        ValueError: theta содержит NaN/Inf или имеет неверную длину
    """
    theta = np.asarray(theta, dtype=float)
    segments = layout(model)
    if theta.shape != (segments[-1].index.stop,):
        raise ValueError(f"длина вектора {theta.shape} не равна {segments[-1].index.stop}")
    if not np.all(np.isfinite(theta)):
        raise ValueError("вектор параметров содержит NaN или Inf")

    slab_update: dict[str, np.ndarray] = {}
    gamma = None
    view_updates: list[dict] = [{} for _ in model.views]
    kernel_updates: list[dict] = [{} for _ in model.views]

    for segment in segments:
        if segment.group not in groups:
            continue
        value = theta[segment.index].reshape(segment.shape)
        match segment.field:
            case "mu":
                slab_update["mu"] = value.copy()
            case "var":
                slab_update["var"] = np.exp(value)
            case "gamma":
                gamma = clip_gamma(expit(value))
            case "Z":
                view_updates[segment.view]["Z"] = value.copy()
            case "variance":
                kernel_updates[segment.view]["variance"] = float(np.exp(value))
            case "lengthscales":
                kernel_updates[segment.view]["lengthscales"] = np.exp(value).tolist()
            case "beta":
                view_updates[segment.view]["beta"] = float(np.exp(value))

    for index, view in enumerate(model.views):
        if kernel_updates[index]:
            view_updates[index]["kernel"] = view.kernel.model_copy(update=kernel_updates[index])

    if isinstance(model, SSGPLVMModel):
        posterior_update = dict(slab_update)
        if gamma is not None:
            posterior_update["gamma"] = gamma
        return model.model_copy(
            update={"posterior": model.posterior.model_copy(update=posterior_update), **view_updates[0]}
        )

    update: dict = {
        "posterior": model.posterior.model_copy(update=slab_update),
        "views": [
            view.model_copy(update=view_updates[index]) for index, view in enumerate(model.views)
        ],
    }
    if gamma is not None:
        update["switches"] = model.switches.model_copy(update={"gamma": gamma})
    return model.model_copy(update=update)


def pack_gradients(model: AnyModel, gradients: GradientSet) -> np.ndarray:
    """
    Перевести градиенты из исходных координат в координаты вектора pack(model).

    Args:
        model: Модель, в точке которой посчитаны градиенты
        gradients: Градиенты нижней границы

    Returns:
        Вектор той же раскладки, что и pack(model)
    """
    gamma = _gamma_values(model)
    parts = []
    for segment in layout(model):
        match segment.field:
            case "mu":
                part = gradients.mu
            case "var":
                part = gradients.var * model.slab.var
            case "gamma":
                part = gradients.gamma.reshape(gamma.shape) * gamma * (1.0 - gamma)
            case "Z":
                part = gradients.views[segment.view].Z
            case "variance":
                part = gradients.views[segment.view].variance * model.views[segment.view].kernel.variance
            case "lengthscales":
                part = gradients.views[segment.view].lengthscales * model.views[segment.view].kernel.ell
            case _:
                part = gradients.views[segment.view].beta * model.views[segment.view].beta
        parts.append(np.ravel(part))
    return np.concatenate(parts).astype(float)

"""
Начальные значения параметров моделей.
"""

from enum import StrEnum

import numpy as np
from loguru import logger

from sslvm.errors import ShapeError
from sslvm.kernels.schemas import KernelFamily, KernelSpec
from sslvm.model.schemas import MRDModel, SSGPLVMModel, ViewRecord
from sslvm.variational.schemas import MRDSwitchPosterior, SlabPosterior, SSPosterior, SSPrior

INITIAL_VAR = 0.5
INITIAL_GAMMA = 0.5
INDUCING_NOISE_STD = 0.1
SIMPLEX_NOISE_STD = 0.1
DEFAULT_NUM_INDUCING = 100


class InitStrategy(StrEnum):
    """Способы начального размещения средних μ."""

    PCA = "pca"
    RANDOM = "random"
    SIMPLEX = "simplex"


def simplex_vertices(num_classes: int, input_dim: int) -> np.ndarray:
    """
    Вершины правильного симплекса с центром в нуле.

    Args:
        num_classes: Число вершин K
        input_dim: Размерность пространства Q ≥ K − 1

    Returns:
        Матрица K×Q, попарные расстояния между строками равны √2
    """
    if num_classes < 1:
        raise ValueError("нужна хотя бы одна вершина")
    if num_classes - 1 > input_dim:
        raise ValueError(f"симплекс из {num_classes} вершин не помещается в Q={input_dim}")
    centred = np.eye(num_classes) - 1.0 / num_classes
    _, _, vt = np.linalg.svd(centred)
    coords = centred @ vt[: num_classes - 1].T
    vertices = np.zeros((num_classes, input_dim))
    vertices[:, : num_classes - 1] = coords
    return vertices


def _pca_latent(Y: np.ndarray, input_dim: int, rng: np.random.Generator) -> np.ndarray:
    centred = Y - Y.mean(axis=0)
    u, singular, _ = np.linalg.svd(centred, full_matrices=False)
    rank = min(input_dim, singular.shape[0])
    scores = u[:, :rank] * singular[:rank]
    std = scores.std(axis=0)
    scores = scores / np.where(std > 0, std, 1.0)
    if rank < input_dim:
        logger.warning(f"⚠️ pca: Q={input_dim} больше числа компонент {rank}, остаток случайный")
        scores = np.hstack([scores, rng.standard_normal((Y.shape[0], input_dim - rank))])
    return scores


def _initial_latent(
    Y: np.ndarray,
    input_dim: int,
    strategy: InitStrategy,
    rng: np.random.Generator,
    labels: np.ndarray | None,
) -> np.ndarray:
    num_data = Y.shape[0]
    match strategy:
        case InitStrategy.PCA:
            return _pca_latent(Y, input_dim, rng)
        case InitStrategy.RANDOM:
            return rng.standard_normal((num_data, input_dim))
        case InitStrategy.SIMPLEX:
            if labels is None:
                raise ValueError("стратегия simplex требует метки")
            labels = np.asarray(labels).ravel()
            if labels.shape[0] != num_data:
                raise ShapeError(f"число меток {labels.shape[0]} не равно N={num_data}")
            classes, class_index = np.unique(labels, return_inverse=True)
            vertices = simplex_vertices(len(classes), input_dim)
            noise = SIMPLEX_NOISE_STD * rng.standard_normal((num_data, input_dim))
            return vertices[class_index] + noise
    raise ValueError(f"неизвестная стратегия {strategy}")


def _inducing_inputs(mu: np.ndarray, num_inducing: int, rng: np.random.Generator) -> np.ndarray:
    num_data = mu.shape[0]
    if num_inducing > num_data:
        logger.warning(f"⚠️ M={num_inducing} больше N={num_data}, M уменьшено до N")
        num_inducing = num_data
    index = rng.choice(num_data, size=num_inducing, replace=False)
    return mu[index] + INDUCING_NOISE_STD * rng.standard_normal((num_inducing, mu.shape[1]))


def _initial_beta(Y: np.ndarray) -> float:
    variance = float(np.var(Y))
    return 1.0 / (0.01 * variance) if variance > 0 else 100.0


def _check_args(Y: np.ndarray, input_dim: int, num_inducing: int) -> np.ndarray:
    Y = np.array(Y, dtype=float, ndmin=2)
    if input_dim < 1 or num_inducing < 1:
        raise ValueError(f"Q и M должны быть ≥ 1, получено Q={input_dim}, M={num_inducing}")
    if not np.all(np.isfinite(Y)):
        raise ValueError("данные содержат неконечные значения")
    return Y


def init_model(
    Y: np.ndarray,
    input_dim: int,
    num_inducing: int = DEFAULT_NUM_INDUCING,
    kernel_family: KernelFamily = KernelFamily.EXPQUAD,
    init_strategy: InitStrategy = InitStrategy.PCA,
    seed: int = 0,
    labels: np.ndarray | None = None,
    prior: SSPrior | None = None,
) -> SSGPLVMModel:
    """
    Начальная одновидовая модель.

    Args:
        Y: Данные N×D
        input_dim: Число латентных измерений Q
        num_inducing: Число индуцирующих точек M (не больше N)
        kernel_family: Семейство ядра
        init_strategy: Размещение μ
        seed: Зерно генератора
        labels: Метки классов (для simplex)
        prior: Априорные параметры

    Returns:
        SSGPLVMModel; одинаковые аргументы дают побитово одинаковые модели
    """
    Y = _check_args(Y, input_dim, num_inducing)
    rng = np.random.default_rng(seed)
    mu = _initial_latent(Y, input_dim, init_strategy, rng, labels)
    Z = _inducing_inputs(mu, num_inducing, rng)
    posterior = SSPosterior(
        mu=mu,
        var=np.full_like(mu, INITIAL_VAR),
        gamma=np.full(input_dim, INITIAL_GAMMA),
    )
    model = SSGPLVMModel(
        Y=Y,
        posterior=posterior,
        Z=Z,
        kernel=KernelSpec.default(kernel_family, input_dim),
        beta=_initial_beta(Y),
        prior=prior or SSPrior(),
    )
    logger.debug(f"🚀 SSGP-LVM: N={Y.shape[0]}, D={Y.shape[1]}, Q={input_dim}, M={Z.shape[0]}")
    return model


def init_mrd_model(
    Ys: list[np.ndarray],
    input_dim: int,
    num_inducing: int = DEFAULT_NUM_INDUCING,
    kernel_family: KernelFamily = KernelFamily.EXPQUAD,
    init_strategy: InitStrategy = InitStrategy.PCA,
    seed: int = 0,
    labels: np.ndarray | None = None,
    prior: SSPrior | None = None,
    names: list[str] | None = None,
) -> MRDModel:
    """
    Начальная многовидовая модель.

    Общие μ строятся по склеенным видам; у каждого вида свои Z_c и β_c.

    Args:
        Ys: Данные видов N×D_c
        input_dim: Число латентных измерений Q
        num_inducing: Число индуцирующих точек на вид
        kernel_family: Семейство ядра всех видов
        init_strategy: Размещение μ
        seed: Зерно генератора
        labels: Метки классов (для simplex)
        prior: Априорные параметры
        names: Имена видов

    Returns:
        MRDModel
    """
    if not Ys:
        raise ValueError("нужен хотя бы один вид")
    Ys = [_check_args(Y, input_dim, num_inducing) for Y in Ys]
    rows = {Y.shape[0] for Y in Ys}
    if len(rows) != 1:
        raise ShapeError(f"виды имеют разное число строк: {sorted(rows)}")
    names = names or [f"view{index + 1}" for index in range(len(Ys))]
    if len(names) != len(Ys):
        raise ValueError("число имён не совпадает с числом видов")

    rng = np.random.default_rng(seed)
    mu = _initial_latent(np.hstack(Ys), input_dim, init_strategy, rng, labels)
    views = [
        ViewRecord(
            name=name,
            Y=Y,
            kernel=KernelSpec.default(kernel_family, input_dim),
            beta=_initial_beta(Y),
            Z=_inducing_inputs(mu, num_inducing, rng),
        )
        for name, Y in zip(names, Ys, strict=True)
    ]
    model = MRDModel(
        views=views,
        posterior=SlabPosterior(mu=mu, var=np.full_like(mu, INITIAL_VAR)),
        switches=MRDSwitchPosterior(gamma=np.full((len(Ys), input_dim), INITIAL_GAMMA)),
        prior=prior or SSPrior(),
    )
    logger.debug(f"🚀 SSMRD: C={len(Ys)}, N={mu.shape[0]}, Q={input_dim}")
    return model

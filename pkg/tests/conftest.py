"""
Общие фикстуры: небольшие модели обоих семейств ядер и сброс настроек.
"""

import numpy as np
import pytest
from loguru import logger

from sslvm.config import settings
from sslvm.kernels.schemas import KernelFamily, KernelSpec
from sslvm.model.schemas import MRDModel, SSGPLVMModel, ViewRecord
from sslvm.variational.schemas import MRDSwitchPosterior, SlabPosterior, SSPosterior, SSPrior


def random_kernel(rng: np.random.Generator, family: KernelFamily, input_dim: int) -> KernelSpec:
    if family == KernelFamily.LINEAR:
        return KernelSpec(family=family, variance=float(rng.uniform(0.5, 1.5)))
    return KernelSpec(
        family=family,
        variance=float(rng.uniform(0.5, 1.5)),
        lengthscales=rng.uniform(0.8, 2.0, input_dim).tolist(),
    )


def random_slab(rng: np.random.Generator, num_data: int, input_dim: int) -> dict[str, np.ndarray]:
    return {
        "mu": rng.standard_normal((num_data, input_dim)),
        "var": rng.uniform(0.2, 1.0, (num_data, input_dim)),
    }


def make_ss_model(
    seed: int = 0,
    family: KernelFamily = KernelFamily.EXPQUAD,
    num_data: int = 6,
    output_dim: int = 3,
    input_dim: int = 2,
    num_inducing: int | None = None,
) -> SSGPLVMModel:
    """
    Одновидовая модель со случайными параметрами.

    Для линейного ядра M по умолчанию равно Q, чтобы K_uu была невырожденной.
    """
    rng = np.random.default_rng(seed)
    if num_inducing is None:
        num_inducing = input_dim if family == KernelFamily.LINEAR else 3
    return SSGPLVMModel(
        Y=rng.standard_normal((num_data, output_dim)),
        posterior=SSPosterior(
            **random_slab(rng, num_data, input_dim),
            gamma=rng.uniform(0.2, 0.8, input_dim),
        ),
        Z=1.5 * rng.standard_normal((num_inducing, input_dim)),
        kernel=random_kernel(rng, family, input_dim),
        beta=float(rng.uniform(1.0, 5.0)),
        prior=SSPrior(pi=float(rng.uniform(0.3, 0.7))),
    )


def make_mrd_model(
    seed: int = 0,
    family: KernelFamily = KernelFamily.EXPQUAD,
    num_views: int = 2,
    num_data: int = 5,
    output_dims: tuple[int, ...] = (3, 2),
    input_dim: int = 2,
) -> MRDModel:
    """Многовидовая модель со случайными параметрами."""
    rng = np.random.default_rng(seed)
    num_inducing = input_dim if family == KernelFamily.LINEAR else 3
    views = [
        ViewRecord(
            name=f"view{index + 1}",
            Y=rng.standard_normal((num_data, output_dims[index])),
            kernel=random_kernel(rng, family, input_dim),
            beta=float(rng.uniform(1.0, 5.0)),
            Z=1.5 * rng.standard_normal((num_inducing, input_dim)),
        )
        for index in range(num_views)
    ]
    return MRDModel(
        views=views,
        posterior=SlabPosterior(**random_slab(rng, num_data, input_dim)),
        switches=MRDSwitchPosterior(gamma=rng.uniform(0.2, 0.8, (num_views, input_dim))),
        prior=SSPrior(pi=float(rng.uniform(0.3, 0.7))),
    )


@pytest.fixture(autouse=True)
def reset_settings():
    """Команды CLI меняют глобальные настройки, возвращаем значения по умолчанию."""
    yield
    settings.threads = 1
    settings.debug = False
    settings.log_file = None


@pytest.fixture
def warnings_log():
    """Сообщения loguru уровня WARNING и выше."""
    messages: list[str] = []
    handler_id = logger.add(lambda message: messages.append(str(message)), level="WARNING")
    yield messages
    logger.remove(handler_id)


@pytest.fixture(params=[KernelFamily.EXPQUAD, KernelFamily.LINEAR], ids=str)
def family(request) -> KernelFamily:
    return request.param

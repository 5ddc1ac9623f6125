"""
Вывод q(x*) для новых точек при замороженной модели.

Для каждой тестовой точки максимизируется нижняя граница по обучающим
данным вместе с этой точкой: ψ-статистики обучающей части фиксированы,
к ним добавляются ψ-статистики точки, а из KL остаётся только slab-член
точки с весом ρ_q. Переменные — только μ* и log s* одной точки.
"""

from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from loguru import logger
from scipy.optimize import minimize
from scipy.spatial.distance import cdist

from sslvm.bound.elbo import data_term_gradients
from sslvm.config import settings
from sslvm.data.csv_io import write_matrix_csv
from sslvm.errors import HyperparameterError, NumericalError, OptimizationError, ShapeError
from sslvm.inference.schemas import InferenceResult
from sslvm.kernels.covariance import kernel_matrix
from sslvm.model.schemas import AnyModel, ViewRecord
from sslvm.optimize.schemas import OptConfig
from sslvm.psi.schemas import PsiStats
from sslvm.psi.statistics import psi_gradients, psi_stats
from sslvm.variational.divergence import switch_union
from sslvm.variational.schemas import SlabPosterior

WARM_START_VAR = 0.5


class PointObjective:
    """
    Частичная нижняя граница для одной тестовой точки.

    Attributes:
        view: Вид, по данным которого ведётся вывод
        gamma: Вероятности переключателей этого вида
        rho: Веса slab-члена KL (вероятность использования измерения хотя бы одним видом)
    """

    def __init__(self, model: AnyModel, view_index: int) -> None:
        self.view: ViewRecord = model.views[view_index]
        self.gamma = model.gamma_matrix[view_index]
        self.rho = switch_union(model.gamma_matrix)
        self.train_psi = psi_stats(self.view.kernel, model.slab, self.gamma, self.view.Z)
        self.Kuu = kernel_matrix(self.view.kernel, self.view.Z)
        self.input_dim = model.input_dim

    def value_and_gradient(self, y_star: np.ndarray, params: np.ndarray) -> tuple[float, np.ndarray]:
        """
        Значение и градиент по упакованным [μ*, log s*].

        Args:
            y_star: Наблюдение точки (длины D_c)
            params: Вектор длины 2Q

        Returns:
            (значение, градиент)
        """
        mu = params[: self.input_dim][None, :]
        var = np.exp(params[self.input_dim :])[None, :]
        point = SlabPosterior.model_construct(mu=mu, var=var)
        point_psi = psi_stats(self.view.kernel, point, self.gamma, self.view.Z)
        psi = PsiStats(
            psi0=self.train_psi.psi0 + point_psi.psi0,
            psi1=np.vstack([self.train_psi.psi1, point_psi.psi1]),
            psi2=self.train_psi.psi2 + point_psi.psi2,
        )
        Y = np.vstack([self.view.Y, y_star[None, :]])
        grads = data_term_gradients(Y, psi, self.Kuu, self.view.beta)
        through_psi = psi_gradients(
            self.view.kernel,
            point,
            self.gamma,
            self.view.Z,
            grads.d_psi0,
            grads.d_psi1[-1:],
            grads.d_psi2,
        )
        kl = float(np.sum(self.rho * 0.5 * (var + mu**2 - 1.0 - np.log(var))))
        d_mu = through_psi.mu[0] - self.rho * mu[0]
        d_var = through_psi.var[0] - self.rho * 0.5 * (1.0 - 1.0 / var[0])
        value = float(np.sum(grads.per_dim)) - kl
        return value, np.concatenate([d_mu, d_var * var[0]])


def _warm_start(model: AnyModel, view: ViewRecord, Y_star: np.ndarray, seed: int) -> np.ndarray:
    # Среди равноудалённых обучающих строк побеждает первая в перестановке от seed
    order = np.random.default_rng(seed).permutation(view.Y.shape[0])
    nearest = order[np.argmin(cdist(Y_star, view.Y[order], "sqeuclidean"), axis=1)]
    mu = model.slab.mu[nearest]
    return np.hstack([mu, np.full_like(mu, np.log(WARM_START_VAR))])


def _optimize_point(
    objective: PointObjective,
    y_star: np.ndarray,
    start: np.ndarray,
    config: OptConfig,
) -> tuple[np.ndarray, float]:
    start_value, _ = objective.value_and_gradient(y_star, start)
    if not np.isfinite(start_value):
        raise OptimizationError("частичная граница неконечна в начальной точке")
    if config.max_iters == 0:
        return start, start_value

    failures = 0

    def negative(params: np.ndarray) -> tuple[float, np.ndarray]:
        nonlocal failures
        try:
            with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
                value, grad = objective.value_and_gradient(y_star, params)
        except (NumericalError, HyperparameterError):
            value, grad = np.nan, np.zeros_like(params)
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            failures += 1
            if failures > config.max_failures:
                raise OptimizationError(
                    f"частичная граница неконечна {failures} раз подряд",
                    state={"failures": failures},
                )
            return np.inf, np.zeros_like(params)
        failures = 0
        return -value, -grad

    result = minimize(
        negative,
        start,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": config.max_iters, "gtol": config.gtol, "ftol": config.ftol},
    )
    value = -float(result.fun)
    if not np.isfinite(value) or value < start_value:
        return start, start_value
    return result.x, value


def infer_latent(
    model: AnyModel,
    Y_star: np.ndarray,
    config: OptConfig,
    view: int = 0,
) -> InferenceResult:
    """
    Вывести (μ*, s*) для тестовых точек при замороженных параметрах модели.

    Args:
        model: Обученная модель с подключёнными данными (не изменяется)
        Y_star: Тестовые данные N*×D_c
        config: Настройки оптимизации (max_iters = 0 — только начальное приближение)
        view: Номер вида, по которому заданы тестовые данные

    Returns:
        InferenceResult; ошибки отдельных точек собраны в errors

    Raises:
        ShapeError: Число столбцов не совпадает с D_c или нет такого вида
    """
    if not 0 <= view < len(model.views):
        raise ShapeError(f"вид {view} отсутствует, у модели {len(model.views)} видов")
    record = model.views[view]
    if record.Y is None:
        raise ValueError(f"вид {record.name}: данные не подключены (см. attach_data)")
    Y_star = np.array(Y_star, dtype=float, ndmin=2)
    if Y_star.shape[1] != record.output_dim:
        raise ShapeError(f"тестовые данные имеют {Y_star.shape[1]} столбцов, D_c={record.output_dim}")
    if not np.all(np.isfinite(Y_star)):
        raise ValueError("тестовые данные содержат неконечные значения")

    objective = PointObjective(model, view)
    starts = _warm_start(model, record, Y_star, config.seed)
    input_dim = model.input_dim

    def run(index: int) -> tuple[np.ndarray, float, str | None]:
        try:
            params, value = _optimize_point(objective, Y_star[index], starts[index], config)
            return params, value, None
        except (NumericalError, HyperparameterError, OptimizationError) as e:
            logger.warning(f"⚠️ Точка {index}: вывод не удался ({e})")
            return starts[index], float("nan"), str(e)

    logger.info(f"🚀 Вывод латентных координат: {Y_star.shape[0]} точек, вид {record.name}")
    indices = range(Y_star.shape[0])
    if settings.threads > 1:
        with ThreadPoolExecutor(max_workers=settings.threads) as pool:
            outcomes = list(pool.map(run, indices))
    else:
        outcomes = [run(index) for index in indices]

    params = np.array([outcome[0] for outcome in outcomes]).reshape(-1, 2 * input_dim)
    errors = {index: outcome[2] for index, outcome in enumerate(outcomes) if outcome[2] is not None}
    result = InferenceResult(
        mu=params[:, :input_dim],
        var=np.exp(params[:, input_dim:]),
        objective=np.array([outcome[1] for outcome in outcomes]),
        errors=errors,
    )
    logger.info(f"✅ Вывод завершён, ошибок: {len(errors)}")
    return result


def write_latents_csv(result: InferenceResult, path: str | Path) -> Path:
    """Записать μ* и s* в CSV: по строке на точку, столбцы μ*₁..μ*_Q, s*₁..s*_Q."""
    return write_matrix_csv(np.hstack([result.mu, result.var]), path)

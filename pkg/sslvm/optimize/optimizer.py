"""
Максимизация нижней границы квазиньютоновским методом L-BFGS-B.

Оптимизируется подвектор pack(model), отвечающий активным группам этапа;
координаты остальных групп не меняются.
"""

import numpy as np
from loguru import logger
from scipy.optimize import minimize

from sslvm.bound.elbo import elbo_and_gradients
from sslvm.errors import HyperparameterError, NumericalError, OptimizationError
from sslvm.model.schemas import AnyModel
from sslvm.model.transforms import ParamGroup, group_mask, pack, pack_gradients, unpack
from sslvm.optimize.schemas import OptConfig, StageSpec, TraceRow

WARMUP_ITERS = 50
WARMUP_GROUPS = (ParamGroup.MU, ParamGroup.VAR, ParamGroup.BETA)


def default_schedule(max_iters: int) -> list[StageSpec]:
    """
    Расписание по умолчанию.

    Сначала μ, s и β при замороженных γ = 0.5 (до 50 итераций), затем все параметры.

    Args:
        max_iters: Общий бюджет итераций

    Returns:
        Список этапов (пустой при max_iters = 0)
    """
    if max_iters <= 0:
        return []
    warmup = min(WARMUP_ITERS, max_iters)
    stages = [StageSpec(groups=list(WARMUP_GROUPS), iters=warmup)]
    if max_iters > warmup:
        stages.append(StageSpec(groups=list(ParamGroup), iters=max_iters - warmup))
    return stages


class _StageObjective:
    """
    Целевая функция этапа для scipy: −ELBO и −градиент по активному подвектору.

    Неконечное значение или сбой разложения дают +inf с нулевым градиентом,
    и линейный поиск уменьшает шаг. Больше max_failures таких значений
    подряд приводят к OptimizationError.
    """

    def __init__(self, model: AnyModel, groups: set[ParamGroup], stage: int, max_failures: int):
        self.model = model
        self.groups = groups
        self.stage = stage
        self.max_failures = max_failures
        self.theta = pack(model)
        self.mask = group_mask(model, groups)
        self.failures = 0
        self.last: tuple[bytes, float, float] | None = None

    def x0(self) -> np.ndarray:
        return self.theta[self.mask].copy()

    def build(self, x: np.ndarray) -> AnyModel:
        theta = self.theta.copy()
        theta[self.mask] = x
        return unpack(self.model, theta, self.groups)

    def _fail(self, x: np.ndarray, reason: str) -> tuple[float, np.ndarray]:
        self.failures += 1
        logger.warning(f"⚠️ Этап {self.stage}: шаг отклонён ({reason}), сбоев подряд: {self.failures}")
        if self.failures > self.max_failures:
            raise OptimizationError(
                f"целевая функция неконечна {self.failures} раз подряд",
                state={
                    "stage": self.stage,
                    "failures": self.failures,
                    "reason": reason,
                    "groups": sorted(self.groups),
                    "last_elbo": self.last[1] if self.last else None,
                    "x_abs_max": float(np.max(np.abs(x))) if x.size else 0.0,
                },
            )
        return np.inf, np.zeros_like(x)

    def _evaluate(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        with np.errstate(over="ignore", invalid="ignore", divide="ignore", under="ignore"):
            candidate = self.build(x)
            terms, gradients = elbo_and_gradients(candidate)
            return terms.total, pack_gradients(candidate, gradients)[self.mask]

    def peek(self, x: np.ndarray) -> tuple[float, float]:
        """ELBO и норма градиента в точке x без учёта в счётчике сбоев (nan при сбое)."""
        try:
            value, grad = self._evaluate(x)
        except (NumericalError, HyperparameterError):
            return float("nan"), float("nan")
        return value, float(np.max(np.abs(grad), initial=0.0))

    def __call__(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        try:
            value, grad = self._evaluate(x)
        except (NumericalError, HyperparameterError) as e:
            return self._fail(x, str(e))
        if not np.isfinite(value) or not np.all(np.isfinite(grad)):
            return self._fail(x, "неконечное значение")
        self.failures = 0
        self.last = (x.tobytes(), value, float(np.max(np.abs(grad), initial=0.0)))
        return -value, -grad


def _run_stage(
    model: AnyModel,
    stage_spec: StageSpec,
    stage: int,
    iters: int,
    config: OptConfig,
    trace: list[TraceRow],
) -> AnyModel:
    objective = _StageObjective(model, set(stage_spec.groups), stage, config.max_failures)
    start_elbo = trace[-1].elbo
    start_length = len(trace)
    logger.info(
        f"🚀 Этап {stage}: группы {', '.join(stage_spec.groups)}, итераций {iters}, "
        f"ELBO={start_elbo:.6f}"
    )

    def callback(xk: np.ndarray) -> None:
        if objective.last is not None and objective.last[0] == xk.tobytes():
            value, grad_norm = objective.last[1], objective.last[2]
        else:
            value, grad_norm = objective.peek(xk)
        trace.append(
            TraceRow(iteration=trace[-1].iteration + 1, elbo=value, grad_norm=grad_norm, stage=stage)
        )
        logger.debug(f"📈 Итерация {trace[-1].iteration}: ELBO={value:.6f}")

    result = minimize(
        objective,
        objective.x0(),
        jac=True,
        method="L-BFGS-B",
        callback=callback,
        options={"maxiter": iters, "gtol": config.gtol, "ftol": config.ftol},
    )
    candidate = objective.build(result.x)
    final_elbo = -float(result.fun)
    if not np.isfinite(final_elbo) or final_elbo < start_elbo:
        logger.warning(f"⚠️ Этап {stage}: ELBO не улучшилась, параметры этапа не приняты")
        del trace[start_length:]
        return model
    logger.info(f"✅ Этап {stage} завершён: ELBO={final_elbo:.6f} ({result.message})")
    return candidate


def fit(model: AnyModel, config: OptConfig) -> tuple[AnyModel, list[TraceRow]]:
    """
    Максимизировать нижнюю границу по параметрам модели.

    Args:
        model: Начальная модель с подключёнными данными (не изменяется)
        config: Настройки оптимизации

    Returns:
        (улучшенная модель, журнал итераций). При max_iters = 0 возвращается
        исходная модель и пустой журнал.

    Raises:
        OptimizationError: Целевая функция устойчиво неконечна
    """
    if config.max_iters == 0:
        return model, []

    stages = config.stage_schedule or default_schedule(config.max_iters)
    start, gradients = elbo_and_gradients(model)
    start_grad_norm = float(np.max(np.abs(pack_gradients(model, gradients))))
    if not np.isfinite(start.total):
        raise OptimizationError(
            "нижняя граница неконечна в начальной точке",
            state={"stage": 0, "elbo": start.total},
        )
    trace = [TraceRow(iteration=0, elbo=start.total, grad_norm=start_grad_norm, stage=0)]

    remaining = config.max_iters
    for stage, stage_spec in enumerate(stages, start=1):
        iters = min(stage_spec.iters, remaining)
        if iters <= 0:
            break
        model = _run_stage(model, stage_spec, stage, iters, config, trace)
        remaining -= iters

    logger.info(f"✅ Оптимизация завершена: ELBO {start.total:.6f} → {trace[-1].elbo:.6f}")
    return model, trace

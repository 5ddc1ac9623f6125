"""
Команды CLI: synth, train, infer, eval.
"""

import os
import tempfile
from pathlib import Path

import numpy as np
from loguru import logger

from sslvm.bound.elbo import elbo
from sslvm.cli.schemas import DataOptions, EvalOptions, InferOptions, SynthOptions, TrainOptions
from sslvm.data.csv_io import load_labels_csv, load_matrix_csv, write_matrix_csv
from sslvm.data.normalization import apply_normalization, replicate_columns
from sslvm.data.synthetic import generate_synthetic
from sslvm.errors import ShapeError
from sslvm.evaluation.metrics import (
    classification_accuracy,
    mean_average_precision,
    mean_precision_recall_curve,
    nn_classify,
    rank_by_distance,
    relevance_from_labels,
)
from sslvm.evaluation.recovery import signal_recovery_report
from sslvm.evaluation.schemas import ClassificationReport, EvalMode, RetrievalReport, ViewSelection
from sslvm.evaluation.selection import (
    lengthscale_threshold_reproduces,
    select_dims_by_gamma,
    shared_dims,
)
from sslvm.inference.latent import infer_latent, write_latents_csv
from sslvm.model.initialization import init_model, init_mrd_model
from sslvm.model.repository import attach_data, load, save
from sslvm.model.schemas import AnyModel, MRDModel
from sslvm.optimize.optimizer import fit
from sslvm.optimize.schemas import OptConfig
from sslvm.optimize.trace import write_trace_csv


def cmd_synth(options: SynthOptions) -> list[Path]:
    """
    Записать синтетический набор: latents, view1, view2, mixing1, mixing2.

    Файлы сначала пишутся во временный каталог внутри out_dir и только
    затем переносятся, поэтому при ошибке записи файлов не остаётся.
    """
    out_dir = Path(options.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = generate_synthetic(options.seed)
    matrices = {
        "latents.csv": dataset.latents,
        "view1.csv": dataset.view1,
        "view2.csv": dataset.view2,
        "mixing1.csv": dataset.mixing1,
        "mixing2.csv": dataset.mixing2,
    }
    with tempfile.TemporaryDirectory(dir=out_dir) as staging:
        for name, matrix in matrices.items():
            write_matrix_csv(matrix, Path(staging) / name)
        written = []
        for name in matrices:
            os.replace(Path(staging) / name, out_dir / name)
            written.append(out_dir / name)
    print(f"✅ Синтетический набор (seed={options.seed}) записан в {out_dir}")
    return written


def _load_views(paths: list[str], options: DataOptions) -> list[np.ndarray]:
    """Прочитать виды с нормализацией и повторением столбцов."""
    factors = options.replication(len(paths))
    views = []
    for path, factor in zip(paths, factors, strict=True):
        matrix, _ = load_matrix_csv(path, normalize=options.normalize, header=options.header)
        views.append(replicate_columns(matrix, factor))
    return views


def _print_summary(model: AnyModel) -> None:
    print(f"ELBO: {elbo(model).total:.6f}")
    for index, view in enumerate(model.views):
        gamma = ", ".join(f"{value:.4f}" for value in model.gamma_matrix[index])
        print(f"{view.name} γ: [{gamma}]")
        if view.kernel.lengthscales is not None:
            ell = ", ".join(f"{value:.4f}" for value in view.kernel.lengthscales)
            print(f"{view.name} ℓ: [{ell}]")


def cmd_train(options: TrainOptions) -> AnyModel:
    """Обучить SSGP-LVM (один файл данных) или SSMRD (несколько) и записать чекпоинт."""
    views = _load_views(options.data, options)
    labels = load_labels_csv(options.labels, header=options.header) if options.labels else None
    init_args = {
        "input_dim": options.q,
        "num_inducing": options.m,
        "kernel_family": options.kernel,
        "init_strategy": options.init,
        "seed": options.seed,
        "labels": labels,
    }
    if len(views) == 1:
        model = init_model(views[0], **init_args)
    else:
        names = [Path(path).stem for path in options.data]
        model = init_mrd_model(views, names=names, **init_args)

    model, trace = fit(model, OptConfig(max_iters=options.iters, seed=options.seed))
    save(model, options.checkpoint)
    if options.trace:
        write_trace_csv(trace, options.trace)
    print(f"✅ Чекпоинт записан: {options.checkpoint}")
    _print_summary(model)
    return model


def cmd_infer(options: InferOptions) -> Path:
    """Вывести μ*, s* тестовых точек по одному виду и записать их в CSV."""
    model = load(options.checkpoint)
    factors = options.replication(len(options.train_data))
    train_views = []
    stats = None
    for index, (path, factor) in enumerate(zip(options.train_data, factors, strict=True)):
        matrix, view_stats = load_matrix_csv(path, normalize=options.normalize, header=options.header)
        if index == options.view:
            stats = view_stats
        train_views.append(replicate_columns(matrix, factor))
    model = attach_data(model, train_views)
    if options.view >= len(model.views):
        raise ShapeError(f"вид {options.view} отсутствует, у модели {len(model.views)} видов")

    Y_star, _ = load_matrix_csv(options.data, header=options.header)
    if stats is not None:
        Y_star = apply_normalization(Y_star, stats)
    Y_star = replicate_columns(Y_star, factors[options.view])

    result = infer_latent(model, Y_star, OptConfig(max_iters=options.iters, seed=options.seed), options.view)
    for index, message in sorted(result.errors.items()):
        print(f"⚠️ Точка {index}: {message}")
    path = write_latents_csv(result, options.out)
    print(f"✅ Латентные координаты записаны: {path}")
    return path


def _view_gamma(model: AnyModel, view: int) -> np.ndarray:
    if view >= len(model.views):
        raise ShapeError(f"вид {view} отсутствует, у модели {len(model.views)} видов")
    return model.gamma_matrix[view]


def _read_latents(path: str, input_dim: int, header: bool) -> np.ndarray:
    """Средние μ* из CSV команды infer (первые Q столбцов) или матрица N×Q."""
    matrix, _ = load_matrix_csv(path, header=header)
    if matrix.shape[1] < input_dim:
        raise ShapeError(f"в {path} {matrix.shape[1]} столбцов, нужно не меньше Q={input_dim}")
    return matrix[:, :input_dim]


def _require(value: str | None, flag: str, mode: EvalMode) -> str:
    if value is None:
        raise ValueError(f"режим {mode} требует {flag}")
    return value


def _eval_classify(model: AnyModel, options: EvalOptions) -> ClassificationReport:
    dims = select_dims_by_gamma(_view_gamma(model, options.view), options.threshold)
    if dims.size == 0:
        raise ValueError(f"нет измерений с γ ≥ {options.threshold}")
    train_labels = load_labels_csv(_require(options.labels, "--labels", options.mode), options.header)
    if options.test_latents is None:
        test_latents, test_labels = model.slab.mu, train_labels
    else:
        test_latents = _read_latents(options.test_latents, model.input_dim, options.header)
        test_labels = load_labels_csv(
            _require(options.test_labels, "--test-labels", options.mode), options.header
        )
    predicted = nn_classify(model.slab.mu[:, dims], train_labels, test_latents[:, dims])
    return ClassificationReport(
        accuracy=classification_accuracy(predicted, test_labels),
        num_test=len(test_labels),
        dims=dims.tolist(),
    )


def _eval_retrieve(model: AnyModel, options: EvalOptions) -> RetrievalReport:
    if isinstance(model, MRDModel):
        dims = shared_dims(model.gamma_matrix, options.threshold)
    else:
        dims = select_dims_by_gamma(model.posterior.gamma, options.threshold)
    if dims.size == 0:
        raise ValueError(f"нет общих измерений с γ ≥ {options.threshold}")
    queries = _read_latents(_require(options.queries, "--queries", options.mode), model.input_dim, options.header)
    gallery = model.slab.mu
    if options.test_labels is not None:
        gallery_labels = load_labels_csv(_require(options.labels, "--labels", options.mode), options.header)
        relevance = relevance_from_labels(load_labels_csv(options.test_labels, options.header), gallery_labels)
    else:
        if queries.shape[0] > gallery.shape[0]:
            raise ShapeError("без меток запрос i сопоставляется элементу i: запросов больше, чем элементов")
        relevance = np.eye(queries.shape[0], gallery.shape[0], dtype=bool)
    if relevance.shape != (queries.shape[0], gallery.shape[0]):
        raise ShapeError(f"релевантность {relevance.shape} не согласована с запросами и галереей")

    rankings = rank_by_distance(queries[:, dims], gallery[:, dims])
    score = mean_average_precision(rankings, relevance)
    if options.curve:
        write_matrix_csv(mean_precision_recall_curve(rankings, relevance), options.curve)
    return RetrievalReport(
        mean_average_precision=score,
        num_queries=int(np.sum(relevance.any(axis=1))),
        num_skipped=int(np.sum(~relevance.any(axis=1))),
        dims=dims.tolist(),
    )


def _eval_recovery(model: AnyModel, options: EvalOptions) -> dict:
    truth, _ = load_matrix_csv(_require(options.truth, "--truth", options.mode), header=options.header)
    report = signal_recovery_report(model.slab.mu, truth)
    selections = []
    for index, view in enumerate(model.views):
        gamma = model.gamma_matrix[index]
        selected = select_dims_by_gamma(gamma, options.threshold)
        reproduces = None
        if view.kernel.lengthscales is not None:
            reproduces = lengthscale_threshold_reproduces(selected, view.kernel.ell)
            if not reproduces:
                logger.info(f"📊 {view.name}: порог по ℓ не даёт выбор измерений по γ")
        selections.append(
            ViewSelection(
                name=view.name,
                gamma=gamma.tolist(),
                selected=selected.tolist(),
                lengthscales=view.kernel.lengthscales,
                lengthscale_reproduces=reproduces,
            )
        )
    return {
        "recovery": report.model_dump(),
        "views": [selection.model_dump() for selection in selections],
    }


def cmd_eval(options: EvalOptions) -> dict:
    """Посчитать метрики в режиме classify, retrieve или recovery."""
    model = load(options.checkpoint)
    match options.mode:
        case EvalMode.CLASSIFY:
            report = _eval_classify(model, options).model_dump()
        case EvalMode.RETRIEVE:
            report = _eval_retrieve(model, options).model_dump()
        case EvalMode.RECOVERY:
            report = _eval_recovery(model, options)
    report["mode"] = str(options.mode)
    return report


def report_row(report: dict) -> np.ndarray:
    """
    Числовая сводка отчёта eval для --format csv.

    classify: accuracy, num_test; retrieve: mAP, num_queries, num_skipped;
    recovery: |корреляция| по каждому истинному сигналу.
    """
    match EvalMode(report["mode"]):
        case EvalMode.CLASSIFY:
            values = [report["accuracy"], report["num_test"]]
        case EvalMode.RETRIEVE:
            values = [report["mean_average_precision"], report["num_queries"], report["num_skipped"]]
        case EvalMode.RECOVERY:
            values = report["recovery"]["scores"]
    return np.array(values, dtype=float)

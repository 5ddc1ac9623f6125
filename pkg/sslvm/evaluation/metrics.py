"""
Классификация ближайшим соседом, ранжирование и метрики поиска.
"""

import numpy as np
from loguru import logger
from scipy.spatial.distance import cdist

from sslvm.errors import ShapeError


def _as_latents(latents: np.ndarray) -> np.ndarray:
    latents = np.asarray(latents, dtype=float)
    return latents.reshape(-1, 1) if latents.ndim == 1 else latents


def nn_classify(
    train_latents: np.ndarray,
    train_labels: np.ndarray,
    test_latents: np.ndarray,
) -> np.ndarray:
    """
    Классификатор 1-NN по евклидову расстоянию.

    При равных расстояниях выбирается обучающая точка с меньшим номером.

    Args:
        train_latents: N×|S|
        train_labels: Метки длины N
        test_latents: N*×|S|

    Returns:
        Предсказанные метки длины N*
    """
    train_latents = _as_latents(train_latents)
    test_latents = _as_latents(test_latents)
    train_labels = np.asarray(train_labels)
    if train_labels.shape[0] != train_latents.shape[0]:
        raise ShapeError(f"число меток {train_labels.shape[0]} не равно N={train_latents.shape[0]}")
    if train_latents.shape[1] != test_latents.shape[1]:
        raise ShapeError("число измерений обучающих и тестовых точек различается")
    nearest = np.argmin(cdist(test_latents, train_latents), axis=1)
    return train_labels[nearest]


def classification_accuracy(predicted: np.ndarray, truth: np.ndarray) -> float:
    """Доля совпавших меток."""
    predicted = np.asarray(predicted)
    truth = np.asarray(truth)
    if predicted.shape != truth.shape:
        raise ShapeError(f"формы предсказаний {predicted.shape} и меток {truth.shape} различаются")
    return float(np.mean(predicted == truth)) if truth.size else 0.0


def rank_by_distance(query_latents: np.ndarray, gallery_latents: np.ndarray) -> np.ndarray:
    """
    Номера элементов галереи по возрастанию расстояния для каждого запроса.

    Сортировка устойчивая: при равных расстояниях меньший номер раньше.

    Returns:
        Матрица Q×G
    """
    distances = cdist(_as_latents(query_latents), _as_latents(gallery_latents))
    return np.argsort(distances, axis=1, kind="stable")


def relevance_from_labels(query_labels: np.ndarray, gallery_labels: np.ndarray) -> np.ndarray:
    """Матрица релевантности Q×G: метки запроса и элемента совпадают."""
    return np.asarray(query_labels)[:, None] == np.asarray(gallery_labels)[None, :]


def average_precision(relevance_in_rank_order: np.ndarray) -> float:
    """
    Неинтерполированная средняя точность.

    Среднее по позициям k релевантных элементов величины (число релевантных в топ-k)/k.

    Raises:
        ValueError: Нет ни одного релевантного элемента
    """
    relevant = np.asarray(relevance_in_rank_order).astype(bool).ravel()
    positions = np.flatnonzero(relevant)
    if positions.size == 0:
        raise ValueError("нет релевантных элементов")
    hits = np.arange(1, positions.size + 1)
    return float(np.mean(hits / (positions + 1)))


def _ranked_relevance(rankings: np.ndarray, relevance: np.ndarray) -> np.ndarray:
    rankings = np.atleast_2d(np.asarray(rankings, dtype=int))
    relevance = np.atleast_2d(np.asarray(relevance, dtype=bool))
    if rankings.shape != relevance.shape:
        raise ShapeError(f"формы ранжирований {rankings.shape} и релевантности {relevance.shape} различаются")
    return np.take_along_axis(relevance, rankings, axis=1)


def _queries_with_relevant(ranked: np.ndarray) -> np.ndarray:
    keep = ranked.any(axis=1)
    skipped = int(np.sum(~keep))
    if skipped:
        logger.warning(f"⚠️ {skipped} запросов без релевантных элементов исключены")
    return keep


def mean_average_precision(rankings: np.ndarray, relevance: np.ndarray) -> float:
    """
    mAP по запросам.

    Args:
        rankings: Номера элементов галереи в порядке выдачи (Q×G)
        relevance: Релевантность элементов в порядке их номеров (Q×G)

    Returns:
        Среднее AP по запросам, у которых есть релевантные элементы
    """
    ranked = _ranked_relevance(rankings, relevance)
    keep = _queries_with_relevant(ranked)
    if not keep.any():
        raise ValueError("ни у одного запроса нет релевантных элементов")
    return float(np.mean([average_precision(row) for row in ranked[keep]]))


def precision_recall_curve(ranking: np.ndarray, relevance: np.ndarray) -> np.ndarray:
    """
    Точки (recall, precision) для каждой позиции выдачи одного запроса.

    Args:
        ranking: Номера элементов галереи в порядке выдачи (G)
        relevance: Релевантность элементов в порядке их номеров (G)

    Returns:
        Массив G×2 со столбцами recall, precision
    """
    ranked = _ranked_relevance(ranking, relevance)[0]
    total = int(np.sum(ranked))
    if total == 0:
        raise ValueError("нет релевантных элементов")
    hits = np.cumsum(ranked)
    positions = np.arange(1, ranked.shape[0] + 1)
    return np.column_stack([hits / total, hits / positions])


def mean_precision_recall_curve(rankings: np.ndarray, relevance: np.ndarray) -> np.ndarray:
    """Поточечное среднее кривых precision_recall_curve по запросам с релевантными элементами."""
    ranked = _ranked_relevance(rankings, relevance)
    keep = _queries_with_relevant(ranked)
    if not keep.any():
        raise ValueError("ни у одного запроса нет релевантных элементов")
    identity = np.arange(ranked.shape[1])
    curves = [precision_recall_curve(identity, row) for row in ranked[keep]]
    return np.mean(curves, axis=0)

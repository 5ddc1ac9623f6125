"""
Синтетические данные: три сигнала и два вида, смешивающие по два из них.
"""

import numpy as np

from sslvm.data.schemas import SyntheticDataset

NUM_SAMPLES = 50
VIEW_DIM = 12


def latent_signals(grid: np.ndarray) -> np.ndarray:
    """Сигналы sin(x), −exp(−cos(2x)), cos(x) без нормировки (столбцы)."""
    return np.column_stack([np.sin(grid), -np.exp(-np.cos(2.0 * grid)), np.cos(grid)])


def generate_synthetic(seed: int = 0, num_samples: int = NUM_SAMPLES) -> SyntheticDataset:
    """
    Сгенерировать синтетический набор.

    Сигналы берутся в num_samples равноотстоящих точках [0, 2π] (включая концы)
    и нормируются к нулевому среднему и единичной дисперсии. Вид 1 смешивает
    сигналы 1 и 3, вид 2 — сигналы 2 и 3; матрицы смешивания 12×2 ~ N(0, 1).

    Args:
        seed: Зерно генератора
        num_samples: Число точек

    Returns:
        SyntheticDataset
    """
    rng = np.random.default_rng(seed)
    grid = np.linspace(0.0, 2.0 * np.pi, num_samples)
    signals = latent_signals(grid)
    latents = (signals - signals.mean(axis=0)) / signals.std(axis=0)
    mixing1 = rng.standard_normal((VIEW_DIM, 2))
    mixing2 = rng.standard_normal((VIEW_DIM, 2))
    return SyntheticDataset(
        latents=latents,
        view1=latents[:, [0, 2]] @ mixing1.T,
        view2=latents[:, [1, 2]] @ mixing2.T,
        mixing1=mixing1,
        mixing2=mixing2,
        grid=grid,
    )

"""
Разбиение суммы по точкам данных на блоки строк.

Границы блоков не зависят от числа потоков, а частичные суммы
складываются в порядке возрастания номера блока.
"""

from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

from sslvm.config import settings

TBlock = TypeVar("TBlock")

# Ограничение на число элементов промежуточного тензора блока
MAX_BLOCK_ELEMENTS = 2_000_000


def row_blocks(num_rows: int, row_size: int) -> Iterator[slice]:
    """
    Последовательные срезы строк.

    Args:
        num_rows: Число строк N
        row_size: Размер промежуточных данных на одну строку
    """
    step = max(1, MAX_BLOCK_ELEMENTS // max(1, row_size))
    for start in range(0, num_rows, step):
        yield slice(start, min(num_rows, start + step))


def map_row_blocks(
    fn: Callable[[slice], TBlock],
    num_rows: int,
    row_size: int,
) -> list[TBlock]:
    """
    Применить fn к каждому блоку строк, сохранив порядок блоков.

    При settings.threads > 1 блоки считаются в пуле потоков.
    """
    blocks = list(row_blocks(num_rows, row_size))
    if settings.threads <= 1 or len(blocks) == 1:
        return [fn(block) for block in blocks]
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        return list(pool.map(fn, blocks))

"""
Чтение и запись числовых матриц и меток в CSV (через запятую, UTF-8).
"""

import csv
import io
from pathlib import Path

import numpy as np

from sslvm.data.normalization import normalize_columns
from sslvm.data.schemas import Normalization
from sslvm.errors import DataFormatError


def _read_rows(path: Path, header: bool) -> list[tuple[int, list[str]]]:
    rows = []
    with path.open(newline="", encoding="utf-8") as file:
        reader = csv.reader(file)
        for index, row in enumerate(reader):
            if header and index == 0:
                continue
            if not row or all(not cell.strip() for cell in row):
                continue
            rows.append((reader.line_num, row))
    if not rows:
        raise DataFormatError(f"файл {path} не содержит данных")
    return rows


def load_matrix_csv(
    path: str | Path,
    normalize: bool = False,
    header: bool = False,
) -> tuple[np.ndarray, Normalization | None]:
    """
    Прочитать прямоугольную матрицу конечных чисел.

    Args:
        path: Путь к CSV
        normalize: Стандартизировать столбцы
        header: Пропустить первую строку

    Returns:
        (матрица, статистики нормализации или None)

    Raises:
        DataFormatError: Пустой файл, строки разной длины, нечисловые или неконечные ячейки
    """
    path = Path(path)
    rows = _read_rows(path, header)
    num_cols = len(rows[0][1])
    matrix = np.empty((len(rows), num_cols))
    for row_index, (line, row) in enumerate(rows):
        if len(row) != num_cols:
            raise DataFormatError(f"ожидалось {num_cols} столбцов, получено {len(row)}", row=line)
        for col_index, cell in enumerate(row):
            try:
                value = float(cell.strip())
            except ValueError:
                raise DataFormatError(f"нечисловое значение {cell!r}", row=line, column=col_index + 1) from None
            if not np.isfinite(value):
                raise DataFormatError(f"неконечное значение {cell!r}", row=line, column=col_index + 1)
            matrix[row_index, col_index] = value

    if not normalize:
        return matrix, None
    return normalize_columns(matrix)


def format_matrix_csv(matrix: np.ndarray) -> str:
    """Строки CSV без заголовка с точностью, достаточной для точного чтения."""
    buffer = io.StringIO()
    np.savetxt(buffer, np.atleast_2d(matrix), delimiter=",", fmt="%.17g")
    return buffer.getvalue()


def write_matrix_csv(matrix: np.ndarray, path: str | Path) -> Path:
    """Записать матрицу в файл, см. format_matrix_csv."""
    path = Path(path)
    path.write_text(format_matrix_csv(matrix), encoding="utf-8")
    return path


def load_labels_csv(path: str | Path, header: bool = False) -> np.ndarray:
    """
    Прочитать метки: первое поле каждой строки.

    Returns:
        Массив строк длины N
    """
    rows = _read_rows(Path(path), header)
    return np.array([row[0].strip() for _, row in rows])

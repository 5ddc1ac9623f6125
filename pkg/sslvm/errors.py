"""
Иерархия исключений sslvm.
"""

from typing import Any


class SSLVMError(Exception):
    """Базовое исключение пакета."""


class ShapeError(SSLVMError, ValueError):
    """Несовпадение размерностей массивов."""


class HyperparameterError(SSLVMError, ValueError):
    """Недопустимое значение гиперпараметра (неположительная дисперсия и т.п.)."""


class NumericalError(SSLVMError, ArithmeticError):
    """
    Разложение Холецкого не удалось даже после наращивания jitter.

    Attributes:
        matrix_name: Имя матрицы, на которой произошёл сбой
    """

    def __init__(self, matrix_name: str, message: str) -> None:
        super().__init__(f"{matrix_name}: {message}")
        self.matrix_name = matrix_name


class OptimizationError(SSLVMError, RuntimeError):
    """
    Оптимизация не может продолжаться (устойчиво неконечная целевая функция).

    Attributes:
        state: Диагностическое состояние на момент сбоя
    """

    def __init__(self, message: str, state: dict[str, Any] | None = None) -> None:
        super().__init__(message)
        self.state = state or {}


class CheckpointError(SSLVMError, ValueError):
    """Повреждённый или усечённый файл чекпоинта."""


class UnsupportedVersionError(CheckpointError):
    """Версия формата чекпоинта не поддерживается."""


class DataFormatError(SSLVMError, ValueError):
    """
    Ошибка формата CSV.

    Attributes:
        row: Номер строки (с 1) или None
        column: Номер столбца (с 1) или None
    """

    def __init__(self, message: str, row: int | None = None, column: int | None = None) -> None:
        location = ""
        if row is not None:
            location = f" (строка {row}" + (f", столбец {column})" if column is not None else ")")
        super().__init__(f"{message}{location}")
        self.row = row
        self.column = column

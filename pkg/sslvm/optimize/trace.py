"""
Запись журнала оптимизации в CSV.
"""

import csv
from pathlib import Path

from sslvm.optimize.schemas import TraceRow

TRACE_COLUMNS = ("iter", "elbo", "grad_norm")


def write_trace_csv(rows: list[TraceRow], path: str | Path) -> Path:
    """
    Записать журнал в CSV с заголовком iter,elbo,grad_norm.

    Args:
        rows: Строки журнала
        path: Путь к файлу

    Returns:
        Путь к файлу
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file)
        writer.writerow(TRACE_COLUMNS)
        for row in rows:
            writer.writerow([row.iteration, repr(row.elbo), repr(row.grad_norm)])
    return path

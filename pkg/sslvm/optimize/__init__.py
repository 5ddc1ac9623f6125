"""
Модуль оптимизации нижней границы.
"""

from sslvm.optimize.optimizer import default_schedule, fit
from sslvm.optimize.schemas import OptConfig, StageSpec, TraceRow
from sslvm.optimize.trace import write_trace_csv

__all__ = ["OptConfig", "StageSpec", "TraceRow", "default_schedule", "fit", "write_trace_csv"]

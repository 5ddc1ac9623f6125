"""
Модуль вывода латентных координат новых точек.
"""

from sslvm.inference.latent import PointObjective, infer_latent, write_latents_csv
from sslvm.inference.schemas import InferenceResult

__all__ = ["InferenceResult", "PointObjective", "infer_latent", "write_latents_csv"]

"""
Модуль данных: синтетический набор, CSV и нормализация.
"""

from sslvm.data.csv_io import format_matrix_csv, load_labels_csv, load_matrix_csv, write_matrix_csv
from sslvm.data.normalization import apply_normalization, normalize_columns, replicate_columns
from sslvm.data.schemas import Normalization, SyntheticDataset
from sslvm.data.synthetic import generate_synthetic, latent_signals

__all__ = [
    "Normalization",
    "SyntheticDataset",
    "apply_normalization",
    "format_matrix_csv",
    "generate_synthetic",
    "latent_signals",
    "load_labels_csv",
    "load_matrix_csv",
    "normalize_columns",
    "replicate_columns",
    "write_matrix_csv",
]

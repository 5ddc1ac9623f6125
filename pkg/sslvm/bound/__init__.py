"""
Модуль нижней границы (ELBO).
"""

from sslvm.bound.elbo import (
    data_term,
    data_term_gradients,
    data_terms,
    elbo,
    elbo_and_gradients,
    elbo_gradients,
)
from sslvm.bound.schemas import BoundTerms, GradientSet, ViewGradients

__all__ = [
    "BoundTerms",
    "GradientSet",
    "ViewGradients",
    "data_term",
    "data_term_gradients",
    "data_terms",
    "elbo",
    "elbo_and_gradients",
    "elbo_gradients",
]

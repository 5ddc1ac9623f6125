"""
Модуль ψ-статистик.
"""

from sslvm.psi.expquad import psi_expquad
from sslvm.psi.linear import psi_linear
from sslvm.psi.schemas import PsiGradients, PsiStats
from sslvm.psi.statistics import psi_gradients, psi_stats

__all__ = ["PsiGradients", "PsiStats", "psi_expquad", "psi_gradients", "psi_linear", "psi_stats"]

"""
Нижняя граница логарифма маргинального правдоподобия и её градиенты.

Все определители и обращения — через множители Холецкого K_uu и βΨ₂ + K_uu,
общие для всех выходных измерений d.
"""

from typing import NamedTuple

import numpy as np
from scipy import linalg

from sslvm.bound.schemas import BoundTerms, GradientSet, ViewGradients
from sslvm.errors import HyperparameterError, ShapeError
from sslvm.kernels.covariance import jittered_cholesky, kernel_matrix, kernel_matrix_gradients
from sslvm.model.schemas import AnyModel, SSGPLVMModel
from sslvm.psi.schemas import PsiStats
from sslvm.psi.statistics import psi_gradients, psi_stats
from sslvm.variational.divergence import kl_gradients, kl_mrd, kl_spike_slab

LOG_2PI = np.log(2.0 * np.pi)


class Factorization(NamedTuple):
    """Множители Холецкого, общие для всех d."""

    L_K: np.ndarray
    L_A: np.ndarray
    jitter: float


class DataTermGradients(NamedTuple):
    """Градиенты Σ_d F̃_d по ψ-статистикам, K_uu и β."""

    per_dim: np.ndarray
    d_psi0: float
    d_psi1: np.ndarray
    d_psi2: np.ndarray
    d_Kuu: np.ndarray
    d_beta: float


def factorize(psi: PsiStats, Kuu: np.ndarray, beta: float) -> Factorization:
    """
    Разложить K_uu (с jitter) и βΨ₂ + K_uu.

    Raises:
        NumericalError: Разложение не удалось после наращивания jitter
    """
    L_K, jitter = jittered_cholesky(Kuu, "K_uu")
    K = Kuu + jitter * np.mean(np.diag(Kuu)) * np.eye(Kuu.shape[0]) if jitter else Kuu
    L_A, _ = jittered_cholesky(beta * psi.psi2 + K, "beta*Psi2+K_uu", always_jitter=False)
    return Factorization(L_K=L_K, L_A=L_A, jitter=jitter)


def _check_data(Y: np.ndarray, psi: PsiStats, Kuu: np.ndarray, beta: float) -> np.ndarray:
    Y = np.asarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    if Y.shape[0] != psi.psi1.shape[0]:
        raise ShapeError(f"Y имеет {Y.shape[0]} строк, Ψ₁ — {psi.psi1.shape[0]}")
    if Kuu.shape != psi.psi2.shape:
        raise ShapeError(f"форма K_uu {Kuu.shape} не совпадает с Ψ₂ {psi.psi2.shape}")
    if not np.isfinite(beta) or beta <= 0:
        raise HyperparameterError(f"beta должна быть положительной, получено {beta}")
    return Y


def data_terms(
    Y: np.ndarray,
    psi: PsiStats,
    Kuu: np.ndarray,
    beta: float,
    factors: Factorization | None = None,
) -> np.ndarray:
    """
    Значения F̃_d для всех столбцов Y при общих разложениях.

    Args:
        Y: Данные N×D
        psi: ψ-статистики
        Kuu: K(Z, Z)
        beta: Точность шума
        factors: Готовые разложения (иначе считаются)

    Returns:
        Вектор F̃_d длины D
    """
    Y = _check_data(Y, psi, Kuu, beta)
    factors = factors or factorize(psi, Kuu, beta)
    num_data = Y.shape[0]

    logdet_K = 2.0 * np.sum(np.log(np.diag(factors.L_K)))
    logdet_A = 2.0 * np.sum(np.log(np.diag(factors.L_A)))
    # y_dᵀ W y_d = β yᵀy − β² ‖L_A⁻¹ Ψ₁ᵀ y‖²
    projected = linalg.solve_triangular(factors.L_A, psi.psi1.T @ Y, lower=True)
    quad = beta * np.sum(Y**2, axis=0) - beta**2 * np.sum(projected**2, axis=0)
    half_solved = linalg.solve_triangular(factors.L_K, psi.psi2, lower=True)
    trace_term = np.trace(linalg.solve_triangular(factors.L_K, half_solved.T, lower=True))

    constant = (
        0.5 * num_data * (np.log(beta) - LOG_2PI)
        + 0.5 * logdet_K
        - 0.5 * logdet_A
        - 0.5 * beta * psi.psi0
        + 0.5 * beta * trace_term
    )
    return constant - 0.5 * quad


def data_term(Y_d: np.ndarray, psi: PsiStats, Kuu: np.ndarray, beta: float) -> float:
    """
    F̃_d для одного выходного измерения.

    Args:
        Y_d: Столбец данных длины N
        psi: ψ-статистики
        Kuu: K(Z, Z)
        beta: Точность шума

    Returns:
        F̃_d
    """
    return float(data_terms(np.asarray(Y_d, dtype=float).reshape(-1, 1), psi, Kuu, beta)[0])


def data_term_gradients(
    Y: np.ndarray,
    psi: PsiStats,
    Kuu: np.ndarray,
    beta: float,
) -> DataTermGradients:
    """
    Σ_d F̃_d и градиенты по ψ₀, Ψ₁, Ψ₂, K_uu (без jitter) и β.

    Jitter c·mean(diag K_uu) учтён в ∂/∂K_uu по цепному правилу.
    """
    Y = _check_data(Y, psi, Kuu, beta)
    factors = factorize(psi, Kuu, beta)
    per_dim = data_terms(Y, psi, Kuu, beta, factors)
    num_data, output_dim = Y.shape
    identity = np.eye(Kuu.shape[0])

    A_inv = linalg.cho_solve((factors.L_A, True), identity)
    K_inv = linalg.cho_solve((factors.L_K, True), identity)
    P = psi.psi1.T @ Y  # M×D
    A_inv_P = A_inv @ P
    E = A_inv_P @ A_inv_P.T

    d_psi0 = -0.5 * output_dim * beta
    d_psi1 = beta**2 * Y @ A_inv_P.T
    d_psi2 = 0.5 * output_dim * beta * (K_inv - A_inv) - 0.5 * beta**3 * E
    K_inv_psi2_K_inv = K_inv @ psi.psi2 @ K_inv
    d_K = (
        0.5 * output_dim * (K_inv - A_inv)
        - 0.5 * output_dim * beta * K_inv_psi2_K_inv
        - 0.5 * beta**2 * E
    )
    if factors.jitter:
        d_K = d_K + factors.jitter * np.trace(d_K) / Kuu.shape[0] * identity

    d_beta = (
        0.5 * output_dim * num_data / beta
        - 0.5 * output_dim * np.sum(A_inv * psi.psi2)
        - 0.5 * output_dim * psi.psi0
        + 0.5 * output_dim * np.sum(K_inv * psi.psi2)
        - 0.5 * np.sum(Y**2)
        + beta * np.sum(P * A_inv_P)
        - 0.5 * beta**2 * np.sum(E * psi.psi2)
    )
    return DataTermGradients(
        per_dim=per_dim,
        d_psi0=d_psi0,
        d_psi1=d_psi1,
        d_psi2=d_psi2,
        d_Kuu=d_K,
        d_beta=float(d_beta),
    )


def _require_data(model: AnyModel) -> None:
    for view in model.views:
        if view.Y is None:
            raise ValueError(f"вид {view.name}: данные не подключены (см. attach_data)")


def _kl(model: AnyModel) -> float:
    if isinstance(model, SSGPLVMModel):
        return kl_spike_slab(model.posterior, model.prior)
    return kl_mrd(model.posterior, model.switches, model.prior)


def elbo(model: AnyModel) -> BoundTerms:
    """
    Нижняя граница Σ_c Σ_d F̃_d^(c) − KL.

    Args:
        model: SSGPLVMModel или MRDModel с подключёнными данными

    Returns:
        BoundTerms
    """
    _require_data(model)
    gamma = model.gamma_matrix
    per_dim = []
    for index, view in enumerate(model.views):
        psi = psi_stats(view.kernel, model.slab, gamma[index], view.Z)
        Kuu = kernel_matrix(view.kernel, view.Z)
        per_dim.append(data_terms(view.Y, psi, Kuu, view.beta))
    per_dim = np.concatenate(per_dim)
    data_total = float(np.sum(per_dim))
    kl_total = _kl(model)
    return BoundTerms(
        data_term=data_total,
        kl_term=kl_total,
        total=data_total - kl_total,
        per_dim=per_dim,
    )


def elbo_and_gradients(model: AnyModel) -> tuple[BoundTerms, GradientSet]:
    """
    Нижняя граница и её аналитические градиенты по всем параметрам.

    Returns:
        (BoundTerms, GradientSet в исходных координатах)
    """
    _require_data(model)
    slab = model.slab
    gamma = model.gamma_matrix
    d_mu = np.zeros_like(slab.mu)
    d_var = np.zeros_like(slab.var)
    d_gamma = np.zeros_like(gamma)
    per_dim = []
    view_grads = []

    for index, view in enumerate(model.views):
        psi = psi_stats(view.kernel, slab, gamma[index], view.Z)
        Kuu = kernel_matrix(view.kernel, view.Z)
        grads = data_term_gradients(view.Y, psi, Kuu, view.beta)
        per_dim.append(grads.per_dim)

        through_psi = psi_gradients(
            view.kernel, slab, gamma[index], view.Z, grads.d_psi0, grads.d_psi1, grads.d_psi2
        )
        d_Z_kuu, d_variance_kuu, d_ell_kuu = kernel_matrix_gradients(
            view.kernel, view.Z, grads.d_Kuu
        )
        d_mu += through_psi.mu
        d_var += through_psi.var
        d_gamma[index] += through_psi.gamma
        d_ell = None
        if through_psi.lengthscales is not None:
            d_ell = through_psi.lengthscales + d_ell_kuu
        view_grads.append(
            ViewGradients(
                Z=through_psi.Z + d_Z_kuu,
                variance=through_psi.variance + d_variance_kuu,
                lengthscales=d_ell,
                beta=grads.d_beta,
            )
        )

    kl_mu, kl_var, kl_gamma = kl_gradients(slab, gamma, model.prior)
    per_dim = np.concatenate(per_dim)
    data_total = float(np.sum(per_dim))
    kl_total = _kl(model)
    terms = BoundTerms(
        data_term=data_total,
        kl_term=kl_total,
        total=data_total - kl_total,
        per_dim=per_dim,
    )
    gradients = GradientSet(
        mu=d_mu - kl_mu,
        var=d_var - kl_var,
        gamma=d_gamma - kl_gamma,
        views=view_grads,
    )
    return terms, gradients


def elbo_gradients(model: AnyModel) -> GradientSet:
    """Градиенты нижней границы в исходных координатах."""
    return elbo_and_gradients(model)[1]


"""
ψ-статистики линейного ядра k(x, x') = σ_f² xᵀx' при spike-and-slab распределении.

Входы b∘x линейны по x, поэтому ожидания выражаются через первые и вторые
моменты: E[b_q x_q] = γ_q μ_q, E[b_q x_q²] = γ_q (μ_q² + s_q).
"""

import numpy as np

from sslvm.kernels.schemas import KernelSpec
from sslvm.psi.checks import check_psi_inputs
from sslvm.psi.schemas import PsiGradients, PsiStats
from sslvm.variational.schemas import SlabPosterior


def _moments(post: SlabPosterior, gamma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    gated_mean = gamma * post.mu  # N×Q
    second = post.mu**2 + post.var
    # Диагональная поправка: E[(b x)²] − (E[b x])², просуммированная по n
    diag = np.sum(gamma * second - (gamma * post.mu) ** 2, axis=0)  # Q
    return gated_mean, diag


def psi_linear(
    spec: KernelSpec,
    post: SlabPosterior,
    gamma: np.ndarray,
    Z: np.ndarray,
) -> PsiStats:
    """
    ψ₀, Ψ₁, Ψ₂ для линейного ядра.

    Args:
        spec: Ядро (σ_f²)
        post: Slab-часть (μ, s)
        gamma: Вероятности переключателей (длины Q)
        Z: Индуцирующие входы M×Q

    Returns:
        PsiStats
    """
    gamma, Z = check_psi_inputs(spec, post, gamma, Z)
    gated_mean, diag = _moments(post, gamma)
    psi0 = spec.variance * float(np.sum(gamma * (post.mu**2 + post.var)))
    psi1 = spec.variance * gated_mean @ Z.T
    inner = np.diag(diag) + gated_mean.T @ gated_mean  # Q×Q
    psi2 = spec.variance**2 * (Z @ inner @ Z.T)
    psi2 = 0.5 * (psi2 + psi2.T)
    return PsiStats(psi0=psi0, psi1=psi1, psi2=psi2)


def psi_linear_gradients(
    spec: KernelSpec,
    post: SlabPosterior,
    gamma: np.ndarray,
    Z: np.ndarray,
    d_psi0: float,
    d_psi1: np.ndarray,
    d_psi2: np.ndarray,
) -> PsiGradients:
    """Цепное правило от (∂F/∂ψ₀, ∂F/∂Ψ₁, ∂F/∂Ψ₂) к параметрам линейного ядра."""
    gamma, Z = check_psi_inputs(spec, post, gamma, Z)
    variance = spec.variance
    d_psi2 = 0.5 * (d_psi2 + d_psi2.T)
    gated_mean, diag = _moments(post, gamma)
    second = post.mu**2 + post.var
    inner = np.diag(diag) + gated_mean.T @ gated_mean

    projected = variance**2 * (Z.T @ d_psi2 @ Z)  # Q×Q, ∂F/∂inner
    d_gated_mean = variance * d_psi1 @ Z + 2.0 * gated_mean @ projected  # N×Q
    d_diag = np.diag(projected)  # Q

    d_mu = (
        d_gated_mean * gamma
        + d_diag * (2.0 * gamma * post.mu - 2.0 * gamma**2 * post.mu)
        + d_psi0 * variance * 2.0 * gamma * post.mu
    )
    # Не зависит от n, но возвращается построчно, как μ
    d_var = np.broadcast_to(d_diag * gamma + d_psi0 * variance * gamma, post.var.shape).copy()
    d_gamma = (
        np.sum(d_gated_mean * post.mu, axis=0)
        + d_diag * np.sum(second - 2.0 * gamma * post.mu**2, axis=0)
        + d_psi0 * variance * np.sum(second, axis=0)
    )
    d_Z = variance * d_psi1.T @ gated_mean + 2.0 * variance**2 * d_psi2 @ Z @ inner

    psi0 = variance * float(np.sum(gamma * second))
    psi1 = variance * gated_mean @ Z.T
    psi2 = variance**2 * (Z @ inner @ Z.T)
    d_variance = (
        d_psi0 * psi0 / variance
        + float(np.sum(d_psi1 * psi1)) / variance
        + 2.0 * float(np.sum(d_psi2 * psi2)) / variance
    )
    return PsiGradients(mu=d_mu, var=d_var, gamma=d_gamma, Z=d_Z, variance=d_variance)

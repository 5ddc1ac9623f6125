"""
KL-дивергенции spike-and-slab апостериорного распределения от априорного.

При b_q = 0 условное q(x | b=0) совпадает с априорным p(x), поэтому
гауссов член входит с весом вероятности включения измерения.
"""

import numpy as np

from sslvm.errors import ShapeError
from sslvm.variational.schemas import MRDSwitchPosterior, SlabPosterior, SSPosterior, SSPrior


def bernoulli_kl(gamma: np.ndarray, pi: float) -> np.ndarray:
    """Поэлементная KL(Bernoulli(γ) ‖ Bernoulli(π))."""
    gamma = np.asarray(gamma, dtype=float)
    return gamma * np.log(gamma / pi) + (1.0 - gamma) * np.log((1.0 - gamma) / (1.0 - pi))


def switch_union(gamma: np.ndarray) -> np.ndarray:
    """
    Вероятность того, что хотя бы один вид использует измерение q.

    Args:
        gamma: Матрица C×Q

    Returns:
        ρ_q = 1 − ∏_c (1 − γ_cq), вектор длины Q
    """
    gamma = np.atleast_2d(gamma)
    return 1.0 - np.prod(1.0 - gamma, axis=0)


def _slab_kl_per_dim(post: SlabPosterior) -> np.ndarray:
    return 0.5 * np.sum(post.var + post.mu**2 - 1.0 - np.log(post.var), axis=0)


def _check_shapes(post: SlabPosterior, gamma: np.ndarray) -> None:
    if gamma.shape[1] != post.input_dim:
        raise ShapeError(f"gamma имеет {gamma.shape[1]} столбцов, ожидалось Q={post.input_dim}")


def kl_mrd(post: SlabPosterior, switches: MRDSwitchPosterior, prior: SSPrior) -> float:
    """
    KL(q(B, X) ‖ p(B) p(X)) многовидовой модели.

    Args:
        post: Общая slab-часть (μ, s)
        switches: Переключатели по видам γ_cq
        prior: Априорные параметры

    Returns:
        Σ_cq KL_Bern(γ_cq, π) + Σ_q ρ_q Σ_n ½(s + μ² − 1 − log s)
    """
    gamma = switches.gamma
    _check_shapes(post, gamma)
    switch_term = float(np.sum(bernoulli_kl(gamma, prior.pi)))
    slab_term = float(np.sum(switch_union(gamma) * _slab_kl_per_dim(post)))
    return switch_term + slab_term


def kl_spike_slab(post: SSPosterior, prior: SSPrior) -> float:
    """
    KL(q(b, X) ‖ p(b) p(X)) одновидовой модели.

    Совпадает с kl_mrd при C = 1 (считается тем же кодом).
    """
    return kl_mrd(post, MRDSwitchPosterior(gamma=post.gamma[None, :]), prior)


def kl_gradients(
    post: SlabPosterior,
    gamma: np.ndarray,
    prior: SSPrior,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Градиенты KL по μ, s и γ.

    Args:
        post: Slab-часть (μ, s)
        gamma: Матрица C×Q (для одновидовой модели C = 1)
        prior: Априорные параметры

    Returns:
        (dμ N×Q, ds N×Q, dγ C×Q)
    """
    gamma = np.atleast_2d(gamma)
    _check_shapes(post, gamma)
    rho = switch_union(gamma)

    d_mu = rho * post.mu
    d_var = rho * 0.5 * (1.0 - 1.0 / post.var)

    slab = _slab_kl_per_dim(post)
    d_gamma = np.log(gamma / prior.pi) - np.log((1.0 - gamma) / (1.0 - prior.pi))
    for view in range(gamma.shape[0]):
        others = np.prod(np.delete(1.0 - gamma, view, axis=0), axis=0)
        d_gamma[view] += others * slab
    return d_mu, d_var, d_gamma

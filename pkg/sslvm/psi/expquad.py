"""
ψ-статистики экспоненциально-квадратичного ядра при spike-and-slab распределении.

По каждому измерению q множитель — смесь двух ветвей: переключатель
включён (свёртка ядра с гауссовым q(x)) и выключен (ядро в нулевом входе).
Множители считаются в логарифмах и перемножаются через сумму по q.
"""

import numpy as np

from sslvm.kernels.schemas import KernelSpec
from sslvm.psi.blocks import map_row_blocks
from sslvm.psi.checks import check_psi_inputs
from sslvm.psi.schemas import PsiGradients, PsiStats
from sslvm.variational.schemas import SlabPosterior


def _log_weights(gamma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(divide="ignore"):
        return np.log(gamma), np.log1p(-gamma)


def _psi1_terms(spec: KernelSpec, post: SlabPosterior, gamma: np.ndarray, Z: np.ndarray):
    ell2 = spec.ell**2
    denom = post.var + ell2  # N×Q
    diff = post.mu[:, None, :] - Z[None, :, :]  # N×M×Q
    log_on_branch = -0.5 * np.log(post.var / ell2 + 1.0)[:, None, :] - diff**2 / (
        2.0 * denom[:, None, :]
    )
    log_off_branch = -(Z**2) / (2.0 * ell2)  # M×Q
    log_gamma, log_not_gamma = _log_weights(gamma)
    log_factor = np.logaddexp(log_gamma + log_on_branch, log_not_gamma + log_off_branch[None])
    psi1 = spec.variance * np.exp(np.sum(log_factor, axis=-1))
    return psi1, diff, denom, log_on_branch, log_off_branch, log_factor


def _psi2_block_terms(
    spec: KernelSpec,
    mu: np.ndarray,
    var: np.ndarray,
    gamma: np.ndarray,
    Z: np.ndarray,
):
    ell2 = spec.ell**2
    z_bar = 0.5 * (Z[:, None, :] + Z[None, :, :])  # M×M×Q
    z_diff2 = (Z[:, None, :] - Z[None, :, :]) ** 2
    denom = 2.0 * var + ell2  # B×Q
    centred = mu[:, None, None, :] - z_bar[None]  # B×M×M×Q
    log_on_branch = (
        -0.5 * np.log(2.0 * var / ell2 + 1.0)[:, None, None, :]
        - z_diff2[None] / (4.0 * ell2)
        - centred**2 / denom[:, None, None, :]
    )
    log_z = -(Z**2) / (2.0 * ell2)
    log_off_branch = log_z[:, None, :] + log_z[None, :, :]  # M×M×Q
    log_gamma, log_not_gamma = _log_weights(gamma)
    log_factor = np.logaddexp(log_gamma + log_on_branch, log_not_gamma + log_off_branch[None])
    psi2_rows = spec.variance**2 * np.exp(np.sum(log_factor, axis=-1))  # B×M×M
    return psi2_rows, centred, denom, z_diff2, log_on_branch, log_off_branch, log_factor


def psi_expquad(
    spec: KernelSpec,
    post: SlabPosterior,
    gamma: np.ndarray,
    Z: np.ndarray,
) -> PsiStats:
    """
    ψ₀, Ψ₁, Ψ₂ для expquad ядра.

    Args:
        spec: Ядро (σ_f², ℓ)
        post: Slab-часть (μ, s)
        gamma: Вероятности переключателей (длины Q)
        Z: Индуцирующие входы M×Q

    Returns:
        PsiStats
    """
    gamma, Z = check_psi_inputs(spec, post, gamma, Z)
    num_data, _ = post.mu.shape
    num_inducing, input_dim = Z.shape
    psi1, *_ = _psi1_terms(spec, post, gamma, Z)

    def block_sum(rows: slice) -> np.ndarray:
        psi2_rows, *_ = _psi2_block_terms(spec, post.mu[rows], post.var[rows], gamma, Z)
        return np.sum(psi2_rows, axis=0)

    partial = map_row_blocks(block_sum, num_data, num_inducing**2 * input_dim)
    psi2 = np.zeros((num_inducing, num_inducing))
    for block in partial:
        psi2 += block

    return PsiStats(psi0=float(num_data * spec.variance), psi1=psi1, psi2=psi2)


def psi_expquad_gradients(
    spec: KernelSpec,
    post: SlabPosterior,
    gamma: np.ndarray,
    Z: np.ndarray,
    d_psi0: float,
    d_psi1: np.ndarray,
    d_psi2: np.ndarray,
) -> PsiGradients:
    """
    Цепное правило от (∂F/∂ψ₀, ∂F/∂Ψ₁, ∂F/∂Ψ₂) к параметрам.

    Args:
        spec: Ядро
        post: Slab-часть (μ, s)
        gamma: Вероятности переключателей
        Z: Индуцирующие входы
        d_psi0: ∂F/∂ψ₀
        d_psi1: ∂F/∂Ψ₁ (N×M)
        d_psi2: ∂F/∂Ψ₂ (M×M), симметризуется

    Returns:
        PsiGradients
    """
    gamma, Z = check_psi_inputs(spec, post, gamma, Z)
    num_data, input_dim = post.mu.shape
    num_inducing = Z.shape[0]
    ell = spec.ell
    ell2 = ell**2
    d_psi2 = 0.5 * (d_psi2 + d_psi2.T)

    # Ψ₁
    psi1, diff, denom, log_on, log_off, log_factor = _psi1_terms(spec, post, gamma, Z)
    weight = (d_psi1 * psi1)[:, :, None]  # N×M×1
    log_gamma, log_not_gamma = _log_weights(gamma)
    resp_on = np.exp(log_gamma + log_on - log_factor)
    resp_off = np.exp(log_not_gamma + log_off[None] - log_factor)

    d_mu = np.sum(weight * resp_on * (-diff / denom[:, None, :]), axis=1)
    d_var = np.sum(
        weight * resp_on * (-0.5 / denom[:, None, :] + diff**2 / (2.0 * denom[:, None, :] ** 2)),
        axis=1,
    )
    d_gamma = np.sum(
        weight * (np.exp(log_on - log_factor) - np.exp(log_off[None] - log_factor)), axis=(0, 1)
    )
    d_Z = np.sum(
        weight * (resp_on * diff / denom[:, None, :] - resp_off * Z[None] / ell2), axis=0
    )
    d_ell = np.sum(
        weight
        * (
            resp_on
            * (1.0 / ell - ell / denom[:, None, :] + diff**2 * ell / denom[:, None, :] ** 2)
            + resp_off * Z[None] ** 2 / ell**3
        ),
        axis=(0, 1),
    )
    d_variance = float(np.sum(d_psi1 * psi1)) / spec.variance + d_psi0 * num_data

    # Ψ₂
    def block_grads(rows: slice):
        psi2_rows, centred, denom2, z_diff2, log_on2, log_off2, log_factor2 = _psi2_block_terms(
            spec, post.mu[rows], post.var[rows], gamma, Z
        )
        weight2 = (d_psi2[None] * psi2_rows)[..., None]  # B×M×M×1
        on = np.exp(log_gamma + log_on2 - log_factor2)
        off = np.exp(log_not_gamma + log_off2[None] - log_factor2)
        den = denom2[:, None, None, :]

        block_mu = np.sum(weight2 * on * (-2.0 * centred / den), axis=(1, 2))
        block_var = np.sum(weight2 * on * (-1.0 / den + 2.0 * centred**2 / den**2), axis=(1, 2))
        block_gamma = np.sum(
            weight2 * (np.exp(log_on2 - log_factor2) - np.exp(log_off2[None] - log_factor2)),
            axis=(0, 1, 2),
        )
        z_first_slot = (
            on * (-(Z[:, None, :] - Z[None, :, :])[None] / (2.0 * ell2) + centred / den)
            - off * Z[None, :, None, :] / ell2
        )
        block_Z = 2.0 * np.sum(weight2 * z_first_slot, axis=(0, 2))
        z_sq_sum = (Z[:, None, :] ** 2 + Z[None, :, :] ** 2)[None]
        block_ell = np.sum(
            weight2
            * (
                on
                * (
                    1.0 / ell
                    - ell / den
                    + z_diff2[None] / (2.0 * ell**3)
                    + 2.0 * ell * centred**2 / den**2
                )
                + off * z_sq_sum / ell**3
            ),
            axis=(0, 1, 2),
        )
        block_variance = 2.0 * float(np.sum(d_psi2[None] * psi2_rows)) / spec.variance
        return rows, block_mu, block_var, block_gamma, block_Z, block_ell, block_variance

    for rows, b_mu, b_var, b_gamma, b_Z, b_ell, b_variance in map_row_blocks(
        block_grads, num_data, num_inducing**2 * input_dim
    ):
        d_mu[rows] += b_mu
        d_var[rows] += b_var
        d_gamma += b_gamma
        d_Z += b_Z
        d_ell += b_ell
        d_variance += b_variance

    return PsiGradients(
        mu=d_mu,
        var=d_var,
        gamma=d_gamma,
        Z=d_Z,
        variance=d_variance,
        lengthscales=d_ell,
    )

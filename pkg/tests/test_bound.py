import numpy as np
import pytest
from scipy.stats import multivariate_normal

from sslvm.bound import data_term, data_terms, elbo, elbo_and_gradients, elbo_gradients
from sslvm.errors import HyperparameterError, ShapeError
from sslvm.kernels import KernelFamily, KernelSpec, kernel_matrix
from sslvm.model import MRDModel, SSGPLVMModel, ViewRecord, pack, pack_gradients, unpack
from sslvm.psi import psi_stats
from sslvm.variational import MRDSwitchPosterior, SlabPosterior, SSPosterior, bernoulli_kl, kl_mrd
from tests.conftest import make_mrd_model, make_ss_model
from tests.oracles import bgplvm_data_bound, bgplvm_psi, finite_difference


def _gradient_check(model):
    theta = pack(model)
    analytic = pack_gradients(model, elbo_gradients(model))
    numeric = finite_difference(lambda x: elbo(unpack(model, x)).total, theta)
    np.testing.assert_allclose(analytic, numeric, rtol=1e-5, atol=1e-7)


def test_ssgplvm_gradients_match_finite_differences(family):
    _gradient_check(make_ss_model(seed=1, family=family))


def test_mrd_gradients_match_finite_differences(family):
    _gradient_check(make_mrd_model(seed=2, family=family))


def test_total_is_data_minus_kl(family):
    model = make_ss_model(seed=3, family=family)
    terms = elbo(model)
    assert terms.total == terms.data_term - terms.kl_term
    assert terms.per_dim.shape == (model.output_dim,)
    assert terms.data_term == pytest.approx(float(np.sum(terms.per_dim)), rel=1e-14)


def test_elbo_and_gradients_agree_with_elbo():
    model = make_mrd_model(seed=4)
    terms, _ = elbo_and_gradients(model)
    assert terms.total == pytest.approx(elbo(model).total, rel=1e-14)


def test_data_terms_are_column_wise():
    model = make_ss_model(seed=5, output_dim=4)
    psi = psi_stats(model.kernel, model.posterior, model.posterior.gamma, model.Z)
    Kuu = kernel_matrix(model.kernel, model.Z)
    per_dim = data_terms(model.Y, psi, Kuu, model.beta)
    for d in range(4):
        assert data_term(model.Y[:, d], psi, Kuu, model.beta) == pytest.approx(per_dim[d], rel=1e-12)


def test_data_term_rejects_wrong_rows():
    model = make_ss_model(seed=6)
    psi = psi_stats(model.kernel, model.posterior, model.posterior.gamma, model.Z)
    Kuu = kernel_matrix(model.kernel, model.Z)
    with pytest.raises(ShapeError):
        data_term(np.zeros(model.num_data + 1), psi, Kuu, model.beta)


def test_full_switches_reduce_to_bayesian_gplvm(family):
    model = make_ss_model(seed=7, family=family, num_data=8, output_dim=3, input_dim=2)
    ones = np.ones(model.input_dim)
    stats = psi_stats(model.kernel, model.posterior, ones, model.Z)
    Kuu = kernel_matrix(model.kernel, model.Z)
    bound = float(np.sum(data_terms(model.Y, stats, Kuu, model.beta)))

    psi0, psi1, psi2 = bgplvm_psi(model.kernel, model.posterior.mu, model.posterior.var, model.Z)
    reference = bgplvm_data_bound(model.Y, psi0, psi1, psi2, Kuu, model.beta)
    assert bound == pytest.approx(reference, rel=1e-10)


def test_single_view_mrd_equals_ssgplvm(family):
    ss = make_ss_model(seed=8, family=family)
    mrd = MRDModel(
        views=[ViewRecord(Y=ss.Y, kernel=ss.kernel, beta=ss.beta, Z=ss.Z)],
        posterior=SlabPosterior(mu=ss.posterior.mu, var=ss.posterior.var),
        switches=MRDSwitchPosterior(gamma=ss.posterior.gamma[None, :]),
        prior=ss.prior,
    )
    ss_terms, ss_grads = elbo_and_gradients(ss)
    mrd_terms, mrd_grads = elbo_and_gradients(mrd)
    assert ss_terms.total == mrd_terms.total
    np.testing.assert_array_equal(pack(ss), pack(mrd))
    np.testing.assert_array_equal(pack_gradients(ss, ss_grads), pack_gradients(mrd, mrd_grads))


def test_nearly_unused_view_adds_its_switch_kl():
    model = make_mrd_model(seed=9, num_views=1, output_dims=(3,))
    rng = np.random.default_rng(10)
    extra = ViewRecord(
        name="extra",
        Y=rng.standard_normal((model.num_data, 2)),
        kernel=model.views[0].kernel,
        beta=2.0,
        Z=model.views[0].Z,
    )
    switches = np.vstack([model.switches.gamma, np.zeros((1, model.input_dim))])
    extended = MRDModel(
        views=[*model.views, extra],
        posterior=model.posterior,
        switches=MRDSwitchPosterior(gamma=switches),
        prior=model.prior,
    )
    kl_before = kl_mrd(model.posterior, model.switches, model.prior)
    kl_after = kl_mrd(extended.posterior, extended.switches, extended.prior)
    expected = float(np.sum(bernoulli_kl(extended.switches.gamma[1], model.prior.pi)))
    assert kl_after - kl_before == pytest.approx(expected, abs=1e-6)

    before = elbo(model)
    after = elbo(extended)
    np.testing.assert_array_equal(after.per_dim[:3], before.per_dim)


def test_bound_requires_data():
    model = make_ss_model(seed=11).model_copy(update={"Y": None})
    with pytest.raises(ValueError):
        elbo(model)


def test_kl_term_is_zero_at_prior():
    model = make_ss_model(seed=12, family=KernelFamily.LINEAR)
    at_prior = model.model_copy(
        update={
            "posterior": model.posterior.model_copy(
                update={
                    "mu": np.zeros_like(model.posterior.mu),
                    "var": np.ones_like(model.posterior.var),
                    "gamma": np.full(model.input_dim, model.prior.pi),
                }
            )
        }
    )
    assert elbo(at_prior).kl_term == pytest.approx(0.0, abs=1e-15)
    assert elbo(model).kl_term > 0.0


def test_data_term_rejects_non_positive_beta():
    model = make_ss_model(seed=13)
    psi = psi_stats(model.kernel, model.posterior, model.posterior.gamma, model.Z)
    Kuu = kernel_matrix(model.kernel, model.Z)
    for beta in (0.0, -1.0, float("nan")):
        with pytest.raises(HyperparameterError):
            data_terms(model.Y, psi, Kuu, beta)


def test_bound_does_not_depend_on_latent_order(family):
    model = make_ss_model(seed=14, family=family, num_data=7, input_dim=3)
    order = np.array([2, 0, 1])
    kernel = model.kernel
    if family == KernelFamily.EXPQUAD:
        kernel = kernel.model_copy(update={"lengthscales": [kernel.lengthscales[q] for q in order]})
    permuted = SSGPLVMModel(
        Y=model.Y,
        posterior=SSPosterior(
            mu=model.posterior.mu[:, order],
            var=model.posterior.var[:, order],
            gamma=model.posterior.gamma[order],
        ),
        Z=model.Z[:, order],
        kernel=kernel,
        beta=model.beta,
        prior=model.prior,
    )
    assert elbo(permuted).total == pytest.approx(elbo(model).total, rel=1e-12)


def test_data_term_stays_below_exact_marginal_likelihood():
    rng = np.random.default_rng(15)
    mu = rng.standard_normal((3, 1))
    Y = rng.standard_normal((3, 2))
    kernel = KernelSpec(family=KernelFamily.EXPQUAD, variance=1.2, lengthscales=[0.9])
    beta = 4.0
    model = SSGPLVMModel(
        Y=Y,
        posterior=SSPosterior(mu=mu, var=np.full_like(mu, 1e-12), gamma=np.ones(1)),
        Z=mu.copy(),
        kernel=kernel,
        beta=beta,
    )
    covariance = kernel_matrix(kernel, mu) + np.eye(3) / beta
    exact = sum(multivariate_normal(mean=np.zeros(3), cov=covariance).logpdf(Y[:, d]) for d in range(2))
    bound = elbo(model).data_term
    assert bound <= exact + 1e-9
    # Z совпадает с μ, поэтому граница почти точна
    assert bound >= exact - 1e-3


def test_single_point_data_term_by_hand():
    variance, m, s, z, y, beta = 1.5, 0.7, 0.2, -1.3, 0.4, 2.0
    kernel = KernelSpec(family=KernelFamily.LINEAR, variance=variance)
    post = SlabPosterior(mu=np.array([[m]]), var=np.array([[s]]))
    psi = psi_stats(kernel, post, np.ones(1), np.array([[z]]))

    psi0 = variance * (m**2 + s)
    psi1 = variance * m * z
    psi2 = variance**2 * z**2 * (m**2 + s)
    assert psi.psi0 == pytest.approx(psi0, rel=1e-14)
    assert psi.psi1[0, 0] == pytest.approx(psi1, rel=1e-14)
    assert psi.psi2[0, 0] == pytest.approx(psi2, rel=1e-14)

    K = variance * z**2 * (1.0 + 1e-6)
    A = beta * psi2 + K
    expected = (
        0.5 * (np.log(beta) - np.log(2.0 * np.pi))
        + 0.5 * np.log(K)
        - 0.5 * np.log(A)
        - 0.5 * beta * psi0
        + 0.5 * beta * psi2 / K
        - 0.5 * (beta * y**2 - beta**2 * (psi1 * y) ** 2 / A)
    )
    actual = data_term(np.array([y]), psi, kernel_matrix(kernel, np.array([[z]])), beta)
    assert actual == pytest.approx(expected, rel=1e-12)

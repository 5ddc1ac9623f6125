import numpy as np
import pytest
from scipy.linalg import subspace_angles

from sslvm.errors import CheckpointError, DataFormatError, ShapeError, UnsupportedVersionError
from sslvm.kernels import KernelFamily
from sslvm.model import (
    ALL_GROUPS,
    CheckpointRepository,
    InitStrategy,
    MRDModel,
    ParamGroup,
    SSGPLVMModel,
    attach_data,
    decode,
    encode,
    group_mask,
    init_model,
    init_mrd_model,
    layout,
    load,
    pack,
    save,
    simplex_vertices,
    unpack,
)
from sslvm.variational import SSPosterior
from tests.conftest import make_mrd_model, make_ss_model


class TestPacking:
    def test_round_trip(self, family):
        model = make_ss_model(seed=0, family=family)
        restored = unpack(model, pack(model))
        np.testing.assert_array_equal(restored.posterior.mu, model.posterior.mu)
        np.testing.assert_array_equal(restored.Z, model.Z)
        np.testing.assert_allclose(restored.posterior.var, model.posterior.var, rtol=1e-14)
        np.testing.assert_allclose(restored.posterior.gamma, model.posterior.gamma, rtol=1e-14)
        assert restored.beta == pytest.approx(model.beta, rel=1e-14)
        assert restored.kernel.variance == pytest.approx(model.kernel.variance, rel=1e-14)
        if family == KernelFamily.EXPQUAD:
            np.testing.assert_allclose(restored.kernel.ell, model.kernel.ell, rtol=1e-14)

    def test_mrd_round_trip(self):
        model = make_mrd_model(seed=1)
        restored = unpack(model, pack(model))
        np.testing.assert_allclose(restored.switches.gamma, model.switches.gamma, rtol=1e-14)
        for original, copy in zip(model.views, restored.views, strict=True):
            np.testing.assert_array_equal(copy.Z, original.Z)
            assert copy.beta == pytest.approx(original.beta, rel=1e-14)
            assert copy.Y is original.Y

    def test_layout_order_and_size(self):
        model = make_mrd_model(seed=2, family=KernelFamily.EXPQUAD)
        fields = [(segment.field, segment.view) for segment in layout(model)]
        assert fields[:3] == [("mu", None), ("var", None), ("gamma", None)]
        assert fields[3:7] == [("Z", 0), ("variance", 0), ("lengthscales", 0), ("beta", 0)]
        N, Q = model.posterior.mu.shape
        per_view = 3 * Q + 1 + Q + 1
        assert pack(model).shape == (2 * N * Q + 2 * Q + 2 * per_view,)

    def test_tiny_variance_stays_finite(self):
        model = make_ss_model(seed=3)
        var = model.posterior.var.copy()
        var[0, 0] = 1e-300
        model = model.model_copy(update={"posterior": model.posterior.model_copy(update={"var": var})})
        theta = pack(model)
        assert np.all(np.isfinite(theta))
        restored = unpack(model, theta)
        assert restored.posterior.var[0, 0] == pytest.approx(1e-300, rel=1e-12)

    def test_half_gamma_maps_to_zero(self):
        model = make_ss_model(seed=4)
        gamma = np.full(model.input_dim, 0.5)
        model = model.model_copy(update={"posterior": model.posterior.model_copy(update={"gamma": gamma})})
        theta = pack(model)
        segment = next(segment for segment in layout(model) if segment.field == "gamma")
        np.testing.assert_array_equal(theta[segment.index], 0.0)
        np.testing.assert_array_equal(unpack(model, theta).posterior.gamma, 0.5)

    def test_extreme_logits_are_clipped(self):
        model = make_ss_model(seed=5)
        theta = pack(model)
        segment = next(segment for segment in layout(model) if segment.field == "gamma")
        theta[segment.index] = [-1000.0, 1000.0]
        gamma = unpack(model, theta).posterior.gamma
        assert 0.0 < gamma[0] <= 1e-8
        assert 1.0 - 1e-8 <= gamma[1] < 1.0

    def test_non_finite_vector_rejected(self):
        model = make_ss_model(seed=6)
        theta = pack(model)
        theta[0] = np.nan
        with pytest.raises(ValueError):
            unpack(model, theta)
        with pytest.raises(ValueError):
            unpack(model, pack(model)[:-1])

    def test_inactive_groups_are_untouched(self):
        model = make_mrd_model(seed=7)
        theta = pack(model) + 0.1
        restored = unpack(model, theta, {ParamGroup.MU})
        np.testing.assert_array_equal(restored.posterior.mu, model.posterior.mu + 0.1)
        np.testing.assert_array_equal(restored.posterior.var, model.posterior.var)
        np.testing.assert_array_equal(restored.switches.gamma, model.switches.gamma)
        for original, copy in zip(model.views, restored.views, strict=True):
            np.testing.assert_array_equal(copy.Z, original.Z)
            assert copy.kernel == original.kernel
            assert copy.beta == original.beta

    def test_group_mask(self):
        model = make_ss_model(seed=8)
        mask = group_mask(model, {ParamGroup.BETA})
        assert mask.sum() == 1
        assert mask[-1]
        assert group_mask(model, ALL_GROUPS).all()


class TestInitialization:
    def test_is_deterministic(self, family):
        Y = np.random.default_rng(0).standard_normal((20, 5))
        first = init_model(Y, 3, num_inducing=6, kernel_family=family, seed=11)
        second = init_model(Y, 3, num_inducing=6, kernel_family=family, seed=11)
        np.testing.assert_array_equal(pack(first), pack(second))
        assert encode(first) == encode(second)

    def test_initial_values(self):
        Y = np.random.default_rng(1).standard_normal((15, 4))
        model = init_model(Y, 2, num_inducing=5)
        np.testing.assert_array_equal(model.posterior.var, 0.5)
        np.testing.assert_array_equal(model.posterior.gamma, 0.5)
        assert model.Z.shape == (5, 2)
        assert model.kernel.variance == 1.0
        assert model.kernel.lengthscales == [1.0, 1.0]
        assert model.beta == pytest.approx(1.0 / (0.01 * np.var(Y)))

    def test_pca_recovers_principal_subspace(self):
        rng = np.random.default_rng(2)
        latent = rng.standard_normal((40, 2))
        Y = latent @ rng.standard_normal((2, 6))
        model = init_model(Y, 2, num_inducing=10, init_strategy=InitStrategy.PCA)
        u, _, _ = np.linalg.svd(Y - Y.mean(axis=0), full_matrices=False)
        assert np.max(subspace_angles(model.posterior.mu, u[:, :2])) < 1e-8
        np.testing.assert_allclose(model.posterior.mu.std(axis=0), 1.0, rtol=1e-12)

    def test_pca_pads_when_rank_is_short(self, warnings_log):
        Y = np.random.default_rng(3).standard_normal((10, 2))
        model = init_model(Y, 4, num_inducing=5)
        assert model.posterior.mu.shape == (10, 4)
        assert any("pca" in message for message in warnings_log)

    def test_inducing_count_is_capped(self, warnings_log):
        Y = np.random.default_rng(4).standard_normal((8, 3))
        model = init_model(Y, 2, num_inducing=100)
        assert model.Z.shape == (8, 2)
        assert warnings_log

    def test_simplex_vertices_are_equidistant(self):
        vertices = simplex_vertices(4, 5)
        distances = [
            np.linalg.norm(vertices[i] - vertices[j]) for i in range(4) for j in range(i + 1, 4)
        ]
        np.testing.assert_allclose(distances, np.sqrt(2.0), rtol=1e-12)
        np.testing.assert_allclose(vertices.mean(axis=0), 0.0, atol=1e-12)

    def test_simplex_needs_room(self):
        with pytest.raises(ValueError):
            simplex_vertices(4, 2)

    def test_simplex_init_groups_classes(self):
        Y = np.random.default_rng(5).standard_normal((30, 4))
        labels = np.repeat(["a", "b", "c"], 10)
        model = init_model(Y, 2, num_inducing=6, init_strategy=InitStrategy.SIMPLEX, labels=labels)
        vertices = simplex_vertices(3, 2)
        for index, name in enumerate(["a", "b", "c"]):
            centre = model.posterior.mu[labels == name].mean(axis=0)
            assert np.linalg.norm(centre - vertices[index]) < 0.2

    def test_simplex_requires_labels(self):
        Y = np.random.default_rng(6).standard_normal((10, 3))
        with pytest.raises(ValueError):
            init_model(Y, 2, num_inducing=4, init_strategy=InitStrategy.SIMPLEX)
        with pytest.raises(ShapeError):
            init_model(Y, 2, num_inducing=4, init_strategy=InitStrategy.SIMPLEX, labels=["a"] * 9)

    def test_mrd_views_must_share_rows(self):
        rng = np.random.default_rng(7)
        with pytest.raises(ShapeError):
            init_mrd_model([rng.standard_normal((10, 3)), rng.standard_normal((9, 3))], 2, num_inducing=4)

    def test_mrd_defaults(self):
        rng = np.random.default_rng(8)
        model = init_mrd_model([rng.standard_normal((12, 3)), rng.standard_normal((12, 5))], 3, num_inducing=4)
        assert [view.name for view in model.views] == ["view1", "view2"]
        assert model.switches.gamma.shape == (2, 3)
        np.testing.assert_array_equal(model.switches.gamma, 0.5)


class TestCheckpoint:
    @pytest.mark.parametrize("kind", ["ss-expquad", "ss-linear", "mrd"])
    def test_save_load_save_is_byte_identical(self, tmp_path, kind):
        if kind == "mrd":
            model = make_mrd_model(seed=9)
        else:
            model = make_ss_model(seed=9, family=KernelFamily(kind.split("-")[1]))
        first = save(model, tmp_path / "a.ckpt")
        restored = load(first)
        second = save(restored, tmp_path / "b.ckpt")
        assert first.read_bytes() == second.read_bytes()
        assert restored.views[0].Y is None
        np.testing.assert_array_equal(restored.slab.mu, model.slab.mu)

    def test_repository(self, tmp_path):
        repository = CheckpointRepository(tmp_path / "model.ckpt")
        assert not repository.exists()
        repository.save(make_ss_model(seed=10))
        assert repository.exists()
        assert isinstance(repository.load(), SSGPLVMModel)
        assert not (tmp_path / "model.ckpt.tmp").exists()

    def test_truncated_file(self, tmp_path):
        raw = encode(make_ss_model(seed=11))
        path = tmp_path / "cut.ckpt"
        path.write_bytes(raw[:-8])
        with pytest.raises(CheckpointError):
            load(path)
        with pytest.raises(CheckpointError):
            decode(raw[:12])

    def test_bad_magic(self):
        raw = encode(make_ss_model(seed=12))
        with pytest.raises(CheckpointError):
            decode(b"NOTACKPT" + raw[8:])

    def test_unknown_version(self):
        raw = encode(make_ss_model(seed=13))
        assert b'"version":1' in raw
        with pytest.raises(UnsupportedVersionError):
            decode(raw.replace(b'"version":1', b'"version":9', 1))

    def test_attach_data(self):
        model = make_mrd_model(seed=14)
        restored = decode(encode(model))
        attached = attach_data(restored, [view.Y for view in model.views])
        assert isinstance(attached, MRDModel)
        for original, view in zip(model.views, attached.views, strict=True):
            np.testing.assert_array_equal(view.Y, original.Y)

    def test_attach_data_checks_shapes(self):
        model = decode(encode(make_ss_model(seed=15)))
        with pytest.raises(ShapeError):
            attach_data(model, [np.zeros((model.num_data, model.output_dim + 1))])
        with pytest.raises(ShapeError):
            attach_data(model, [])
        bad = np.zeros((model.num_data, model.output_dim))
        bad[0, 0] = np.inf
        with pytest.raises(DataFormatError):
            attach_data(model, [bad])


def test_posterior_length_checked():
    with pytest.raises(ValueError):
        SSGPLVMModel(
            Y=np.zeros((3, 2)),
            posterior=SSPosterior(mu=np.zeros((4, 2)), var=np.ones((4, 2)), gamma=[0.5, 0.5]),
            Z=np.zeros((2, 2)),
            kernel={"family": "linear", "variance": 1.0},
            beta=1.0,
        )

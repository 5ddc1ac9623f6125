import json

import numpy as np
import pytest

from sslvm.cli import commands
from sslvm.cli.main import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, build_parser, main, resolve_options
from sslvm.cli.schemas import TrainOptions
from sslvm.data import load_matrix_csv, write_matrix_csv
from sslvm.errors import OptimizationError
from sslvm.evaluation import mean_average_precision, rank_by_distance
from sslvm.model import init_model, load, save
from tests.conftest import make_ss_model

SYNTH_FILES = ["latents.csv", "view1.csv", "view2.csv", "mixing1.csv", "mixing2.csv"]


@pytest.fixture
def views(tmp_path):
    rng = np.random.default_rng(0)
    latent = rng.standard_normal((12, 2))
    paths = []
    for index, width in enumerate((4, 3)):
        Y = latent @ rng.standard_normal((2, width)) + 0.05 * rng.standard_normal((12, width))
        paths.append(write_matrix_csv(Y, tmp_path / f"view{index + 1}.csv"))
    return paths


def test_synth_writes_files(tmp_path):
    out = tmp_path / "data"
    assert main(["synth", "--seed", "3", "--out-dir", str(out)]) == EXIT_OK
    for name in SYNTH_FILES:
        assert (out / name).is_file()
    matrix, _ = load_matrix_csv(out / "view1.csv")
    assert matrix.shape == (50, 12)
    assert sorted(path.name for path in out.iterdir()) == sorted(SYNTH_FILES)


def test_synth_is_deterministic(tmp_path):
    main(["synth", "--seed", "1", "--out-dir", str(tmp_path / "a")])
    main(["synth", "--seed", "1", "--out-dir", str(tmp_path / "b")])
    for name in SYNTH_FILES:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_synth_into_unwritable_location(tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("x", encoding="utf-8")
    assert main(["synth", "--out-dir", str(blocker / "sub")]) == EXIT_USAGE
    assert list(tmp_path.iterdir()) == [blocker]


def test_train_with_zero_iterations_saves_initial_model(tmp_path, views):
    checkpoint = tmp_path / "model.ckpt"
    trace = tmp_path / "trace.csv"
    code = main(
        ["train", "--data", str(views[0]), "--q", "2", "--m", "5", "--iters", "0",
         "--checkpoint", str(checkpoint), "--trace", str(trace)]
    )
    assert code == EXIT_OK
    Y, _ = load_matrix_csv(views[0])
    expected = init_model(Y, 2, num_inducing=5)
    restored = load(checkpoint)
    np.testing.assert_array_equal(restored.posterior.mu, expected.posterior.mu)
    np.testing.assert_array_equal(restored.Z, expected.Z)
    assert trace.read_text(encoding="utf-8").splitlines() == ["iter,elbo,grad_norm"]


def test_train_multi_view(tmp_path, views):
    checkpoint = tmp_path / "mrd.ckpt"
    code = main(
        ["train", "--data", f"{views[0]},{views[1]}", "--q", "3", "--m", "3", "--iters", "3",
         "--kernel", "linear", "--checkpoint", str(checkpoint)]
    )
    assert code == EXIT_OK
    model = load(checkpoint)
    assert [view.name for view in model.views] == ["view1", "view2"]
    assert model.switches.gamma.shape == (2, 3)


def test_train_rejects_views_with_different_rows(tmp_path, views):
    short = write_matrix_csv(np.ones((5, 2)), tmp_path / "short.csv")
    code = main(
        ["train", "--data", f"{views[0]},{short}", "--q", "2", "--iters", "0",
         "--checkpoint", str(tmp_path / "m.ckpt")]
    )
    assert code == EXIT_USAGE
    assert not (tmp_path / "m.ckpt").exists()


def test_missing_data_file(tmp_path):
    code = main(["train", "--data", str(tmp_path / "nope.csv"), "--q", "2", "--checkpoint", str(tmp_path / "m.ckpt")])
    assert code == EXIT_USAGE


def test_missing_required_option_is_usage_error():
    with pytest.raises(SystemExit) as error:
        main(["train", "--q", "2"])
    assert error.value.code == EXIT_USAGE


def test_unknown_eval_mode():
    with pytest.raises(SystemExit) as error:
        main(["eval", "--checkpoint", "x.ckpt", "--mode", "cluster"])
    assert error.value.code == EXIT_USAGE


def test_numerical_failure_writes_diagnostics(tmp_path, views, monkeypatch):
    def failing_fit(model, config):
        raise OptimizationError("целевая функция неконечна", state={"stage": 2, "failures": 11})

    monkeypatch.setattr(commands, "fit", failing_fit)
    diagnostics = tmp_path / "diagnostics.json"
    code = main(
        ["train", "--data", str(views[0]), "--q", "2", "--m", "4", "--checkpoint", str(tmp_path / "m.ckpt"),
         "--diagnostics", str(diagnostics)]
    )
    assert code == EXIT_NUMERICAL
    document = json.loads(diagnostics.read_text(encoding="utf-8"))
    assert document["error"] == "OptimizationError"
    assert document["state"] == {"stage": 2, "failures": 11}


def test_config_file_and_flag_precedence(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"data": "a.csv,b.csv", "q": 4, "iters": 7, "checkpoint": "c.ckpt"}), encoding="utf-8")
    args = build_parser().parse_args(["train", "--config", str(config), "--q", "2"])
    options = resolve_options(args)
    assert isinstance(options, TrainOptions)
    assert options.q == 2
    assert options.iters == 7
    assert options.data == ["a.csv", "b.csv"]
    assert options.m == 100


def test_infer_writes_latents(tmp_path, views):
    checkpoint = tmp_path / "model.ckpt"
    main(["train", "--data", str(views[0]), "--q", "2", "--m", "4", "--iters", "0", "--checkpoint", str(checkpoint)])
    Y, _ = load_matrix_csv(views[0])
    test_path = write_matrix_csv(Y[:3], tmp_path / "test.csv")
    out = tmp_path / "latents.csv"
    code = main(
        ["infer", "--checkpoint", str(checkpoint), "--data", str(test_path), "--train-data", str(views[0]),
         "--iters", "0", "--out", str(out)]
    )
    assert code == EXIT_OK
    latents, _ = load_matrix_csv(out)
    assert latents.shape == (3, 4)
    np.testing.assert_array_equal(latents[:, :2], load(checkpoint).posterior.mu[:3])


def test_infer_with_wrong_training_data(tmp_path, views):
    checkpoint = tmp_path / "model.ckpt"
    main(["train", "--data", str(views[0]), "--q", "2", "--m", "4", "--iters", "0", "--checkpoint", str(checkpoint)])
    code = main(
        ["infer", "--checkpoint", str(checkpoint), "--data", str(views[1]), "--train-data", str(views[1]),
         "--out", str(tmp_path / "out.csv")]
    )
    assert code == EXIT_USAGE


def test_eval_classify_on_training_points(tmp_path, views, capsys):
    checkpoint = tmp_path / "model.ckpt"
    main(["train", "--data", str(views[0]), "--q", "2", "--m", "4", "--iters", "0", "--checkpoint", str(checkpoint)])
    labels = tmp_path / "labels.csv"
    labels.write_text("".join(f"c{index % 3}\n" for index in range(12)), encoding="utf-8")
    capsys.readouterr()
    code = main(["eval", "--checkpoint", str(checkpoint), "--mode", "classify", "--labels", str(labels)])
    assert code == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["mode"] == "classify"
    assert report["accuracy"] == 1.0
    assert report["dims"] == [0, 1]


def test_eval_retrieve_matches_direct_computation(tmp_path):
    model = make_ss_model(seed=3, num_data=6, input_dim=2)
    model = model.model_copy(
        update={"posterior": model.posterior.model_copy(update={"gamma": np.array([0.9, 0.1])})}
    )
    checkpoint = save(model, tmp_path / "model.ckpt")
    queries = write_matrix_csv(model.posterior.mu[::-1] + 0.01, tmp_path / "queries.csv")
    out = tmp_path / "report.json"
    curve = tmp_path / "curve.csv"
    code = main(
        ["eval", "--checkpoint", str(checkpoint), "--mode", "retrieve", "--queries", str(queries),
         "--out", str(out), "--curve", str(curve)]
    )
    assert code == EXIT_OK
    report = json.loads(out.read_text(encoding="utf-8"))
    assert report["dims"] == [0]

    rankings = rank_by_distance(model.posterior.mu[::-1, [0]] + 0.01, model.posterior.mu[:, [0]])
    expected = mean_average_precision(rankings, np.eye(6, dtype=bool))
    assert report["mean_average_precision"] == pytest.approx(expected)
    assert load_matrix_csv(curve)[0].shape == (6, 2)


def test_eval_recovery(tmp_path, views, capsys):
    checkpoint = tmp_path / "model.ckpt"
    main(["train", "--data", str(views[0]), "--q", "2", "--m", "4", "--iters", "0", "--checkpoint", str(checkpoint)])
    truth = write_matrix_csv(np.random.default_rng(1).standard_normal((12, 3)), tmp_path / "truth.csv")
    capsys.readouterr()
    assert main(["eval", "--checkpoint", str(checkpoint), "--mode", "recovery", "--truth", str(truth)]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert len(report["recovery"]["assignment"]) == 3
    assert report["views"][0]["selected"] == [0, 1]
    assert report["views"][0]["lengthscale_reproduces"] is True


def test_eval_csv_report_is_numeric_row(tmp_path, views, capsys):
    checkpoint = tmp_path / "model.ckpt"
    main(["train", "--data", str(views[0]), "--q", "2", "--m", "4", "--iters", "0", "--checkpoint", str(checkpoint)])
    labels = tmp_path / "labels.csv"
    labels.write_text("".join(f"c{index % 3}\n" for index in range(12)), encoding="utf-8")
    capsys.readouterr()
    args = ["eval", "--checkpoint", str(checkpoint), "--mode", "classify", "--labels", str(labels)]
    assert main([*args, "--format", "csv"]) == EXIT_OK
    assert capsys.readouterr().out == "1,12\n"

    out = tmp_path / "report.csv"
    assert main([*args, "--format", "csv", "--out", str(out)]) == EXIT_OK
    row, _ = load_matrix_csv(out)
    np.testing.assert_array_equal(row, [[1.0, 12.0]])


def test_eval_csv_recovery_lists_signal_scores(tmp_path, views, capsys):
    checkpoint = tmp_path / "model.ckpt"
    main(["train", "--data", str(views[0]), "--q", "2", "--m", "4", "--iters", "0", "--checkpoint", str(checkpoint)])
    truth = write_matrix_csv(np.random.default_rng(2).standard_normal((12, 3)), tmp_path / "truth.csv")
    args = ["eval", "--checkpoint", str(checkpoint), "--mode", "recovery", "--truth", str(truth)]
    capsys.readouterr()
    main(args)
    scores = json.loads(capsys.readouterr().out)["recovery"]["scores"]
    out = tmp_path / "scores.csv"
    assert main([*args, "--format", "csv", "--out", str(out)]) == EXIT_OK
    np.testing.assert_array_equal(load_matrix_csv(out)[0], [scores])


def test_unknown_report_format():
    with pytest.raises(SystemExit):
        main(["eval", "--checkpoint", "x.ckpt", "--mode", "classify", "--format", "xml"])

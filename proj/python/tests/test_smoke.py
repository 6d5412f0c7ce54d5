import json
import os

import numpy as np
import pytest

import regerr


def test_exact_three_regressor_inversion():
    # Orthogonal sign patterns: cross moments vanish, variances are (1, 4, 9).
    truth = np.array([0.5, 1.0, 1.5, 2.0])
    signs = np.array([[1, 1, 1], [-1, 1, -1], [1, -1, -1], [-1, -1, 1]], dtype=float)
    errors = signs * np.array([1.0, 2.0, 3.0])
    stats = regerr.compute_pairwise_stats(truth[:, None] + errors)
    assert stats.regressors == 3
    assert stats.items == 4
    np.testing.assert_allclose(stats.delta_sq, [5.0, 10.0, 13.0])
    report = regerr.recover_moments_diagonal(stats)
    np.testing.assert_allclose(report.estimate, [1.0, 4.0, 9.0], atol=1e-12)
    assert report.mode == "diagonal-least-squares"


def test_full_mode_and_fusion():
    predictions, bundle = regerr.generate([1.0, 2.0, 3.0, 1.5], items=50000, seed=3)
    stats = regerr.compute_pairwise_stats(predictions)
    report = regerr.recover_moments_full(stats, noise_budget="auto")
    assert report.ok
    moments = report.moment_matrix()
    assert moments.shape == (4, 4)
    np.testing.assert_allclose(np.diag(moments), np.diag(bundle["true_moments"]), rtol=0.1)

    weights = regerr.inverse_variance_weights(np.diag(moments))
    assert weights.sum() == pytest.approx(1.0)
    fused = regerr.fuse(predictions, weights)
    fused_mse = np.mean((fused - bundle["truth"]) ** 2)
    average_mse = np.mean((predictions.mean(axis=1) - bundle["truth"]) ** 2)
    assert fused_mse < average_mse


def test_bias_majority_warning():
    truth = np.linspace(0.0, 1.0, 5)
    predictions = np.column_stack([truth, truth + 1.0, truth + 1.0])
    report = regerr.recover_bias(regerr.compute_pairwise_stats(predictions))
    np.testing.assert_allclose(report.estimate, [-1.0, 0.0, 0.0], atol=1e-12)
    assert any("majority" in w for w in report.warnings)


def test_errors_surface_as_value_errors(tmp_path):
    with pytest.raises(ValueError):
        regerr.recover_moments_diagonal(regerr.compute_pairwise_stats(np.ones((3, 2))))
    with pytest.raises(ValueError):
        regerr.compute_pairwise_stats(np.array([[1.0, np.nan]]))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n1,x\n")
    with pytest.raises(regerr.ParseError, match="row 2, column 2"):
        regerr.read_prediction_csv(str(bad))


def test_cli_in_process(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("x,y\n1,1\n2,2\n")
    code, out, err = regerr.run_cli(["stats", str(path), "--format", "json"])
    assert code == 0, err
    doc = json.loads(out)
    assert doc["stats"]["delta_sq"] == [0.0]

    config = os.path.join(os.environ.get("REGERR_CONFIG_DIR", "configs"), "fixture3.json")
    runs = [regerr.run_cli(["simulate", config, "-o", str(tmp_path / f"s{i}")]) for i in range(2)]
    assert runs[0] == runs[1]
    assert runs[0][0] == 0

import math

import numpy as np
import pytest

import vcsra


def test_closed_forms():
    p = vcsra.AnalyticParams(lambda_db=0.0)
    assert p.lambda_bar == pytest.approx(0.5)
    single = vcsra.p_av_single(p)
    assert 0.0 < single < 1.0
    assert vcsra.p_av_multi(0.5, 2) == pytest.approx(0.75)
    assert vcsra.asymptotic_sinr_cb(p) == pytest.approx(10 / 2.4)
    assert vcsra.asymptotic_sinr_zf(p) == pytest.approx(8.6)
    lam = vcsra.calibrate_lambda(p, target_pav=0.98, n_c=100)
    p.lambda_db = lam
    assert vcsra.p_av_multi(vcsra.p_av_single(p), 100) == pytest.approx(0.98, rel=1e-4)


def test_channels_and_beamformers():
    H = vcsra.draw_channels(8, seed=3, overrides=["model=simplified"])
    assert H.shape == (100, 8) and np.iscomplexobj(H)
    B = vcsra.zf_beamformers(H)
    G = B @ H
    assert np.max(np.abs(G - np.diag(np.diag(G)))) < 1e-8 * math.sqrt(100)
    np.testing.assert_allclose(np.linalg.norm(B, axis=1), math.sqrt(100))
    P = vcsra.orthogonal_complement(H)
    assert np.max(np.abs(P @ H)) < 1e-10
    S = vcsra.hadamard(8)
    np.testing.assert_array_equal(S.T @ S, 8 * np.eye(8))

    y = vcsra.noiseless_strength(H, H[:, :1])
    cb = vcsra.cb_beamformers(H)
    assert y[0] == pytest.approx(np.sum(np.abs(cb @ H[:, 0]) ** 2) / 100)


def test_admission():
    H = vcsra.draw_channels(8, seed=4, overrides=["model=simplified"])
    admitted, attempts = vcsra.sample_admitted(H, 3, 12.0, overrides=["model=simplified"])
    assert admitted.shape == (100, 3) and attempts >= 3
    strengths = vcsra.noiseless_strength(H, admitted)
    assert np.all(10 * np.log10(strengths) <= 12.0)


def test_monte_carlo():
    sim = ["model=simplified", "lambda_db=9", "N_R=3", "trials=30"]
    rates = vcsra.estimate_rates(overrides=sim)
    upper = rates["baseline_rates"]["upper_no_ra"]["mean"]
    lower = rates["baseline_rates"]["lower_unfiltered"]["mean"]
    assert upper >= rates["per_assigned_rate"]["mean"] >= lower
    assert 0 < rates["acceptance_rate"] <= 1
    assert vcsra.estimate_p_av(overrides=sim + ["lambda_db=inf"])["mean"] == 1.0

    table = vcsra.sweep("lambda_db", [6, 8, 10], overrides=sim)
    assert len(table) == 3
    p = table.column("p_av")
    assert p == sorted(p)
    assert table.to_csv().splitlines()[0].startswith("# vcsra_version")


def test_errors():
    with pytest.raises(vcsra.VcsraError, match="ValidationError"):
        vcsra.describe_config(overrides=["N_L=6"])
    with pytest.raises(vcsra.VcsraError, match="UnknownFigure"):
        vcsra.reproduce_figure("fig99", 0.1)
    with pytest.raises(ValueError):
        vcsra.describe_config("colour = blue\n")
    assert "fig12" in vcsra.figure_ids()

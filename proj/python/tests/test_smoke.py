import numpy as np
import pytest

import wrfrft


def centered_dft(x):
    # indices centered on (n - 1) / 2
    n = len(x)
    k = np.arange(n) - (n - 1) / 2
    return np.exp(-2j * np.pi * np.outer(k, k) / n) @ x / np.sqrt(n)


def test_frft_quarter_turn_is_centered_dft():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    y = wrfrft.frft(x, np.pi / 2, mode="exact")
    assert np.allclose(y, centered_dft(x), atol=1e-9)


@pytest.mark.parametrize("mode", ["exact", "closed_form"])
def test_frft_is_unitary(mode):
    rng = np.random.default_rng(4)
    x = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    y = wrfrft.frft(x, 0.83, mode=mode)
    assert np.linalg.norm(y) == pytest.approx(np.linalg.norm(x), rel=1e-9)


def test_exact_frft_inverts_with_negated_angle():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(128) + 1j * rng.standard_normal(128)
    assert np.allclose(wrfrft.frft(wrfrft.frft(x, 0.83, mode="exact"), -0.83, mode="exact"), x, atol=1e-9)


def test_alpha_mapping_is_right_angle_without_acceleration():
    assert wrfrft.alpha_for(0.0, 0.755, 3.0) == pytest.approx(np.pi / 2)
    assert 0 < wrfrft.alpha_for(26.0, 0.755, 3.0) < np.pi / 2


def test_echo_round_trip(tmp_path):
    echo = wrfrft.synthesize("table2", snr_db=4.0, seed=5)
    assert echo.shape == (800, 512)
    path = tmp_path / "e.wre"
    wrfrft.save_echo(echo, str(path), dtype="complex128")
    assert np.array_equal(wrfrft.load_echo(str(path)), echo)


def test_noiseless_search_finds_truth():
    peak = wrfrft.search("table2", seed=1, coarsen=[30, 30, 1, 4, 6])
    assert peak["eta0_s"] == pytest.approx(0.755)
    assert peak["eta1_s"] == pytest.approx(3.0)
    assert peak["v_mps"] == pytest.approx(90.0)
    assert peak["a_mps2"] == pytest.approx(26.0)
    assert peak["detected"] is False  # search alone does not run CFAR


def test_errors_surface_as_exceptions(tmp_path):
    with pytest.raises(wrfrft.WrfrftError, match="unknown preset"):
        wrfrft.synthesize("nope")
    with pytest.raises(wrfrft.WrfrftError):
        wrfrft.load_echo(str(tmp_path / "missing.wre"))
    with pytest.raises(wrfrft.WrfrftError):
        wrfrft.run_config('{"preset": "table2", "colour": 1}')


def test_run_config_writes_artifacts(tmp_path):
    out = tmp_path / "run"
    rep = wrfrft.run_config(
        '{"preset": "table2-single", "output_dir": "%s", "noise": {"snr_db": 4, "seed": 9}}' % out
    )
    assert rep["peak"]["detected"]
    assert (out / "peak.json").exists()
    assert "detected" in rep["summary"]

import math

import numpy as np
import pytest

from sernft import DiscreteSpectrum, SampledPulse
from sernft.bench import (FAILED, UNMATCHED, ExperimentConfig, add_awgn, circular_variance, family_spectrum,
                          match_estimates, measure_bandwidth, noise_variance, prepare_batch,
                          run_duration_experiment, run_separation_experiment, run_snr_experiment,
                          run_truncation_experiment, score_estimates)

from conftest import sech_pulse


def test_sech_bandwidth_matches_closed_form():
    # |FT sech|^2 ~ sech^2(pi^2 f): in-band fraction is tanh(pi^2 B / 2)
    pulse = sech_pulse(1.0, -60.0, 60.0, 2 ** 15)
    expected = 2 * math.atanh(0.9999) / math.pi ** 2
    df = 1 / (pulse.size * pulse.step)
    assert measure_bandwidth(pulse, 0.9999) == pytest.approx(expected, abs=2 * df)


def test_bandwidth_padding_invariance_and_full_band():
    pulse = sech_pulse(1.0, -30.0, 30.0, 4096)
    padded = SampledPulse(pulse.t_start - 30, pulse.step, np.concatenate([np.zeros(2048), pulse.samples,
                                                                          np.zeros(2048)]))
    df = 1 / (pulse.size * pulse.step)
    assert measure_bandwidth(padded) == pytest.approx(measure_bandwidth(pulse), abs=2 * df)
    full = measure_bandwidth(pulse, 1.0)
    assert full == pytest.approx(1 / pulse.step, rel=2e-3)
    with pytest.raises(ValueError):
        measure_bandwidth(pulse, 0)


def test_awgn_contract():
    pulse = sech_pulse(1.0, -20.0, 20.0, 1024)
    assert add_awgn(pulse, math.inf, 1.0, 0) is pulse
    a = add_awgn(pulse, 20, 1.0, 7)
    b = add_awgn(pulse, 20, 1.0, 7)
    np.testing.assert_array_equal(a.samples, b.samples)
    with pytest.raises(ValueError):
        add_awgn(pulse, 20, 1e6, 0)
    with pytest.raises(ValueError):
        add_awgn(pulse, 20, 0.0, 0)


def test_in_band_noise_power_matches_snr():
    pulse = sech_pulse(1.0, -20.0, 20.0, 512)
    b_max, snr_db = 2.0, 17.0
    power = np.mean(np.abs(pulse.samples) ** 2)
    freq = np.fft.fftfreq(pulse.size, pulse.step)
    band = np.abs(freq) <= b_max / 2
    rng = np.random.default_rng(3)
    ratios = []
    for _ in range(1000):
        noise = add_awgn(pulse, snr_db, b_max, rng).samples - pulse.samples
        spec = np.abs(np.fft.fft(noise)) ** 2 / pulse.size ** 2
        ratios.append(spec[band].sum() / power)
    assert np.mean(ratios) == pytest.approx(10 ** (-snr_db / 10), rel=0.02)
    assert noise_variance(pulse, snr_db, b_max) > 0


def test_circular_variance():
    assert circular_variance(np.zeros(10)) == 0
    small = np.random.default_rng(0).normal(0, 0.01, 100000)
    assert circular_variance(small) == pytest.approx(1e-4, rel=0.02)
    assert circular_variance(small + 2 * np.pi) == pytest.approx(circular_variance(small))
    assert math.isnan(circular_variance([]))


def test_matching_and_scoring():
    truth = DiscreteSpectrum([2j, 1j, 0.5j], [1, 1j, -1])
    est = DiscreteSpectrum([1.02j, 2.01j], [1j * np.exp(0.1j), np.exp(-0.2j)])
    assert match_estimates(truth, est) == [1, 0, None]
    err, status = score_estimates(truth, [(2j, 2.01j, np.exp(-0.2j)), (1j, 1.02j, 1j * np.exp(0.1j)),
                                          (0.5j, None, None)])
    np.testing.assert_allclose(err[:2], [-0.2, 0.1])
    assert list(status) == [0, 0, FAILED]
    err, status = score_estimates(truth, [(0.5j, 1.4j, 1.0)])
    assert list(status) == [UNMATCHED, UNMATCHED, UNMATCHED]


def test_family_spectrum():
    spec = family_spectrum("a")
    np.testing.assert_array_equal(spec.eigenvalues, [9j, 7j, 5j, 3j, 0.5j])
    np.testing.assert_array_equal(spec.b, [-1, 1, -1, 1, -1])
    with pytest.raises(ValueError):
        family_spectrum("z")


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(snr_grid_db=(10, math.inf))
    with pytest.raises(ValueError):
        ExperimentConfig(oversampling=0.5)
    with pytest.raises(ValueError):
        ExperimentConfig(experiment="fig9")


def test_duration_experiment_rows():
    res = run_duration_experiment(ExperimentConfig("duration", spectrum_family="c", samples=2048))
    assert [row["n"] for row in res.table()] == [5, 4, 3, 2, 1]
    assert res.alpha == pytest.approx(0.46, abs=0.05)
    quantities = {r.quantity for r in res.rows()}
    assert {"T_n", "T_n_predicted", "alpha", "alpha_predicted"} <= quantities


@pytest.fixture(scope="module")
def small_batch():
    cfg = ExperimentConfig("snr_sweep", trials=6, seed=11, snr_grid_db=(20.0, 35.0))
    return cfg, prepare_batch(cfg)


def test_batch_protocol(small_batch):
    cfg, batch = small_batch
    assert len(batch.trials) + batch.excluded == 6
    assert batch.step == pytest.approx(1 / (4 * max(t.bandwidth for t in batch.trials)))
    for trial in batch.trials:
        assert len(trial.schedule) == 5
        assert trial.pulse.step == batch.step


def test_snr_experiment_is_deterministic(small_batch):
    cfg, batch = small_batch
    a = run_snr_experiment(cfg, batch)
    b = run_snr_experiment(cfg, batch)
    np.testing.assert_array_equal(a.variance("ser"), b.variance("ser"))
    assert (a.variance("ser")[1] < a.variance("ser")[0]).all()
    assert [r.quantity for r in a.rows()][:2] == ["b_max", "sampling_step"]


def test_truncation_experiment_shape(small_batch):
    cfg, batch = small_batch
    res = run_truncation_experiment(cfg, batch)
    assert sorted(res.classical_at) == [1, 2, 3, 4, 5]
    assert res.ser.counts().sum() + res.ser.excluded.sum() + res.ser.unmatched.sum() == 5 * len(batch.trials)


def test_separation_experiment():
    res = run_separation_experiment(ExperimentConfig("separation", deltas=(1e-4j, 1e-6j)))
    for row in res.rows_:
        assert row.measured_plus == pytest.approx(row.predicted_plus, rel=1e-3)
    assert res.slope == pytest.approx(1 / res.sigma_n, rel=0.01)

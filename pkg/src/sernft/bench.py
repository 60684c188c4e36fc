"""Benchmark experiments: durations, noise sweeps, truncation, separation, round trip.

Every runner returns a result object with a ``rows()`` method producing
flat :class:`ResultRow` records for the long-format results CSV.  Random
draws use per-trial streams seeded from ``(seed, trial, ...)`` so results
do not depend on evaluation order.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.signal import find_peaks

from .analysis import complexity_factor, duration_estimate, duration_staircase, separation_predict
from .darboux import DEFAULT_EPSILON, Grid, default_grid, synthesize
from .errors import NFTError
from .nft import effective_support, pulse_energy
from .ser import SerConfig, SerReport, classical_decompose, ser_decompose, truncate_to_window
from .signals import DiscreteSpectrum, SampledPulse, sort_guesses

log = logging.getLogger(__name__)

FAMILIES: dict[str, tuple[complex, ...]] = {
    "a": (9j, 7j, 5j, 3j, 0.5j),
    "b": (0.58j, 0.56j, 0.54j, 0.52j, 0.5j),
    "c": (2.5j, 2j, 1.5j, 1j, 0.5j),
}

FIG2_PHASES = (0.24, 4.90, 0.58, 3.98, 0.09)
FIG2_ADDED_PHASE = 5.88

EXPERIMENTS = ("duration", "snr_sweep", "truncation", "roundtrip", "separation")


def family_spectrum(family: str, phases: Sequence[float] | None = None) -> DiscreteSpectrum:
    """Named eigenvalue set with b_k = (-1)^k, or exp(j phi_k) when phases are given.

    k = 1..N follows the listed order (decreasing Im).
    """
    try:
        lam = np.array(FAMILIES[family])
    except KeyError:
        raise ValueError(f"unknown spectrum family {family!r}; known: {sorted(FAMILIES)}") from None
    if phases is None:
        b = np.array([(-1.0) ** k for k in range(1, lam.size + 1)], dtype=complex)
    else:
        b = np.exp(1j * np.asarray(phases, dtype=float))
    return DiscreteSpectrum(lam, b)


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "duration"
    spectrum_family: str = "c"
    spectrum: DiscreteSpectrum | None = None
    trials: int = 100
    snr_grid_db: tuple[float, ...] = (10.0, 15.0, 20.0, 25.0, 30.0, 35.0)
    epsilon: float = DEFAULT_EPSILON
    seed: int = 0
    oversampling: float = 4.0
    samples: int = 4096
    energy_fraction: float = 0.9999
    deltas: tuple[complex, ...] = (1e-4j, 1e-6j, 1e-8j)

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"experiment must be one of {EXPERIMENTS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not all(math.isfinite(s) for s in self.snr_grid_db):
            raise ValueError("SNR values must be finite")
        if self.oversampling < 1:
            raise ValueError("oversampling must be >= 1")

    def base_spectrum(self, phases: Sequence[float] | None = None) -> DiscreteSpectrum:
        if self.spectrum is not None:
            if phases is None:
                return self.spectrum
            return DiscreteSpectrum(self.spectrum.eigenvalues,
                                    np.abs(self.spectrum.b) * np.exp(1j * np.asarray(phases)))
        return family_spectrum(self.spectrum_family, phases)


@dataclass(frozen=True)
class ResultRow:
    experiment: str
    trial: int
    eigenvalue_index: int
    quantity: str
    value: float


# -- signal-level helpers -------------------------------------------------------------

def measure_bandwidth(pulse: SampledPulse, energy_fraction: float = 0.9999) -> float:
    """Width of the narrowest band around the spectral centroid holding ``energy_fraction``.

    Frequencies are in cycles per unit of normalized time.  Bins are
    accumulated outward from the centroid in order of distance.
    """
    if not 0 < energy_fraction <= 1:
        raise ValueError("energy_fraction must lie in (0, 1]")
    spec = np.abs(np.fft.fft(pulse.samples)) ** 2
    freq = np.fft.fftfreq(pulse.size, pulse.step)
    total = spec.sum()
    if total == 0:
        return 0.0
    centroid = float(np.sum(freq * spec) / total)
    dist = np.abs(freq - centroid)
    if energy_fraction == 1:
        return float(2 * dist.max())
    order = np.argsort(dist, kind="stable")
    cum = np.cumsum(spec[order])
    k = int(np.searchsorted(cum, energy_fraction * total * (1 - 1e-12)))
    k = min(k, order.size - 1)
    return float(2 * dist[order[k]])


def _generator(rng_seed) -> np.random.Generator:
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)


def noise_variance(pulse: SampledPulse, snr_db: float, b_max: float) -> float:
    """Per-sample complex noise variance putting power P/SNR inside B_max."""
    fs = 1 / pulse.step
    if not b_max > 0:
        raise ValueError("b_max must be positive")
    if fs < b_max:
        raise ValueError(f"sampling rate {fs:.4g} is below the bandwidth {b_max:.4g}")
    if math.isinf(snr_db):
        return 0.0
    power = pulse_energy(pulse) / (pulse.size * pulse.step)
    return power * (fs / b_max) / 10 ** (snr_db / 10)


def add_awgn(pulse: SampledPulse, snr_db: float, b_max: float, rng_seed=None) -> SampledPulse:
    """Add circular complex white Gaussian noise at the in-band SNR."""
    var = noise_variance(pulse, snr_db, b_max)
    if var == 0:
        return pulse
    rng = _generator(rng_seed)
    noise = rng.standard_normal((2, pulse.size))
    noise = math.sqrt(var / 2) * (noise[0] + 1j * noise[1])
    return pulse.with_samples(pulse.samples + noise)


def circular_variance(errors: np.ndarray) -> float:
    """Small-angle variance -2 ln|mean exp(j dphi)| of phase errors (wrap-safe)."""
    errors = np.asarray(errors, dtype=float)
    if errors.size == 0:
        return float("nan")
    r = min(abs(np.mean(np.exp(1j * errors))), 1.0)
    return float(-2 * math.log(r)) + 0.0 if r > 0 else float("inf")


def match_estimates(truth: DiscreteSpectrum, estimate: DiscreteSpectrum,
                    radius: float | None = None) -> list[int | None]:
    """Index into ``estimate`` for every true eigenvalue (nearest within radius)."""
    if radius is None:
        gap = truth.min_gap()
        radius = 0.25 * gap if math.isfinite(gap) else 0.25 * truth.eigenvalues[0].imag
    out: list[int | None] = []
    used: set[int] = set()
    for lam in truth.eigenvalues:
        if len(estimate) == 0:
            out.append(None)
            continue
        d = np.abs(estimate.eigenvalues - lam)
        j = int(np.argmin(d))
        if d[j] <= radius and j not in used:
            out.append(j)
            used.add(j)
        else:
            out.append(None)
    return out


def phase_errors(truth: DiscreteSpectrum, estimate: DiscreteSpectrum) -> np.ndarray:
    """Wrapped arg(b_hat / b) per true eigenvalue; NaN where unmatched."""
    err = np.full(len(truth), np.nan)
    for k, j in enumerate(match_estimates(truth, estimate)):
        if j is not None:
            err[k] = np.angle(estimate.b[j] / truth.b[k])
    return err


def eigenvalue_errors(truth: DiscreteSpectrum, estimate: DiscreteSpectrum) -> np.ndarray:
    err = np.full(len(truth), np.nan)
    for k, j in enumerate(match_estimates(truth, estimate)):
        if j is not None:
            err[k] = abs(estimate.eigenvalues[j] - truth.eigenvalues[k])
    return err


# -- durations ---------------------------------------------------------------------

@dataclass
class DurationResult:
    family: str
    durations: list[float]          # T^(n), n = 1..N
    predicted: list[float]          # duration_estimate staircase, n = 1..N
    alpha: float
    alpha_predicted: float
    report: SerReport
    pulse: SampledPulse

    def rows(self) -> list[ResultRow]:
        rows = [ResultRow("duration", 0, n, "T_n", d) for n, d in enumerate(self.durations, 1)]
        rows += [ResultRow("duration", 0, n, "T_n_predicted", d)
                 for n, d in enumerate(self.predicted, 1)]
        rows += [ResultRow("duration", 0, 0, "alpha", self.alpha),
                 ResultRow("duration", 0, 0, "alpha_predicted", self.alpha_predicted)]
        return rows

    def table(self) -> list[dict]:
        """Wide rows n, T_n, alpha with n counting down from N."""
        n_total = len(self.durations)
        return [{"n": n, "T_n": self.durations[n - 1], "alpha": self.alpha}
                for n in range(n_total, 0, -1)]


def run_duration_experiment(config: ExperimentConfig) -> DurationResult:
    """Noise-free SER on a synthesized pulse; reports T^(n) and alpha_N.

    The pulse is sampled with step T/samples, T being the predicted duration;
    the true eigenvalues serve as initial guesses.
    """
    spectrum = config.base_spectrum()
    t_pred = duration_estimate(spectrum, config.epsilon)
    grid = default_grid(spectrum, step=t_pred / config.samples, epsilon=config.epsilon)
    pulse = synthesize(spectrum, grid, epsilon=config.epsilon)
    report = ser_decompose(pulse, spectrum.eigenvalues.tolist(), SerConfig(epsilon=config.epsilon))
    predicted = duration_staircase(spectrum, config.epsilon)
    return DurationResult(config.spectrum_family if config.spectrum is None else "file",
                          report.durations, predicted, report.alpha_factor,
                          complexity_factor(predicted), report, pulse)


# -- Monte-Carlo batch shared by the SNR and truncation runs -------------------------

@dataclass
class Trial:
    index: int
    spectrum: DiscreteSpectrum
    pulse: SampledPulse
    schedule: list[tuple[float, float]]   # SER windows T^(N)..T^(1)
    bandwidth: float


@dataclass
class Batch:
    trials: list[Trial]
    b_max: float
    step: float
    excluded: int


def _trial_phases(seed: int, trial: int, size: int) -> np.ndarray:
    rng = np.random.default_rng((seed, trial, 0))
    return rng.uniform(0, 2 * np.pi, size)


def _noise_rng(seed: int, trial: int, snr_index: int) -> np.random.Generator:
    return np.random.default_rng((seed, trial, 1, snr_index))


def prepare_batch(config: ExperimentConfig) -> Batch:
    """Random-phase pulses sampled at f_s = oversampling * max bandwidth of the batch.

    Each pulse covers its own noise-free effective support; its SER window
    schedule comes from a noise-free SER run on the sampled pulse.
    """
    base = config.base_spectrum()
    n = len(base)
    sigma_min = base.eigenvalues.imag.min()
    threshold = 2 * sigma_min * math.sqrt(config.epsilon)
    drafts = []
    for i in range(config.trials):
        spec = config.base_spectrum(_trial_phases(config.seed, i, n))
        ref = synthesize(spec, default_grid(spec, config.samples, epsilon=config.epsilon),
                         epsilon=config.epsilon)
        window = effective_support(ref, threshold)
        drafts.append((i, spec, window, measure_bandwidth(ref, config.energy_fraction)))
    b_max = max(d[3] for d in drafts)
    step = 1 / (config.oversampling * b_max)
    trials, excluded = [], 0
    guesses = base.eigenvalues.tolist()
    for i, spec, (t0, t1), bw in drafts:
        size = int(math.ceil((t1 - t0) / step)) + 1
        pulse = synthesize(spec, Grid(t0, step, size), check_grid=False)
        try:
            rep = ser_decompose(pulse, guesses, SerConfig(epsilon=config.epsilon, truncate_initial=False))
        except NFTError as exc:
            log.warning("trial %d: noise-free SER failed: %s", i, exc)
            excluded += 1
            continue
        if rep.failures:
            excluded += 1
            continue
        trials.append(Trial(i, spec, pulse, [r.window for r in rep.iterations], bw))
    return Batch(trials, b_max, step, excluded)


@dataclass
class ErrorAccumulator:
    """Per-eigenvalue phase errors for one (method, condition) cell."""

    n: int
    errors: list[list[float]] = field(init=False)
    excluded: np.ndarray = field(init=False)
    unmatched: np.ndarray = field(init=False)

    def __post_init__(self):
        self.errors = [[] for _ in range(self.n)]
        self.excluded = np.zeros(self.n, dtype=int)
        self.unmatched = np.zeros(self.n, dtype=int)

    def add(self, scored: tuple[np.ndarray, np.ndarray]) -> None:
        err, status = scored
        for k in range(self.n):
            if status[k] == 0:
                self.errors[k].append(float(err[k]))
            elif status[k] == FAILED:
                self.excluded[k] += 1
            else:
                self.unmatched[k] += 1

    def variances(self) -> np.ndarray:
        return np.array([circular_variance(e) for e in self.errors])

    def counts(self) -> np.ndarray:
        return np.array([len(e) for e in self.errors])


FAILED, UNMATCHED = -1, -2


def score_estimates(truth: DiscreteSpectrum,
                    estimates: Sequence[tuple[complex, complex | None, complex | None]]) -> tuple[np.ndarray, np.ndarray]:
    """Phase errors per true eigenvalue plus a status code.

    ``estimates`` holds (guess, lambda_hat, b_hat) triples, with None for a
    failed refinement.  Successful estimates are matched to the truth by
    nearest neighbour within 0.25 times the minimum eigenvalue gap.  The
    status is 0 for a matched estimate, FAILED when the refinement started
    nearest to that eigenvalue failed and nothing matched it, and UNMATCHED
    otherwise.
    """
    n = len(truth)
    good = [(lam, b) for _, lam, b in estimates if lam is not None and b is not None and np.isfinite(b) and b != 0]
    est = DiscreteSpectrum.from_pairs(good) if good else DiscreteSpectrum.empty()
    failed = np.zeros(n, dtype=bool)
    for guess, lam, b in estimates:
        if lam is None or b is None:
            failed[int(np.argmin(np.abs(truth.eigenvalues - guess)))] = True
    err = np.full(n, np.nan)
    status = np.where(failed, FAILED, UNMATCHED)
    for k, j in enumerate(match_estimates(truth, est)):
        if j is not None:
            err[k] = np.angle(est.b[j] / truth.b[k])
            status[k] = 0
    return err, status


def _all_failed(trial: Trial) -> tuple[np.ndarray, np.ndarray]:
    n = len(trial.spectrum)
    return np.full(n, np.nan), np.full(n, FAILED)


def _ser_errors(trial: Trial, noisy: SampledPulse, config: ExperimentConfig,
                guesses: list[complex]) -> np.ndarray:
    try:
        rep = ser_decompose(noisy, guesses, SerConfig(epsilon=config.epsilon, windows=trial.schedule))
    except NFTError:
        return _all_failed(trial)
    return score_estimates(trial.spectrum, [(r.guess, r.lambda_hat, r.b_hat) for r in rep.iterations])


def _classical_errors(trial: Trial, pulse: SampledPulse, guesses: list[complex],
                      windows=None) -> np.ndarray:
    try:
        res = classical_decompose(pulse, guesses, windows=windows)
    except NFTError:
        return _all_failed(trial)
    return score_estimates(trial.spectrum, [(g, *(e or (None, None))) for g, e in zip(res.guesses, res.per_guess)])


# -- SNR sweep ---------------------------------------------------------------------

@dataclass
class SnrResult:
    snr_db: list[float]
    ser: list[ErrorAccumulator]
    classical: list[ErrorAccumulator]
    b_max: float
    step: float
    trials_used: int
    trials_excluded: int
    seconds: float

    def variance(self, method: str) -> np.ndarray:
        """Array (len(snr), N) of phase-error variances."""
        accs = self.ser if method == "ser" else self.classical
        return np.array([a.variances() for a in accs])

    def excluded(self, method: str) -> np.ndarray:
        accs = self.ser if method == "ser" else self.classical
        return np.array([a.excluded for a in accs])

    def unmatched(self, method: str) -> np.ndarray:
        accs = self.ser if method == "ser" else self.classical
        return np.array([a.unmatched for a in accs])

    def rows(self) -> list[ResultRow]:
        rows = [ResultRow("snr_sweep", -1, 0, "b_max", self.b_max),
                ResultRow("snr_sweep", -1, 0, "sampling_step", self.step),
                ResultRow("snr_sweep", -1, 0, "trials_used", self.trials_used),
                ResultRow("snr_sweep", -1, 0, "trials_excluded", self.trials_excluded)]
        for s, snr in enumerate(self.snr_db):
            for method in ("ser", "classical"):
                acc = (self.ser if method == "ser" else self.classical)[s]
                for k, (v, x, u) in enumerate(zip(acc.variances(), acc.excluded, acc.unmatched), 1):
                    rows.append(ResultRow("snr_sweep", -1, k, f"var_phase_{method}@{snr:g}dB", v))
                    rows.append(ResultRow("snr_sweep", -1, k, f"excluded_{method}@{snr:g}dB", float(x)))
                    rows.append(ResultRow("snr_sweep", -1, k, f"unmatched_{method}@{snr:g}dB", float(u)))
        return rows


def run_snr_experiment(config: ExperimentConfig, batch: Batch | None = None) -> SnrResult:
    """Phase-error variance of SER and the classical method versus SNR."""
    started = time.perf_counter()
    batch = batch or prepare_batch(config)
    n = len(config.base_spectrum())
    guesses = config.base_spectrum().eigenvalues.tolist()
    ser_acc = [ErrorAccumulator(n) for _ in config.snr_grid_db]
    cls_acc = [ErrorAccumulator(n) for _ in config.snr_grid_db]
    for trial in batch.trials:
        for s, snr in enumerate(config.snr_grid_db):
            noisy = add_awgn(trial.pulse, snr, batch.b_max, _noise_rng(config.seed, trial.index, s))
            ser_acc[s].add(_ser_errors(trial, noisy, config, guesses))
            cls_acc[s].add(_classical_errors(trial, noisy, guesses))
    return SnrResult(list(config.snr_grid_db), ser_acc, cls_acc, batch.b_max, batch.step,
                     len(batch.trials), batch.excluded, time.perf_counter() - started)


# -- truncation --------------------------------------------------------------------

@dataclass
class TruncationResult:
    snr_db: float
    classical_at: dict[int, ErrorAccumulator]   # n -> classical on the T^(n)-truncated pulse
    ser: ErrorAccumulator
    classical_matched: ErrorAccumulator
    trials_used: int
    seconds: float

    def rows(self) -> list[ResultRow]:
        rows = [ResultRow("truncation", -1, 0, "snr_db", self.snr_db),
                ResultRow("truncation", -1, 0, "trials_used", self.trials_used)]
        cells = [(f"classical_T{n}", acc) for n, acc in sorted(self.classical_at.items(), reverse=True)]
        cells += [("ser", self.ser), ("classical_matched", self.classical_matched)]
        for name, acc in cells:
            for k, (v, x, u) in enumerate(zip(acc.variances(), acc.excluded, acc.unmatched), 1):
                rows.append(ResultRow("truncation", -1, k, f"var_phase_{name}", v))
                rows.append(ResultRow("truncation", -1, k, f"excluded_{name}", float(x)))
                rows.append(ResultRow("truncation", -1, k, f"unmatched_{name}", float(u)))
        return rows


def run_truncation_experiment(config: ExperimentConfig, batch: Batch | None = None,
                              snr_db: float = 30.0) -> TruncationResult:
    """Classical decoding on pulses truncated to the SER windows T^(N)..T^(1).

    Eigenvalue indices in the output follow the spectrum listing
    (decreasing Im), so T^(1) is the window of eigenvalue 1.
    """
    started = time.perf_counter()
    batch = batch or prepare_batch(config)
    base = config.base_spectrum()
    n_total = len(base)
    guesses = base.eigenvalues.tolist()
    ascending = sort_guesses(guesses, descending=False)
    classical_at = {n: ErrorAccumulator(n_total) for n in range(n_total, 0, -1)}
    ser_acc = ErrorAccumulator(n_total)
    matched_acc = ErrorAccumulator(n_total)
    for trial in batch.trials:
        noisy = add_awgn(trial.pulse, snr_db, batch.b_max, _noise_rng(config.seed, trial.index, 1000))
        for i, window in enumerate(trial.schedule):
            n = n_total - i
            try:
                cut = truncate_to_window(noisy, window)
            except NFTError:
                classical_at[n].add((np.full(n_total, np.nan), np.full(n_total, FAILED)))
                continue
            classical_at[n].add(_classical_errors(trial, cut, guesses))
        ser_acc.add(_ser_errors(trial, noisy, config, guesses))
        matched_acc.add(_classical_errors(trial, noisy, ascending, windows=trial.schedule))
    return TruncationResult(snr_db, classical_at, ser_acc, matched_acc, len(batch.trials),
                            time.perf_counter() - started)


# -- separation geometry -------------------------------------------------------------

@dataclass
class SeparationRow:
    delta: complex
    predicted_plus: float
    predicted_minus: float
    measured_plus: float
    measured_minus: float

    @property
    def measured_distance(self) -> float:
        return self.measured_plus + self.measured_minus


@dataclass
class SeparationResult:
    sigma_n: float
    rows_: list[SeparationRow]
    slope: float
    pulses: list[SampledPulse]

    def rows(self) -> list[ResultRow]:
        out = []
        for i, r in enumerate(self.rows_):
            out += [ResultRow("separation", i, 0, "delta_abs", abs(r.delta)),
                    ResultRow("separation", i, 0, "t_delta_plus_predicted", r.predicted_plus),
                    ResultRow("separation", i, 0, "t_delta_minus_predicted", r.predicted_minus),
                    ResultRow("separation", i, 0, "t_delta_plus_measured", r.measured_plus),
                    ResultRow("separation", i, 0, "t_delta_minus_measured", r.measured_minus)]
        out.append(ResultRow("separation", -1, 0, "distance_slope", self.slope))
        out.append(ResultRow("separation", -1, 0, "distance_slope_predicted", 1 / self.sigma_n))
        return out


def _peak_time(pulse: SampledPulse, index: int) -> float:
    """Sub-sample peak position from a parabola through ln|q| at three samples."""
    y = np.log(np.abs(pulse.samples[index - 1:index + 2]))
    denom = y[0] - 2 * y[1] + y[2]
    offset = 0.5 * (y[0] - y[2]) / denom if denom != 0 else 0.0
    return pulse.t_start + (index + offset) * pulse.step


def outer_peaks(pulse: SampledPulse, min_height: float) -> tuple[float, float]:
    """Times of the leftmost and rightmost local maxima of |q| above min_height."""
    peaks, _ = find_peaks(np.abs(pulse.samples), height=min_height)
    if peaks.size < 2:
        raise ValueError("fewer than two peaks above the height threshold")
    return _peak_time(pulse, int(peaks[0])), _peak_time(pulse, int(peaks[-1]))


def fig2_spectrum() -> DiscreteSpectrum:
    return family_spectrum("c", FIG2_PHASES)


def run_separation_experiment(config: ExperimentConfig, step: float = 0.005) -> SeparationResult:
    """Add (lambda_n + delta, b_hat) to the reference five-soliton pulse and locate the split-off solitons."""
    base = config.spectrum if config.spectrum is not None else fig2_spectrum()
    srt = base.sorted()
    lam_n = srt.eigenvalues[-1]
    sigma_n = lam_n.imag
    b_added = np.exp(1j * FIG2_ADDED_PHASE)
    rows, pulses = [], []
    for delta in config.deltas:
        pred = separation_predict(base, delta, b_added)
        half = max(pred.t_delta_plus, pred.t_delta_minus) + 6 / (2 * sigma_n)
        size = int(math.ceil(2 * half / step)) + 1
        spec = base.with_entry(lam_n + delta, b_added)
        pulse = synthesize(spec, Grid(-half, step, size), check_grid=False)
        left, right = outer_peaks(pulse, sigma_n)
        rows.append(SeparationRow(complex(delta), pred.t_delta_plus, pred.t_delta_minus, right, -left))
        pulses.append(pulse)
    x = np.log(1 / np.abs(np.array([r.delta for r in rows])))
    y = np.array([r.measured_distance for r in rows])
    slope = float(np.polyfit(x, y, 1)[0]) if len(rows) > 1 else float("nan")
    return SeparationResult(sigma_n, rows, slope, pulses)


# -- noise-free round trip -----------------------------------------------------------------

@dataclass
class RoundTripResult:
    eigenvalue_errors: np.ndarray   # (trials, N)
    phase_errors: np.ndarray        # (trials, N)
    seconds: float

    def rows(self) -> list[ResultRow]:
        out = []
        for t in range(self.eigenvalue_errors.shape[0]):
            for k in range(self.eigenvalue_errors.shape[1]):
                out.append(ResultRow("roundtrip", t, k + 1, "abs_delta_lambda", self.eigenvalue_errors[t, k]))
                out.append(ResultRow("roundtrip", t, k + 1, "abs_delta_phi", abs(self.phase_errors[t, k])))
        return out


def run_roundtrip_experiment(config: ExperimentConfig) -> RoundTripResult:
    """Random-phase pulses synthesized with step T/samples, decomposed noise-free by SER."""
    started = time.perf_counter()
    base = config.base_spectrum()
    guesses = base.eigenvalues.tolist()
    lam_err = np.full((config.trials, len(base)), np.nan)
    phi_err = np.full((config.trials, len(base)), np.nan)
    for i in range(config.trials):
        spec = config.base_spectrum(_trial_phases(config.seed, i, len(base)))
        t_pred = duration_estimate(spec, config.epsilon)
        pulse = synthesize(spec, default_grid(spec, step=t_pred / config.samples, epsilon=config.epsilon),
                           epsilon=config.epsilon)
        try:
            rep = ser_decompose(pulse, guesses, SerConfig(epsilon=config.epsilon))
        except NFTError as exc:
            log.warning("round-trip trial %d failed: %s", i, exc)
            continue
        lam_err[i] = eigenvalue_errors(spec, rep.recovered)
        phi_err[i] = phase_errors(spec, rep.recovered)
    return RoundTripResult(lam_err, phi_err, time.perf_counter() - started)

"""Successive eigenvalue removal and the classical no-modification baseline."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .analysis import complexity_factor
from .darboux import DEFAULT_EPSILON, darboux_update
from .eigenfinder import CollocationConfig, NewtonConfig, fourier_collocation, newton_refine
from .errors import AllBelowThresholdError, EmptyGuessListError, NFTError
from .nft import jost_solution, pulse_energy, scattering_run, split_from_fraction, support_indices
from .signals import DiscreteSpectrum, SampledPulse, sort_guesses

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SerConfig:
    """SER settings.

    ``removal_order`` is "ascending_im", "descending_im" or an explicit list
    of guess indices.  ``windows`` optionally replaces threshold truncation
    by a fixed schedule of (T_-, T_+) windows, one per iteration, the first
    being the initial window.
    """

    epsilon: float = DEFAULT_EPSILON
    removal_order: str | Sequence[int] = "ascending_im"
    p_fraction: float = 0.5
    newton: NewtonConfig = field(default_factory=NewtonConfig)
    validate_energy: bool = True
    energy_tol: float = 0.02
    truncate_initial: bool = True
    windows: Sequence[tuple[float, float]] | None = None
    stitch_tol: float = 1e-3

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0 < self.p_fraction < 1:
            raise ValueError("p_fraction must lie in (0, 1)")


@dataclass
class IterationRecord:
    n: int
    guess: complex
    lambda_hat: complex | None
    b_hat: complex | None
    newton_iters: int
    window: tuple[float, float]
    samples_used: int
    energy_before: float
    energy_after: float | None
    energy_check_pass: bool | None
    error: str | None = None

    @property
    def duration(self) -> float:
        return self.window[1] - self.window[0]


@dataclass
class SerReport:
    iterations: list[IterationRecord]
    alpha_factor: float
    recovered: DiscreteSpectrum
    residual_energy: float

    @property
    def durations(self) -> list[float]:
        """T^(n) ordered n = 1..N."""
        return [it.duration for it in sorted(self.iterations, key=lambda r: r.n)]

    @property
    def failures(self) -> list[IterationRecord]:
        return [it for it in self.iterations if it.error is not None]


def truncate(pulse: SampledPulse, threshold: float) -> SampledPulse:
    """Keep the effective support of ``pulse`` for the given threshold."""
    i0, i1 = support_indices(pulse, threshold)
    return pulse.window(i0, i1 + 1)


def truncate_to_window(pulse: SampledPulse, window: tuple[float, float]) -> SampledPulse:
    """Keep samples whose times fall inside ``window`` (within half a step)."""
    t = pulse.t
    tol = 0.5 * pulse.step
    idx = np.flatnonzero((t >= window[0] - tol) & (t <= window[1] + tol))
    if idx.size < 2:
        raise AllBelowThresholdError(f"window {window} holds fewer than two samples")
    return pulse.window(int(idx[0]), int(idx[-1]) + 1)


def energy_validation(e_before: float, e_after: float, lambda_n: complex, tol: float) -> bool:
    """True iff the energy decrement equals 4 Im(lambda_n) within relative tol."""
    expected = 4 * complex(lambda_n).imag
    return abs((e_before - e_after) - expected) <= tol * expected


def _ordered_guesses(guesses: Sequence[complex], order) -> list[complex]:
    if isinstance(order, str):
        if order == "ascending_im":
            return sort_guesses(guesses, descending=False)
        if order == "descending_im":
            return sort_guesses(guesses, descending=True)
        raise ValueError(f"unknown removal order {order!r}")
    order = list(order)
    if sorted(order) != list(range(len(guesses))):
        raise ValueError("explicit removal order must be a permutation of the guess indices")
    return [complex(guesses[i]) for i in order]


def _threshold(lam: complex, epsilon: float) -> float:
    return 2 * lam.imag * math.sqrt(epsilon)


def ser_decompose(pulse: SampledPulse, initial_guesses: Sequence[complex] | None = None,
                  config: SerConfig | None = None,
                  collocation: CollocationConfig | None = None) -> SerReport:
    """Refine, estimate b, remove and truncate, one eigenvalue at a time.

    Without ``initial_guesses`` the guesses come from Fourier collocation.
    A failed refinement is recorded and the loop moves on with the pulse
    unchanged.
    """
    config = config or SerConfig()
    if initial_guesses is None:
        initial_guesses = fourier_collocation(pulse, collocation)
    guesses = _ordered_guesses(list(initial_guesses), config.removal_order)
    if not guesses:
        raise EmptyGuessListError("SER needs at least one eigenvalue guess")
    n_total = len(guesses)
    windows = list(config.windows) if config.windows is not None else None
    if windows is not None and len(windows) < n_total:
        raise ValueError("the window schedule needs one window per eigenvalue")

    current = pulse
    if windows is not None:
        current = truncate_to_window(current, windows[0])
    elif config.truncate_initial:
        current = truncate(current, _threshold(guesses[0], config.epsilon))

    records: list[IterationRecord] = []
    recovered: list[tuple[complex, complex]] = []
    residual = None
    for i, guess in enumerate(guesses):
        n = n_total - i
        window = (current.t_start, current.t_end)
        e_before = pulse_energy(current)
        record = IterationRecord(n, guess, None, None, 0, window, current.size, e_before, None, None)
        records.append(record)
        try:
            res = newton_refine(current, guess, config.newton)
            record.lambda_hat, record.newton_iters = res.lam, res.iters
            run = scattering_run(current, res.lam, split_from_fraction(current.size, config.p_fraction))
            _, b_hat = run.fb_coefficients()
            record.b_hat = b_hat
            theta = jost_solution(current, res.lam, b_hat=b_hat, stitch_tol=config.stitch_tol, run=run)
            reduced = darboux_update(current, theta, res.lam)
        except NFTError as exc:
            record.error = f"{type(exc).__name__}: {exc}"
            log.warning("SER iteration n=%d (guess %s) failed: %s", n, guess, record.error)
            continue
        recovered.append((res.lam, b_hat))

        if i + 1 < n_total:
            try:
                if windows is not None:
                    reduced = truncate_to_window(reduced, windows[i + 1])
                else:
                    reduced = truncate(reduced, _threshold(guesses[i + 1], config.epsilon))
            except AllBelowThresholdError as exc:
                record.error = f"{type(exc).__name__}: {exc}"
                current = reduced
                continue
            current = reduced
            record.energy_after = pulse_energy(current)
        else:
            # no next eigenvalue: what is left is reported as the residual floor
            record.energy_after = pulse_energy(reduced)
            residual = record.energy_after
            current = reduced
        if config.validate_energy:
            record.energy_check_pass = energy_validation(e_before, record.energy_after, res.lam,
                                                         config.energy_tol)

    if residual is None:
        residual = pulse_energy(current)
    durations = [r.duration for r in sorted(records, key=lambda r: r.n)]
    alpha = complexity_factor(durations)
    spectrum = DiscreteSpectrum.from_pairs(recovered)
    return SerReport(records, alpha, spectrum, residual)


@dataclass
class ClassicalResult:
    spectrum: DiscreteSpectrum
    failures: list[tuple[complex, str]]
    guesses: list[complex]
    per_guess: list[tuple[complex, complex] | None]


def classical_decompose(pulse: SampledPulse, initial_guesses: Sequence[complex],
                        newton: NewtonConfig | None = None, p_fraction: float = 0.5,
                        windows: Sequence[tuple[float, float]] | None = None) -> ClassicalResult:
    """Refine every guess and estimate its b on the unmodified pulse.

    ``windows`` optionally gives a per-guess truncation window (same order
    as the guesses) applied to the unmodified pulse before that guess.
    """
    guesses = [complex(g) for g in initial_guesses]
    if not guesses:
        raise EmptyGuessListError("classical decomposition needs at least one guess")
    found: list[tuple[complex, complex]] = []
    failures: list[tuple[complex, str]] = []
    per_guess: list[tuple[complex, complex] | None] = []
    for i, guess in enumerate(guesses):
        target = pulse if windows is None else truncate_to_window(pulse, windows[i])
        try:
            res = newton_refine(target, guess, newton)
            run = scattering_run(target, res.lam, split_from_fraction(target.size, p_fraction))
            _, b_hat = run.fb_coefficients()
        except NFTError as exc:
            failures.append((guess, f"{type(exc).__name__}: {exc}"))
            per_guess.append(None)
            log.warning("classical refinement of %s failed: %s", guess, exc)
            continue
        found.append((res.lam, b_hat))
        per_guess.append((res.lam, b_hat))
    return ClassicalResult(DiscreteSpectrum.from_pairs(found), failures, guesses, per_guess)

"""Closed-form predictions: tails, durations, complexity and separation geometry.

Spectra are indexed in decreasing order of Im(lambda) here, so lambda_n is
the eigenvalue with the smallest imaginary part and lambda_{n-1} the next.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AlphaDegenerateError
from .signals import DiscreteSpectrum


def _shift_log(lam_n: complex, others: np.ndarray) -> float:
    """ln |prod_k (lam_n - lam_k*) / (lam_n - lam_k)|."""
    if others.size == 0:
        return 0.0
    return float(np.sum(np.log(np.abs(lam_n - np.conj(others))) - np.log(np.abs(lam_n - others))))


def tail_shift(spectrum: DiscreteSpectrum) -> float:
    """t_s of the smallest-Im eigenvalue relative to all the others."""
    srt = spectrum.sorted()
    lam = srt.eigenvalues
    return _shift_log(lam[-1], lam[:-1]) / (2 * lam[-1].imag)


@dataclass(frozen=True)
class TailAsymptote:
    side: str
    amplitude: float
    rate: float
    t_s: float

    def envelope(self, t):
        """|q(t)| ~ amplitude * exp(-+rate (t -+ t_s)) on this side."""
        t = np.asarray(t, dtype=float)
        if self.side == "right":
            return self.amplitude * np.exp(-self.rate * (t - self.t_s))
        return self.amplitude * np.exp(self.rate * (t + self.t_s))


def tail_asymptote(spectrum: DiscreteSpectrum, side: str) -> TailAsymptote:
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    srt = spectrum.sorted()
    sigma = srt.eigenvalues[-1].imag
    b_abs = abs(srt.b[-1])
    power = 1 if side == "right" else -1
    return TailAsymptote(side, 4 * sigma * b_abs ** power, 2 * sigma, tail_shift(srt))


def duration_estimate(spectrum: DiscreteSpectrum, epsilon: float) -> float:
    """T ~ 2 t_s + ln(4/eps) / (2 sigma_n)."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    sigma = spectrum.sorted().eigenvalues[-1].imag
    return 2 * tail_shift(spectrum) + math.log(4 / epsilon) / (2 * sigma)


def duration_staircase(spectrum: DiscreteSpectrum, epsilon: float) -> list[float]:
    """Predicted T^(n) for n = 1..N under removal in increasing Im order."""
    srt = spectrum.sorted()
    return [duration_estimate(DiscreteSpectrum(srt.eigenvalues[:n], srt.b[:n]), epsilon)
            for n in range(1, len(srt) + 1)]


def complexity_factor(durations: Sequence[float]) -> float:
    """alpha_N = sum_n T^(n) / (N T^(N)); ``durations`` ordered n = 1..N."""
    d = np.asarray(durations, dtype=float)
    if d.size == 0 or np.any(d <= 0):
        raise ValueError("durations must be positive and non-empty")
    return float(d.sum() / (d.size * d[-1]))


@dataclass(frozen=True)
class SeparationPrediction:
    t_delta_plus: float
    t_delta_minus: float
    phi_delta_plus: float
    phi_delta_minus: float
    t_th_plus: float
    t_th_minus: float
    t0: float
    alpha_plus: complex
    alpha_minus: complex

    @property
    def distance(self) -> float:
        return self.t_delta_plus + self.t_delta_minus


def _alphas(b_true: complex, b_added: complex) -> tuple[complex, complex]:
    # |b|^{-1} e^{-j phi} = 1/b
    return b_added - b_true, 1 / b_added - 1 / b_true


def separation_predict(spectrum: DiscreteSpectrum, delta: complex, b_n_added: complex,
                       b_n_true: complex | None = None) -> SeparationPrediction:
    """First-order positions of the two solitons split off by adding lambda_n + delta.

    ``spectrum`` holds the true {(lambda_k, b_k)}; lambda_n is its
    smallest-Im eigenvalue and ``b_n_true`` defaults to its b.
    """
    srt = spectrum.sorted()
    lam, b = srt.eigenvalues, srt.b
    if lam.size < 2:
        raise ValueError("separation geometry needs at least two eigenvalues")
    lam_n = lam[-1]
    sigma_n = lam_n.imag
    b_true = b[-1] if b_n_true is None else complex(b_n_true)
    alpha_p, alpha_m = _alphas(b_true, complex(b_n_added))
    scale = max(abs(b_true), abs(1 / b_true))
    if min(abs(alpha_p), abs(alpha_m)) <= 1e-12 * scale:
        raise AlphaDegenerateError("added amplitude equals the true amplitude; solitons do not separate")
    prod = np.prod((lam_n - np.conj(lam[:-1])) / (lam_n - lam[:-1]))
    core = 2j * sigma_n / complex(delta) * prod
    z_p, z_m = core * alpha_p, core * alpha_m
    td_p = math.log(abs(z_p)) / (2 * sigma_n)
    td_m = math.log(abs(z_m)) / (2 * sigma_n)

    lam_prev = lam[-2]
    sigma_prev = lam_prev.imag
    t0 = _shift_log(lam_prev, lam[:-2]) / (2 * sigma_prev)
    b_prev = abs(b[-2])
    denom = sigma_n + sigma_prev
    th_p = (0.5 * math.log(b_prev * sigma_prev / sigma_n) + sigma_n * td_p + sigma_prev * t0) / denom
    th_m = -(0.5 * math.log(sigma_prev / (b_prev * sigma_n)) + sigma_n * td_m + sigma_prev * t0) / denom
    return SeparationPrediction(td_p, td_m, float(np.angle(z_p)), float(np.angle(z_m)),
                                th_p, th_m, t0, alpha_p, alpha_m)


def delta_bound_branches(spectrum: DiscreteSpectrum, epsilon: float,
                         b_n_added: complex, b_n_true: complex | None = None) -> tuple[float, float]:
    """Both branches (+, -) of the admissible |delta / sigma_n| bound."""
    srt = spectrum.sorted()
    lam, b = srt.eigenvalues, srt.b
    if lam.size < 2:
        raise ValueError("the delta bound needs N >= 2")
    sigma_n, sigma_prev = lam[-1].imag, lam[-2].imag
    b_true = b[-1] if b_n_true is None else complex(b_n_true)
    alpha_p, alpha_m = _alphas(b_true, complex(b_n_added))
    t_s = tail_shift(srt)
    t0 = _shift_log(lam[-2], lam[:-2]) / (2 * sigma_prev)
    root = math.sqrt(epsilon)
    common = root * sigma_prev / sigma_n * math.exp(2 * sigma_n * (t_s - t0))
    b_prev = abs(b[-2])
    ratio = sigma_n / sigma_prev
    plus = abs(alpha_p) * common * (root / (2 * b_prev)) ** ratio
    minus = abs(alpha_m) * common * (root / (2 / b_prev)) ** ratio
    return plus, minus


def delta_bound(spectrum: DiscreteSpectrum, epsilon: float, b_n_added: complex,
                b_n_true: complex | None = None) -> float:
    """Largest admissible |delta / sigma_n| (max over the two branches)."""
    return max(delta_bound_branches(spectrum, epsilon, b_n_added, b_n_true))

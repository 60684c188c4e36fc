"""Eigenvalue localization: Fourier collocation guesses and Newton refinement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import EigensolverError, LeftHalfPlaneError, NoCandidatesError, NoConvergenceError
from .nft import a_and_derivative, spectral_coefficients, support_indices
from .signals import SampledPulse


@dataclass(frozen=True)
class CollocationConfig:
    """Fourier collocation settings.

    ``modes=None`` uses min(M/2, 128).  ``period=None`` uses the measured
    support plus four soliton widths 1/(2 sigma_hint).
    """

    modes: int | None = None
    period: float | None = None
    im_floor: float = 1e-3
    residual_ceiling: float = 1e-2
    sigma_hint: float = 0.5
    dedup_tol: float = 1e-6

    def __post_init__(self):
        if self.modes is not None and self.modes < 1:
            raise ValueError("modes must be >= 1")
        if self.period is not None and not self.period > 0:
            raise ValueError("period must be positive")
        if not self.im_floor > 0:
            raise ValueError("im_floor must be positive")


@dataclass(frozen=True)
class NewtonConfig:
    tol: float = 1e-10
    max_iter: int = 30
    damping: float = 1.0
    max_halvings: int = 30

    def __post_init__(self):
        if not self.tol > 0 or self.max_iter < 1 or not 0 < self.damping <= 1:
            raise ValueError("need tol > 0, max_iter >= 1 and damping in (0, 1]")


class NewtonResult(NamedTuple):
    lam: complex
    residual: float
    iters: int


def _fourier_coefficients(pulse: SampledPulse, period: float, kmax: int) -> tuple[np.ndarray, float]:
    """c_k = (1/L) int q(t) exp(-2 pi j k (t - t_start) / L) dt for |k| <= kmax."""
    h = pulse.step
    n_period = max(int(math.ceil(period / h)), pulse.size, 2 * kmax + 1)
    period = n_period * h
    padded = np.zeros(n_period, dtype=np.complex128)
    padded[:pulse.size] = pulse.samples
    spec = np.fft.fft(padded) / n_period
    k = np.arange(-kmax, kmax + 1)
    return spec[k % n_period], period


def collocation_matrix(pulse: SampledPulse, modes: int, period: float) -> np.ndarray:
    """Matrix of lambda*theta = [[j d/dt, -j q], [-j q*, -j d/dt]] theta on 2K+1 modes."""
    c, period = _fourier_coefficients(pulse, period, 2 * modes)
    n = 2 * modes + 1
    idx = np.arange(n)
    diff = idx[:, None] - idx[None, :]  # m - n in [-2K, 2K]
    q_mat = c[diff + 2 * modes]
    # coefficients of q*: d_k = conj(c_{-k})
    qc_mat = np.conj(c[-diff + 2 * modes])
    wave = 2 * np.pi * np.arange(-modes, modes + 1) / period
    mat = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    mat[:n, :n] = np.diag(-wave)
    mat[n:, n:] = np.diag(wave)
    mat[:n, n:] = -1j * q_mat
    mat[n:, :n] = -1j * qc_mat
    return mat


def _default_period(pulse: SampledPulse, sigma_hint: float) -> float:
    peak = np.abs(pulse.samples).max()
    try:
        i0, i1 = support_indices(pulse, 1e-6 * peak)
        span = (i1 - i0) * pulse.step
    except Exception:
        span = pulse.duration
    return span + 4 / (2 * sigma_hint)


def fourier_collocation(pulse: SampledPulse, config: CollocationConfig | None = None) -> list[complex]:
    """Coarse discrete eigenvalues from the dense collocation eigenproblem.

    Candidates must have Im > im_floor and |a(lambda)| < residual_ceiling.
    """
    config = config or CollocationConfig()
    if not np.any(pulse.samples):
        raise NoCandidatesError("the pulse is identically zero")
    modes = config.modes or min(pulse.size // 2, 128)
    period = config.period or _default_period(pulse, config.sigma_hint)
    mat = collocation_matrix(pulse, modes, period)
    try:
        ev = scipy.linalg.eigvals(mat, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(str(exc)) from exc
    ev = ev[np.isfinite(ev) & (ev.imag > config.im_floor)]
    ev = ev[np.argsort(-ev.imag)]
    kept: list[complex] = []
    for lam in ev:
        if any(abs(lam - k) < config.dedup_tol * max(1.0, abs(k)) for k in kept):
            continue
        a, _ = spectral_coefficients(pulse, lam)
        if abs(a) < config.residual_ceiling:
            kept.append(complex(lam))
    if not kept:
        raise NoCandidatesError("no collocation eigenvalue passed the filters")
    return kept


def newton_refine(pulse: SampledPulse, lambda0: complex, config: NewtonConfig | None = None) -> NewtonResult:
    """Newton iteration on a(lambda) = 0 using the propagated derivative.

    Steps that leave the upper half plane are retried with halved damping.
    """
    config = config or NewtonConfig()
    lam = complex(lambda0)
    if not lam.imag > 0:
        raise ValueError("starting point must lie in the upper half plane")
    for it in range(1, config.max_iter + 1):
        a, da = a_and_derivative(pulse, lam)
        if da == 0 or not np.isfinite(da) or not np.isfinite(a):
            raise NoConvergenceError(f"derivative of a vanishes or is not finite at {lam}")
        step = a / da
        damping = config.damping
        new = lam - damping * step
        halvings = 0
        while not new.imag > 0:
            halvings += 1
            if halvings > config.max_halvings:
                raise LeftHalfPlaneError(f"Newton step from {lam} cannot stay in the upper half plane")
            damping /= 2
            new = lam - damping * step
        lam = new
        if abs(damping * step) < config.tol:
            a, _ = spectral_coefficients(pulse, lam)
            return NewtonResult(lam, abs(a), it)
    raise NoConvergenceError(f"no convergence from {lambda0} within {config.max_iter} iterations "
                             f"(last iterate {lam})")

"""Darboux transformation: multi-soliton synthesis and eigenvalue removal."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateEigenvalueError, GridTooSmallError, VanishingDenominatorError
from .nft import JostSolution, jost_solution, scattering_run
from .signals import DiscreteSpectrum, SampledPulse

DEFAULT_EPSILON = 2e-4


@dataclass(frozen=True)
class Grid:
    t_start: float
    step: float
    size: int

    @property
    def t(self) -> np.ndarray:
        return self.t_start + self.step * np.arange(self.size)

    @property
    def duration(self) -> float:
        return (self.size - 1) * self.step


def _dt_correction(theta: np.ndarray, mu: complex) -> np.ndarray:
    """2j(mu* - mu) theta_2* theta_1 / (|theta_1|^2 + |theta_2|^2), per sample."""
    th1, th2 = theta
    norm2 = np.abs(th1) ** 2 + np.abs(th2) ** 2
    bad = ~(norm2 > 0) | ~np.isfinite(norm2)
    if np.any(bad):
        idx = int(np.flatnonzero(bad)[0])
        raise VanishingDenominatorError(
            f"|theta_1|^2 + |theta_2|^2 vanishes or overflows at sample {idx}")
    return 2j * (np.conj(mu) - mu) * np.conj(th2) * th1 / norm2


def darboux_update(pulse: SampledPulse, theta: JostSolution | np.ndarray, mu: complex) -> SampledPulse:
    """Apply the Darboux signal update with the ZSS solution theta at mu.

    ``theta`` is either a JostSolution or a (2, M) array of per-sample scaled
    solution values.  If mu is already an eigenvalue and theta its bound
    state, the eigenvalue is removed; otherwise mu is added.
    """
    arr = theta.normalized() if isinstance(theta, JostSolution) else np.asarray(theta)
    if arr.shape != (2, pulse.size):
        raise ValueError(f"theta has shape {arr.shape}, expected (2, {pulse.size})")
    return pulse.with_samples(pulse.samples + _dt_correction(arr, complex(mu)))


def _vacuum_seed(lam: complex, b: complex, t: np.ndarray) -> np.ndarray:
    # (e^{-j lam t}, -b e^{j lam t}); the ratio enforces b for every later dressing
    shift = lam.imag * np.abs(t)
    th1 = np.exp(-1j * lam * t - shift)
    th2 = -b * np.exp(1j * lam * t - shift)
    return _rescale(np.vstack([th1, th2]))


def _rescale(theta: np.ndarray) -> np.ndarray:
    scale = np.maximum(np.abs(theta[0]), np.abs(theta[1]))
    scale[scale == 0] = 1.0
    return theta / scale


def _dress(theta_used: np.ndarray, mu: complex, theta_other: np.ndarray, lam: complex) -> np.ndarray:
    """Dressing matrix D(lam) = (lam - mu*) I - (mu - mu*) P applied per sample.

    P is the orthogonal projector onto theta_used.
    """
    u1, u2 = theta_used
    v1, v2 = theta_other
    norm2 = np.abs(u1) ** 2 + np.abs(u2) ** 2
    proj = (np.conj(u1) * v1 + np.conj(u2) * v2) / norm2
    out1 = (lam - np.conj(mu)) * v1 - (mu - np.conj(mu)) * proj * u1
    out2 = (lam - np.conj(mu)) * v2 - (mu - np.conj(mu)) * proj * u2
    return _rescale(np.vstack([out1, out2]))


@dataclass
class DressingState:
    """Current pulse plus the auxiliary solutions of not-yet-added eigenvalues."""

    pulse: SampledPulse
    pending: list[tuple[complex, complex]]
    auxiliary: list[np.ndarray] = field(default_factory=list)

    @classmethod
    def vacuum(cls, spectrum: DiscreteSpectrum, grid: Grid) -> "DressingState":
        t = grid.t
        pulse = SampledPulse(grid.t_start, grid.step, np.zeros(grid.size, complex))
        pending = list(spectrum)
        return cls(pulse, pending, [_vacuum_seed(lam, b, t) for lam, b in pending])

    def add_next(self, index: int = 0) -> None:
        """Add pending eigenvalue ``index`` and dress the remaining auxiliaries."""
        mu, _ = self.pending.pop(index)
        theta = self.auxiliary.pop(index)
        self.pulse = darboux_update(self.pulse, theta, mu)
        self.auxiliary = [_dress(theta, mu, aux, lam)
                          for (lam, _), aux in zip(self.pending, self.auxiliary)]


def check_distinct(spectrum: DiscreteSpectrum) -> None:
    lam = spectrum.eigenvalues
    for i in range(lam.size):
        for k in range(i):
            if lam[i] == lam[k]:
                raise DuplicateEigenvalueError(f"eigenvalue {lam[i]} appears more than once")


def synthesize(spectrum: DiscreteSpectrum, grid: Grid | tuple, *, check_grid: bool = True,
               epsilon: float = DEFAULT_EPSILON) -> SampledPulse:
    """Multi-soliton with the prescribed discrete spectrum, sampled on ``grid``.

    Eigenvalues are added in order of increasing Im(lambda).  With
    ``check_grid`` the grid length must cover the predicted effective support
    (``analysis.duration_estimate`` at ``epsilon``).
    """
    grid = grid if isinstance(grid, Grid) else Grid(*grid)
    check_distinct(spectrum)
    if len(spectrum) == 0:
        return SampledPulse(grid.t_start, grid.step, np.zeros(grid.size, complex))
    if check_grid:
        from .analysis import duration_estimate
        need = duration_estimate(spectrum, epsilon)
        if need > grid.duration:
            raise GridTooSmallError(
                f"predicted support {need:.4g} exceeds grid length {grid.duration:.4g}")
    state = DressingState.vacuum(spectrum.sorted(descending=False), grid)
    while state.pending:
        state.add_next(0)
    return state.pulse


def default_grid(spectrum: DiscreteSpectrum, samples: int | None = None, *,
                 step: float | None = None, epsilon: float = DEFAULT_EPSILON,
                 pad: float = 0.2) -> Grid:
    """Grid covering the predicted support padded by ``pad`` plus one tail decay length per side.

    Centred at ln|b_n| / (2 sigma_n) of the smallest-Im eigenvalue, where
    the two tail asymptotes balance.  Give either ``samples`` or ``step``.
    """
    from .analysis import duration_estimate
    srt = spectrum.sorted()
    sigma_n = srt.eigenvalues[-1].imag
    centre = math.log(abs(srt.b[-1])) / (2 * sigma_n)
    width = (1 + pad) * duration_estimate(spectrum, epsilon) + 2 * (1 / (2 * sigma_n))
    if step is None:
        if samples is None:
            raise ValueError("give samples or step")
        step = width / (samples - 1)
    else:
        samples = int(math.ceil(width / step)) + 1
    return Grid(centre - (samples - 1) * step / 2, step, samples)


def remove_eigenvalue(pulse: SampledPulse, lambda_hat: complex, p: int | None = None,
                      stitch_tol: float = 1e-3, scheme="midpoint") -> tuple[SampledPulse, complex]:
    """Remove an eigenvalue by Darboux update with its numerical bound state.

    Returns the reduced pulse and the forward-backward b estimate.
    """
    run = scattering_run(pulse, lambda_hat, p, scheme)
    _, b_hat = run.fb_coefficients()
    theta = jost_solution(pulse, lambda_hat, b_hat=b_hat, stitch_tol=stitch_tol, run=run, scheme=scheme)
    return darboux_update(pulse, theta, lambda_hat), b_hat


def propagate_spectrum(spectrum: DiscreteSpectrum, z: float) -> DiscreteSpectrum:
    """b_k(z) = exp(-4j lambda_k^2 z) b_k(0); eigenvalues are invariant."""
    lam = spectrum.eigenvalues
    return DiscreteSpectrum(lam, spectrum.b * np.exp(-4j * lam ** 2 * z))


@dataclass(frozen=True)
class PhysicalScaling:
    """Normalization constants: T0 [s], beta2 [s^2/m], gamma [1/(W m)]."""

    T0: float
    beta2: float
    gamma: float

    def __post_init__(self):
        if not (self.T0 > 0 and self.gamma > 0 and self.beta2 != 0):
            raise ValueError("need T0 > 0, gamma > 0 and beta2 != 0")

    @property
    def P0(self) -> float:
        return abs(self.beta2) / (self.gamma * self.T0 ** 2)

    def distance(self, z: float) -> float:
        """Physical length [m] for normalized distance z."""
        return z * 2 * self.T0 ** 2 / abs(self.beta2)

    def normalized_distance(self, length: float) -> float:
        return length * abs(self.beta2) / (2 * self.T0 ** 2)


def to_physical(pulse: SampledPulse, scaling: PhysicalScaling) -> SampledPulse:
    """Envelope in sqrt(W) on a time axis in seconds."""
    return SampledPulse(pulse.t_start * scaling.T0, pulse.step * scaling.T0,
                        pulse.samples * math.sqrt(scaling.P0))


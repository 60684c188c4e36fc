"""Time-domain pulses and discrete nonlinear spectra."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class SampledPulse:
    """Uniformly sampled complex envelope q_m = q(t_start + m*step)."""

    t_start: float
    step: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.complex128)
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("a pulse needs at least two samples")
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "t_start", float(self.t_start))
        object.__setattr__(self, "step", float(self.step))

    @classmethod
    def from_function(cls, func, t_start: float, step: float, count: int) -> "SampledPulse":
        t = t_start + step * np.arange(count)
        return cls(t_start, step, func(t))

    @property
    def size(self) -> int:
        return self.samples.size

    def __len__(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return self.t_start + self.step * np.arange(self.samples.size)

    @property
    def t_end(self) -> float:
        return self.t_start + (self.samples.size - 1) * self.step

    @property
    def duration(self) -> float:
        """T_+ - T_-, the span between first and last sample."""
        return (self.samples.size - 1) * self.step

    def with_samples(self, samples: np.ndarray) -> "SampledPulse":
        return SampledPulse(self.t_start, self.step, samples)

    def window(self, start: int, stop: int) -> "SampledPulse":
        """Sub-pulse made of samples[start:stop] on the same grid."""
        return SampledPulse(self.t_start + start * self.step, self.step, self.samples[start:stop])


def _as_complex_array(values) -> np.ndarray:
    return np.array(values, dtype=np.complex128, ndmin=1)


@dataclass(frozen=True)
class DiscreteSpectrum:
    """Ordered eigenvalue / spectral-amplitude pairs (lambda_k, b_k)."""

    eigenvalues: np.ndarray
    b: np.ndarray = field(default=None)

    def __post_init__(self):
        lam = _as_complex_array(self.eigenvalues)
        b = np.ones_like(lam) if self.b is None else _as_complex_array(self.b)
        if lam.shape != b.shape:
            raise ValueError("eigenvalues and b must have the same length")
        if np.any(lam.imag <= 0):
            raise ValueError("discrete eigenvalues must lie in the upper half plane")
        lam.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "b", b)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[complex, complex]]) -> "DiscreteSpectrum":
        pairs = list(pairs)
        if not pairs:
            return cls(np.zeros(0, complex), np.zeros(0, complex))
        lam, b = zip(*pairs)
        return cls(np.array(lam, complex), np.array(b, complex))

    @classmethod
    def empty(cls) -> "DiscreteSpectrum":
        return cls.from_pairs([])

    def __len__(self) -> int:
        return self.eigenvalues.size

    def __iter__(self):
        return iter(zip(self.eigenvalues.tolist(), self.b.tolist()))

    @property
    def entries(self) -> list[tuple[complex, complex]]:
        return list(self)

    def order(self, descending: bool = True) -> np.ndarray:
        """Indices sorting by Im(lambda); ties broken by ascending Re(lambda)."""
        im = self.eigenvalues.imag
        key_im = -im if descending else im
        return np.lexsort((self.eigenvalues.real, key_im))

    def sorted(self, descending: bool = True) -> "DiscreteSpectrum":
        idx = self.order(descending)
        return DiscreteSpectrum(self.eigenvalues[idx], self.b[idx])

    def without(self, index: int) -> "DiscreteSpectrum":
        keep = np.arange(len(self)) != index
        return DiscreteSpectrum(self.eigenvalues[keep], self.b[keep])

    def with_entry(self, lam: complex, b: complex) -> "DiscreteSpectrum":
        return DiscreteSpectrum(np.append(self.eigenvalues, lam), np.append(self.b, b))

    def min_gap(self) -> float:
        lam = self.eigenvalues
        if lam.size < 2:
            return np.inf
        d = np.abs(lam[:, None] - lam[None, :])
        return float(d[~np.eye(lam.size, dtype=bool)].min())


def sort_guesses(guesses: Sequence[complex], descending: bool = False) -> list[complex]:
    """Order eigenvalue guesses by Im, ties by ascending Re."""
    arr = np.asarray(list(guesses), dtype=np.complex128)
    key_im = -arr.imag if descending else arr.imag
    return arr[np.lexsort((arr.real, key_im))].tolist()

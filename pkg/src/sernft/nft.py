"""Discretized Zakharov-Shabat scattering.

Conventions
-----------
The ZSS is ``d/dt theta = [[-j lam, q], [-q*, j lam]] theta`` and all
recursions run in the rotated frame ``Psi = (theta_1 e^{j lam t},
theta_2 e^{-j lam t})``.  Sample ``m`` is taken as the centre of the cell
``[t_m - h/2, t_m + h/2]``; node ``m`` of a trajectory (``forward[m]`` or
``backward[m]``) is the left edge of cell ``m``, so an ``M``-sample pulse
has ``M + 1`` nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import _kernels
from .errors import AllBelowThresholdError, DegenerateDivisionError, StitchMismatchError
from .signals import SampledPulse

_SINC_GUARD = 1e-8


class StepEntries(NamedTuple):
    s11: np.ndarray
    s12: np.ndarray
    s21: np.ndarray
    s22: np.ndarray


def _midpoint_entries(q, t, h, lam) -> StepEntries:
    q = np.asarray(q, dtype=np.complex128)
    t = np.asarray(t, dtype=np.float64)
    absq = np.abs(q)
    x = absq * h
    c = np.cos(x).astype(np.complex128)
    small = np.abs(x) < _SINC_GUARD
    sinc = np.where(small, h * (1.0 - x * x / 6.0), np.sin(x) / np.where(small, 1.0, absq))
    qs = q * sinc
    s12 = np.zeros_like(qs)
    s21 = np.zeros_like(qs)
    nz = qs != 0
    # exp(log(.)) keeps e^{+-2 j lam t} from overflowing where q*sinc is tiny
    log_qs = np.log(qs[nz])
    phase = 2j * lam * t[nz]
    # far from the real axis the entries can overflow; callers check finiteness
    with np.errstate(over="ignore", invalid="ignore"):
        s12[nz] = np.exp(log_qs + phase)
        s21[nz] = -np.exp(np.conj(log_qs) - phase)
    return StepEntries(c, s12, s21, c.copy())


def _midpoint_derivative(entries: StepEntries, t) -> StepEntries:
    zero = np.zeros_like(entries.s11)
    with np.errstate(invalid="ignore"):
        return StepEntries(zero, 2j * t * entries.s12, -2j * t * entries.s21, zero)


@dataclass(frozen=True)
class Scheme:
    """One-step discretization: step-matrix entries and their lambda-derivative."""

    name: str
    entries: Callable[..., StepEntries]
    derivative: Callable[[StepEntries, np.ndarray], StepEntries]


SCHEMES: dict[str, Scheme] = {
    "midpoint": Scheme("midpoint", _midpoint_entries, _midpoint_derivative),
}


def get_scheme(scheme: str | Scheme) -> Scheme:
    if isinstance(scheme, Scheme):
        return scheme
    try:
        return SCHEMES[scheme]
    except KeyError:
        raise ValueError(f"unknown scattering scheme {scheme!r}; known: {sorted(SCHEMES)}") from None


def transfer_matrix(q_m: complex, t_m: float, h: float, lam: complex,
                    scheme: str | Scheme = "midpoint") -> np.ndarray:
    """Step matrix S_m mapping node m to node m+1."""
    e = get_scheme(scheme).entries(np.array([q_m]), np.array([t_m]), h, complex(lam))
    return np.array([[e.s11[0], e.s12[0]], [e.s21[0], e.s22[0]]])


def _entries(pulse: SampledPulse, lam, h=None, scheme="midpoint") -> StepEntries:
    return get_scheme(scheme).entries(pulse.samples, pulse.t, pulse.step if h is None else h,
                                      complex(lam))


def propagate_forward(pulse: SampledPulse, lam: complex, scheme="midpoint") -> np.ndarray:
    """Nodes w^(0..M) with w^(0) = (1, 0) and w^(m+1) = S_m w^(m)."""
    return _kernels.forward_trajectory(*_entries(pulse, lam, scheme=scheme))


def propagate_backward(pulse: SampledPulse, lam: complex, scheme="midpoint") -> np.ndarray:
    """Nodes u^(0..M) with u^(M) = (0, 1) and u^(m) = S_m^{-1} u^(m+1).

    The inverse step is the step matrix evaluated with -h.
    """
    return _kernels.backward_trajectory(*_entries(pulse, lam, h=-pulse.step, scheme=scheme))


def spectral_coefficients(pulse: SampledPulse, lam: complex, scheme="midpoint") -> tuple[complex, complex]:
    """(a, b) read off the last forward node."""
    w1, w2 = _kernels.forward_end(*_entries(pulse, lam, scheme=scheme))
    return complex(w1), complex(w2)


def a_and_derivative(pulse: SampledPulse, lam: complex, scheme="midpoint") -> tuple[complex, complex]:
    sch = get_scheme(scheme)
    e = _entries(pulse, lam, scheme=sch)
    d = sch.derivative(e, pulse.t)
    w1, _, v1, _ = _kernels.forward_end_with_derivative(*e, *d)
    return complex(w1), complex(v1)


def a_derivative(pulse: SampledPulse, lam: complex, scheme="midpoint") -> complex:
    """da/dlambda from joint propagation of the derivative recursion."""
    return a_and_derivative(pulse, lam, scheme)[1]


def default_split(size: int) -> int:
    return min(max(int(round(size / 2)), 1), size - 1)


def split_from_fraction(size: int, fraction: float) -> int:
    return min(max(int(round(fraction * size)), 1), size - 1)


@dataclass(frozen=True)
class ScatteringRun:
    lam: complex
    forward: np.ndarray
    backward: np.ndarray
    split_index: int

    @property
    def a(self) -> complex:
        return complex(self.forward[-1, 0])

    @property
    def b(self) -> complex:
        return complex(self.forward[-1, 1])

    def fb_coefficients(self, floor: float = 1e-12) -> tuple[complex, complex]:
        p = self.split_index
        w, u = self.forward[p], self.backward[p]
        a_hat = w[0] * u[1] - u[0] * w[1]
        if not abs(u[1]) > floor:
            raise DegenerateDivisionError(
                f"|u_2| = {abs(u[1]):.3g} at split index {p} is below the floor {floor:g}")
        return complex(a_hat), complex(w[1] / u[1])


def scattering_run(pulse: SampledPulse, lam: complex, p: int | None = None,
                   scheme="midpoint") -> ScatteringRun:
    size = pulse.size
    p = default_split(size) if p is None else int(p)
    if not 0 < p < size:
        raise ValueError(f"split index must satisfy 0 < p < {size}, got {p}")
    return ScatteringRun(complex(lam), propagate_forward(pulse, lam, scheme),
                         propagate_backward(pulse, lam, scheme), p)


def fb_coefficients(pulse: SampledPulse, lam: complex, p: int | None = None,
                    floor: float = 1e-12, scheme="midpoint") -> tuple[complex, complex]:
    """Forward-backward estimates (a_hat, b_hat) meeting at node p."""
    return scattering_run(pulse, lam, p, scheme).fb_coefficients(floor)


@dataclass(frozen=True)
class JostSolution:
    """Bound-state estimate theta(lam; t_m), stored in the rotated frame."""

    lam: complex
    t: np.ndarray
    psi: np.ndarray  # shape (M, 2): Psi(t_m)
    split_index: int
    stitch_error: float

    @property
    def values(self) -> np.ndarray:
        """theta(t_m) as an (M, 2) array; may overflow for large Im(lam)*|t|."""
        rot = np.exp(-1j * self.lam * self.t)
        return np.column_stack([self.psi[:, 0] * rot, self.psi[:, 1] / rot])

    def normalized(self) -> np.ndarray:
        """theta with a per-sample positive scale removed, shape (2, M).

        The Darboux update is homogeneous of degree zero in theta, so this
        scaled copy is interchangeable with ``values`` there and never overflows.
        """
        eta = self.lam.imag
        shift = eta * np.abs(self.t)
        th1 = self.psi[:, 0] * np.exp(-1j * self.lam * self.t - shift)
        th2 = self.psi[:, 1] * np.exp(1j * self.lam * self.t - shift)
        return np.vstack([th1, th2])


def _half_step(entries: StepEntries, vec: np.ndarray) -> np.ndarray:
    out = np.empty_like(vec)
    out[:, 0] = entries.s11 * vec[:, 0] + entries.s12 * vec[:, 1]
    out[:, 1] = entries.s21 * vec[:, 0] + entries.s22 * vec[:, 1]
    return out


def jost_solution(pulse: SampledPulse, lam: complex, p: int | None = None,
                  b_hat: complex | None = None, stitch_tol: float = 1e-3,
                  run: ScatteringRun | None = None, scheme="midpoint") -> JostSolution:
    """Stitch the forward branch (m < p) and b_hat times the backward branch (m >= p).

    Trajectory nodes sit half a step before each sample, so each branch is
    advanced by half a cell onto the sample times.
    """
    if run is None:
        run = scattering_run(pulse, lam, p, scheme)
    p = run.split_index
    lam = complex(lam)
    if b_hat is None:
        b_hat = run.fb_coefficients()[1]
    w_p, u_p = run.forward[p], run.backward[p]
    stitch = float(np.linalg.norm(w_p - b_hat * u_p) / max(np.linalg.norm(w_p), 1e-300))
    if not stitch <= stitch_tol:
        raise StitchMismatchError(
            f"forward/backward branches differ by {stitch:.3g} (relative) at p={p}; "
            f"lambda={lam} is not an eigenvalue or sampling is too coarse")
    h = pulse.step
    sch = get_scheme(scheme)
    fwd = _half_step(sch.entries(pulse.samples[:p], pulse.t[:p], h / 2, lam), run.forward[:p])
    bwd = _half_step(sch.entries(pulse.samples[p:], pulse.t[p:], -h / 2, lam), run.backward[p + 1:])
    psi = np.vstack([fwd, b_hat * bwd])
    return JostSolution(lam, pulse.t, psi, p, stitch)


def pulse_energy(pulse: SampledPulse) -> float:
    """Left-Riemann energy h * sum |q_m|^2."""
    return float(pulse.step * np.sum(np.abs(pulse.samples) ** 2))


def support_indices(pulse: SampledPulse, threshold: float) -> tuple[int, int]:
    """Indices of the first and last sample with |q| above threshold."""
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    above = np.flatnonzero(np.abs(pulse.samples) > threshold)
    if above.size == 0:
        raise AllBelowThresholdError(
            f"no sample exceeds the threshold {threshold:.3g} (max |q| = {np.abs(pulse.samples).max():.3g})")
    return int(above[0]), int(above[-1])


def effective_support(pulse: SampledPulse, threshold: float) -> tuple[float, float]:
    """Tightest [T_-, T_+] outside which every |q_m| <= threshold."""
    i0, i1 = support_indices(pulse, threshold)
    return pulse.t_start + i0 * pulse.step, pulse.t_start + i1 * pulse.step

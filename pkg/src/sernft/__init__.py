"""Nonlinear Fourier analysis of multi-solitons by successive eigenvalue removal."""

from .analysis import (SeparationPrediction, TailAsymptote, complexity_factor, delta_bound,
                       duration_estimate, duration_staircase, separation_predict, tail_asymptote)
from .darboux import (DEFAULT_EPSILON, Grid, PhysicalScaling, darboux_update, default_grid,
                      propagate_spectrum, remove_eigenvalue, synthesize, to_physical)
from .eigenfinder import CollocationConfig, NewtonConfig, fourier_collocation, newton_refine
from .errors import NFTError
from .nft import (JostSolution, ScatteringRun, a_derivative, effective_support, fb_coefficients,
                  jost_solution, propagate_backward, propagate_forward, pulse_energy, scattering_run,
                  spectral_coefficients, transfer_matrix)
from .ser import SerConfig, SerReport, classical_decompose, ser_decompose, truncate
from .signals import DiscreteSpectrum, SampledPulse

__version__ = "0.1.0"

__all__ = [
    "CollocationConfig", "DEFAULT_EPSILON", "DiscreteSpectrum", "Grid", "JostSolution", "NFTError",
    "NewtonConfig", "PhysicalScaling", "SampledPulse", "ScatteringRun", "SeparationPrediction",
    "SerConfig", "SerReport", "TailAsymptote", "a_derivative", "classical_decompose",
    "complexity_factor", "darboux_update", "default_grid", "delta_bound", "duration_estimate",
    "duration_staircase", "effective_support", "fb_coefficients", "fourier_collocation",
    "jost_solution", "newton_refine", "propagate_backward", "propagate_forward",
    "propagate_spectrum", "pulse_energy", "remove_eigenvalue", "scattering_run",
    "separation_predict", "ser_decompose", "spectral_coefficients", "synthesize",
    "tail_asymptote", "to_physical", "transfer_matrix", "truncate",
]

"""Matplotlib figures written next to the delimited outputs (Agg, no pyplot state)."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .signals import SampledPulse

_SAVE = {"dpi": 110, "metadata": {"Software": None}}


def figure_path(output) -> Path:
    """``results.csv`` -> ``results.png``."""
    return Path(output).with_suffix(".png")


def _finish(fig: Figure, path) -> Path:
    fig.tight_layout()
    fig.savefig(path, **_SAVE)
    return Path(path)


def plot_pulse(pulse: SampledPulse, path, title: str = "") -> Path:
    fig = Figure(figsize=(7, 3.5))
    ax = fig.subplots()
    ax.plot(pulse.t, np.abs(pulse.samples), lw=1.2)
    ax.set_xlabel("t")
    ax.set_ylabel("|q(t)|")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def plot_durations(measured, predicted, path, title: str = "") -> Path:
    """T^(n) staircase against the closed-form estimate; both ordered n = 1..N."""
    fig = Figure(figsize=(5, 3.5))
    ax = fig.subplots()
    n = np.arange(1, len(measured) + 1)
    ax.step(n, measured, where="mid", label="measured")
    if predicted is not None:
        ax.plot(n, predicted, "o--", label="estimate")
    ax.set_xlabel("remaining eigenvalues n")
    ax.set_ylabel("T^(n)")
    ax.set_title(title)
    ax.legend()
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def plot_snr(result, path) -> Path:
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    snr = np.asarray(result.snr_db)
    ser, cls = result.variance("ser"), result.variance("classical")
    for k in range(ser.shape[1]):
        line, = ax.semilogy(snr, ser[:, k], "-o", ms=3, label=f"SER k={k + 1}")
        ax.semilogy(snr, cls[:, k], "--x", ms=4, color=line.get_color(), label=f"classical k={k + 1}")
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel("Var(phase error) [rad^2]")
    ax.legend(fontsize=6, ncol=2)
    ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def plot_truncation(result, path) -> Path:
    fig = Figure(figsize=(6, 4))
    ax = fig.subplots()
    k = np.arange(1, result.ser.n + 1)
    for n, acc in sorted(result.classical_at.items(), reverse=True):
        ax.semilogy(k, acc.variances(), "-o", ms=3, label=f"classical, T^({n})")
    ax.semilogy(k, result.ser.variances(), "k--", label="SER")
    ax.semilogy(k, result.classical_matched.variances(), "k:", label="classical, SER window")
    ax.set_xlabel("eigenvalue index k")
    ax.set_ylabel("Var(phase error) [rad^2]")
    ax.set_xticks(k)
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3, which="both")
    return _finish(fig, path)


def plot_separation(result, path) -> Path:
    fig = Figure(figsize=(7, 4))
    ax = fig.subplots()
    for row, pulse in zip(result.rows_, result.pulses):
        line, = ax.semilogy(pulse.t, np.abs(pulse.samples), lw=1, label=f"|delta| = {abs(row.delta):.0e}")
        for x in (row.predicted_plus, -row.predicted_minus):
            ax.axvline(x, color=line.get_color(), ls=":", lw=1)
    ax.set_ylim(1e-4, None)
    ax.set_xlabel("t")
    ax.set_ylabel("|q(t)|")
    ax.legend(fontsize=7)
    ax.grid(alpha=0.3)
    return _finish(fig, path)


def plot_roundtrip(result, path) -> Path:
    fig = Figure(figsize=(7, 3.5))
    ax1, ax2 = fig.subplots(1, 2)
    for k in range(result.eigenvalue_errors.shape[1]):
        ax1.semilogy(result.eigenvalue_errors[:, k], ".", ms=3, label=f"k={k + 1}")
        ax2.semilogy(np.abs(result.phase_errors[:, k]), ".", ms=3)
    ax1.set_title("|delta lambda|")
    ax2.set_title("|delta phi| [rad]")
    for ax in (ax1, ax2):
        ax.set_xlabel("trial")
        ax.grid(alpha=0.3)
    ax1.legend(fontsize=6)
    return _finish(fig, path)

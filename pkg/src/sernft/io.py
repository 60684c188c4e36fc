"""File formats: pulse CSV, spectrum JSON, long-format results CSV, report JSON."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ser import SerReport
from .signals import DiscreteSpectrum, SampledPulse

RESULT_HEADER = ("experiment", "trial", "eigenvalue_index", "quantity", "value")
PULSE_HEADER = ("t", "re", "im")


def _num(x: float) -> str:
    return format(float(x), ".17g")


def write_pulse_csv(pulse: SampledPulse, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PULSE_HEADER)
        for t, q in zip(pulse.t, pulse.samples):
            w.writerow((_num(t), _num(q.real), _num(q.imag)))


def read_pulse_csv(path, step_rtol: float = 1e-6) -> SampledPulse:
    """Load a pulse, insisting on strictly increasing times with a constant step."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != PULSE_HEADER:
            raise ValueError(f"{path}: expected header {','.join(PULSE_HEADER)}")
        data = np.array([[float(v) for v in row] for row in reader if row], dtype=float)
    if data.ndim != 2 or data.shape[0] < 2 or data.shape[1] != 3:
        raise ValueError(f"{path}: need at least two rows of t,re,im")
    t = data[:, 0]
    dt = np.diff(t)
    step = float((t[-1] - t[0]) / (t.size - 1))
    if not np.all(dt > 0):
        raise ValueError(f"{path}: time column is not strictly increasing")
    if np.max(np.abs(dt - step)) > step_rtol * max(step, 1.0) + 1e-12 * np.max(np.abs(t)):
        raise ValueError(f"{path}: time step is not constant")
    return SampledPulse(float(t[0]), step, data[:, 1] + 1j * data[:, 2])


def pulse_to_dict(pulse: SampledPulse) -> dict:
    return {"t_start": pulse.t_start, "step": pulse.step,
            "re": pulse.samples.real.tolist(), "im": pulse.samples.imag.tolist()}


def _pair(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def spectrum_to_dict(spectrum: DiscreteSpectrum) -> dict:
    return {"eigenvalues": [_pair(z) for z in spectrum.eigenvalues],
            "b": [_pair(z) for z in spectrum.b]}


def spectrum_from_dict(data: dict) -> DiscreteSpectrum:
    try:
        lam = [complex(e["re"], e["im"]) for e in data["eigenvalues"]]
        b = [complex(e["re"], e["im"]) for e in data["b"]] if "b" in data else None
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed spectrum document: {exc}") from exc
    return DiscreteSpectrum(lam, b)


def write_spectrum_json(spectrum: DiscreteSpectrum, path) -> None:
    Path(path).write_text(json.dumps(spectrum_to_dict(spectrum), indent=2) + "\n")


def read_spectrum_json(path) -> DiscreteSpectrum:
    return spectrum_from_dict(json.loads(Path(path).read_text()))


def write_results_csv(rows: Iterable, path_or_file) -> None:
    """Long-format rows ``experiment,trial,eigenvalue_index,quantity,value``."""
    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_HEADER)
        for r in rows:
            w.writerow((r.experiment, r.trial, r.eigenvalue_index, r.quantity, _num(r.value)))
    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            emit(fh)


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RESULT_HEADER:
            raise ValueError(f"{path}: expected header {','.join(RESULT_HEADER)}")
        return [{"experiment": r["experiment"], "trial": int(r["trial"]),
                 "eigenvalue_index": int(r["eigenvalue_index"]), "quantity": r["quantity"],
                 "value": float(r["value"])} for r in reader]


def write_table_csv(table: Sequence[dict], path_or_file) -> None:
    """Wide table; columns follow the key order of the first row."""
    if not table:
        raise ValueError("empty table")
    fields = list(table[0])

    def emit(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(fields)
        for row in table:
            w.writerow([_num(v) if isinstance(v, float) else v for v in (row[f] for f in fields)])
    if hasattr(path_or_file, "write"):
        emit(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            emit(fh)


def _jsonable(obj):
    if isinstance(obj, (complex, np.complexfloating)):
        return _pair(complex(obj))
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def report_to_dict(report: SerReport) -> dict:
    return _jsonable({
        "alpha_factor": report.alpha_factor,
        "residual_energy": report.residual_energy,
        "recovered": spectrum_to_dict(report.recovered),
        "iterations": [asdict(it) | {"duration": it.duration} for it in report.iterations],
    })


def report_table(report: SerReport) -> list[dict]:
    """One wide row per SER iteration."""
    nan = float("nan")
    out = []
    for it in report.iterations:
        lam = it.lambda_hat if it.lambda_hat is not None else complex(nan, nan)
        b = it.b_hat if it.b_hat is not None else complex(nan, nan)
        out.append({"n": it.n, "lambda_re": lam.real, "lambda_im": lam.imag,
                    "b_re": b.real, "b_im": b.imag, "newton_iters": it.newton_iters,
                    "T_minus": it.window[0], "T_plus": it.window[1], "samples_used": it.samples_used,
                    "energy_before": it.energy_before,
                    "energy_after": nan if it.energy_after is None else it.energy_after,
                    "energy_check_pass": "" if it.energy_check_pass is None else str(it.energy_check_pass).lower(),
                    "error": it.error or ""})
    return out


def dump_json(obj, path_or_file) -> None:
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=False) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        Path(path_or_file).write_text(text)

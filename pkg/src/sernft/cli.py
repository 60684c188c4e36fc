"""Command-line interface.

Usage errors exit with status 2 (argparse).  Numerical failures exit with
status 3 after writing a structured error: an error row in CSV mode, or a
JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from . import bench, io, plotting
from .analysis import (complexity_factor, delta_bound, duration_estimate, duration_staircase,
                       separation_predict, tail_asymptote, tail_shift)
from .bench import ExperimentConfig, ResultRow
from .darboux import DEFAULT_EPSILON, default_grid, synthesize
from .eigenfinder import fourier_collocation, newton_refine
from .errors import NFTError
from .nft import fb_coefficients, pulse_energy, spectral_coefficients
from .ser import SerConfig, ser_decompose

EXIT_NUMERICAL = 3


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0, help="master random seed")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON, help="truncation parameter")
    p.add_argument("--samples", type=int, default=4096, help="samples per predicted pulse duration")
    p.add_argument("--output", "-o", type=Path, default=None, help="output file (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default=None,
                   help="output format (default from the output suffix, else csv)")
    p.add_argument("--no-plot", action="store_true", help="skip the PNG written next to --output")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="sernft", description="Successive eigenvalue removal toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", parents=[common], help="multi-soliton from a spectrum JSON")
    p.add_argument("--spectrum", type=Path, required=True)
    p.add_argument("--step", type=float, default=None, help="sampling step (overrides --samples)")

    p = sub.add_parser("nft", parents=[common], help="scattering data of a pulse")
    p.add_argument("--pulse", type=Path, required=True)
    p.add_argument("--lambda", dest="lambdas", type=_complex, action="append", default=None,
                   help="evaluate a and b at this lambda (repeatable); default: find the eigenvalues")

    p = sub.add_parser("ser", parents=[common], help="successive eigenvalue removal")
    p.add_argument("--pulse", type=Path, required=True)
    p.add_argument("--guesses", type=Path, default=None, help="spectrum JSON whose eigenvalues seed Newton")
    p.add_argument("--order", choices=("ascending_im", "descending_im"), default="ascending_im")

    p = sub.add_parser("analyze", parents=[common], help="closed-form predictions for a spectrum")
    p.add_argument("--spectrum", type=Path, required=True)
    p.add_argument("--delta", type=_complex, default=None, help="eigenvalue error for separation geometry")
    p.add_argument("--b-added", type=_complex, default=None, help="b of the added eigenvalue")

    p = sub.add_parser("bench", help="benchmark experiments")
    bsub = p.add_subparsers(dest="experiment", required=True)
    b = bsub.add_parser("fig3", parents=[common], help="pulse durations and alpha_N")
    b.add_argument("--family", choices=sorted(bench.FAMILIES), default="c")
    b.add_argument("--spectrum", type=Path, default=None)
    for name, helptext in (("fig4", "phase-error variance versus SNR"),
                           ("fig5", "classical decoding on truncated pulses")):
        b = bsub.add_parser(name, parents=[common], help=helptext)
        b.add_argument("--trials", type=int, default=100)
        b.add_argument("--oversampling", type=float, default=4.0)
        b.add_argument("--spectrum", type=Path, default=None)
        if name == "fig4":
            b.add_argument("--snr", type=float, nargs="+", default=[10, 15, 20, 25, 30, 35])
        else:
            b.add_argument("--snr", type=float, default=30.0)
    b = bsub.add_parser("separation", parents=[common], help="solitons split off by an eigenvalue error")
    b.add_argument("--delta", type=_complex, nargs="+", default=[1e-4j, 1e-6j, 1e-8j])
    b = bsub.add_parser("roundtrip", parents=[common], help="noise-free synthesize / SER round trip")
    b.add_argument("--trials", type=int, default=100)
    b.add_argument("--family", choices=sorted(bench.FAMILIES), default="c")
    return parser


class Output:
    """Routes results to --output or stdout and keeps the plot path."""

    def __init__(self, args):
        self.path: Path | None = args.output
        fmt = args.format
        if fmt is None:
            fmt = "json" if self.path is not None and self.path.suffix == ".json" else "csv"
        self.format = fmt
        self.plot = self.path is not None and not args.no_plot

    @contextmanager
    def stream(self):
        if self.path is None:
            yield sys.stdout
        else:
            with open(self.path, "w", newline="") as fh:
                yield fh

    @property
    def figure(self) -> Path:
        return plotting.figure_path(self.path)

    def rows(self, rows, extra: dict | None = None):
        with self.stream() as fh:
            if self.format == "csv":
                io.write_results_csv(rows, fh)
            else:
                io.dump_json({**(extra or {}), "rows": [r.__dict__ for r in rows]}, fh)

    def table(self, table, extra: dict | None = None):
        with self.stream() as fh:
            if self.format == "csv":
                io.write_table_csv(table, fh)
            else:
                io.dump_json({**(extra or {}), "rows": table}, fh)


def _cmd_synthesize(args, out: Output):
    spectrum = io.read_spectrum_json(args.spectrum)
    if args.step is not None:
        grid = default_grid(spectrum, step=args.step, epsilon=args.epsilon)
    else:
        step = duration_estimate(spectrum, args.epsilon) / args.samples
        grid = default_grid(spectrum, step=step, epsilon=args.epsilon)
    pulse = synthesize(spectrum, grid, epsilon=args.epsilon)
    if out.format == "csv":
        if out.path is None:
            io.write_table_csv([{"t": t, "re": q.real, "im": q.imag} for t, q in zip(pulse.t, pulse.samples)],
                               sys.stdout)
        else:
            io.write_pulse_csv(pulse, out.path)
    else:
        with out.stream() as fh:
            io.dump_json(io.pulse_to_dict(pulse), fh)
    if out.plot:
        plotting.plot_pulse(pulse, out.figure)


def _cmd_nft(args, out: Output):
    pulse = io.read_pulse_csv(args.pulse)
    rows = [ResultRow("nft", 0, 0, "energy", pulse_energy(pulse))]
    if args.lambdas:
        for i, lam in enumerate(args.lambdas, 1):
            a, b = spectral_coefficients(pulse, lam)
            rows += [ResultRow("nft", 0, i, "lambda_re", lam.real), ResultRow("nft", 0, i, "lambda_im", lam.imag),
                     ResultRow("nft", 0, i, "a_re", a.real), ResultRow("nft", 0, i, "a_im", a.imag),
                     ResultRow("nft", 0, i, "b_re", b.real), ResultRow("nft", 0, i, "b_im", b.imag)]
    else:
        guesses = fourier_collocation(pulse)
        for i, g in enumerate(guesses, 1):
            res = newton_refine(pulse, g)
            _, b_hat = fb_coefficients(pulse, res.lam)
            rows += [ResultRow("nft", 0, i, "lambda_re", res.lam.real),
                     ResultRow("nft", 0, i, "lambda_im", res.lam.imag),
                     ResultRow("nft", 0, i, "b_re", b_hat.real), ResultRow("nft", 0, i, "b_im", b_hat.imag),
                     ResultRow("nft", 0, i, "newton_iters", res.iters)]
    out.rows(rows)
    if out.plot:
        plotting.plot_pulse(pulse, out.figure)


def _cmd_ser(args, out: Output):
    pulse = io.read_pulse_csv(args.pulse)
    guesses = None
    if args.guesses is not None:
        guesses = io.read_spectrum_json(args.guesses).eigenvalues.tolist()
    report = ser_decompose(pulse, guesses, SerConfig(epsilon=args.epsilon, removal_order=args.order))
    with out.stream() as fh:
        if out.format == "json":
            io.dump_json(io.report_to_dict(report), fh)
        else:
            io.write_table_csv(io.report_table(report), fh)
    if out.plot:
        plotting.plot_durations(report.durations, None, out.figure, title="SER windows")
    if report.failures:
        for rec in report.failures:
            print(json.dumps({"error": "iteration_failed", "n": rec.n, "message": rec.error}), file=sys.stderr)


def _cmd_analyze(args, out: Output):
    spectrum = io.read_spectrum_json(args.spectrum)
    stair = duration_staircase(spectrum, args.epsilon)
    rows = [ResultRow("analyze", 0, 0, "duration_estimate", duration_estimate(spectrum, args.epsilon)),
            ResultRow("analyze", 0, 0, "tail_shift", tail_shift(spectrum)),
            ResultRow("analyze", 0, 0, "alpha_predicted", complexity_factor(stair))]
    rows += [ResultRow("analyze", 0, n, "T_n_predicted", d) for n, d in enumerate(stair, 1)]
    for side in ("left", "right"):
        tail = tail_asymptote(spectrum, side)
        rows += [ResultRow("analyze", 0, 0, f"tail_{side}_amplitude", tail.amplitude),
                 ResultRow("analyze", 0, 0, f"tail_{side}_rate", tail.rate)]
    if args.delta is not None:
        b_added = args.b_added if args.b_added is not None else -spectrum.sorted().b[-1]
        pred = separation_predict(spectrum, args.delta, b_added)
        for name in ("t_delta_plus", "t_delta_minus", "phi_delta_plus", "phi_delta_minus",
                     "t_th_plus", "t_th_minus", "t0"):
            rows.append(ResultRow("analyze", 0, 0, name, getattr(pred, name)))
        rows.append(ResultRow("analyze", 0, 0, "delta_bound", delta_bound(spectrum, args.epsilon, b_added)))
    out.rows(rows)
    if out.plot:
        plotting.plot_durations(stair, None, out.figure, title="predicted durations")


def _spectrum_arg(args):
    return io.read_spectrum_json(args.spectrum) if getattr(args, "spectrum", None) else None


def _cmd_bench(args, out: Output):
    exp = args.experiment
    if exp == "fig3":
        cfg = ExperimentConfig("duration", spectrum_family=args.family, spectrum=_spectrum_arg(args),
                               epsilon=args.epsilon, seed=args.seed, samples=args.samples)
        res = bench.run_duration_experiment(cfg)
        out.table(res.table(), {"alpha_predicted": res.alpha_predicted, "family": res.family})
        if out.plot:
            plotting.plot_durations(res.durations, res.predicted, out.figure, title=f"family {res.family}")
    elif exp in ("fig4", "fig5"):
        snr = tuple(args.snr) if exp == "fig4" else (args.snr,)
        cfg = ExperimentConfig("snr_sweep" if exp == "fig4" else "truncation", spectrum=_spectrum_arg(args),
                               trials=args.trials, snr_grid_db=snr, epsilon=args.epsilon, seed=args.seed,
                               oversampling=args.oversampling, samples=args.samples)
        if exp == "fig4":
            res = bench.run_snr_experiment(cfg)
            out.rows(res.rows())
            if out.plot:
                plotting.plot_snr(res, out.figure)
        else:
            res = bench.run_truncation_experiment(cfg, snr_db=args.snr)
            out.rows(res.rows())
            if out.plot:
                plotting.plot_truncation(res, out.figure)
    elif exp == "separation":
        cfg = ExperimentConfig("separation", deltas=tuple(args.delta), epsilon=args.epsilon, seed=args.seed)
        res = bench.run_separation_experiment(cfg)
        out.rows(res.rows())
        if out.plot:
            plotting.plot_separation(res, out.figure)
    else:
        cfg = ExperimentConfig("roundtrip", spectrum_family=args.family, trials=args.trials,
                               epsilon=args.epsilon, seed=args.seed, samples=args.samples)
        res = bench.run_roundtrip_experiment(cfg)
        out.rows(res.rows())
        if out.plot:
            plotting.plot_roundtrip(res, out.figure)


COMMANDS = {"synthesize": _cmd_synthesize, "nft": _cmd_nft, "ser": _cmd_ser,
            "analyze": _cmd_analyze, "bench": _cmd_bench}


def _report_failure(exc: Exception, out: Output | None) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(payload), file=sys.stderr)
    if out is not None and out.format == "csv" and out.path is not None:
        io.write_results_csv([ResultRow("error", -1, 0, f"error:{type(exc).__name__}", float("nan"))], out.path)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.samples < 2:
        parser.error("--samples must be at least 2")
    if not 0 < args.epsilon < 1:
        parser.error("--epsilon must lie in (0, 1)")
    out = Output(args)
    try:
        with np.errstate(over="ignore", invalid="ignore"):
            COMMANDS[args.command](args, out)
    except NFTError as exc:
        _report_failure(exc, out)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())

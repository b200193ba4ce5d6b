"""Command-line interface.

Exit codes: 0 success, 1 comparison above tolerance, 2 input/schema error,
3 model error, 4 degenerate spectrum, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from thompsonmodes.errors import InputError, ThompsonError
from thompsonmodes.figure import render_figure
from thompsonmodes.model import (
    ArrayConfig,
    build_matrices,
    freq_to_lambda,
    frequency_clusters,
    has_band_gap,
    load_config,
    model_modes,
    save_config,
)
from thompsonmodes.pipeline import MeasurementSet, RecoveryOptions, run_recovery, simulate_measurement
from thompsonmodes.spectra_io import (
    PeakOptions,
    detect_peaks,
    lorentzian_trace,
    read_measurement,
    read_report,
    read_trace,
    write_measurement,
    write_report,
    write_trace,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_IO = 5

DEMO_SCENARIOS = ("monomeric", "dimeric")


def fmt(x: float) -> str:
    return f"{x:.12g}"


def shipped_config(name: str) -> ArrayConfig:
    text = resources.files("thompsonmodes.configs").joinpath(f"{name}.json").read_text()
    return ArrayConfig.from_dict(json.loads(text))


def _need_file(path: str | None, what: str) -> Path:
    if path is None:
        raise InputError(f"{what} path is required")
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{what} not found: {p}")
    return p


def _need_parent(path: str) -> Path:
    p = Path(path)
    if not p.parent.is_dir():
        raise FileNotFoundError(f"output directory does not exist: {p.parent}")
    return p


def _print_spectrum(freqs_hz, title: str) -> None:
    print(title)
    for i, f in enumerate(sorted(freqs_hz), start=1):
        print(f"  {i:3d}  f = {fmt(f)} Hz  lambda = {fmt(freq_to_lambda(f))} s^2")


def _band_gap_line(freqs_hz) -> str:
    split = frequency_clusters(freqs_hz)
    if split is None or not has_band_gap(freqs_hz):
        return "band gap: no"
    low, high, gap = split
    return (
        f"band gap: yes ({len(low)} + {len(high)} modes; gap {fmt(gap)} Hz, "
        f"spreads {fmt(low[-1] - low[0])} Hz and {fmt(high[-1] - high[0])} Hz)"
    )


def _print_modes(modes: np.ndarray) -> None:
    n = modes.shape[0]
    print("mode  " + "  ".join(f"{'|v_' + str(j + 1) + '|':>16}" for j in range(n)))
    for i in range(n):
        print(f"{i + 1:4d}  " + "  ".join(f"{fmt(x):>16}" for x in modes[i]))


def compare_modes(recovered: np.ndarray, model: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-mode max absolute error and cosine similarity."""
    if recovered.shape != model.shape:
        raise InputError(f"report has {recovered.shape[0]} elements, config has {model.shape[0]}")
    err = np.max(np.abs(recovered - model), axis=1)
    dots = np.sum(recovered * model, axis=1)
    norms = np.linalg.norm(recovered, axis=1) * np.linalg.norm(model, axis=1)
    cos = np.divide(dots, norms, out=np.zeros_like(dots), where=norms > 0)
    return err, cos


def _traces_for(ms: MeasurementSet, out_dir: Path) -> None:
    every = sorted(ms.full_peaks_hz)
    spacing = min(np.diff(every)) if len(every) > 1 else 0.01 * every[0]
    hw = 0.05 * spacing
    lo = min(every + [f for s in ms.sub_peaks_hz for f in s]) - 20 * hw
    hi = max(every) + 20 * hw
    out_dir.mkdir(parents=True, exist_ok=True)
    write_trace(lorentzian_trace(ms.full_peaks_hz, hw, lo, hi, hw / 10), out_dir / "full.csv")
    for j, s in enumerate(ms.sub_peaks_hz, start=1):
        write_trace(lorentzian_trace(s, hw, lo, hi, hw / 10), out_dir / f"deletion_{j}.csv")


def cmd_simulate(args) -> int:
    cfg = load_config(_need_file(args.config, "config"))
    out = _need_parent(args.out)
    ms = simulate_measurement(cfg, args.noise, args.seed)
    write_measurement(ms, out)
    _print_spectrum(ms.full_peaks_hz, f"{cfg.label or 'array'}: {cfg.n} resonances")
    print(_band_gap_line(ms.full_peaks_hz))
    print(f"subspectra: {cfg.n} x {cfg.n - 1} peaks written to {out}")
    if args.traces_dir:
        _traces_for(ms, Path(args.traces_dir))
        print(f"synthetic traces written to {args.traces_dir}")
    return EXIT_OK


def _recovery_options(args) -> RecoveryOptions:
    sym = {"auto": None, "on": True, "off": False}[args.symmetrize]
    ratios = None
    if args.capacitance_ratios:
        try:
            ratios = tuple(float(x) for x in args.capacitance_ratios.split(","))
        except ValueError:
            raise InputError(f"bad --capacitance-ratios: {args.capacitance_ratios!r}") from None
    return RecoveryOptions(
        symmetrize=sym,
        zero_threshold=args.zero_threshold,
        degeneracy_tol=args.degeneracy_tol,
        capacitance_ratios=ratios,
        non_hermitian=args.non_hermitian,
    )


def cmd_recover(args) -> int:
    ms_path = _need_file(args.measurement, "measurement")
    cfg = load_config(_need_file(args.config, "config")) if args.config else None
    out = _need_parent(args.out)
    opts = _recovery_options(args)
    report = run_recovery(read_measurement(ms_path), opts, cfg)
    write_report(report, out)
    branch = "non-Hermitian" if report.non_hermitian else "Hermitian"
    print(f"{report.label or 'measurement'}: {report.n} elements, {branch} branch, "
          f"symmetrized={'yes' if report.symmetrized else 'no'}")
    _print_modes(report.modes)
    moved = [
        (j + 1, k + 1, d)
        for j, deltas in enumerate(report.repair_deltas)
        for k, d in enumerate(deltas)
        if d != 0
    ]
    if moved:
        print("interlacing repair deltas (deletion, index, delta lambda):")
        for j, k, d in moved:
            print(f"  {j:3d} {k:3d}  {fmt(d)}")
    for w in report.warnings:
        print(f"warning: {w}")
    return EXIT_OK


def cmd_peaks(args) -> int:
    paths = [_need_file(p, "trace") for p in args.traces]
    if args.out:
        _need_parent(args.out)
    found = []
    for k, p in enumerate(paths):
        expected = args.expected_count
        if expected is not None and k > 0:
            expected -= 1
        opts = PeakOptions(
            polarity=args.polarity,
            min_prominence=args.min_prominence,
            min_separation_hz=args.min_separation_hz,
            expected_count=expected,
        )
        peaks = detect_peaks(read_trace(p), opts)
        print(f"{p}: " + ", ".join(fmt(f) for f in peaks))
        found.append(peaks)
    if args.out:
        if len(found) < 2 and len(found[0]) != 1:
            raise InputError("a measurement needs the full trace followed by one trace per deletion")
        ms = MeasurementSet(found[0], found[1:] if len(found) > 1 else [[]], label=args.label)
        write_measurement(ms, args.out)
        print(f"measurement written to {args.out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    report = read_report(_need_file(args.report, "report"))
    cfg = load_config(_need_file(args.config, "config"))
    model = model_modes(build_matrices(cfg))
    err, cos = compare_modes(report.modes, model)
    print("mode  max_abs_error     cosine_similarity")
    for i, (e, c) in enumerate(zip(err, cos), start=1):
        print(f"{i:4d}  {fmt(e):>16}  {fmt(c):>18}")
    ok = bool(np.all(err < args.tol))
    print(f"max error {fmt(float(err.max()))} {'<' if ok else '>='} tol {fmt(args.tol)}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_plot(args) -> int:
    report = read_report(_need_file(args.report, "report"))
    out = _need_parent(args.out)
    model = None
    if args.config:
        model = model_modes(build_matrices(load_config(_need_file(args.config, "config"))))
    render_figure(report, model, out)
    print(f"figure written to {out}")
    return EXIT_OK


def cmd_demo(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tol = args.tol if args.tol is not None else (1e-6 if args.noise == 0 else None)
    all_ok = True
    for name in DEMO_SCENARIOS:
        cfg = shipped_config(name)
        save_config(cfg, out_dir / f"{name}_config.json")
        ms = simulate_measurement(cfg, args.noise, args.seed)
        write_measurement(ms, out_dir / f"{name}_measurement.json")
        report = run_recovery(ms, RecoveryOptions(), cfg)
        write_report(report, out_dir / f"{name}_report.json")
        model = model_modes(build_matrices(cfg))
        render_figure(report, model, out_dir / f"{name}.svg")
        err, cos = compare_modes(report.modes, model)
        print(f"[{name}] {cfg.n} elements, base frequencies "
              + "/".join(sorted({f"{f / 1e6:g}" for f in cfg.base_frequencies_hz}))
              + " MHz")
        print(f"  {_band_gap_line(ms.full_peaks_hz)}")
        print(f"  max mode error {fmt(float(err.max()))}, mean {fmt(float(err.mean()))}, "
              f"min cosine {fmt(float(cos.min()))}")
        if tol is not None:
            ok = bool(np.all(err < tol))
            all_ok &= ok
            print(f"  {'PASS' if ok else 'FAIL'} at tol {fmt(tol)}")
    print(f"outputs written to {out_dir}")
    return EXIT_OK if all_ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thompsonmodes",
        description="Recover resonator-array mode magnitudes from single-deletion spectra.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="model spectra of an array config as a measurement file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--noise", type=float, default=0.0, help="relative frequency noise sigma")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--traces-dir", help="also write synthetic |S11| traces here")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("recover", help="estimate mode magnitudes from a measurement file")
    p.add_argument("--measurement", required=True)
    p.add_argument("--config", help="array config (symmetry and capacitance ratios)")
    p.add_argument("--out", required=True)
    p.add_argument("--symmetrize", choices=("auto", "on", "off"), default="auto")
    p.add_argument("--non-hermitian", action="store_true")
    p.add_argument("--capacitance-ratios", help="comma-separated, one per element")
    p.add_argument("--zero-threshold", type=float, default=RecoveryOptions.zero_threshold)
    p.add_argument("--degeneracy-tol", type=float, default=RecoveryOptions.degeneracy_tol)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("peaks", help="find resonances in trace CSVs (full trace first, then deletions)")
    p.add_argument("traces", nargs="+")
    p.add_argument("--out", help="write a measurement file")
    p.add_argument("--label", default="")
    p.add_argument("--polarity", choices=("dips", "peaks"), default="dips")
    p.add_argument("--min-prominence", type=float, default=0.1)
    p.add_argument("--min-separation-hz", type=float, default=0.0)
    p.add_argument("--expected-count", type=int, help="peaks in the full trace (deletions expect one fewer)")
    p.set_defaults(func=cmd_peaks)

    p = sub.add_parser("compare", help="compare a report with the model modes of a config")
    p.add_argument("--report", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render a report as SVG")
    p.add_argument("--report", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", help="overlay model modes of this config")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("demo", help="reproduce the monomeric and dimeric scenarios")
    p.add_argument("--out", required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="default 1e-6 without noise")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ThompsonError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

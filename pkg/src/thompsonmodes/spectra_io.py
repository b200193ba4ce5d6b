"""Reflection traces, peak search, and JSON/CSV serialization.

Trace CSV::

    # comment lines start with '#'
    frequency_hz,magnitude
    1.90e8,0.98
    ...

MeasurementSet JSON: ``{"full_peaks_hz": [...], "sub_peaks_hz": [[...], ...], "label": "..."}``
with ``sub_peaks_hz[j]`` measured with element ``j + 1`` removed.

RecoveryReport JSON: ``modes`` (rows = modes), ``lambda_full``,
``lambda_subs``, ``repair_deltas``, ``symmetrization_deltas``, ``warnings``,
plus ``label``, ``n``, ``symmetrized`` and ``capacitance_ratios`` (null for
the Hermitian branch).
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.signal import find_peaks

from thompsonmodes.errors import CountMismatch, ParseError, SchemaError, TooFewPoints
from thompsonmodes.pipeline import MeasurementSet, RecoveryReport

TRACE_HEADER = ("frequency_hz", "magnitude")


@dataclass(frozen=True)
class Trace:
    frequency_hz: np.ndarray
    magnitude: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.frequency_hz, dtype=np.float64)
        m = np.asarray(self.magnitude, dtype=np.float64)
        if f.ndim != 1 or f.shape != m.shape:
            raise ValueError("frequency and magnitude must be 1-D arrays of equal length")
        if f.size < 3:
            raise TooFewPoints(f"a trace needs at least 3 points, got {f.size}")
        if not (np.all(np.isfinite(f)) and np.all(np.isfinite(m))):
            raise ValueError("trace values must be finite")
        if np.any(np.diff(f) <= 0):
            raise ValueError("frequencies must be strictly increasing")
        if np.any(m < 0):
            raise ValueError("magnitudes must be >= 0")
        object.__setattr__(self, "frequency_hz", f)
        object.__setattr__(self, "magnitude", m)


@dataclass(frozen=True)
class PeakOptions:
    polarity: str = "dips"
    min_prominence: float = 0.1
    min_separation_hz: float = 0.0
    expected_count: int | None = None

    def __post_init__(self):
        if self.polarity not in ("dips", "peaks"):
            raise ValueError(f"polarity must be 'dips' or 'peaks', got {self.polarity!r}")
        if not 0 < self.min_prominence < 1:
            raise ValueError(f"min_prominence must lie in (0, 1), got {self.min_prominence!r}")
        if not self.min_separation_hz >= 0:
            raise ValueError(f"min_separation_hz must be >= 0, got {self.min_separation_hz!r}")


def _vertex(x: np.ndarray, y: np.ndarray) -> float:
    # abscissa of the parabola through three (possibly unevenly spaced) points
    (x0, x1, x2), (y0, y1, y2) = x, y
    d01 = (y1 - y0) / (x1 - x0)
    d12 = (y2 - y1) / (x2 - x1)
    curv = (d12 - d01) / (x2 - x0)
    if curv == 0:
        return float(x1)
    xv = 0.5 * (x0 + x1) - d01 / (2.0 * curv)
    return float(min(max(xv, x0), x2))


def detect_peaks(trace: Trace, opts: PeakOptions | None = None) -> list[float]:
    """Resonance locations in a trace, ascending.

    Local extrema (minima for ``dips``) whose prominence reaches
    ``min_prominence`` of the trace's magnitude range are kept greedily in
    order of decreasing prominence, skipping any closer than
    ``min_separation_hz`` to one already kept. Each survivor is refined by
    a parabola through the extremal sample and its two neighbours.
    """
    opts = opts or PeakOptions()
    f, m = trace.frequency_hz, trace.magnitude
    if f.size < 3:
        raise TooFewPoints(f"a trace needs at least 3 points, got {f.size}")
    y = -m if opts.polarity == "dips" else m
    span = float(m.max() - m.min())
    found: list[float] = []
    if span > 0:
        idx, props = find_peaks(y, prominence=opts.min_prominence * span)
        order = sorted(range(idx.size), key=lambda k: (-props["prominences"][k], idx[k]))
        kept: list[int] = []
        for k in order:
            i = int(idx[k])
            if all(abs(f[i] - f[other]) >= opts.min_separation_hz for other in kept):
                kept.append(i)
        found = sorted(_vertex(f[i - 1 : i + 2], y[i - 1 : i + 2]) for i in kept)
    if opts.expected_count is not None and len(found) != opts.expected_count:
        raise CountMismatch(opts.expected_count, found)
    return found


def lorentzian_trace(
    centers_hz: Sequence[float],
    half_width_hz: float,
    f_start_hz: float,
    f_stop_hz: float,
    step_hz: float,
    depth: float = 0.5,
    polarity: str = "dips",
) -> Trace:
    """Synthetic trace of Lorentzian lines on a unit baseline (test/demo plumbing)."""
    f = np.arange(f_start_hz, f_stop_hz + 0.5 * step_hz, step_hz)
    g2 = half_width_hz**2
    lines = sum(depth * g2 / ((f - c) ** 2 + g2) for c in centers_hz)
    m = 1.0 - lines if polarity == "dips" else lines
    return Trace(f, np.clip(m, 0.0, None))


def read_trace(path) -> Trace:
    path = Path(path)
    freqs: list[float] = []
    mags: list[float] = []
    header_seen = False
    with path.open(newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if row[0].lstrip().startswith("#"):
                continue
            cells = [c.strip() for c in row]
            if not header_seen:
                if tuple(cells) != TRACE_HEADER:
                    raise ParseError(lineno, f"expected header {','.join(TRACE_HEADER)!r}", str(path))
                header_seen = True
                continue
            if len(cells) != 2:
                raise ParseError(lineno, f"expected 2 columns, got {len(cells)}", str(path))
            try:
                fr, mg = float(cells[0]), float(cells[1])
            except ValueError:
                raise ParseError(lineno, f"not a number: {row!r}", str(path)) from None
            if not (math.isfinite(fr) and math.isfinite(mg)):
                raise ParseError(lineno, "non-finite value", str(path))
            if mg < 0:
                raise ParseError(lineno, "magnitude must be >= 0", str(path))
            if freqs and fr <= freqs[-1]:
                raise ParseError(lineno, f"frequency {fr!r} does not increase", str(path))
            freqs.append(fr)
            mags.append(mg)
    if not header_seen:
        raise ParseError(1, "missing header", str(path))
    if len(freqs) < 3:
        raise TooFewPoints(f"{path}: a trace needs at least 3 points, got {len(freqs)}")
    return Trace(np.array(freqs), np.array(mags))


def write_trace(trace: Trace, path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for fr, mg in zip(trace.frequency_hz, trace.magnitude):
            writer.writerow((repr(float(fr)), repr(float(mg))))


def _load_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, f"invalid JSON: {exc.msg}", str(path)) from exc
    if not isinstance(data, dict):
        raise SchemaError("<root>", "expected a JSON object")
    return data


def _number_list(data: dict, key: str) -> list[float]:
    value = data[key]
    if not isinstance(value, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        raise SchemaError(key, "must be an array of numbers")
    return [float(x) for x in value]


def _nested_number_list(data: dict, key: str) -> list[list[float]]:
    value = data[key]
    if not isinstance(value, list):
        raise SchemaError(key, "must be an array of arrays")
    return [_number_list({key: row}, key) for row in value]


def _check_keys(data: dict, required: set[str], optional: set[str] = frozenset()) -> None:
    unknown = sorted(set(data) - required - optional)
    if unknown:
        raise SchemaError(unknown[0], "unknown key")
    for key in sorted(required):
        if key not in data:
            raise SchemaError(key, "missing required key")


def measurement_to_dict(ms: MeasurementSet) -> dict:
    return {
        "label": ms.label,
        "full_peaks_hz": list(ms.full_peaks_hz),
        "sub_peaks_hz": [list(s) for s in ms.sub_peaks_hz],
    }


def write_measurement(ms: MeasurementSet, path) -> None:
    Path(path).write_text(json.dumps(measurement_to_dict(ms), indent=2) + "\n")


def read_measurement(path) -> MeasurementSet:
    data = _load_json(path)
    _check_keys(data, {"full_peaks_hz", "sub_peaks_hz"}, {"label"})
    label = data.get("label", "")
    if not isinstance(label, str):
        raise SchemaError("label", "must be a string")
    return MeasurementSet(
        full_peaks_hz=_number_list(data, "full_peaks_hz"),
        sub_peaks_hz=_nested_number_list(data, "sub_peaks_hz"),
        label=label,
    )


REPORT_KEYS = {
    "label",
    "n",
    "symmetrized",
    "capacitance_ratios",
    "modes",
    "lambda_full",
    "lambda_subs",
    "repair_deltas",
    "symmetrization_deltas",
    "warnings",
}


def report_to_dict(report: RecoveryReport) -> dict:
    return {
        "label": report.label,
        "n": report.n,
        "symmetrized": report.symmetrized,
        "capacitance_ratios": None if report.capacitance_ratios is None else list(report.capacitance_ratios),
        "modes": report.modes.tolist(),
        "lambda_full": report.lambda_full.tolist(),
        "lambda_subs": [s.tolist() for s in report.lambda_subs],
        "repair_deltas": [d.tolist() for d in report.repair_deltas],
        "symmetrization_deltas": [d.tolist() for d in report.symmetrization_deltas],
        "warnings": list(report.warnings),
    }


def write_report(report: RecoveryReport, path) -> None:
    Path(path).write_text(json.dumps(report_to_dict(report), indent=2) + "\n")


def read_report(path) -> RecoveryReport:
    data = _load_json(path)
    _check_keys(data, REPORT_KEYS)
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise SchemaError("n", "must be a positive integer")
    modes = np.array(_nested_number_list(data, "modes"), dtype=np.float64)
    if modes.shape != (n, n):
        raise SchemaError("modes", f"expected {n}x{n} matrix")
    full = np.array(_number_list(data, "lambda_full"))
    if full.size != n:
        raise SchemaError("lambda_full", f"expected {n} values")
    nested = {}
    for key in ("lambda_subs", "repair_deltas", "symmetrization_deltas"):
        rows = [np.array(r) for r in _nested_number_list(data, key)]
        if len(rows) != n or any(r.size != n - 1 for r in rows):
            raise SchemaError(key, f"expected {n} arrays of {n - 1} values")
        nested[key] = rows
    warnings = data["warnings"]
    if not isinstance(warnings, list) or not all(isinstance(w, str) for w in warnings):
        raise SchemaError("warnings", "must be an array of strings")
    ratios = data["capacitance_ratios"]
    if ratios is not None:
        ratios = tuple(_number_list(data, "capacitance_ratios"))
        if len(ratios) != n:
            raise SchemaError("capacitance_ratios", f"expected {n} values")
    if not isinstance(data["symmetrized"], bool):
        raise SchemaError("symmetrized", "must be a boolean")
    if not isinstance(data["label"], str):
        raise SchemaError("label", "must be a string")
    return RecoveryReport(
        modes=modes,
        lambda_full=full,
        lambda_subs=nested["lambda_subs"],
        repair_deltas=nested["repair_deltas"],
        symmetrization_deltas=nested["symmetrization_deltas"],
        warnings=list(warnings),
        label=data["label"],
        symmetrized=data["symmetrized"],
        capacitance_ratios=ratios,
    )

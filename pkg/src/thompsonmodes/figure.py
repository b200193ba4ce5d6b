"""Static two-panel SVG: spectra on the left, mode magnitudes on the right.

Output depends only on the report contents, so identical reports render to
byte-identical files.
"""

from __future__ import annotations

from html import escape
from pathlib import Path

import numpy as np

from thompsonmodes.model import lambda_to_freq
from thompsonmodes.pipeline import RecoveryReport

WIDTH = 960
HEIGHT = 480
MARGIN = 48
PANEL_GAP = 56
RECOVERED_COLOR = "#c0392b"
MODEL_COLOR = "#000000"
SUB_COLOR = "#9a9a9a"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    raw = (hi - lo) / max(count, 1)
    mag = 10 ** np.floor(np.log10(raw))
    step = min((s * mag for s in (1, 2, 5, 10) if s * mag >= raw), default=raw)
    start = np.ceil(lo / step) * step
    return [float(t) for t in np.arange(start, hi + 1e-9 * step, step)]


def _spectrum_panel(report: RecoveryReport, x0: float, y0: float, w: float, h: float) -> list[str]:
    full_mhz = [lambda_to_freq(v) / 1e6 for v in report.lambda_full]
    sub_mhz = [[lambda_to_freq(v) / 1e6 for v in s] for s in report.lambda_subs]
    every = full_mhz + [f for s in sub_mhz for f in s]
    lo, hi = min(every), max(every)
    pad = max(0.08 * (hi - lo), 0.5)
    lo, hi = lo - pad, hi + pad

    def x(f: float) -> float:
        return x0 + (f - lo) / (hi - lo) * w

    out = [
        f'<g id="spectra">',
        f'<rect x="{x0:.2f}" y="{y0:.2f}" width="{w:.2f}" height="{h:.2f}" fill="none" stroke="#000000" stroke-width="1"/>',
        f'<text x="{x0 + w / 2:.2f}" y="{y0 - 12:.2f}" text-anchor="middle" font-size="14">Spectrum and subspectra</text>',
    ]
    for k, s in enumerate(sub_mhz, start=1):
        for f in s:
            out.append(
                f'<line class="sub-line" data-deletion="{k}" x1="{x(f):.2f}" y1="{y0 + 0.25 * h:.2f}" '
                f'x2="{x(f):.2f}" y2="{y0 + h:.2f}" stroke="{SUB_COLOR}" stroke-width="1"/>'
            )
    for f in full_mhz:
        out.append(
            f'<line class="full-line" x1="{x(f):.2f}" y1="{y0:.2f}" x2="{x(f):.2f}" y2="{y0 + h:.2f}" '
            f'stroke="{MODEL_COLOR}" stroke-width="3"/>'
        )
    for t in _nice_ticks(lo, hi):
        out.append(
            f'<line x1="{x(t):.2f}" y1="{y0 + h:.2f}" x2="{x(t):.2f}" y2="{y0 + h + 5:.2f}" stroke="#000000"/>'
        )
        out.append(
            f'<text x="{x(t):.2f}" y="{y0 + h + 18:.2f}" text-anchor="middle" font-size="11">{t:g}</text>'
        )
    out.append(
        f'<text x="{x0 + w / 2:.2f}" y="{y0 + h + 36:.2f}" text-anchor="middle" font-size="12">frequency (MHz)</text>'
    )
    out.append("</g>")
    return out


def _modes_panel(
    report: RecoveryReport, model_modes: np.ndarray | None, x0: float, y0: float, w: float, h: float
) -> list[str]:
    n = report.n
    row_h = h / n
    slot = w / n
    bar = 0.36 * slot
    out = [
        '<g id="modes">',
        f'<text x="{x0 + w / 2:.2f}" y="{y0 - 12:.2f}" text-anchor="middle" font-size="14">Mode magnitudes</text>',
    ]
    for i in range(n):
        base = y0 + (i + 1) * row_h
        usable = 0.8 * row_h
        out.append(
            f'<line x1="{x0:.2f}" y1="{base:.2f}" x2="{x0 + w:.2f}" y2="{base:.2f}" stroke="#000000" stroke-width="0.5"/>'
        )
        out.append(
            f'<text x="{x0 - 6:.2f}" y="{base - 0.4 * row_h:.2f}" text-anchor="end" font-size="11">{i + 1}</text>'
        )
        for j in range(n):
            cx = x0 + (j + 0.5) * slot
            if model_modes is not None:
                mh = float(model_modes[i, j]) * usable
                out.append(
                    f'<rect class="model-bar" x="{cx - bar:.2f}" y="{base - mh:.2f}" width="{bar:.2f}" '
                    f'height="{mh:.2f}" fill="{MODEL_COLOR}"/>'
                )
                rx = cx
            else:
                rx = cx - 0.5 * bar
            rh = float(report.modes[i, j]) * usable
            out.append(
                f'<rect class="recovered-bar" x="{rx:.2f}" y="{base - rh:.2f}" width="{bar:.2f}" '
                f'height="{rh:.2f}" fill="{RECOVERED_COLOR}"/>'
            )
    for j in range(n):
        out.append(
            f'<text x="{x0 + (j + 0.5) * slot:.2f}" y="{y0 + h + 18:.2f}" text-anchor="middle" font-size="11">{j + 1}</text>'
        )
    out.append(
        f'<text x="{x0 + w / 2:.2f}" y="{y0 + h + 36:.2f}" text-anchor="middle" font-size="12">element</text>'
    )
    out.append("</g>")
    return out


def render_svg(report: RecoveryReport, model_modes=None) -> str:
    if model_modes is not None:
        model_modes = np.asarray(model_modes, dtype=np.float64)
        if model_modes.shape != report.modes.shape:
            raise ValueError(f"model modes shape {model_modes.shape} != {report.modes.shape}")
    panel_w = (WIDTH - 2 * MARGIN - PANEL_GAP) / 2
    panel_h = HEIGHT - 2 * MARGIN - 24
    parts = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="Helvetica, Arial, sans-serif">',
        f"<title>{escape(report.label or 'recovered modes')}</title>",
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    parts += _spectrum_panel(report, MARGIN, MARGIN, panel_w, panel_h)
    parts += _modes_panel(report, model_modes, MARGIN + panel_w + PANEL_GAP, MARGIN, panel_w, panel_h)
    legend_y = HEIGHT - 10
    legend = [("full spectrum / model", MODEL_COLOR), ("subspectra", SUB_COLOR), ("recovered", RECOVERED_COLOR)]
    lx = MARGIN
    for name, color in legend:
        parts.append(f'<rect x="{lx}" y="{legend_y - 9}" width="10" height="10" fill="{color}"/>')
        parts.append(f'<text x="{lx + 14}" y="{legend_y}" font-size="11">{name}</text>')
        lx += 170
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_figure(report: RecoveryReport, model_modes=None, path=None) -> str:
    """Render the report; write it to ``path`` when given. Returns the SVG text."""
    svg = render_svg(report, model_modes)
    if path is not None:
        Path(path).write_text(svg)
    return svg

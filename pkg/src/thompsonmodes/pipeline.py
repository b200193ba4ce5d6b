"""Successive single-deletion recovery on measured resonance frequencies.

Steps: convert peaks to ``lambda = omega**-2`` and sort, optionally average
mirror-image deletions, clamp subspectra into their interlacing intervals,
evaluate the eigenvalue identity, rescale by ``C^(1/2)`` for arrays with
unequal capacitances, normalize each mode.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from thompsonmodes.errors import InputError, MissingCapacitanceRatios, SchemaError
from thompsonmodes.identity import (
    DEFAULT_DEGENERACY_TOL,
    DEFAULT_ZERO_THRESHOLD,
    check_shapes,
    correct_nonhermitian,
    normalize_rows,
    squared_components,
    threshold_components,
)
from thompsonmodes.model import (
    ArrayConfig,
    build_matrices,
    delete_resonator,
    freq_to_lambda,
    lambda_to_freq,
    system_spectrum,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasurementSet:
    """Peak frequencies of the intact array and of each single-deletion array.

    ``sub_peaks_hz[j]`` belongs to the array with element ``j + 1`` removed.
    """

    full_peaks_hz: tuple[float, ...]
    sub_peaks_hz: tuple[tuple[float, ...], ...]
    label: str = ""

    def __post_init__(self):
        full = tuple(float(f) for f in self.full_peaks_hz)
        subs = tuple(tuple(float(f) for f in s) for s in self.sub_peaks_hz)
        object.__setattr__(self, "full_peaks_hz", full)
        object.__setattr__(self, "sub_peaks_hz", subs)
        n = len(full)
        if n == 0:
            raise SchemaError("full_peaks_hz", "must contain at least one frequency")
        if len(subs) != n:
            raise SchemaError("sub_peaks_hz", f"expected {n} lists (one per element), got {len(subs)}")
        for j, s in enumerate(subs):
            if len(s) != n - 1:
                raise SchemaError("sub_peaks_hz", f"list {j + 1} has {len(s)} peaks, expected {n - 1}")
        for f in full + tuple(x for s in subs for x in s):
            if not (np.isfinite(f) and f > 0):
                raise SchemaError("full_peaks_hz/sub_peaks_hz", f"frequencies must be finite and > 0, got {f!r}")

    @property
    def n(self) -> int:
        return len(self.full_peaks_hz)


@dataclass(frozen=True)
class RecoveryOptions:
    """``symmetrize=None`` means: decide from the config if one is given, else off."""

    symmetrize: bool | None = None
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL
    capacitance_ratios: tuple[float, ...] | None = None
    non_hermitian: bool = False

    def __post_init__(self):
        if not self.zero_threshold > 0:
            raise InputError(f"zero_threshold must be > 0, got {self.zero_threshold!r}")
        if not self.degeneracy_tol > 0:
            raise InputError(f"degeneracy_tol must be > 0, got {self.degeneracy_tol!r}")
        if self.capacitance_ratios is not None:
            ratios = tuple(float(r) for r in self.capacitance_ratios)
            if not all(np.isfinite(r) and r > 0 for r in ratios):
                raise InputError("capacitance ratios must be finite and > 0")
            object.__setattr__(self, "capacitance_ratios", ratios)


@dataclass
class RecoveryReport:
    modes: np.ndarray
    lambda_full: np.ndarray
    lambda_subs: list[np.ndarray]
    repair_deltas: list[np.ndarray]
    symmetrization_deltas: list[np.ndarray]
    warnings: list[str] = field(default_factory=list)
    label: str = ""
    symmetrized: bool = False
    capacitance_ratios: tuple[float, ...] | None = None

    @property
    def n(self) -> int:
        return self.lambda_full.size

    @property
    def non_hermitian(self) -> bool:
        return self.capacitance_ratios is not None


def sort_and_convert(ms: MeasurementSet) -> tuple[np.ndarray, list[np.ndarray]]:
    """Map peaks to eigenvalues, each list ascending in lambda (descending in frequency)."""
    full = np.sort([freq_to_lambda(f) for f in ms.full_peaks_hz])
    subs = [np.sort(np.array([freq_to_lambda(f) for f in s], dtype=np.float64)) for s in ms.sub_peaks_hz]
    return full, subs


def symmetrize_subspectra(subs) -> list[np.ndarray]:
    """Average deletion ``j`` with its mirror ``n + 1 - j``; the middle one (odd n) is kept."""
    out = [np.array(s, dtype=np.float64) for s in subs]
    n = len(out)
    for j in range(n // 2):
        k = n - 1 - j
        if out[j].shape != out[k].shape:
            raise ValueError(f"subspectra {j + 1} and {k + 1} differ in length")
        mean = 0.5 * (out[j] + out[k])
        out[j] = mean
        out[k] = mean.copy()
    return out


def interlacing_repair(full, subs) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Clamp the i-th value of every subspectrum into ``[lam_i, lam_(i+1)]``.

    Returns the repaired subspectra and the per-value deltas (new - old).
    """
    lam, mus = check_shapes(full, subs)
    lower, upper = lam[:-1], lam[1:]
    repaired = [np.minimum(np.maximum(mu, lower), upper) for mu in mus]
    deltas = [r - mu for r, mu in zip(repaired, mus)]
    return repaired, deltas


def run_recovery(
    ms: MeasurementSet,
    opts: RecoveryOptions | None = None,
    config: ArrayConfig | None = None,
) -> RecoveryReport:
    """Estimate mode magnitudes from a measurement set.

    ``config`` is optional: when given it selects symmetrization (on for
    palindromic base frequencies) if ``opts.symmetrize`` is None, and
    supplies capacitance ratios if the options carry none.
    """
    opts = opts or RecoveryOptions()
    warnings: list[str] = []

    ratios = opts.capacitance_ratios
    if ratios is None and config is not None and (opts.non_hermitian or not config.is_uniform):
        cap = config.capacitances_f
        ratios = tuple(cap / cap.max())
    if opts.non_hermitian and ratios is None:
        raise MissingCapacitanceRatios(
            "non-Hermitian recovery needs capacitance ratios (pass a config or explicit ratios)"
        )
    if ratios is not None and len(ratios) != ms.n:
        raise InputError(f"{len(ratios)} capacitance ratios given for {ms.n} elements")
    if config is not None and config.n != ms.n:
        raise InputError(f"config has {config.n} elements, measurement has {ms.n}")

    symmetrize = opts.symmetrize
    if symmetrize is None:
        symmetrize = config.is_palindromic if config is not None else False

    full, subs = sort_and_convert(ms)

    if symmetrize:
        sym = symmetrize_subspectra(subs)
        sym_deltas = [s - o for s, o in zip(sym, subs)]
        subs = sym
    else:
        sym_deltas = [np.zeros_like(s) for s in subs]

    subs, repair_deltas = interlacing_repair(full, subs)
    moved = sum(int(np.count_nonzero(d)) for d in repair_deltas)
    if moved:
        span = full[-1] - full[0] if full.size > 1 else abs(full[0])
        worst = max(float(np.max(np.abs(d))) for d in repair_deltas if d.size)
        warnings.append(
            f"interlacing repair moved {moved} subspectrum value(s); "
            f"largest shift {worst:.6g} ({worst / span:.3g} of spectral range)"
        )

    ratios_sq = squared_components(full, subs, opts.degeneracy_tol)
    cleaned, zeroed = threshold_components(ratios_sq, opts.zero_threshold)
    for i, j in zeroed:
        warnings.append(
            f"component (mode {i + 1}, element {j + 1}) set to zero "
            f"(squared ratio {ratios_sq[i, j]:.3g} below threshold {opts.zero_threshold:.3g})"
        )
    modes = np.sqrt(cleaned)

    if ratios is not None:
        modes = correct_nonhermitian(modes, np.diag(ratios))
    modes = normalize_rows(modes)

    for w in warnings:
        log.info(w)
    return RecoveryReport(
        modes=modes,
        lambda_full=full,
        lambda_subs=subs,
        repair_deltas=repair_deltas,
        symmetrization_deltas=sym_deltas,
        warnings=warnings,
        label=ms.label,
        symmetrized=bool(symmetrize),
        capacitance_ratios=None if ratios is None else tuple(float(r) for r in ratios),
    )


def model_spectra(cfg: ArrayConfig) -> tuple[np.ndarray, list[np.ndarray]]:
    """Exact full and single-deletion spectra of the model (ascending lambda)."""
    full = system_spectrum(build_matrices(cfg))
    if cfg.n == 1:
        return full, [np.zeros(0)]
    subs = [system_spectrum(delete_resonator(cfg, j)) for j in range(1, cfg.n + 1)]
    return full, subs


def simulate_measurement(cfg: ArrayConfig, noise_sigma: float = 0.0, seed: int = 0) -> MeasurementSet:
    """Model peaks with multiplicative Gaussian frequency noise ``f * (1 + eps)``.

    Draws come from a generator seeded per call: the full spectrum first,
    then deletions 1..n. Peaks are listed in ascending frequency.
    """
    if not noise_sigma >= 0:
        raise InputError(f"noise_sigma must be >= 0, got {noise_sigma!r}")
    rng = np.random.default_rng(seed)
    full, subs = model_spectra(cfg)

    def peaks(lams: np.ndarray) -> tuple[float, ...]:
        f = np.array([lambda_to_freq(x) for x in lams])
        if noise_sigma > 0:
            f = f * (1.0 + rng.normal(0.0, noise_sigma, size=f.size))
        return tuple(float(x) for x in np.sort(f))

    return MeasurementSet(
        full_peaks_hz=peaks(full),
        sub_peaks_hz=tuple(peaks(s) for s in subs),
        label=cfg.label,
    )

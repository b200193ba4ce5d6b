"""Mode magnitudes from eigenvalues alone.

For a symmetric matrix with simple eigenvalues ``lam`` and with ``mu_j`` the
eigenvalues of the principal submatrix that drops index ``j``,

    |v_ij|^2 * prod_{k != i} (lam_i - lam_k) = prod_k (lam_i - mu_jk).

Both products are accumulated as a sign and a sum of ``log|.|`` so that
spectra in physical units (``1e-19 s^2`` and below) or with many factors
neither underflow nor overflow.

A :data:`Spectrum` is a 1-D ascending float array; a :data:`SubspectraSet`
is a list of ``n`` such arrays of length ``n - 1``; a mode matrix is an
``n x n`` array whose row ``i`` holds the component magnitudes of mode ``i``.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from thompsonmodes.errors import DegenerateSpectrum, NegativeSquaredComponent
from thompsonmodes.linalg import as_matrix, diag_power

if TYPE_CHECKING:
    from thompsonmodes.model import SystemMatrices

Spectrum = np.ndarray
SubspectraSet = list

DEFAULT_ZERO_THRESHOLD = 1e-10
DEFAULT_DEGENERACY_TOL = 1e-9


def check_shapes(full, subs) -> tuple[np.ndarray, list[np.ndarray]]:
    lam = np.asarray(full, dtype=np.float64).ravel()
    n = lam.size
    if n == 0:
        raise ValueError("full spectrum is empty")
    if len(subs) != n:
        raise ValueError(f"expected {n} subspectra, got {len(subs)}")
    mus = [np.asarray(s, dtype=np.float64).ravel() for s in subs]
    for j, mu in enumerate(mus):
        if mu.size != n - 1:
            raise ValueError(f"subspectrum {j + 1} has {mu.size} values, expected {n - 1}")
    if not (np.all(np.isfinite(lam)) and all(np.all(np.isfinite(mu)) for mu in mus)):
        raise ValueError("spectra must be finite")
    return lam, mus


def check_simple(lam: np.ndarray, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> None:
    """Raise :class:`DegenerateSpectrum` unless every gap exceeds ``tol * range``."""
    if lam.size < 2:
        return
    ordered = np.sort(lam)
    gaps = np.diff(ordered)
    k = int(np.argmin(gaps))
    tol = degeneracy_tol * (ordered[-1] - ordered[0])
    if gaps[k] <= tol:
        raise DegenerateSpectrum(ordered[k : k + 2], float(gaps[k]), float(tol))


def _signed_log_products(diffs: np.ndarray, axis: int):
    # returns (sign, log|product|, has_zero_factor) along axis
    zero = np.any(diffs == 0.0, axis=axis)
    with np.errstate(divide="ignore"):
        logs = np.log(np.abs(diffs))
    logs = np.where(np.isfinite(logs), logs, 0.0)
    negatives = np.sum(diffs < 0.0, axis=axis)
    sign = np.where(negatives % 2 == 0, 1.0, -1.0)
    return sign, np.sum(logs, axis=axis), zero


def squared_components(full, subs, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> np.ndarray:
    """Raw right-hand-side ratios ``|v_ij|^2`` (may be slightly negative for noisy data)."""
    lam, mus = check_shapes(full, subs)
    check_simple(lam, degeneracy_tol)
    n = lam.size
    diffs = lam[:, None] - lam[None, :]
    np.fill_diagonal(diffs, 1.0)
    den_sign, den_log, _ = _signed_log_products(diffs, axis=1)

    ratios = np.zeros((n, n))
    for j, mu in enumerate(mus):
        num_sign, num_log, num_zero = _signed_log_products(lam[:, None] - mu[None, :], axis=1)
        col = num_sign * den_sign * np.exp(num_log - den_log)
        ratios[:, j] = np.where(num_zero, 0.0, col)
    return ratios


def threshold_components(ratios: np.ndarray, zero_threshold: float = DEFAULT_ZERO_THRESHOLD):
    """Zero ratios with ``|r| < zero_threshold``; reject anything more negative.

    Returns the cleaned ratios and the ``(i, j)`` positions that were zeroed
    from a nonzero value.
    """
    out = np.array(ratios, dtype=np.float64)
    bad = np.argwhere(out <= -zero_threshold)
    if bad.size:
        i, j = (int(x) for x in bad[0])
        raise NegativeSquaredComponent(i, j, float(out[i, j]))
    small = (np.abs(out) < zero_threshold) & (out != 0.0)
    zeroed = [(int(i), int(j)) for i, j in np.argwhere(small)]
    out[np.abs(out) < zero_threshold] = 0.0
    return out, zeroed


def thompson_modes(
    full,
    subs,
    zero_threshold: float = DEFAULT_ZERO_THRESHOLD,
    degeneracy_tol: float = DEFAULT_DEGENERACY_TOL,
) -> np.ndarray:
    """Mode magnitudes ``|v_ij|`` from the full spectrum and the n deletion subspectra.

    Rows are modes in ascending-eigenvalue order, columns are elements. Rows
    are not normalized. Squared ratios with magnitude below
    ``zero_threshold`` are taken as exact zeros.

    Raises:
        DegenerateSpectrum: two full-spectrum eigenvalues are closer than
            ``degeneracy_tol`` times the spectral range.
        NegativeSquaredComponent: a ratio is below ``-zero_threshold``.
    """
    ratios = squared_components(full, subs, degeneracy_tol)
    cleaned, _ = threshold_components(ratios, zero_threshold)
    return np.sqrt(cleaned)


def normalize_rows(modes) -> np.ndarray:
    m = np.array(modes, dtype=np.float64)
    norms = np.linalg.norm(m, axis=1, keepdims=True)
    return np.divide(m, norms, out=m.copy(), where=norms > 0)


def hermitian_equivalent(sys: "SystemMatrices") -> np.ndarray:
    """``C^(1/2) M C^(1/2)``: symmetric, with the same spectrum as ``C M``."""
    half = np.diag(diag_power(sys.c, 0.5))
    m = as_matrix(sys.m)
    return half[:, None] * m * half[None, :]


def correct_nonhermitian(t_modes, c) -> np.ndarray:
    """Map modes of ``C^(1/2) M C^(1/2)`` to those of ``C M`` (``U = C^(1/2) T``).

    Column ``j`` is scaled by ``sqrt(c_jj)`` and each row is renormalized.
    """
    half = np.diag(diag_power(c, 0.5))
    t = np.asarray(t_modes, dtype=np.float64)
    if t.shape != (half.size, half.size):
        raise ValueError(f"mode matrix shape {t.shape} does not match C of size {half.size}")
    return normalize_rows(t * half[None, :])


def identity_residual(full, subs, modes) -> float:
    """Largest violation of the product identity for given magnitudes (diagnostic)."""
    lam, mus = check_shapes(full, subs)
    m = np.asarray(modes, dtype=np.float64)
    worst = 0.0
    for i in range(lam.size):
        left_factors = np.delete(lam[i] - lam, i)
        for j, mu in enumerate(mus):
            lhs = m[i, j] ** 2 * np.prod(left_factors)
            rhs = np.prod(lam[i] - mu)
            scale = max(abs(np.prod(left_factors)), abs(rhs), np.finfo(float).tiny)
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst

"""Dense real matrix primitives and a cyclic Jacobi symmetric eigensolver.

Matrices are plain 2-D ``float64`` numpy arrays. Functions never modify
their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from thompsonmodes.errors import (
    DidNotConverge,
    IndexOutOfRange,
    NonPositiveDiagonal,
    NotDiagonal,
    NotSymmetric,
)

MAX_SWEEPS = 100
OFF_DIAGONAL_TOL = 1e-14
DEFAULT_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SymEigenResult:
    """Ascending eigenvalues; eigenvectors are the columns of ``vectors``."""

    values: np.ndarray
    vectors: np.ndarray


def as_matrix(a) -> np.ndarray:
    """Coerce to a finite square float64 array (copy)."""
    m = np.array(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


@njit(cache=True)
def _jacobi(a, off_tol, max_sweeps):
    n = a.shape[0]
    v = np.eye(n)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        diag = 0.0
        for p in range(n):
            diag += a[p, p] * a[p, p]
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if np.sqrt(off) <= off_tol * np.sqrt(diag):
            return a, v, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    if k != p and k != q:
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                a[p, p] -= t * apq
                a[q, q] += t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    return a, v, max_sweeps, False


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    # Largest-magnitude entry of each column positive; near-ties go to the lowest index.
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = np.abs(out[:, k])
        top = col.max()
        lead = int(np.flatnonzero(col >= top * (1.0 - 1e-12))[0])
        if out[lead, k] < 0:
            out[:, k] = -out[:, k]
    return out


def sym_eigen(a, symmetry_tol: float = DEFAULT_SYMMETRY_TOL) -> SymEigenResult:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    The input must be symmetric to within ``symmetry_tol * max|a|``; it is
    then averaged with its transpose before iterating. Sweeps stop once the
    off-diagonal Frobenius norm falls to ``1e-14`` of the diagonal norm.

    Raises:
        NotSymmetric: asymmetry exceeds the tolerance.
        DidNotConverge: more than 100 sweeps were needed.
    """
    m = as_matrix(a)
    n = m.shape[0]
    if n == 0:
        return SymEigenResult(np.zeros(0), np.zeros((0, 0)))
    scale = np.max(np.abs(m))
    asym = np.max(np.abs(m - m.T))
    if asym > symmetry_tol * scale:
        raise NotSymmetric(f"max |a_jk - a_kj| = {asym:.3g} exceeds {symmetry_tol:.3g} * max|a|")
    m = 0.5 * (m + m.T)
    d, v, sweeps, ok = _jacobi(m, OFF_DIAGONAL_TOL, MAX_SWEEPS)
    if not ok:
        raise DidNotConverge(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")
    values = np.diag(d).copy()
    order = np.argsort(values, kind="stable")
    return SymEigenResult(values[order], _fix_signs(v[:, order]))


def principal_submatrix(a, j: int) -> np.ndarray:
    """Drop row and column ``j`` (1-based, as resonators are numbered)."""
    m = np.asarray(a, dtype=np.float64)
    n = m.shape[0]
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"index {j} outside 1..{n}")
    keep = np.r_[0 : j - 1, j:n]
    return m[np.ix_(keep, keep)].copy()


def diag_power(c, p: float) -> np.ndarray:
    """Raise a positive diagonal matrix to the real power ``p``."""
    m = as_matrix(c)
    d = np.diag(m)
    if np.any(m - np.diag(d)):
        raise NotDiagonal("matrix has nonzero off-diagonal entries")
    if np.any(d <= 0):
        raise NonPositiveDiagonal(f"diagonal entries must be > 0, got min {d.min():.6g}")
    return np.diag(d**p)


def is_symmetric(a, tol: float = 0.0) -> bool:
    m = np.asarray(a, dtype=np.float64)
    if m.size == 0:
        return True
    return bool(np.max(np.abs(m - m.T)) <= tol * np.max(np.abs(m)))

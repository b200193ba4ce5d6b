"""Lumped model of a 1-D array of inductively coupled LC resonators.

Element ``n`` has the common inductance ``L`` and a capacitance ``C_n``
fixed by its isolated (base) resonance frequency. Mutual inductance between
elements at distance ``d`` is ``kappa_d * L``. The Kirchhoff equations read
``H I = lambda I`` with ``H = C M`` and ``lambda = omega**-2``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from thompsonmodes.errors import (
    IndexOutOfRange,
    InvalidConfig,
    NonPositiveEigenvalue,
    NonPositiveInput,
    SchemaError,
    TooSmall,
)
from thompsonmodes.identity import hermitian_equivalent, normalize_rows
from thompsonmodes.linalg import diag_power, sym_eigen

TWO_PI = 2.0 * math.pi

CONFIG_KEYS = {"n", "inductance_h", "base_frequencies_hz", "coupling_coefficients"}
CONFIG_OPTIONAL_KEYS = {"label", "note"}


@dataclass(frozen=True)
class ArrayConfig:
    """Physical description of a resonator array.

    ``coupling_coefficients[d - 1]`` is the coefficient between elements a
    distance ``d`` apart.
    """

    n: int
    inductance_h: float
    base_frequencies_hz: tuple[float, ...]
    coupling_coefficients: tuple[float, ...]
    label: str = ""
    note: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "base_frequencies_hz", tuple(float(f) for f in self.base_frequencies_hz))
        object.__setattr__(self, "coupling_coefficients", tuple(float(k) for k in self.coupling_coefficients))
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise InvalidConfig(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.inductance_h) and self.inductance_h > 0):
            raise InvalidConfig(f"inductance_h must be > 0, got {self.inductance_h!r}")
        if len(self.base_frequencies_hz) != self.n:
            raise InvalidConfig(
                f"base_frequencies_hz has {len(self.base_frequencies_hz)} entries, expected n = {self.n}"
            )
        if len(self.coupling_coefficients) != self.n - 1:
            raise InvalidConfig(
                f"coupling_coefficients has {len(self.coupling_coefficients)} entries, expected n - 1 = {self.n - 1}"
            )
        if not all(math.isfinite(f) and f > 0 for f in self.base_frequencies_hz):
            raise InvalidConfig("base frequencies must be finite and > 0")
        if not all(math.isfinite(k) and abs(k) < 1 for k in self.coupling_coefficients):
            raise InvalidConfig("coupling coefficients must satisfy |kappa| < 1")

    @property
    def capacitances_f(self) -> np.ndarray:
        return np.array([capacitance_from_base_freq(f, self.inductance_h) for f in self.base_frequencies_hz])

    @property
    def is_palindromic(self) -> bool:
        f = self.base_frequencies_hz
        return all(f[i] == f[-1 - i] for i in range(len(f)))

    @property
    def is_uniform(self) -> bool:
        return len(set(self.base_frequencies_hz)) == 1

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "inductance_h": self.inductance_h,
            "base_frequencies_hz": list(self.base_frequencies_hz),
            "coupling_coefficients": list(self.coupling_coefficients),
        }
        if self.label:
            out["label"] = self.label
        if self.note:
            out["note"] = self.note
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ArrayConfig":
        if not isinstance(data, dict):
            raise SchemaError("<root>", "config must be a JSON object")
        unknown = sorted(set(data) - CONFIG_KEYS - CONFIG_OPTIONAL_KEYS)
        if unknown:
            raise SchemaError(unknown[0], "unknown key")
        for key in sorted(CONFIG_KEYS):
            if key not in data:
                raise SchemaError(key, "missing required key")
        if not isinstance(data["n"], int) or isinstance(data["n"], bool):
            raise SchemaError("n", "must be an integer")
        if not _is_number(data["inductance_h"]):
            raise SchemaError("inductance_h", "must be a number")
        for key in ("base_frequencies_hz", "coupling_coefficients"):
            if not isinstance(data[key], list) or not all(_is_number(x) for x in data[key]):
                raise SchemaError(key, "must be an array of numbers")
        for key in CONFIG_OPTIONAL_KEYS:
            if key in data and not isinstance(data[key], str):
                raise SchemaError(key, "must be a string")
        return cls(
            n=data["n"],
            inductance_h=float(data["inductance_h"]),
            base_frequencies_hz=data["base_frequencies_hz"],
            coupling_coefficients=data["coupling_coefficients"],
            label=data.get("label", ""),
            note=data.get("note", ""),
        )


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def load_config(path) -> ArrayConfig:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("<root>", f"invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return ArrayConfig.from_dict(data)


def save_config(cfg: ArrayConfig, path) -> None:
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2) + "\n")


@dataclass(frozen=True)
class SystemMatrices:
    """``c`` (diagonal, F), ``m`` (H), and ``h = c @ m`` (s^2)."""

    c: np.ndarray
    m: np.ndarray
    h: np.ndarray


def capacitance_from_base_freq(f_hz: float, l_h: float) -> float:
    if not (f_hz > 0 and l_h > 0):
        raise NonPositiveInput(f"frequency and inductance must be > 0, got f={f_hz!r}, L={l_h!r}")
    return 1.0 / (l_h * (TWO_PI * f_hz) ** 2)


def freq_to_lambda(f_hz: float) -> float:
    if not f_hz > 0:
        raise NonPositiveInput(f"frequency must be > 0, got {f_hz!r}")
    return (TWO_PI * f_hz) ** -2


def lambda_to_freq(lambda_s2: float) -> float:
    if not lambda_s2 > 0:
        raise NonPositiveInput(f"eigenvalue must be > 0, got {lambda_s2!r}")
    return 1.0 / (TWO_PI * math.sqrt(lambda_s2))


def _matrices_at(cfg: ArrayConfig, positions: Sequence[int]) -> SystemMatrices:
    # positions are 0-based slots in the intact array; distances between survivors are unchanged
    pos = np.asarray(positions, dtype=int)
    L = cfg.inductance_h
    kappa = np.concatenate(([1.0], cfg.coupling_coefficients))
    dist = np.abs(pos[:, None] - pos[None, :])
    m = L * kappa[dist]
    cap = cfg.capacitances_f[pos]
    return SystemMatrices(c=np.diag(cap), m=m, h=cap[:, None] * m)


def build_matrices(cfg: ArrayConfig) -> SystemMatrices:
    return _matrices_at(cfg, range(cfg.n))


def delete_resonator(cfg: ArrayConfig, j: int) -> SystemMatrices:
    """Matrices of the array with resonator ``j`` (1-based) physically removed."""
    if cfg.n < 2:
        raise TooSmall("cannot remove a resonator from a single-element array")
    if not 1 <= j <= cfg.n:
        raise IndexOutOfRange(f"resonator {j} outside 1..{cfg.n}")
    return _matrices_at(cfg, [k for k in range(cfg.n) if k != j - 1])


def system_spectrum(sys: SystemMatrices) -> np.ndarray:
    """Ascending eigenvalues of ``C M``, computed on the symmetric ``C^(1/2) M C^(1/2)``."""
    if sys.c.shape[0] == 0:
        return np.zeros(0)
    values = sym_eigen(hermitian_equivalent(sys)).values
    if values[0] <= 0:
        raise NonPositiveEigenvalue(
            f"eigenvalue {values[0]:.6g} <= 0: coupling matrix is not positive definite"
        )
    return values


def model_modes(sys: SystemMatrices) -> np.ndarray:
    """Row-normalized ``|eigenvectors|`` of ``C M`` (row ``i`` = mode ``i``, ascending eigenvalue)."""
    t = sym_eigen(hermitian_equivalent(sys)).vectors
    u = diag_power(sys.c, 0.5) @ t
    return normalize_rows(np.abs(u).T)


def frequency_clusters(freqs_hz: Sequence[float]):
    """Split sorted frequencies at the widest gap leaving >= 2 modes on each side.

    Returns ``(low, high, gap)`` or ``None`` for fewer than four modes.
    """
    f = np.sort(np.asarray(freqs_hz, dtype=np.float64))
    if f.size < 4:
        return None
    gaps = np.diff(f)[1:-1]
    k = int(np.argmax(gaps)) + 2
    return f[:k], f[k:], float(f[k] - f[k - 1])


def has_band_gap(freqs_hz: Sequence[float]) -> bool:
    split = frequency_clusters(freqs_hz)
    if split is None:
        return False
    low, high, gap = split
    return gap > (low[-1] - low[0]) and gap > (high[-1] - high[0])

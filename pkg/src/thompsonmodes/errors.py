"""Exception hierarchy.

Every error carries the process exit code the CLI maps it to:
2 = input/schema, 3 = model, 4 = degenerate spectrum.
"""

from __future__ import annotations


class ThompsonError(Exception):
    exit_code = 3


class InputError(ThompsonError):
    exit_code = 2


class ModelError(ThompsonError):
    exit_code = 3


class SchemaError(InputError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class ParseError(InputError):
    def __init__(self, line: int, message: str, path: str | None = None):
        self.line = line
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {message}")


class InvalidConfig(InputError):
    pass


class NonPositiveInput(InputError, ValueError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class TooSmall(InputError):
    pass


class MissingCapacitanceRatios(InputError):
    pass


class TooFewPoints(InputError):
    pass


class CountMismatch(InputError):
    def __init__(self, expected: int, found: list[float]):
        self.expected = expected
        self.found = found
        listing = ", ".join(f"{f:.12g}" for f in found)
        super().__init__(f"expected {expected} peaks, found {len(found)}: [{listing}]")


class NotSymmetric(ModelError):
    pass


class DidNotConverge(ModelError):
    pass


class NotDiagonal(ModelError):
    pass


class NonPositiveDiagonal(ModelError):
    pass


class NonPositiveEigenvalue(ModelError):
    pass


class NegativeSquaredComponent(ModelError):
    def __init__(self, i: int, j: int, value: float):
        self.i = i
        self.j = j
        self.value = value
        super().__init__(
            f"squared component of mode {i + 1}, element {j + 1} is negative ({value:.6g}); "
            "subspectra violate interlacing"
        )


class DegenerateSpectrum(ThompsonError):
    exit_code = 4

    def __init__(self, values, gap: float, tol: float):
        self.values = list(values)
        self.gap = gap
        self.tol = tol
        listing = ", ".join(f"{v:.12g}" for v in self.values)
        super().__init__(
            f"eigenvalues too close to resolve: minimum gap {gap:.6g} <= {tol:.6g} "
            f"between [{listing}]"
        )

"""Exact semi-tensor-product algebra over the rationals.

Dense matrices hold :class:`fractions.Fraction` entries in numpy object
arrays, so every product, Kronecker product and column sum is exact.
Logical matrices (all columns are unit vectors) are kept in the compact
column-index form ``delta_m[i_1, ..., i_n]`` and only expanded on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "Matrix",
    "StochasticMatrix",
    "LogicalMatrix",
    "DimensionError",
    "as_fraction",
    "identity",
    "delta",
    "kron",
    "stp",
    "stp_chain",
    "swap_matrix",
    "power_reducing_matrix",
    "khatri_rao",
]


class DimensionError(ValueError):
    """Raised when operand shapes are incompatible."""


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and decimal strings exactly; floats are refused."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        return Fraction(int(value))
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a decimal string or Fraction")
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def _object_array(rows: int, cols: int) -> np.ndarray:
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(0))
    return out


class Matrix:
    """Immutable dense matrix with exact rational entries."""

    __slots__ = ("_data",)

    def __init__(self, data):
        if isinstance(data, Matrix):
            arr = data._data
        else:
            src = np.asarray(data, dtype=object)
            if src.ndim == 1:
                src = src.reshape(-1, 1)
            if src.ndim != 2 or src.shape[0] == 0 or src.shape[1] == 0:
                raise DimensionError(f"expected a non-empty 2-d array, got shape {src.shape}")
            arr = np.empty(src.shape, dtype=object)
            for idx, v in np.ndenumerate(src):
                arr[idx] = as_fraction(v)
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Matrix":
        obj = Matrix.__new__(Matrix)
        arr.flags.writeable = False
        obj._data = arr
        return obj

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> tuple[int, int]:
        return self._data.shape

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    def col(self, j: int) -> tuple[Fraction, ...]:
        """Column ``j`` (1-based) as a tuple."""
        return tuple(self._data[:, j - 1])

    def column_sums(self) -> list[Fraction]:
        return [sum(self._data[:, j], Fraction(0)) for j in range(self.cols)]

    def is_stochastic(self) -> bool:
        return all(v >= 0 for v in self._data.flat) and all(s == 1 for s in self.column_sums())

    def is_logical(self) -> bool:
        for j in range(self.cols):
            column = self._data[:, j]
            if sum(1 for v in column if v == 1) != 1 or any(v not in (0, 1) for v in column):
                return False
        return True

    def to_logical(self) -> "LogicalMatrix":
        return LogicalMatrix.from_matrix(self)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        other = as_matrix(other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return Matrix._wrap(self._data.dot(other._data))

    def __add__(self, other: "Matrix") -> "Matrix":
        other = as_matrix(other)
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix._wrap(self._data + other._data)

    def scale(self, factor) -> "Matrix":
        f = as_fraction(factor)
        return Matrix._wrap(self._data * f)

    def permute_columns(self, order: Sequence[int]) -> "Matrix":
        """New matrix whose column ``k`` is old column ``order[k]`` (0-based)."""
        return Matrix._wrap(self._data[:, list(order)].copy())

    def __eq__(self, other) -> bool:
        if isinstance(other, LogicalMatrix):
            other = other.to_matrix()
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._data == other._data))

    def __hash__(self):
        return hash((self.shape, tuple(self._data.flat)))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(v) for v in row) for row in self._data)
        return f"Matrix({self.rows}x{self.cols}: {body})"


class StochasticMatrix(Matrix):
    """A column-stochastic Matrix; validated on construction."""

    __slots__ = ()

    def __init__(self, data):
        super().__init__(data)
        if not self.is_stochastic():
            raise ValueError("columns must be non-negative and sum to exactly 1")


@dataclass(frozen=True)
class LogicalMatrix:
    """``delta_rows[cols[0], ..., cols[-1]]`` with 1-based column indices."""

    rows: int
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "cols", tuple(int(c) for c in self.cols))
        if self.rows < 1:
            raise DimensionError("rows must be positive")
        if not self.cols:
            raise DimensionError("a logical matrix needs at least one column")
        bad = [c for c in self.cols if not 1 <= c <= self.rows]
        if bad:
            raise ValueError(f"column indices {bad} outside [1, {self.rows}]")

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, len(self.cols))

    def to_matrix(self) -> Matrix:
        arr = _object_array(self.rows, len(self.cols))
        for j, i in enumerate(self.cols):
            arr[i - 1, j] = Fraction(1)
        return Matrix._wrap(arr)

    @classmethod
    def from_matrix(cls, m: Matrix) -> "LogicalMatrix":
        if not m.is_logical():
            raise ValueError("matrix is not logical")
        cols = [int(np.nonzero(m.data[:, j] == 1)[0][0]) + 1 for j in range(m.cols)]
        return cls(m.rows, tuple(cols))

    def compose(self, other: "LogicalMatrix") -> "LogicalMatrix":
        """Ordinary product ``self @ other`` carried out on indices."""
        if len(self.cols) != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        return LogicalMatrix(self.rows, tuple(self.cols[c - 1] for c in other.cols))

    def __eq__(self, other) -> bool:
        if isinstance(other, LogicalMatrix):
            return self.rows == other.rows and self.cols == other.cols
        if isinstance(other, Matrix):
            return self.to_matrix() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.rows, self.cols))

    def __str__(self) -> str:
        return f"delta{self.rows}[{','.join(map(str, self.cols))}]"


MatrixLike = Union[Matrix, LogicalMatrix]


def as_matrix(m) -> Matrix:
    if isinstance(m, Matrix):
        return m
    if isinstance(m, LogicalMatrix):
        return m.to_matrix()
    return Matrix(m)


def identity(n: int) -> LogicalMatrix:
    return LogicalMatrix(n, tuple(range(1, n + 1)))


def delta(n: int, i: int) -> Matrix:
    """The unit column vector ``delta_n^i``."""
    return LogicalMatrix(n, (i,)).to_matrix()


def kron(a: MatrixLike, b: MatrixLike) -> Matrix:
    a, b = as_matrix(a), as_matrix(b)
    return Matrix._wrap(np.kron(a.data, b.data))


def _kron_identity(m: Matrix, k: int) -> Matrix:
    if k == 1:
        return m
    return kron(m, identity(k))


def stp(a: MatrixLike, b: MatrixLike) -> Matrix:
    """Left semi-tensor product ``(A (x) I_{t/n})(B (x) I_{t/p})`` with ``t = lcm(n, p)``."""
    a, b = as_matrix(a), as_matrix(b)
    n, p = a.cols, b.rows
    t = lcm(n, p)
    return _kron_identity(a, t // n) @ _kron_identity(b, t // p)


def stp_chain(factors: Iterable[MatrixLike]) -> Matrix:
    it = iter(factors)
    try:
        out = as_matrix(next(it))
    except StopIteration:
        raise ValueError("stp_chain needs at least one factor") from None
    for f in it:
        out = stp(out, f)
    return out


def swap_matrix(p: int, d: int) -> LogicalMatrix:
    """``W_[p,d] = [I_d (x) delta_p^1, ..., I_d (x) delta_p^p]``.

    Column ``(i-1)d + j`` of the block ``I_d (x) delta_p^i`` is
    ``delta_d^j (x) delta_p^i``, which sits at row ``(j-1)p + i``.
    """
    if p < 1 or d < 1:
        raise ValueError("swap_matrix needs p, d >= 1")
    cols = []
    for i in range(1, p + 1):
        for j in range(1, d + 1):
            cols.append((j - 1) * p + i)
    return LogicalMatrix(p * d, tuple(cols))


def power_reducing_matrix(n: int) -> LogicalMatrix:
    """``Phi_n``: column ``j`` is ``delta_{2^n}^j (x) delta_{2^n}^j``."""
    if n < 1:
        raise ValueError("power_reducing_matrix needs n >= 1")
    size = 2 ** n
    return LogicalMatrix(size * size, tuple((j - 1) * size + j for j in range(1, size + 1)))


def khatri_rao(a: MatrixLike, b: MatrixLike) -> Matrix:
    """Column-wise Kronecker product."""
    a, b = as_matrix(a), as_matrix(b)
    if a.cols != b.cols:
        raise DimensionError(f"Khatri-Rao needs equal column counts, got {a.cols} and {b.cols}")
    out = np.empty((a.rows * b.rows, a.cols), dtype=object)
    for j in range(a.cols):
        out[:, j] = np.kron(a.data[:, j], b.data[:, j])
    return Matrix._wrap(out)

"""Dense real-matrix values: minors, determinants, inverses, norms.

All public indices are 1-based. Matrices are immutable values; every
operation returns a fresh matrix and never mutates its inputs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import SingularMatrixError

__all__ = [
    "Matrix",
    "SINGULARITY_RTOL",
    "COFACTOR_SIZE_LIMIT",
    "minor",
    "determinant",
    "cofactor_det",
    "inverse",
    "matmul",
    "identity",
    "inf_norm",
    "set_entry",
]

# A pivot with magnitude below SINGULARITY_RTOL * inf_norm(A) is treated
# as zero during inversion.
SINGULARITY_RTOL = 1e-12

# cofactor_det is O(n!) and exists as a test oracle only.
COFACTOR_SIZE_LIMIT = 10


class Matrix:
    """Immutable dense real matrix stored row-major as 64-bit floats.

    Construct from an iterable of rows (``Matrix([[1, 2], [3, 4]])``) or
    from a flat row-major sequence via :meth:`from_flat`. Entries must be
    finite; NaN and infinity are rejected.
    """

    __slots__ = ("_a",)

    def __init__(self, rows: Iterable[Iterable[float]]):
        try:
            data = [[float(v) for v in row] for row in rows]
            a = np.array(data, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise ValueError(f"matrix rows must be equal-length sequences "
                             f"of numbers: {exc}") from None
        if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
            raise ValueError("matrix needs at least one row and one column")
        _require_finite(a)
        a.setflags(write=False)
        self._a = a

    @classmethod
    def _wrap(cls, a: np.ndarray) -> "Matrix":
        """Internal constructor taking ownership of a float64 array."""
        m = object.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
            raise ValueError("matrix needs at least one row and one column")
        _require_finite(a)
        a.setflags(write=False)
        m._a = a
        return m

    @classmethod
    def from_flat(cls, rows: int, cols: int,
                  values: Sequence[float]) -> "Matrix":
        """Build a rows x cols matrix from a row-major flat sequence."""
        if rows < 1 or cols < 1:
            raise ValueError("rows and cols must be positive")
        flat = [float(v) for v in values]
        if len(flat) != rows * cols:
            raise ValueError(f"need {rows * cols} values for a "
                             f"{rows}x{cols} matrix, got {len(flat)}")
        return cls._wrap(np.array(flat, dtype=np.float64).reshape(rows, cols))

    @property
    def rows(self) -> int:
        return int(self._a.shape[0])

    @property
    def cols(self) -> int:
        return int(self._a.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def data(self) -> tuple[float, ...]:
        """Row-major flat view of the entries."""
        return tuple(self._a.ravel().tolist())

    def entry(self, i: int, j: int) -> float:
        """Entry at 1-based position (i, j)."""
        _check_index("row index i", i, self.rows)
        _check_index("column index j", j, self.cols)
        return float(self._a[i - 1, j - 1])

    def to_lists(self) -> list[list[float]]:
        return self._a.tolist()

    def to_numpy(self) -> np.ndarray:
        """Writable copy of the underlying array."""
        return self._a.copy()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and bool(
            np.array_equal(self._a, other._a))

    def __add__(self, other: "Matrix") -> "Matrix":
        _require_same_shape(self, other, "add")
        return Matrix._wrap(self._a + other._a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _require_same_shape(self, other, "subtract")
        return Matrix._wrap(self._a - other._a)

    def __mul__(self, scalar: float) -> "Matrix":
        return Matrix._wrap(self._a * float(scalar))

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        return matmul(self, other)

    def __repr__(self) -> str:
        return f"Matrix({self.to_lists()!r})"


def _require_finite(a: np.ndarray) -> None:
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must be finite (no NaN/Inf)")


def _require_same_shape(a: Matrix, b: Matrix, what: str) -> None:
    if a.shape != b.shape:
        raise ValueError(f"cannot {what} {a.rows}x{a.cols} and "
                         f"{b.rows}x{b.cols} matrices")


def _require_square(a: Matrix, what: str) -> None:
    if a.rows != a.cols:
        raise ValueError(f"{what} requires a square matrix, "
                         f"got {a.rows}x{a.cols}")


def _check_index(name: str, value: int, upper: int) -> None:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if not 1 <= value <= upper:
        raise ValueError(f"{name} must be in 1..{upper}, got {value}")


def identity(n: int) -> Matrix:
    """The n x n identity matrix."""
    if n < 1:
        raise ValueError("identity size must be positive")
    return Matrix._wrap(np.eye(n))


def minor(a: Matrix, i: int, j: int) -> Matrix:
    """The matrix with 1-based row i and column j deleted.

    Requires at least 2 rows and 2 columns so the result is nonempty.
    """
    if a.rows < 2 or a.cols < 2:
        raise ValueError(f"minor needs at least a 2x2 matrix, "
                         f"got {a.rows}x{a.cols}")
    _check_index("row index i", i, a.rows)
    _check_index("column index j", j, a.cols)
    out = np.delete(np.delete(a._a, i - 1, axis=0), j - 1, axis=1)
    return Matrix._wrap(out)


def set_entry(a: Matrix, i: int, j: int, value: float) -> Matrix:
    """Copy of ``a`` with the 1-based (i, j) entry replaced."""
    _check_index("row index i", i, a.rows)
    _check_index("column index j", j, a.cols)
    v = float(value)
    if not np.isfinite(v):
        raise ValueError("entry value must be finite")
    out = a._a.copy()
    out[i - 1, j - 1] = v
    return Matrix._wrap(out)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product a @ b."""
    if a.cols != b.rows:
        raise ValueError(f"cannot multiply {a.rows}x{a.cols} by "
                         f"{b.rows}x{b.cols}")
    return Matrix._wrap(a._a @ b._a)


def inf_norm(a: Matrix) -> float:
    """Infinity norm: maximum absolute row sum."""
    return float(np.abs(a._a).sum(axis=1).max())


def _lu_factor(a: np.ndarray,
               pivot_floor: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Row-pivoted LU factorization PA = LU with sign tracking.

    Returns (lu, perm, sign) where ``lu`` packs the unit-lower and upper
    factors and ``perm`` maps pivoted rows to original rows. Raises
    SingularMatrixError when the best available pivot falls below
    ``pivot_floor`` (or is exactly zero).
    """
    n = a.shape[0]
    lu = a.astype(np.float64, copy=True)
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        piv = abs(lu[p, k])
        if piv < pivot_floor or piv == 0.0:
            if piv == 0.0:
                detail = f"zero pivot in column {k + 1}"
            else:
                detail = (f"pivot {piv:.3e} in column {k + 1} is below "
                          f"the singularity threshold {pivot_floor:.3e}")
            raise SingularMatrixError(
                f"matrix is singular to working tolerance: {detail}",
                pivot=piv, column=k + 1)
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        lu[k + 1:, k] /= lu[k, k]
        lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm, sign


def _lu_solve(lu: np.ndarray, perm: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A X = B given the packed factorization of A."""
    n = lu.shape[0]
    x = b[perm].astype(np.float64, copy=True)
    for k in range(1, n):
        x[k] -= lu[k, :k] @ x[:k]
    for k in range(n - 1, -1, -1):
        if k < n - 1:
            x[k] -= lu[k, k + 1:] @ x[k + 1:]
        x[k] /= lu[k, k]
    return x


def determinant(a: Matrix) -> float:
    """Determinant via row-pivoted triangular factorization.

    Returns 0.0 when elimination meets an exactly zero pivot column.
    """
    _require_square(a, "determinant")
    try:
        lu, _, sign = _lu_factor(a._a, 0.0)
    except SingularMatrixError:
        return 0.0
    return float(sign * np.prod(np.diag(lu)))


def cofactor_det(a: Matrix) -> float:
    """Determinant by recursive cofactor expansion along the first row.

    O(n!) test oracle; refuses matrices larger than
    ``COFACTOR_SIZE_LIMIT``.
    """
    _require_square(a, "cofactor_det")
    if a.rows > COFACTOR_SIZE_LIMIT:
        raise ValueError(f"cofactor_det is limited to matrices of size "
                         f"{COFACTOR_SIZE_LIMIT}, got {a.rows}")
    return _cofactor_expand(a._a)


def _cofactor_expand(m: np.ndarray) -> float:
    n = m.shape[0]
    if n == 1:
        return float(m[0, 0])
    total = 0.0
    rest = m[1:, :]
    for k in range(n):
        if m[0, k] == 0.0:
            continue
        sub = np.delete(rest, k, axis=1)
        term = m[0, k] * _cofactor_expand(sub)
        total += -term if k % 2 else term
    return total


def inverse(a: Matrix) -> Matrix:
    """Matrix inverse via row-pivoted LU.

    Raises SingularMatrixError, carrying the offending pivot magnitude,
    when a pivot falls below ``SINGULARITY_RTOL * inf_norm(a)``.
    """
    _require_square(a, "inverse")
    lu, perm, _ = _lu_factor(a._a, SINGULARITY_RTOL * inf_norm(a))
    return Matrix._wrap(_lu_solve(lu, perm, np.eye(a.rows)))

"""Eigenvalues of small dense real matrices; spectral radius and abscissa."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .densela import Matrix, _require_square
from .errors import ConvergenceError

__all__ = [
    "PAIRING_TOL",
    "Spectrum",
    "eigenvalues",
    "spectral_radius",
    "spectral_abscissa",
]

# Eigenvalues with |imag| below PAIRING_TOL * scale are classified real;
# the same tolerance pairs complex conjugates.
PAIRING_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """All eigenvalues of a real matrix, in deterministic order.

    Values are sorted by (real part, imaginary part). For real input
    matrices the set is closed under conjugation; near-real values are
    snapped onto the real axis using ``PAIRING_TOL``.
    """

    values: tuple[complex, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def _canonical_values(raw) -> tuple[complex, ...]:
    vals = [complex(v) for v in raw]
    # classification is scale-invariant: snap relative to each modulus
    vals = [complex(v.real, 0.0) if abs(v.imag) <= PAIRING_TOL * abs(v)
            else v for v in vals]

    pair_tol = 2.0 * PAIRING_TOL * max(abs(v) for v in vals)
    uppers = [v for v in vals if v.imag > 0.0]
    lowers = [v for v in vals if v.imag < 0.0]
    for v in uppers:
        match = min(lowers, key=lambda w: abs(w - v.conjugate()), default=None)
        if match is None or abs(match - v.conjugate()) > pair_tol:
            raise ConvergenceError(
                f"spectrum is not closed under conjugation: no partner "
                f"for eigenvalue {v!r}")
        lowers.remove(match)
    if lowers:
        raise ConvergenceError(
            f"spectrum is not closed under conjugation: unmatched "
            f"eigenvalues {lowers!r}")

    return tuple(sorted(vals, key=lambda v: (v.real, v.imag)))


def eigenvalues(a: Matrix) -> Spectrum:
    """All eigenvalues of a square matrix.

    Raises ConvergenceError if the underlying QR iteration fails to
    converge within its sweep cap.
    """
    _require_square(a, "eigenvalues")
    try:
        raw = np.linalg.eigvals(a._a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"eigenvalue iteration did not converge: {exc}") from exc
    return Spectrum(_canonical_values(raw))


def spectral_radius(a: Matrix) -> float:
    """Maximum eigenvalue modulus; 0 for the zero matrix."""
    return max(abs(v) for v in eigenvalues(a).values)


def spectral_abscissa(a: Matrix) -> float:
    """Maximum eigenvalue real part."""
    return max(v.real for v in eigenvalues(a).values)

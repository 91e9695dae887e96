"""Next-generation matrices: reproduction numbers and compartment removal.

An NGMPair holds the new-infection block F and the transfer block V of a
compartmental model linearized at its disease-free equilibrium. The basic
reproduction number is the spectral radius of ``F V^-1``; removing an
infected compartment corresponds to taking the (i, i) minor of both
blocks, and driving the i-th diagonal of V to infinity reproduces that
removal as a limit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .densela import Matrix, inverse, matmul, minor
from .eigen import spectral_abscissa, spectral_radius
from .minorlimit import ConvergenceReport, DiagonalRay, spectral_limit

__all__ = [
    "MMATRIX_TOL",
    "THRESHOLD_TOL",
    "MMatrixWarning",
    "NGMPair",
    "ThresholdReport",
    "r0",
    "remove_compartment",
    "dfe_threshold_check",
    "r0_removal_limit",
]

# V^-1 entries below -MMATRIX_TOL break the expected M-matrix structure.
MMATRIX_TOL = 1e-10

# |r0 - 1| and |abscissa| below this are treated as sitting on the
# threshold.
THRESHOLD_TOL = 1e-8


class MMatrixWarning(UserWarning):
    """The transfer block V is not an M-matrix (V^-1 has negative entries).

    The spectral-radius limit itself holds for general matrices; only the
    epidemiological reading of F V^-1 needs the sign structure, so this
    is a warning rather than an error.
    """


@dataclass(frozen=True)
class NGMPair:
    """New-infection block F, transfer block V, and compartment labels.

    F and V must be square with matching dimension and one label per
    compartment. F must be entrywise nonnegative and V nonsingular; a
    non-M-matrix V triggers an MMatrixWarning.
    """

    F: Matrix
    V: Matrix
    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels",
                           tuple(str(name) for name in self.labels))
        if self.F.rows != self.F.cols:
            raise ValueError(f"F must be square, got {self.F.shape}")
        if self.V.shape != self.F.shape:
            raise ValueError(f"F and V must share a shape, got "
                             f"{self.F.shape} and {self.V.shape}")
        if len(self.labels) != self.F.rows:
            raise ValueError(f"need {self.F.rows} labels, "
                             f"got {len(self.labels)}")
        if np.any(self.F._a < 0.0):
            raise ValueError("F must be entrywise nonnegative")
        v_inv = inverse(self.V)  # raises SingularMatrixError for singular V
        if np.any(v_inv._a < -MMATRIX_TOL):
            warnings.warn(
                "V^-1 has negative entries; V is not an M-matrix and the "
                "epidemiological reading of r0 may not apply",
                MMatrixWarning, stacklevel=2)

    @property
    def dim(self) -> int:
        return self.F.rows


@dataclass(frozen=True)
class ThresholdReport:
    """Outcome of the stability threshold consistency check.

    ``consistent`` is true when sign(r0 - 1) agrees with the sign of the
    spectral abscissa of F - V; ``critical`` marks the case where both
    sit on their thresholds to tolerance.
    """

    r0: float
    abscissa: float
    consistent: bool
    critical: bool


def r0(pair: NGMPair) -> float:
    """Basic reproduction number: spectral radius of ``F V^-1``."""
    return spectral_radius(matmul(pair.F, inverse(pair.V)))


def remove_compartment(pair: NGMPair, i: int) -> NGMPair:
    """Drop compartment i (1-based): take (i, i) minors of F and V."""
    if pair.dim < 2:
        raise ValueError("cannot remove the only compartment")
    if not 1 <= i <= pair.dim:
        raise ValueError(f"compartment index must be in 1..{pair.dim}, "
                         f"got {i}")
    labels = pair.labels[:i - 1] + pair.labels[i:]
    return NGMPair(minor(pair.F, i, i), minor(pair.V, i, i), labels)


def _threshold_sign(x: float) -> int:
    if abs(x) < THRESHOLD_TOL:
        return 0
    return 1 if x > 0.0 else -1


def dfe_threshold_check(pair: NGMPair) -> ThresholdReport:
    """Check that r0 and the linearization agree on DFE stability.

    The disease-free equilibrium is stable exactly when the spectral
    abscissa of F - V is negative, which should happen exactly when
    r0 < 1.
    """
    value = r0(pair)
    abscissa = spectral_abscissa(pair.F - pair.V)
    s_r0 = _threshold_sign(value - 1.0)
    s_ab = _threshold_sign(abscissa)
    return ThresholdReport(
        r0=value,
        abscissa=abscissa,
        consistent=s_r0 == s_ab,
        critical=s_r0 == 0 and s_ab == 0,
    )


def r0_removal_limit(
    pair: NGMPair,
    i: int,
    schedule: "Sequence[float] | None" = None,
    target: "float | None" = None,
) -> ConvergenceReport:
    """Reproduce compartment removal by driving V's (i, i) entry upward.

    Evaluates ``rho(F V(t)^-1)`` along the schedule with F held fixed and
    measures each point against the removed-compartment r0 (or an
    explicit ``target``, e.g. a closed form).
    """
    if target is None:
        target = r0(remove_compartment(pair, i))
    _, report = spectral_limit(pair.F, DiagonalRay(pair.V, i),
                               schedule=schedule, target=target)
    return report

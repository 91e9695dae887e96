"""Diagonal-entry limits of matrix inverses.

With ``A(t)`` denoting a square matrix whose (i, i) entry is replaced by
``t``, this module evaluates three facts numerically:

  * ``det A(t)`` is affine in ``t`` with slope ``det`` of the (i, i) minor;
  * the (i, i) minor of ``A(t)^-1`` converges to the inverse of the
    (i, i) minor of ``A`` as ``t -> inf``, while row and column ``i`` of
    ``A(t)^-1`` decay to zero at rate O(1/t);
  * the spectral radius of ``F A(t)^-1`` converges to the spectral radius
    of the product of the (i, i) minors' counterpart,
    ``F_minor (A_minor)^-1``.

Each limit is evaluated along a schedule of t values and summarised in a
ConvergenceReport with raw errors, pairwise extrapolated errors and a
fitted decay rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .densela import (Matrix, inf_norm, inverse, matmul, minor, set_entry,
                      determinant)
from .eigen import spectral_radius
from .errors import ConvergenceError, SingularMatrixError

__all__ = [
    "CONDITION_GUARD",
    "DiagonalRay",
    "ConvergenceReport",
    "default_schedule",
    "det_affine_coeffs",
    "exact_minor_inverse",
    "limit_minor_inverse",
    "row_col_decay",
    "richardson",
    "assemble_limit_inverse",
    "spectral_limit",
]

_EPS = float(np.finfo(np.float64).eps)

# Inversions with estimated condition number above this are flagged
# unreliable in reports rather than trusted.
CONDITION_GUARD = 1.0 / (100.0 * _EPS)

# Least-squares rate fitting needs at least this many clean points.
_MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class DiagonalRay:
    """A square matrix together with one varying diagonal entry.

    ``at(t)`` produces the family member with the 1-based (i, i) entry
    replaced by ``t``; all other entries stay fixed.
    """

    base: Matrix
    i: int

    def __post_init__(self):
        if self.base.rows != self.base.cols:
            raise ValueError(f"ray base must be square, got "
                             f"{self.base.rows}x{self.base.cols}")
        if self.base.rows < 2:
            raise ValueError("ray base must be at least 2x2")
        if not 1 <= self.i <= self.base.rows:
            raise ValueError(f"diagonal index must be in "
                             f"1..{self.base.rows}, got {self.i}")

    def at(self, t: float) -> Matrix:
        """The family member with diagonal entry (i, i) set to ``t``."""
        return set_entry(self.base, self.i, self.i, t)


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-schedule-point errors for a limit computation.

    Attributes:
        schedule: Strictly increasing positive t values.
        errors: Sup-norm error of each iterate against the exact target;
            NaN where the point was skipped (singular matrix).
        extrapolated_errors: Error of the first-order extrapolant built
            from each adjacent schedule pair (length ``len(schedule)-1``);
            NaN where either endpoint was skipped.
        fitted_rate: Exponent p from a least-squares fit of
            ``error ~ C / t**p`` over clean points, or None when fewer
            than three usable points remain.
        flagged: True where the point was skipped or its inversion
            tripped the conditioning guard.
    """

    schedule: tuple[float, ...]
    errors: tuple[float, ...]
    extrapolated_errors: tuple[float, ...]
    fitted_rate: "float | None"
    flagged: tuple[bool, ...]

    def __post_init__(self):
        _validate_schedule(self.schedule)
        n = len(self.schedule)
        if len(self.errors) != n or len(self.flagged) != n:
            raise ValueError("errors and flagged must match the schedule")
        if len(self.extrapolated_errors) != n - 1:
            raise ValueError("need one extrapolated error per adjacent pair")
        for e in self.errors + self.extrapolated_errors:
            if math.isfinite(e) and e < 0.0:
                raise ValueError("errors must be nonnegative")


def _validate_schedule(schedule: Sequence[float]) -> tuple[float, ...]:
    ts = tuple(float(t) for t in schedule)
    if not ts:
        raise ValueError("schedule must be nonempty")
    if ts[0] <= 0.0:
        raise ValueError("schedule values must be positive")
    for a, b in zip(ts, ts[1:]):
        if not b > a:
            raise ValueError("schedule must be strictly increasing")
    return ts


def default_schedule(base: Matrix, first_decade: int = 1,
                     last_decade: int = 8) -> tuple[float, ...]:
    """Geometric schedule ``inf_norm(base) * 10**k`` for the decade range.

    Geometric spacing samples log-t uniformly, which is what the
    rate fit wants for an O(1/t) error.
    """
    if last_decade < first_decade:
        raise ValueError("empty decade range")
    scale = inf_norm(base)
    if scale == 0.0:
        scale = 1.0
    return tuple(scale * 10.0 ** k
                 for k in range(first_decade, last_decade + 1))


def det_affine_coeffs(ray: DiagonalRay) -> tuple[float, float]:
    """Slope and intercept of ``t -> det A(t)``.

    The determinant is affine in the varying diagonal entry: the slope is
    the determinant of the (i, i) minor and the intercept is
    ``det A(0)``. A zero slope signals a singular minor; the limit
    operations reject such rays, this one does not.
    """
    slope = determinant(minor(ray.base, ray.i, ray.i))
    intercept = determinant(ray.at(0.0))
    return slope, intercept


def exact_minor_inverse(ray: DiagonalRay) -> Matrix:
    """Inverse of the (i, i) minor: the target of the inverse limit."""
    try:
        return inverse(minor(ray.base, ray.i, ray.i))
    except SingularMatrixError as exc:
        raise SingularMatrixError(
            f"the (i, i) minor at i={ray.i} is singular "
            f"(pivot {exc.pivot:.3e} in minor column {exc.column})",
            pivot=exc.pivot, column=exc.column) from None


def richardson(x_t: Matrix, x_2t: Matrix, ratio: float = 2.0) -> Matrix:
    """First-order Richardson extrapolant of two iterates.

    For iterates at t and ``ratio * t`` of a quantity behaving like
    ``L + c/t``, returns ``(ratio * x_2t - x_t) / (ratio - 1)``, which
    cancels the ``c/t`` term; at the default doubling ratio this is
    ``2 * x_2t - x_t`` exactly.
    """
    if x_t.shape != x_2t.shape:
        raise ValueError(f"iterates must share a shape, got "
                         f"{x_t.shape} and {x_2t.shape}")
    if not ratio > 1.0:
        raise ValueError("ratio must exceed 1")
    return Matrix._wrap((ratio * x_2t._a - x_t._a) / (ratio - 1.0))


def assemble_limit_inverse(ray: DiagonalRay) -> Matrix:
    """The full limit of ``A(t)^-1``: minor inverse bordered by zeros.

    Row and column i decay to zero in the limit, so the limit matrix is
    the exact minor inverse with a zero row and column inserted at i.
    """
    core = exact_minor_inverse(ray)._a
    n = ray.base.rows
    keep = [k for k in range(n) if k != ray.i - 1]
    out = np.zeros((n, n))
    out[np.ix_(keep, keep)] = core
    return Matrix._wrap(out)


def row_col_decay(ray: DiagonalRay, t: float) -> tuple[float, float]:
    """Largest magnitudes in row i and column i of ``A(t)^-1``.

    Both maxima (diagonal entry included) decay like O(1/t).
    """
    inv = inverse(ray.at(t))._a
    row_max = float(np.abs(inv[ray.i - 1, :]).max())
    col_max = float(np.abs(inv[:, ray.i - 1]).max())
    return row_max, col_max


def limit_minor_inverse(
    ray: DiagonalRay,
    schedule: "Sequence[float] | None" = None,
) -> tuple[Matrix, ConvergenceReport]:
    """Evaluate the minor-inverse limit along a schedule.

    For each t computes the (i, i) minor of ``A(t)^-1`` and measures it
    against the exact minor inverse. Schedule points where ``A(t)`` is
    singular are skipped and flagged; if every point is singular a
    ConvergenceError is raised. The returned estimate is the first-order
    extrapolant of the last two clean iterates.
    """
    exact = exact_minor_inverse(ray)
    ts = _validate_schedule(schedule if schedule is not None
                            else default_schedule(ray.base))
    values: list["np.ndarray | None"] = []
    flags: list[bool] = []
    for t in ts:
        try:
            inv, flagged = _inverse_with_guard(ray.at(t))
        except SingularMatrixError:
            values.append(None)
            flags.append(True)
            continue
        values.append(minor(inv, ray.i, ray.i)._a)
        flags.append(flagged)
    estimate, report = _summarize(ts, values, flags, exact._a)
    return Matrix._wrap(np.array(estimate, dtype=np.float64)), report


def spectral_limit(
    f: Matrix,
    v_ray: DiagonalRay,
    schedule: "Sequence[float] | None" = None,
    target: "float | None" = None,
) -> tuple[float, ConvergenceReport]:
    """Evaluate ``rho(F A(t)^-1)`` along a schedule of diagonal values.

    The limit equals the spectral radius of the reduced product
    ``F_minor (A_minor)^-1``, which is used as the error target unless an
    explicit ``target`` is supplied. F is held fixed throughout.
    """
    if f.shape != v_ray.base.shape:
        raise ValueError(f"F must match the ray base shape "
                         f"{v_ray.base.shape}, got {f.shape}")
    if target is None:
        reduced = matmul(minor(f, v_ray.i, v_ray.i),
                         exact_minor_inverse(v_ray))
        target = spectral_radius(reduced)
    else:
        # still fail fast on the hypothesis of the limit result
        exact_minor_inverse(v_ray)
    ts = _validate_schedule(schedule if schedule is not None
                            else default_schedule(v_ray.base))
    values: list["float | None"] = []
    flags: list[bool] = []
    for t in ts:
        try:
            inv, flagged = _inverse_with_guard(v_ray.at(t))
        except SingularMatrixError:
            values.append(None)
            flags.append(True)
            continue
        values.append(spectral_radius(matmul(f, inv)))
        flags.append(flagged)
    estimate, report = _summarize(ts, values, flags, float(target))
    return float(estimate), report


def _inverse_with_guard(m: Matrix) -> tuple[Matrix, bool]:
    inv = inverse(m)
    condition = inf_norm(m) * inf_norm(inv)
    return inv, condition > CONDITION_GUARD


def _pair_extrapolant(t1: float, x1, t2: float, x2):
    """General-ratio first-order extrapolant through two iterates."""
    return (t2 * x2 - t1 * x1) / (t2 - t1)


def _summarize(ts, values, flags, exact):
    usable = [k for k, v in enumerate(values) if v is not None]
    if not usable:
        raise ConvergenceError(
            "every schedule point produced a singular matrix")

    errors = [math.nan if v is None
              else float(np.max(np.abs(v - exact))) for v in values]

    extrapolated = []
    for k in range(1, len(ts)):
        if values[k - 1] is None or values[k] is None:
            extrapolated.append(math.nan)
            continue
        ext = _pair_extrapolant(ts[k - 1], values[k - 1], ts[k], values[k])
        extrapolated.append(float(np.max(np.abs(ext - exact))))

    clean = [k for k in usable if not flags[k]]
    pick = clean if len(clean) >= 2 else usable
    if len(pick) >= 2:
        a, b = pick[-2], pick[-1]
        estimate = _pair_extrapolant(ts[a], values[a], ts[b], values[b])
    else:
        estimate = values[pick[-1]]

    report = ConvergenceReport(
        schedule=ts,
        errors=tuple(errors),
        extrapolated_errors=tuple(extrapolated),
        fitted_rate=_fit_rate(ts, errors, flags),
        flagged=tuple(flags),
    )
    return estimate, report


def _fit_rate(ts, errors, flags) -> "float | None":
    log_t, log_e = [], []
    for t, e, flagged in zip(ts, errors, flags):
        if flagged or not math.isfinite(e) or e <= 0.0:
            continue
        log_t.append(math.log(t))
        log_e.append(math.log(e))
    if len(log_t) < _MIN_FIT_POINTS:
        return None
    slope = np.polyfit(log_t, log_e, 1)[0]
    return float(-slope)

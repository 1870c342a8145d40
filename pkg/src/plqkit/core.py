"""Canonical representation and exact L2 geometry of univariate PLQ functions.

A piecewise linear-quadratic (PLQ) function is stored as a strictly
increasing breakpoint vector ``x_1 < x_2 < ... < x_{m+1}`` together with one
quadratic ``a_i x^2 + b_i x + c_i`` per interval.  Piece ``i`` is active on
the half-open interval ``(x_i, x_{i+1}]``; outside ``(x_1, x_{m+1}]`` the
function takes the value ``+inf`` (proper-function convention).  Only the two
endpoint breakpoints may be infinite, and the function must be continuous at
every interior breakpoint.

Squared L2 distances between PLQ functions are computed exactly from power
moments ``M_k = int x^k dx`` of the integration intervals: the squared error
of fitting a quadratic ``theta = (alpha, beta, gamma)`` against a source
quadratic over an interval is the quadratic form ``(theta - theta_src)^T M
(theta - theta_src)`` where ``M`` is the order-4 moment matrix.  No numerical
quadrature is involved anywhere in this module.

Infinities are IEEE-754 ``inf``/``-inf`` values: comparisons against finite
floats are exact, and no arithmetic is ever performed on them (they only
appear as interval endpoints, and every code path peels them off before
integrating or evaluating).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DiscontinuousInteriorError,
    DomainMismatchError,
    EmptyIntervalError,
    InteriorInfinityError,
    LengthMismatchError,
    NonIncreasingBreakpointsError,
    OutsideDomainError,
)

__all__ = [
    "QuadCoeffs",
    "MomentVector",
    "QuadraticForm",
    "PlqFunction",
    "validate_plq",
    "evaluate",
    "derivative",
    "common_refinement",
    "interval_moments",
    "moment_matrix",
    "segment_error_form",
    "l2_distance",
    "CONTINUITY_TOL",
    "DEDUP_TOL",
]

#: Default relative continuity tolerance at interior breakpoints.
CONTINUITY_TOL = 1e-8

#: Breakpoint deduplication tolerance (scaled by the finite domain width).
DEDUP_TOL = 1e-12


class QuadCoeffs(NamedTuple):
    """Coefficients of one quadratic piece ``a x^2 + b x + c``."""

    a: float
    b: float
    c: float

    def value(self, x: float) -> float:
        return (self.a * x + self.b) * x + self.c

    def slope(self, x: float) -> float:
        return 2.0 * self.a * x + self.b


class MomentVector(NamedTuple):
    """Power moments ``M_k = int_lo^hi x^k dx`` for k = 0..4."""

    m0: float
    m1: float
    m2: float
    m3: float
    m4: float


def interval_moments(lo: float, hi: float) -> MomentVector:
    """Exact power moments of ``[lo, hi]`` up to order 4.

    Uses the factored form ``(hi - lo) * sum_j hi^j lo^(k-j) / (k+1)`` which
    avoids the catastrophic cancellation of ``hi^(k+1) - lo^(k+1)`` on short
    intervals far from the origin.
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise EmptyIntervalError(f"need finite lo < hi, got [{lo!r}, {hi!r}]")
    w = hi - lo
    lo2, hi2 = lo * lo, hi * hi
    return MomentVector(
        w,
        w * (hi + lo) / 2.0,
        w * (hi2 + hi * lo + lo2) / 3.0,
        w * (hi2 * (hi + lo) + lo2 * (hi + lo)) / 4.0,
        w * (hi2 * hi2 + hi2 * hi * lo + hi2 * lo2 + hi * lo2 * lo + lo2 * lo2) / 5.0,
    )


def moment_matrix(mv: MomentVector) -> np.ndarray:
    """Order-4 moment matrix in the basis ``(x^2, x, 1)``."""
    return np.array(
        [
            [mv.m4, mv.m3, mv.m2],
            [mv.m3, mv.m2, mv.m1],
            [mv.m2, mv.m1, mv.m0],
        ]
    )


@dataclass(frozen=True)
class QuadraticForm:
    """Squared-error form ``E(theta) = theta^T H theta - 2 q^T theta + c0``.

    ``H`` is the (positive semidefinite) moment matrix of the integration
    interval, so ``E(theta)`` is the exact integral of the squared difference
    between the source quadratic and the quadratic with coefficients
    ``theta``.
    """

    H: np.ndarray
    q: np.ndarray
    c0: float

    def evaluate(self, theta: Sequence[float]) -> float:
        t = np.asarray(theta, dtype=float)
        return float(t @ self.H @ t - 2.0 * (self.q @ t) + self.c0)


def segment_error_form(piece: QuadCoeffs, lo: float, hi: float) -> QuadraticForm:
    """Exact squared-error form of fitting a quadratic against ``piece`` on [lo, hi]."""
    M = moment_matrix(interval_moments(lo, hi))
    theta = np.array(piece, dtype=float)
    q = M @ theta
    return QuadraticForm(H=M, q=q, c0=float(theta @ q))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class PlqFunction:
    """A validated univariate PLQ function.

    Immutable: the underlying arrays are read-only, every operation returns a
    new instance, and all module functions are pure.  Construct through
    :func:`validate_plq` (or :meth:`from_pieces`).
    """

    breakpoints: np.ndarray  # shape (m+1,), strictly increasing
    coeffs: np.ndarray  # shape (m, 3), rows (a, b, c)

    @property
    def piece_count(self) -> int:
        return self.coeffs.shape[0]

    @property
    def domain(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def pieces(self) -> list[QuadCoeffs]:
        return [QuadCoeffs(*row) for row in self.coeffs]

    def piece(self, i: int) -> QuadCoeffs:
        return QuadCoeffs(*self.coeffs[i])

    def __call__(self, x: float) -> float:
        return evaluate(self, x)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        bp = ", ".join(f"{b:g}" for b in self.breakpoints)
        return f"PlqFunction(breakpoints=[{bp}], pieces={self.piece_count})"

    @staticmethod
    def from_pieces(
        breakpoints: Iterable[float],
        pieces: Iterable[Sequence[float]],
        tol: float = CONTINUITY_TOL,
        check_continuity: bool = True,
    ) -> "PlqFunction":
        return validate_plq(breakpoints, pieces, tol, check_continuity=check_continuity)


def validate_plq(
    breakpoints: Iterable[float],
    pieces: Iterable[Sequence[float]],
    tol: float = CONTINUITY_TOL,
    check_continuity: bool = True,
) -> PlqFunction:
    """Validate raw breakpoint/coefficient data and build a :class:`PlqFunction`.

    ``tol`` is the relative continuity tolerance: at every interior
    breakpoint the jump must satisfy ``|jump| <= tol * max(1, |value|)``.
    ``check_continuity=False`` skips that test (needed for the output of the
    greedy merge pass, which may legally carry seams).
    """
    bp = np.asarray(list(breakpoints), dtype=float)
    cf = np.asarray([list(p) for p in pieces], dtype=float)
    if bp.ndim != 1 or cf.ndim != 2 or cf.shape[1] != 3:
        raise LengthMismatchError(
            f"expected breakpoints (m+1,) and pieces (m, 3), got {bp.shape} and {cf.shape}"
        )
    if bp.size == 0 or cf.size == 0:
        raise LengthMismatchError("breakpoints and pieces must be nonempty")
    if bp.size != cf.shape[0] + 1:
        raise LengthMismatchError(
            f"{bp.size} breakpoints cannot delimit {cf.shape[0]} pieces"
        )
    if np.isnan(bp).any() or not np.isfinite(cf).all():
        raise NonIncreasingBreakpointsError("NaN breakpoint or non-finite coefficient")
    if not np.all(np.diff(bp) > 0):
        raise NonIncreasingBreakpointsError(f"breakpoints not strictly increasing: {bp}")
    if bp.size > 2 and not np.isfinite(bp[1:-1]).all():
        raise InteriorInfinityError("interior breakpoints must be finite")

    if check_continuity:
        for i in range(cf.shape[0] - 1):
            x = bp[i + 1]
            left = QuadCoeffs(*cf[i]).value(x)
            right = QuadCoeffs(*cf[i + 1]).value(x)
            jump = abs(left - right)
            if jump > tol * max(1.0, abs(left)):
                raise DiscontinuousInteriorError(float(x), float(jump))

    return PlqFunction(_frozen(bp), _frozen(cf))


def _make(bp: np.ndarray, cf: np.ndarray) -> PlqFunction:
    """Trusted constructor for internal transforms (no re-validation)."""
    return PlqFunction(_frozen(np.ascontiguousarray(bp, dtype=float)),
                       _frozen(np.ascontiguousarray(cf, dtype=float)))


def evaluate(f: PlqFunction, x: float) -> float:
    """Value of ``f`` at a finite ``x``; ``+inf`` outside the domain.

    Piece ``i`` covers ``(x_i, x_{i+1}]``, so at a shared breakpoint the left
    piece wins; at a finite left domain endpoint the function is ``+inf``
    (strict half-open convention).
    """
    bp = f.breakpoints
    i = int(np.searchsorted(bp, x, side="left")) - 1
    if i < 0 or i >= f.piece_count:
        return math.inf
    return QuadCoeffs(*f.coeffs[i]).value(x)


def derivative(f: PlqFunction, x: float, side: str = "left") -> float:
    """One-sided derivative ``2 a x + b`` of the piece adjacent to ``x``.

    ``side`` selects the piece covering ``(x - eps, x)`` or ``(x, x + eps)``.
    Raises :class:`OutsideDomainError` when the requested neighborhood does
    not intersect the domain.
    """
    bp = f.breakpoints
    if side == "left":
        i = int(np.searchsorted(bp, x, side="left")) - 1
    elif side == "right":
        i = int(np.searchsorted(bp, x, side="right")) - 1
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if i < 0 or i >= f.piece_count:
        raise OutsideDomainError(f"x={x!r} has no {side} neighborhood in the domain")
    return QuadCoeffs(*f.coeffs[i]).slope(x)


def _finite_width(bp_values: np.ndarray) -> float:
    finite = bp_values[np.isfinite(bp_values)]
    if finite.size < 2:
        return 1.0
    return max(1.0, float(finite[-1] - finite[0]))


def _dedup_tol(f: PlqFunction, g: PlqFunction) -> float:
    return DEDUP_TOL * max(_finite_width(f.breakpoints), _finite_width(g.breakpoints))


def _reexpress(f: PlqFunction, grid: np.ndarray) -> PlqFunction:
    """Re-express ``f`` on a refinement ``grid`` of its breakpoints."""
    m = f.piece_count
    rows = np.empty((grid.size - 1, 3))
    for k in range(grid.size - 1):
        hi = grid[k + 1]
        if math.isfinite(hi):
            src = int(np.searchsorted(f.breakpoints, hi, side="left")) - 1
            src = min(max(src, 0), m - 1)
        else:
            src = m - 1
        rows[k] = f.coeffs[src]
    return _make(grid, rows)


def common_refinement(f: PlqFunction, g: PlqFunction) -> tuple[PlqFunction, PlqFunction]:
    """Re-express both functions on the merged breakpoint grid.

    Both outputs equal their inputs pointwise; breakpoints closer than the
    deduplication tolerance are collapsed (first representative wins).
    """
    tol = _dedup_tol(f, g)
    if not _same_endpoint(f.breakpoints[0], g.breakpoints[0], tol) or not _same_endpoint(
        f.breakpoints[-1], g.breakpoints[-1], tol
    ):
        raise DomainMismatchError(
            f"domains differ: {f.domain} vs {g.domain}"
        )
    merged = np.sort(np.concatenate([f.breakpoints, g.breakpoints]))
    grid = [merged[0]]
    for v in merged[1:]:
        if v - grid[-1] > tol or (math.isinf(v) and math.isinf(grid[-1])):
            grid.append(v)
        elif math.isinf(v) and not math.isinf(grid[-1]):
            grid.append(v)
    grid = np.asarray(grid)
    return _reexpress(f, grid), _reexpress(g, grid)


def _same_endpoint(a: float, b: float, tol: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol


def l2_distance(f: PlqFunction, g: PlqFunction) -> float:
    """Euclidean function distance ``||f - g||_2``, computed exactly.

    Returns ``+inf`` when the domains differ on a set of positive measure or
    when the functions differ (as quadratics) on an unbounded interval;
    otherwise the analytic value from the moment matrices of the common
    refinement.
    """
    tol = _dedup_tol(f, g)
    if not _same_endpoint(f.breakpoints[0], g.breakpoints[0], tol) or not _same_endpoint(
        f.breakpoints[-1], g.breakpoints[-1], tol
    ):
        return math.inf
    fr, gr = common_refinement(f, g)
    bp = fr.breakpoints
    total = 0.0
    for i in range(fr.piece_count):
        lo, hi = bp[i], bp[i + 1]
        d = fr.coeffs[i] - gr.coeffs[i]
        if math.isinf(lo) or math.isinf(hi):
            if np.any(d != 0.0):
                return math.inf
            continue
        if hi <= lo:
            continue
        M = moment_matrix(interval_moments(lo, hi))
        total += float(d @ M @ d)
    return math.sqrt(max(total, 0.0))

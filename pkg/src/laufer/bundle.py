"""Normal bundles of sections and their splitting type.

Linearizing the transition rules along a section gives the rank-2 cocycle

    u1' = z^-n u1,    u2' = z^(n+2) (u2 + beta(z) u1),

with beta = d^2B/dw^2 along the section. The bundle is O(a) + O(b) with
a + b = -2; the number of its global sections is counted directly from this
cocycle and compared with the corank r of the Hessian of W, which should give
(a, b) = (r - 1, -r - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .critical import CriticalPoint
from .laurent import LaurentPoly, Mode, to_scalar
from .linalg import exact_rank, float_rank
from .potential import GeometricPotential, coerce_point, eval_along_section
from .superpotential import build_combinatorial, corank_with_flag, gradient, hessian

CRITICAL_ATOL = 1e-8


class NotCriticalError(ValueError):
    pass


@dataclass(frozen=True)
class TransitionMatrix:
    """M(z) = [[z^-n, 0], [z^(n+2) beta(z), z^(n+2)]] acting on (u1, u2)."""

    n: int
    beta: LaurentPoly

    @property
    def mode(self) -> Mode:
        return self.beta.mode

    def entries(self) -> tuple[tuple[LaurentPoly, LaurentPoly], tuple[LaurentPoly, LaurentPoly]]:
        mode = self.mode
        zero = LaurentPoly({}, mode)
        return (
            (LaurentPoly.monomial(-self.n, 1, mode), zero),
            (self.beta.shift(self.n + 2), LaurentPoly.monomial(self.n + 2, 1, mode)),
        )

    def determinant(self) -> LaurentPoly:
        (a, b), (c, d) = self.entries()
        return a * d - b * c

    def with_beta(self, beta: LaurentPoly) -> "TransitionMatrix":
        return TransitionMatrix(self.n, beta)


@dataclass(frozen=True)
class SplittingType:
    a: int
    b: int

    def __post_init__(self):
        if self.a < self.b:
            raise ValueError("splitting type needs a >= b")
        if self.a + self.b != -2:
            raise ValueError("splitting type must have degree -2")

    def as_tuple(self) -> tuple[int, int]:
        return self.a, self.b

    def __str__(self):
        return f"O({self.a})+O({self.b})"


@dataclass(frozen=True)
class BundleAnalysis:
    point: CriticalPoint
    hessian_corank: int
    predicted: SplittingType
    oracle_h0: int
    verified: SplittingType
    near_threshold: bool = False

    @property
    def agrees(self) -> bool:
        return self.predicted == self.verified


def _require_critical(p: GeometricPotential, x: tuple, atol: float):
    W = build_combinatorial(p)
    g = gradient(W, x)
    if p.mode is Mode.EXACT:
        off = any(v != 0 for v in g)
    else:
        scale = max(1.0, W.coefficient_scale())
        off = max((abs(v) for v in g), default=0.0) > atol * scale
    if off:
        raise NotCriticalError(f"gradient of W does not vanish at {x}: {g}")
    return W


def normal_transition(p: GeometricPotential, x, atol: float = CRITICAL_ATOL) -> TransitionMatrix:
    p.require_normalized()
    x = coerce_point(getattr(x, "x", x), p.n, p.mode)
    _require_critical(p, x, atol)
    return TransitionMatrix(p.n, eval_along_section(p, x, 2))


def section_system(M: TransitionMatrix, degree_bound: int | None = None) -> list[list]:
    """Linear conditions on (s1, s2) for (s1, s2) to be a global section.

    Unknowns are the coefficients of s1 (degree <= n) then s2 (degree <= D);
    rows are the coefficients of z^1 .. z^(n+2+D) in z^(n+2) (s2 + beta s1),
    which must vanish on U1.
    """
    n = M.n
    D = n if degree_bound is None else degree_bound
    if D < 0:
        raise ValueError("degree bound must be nonnegative")
    zero = to_scalar(0, M.mode)
    n_unknowns = (n + 1) + (D + 1)
    rows = []
    for e in range(1, n + 3 + D):
        m = e - (n + 2)  # coefficient of z^m in s2 + beta s1
        row = [zero] * n_unknowns
        for i in range(n + 1):
            row[i] = M.beta[m - i]
        if 0 <= m <= D:
            row[n + 1 + m] = to_scalar(1, M.mode)
        rows.append(row)
    return rows


def h0_oracle_with_flag(
    M: TransitionMatrix, degree_bound: int | None = None, scale: float | None = None
) -> tuple[int, bool]:
    """h0 plus a near-threshold flag (FLOAT only).

    In FLOAT mode the s2 columns are rescaled by ``scale`` (the size of the
    potential) so that they do not swamp a nearly vanishing beta.
    """
    rows = section_system(M, degree_bound)
    n_unknowns = len(rows[0])
    if M.mode is Mode.EXACT:
        return n_unknowns - exact_rank(rows), False
    a = np.array(rows, dtype=complex)
    if scale:
        a[:, M.n + 1 :] *= scale
    rank, near = float_rank(a, scale=scale)
    return n_unknowns - rank, near


def h0_oracle(M: TransitionMatrix, degree_bound: int | None = None) -> int:
    """Dimension of the space of global holomorphic sections of the bundle M."""
    return h0_oracle_with_flag(M, degree_bound)[0]


def splitting_from_h0(h0: int) -> SplittingType:
    """O(a)+O(b) with a+b = -2 has h0 = a+1 for a >= 0 and 0 for a = -1."""
    if h0 < 0:
        raise ValueError("h0 is nonnegative")
    if h0 == 0:
        return SplittingType(-1, -1)
    return SplittingType(h0 - 1, -h0 - 1)


def predicted_splitting(r: int) -> SplittingType:
    return SplittingType(r - 1, -r - 1)


def ferrari_check(p: GeometricPotential, x, atol: float = CRITICAL_ATOL) -> BundleAnalysis:
    """Compare the Hessian-corank prediction with the counted sections of the normal bundle."""
    p.require_normalized()
    point = x if isinstance(x, CriticalPoint) else CriticalPoint(tuple(x))
    xs = coerce_point(point.x, p.n, p.mode)
    W = _require_critical(p, xs, atol)
    scale = W.coefficient_scale() if p.mode is Mode.FLOAT else None
    r, near_h = corank_with_flag(hessian(W, xs), scale)
    M = TransitionMatrix(p.n, eval_along_section(p, xs, 2))
    h0, near_o = h0_oracle_with_flag(M, scale=scale)
    return BundleAnalysis(
        point=point,
        hessian_corank=r,
        predicted=predicted_splitting(r),
        oracle_h0=h0,
        verified=splitting_from_h0(h0),
        near_threshold=near_h or near_o,
    )


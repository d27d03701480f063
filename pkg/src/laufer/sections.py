"""Rebuild a holomorphic section from a critical point and check the gluing law.

Along w1(z) = sum x_i z^i put g(z) = d/dw B(z, w1(z)). The second fiber
coordinate on U0 is w2(z) = -[g]_{>=0} (the Cauchy projection), and the gluing
law w2' = z^(n+2) (w2 + g) then leaves z^(n+2) [g]_{<0} on U1. That is
holomorphic in z' = 1/z exactly when the coefficients of z^-1 .. z^(-n-1) in g
vanish, and those coefficients are dW/dx_0 .. dW/dx_n.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .laurent import LaurentPoly, Mode, cauchy_projection, invert_chart
from .potential import GeometricPotential, coerce_point, eval_along_section, section_poly

GLUING_ATOL = 1e-9


class ObstructionError(ValueError):
    """The point is not critical: the U1 coordinate picks up z'-poles."""

    def __init__(self, offending: LaurentPoly):
        self.offending = offending
        terms = ", ".join(f"{c}*z^{e}" for e, c in offending.items())
        super().__init__(f"section does not glue; positive z-powers on U1: {terms}")


@dataclass(frozen=True)
class SectionCurve:
    n: int
    x: tuple
    omega2_u0: LaurentPoly  # in z
    omega2_u1: LaurentPoly  # in z'
    mode: Mode = Mode.EXACT

    @property
    def omega1_u0(self) -> LaurentPoly:
        return section_poly(self.x, self.mode)

    @property
    def omega1_u1(self) -> LaurentPoly:
        # w1'(z') = sum x_i z'^(n-i)
        return LaurentPoly({self.n - i: c for i, c in enumerate(self.x)}, self.mode)

    def parameters(self) -> tuple:
        """Read x back off w1 on U0."""
        w1 = self.omega1_u0
        return tuple(w1[i] for i in range(self.n + 1))


@dataclass(frozen=True)
class Violation:
    kind: str
    exponent: int
    magnitude: float


@dataclass
class GluingReport:
    ok: bool
    violations: list[Violation] = field(default_factory=list)
    trivial_terms: LaurentPoly | None = None  # parts of g below the z^(-n-1) window

    def __bool__(self):
        return self.ok


def reconstruct(
    p: GeometricPotential,
    x: Sequence,
    strict: bool = True,
    cross_check: bool = False,
) -> SectionCurve:
    """Build (w2, w2') along the section with parameters ``x``.

    With ``strict`` an off-critical ``x`` raises :class:`ObstructionError`;
    otherwise the non-holomorphic U1 data is returned as-is for inspection.
    ``cross_check`` also evaluates the U1 contour formula directly and
    compares it with the gluing-law result.
    """
    p.require_normalized()
    x = coerce_point(getattr(x, "x", x), p.n, p.mode)
    g = eval_along_section(p, x, 1)
    omega2 = -cauchy_projection(g)
    glued = (omega2 + g).shift(p.n + 2)  # function of z
    obstruction = glued.restrict(lo=1)
    if strict and not _negligible(obstruction, g):
        raise ObstructionError(obstruction)
    omega2_u1 = invert_chart(glued)
    if cross_check:
        direct = u1_contour(p, x)
        diff = direct - omega2_u1.restrict(lo=0)
        if not _negligible(diff, g):
            raise AssertionError(f"U1 contour formula disagrees with gluing: {diff}")
    return SectionCurve(p.n, x, omega2, omega2_u1, p.mode)


def u1_contour(p: GeometricPotential, x: Sequence) -> LaurentPoly:
    """(1/2 pi i) \\oint g(1/u) / (u^(n+2) (u - z')) du around 0 and z'.

    Same sum-of-residues evaluation as on U0: the Cauchy kernel keeps the
    nonnegative powers of u in g(1/u) u^(-n-2).
    """
    g = eval_along_section(p, coerce_point(x, p.n, p.mode), 1)
    return cauchy_projection(invert_chart(g).shift(-(p.n + 2)))


def _negligible(a: LaurentPoly, ref: LaurentPoly) -> bool:
    if a.mode is Mode.EXACT:
        return a.is_zero()
    return a.max_abs() <= GLUING_ATOL * max(1.0, ref.max_abs())


def verify_gluing(p: GeometricPotential, s: SectionCurve, atol: float = GLUING_ATOL) -> GluingReport:
    """Check holomorphy on both charts and w2' = z^(n+2)(w2 + dB/dw); never raises."""
    violations: list[Violation] = []
    exact = s.mode is Mode.EXACT

    def bad(c) -> bool:
        return c != 0 if exact else abs(c) > atol

    for e, c in s.omega2_u0.items():
        if e < 0 and bad(c):
            violations.append(Violation("negative exponent on U0", e, float(abs(c))))
    for e, c in s.omega2_u1.items():
        if e < 0 and bad(c):
            violations.append(Violation("negative exponent on U1", e, float(abs(c))))
    trivial = None
    try:
        g = eval_along_section(p, s.x, 1)
        rhs = (s.omega2_u0 + g).shift(s.n + 2)
        lhs = invert_chart(s.omega2_u1)
        for e, c in (lhs - rhs).items():
            if bad(c):
                violations.append(Violation("gluing mismatch", e, float(abs(c))))
        trivial = g.restrict(hi=-(s.n + 2))
    except Exception as exc:  # verification reports, it does not throw
        violations.append(Violation(f"cannot evaluate potential: {exc}", 0, float("nan")))
    return GluingReport(not violations, violations, trivial)


def window_identity(p: GeometricPotential, x: Sequence, order: int = 1) -> tuple[LaurentPoly, LaurentPoly]:
    """(principal part of d^order B/dw^order along x inside its window, remainder below it).

    The window is z^-1 .. z^(-n-1) for order 1 and z^-1 .. z^(-2n-1) for order 2.
    """
    g = eval_along_section(p, x, order)
    lo = -order * p.n - 1
    return g.restrict(lo=lo, hi=-1), g.restrict(hi=lo - 1)

"""Geometric potentials B(z, w) = sum t_d^(k) z^(-k-1) w^d and their normalization."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from math import perm
from typing import Mapping, Sequence

from .laurent import LaurentPoly, Mode, substitute_poly, to_scalar


class NotNormalizedError(ValueError):
    """A term lies outside the window 0 <= k <= d*n."""


class Chart(enum.Enum):
    U0 = "U0"
    U1 = "U1"


@dataclass(frozen=True)
class CoordinateChange:
    """One absorbed out-of-window term.

    On U0 (k < 0) the fiber coordinate shift is w2 -> w2 + d z^l w1^(d-1) with
    l = -k-1; on U1 (k > dn) it is w2' -> w2' - z'^m w1'^(d-1) with m = k-dn-1.
    ``exponent`` holds l or m respectively.
    """

    chart: Chart
    d: int
    exponent: int
    coefficient: object

    def original_k(self, n: int) -> int:
        if self.chart is Chart.U0:
            return -self.exponent - 1
        return self.exponent + self.d * n + 1


@dataclass(frozen=True)
class GeometricPotential:
    n: int
    terms: Mapping[tuple[int, int], object] = field(default_factory=dict)
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise ValueError(f"n must be a nonnegative integer, got {self.n!r}")
        clean = {}
        for (d, k), t in self.terms.items():
            if d < 0:
                raise ValueError(f"term degree d={d} must be >= 1")
            if d == 0:
                warnings.warn(f"dropping w-independent term (d=0, k={k})", stacklevel=3)
                continue
            t = to_scalar(t, self.mode)
            if t != 0:
                clean[(int(d), int(k))] = t
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def __eq__(self, other):
        if not isinstance(other, GeometricPotential):
            return NotImplemented
        return (self.n, self.mode, self.terms) == (other.n, other.mode, other.terms)

    def __hash__(self):
        return hash((self.n, self.mode, tuple(self.terms.items())))

    def in_window(self, d: int, k: int) -> bool:
        return 0 <= k <= d * self.n

    def is_normalized(self) -> bool:
        return all(self.in_window(d, k) for d, k in self.terms)

    def require_normalized(self):
        bad = [dk for dk in self.terms if not self.in_window(*dk)]
        if bad:
            raise NotNormalizedError(f"terms outside 0 <= k <= dn: {bad}")

    def degrees(self) -> list[int]:
        return sorted({d for d, _ in self.terms})

    def to_float(self) -> "GeometricPotential":
        return GeometricPotential(self.n, {dk: complex(t) for dk, t in self.terms.items()}, Mode.FLOAT)

    def with_term(self, d: int, k: int, t) -> "GeometricPotential":
        terms = dict(self.terms)
        terms[(d, k)] = t
        return GeometricPotential(self.n, terms, self.mode)


def normalize(raw: GeometricPotential) -> tuple[GeometricPotential, list[CoordinateChange]]:
    """Drop terms with k < 0 or k > dn, logging the absorbing coordinate change.

    Each such term is removable on its own: the shift only touches w2 and is
    triangular, so terms are absorbed independently in (d, k) order.
    """
    kept = {}
    log = []
    for (d, k), t in raw.terms.items():
        if k < 0:
            log.append(CoordinateChange(Chart.U0, d, -k - 1, t))
        elif k > d * raw.n:
            log.append(CoordinateChange(Chart.U1, d, k - d * raw.n - 1, t))
        else:
            kept[(d, k)] = t
    return GeometricPotential(raw.n, kept, raw.mode), log


def section_poly(x: Sequence, mode: Mode) -> LaurentPoly:
    """w1(z) = sum_i x_i z^i."""
    return LaurentPoly.polynomial(x, mode)


def coerce_point(x: Sequence, n: int, mode: Mode) -> tuple:
    if len(x) != n + 1:
        raise ValueError(f"expected {n + 1} section coefficients, got {len(x)}")
    return tuple(to_scalar(v, mode) for v in x)


def eval_along_section(p: GeometricPotential, x: Sequence, order: int = 0) -> LaurentPoly:
    """The order-th w-derivative of B(z, w) at w = w1(z) = sum x_i z^i."""
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")
    p.require_normalized()
    x = coerce_point(x, p.n, p.mode)
    body: dict[int, LaurentPoly] = {}
    for (d, k), t in p.terms.items():
        if d < order:
            continue
        c = t * perm(d, order)
        term = LaurentPoly.monomial(-k - 1, c, p.mode)
        body[d - order] = body.get(d - order, LaurentPoly({}, p.mode)) + term
    return substitute_poly(body, section_poly(x, p.mode))

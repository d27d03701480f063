"""Finitely supported Laurent polynomials in one variable.

Coefficients are either exact rationals (:class:`fractions.Fraction`) or
complex doubles, selected by a :class:`Mode` tag carried by every polynomial.
Contour integrals around the origin reduce to coefficient extraction here:
``residue`` is the z^-1 coefficient and the Cauchy kernel 1/(u - z) projects
onto the part with nonnegative exponents.
"""

from __future__ import annotations

import enum
import numbers
from fractions import Fraction
from typing import Iterable, Mapping

# float coefficients below this fraction of the largest one are dropped
FLOAT_PRUNE_RTOL = 1e-12
MAX_EXPONENT = 2**31 - 1


class Mode(enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class ModeError(TypeError):
    """Raised when EXACT and FLOAT data meet in one operation."""


def to_scalar(value, mode: Mode):
    """Coerce ``value`` to the scalar type of ``mode``.

    EXACT accepts ints, Fractions and "p/q" strings; floats are refused rather
    than converted. FLOAT accepts any real or complex number.
    """
    if mode is Mode.EXACT:
        if isinstance(value, bool):
            raise ModeError("booleans are not scalars")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"not a rational literal: {value!r}") from exc
        if isinstance(value, numbers.Rational):
            return Fraction(value.numerator, value.denominator)
        raise ModeError(f"{type(value).__name__} value {value!r} in EXACT mode")
    if isinstance(value, (str, bool)):
        raise ModeError(f"{value!r} is not a FLOAT scalar")
    if isinstance(value, numbers.Number):
        return complex(value)
    raise ModeError(f"{type(value).__name__} is not a scalar")


def zero(mode: Mode):
    return Fraction(0) if mode is Mode.EXACT else 0j


def _check_exponent(e: int) -> int:
    if not isinstance(e, int) or isinstance(e, bool):
        raise TypeError(f"exponent must be an int, got {e!r}")
    if abs(e) > MAX_EXPONENT:
        raise OverflowError(f"exponent {e} out of range")
    return e


def _prune(coeffs: dict, mode: Mode) -> dict:
    if mode is Mode.EXACT:
        return {e: c for e, c in coeffs.items() if c != 0}
    if not coeffs:
        return {}
    top = max(abs(c) for c in coeffs.values())
    if top == 0:
        return {}
    cut = FLOAT_PRUNE_RTOL * top
    return {e: c for e, c in coeffs.items() if abs(c) >= cut}


class LaurentPoly:
    """Immutable Laurent polynomial sum_e c_e z^e with finite support."""

    __slots__ = ("_coeffs", "mode")

    def __init__(self, coeffs: Mapping[int, object] | None = None, mode: Mode = Mode.EXACT):
        self.mode = mode
        raw = {}
        for e, c in (coeffs or {}).items():
            raw[_check_exponent(e)] = to_scalar(c, mode)
        self._coeffs = _prune(raw, mode)

    @classmethod
    def _trusted(cls, coeffs: dict, mode: Mode) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.mode = mode
        obj._coeffs = _prune(coeffs, mode)
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff=1, mode: Mode = Mode.EXACT) -> "LaurentPoly":
        return cls({exponent: coeff}, mode)

    @classmethod
    def constant(cls, c, mode: Mode = Mode.EXACT) -> "LaurentPoly":
        return cls({0: c}, mode)

    @classmethod
    def polynomial(cls, coeffs: Iterable, mode: Mode = Mode.EXACT) -> "LaurentPoly":
        """sum_i coeffs[i] z^i."""
        return cls(dict(enumerate(coeffs)), mode)

    # -- access ----------------------------------------------------------

    @property
    def coeffs(self) -> dict:
        return dict(self._coeffs)

    def __getitem__(self, e: int):
        return self._coeffs.get(e, zero(self.mode))

    def items(self):
        return sorted(self._coeffs.items())

    def exponents(self) -> list[int]:
        return sorted(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    @property
    def min_exp(self) -> int | None:
        return min(self._coeffs) if self._coeffs else None

    @property
    def max_exp(self) -> int | None:
        return max(self._coeffs) if self._coeffs else None

    # -- arithmetic ------------------------------------------------------

    def _same_mode(self, other: "LaurentPoly"):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if other.mode is not self.mode:
            raise ModeError(f"cannot combine {self.mode.value} and {other.mode.value} polynomials")
        return other

    def __add__(self, other):
        if isinstance(other, numbers.Number):
            other = LaurentPoly.constant(other, self.mode)
        if self._same_mode(other) is NotImplemented:
            return NotImplemented
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly._trusted(out, self.mode)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._trusted({e: -c for e, c in self._coeffs.items()}, self.mode)

    def __sub__(self, other):
        if isinstance(other, numbers.Number):
            other = LaurentPoly.constant(other, self.mode)
        if self._same_mode(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            self._same_mode(other)
            out: dict = {}
            for e1, c1 in self._coeffs.items():
                for e2, c2 in other._coeffs.items():
                    e = _check_exponent(e1 + e2)
                    out[e] = out.get(e, 0) + c1 * c2
            return LaurentPoly._trusted(out, self.mode)
        if isinstance(other, numbers.Number):
            s = to_scalar(other, self.mode)
            return LaurentPoly._trusted({e: c * s for e, c in self._coeffs.items()}, self.mode)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, d: int):
        if not isinstance(d, int) or d < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = LaurentPoly.constant(1, self.mode)
        base = self
        while d:
            if d & 1:
                out = out * base
            base = base * base
            d >>= 1
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by z^k."""
        return LaurentPoly._trusted(
            {_check_exponent(e + k): c for e, c in self._coeffs.items()}, self.mode
        )

    def restrict(self, lo: int | None = None, hi: int | None = None) -> "LaurentPoly":
        """Terms with lo <= exponent <= hi (open-ended when a bound is None)."""
        return LaurentPoly._trusted(
            {
                e: c
                for e, c in self._coeffs.items()
                if (lo is None or e >= lo) and (hi is None or e <= hi)
            },
            self.mode,
        )

    def residue(self):
        return residue(self)

    def split_parts(self):
        return split_parts(self)

    def invert_chart(self):
        return invert_chart(self)

    def to_float(self) -> "LaurentPoly":
        return LaurentPoly({e: complex(c) for e, c in self._coeffs.items()}, Mode.FLOAT)

    def max_abs(self) -> float:
        return max((abs(c) for c in self._coeffs.values()), default=0.0)

    # -- comparison / display -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, numbers.Number):
            try:
                other = LaurentPoly.constant(other, self.mode)
            except ModeError:
                return False
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.mode is other.mode and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.mode, frozenset(self._coeffs.items())))

    def allclose(self, other: "LaurentPoly", atol: float = 1e-9) -> bool:
        exps = set(self._coeffs) | set(other._coeffs)
        return all(abs(self[e] - other[e]) <= atol for e in exps)

    def __repr__(self):
        if not self._coeffs:
            return "LaurentPoly(0)"
        body = " + ".join(f"({c})*z^{e}" for e, c in self.items())
        return f"LaurentPoly({body}, {self.mode.value})"


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def residue(a: LaurentPoly):
    """Coefficient of z^-1, i.e. the contour integral of a dz/(2 pi i) around 0."""
    return a[-1]


def split_parts(a: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """(principal part, holomorphic part): exponents < 0 and >= 0."""
    return a.restrict(hi=-1), a.restrict(lo=0)


def cauchy_projection(a: LaurentPoly) -> LaurentPoly:
    """(1/2 pi i) \\oint a(u) / (u - z) du over a contour enclosing 0 and z.

    Summing the residues at 0 and z, u^m/(u - z) contributes z^m for m >= 0
    and cancels for m < 0, so this is the holomorphic part of ``a``.
    """
    return split_parts(a)[1]


def invert_chart(a: LaurentPoly) -> LaurentPoly:
    """Rewrite f(z) as a function of z' = 1/z (exponent e -> -e)."""
    return LaurentPoly._trusted({-e: c for e, c in a._coeffs.items()}, a.mode)


def substitute_poly(body: Mapping[int, LaurentPoly], arg: LaurentPoly) -> LaurentPoly:
    """Evaluate sum_d body[d](z) * w^d at w = arg(z).

    ``body`` maps a nonnegative power of w to its Laurent coefficient in z.
    """
    mode = arg.mode
    out = LaurentPoly({}, mode)
    if not body:
        return out
    for d in body:
        if d < 0:
            raise ValueError(f"negative power w^{d} in a body holomorphic in w")
    powers = {0: LaurentPoly.constant(1, mode)}
    for d in range(1, max(body) + 1):
        powers[d] = powers[d - 1] * arg
    for d, coeff in sorted(body.items()):
        out = out + coeff * powers[d]
    return out

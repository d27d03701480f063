"""The superpotential W(x_0, ..., x_n) attached to a geometric potential.

W is the residue at z = 0 of B(z, sum_i x_i z^i). Two constructions are
provided and must agree term for term:

* :func:`build_combinatorial` sums t_d^(k) W_d^(k), where W_d^(k) counts the
  ordered index tuples (i_1, ..., i_d) in {0..n}^d with i_1 + ... + i_d = k;
* :func:`build_residue` expands B along a section with formal coefficients
  and reads off the z^-1 coefficient.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import factorial, prod
from typing import Mapping, Sequence

import numpy as np

from .laurent import Mode, to_scalar, zero
from .linalg import exact_rank, float_rank
from .potential import GeometricPotential, coerce_point

MultiIndex = tuple[int, ...]


def _unit(n: int, i: int) -> MultiIndex:
    return tuple(1 if j == i else 0 for j in range(n + 1))


def _add_index(a: MultiIndex, b: MultiIndex) -> MultiIndex:
    return tuple(u + v for u, v in zip(a, b))


@dataclass(frozen=True)
class Superpotential:
    """Polynomial in x_0..x_n stored as {exponent multi-index: coefficient}."""

    n: int
    monomials: Mapping[MultiIndex, object]
    mode: Mode = Mode.EXACT

    def __post_init__(self):
        clean = {}
        for alpha, c in self.monomials.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n + 1 or min(alpha, default=0) < 0:
                raise ValueError(f"bad multi-index {alpha} for n={self.n}")
            c = to_scalar(c, self.mode)
            if c != 0:
                clean[alpha] = clean.get(alpha, 0) + c
        clean = {a: c for a, c in clean.items() if c != 0}
        object.__setattr__(self, "monomials", dict(sorted(clean.items())))

    @classmethod
    def zero(cls, n: int, mode: Mode = Mode.EXACT) -> "Superpotential":
        return cls(n, {}, mode)

    def __eq__(self, other):
        if not isinstance(other, Superpotential):
            return NotImplemented
        return (self.n, self.mode, self.monomials) == (other.n, other.mode, other.monomials)

    def __hash__(self):
        return hash((self.n, self.mode, tuple(self.monomials.items())))

    def __add__(self, other: "Superpotential") -> "Superpotential":
        if other.n != self.n or other.mode is not self.mode:
            raise ValueError("superpotentials differ in n or mode")
        out = dict(self.monomials)
        for a, c in other.monomials.items():
            out[a] = out.get(a, 0) + c
        return Superpotential(self.n, out, self.mode)

    def scale(self, c) -> "Superpotential":
        c = to_scalar(c, self.mode)
        return Superpotential(self.n, {a: v * c for a, v in self.monomials.items()}, self.mode)

    def is_zero(self) -> bool:
        return not self.monomials

    def degrees(self) -> set[int]:
        return {sum(a) for a in self.monomials}

    def is_quadratic_form(self) -> bool:
        return self.degrees() <= {2}

    def derivative(self, j: int) -> "Superpotential":
        out = {}
        for alpha, c in self.monomials.items():
            if alpha[j]:
                beta = list(alpha)
                beta[j] -= 1
                out[tuple(beta)] = c * alpha[j]
        return Superpotential(self.n, out, self.mode)

    def evaluate(self, x: Sequence):
        x = coerce_point(x, self.n, self.mode)
        total = zero(self.mode)
        for alpha, c in self.monomials.items():
            total += c * prod((xi**a for xi, a in zip(x, alpha) if a), start=1)
        return total

    def coefficient_scale(self) -> float:
        return max((float(abs(c)) for c in self.monomials.values()), default=0.0)

    def to_float(self) -> "Superpotential":
        return Superpotential(self.n, {a: complex(c) for a, c in self.monomials.items()}, Mode.FLOAT)

    def __repr__(self):
        if not self.monomials:
            return f"Superpotential(0, n={self.n})"
        parts = []
        for alpha, c in self.monomials.items():
            mono = "*".join(f"x{i}^{a}" if a > 1 else f"x{i}" for i, a in enumerate(alpha) if a)
            parts.append(f"({c})*{mono or '1'}")
        return f"Superpotential({' + '.join(parts)})"


def w_basis(n: int, d: int, k: int) -> Superpotential:
    """W_d^(k): sum of x_{i_1}...x_{i_d} over ordered tuples summing to k.

    W_0^(0) = 1 and W_d^(k) = 0 for k outside 0..dn.
    """
    if d < 0:
        raise ValueError("d must be nonnegative")
    if k < 0 or k > d * n:
        return Superpotential.zero(n)
    if d == 0:
        return Superpotential(n, {(0,) * (n + 1): 1})
    monomials = {}
    # each multiset of indices stands for d!/prod(mult!) ordered tuples
    for combo in itertools.combinations_with_replacement(range(n + 1), d):
        if sum(combo) != k:
            continue
        mult = Counter(combo)
        alpha = tuple(mult.get(i, 0) for i in range(n + 1))
        monomials[alpha] = factorial(d) // prod(factorial(m) for m in mult.values())
    return Superpotential(n, monomials)


def build_combinatorial(p: GeometricPotential) -> Superpotential:
    p.require_normalized()
    out = {}
    for (d, k), t in p.terms.items():
        for alpha, c in w_basis(p.n, d, k).monomials.items():
            out[alpha] = out.get(alpha, 0) + t * c
    return Superpotential(p.n, out, p.mode)


def _formal_mul(a: dict, b: dict) -> dict:
    # a, b: {z-exponent: {multi-index: coeff}}
    out: dict = {}
    for ea, pa in a.items():
        for eb, pb in b.items():
            slot = out.setdefault(ea + eb, {})
            for ma, ca in pa.items():
                for mb, cb in pb.items():
                    m = _add_index(ma, mb)
                    slot[m] = slot.get(m, 0) + ca * cb
    return out


def build_residue(p: GeometricPotential) -> Superpotential:
    """Residue of B(z, w1(z)) with w1 = sum x_i z^i and the x_i kept formal."""
    p.require_normalized()
    n = p.n
    section = {i: {_unit(n, i): 1} for i in range(n + 1)}
    powers = {0: {0: {(0,) * (n + 1): 1}}}
    out: dict = {}
    for (d, k), t in p.terms.items():
        for e in range(max(powers) + 1, d + 1):
            powers[e] = _formal_mul(powers[e - 1], section)
        # z^(-k-1) * w1^d has residue = coefficient of z^k in w1^d
        for alpha, c in powers[d].get(k, {}).items():
            out[alpha] = out.get(alpha, 0) + t * c
    return Superpotential(n, out, p.mode)


def reduce_derivative(d: int, k: int, j: int) -> tuple[int, int, int]:
    """d/dx_j W_d^(k) = d * W_{d-1}^(k-j); returns (d, d-1, k-j)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return d, d - 1, k - j


def reduce_derivatives(d: int, k: int, js: Sequence[int]) -> tuple[int, int, int]:
    """Iterated form: d(d-1)...(d-l+1) * W_{d-l}^(k - sum js)."""
    factor = 1
    for step in range(len(js)):
        factor *= d - step
    return factor, d - len(js), k - sum(js)


@dataclass(frozen=True)
class HessianMatrix:
    entries: tuple[tuple, ...]
    mode: Mode = Mode.EXACT

    @property
    def size(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def is_symmetric(self) -> bool:
        return all(self.entries[i][j] == self.entries[j][i] for i in range(self.size) for j in range(i))

    def to_numpy(self) -> np.ndarray:
        return np.array([[complex(v) for v in row] for row in self.entries], dtype=complex).reshape(
            self.size, self.size
        )

    def tolist(self) -> list[list]:
        return [list(row) for row in self.entries]


def _check_point(W: Superpotential, x: Sequence) -> tuple:
    return coerce_point(x, W.n, W.mode)


def gradient(W: Superpotential, x: Sequence) -> list:
    x = _check_point(W, x)
    return [W.derivative(j).evaluate(x) for j in range(W.n + 1)]


def hessian(W: Superpotential, x: Sequence) -> HessianMatrix:
    x = _check_point(W, x)
    rows = []
    for i in range(W.n + 1):
        di = W.derivative(i)
        rows.append(tuple(di.derivative(j).evaluate(x) for j in range(W.n + 1)))
    return HessianMatrix(tuple(rows), W.mode)


def corank_with_flag(H: HessianMatrix, scale: float | None = None) -> tuple[int, bool]:
    """(corank, near_threshold). EXACT decisions are never flagged."""
    if H.size == 0:
        return 0, False
    if H.mode is Mode.EXACT:
        return H.size - exact_rank(H.entries), False
    rank, near = float_rank(H.to_numpy(), scale=scale)
    return H.size - rank, near


def corank(H: HessianMatrix) -> int:
    return corank_with_flag(H)[0]


"""Critical points of the superpotential, i.e. holomorphic sections."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .laurent import Mode
from .linalg import RANK_RTOL, exact_nullspace
from .superpotential import Superpotential, gradient, hessian

DEDUP_DISTANCE = 1e-6
DEFAULT_STARTS = 64
DEFAULT_RADIUS = 2.0
DEFAULT_TOL = 1e-10
POLISH_STEP = 1e-15


class Kind(enum.Enum):
    ISOLATED = "isolated"
    FAMILY_MEMBER = "family_member"


class CriticalFamilyError(ValueError):
    """Every point is critical (the gradient vanishes identically)."""


@dataclass(frozen=True)
class CriticalPoint:
    x: tuple
    residual: float = 0.0
    kind: Kind = Kind.ISOLATED

    @property
    def mode(self) -> Mode:
        return Mode.EXACT if all(isinstance(v, Fraction) for v in self.x) else Mode.FLOAT


@dataclass(frozen=True)
class CriticalLocus:
    """Critical set of a quadratic form: the kernel of its Hessian."""

    n: int
    kernel: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.kernel)

    def samples(self) -> list[CriticalPoint]:
        """The origin followed by each kernel basis vector."""
        kind = Kind.FAMILY_MEMBER if self.kernel else Kind.ISOLATED
        origin = tuple(Fraction(0) for _ in range(self.n + 1))
        return [CriticalPoint(origin, 0.0, kind)] + [CriticalPoint(v, 0.0, kind) for v in self.kernel]


@dataclass
class NewtonResult:
    points: list[CriticalPoint] = field(default_factory=list)
    failures: list[tuple] = field(default_factory=list)  # starting points that did not converge

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


def solve_quadratic(W: Superpotential) -> CriticalLocus:
    if not W.is_quadratic_form():
        raise ValueError(f"superpotential has monomials of degree {sorted(W.degrees() - {2})}")
    if W.mode is not Mode.EXACT:
        raise ValueError("solve_quadratic works over the rationals")
    zero_pt = [0] * (W.n + 1)
    H = hessian(W, zero_pt)
    basis = exact_nullspace(H.entries, W.n + 1)
    return CriticalLocus(W.n, tuple(tuple(v) for v in basis))


def _univariate_coeffs(W: Superpotential) -> list[complex]:
    """Coefficients of dW/dx_0, constant term first."""
    dW = W.derivative(0)
    deg = max((a[0] for a in dW.monomials), default=-1)
    coeffs = [0j] * (deg + 1)
    for (a,), c in dW.monomials.items():
        coeffs[a] = complex(c)
    return coeffs


def companion_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """Roots of sum_i c_i t^i as eigenvalues of the companion matrix."""
    c = np.asarray(coeffs, dtype=complex)
    while c.size and c[-1] == 0:
        c = c[:-1]
    deg = c.size - 1
    if deg < 1:
        return np.empty(0, dtype=complex)
    monic = c[:-1] / c[-1]
    comp = np.zeros((deg, deg), dtype=complex)
    comp[1:, :-1] = np.eye(deg - 1)
    comp[:, -1] = -monic
    return np.linalg.eigvals(comp)


def _dedupe(points: list[CriticalPoint]) -> list[CriticalPoint]:
    kept: list[CriticalPoint] = []
    for p in points:
        if all(max(abs(complex(a) - complex(b)) for a, b in zip(p.x, q.x)) >= DEDUP_DISTANCE for q in kept):
            kept.append(p)
    return kept


def _classify(W: Superpotential, x: tuple) -> Kind:
    # singular Hessian at the solution, measured against the size of W itself
    sv = np.linalg.svd(hessian(W, x).to_numpy(), compute_uv=False)
    scale = max(W.coefficient_scale(), float(sv[0]))
    return Kind.FAMILY_MEMBER if sv[-1] <= RANK_RTOL * scale else Kind.ISOLATED


def _sort_key(p: CriticalPoint):
    return tuple((complex(v).real, complex(v).imag) for v in p.x)


def solve_univariate(W: Superpotential) -> list[CriticalPoint]:
    """All roots of dW/dx_0 for n = 0."""
    if W.n != 0:
        raise ValueError("solve_univariate needs n = 0")
    coeffs = _univariate_coeffs(W)
    if not any(coeffs):
        raise CriticalFamilyError("dW/dx0 vanishes identically; every point is critical")
    Wf = W.to_float() if W.mode is Mode.EXACT else W
    out = []
    for r in companion_roots(coeffs):
        x = (complex(r),)
        res = float(abs(gradient(Wf, x)[0]))
        out.append(CriticalPoint(x, res, _classify(Wf, x)))
    return sorted(_dedupe(out), key=_sort_key)


def default_starts(n: int, count: int = DEFAULT_STARTS, radius: float = DEFAULT_RADIUS, seed: int = 0) -> np.ndarray:
    """Uniform samples from the complex polydisc |x_i| <= radius."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random((count, n + 1)))
    theta = 2 * np.pi * rng.random((count, n + 1))
    return r * np.exp(1j * theta)


def _grad_hess_funcs(W: Superpotential):
    n = W.n
    grads = [W.derivative(j) for j in range(n + 1)]
    hess = [[g.derivative(j) for j in range(n + 1)] for g in grads]

    def grad(x):
        return np.array([g.evaluate(x) for g in grads], dtype=complex)

    def hes(x):
        return np.array([[h.evaluate(x) for h in row] for row in hess], dtype=complex)

    return grad, hes


def solve_newton(
    W: Superpotential,
    starts: Sequence | None = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = 100,
) -> NewtonResult:
    """Newton's method on grad W = 0 from each start.

    Steps use the pseudo-inverse of the Hessian, so singular Jacobians along
    positive-dimensional critical sets do not abort the iteration. Converged
    points are polished, deduplicated in the max-norm and flagged
    FAMILY_MEMBER when the Hessian is singular there.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    Wf = W.to_float() if W.mode is Mode.EXACT else W
    if starts is None:
        starts = default_starts(W.n)
    grad, hes = _grad_hess_funcs(Wf)
    result = NewtonResult()
    found = []
    for start in starts:
        x = np.array(start, dtype=complex).reshape(W.n + 1)
        converged = False
        for _ in range(max_iter):
            g = grad(tuple(x))
            if not np.all(np.isfinite(g)):
                break
            if np.max(np.abs(g), initial=0.0) <= tol:
                converged = True
                break
            x = x - np.linalg.pinv(hes(tuple(x)), rcond=1e-12) @ g
        if not converged:
            result.failures.append(tuple(complex(v) for v in start))
            continue
        # at singular solutions Newton is only linear; keep going while it helps
        for _ in range(max_iter):
            step = np.linalg.pinv(hes(tuple(x)), rcond=1e-12) @ grad(tuple(x))
            if not np.all(np.isfinite(step)):
                break
            trial = x - step
            if np.max(np.abs(grad(tuple(trial)))) > np.max(np.abs(grad(tuple(x)))):
                break
            x = trial
            if np.max(np.abs(step)) <= POLISH_STEP * max(1.0, np.max(np.abs(x))):
                break
        pt = tuple(complex(v) for v in x)
        residual = float(np.max(np.abs(grad(pt)), initial=0.0))
        found.append(CriticalPoint(pt, residual, _classify(Wf, pt)))
    result.points = sorted(_dedupe(found), key=_sort_key)
    return result

"""Acceptance checks over randomly generated corpora.

Every check returns a :class:`CheckResult`. All exact checks use fixed seeds,
so reruns are bit-identical; ``run(exact_only=True)`` skips the FLOAT check.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import perm
from typing import Callable

import numpy as np

from .bundle import (
    ferrari_check,
    h0_oracle,
    normal_transition,
    predicted_splitting,
    splitting_from_h0,
)
from .critical import default_starts, solve_newton, solve_quadratic, solve_univariate
from .laurent import Mode
from .pipeline import analyze
from .potential import GeometricPotential, eval_along_section
from .sections import ObstructionError, reconstruct, verify_gluing
from .superpotential import (
    Superpotential,
    build_combinatorial,
    build_residue,
    gradient,
    hessian,
    w_basis,
)

SEED = 20061


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


# -- corpora -------------------------------------------------------------------


def random_rational(rng: random.Random, nonzero: bool = True) -> Fraction:
    while True:
        num = rng.randint(-9, 9)
        den = rng.choice([v for v in range(-9, 10) if v != 0])
        if num or not nonzero:
            return Fraction(num, den)


def quadratic_corpus(count: int = 200, seed: int = SEED) -> list[GeometricPotential]:
    """Purely quadratic potentials; every tenth has a deliberately singular Hessian.

    The Hessian is the Hankel matrix 2 t_(i+j); supporting t only on k > n
    leaves its upper-left triangle zero and forces rank <= 2n - m + 1 <= n.
    """
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        n = rng.randint(0, 4)
        terms = {}
        if idx % 10 == 9:
            lo = rng.randint(n + 1, 2 * n + 1)
            for k in range(lo, 2 * n + 1):
                terms[(2, k)] = random_rational(rng)
        else:
            for k in range(2 * n + 1):
                if rng.random() < 0.7:
                    terms[(2, k)] = random_rational(rng)
        out.append(GeometricPotential(n, terms))
    return out


def general_corpus(count: int, seed: int, max_d: int = 4, max_n: int = 3) -> list[GeometricPotential]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(0, max_n)
        terms = {}
        for _ in range(rng.randint(1, 5)):
            d = rng.randint(1, max_d)
            k = rng.randint(0, d * n)
            terms[(d, k)] = random_rational(rng)
        out.append(GeometricPotential(n, terms))
    return out


def random_kernel_point(rng: random.Random, basis) -> tuple:
    n1 = len(basis[0]) if basis else 0
    if not basis:
        return ()
    coeffs = [random_rational(rng, nonzero=False) for _ in basis]
    return tuple(sum((c * v[i] for c, v in zip(coeffs, basis)), Fraction(0)) for i in range(n1))


def exact_critical_corpus(seed: int = SEED) -> list[tuple[GeometricPotential, tuple]]:
    """(potential, exact critical point) pairs used by the gluing and truncation checks."""
    rng = random.Random(seed + 1)
    pairs = []
    for p in quadratic_corpus():
        locus = solve_quadratic(build_combinatorial(p))
        x = random_kernel_point(rng, locus.kernel) if locus.kernel else (Fraction(0),) * (p.n + 1)
        pairs.append((p, x))
    for n in range(7):
        pairs.append((GeometricPotential(n), (Fraction(0),) * (n + 1)))
        pairs.append((GeometricPotential(n), tuple(Fraction(i + 1, 2) for i in range(n + 1))))
    cubic = GeometricPotential(1, {(3, 1): 1, (2, 0): 1})
    for c in (Fraction(1), Fraction(-1), Fraction(2), Fraction(-1, 3), Fraction(0)):
        pairs.append((cubic, (Fraction(0), c)))
    # origins of higher-degree potentials are critical when no d = 1 term is present
    for p in general_corpus(100, seed + 2):
        if all(d >= 2 for d, _ in p.terms):
            pairs.append((p, (Fraction(0),) * (p.n + 1)))
    return pairs


# -- checks --------------------------------------------------------------------


def check_quadratic_ferrari() -> CheckResult:
    rng = random.Random(SEED + 3)
    corpus = quadratic_corpus()
    bad = []
    deficient = 0
    for p in corpus:
        W = build_combinatorial(p)
        locus = solve_quadratic(W)
        if locus.dimension and any(d == 2 for d, _ in p.terms):
            deficient += 1
        x = random_kernel_point(rng, locus.kernel) if locus.kernel else (Fraction(0),) * (p.n + 1)
        a = ferrari_check(p, x)
        h0 = h0_oracle(normal_transition(p, x))
        if not (a.hessian_corank == h0 == locus.dimension and predicted_splitting(a.hessian_corank) == splitting_from_h0(h0)):
            bad.append((p, x))
    return CheckResult(
        "1 quadratic Ferrari property",
        not bad,
        f"{len(corpus) - len(bad)}/{len(corpus)} agree ({deficient} with nonzero corank)",
    )


def check_zero_potential() -> CheckResult:
    bad = []
    for n in range(7):
        rep = analyze(GeometricPotential(n))
        ok = rep.exit_status == 0 and rep.results
        for r in rep.results:
            a = r.analysis
            ok = ok and a.hessian_corank == n + 1 and a.verified.as_tuple() == (n, -n - 2)
            ok = ok and a.predicted == a.verified
        if not ok:
            bad.append(n)
    return CheckResult("2 B = 0 gives O(n)+O(-n-2)", not bad, f"n = 0..6, failing: {bad or 'none'}")


def check_route_equivalence() -> CheckResult:
    corpus = general_corpus(100, SEED + 4)
    bad = sum(build_combinatorial(p) != build_residue(p) for p in corpus)
    return CheckResult("3 combinatorial W == residue W", bad == 0, f"{len(corpus) - bad}/{len(corpus)} equal")


def _iterated(W: Superpotential, js) -> Superpotential:
    for j in js:
        W = W.derivative(j)
    return W


def check_derivative_identities() -> CheckResult:
    checked = bad = 0
    for n in range(4):
        for d in range(1, 5):
            for k in range(d * n + 1):
                W = w_basis(n, d, k)
                for ell in (1, 2, 3):
                    for js in itertools.product(range(n + 1), repeat=ell):
                        lhs = _iterated(W, js)
                        factor = perm(d, ell)
                        if d - ell < 0:
                            rhs = Superpotential.zero(n)
                        else:
                            rhs = w_basis(n, d - ell, k - sum(js)).scale(factor)
                        checked += 1
                        bad += lhs != rhs
    return CheckResult("4 derivative identities of W_d^(k)", bad == 0, f"{checked - bad}/{checked} identities hold")


def check_window_identity() -> CheckResult:
    rng = random.Random(SEED + 5)
    corpus = general_corpus(50, SEED + 6)
    bad = []
    for p in corpus:
        n = p.n
        x = tuple(random_rational(rng, nonzero=False) for _ in range(n + 1))
        W = build_combinatorial(p)
        grad = gradient(W, x)
        H = hessian(W, x)
        g1 = eval_along_section(p, x, 1)
        g2 = eval_along_section(p, x, 2)
        ok = all(g1[-j - 1] == grad[j] for j in range(n + 1))
        # H is a Hankel matrix, so every pair i <= j with i + j = q carries the same coefficient
        ok = ok and all(
            g2[-(i + j) - 1] == H[i, j] for i in range(n + 1) for j in range(i, n + 1)
        )
        if not ok:
            bad.append((p, x))
    return CheckResult(
        "5 principal-part window identities", not bad, f"{len(corpus) - len(bad)}/{len(corpus)} potentials"
    )


def check_gluing() -> CheckResult:
    pairs = exact_critical_corpus()
    bad = 0
    for p, x in pairs:
        try:
            s = reconstruct(p, x, cross_check=True)
            bad += not verify_gluing(p, s).ok
        except (ObstructionError, AssertionError):
            bad += 1
    # off-critical perturbation must be caught
    eps = 1e-3
    pf = GeometricPotential(1, {(3, 1): 1, (2, 0): 1}).to_float()
    caught = 0
    trials = (1.0, -1.0, 2.0, -1 / 3)
    for c in trials:
        x = (eps, c)
        grad = gradient(build_combinatorial(pf), x)
        try:
            reconstruct(pf, x)
            raised = False
        except ObstructionError as exc:
            raised = exc.offending.max_exp is not None and exc.offending.max_exp > 0
        rep = verify_gluing(pf, reconstruct(pf, x, strict=False))
        seen = {v.exponent: v.magnitude for v in rep.violations if v.kind == "negative exponent on U1"}
        expected = {-(pf.n + 1 - j): abs(grad[j]) for j in range(pf.n + 1)}
        matches = all(abs(seen.get(e, 0.0) - m) <= 1e-12 + 1e-9 * m for e, m in expected.items())
        caught += raised and not rep.ok and matches
    ok = bad == 0 and caught == len(trials)
    return CheckResult(
        "6 sections glue exactly at critical points",
        ok,
        f"{len(pairs) - bad}/{len(pairs)} exact sections glue; {caught}/{len(trials)} perturbed sections obstructed",
    )


def check_stratified_family() -> CheckResult:
    p = GeometricPotential(1, {(3, 1): 1, (2, 0): 1})
    W = build_combinatorial(p)
    cases = [(Fraction(1), 1, (0, -2)), (Fraction(-1), 1, (0, -2)), (Fraction(2), 1, (0, -2)), (Fraction(-1, 3), 2, (1, -3))]
    bad = []
    for c, r, split in cases:
        H = hessian(W, (0, c))
        hess_ok = H.tolist() == [[6 * c + 2, 0], [0, 0]]
        a = ferrari_check(p, (0, c))
        if not (hess_ok and a.hessian_corank == r and a.verified.as_tuple() == split and a.agrees):
            bad.append(c)
    return CheckResult("7 stratified cubic family", not bad, f"c in {{1, -1, 2, -1/3}}, failing: {bad or 'none'}")


def check_float_numerics() -> CheckResult:
    rng = np.random.default_rng(SEED + 7)
    pyrng = random.Random(SEED + 8)
    h = 1e-5
    worst = 0.0
    for _ in range(100):
        p = general_corpus(1, pyrng.randrange(1 << 30))[0].to_float()
        W = build_combinatorial(p)
        n1 = p.n + 1
        x = np.sqrt(rng.random(n1)) * np.exp(2j * np.pi * rng.random(n1))
        g = np.array(gradient(W, tuple(x)))
        fd = np.empty(n1, dtype=complex)
        for j in range(n1):
            e = np.zeros(n1)
            e[j] = h
            fd[j] = (W.evaluate(tuple(x + e)) - W.evaluate(tuple(x - e))) / (2 * h)
        scale = np.max(np.abs(g))
        err = np.max(np.abs(fd - g)) / scale if scale > 0 else np.max(np.abs(fd))
        worst = max(worst, float(err))
    fd_ok = worst <= 1e-6

    hausdorff = 0.0
    for _ in range(20):
        roots = _separated_roots(rng, int(rng.integers(1, 6)), 0.1)
        W = univariate_from_roots(roots, complex(rng.uniform(0.5, 2.0)))
        a = np.array([pt.x[0] for pt in solve_univariate(W)])
        b = np.array([pt.x[0] for pt in solve_newton(W, default_starts(0, 256, seed=int(rng.integers(1 << 30))))])
        hausdorff = max(hausdorff, _hausdorff(a, b))
    newton_ok = hausdorff <= 1e-8
    return CheckResult(
        "8 FLOAT gradient and root finding",
        fd_ok and newton_ok,
        f"max FD relative error {worst:.2e} (<= 1e-6); max Hausdorff distance {hausdorff:.2e} (<= 1e-8)",
    )


def _separated_roots(rng: np.random.Generator, m: int, sep: float) -> list[complex]:
    roots: list[complex] = []
    while len(roots) < m:
        r = complex(*rng.uniform(-1, 1, 2))
        if abs(r) <= 1 and all(abs(r - s) >= sep for s in roots):
            roots.append(r)
    return roots


def univariate_from_roots(roots, lead: complex = 1.0) -> Superpotential:
    """n = 0 superpotential whose derivative is lead * prod(x - r); as a potential, t_d^(0) = coeff."""
    dcoeffs = lead * np.poly(roots)[::-1]  # constant term first
    terms = {(d + 1, 0): complex(c) / (d + 1) for d, c in enumerate(dcoeffs)}
    return build_combinatorial(GeometricPotential(0, terms, Mode.FLOAT))


def _hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    if a.size == 0 or b.size == 0:
        return 0.0 if a.size == b.size else float("inf")
    dist = np.abs(a[:, None] - b[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def check_truncation_stability() -> CheckResult:
    pairs = exact_critical_corpus()
    bad = 0
    for p, x in pairs:
        M = normal_transition(p, x)
        values = {h0_oracle(M, p.n + extra) for extra in range(4)}
        bad += len(values) != 1
    return CheckResult("9 h0 independent of the s2 degree bound", bad == 0, f"{len(pairs) - bad}/{len(pairs)} stable for D = n..n+3")


CHECKS: list[tuple[Callable[[], CheckResult], bool]] = [
    (check_quadratic_ferrari, True),
    (check_zero_potential, True),
    (check_route_equivalence, True),
    (check_derivative_identities, True),
    (check_window_identity, True),
    (check_gluing, True),
    (check_stratified_family, True),
    (check_float_numerics, False),
    (check_truncation_stability, True),
]


def run(exact_only: bool = False) -> list[CheckResult]:
    return [fn() for fn, exact in CHECKS if exact or not exact_only]


__all__ = ["CHECKS", "CheckResult", "run"]

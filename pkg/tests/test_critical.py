from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from laufer.critical import (
    CriticalFamilyError,
    Kind,
    companion_roots,
    default_starts,
    solve_newton,
    solve_quadratic,
    solve_univariate,
)
from laufer.laurent import Mode
from laufer.potential import GeometricPotential
from laufer.superpotential import Superpotential, build_combinatorial, corank, gradient, hessian


def W(n, monomials, mode=Mode.EXACT):
    return Superpotential(n, monomials, mode)


def test_quadratic_invertible():
    locus = solve_quadratic(W(1, {(1, 1): 2}))
    assert locus.dimension == 0
    assert [p.x for p in locus.samples()] == [(0, 0)]


def test_quadratic_line():
    locus = solve_quadratic(W(1, {(2, 0): 1}))
    assert locus.kernel == ((Fraction(0), Fraction(1)),)


def test_quadratic_zero_is_everything():
    locus = solve_quadratic(W(1, {}))
    assert locus.dimension == 2
    assert all(p.kind is Kind.FAMILY_MEMBER for p in locus.samples())


def test_quadratic_rejects_other_degrees():
    with pytest.raises(ValueError):
        solve_quadratic(W(1, {(1, 0): 1, (1, 1): 1}))


@pytest.mark.parametrize(
    "terms",
    [
        {(2, k): t for k, t in enumerate([1, 0, -1, 2, Fraction(1, 3)])},
        {(2, 4): 1},
        {(2, 3): 1, (2, 4): -2},
        {(2, 2): 1},
    ],
)
def test_quadratic_kernel_consistent_with_corank(terms):
    p = GeometricPotential(2, terms)
    Wp = build_combinatorial(p)
    locus = solve_quadratic(Wp)
    H = hessian(Wp, (1, 2, 3))
    assert locus.dimension == corank(H)
    for v in locus.kernel:
        assert gradient(Wp, v) == [0, 0, 0]


def test_univariate_cubic():
    # W = x^3/3 - x from t_3^(0) = 1/3, t_1^(0) = -1
    Wp = build_combinatorial(GeometricPotential(0, {(3, 0): Fraction(1, 3), (1, 0): -1}))
    roots = sorted(p.x[0].real for p in solve_univariate(Wp))
    assert np.allclose(roots, [-1, 1], atol=1e-12)


def test_univariate_square_and_linear():
    assert [p.x for p in solve_univariate(W(0, {(2,): 1}))] == [(0j,)]
    assert solve_univariate(W(0, {(1,): 5})) == []
    with pytest.raises(CriticalFamilyError):
        solve_univariate(W(0, {}))


def test_companion_roots_against_sympy():
    coeffs = [6, -5, -2, 1]  # (t - 1)(t + 2)(t - 3)
    t = sp.Symbol("t")
    expected = sorted(float(r) for r in sp.solve(sum(c * t**i for i, c in enumerate(coeffs)), t))
    assert np.allclose(sorted(companion_roots(coeffs).real), expected)


def test_newton_unique_point():
    res = solve_newton(W(1, {(1, 1): 2}), default_starts(1, 8, radius=0.1))
    assert len(res.points) == 1
    assert np.allclose(res.points[0].x, 0)
    assert res.points[0].kind is Kind.ISOLATED


def test_newton_family_on_line():
    res = solve_newton(W(1, {(2, 0): 1}), default_starts(1, 12))
    assert len(res.points) > 1
    for p in res.points:
        assert abs(p.x[0]) <= 1e-10
        assert p.kind is Kind.FAMILY_MEMBER
        assert p.residual <= 1e-10


def test_newton_no_critical_points():
    res = solve_newton(W(0, {(1,): 1}), default_starts(0, 8))
    assert res.points == []
    assert len(res.failures) == 8


def test_newton_degenerate_cubic_point():
    # W = x0^2 + 3 x0^2 x1: critical line x0 = 0; Newton drifts to the degenerate (0, -1/3)
    Wp = build_combinatorial(GeometricPotential(1, {(3, 1): 1, (2, 0): 1}))
    res = solve_newton(Wp, default_starts(1, 16))
    assert res.points
    for p in res.points:
        assert abs(p.x[0]) < 1e-10
        assert max(abs(v) for v in gradient(Wp.to_float(), p.x)) <= 1e-10


def test_newton_matches_univariate():
    roots = [0.5, -0.3 + 0.4j, 0.1j - 0.8]
    dcoeffs = np.poly(roots)[::-1]
    Wp = W(0, {(d + 1,): complex(c) / (d + 1) for d, c in enumerate(dcoeffs)}, Mode.FLOAT)
    a = sorted((p.x[0] for p in solve_univariate(Wp)), key=lambda z: (z.real, z.imag))
    b = sorted((p.x[0] for p in solve_newton(Wp, default_starts(0, 128))), key=lambda z: (z.real, z.imag))
    assert len(a) == len(b) == 3
    assert np.allclose(a, b, atol=1e-8)


def test_newton_rejects_bad_tol():
    with pytest.raises(ValueError):
        solve_newton(W(0, {(2,): 1}), tol=0)


def test_default_starts_in_polydisc():
    s = default_starts(2, 100, radius=2.0, seed=3)
    assert s.shape == (100, 3)
    assert np.all(np.abs(s) <= 2.0)
    assert np.array_equal(s, default_starts(2, 100, radius=2.0, seed=3))

import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from laufer.laurent import Mode
from laufer.linalg import exact_nullspace, exact_rank, float_rank
from laufer.potential import GeometricPotential, NotNormalizedError
from laufer.superpotential import (
    HessianMatrix,
    Superpotential,
    build_combinatorial,
    build_residue,
    corank,
    gradient,
    hessian,
    reduce_derivative,
    reduce_derivatives,
    w_basis,
)


def W(n, monomials, mode=Mode.EXACT):
    return Superpotential(n, monomials, mode)


def brute_force_w(n, d, k):
    """Enumerate every ordered tuple in {0..n}^d directly."""
    out = {}
    for tup in itertools.product(range(n + 1), repeat=d):
        if sum(tup) == k:
            alpha = tuple(tup.count(i) for i in range(n + 1))
            out[alpha] = out.get(alpha, 0) + 1
    return W(n, out)


def sympy_residue_w(p):
    """Oracle: expand B(z, sum x_i z^i) with sympy, take the z^-1 coefficient."""
    z = sp.Symbol("z")
    xs = sp.symbols(f"x0:{p.n + 1}")
    w1 = sum(x * z**i for i, x in enumerate(xs))
    B = sum(sp.Rational(t.numerator, t.denominator) * z ** (-k - 1) * w1**d for (d, k), t in p.terms.items())
    res = sp.expand(sp.expand(B) * z).coeff(z, 0)
    out = {}
    for mono, c in sp.Poly(res, *xs).terms() if res != 0 else []:
        out[mono] = Fraction(int(c.p), int(c.q))
    return W(p.n, out)


@pytest.mark.parametrize(
    "n, terms, expected",
    [
        (1, {(2, 1): 1}, {(1, 1): 2}),
        (2, {(2, 2): 1}, {(0, 2, 0): 1, (1, 0, 1): 2}),
        (1, {}, {}),
        (0, {(3, 0): Fraction(2, 7)}, {(3,): Fraction(2, 7)}),
    ],
)
def test_both_routes_on_examples(n, terms, expected):
    p = GeometricPotential(n, terms)
    assert build_combinatorial(p) == W(n, expected)
    assert build_residue(p) == W(n, expected)


@pytest.mark.parametrize("n, d", [(n, d) for n in range(4) for d in range(1, 5)])
def test_w_basis_matches_enumeration(n, d):
    for k in range(d * n + 1):
        assert w_basis(n, d, k) == brute_force_w(n, d, k)


def test_w_basis_base_cases():
    assert w_basis(2, 0, 0) == W(2, {(0, 0, 0): 1})
    assert w_basis(2, 0, 1).is_zero()
    assert w_basis(2, 3, -1).is_zero()


potentials = st.integers(0, 3).flatmap(
    lambda n: st.builds(
        lambda terms: GeometricPotential(n, terms),
        st.dictionaries(
            st.integers(1, 4).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, d * n))),
            st.fractions(min_value=-9, max_value=9, max_denominator=9),
            max_size=5,
        ),
    )
)


@settings(max_examples=60, deadline=None)
@given(potentials)
def test_routes_match_sympy(p):
    expected = sympy_residue_w(p)
    assert build_combinatorial(p) == expected
    assert build_residue(p) == expected


@settings(max_examples=60, deadline=None)
@given(potentials)
def test_homogeneity(p):
    Wp = build_combinatorial(p)
    weights = {(sum(a), sum(i * ai for i, ai in enumerate(a))) for a in Wp.monomials}
    assert weights <= set(p.terms)


def test_routes_reject_unnormalized():
    p = GeometricPotential(1, {(1, 3): 1})
    with pytest.raises(NotNormalizedError):
        build_combinatorial(p)
    with pytest.raises(NotNormalizedError):
        build_residue(p)


def test_reduce_derivative_examples():
    assert reduce_derivative(2, 1, 0) == (2, 1, 1)
    assert w_basis(1, 2, 1).derivative(0) == w_basis(1, 1, 1).scale(2)
    assert reduce_derivative(1, 0, 0) == (1, 0, 0)
    assert w_basis(0, 1, 0).derivative(0) == w_basis(0, 0, 0)


@pytest.mark.parametrize("n, d", [(n, d) for n in range(4) for d in range(1, 5)])
def test_derivative_identity_against_sympy(n, d):
    xs = sp.symbols(f"x0:{n + 1}")
    for k in range(d * n + 1):
        poly = sum(c * sp.prod([x**a for x, a in zip(xs, alpha)]) for alpha, c in w_basis(n, d, k).monomials.items())
        for js in itertools.chain.from_iterable(itertools.product(range(n + 1), repeat=l) for l in (1, 2)):
            factor, d2, k2 = reduce_derivatives(d, k, js)
            lhs = sp.expand(sp.diff(poly, *[xs[j] for j in js]))
            if d2 < 0:
                assert lhs == 0
                continue
            rhs = sum(
                factor * c * sp.prod([x**a for x, a in zip(xs, alpha)])
                for alpha, c in w_basis(n, d2, k2).monomials.items()
            )
            assert sp.expand(lhs - rhs) == 0


@pytest.mark.parametrize(
    "Wp, x, grad",
    [
        (W(1, {(1, 1): 2}), (1, 3), [6, 2]),
        (W(1, {}), (5, 7), [0, 0]),
        (W(1, {(2, 0): 1}), (0, Fraction(9, 4)), [0, 0]),
    ],
)
def test_gradient_examples(Wp, x, grad):
    assert gradient(Wp, x) == grad


@pytest.mark.parametrize(
    "Wp, H, r",
    [
        (W(1, {(1, 1): 2}), [[0, 2], [2, 0]], 0),
        (W(1, {(2, 0): 1}), [[2, 0], [0, 0]], 1),
        (W(2, {}), [[0] * 3] * 3, 3),
    ],
)
def test_hessian_and_corank_examples(Wp, H, r):
    for x in [(0,) * (Wp.n + 1), tuple(range(1, Wp.n + 2))]:
        Hx = hessian(Wp, x)
        assert Hx.tolist() == H
        assert corank(Hx) == r


def test_gradient_rejects_bad_points():
    with pytest.raises(ValueError):
        gradient(W(1, {(1, 1): 2}), (1, 2, 3))
    with pytest.raises(TypeError):
        gradient(W(1, {(1, 1): 2}), (0.5, 1))


@settings(max_examples=40, deadline=None)
@given(potentials, st.data())
def test_hessian_symmetric_exact(p, data):
    Wp = build_combinatorial(p)
    x = data.draw(st.lists(st.fractions(-3, 3, max_denominator=5), min_size=p.n + 1, max_size=p.n + 1))
    H = hessian(Wp, x)
    assert H.is_symmetric()
    # Jacobian of the gradient, entry by entry
    for i in range(p.n + 1):
        assert [Wp.derivative(i).derivative(j).evaluate(x) for j in range(p.n + 1)] == list(H.entries[i])


@settings(max_examples=40, deadline=None)
@given(
    st.integers(0, 4).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.dictionaries(st.integers(0, 2 * n), st.fractions(-9, 9, max_denominator=9), max_size=2 * n + 1),
        )
    )
)
def test_quadratic_hessian_is_constant_hankel(nt):
    n, tk = nt
    p = GeometricPotential(n, {(2, k): t for k, t in tk.items()})
    Wp = build_combinatorial(p)
    H0 = hessian(Wp, [0] * (n + 1))
    H1 = hessian(Wp, list(range(n + 1)))
    assert H0 == H1
    for i in range(n + 1):
        for j in range(n + 1):
            assert H0[i, j] == 2 * tk.get(i + j, 0)
    M = sp.Matrix(n + 1, n + 1, lambda i, j: sp.Rational(str(H0[i, j])))
    assert corank(H0) == n + 1 - M.rank()


def test_float_gradient_finite_differences():
    rng = np.random.default_rng(7)
    p = GeometricPotential(2, {(3, 2): 1, (4, 5): Fraction(-2, 3), (2, 1): 5, (1, 2): 1}).to_float()
    Wp = build_combinatorial(p)
    h = 1e-5
    for _ in range(20):
        x = np.sqrt(rng.random(3)) * np.exp(2j * np.pi * rng.random(3))
        g = np.array(gradient(Wp, tuple(x)))
        fd = np.array(
            [(Wp.evaluate(tuple(x + h * e)) - Wp.evaluate(tuple(x - h * e))) / (2 * h) for e in np.eye(3)]
        )
        assert np.max(np.abs(fd - g)) <= 1e-6 * np.max(np.abs(g))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=4, max_size=4), min_size=1, max_size=5))
def test_exact_rank_and_nullspace_match_sympy(rows):
    M = sp.Matrix([[sp.Rational(str(v)) for v in r] for r in rows])
    assert exact_rank(rows) == M.rank()
    basis = exact_nullspace(rows)
    assert len(basis) == 4 - M.rank()
    for v in basis:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


def test_float_rank_threshold_and_flag():
    assert float_rank(np.diag([1.0, 1e-9])) == (1, True)
    assert float_rank(np.diag([1.0, 1e-3])) == (2, False)
    assert float_rank(np.zeros((2, 2))) == (0, False)
    # against an outside scale a uniformly tiny matrix is numerically zero
    assert float_rank(np.eye(2) * 1e-20, scale=1.0)[0] == 0


def test_float_corank_of_hessian():
    H = HessianMatrix(((2 + 0j, 0j), (0j, 0j)), Mode.FLOAT)
    assert corank(H) == 1

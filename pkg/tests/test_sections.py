from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laufer.critical import solve_quadratic
from laufer.laurent import LaurentPoly, Mode
from laufer.potential import GeometricPotential
from laufer.sections import (
    ObstructionError,
    SectionCurve,
    reconstruct,
    u1_contour,
    verify_gluing,
    window_identity,
)
from laufer.superpotential import build_combinatorial, gradient, hessian

ZERO = LaurentPoly({})


def test_zero_section_of_quadratic():
    s = reconstruct(GeometricPotential(1, {(2, 1): 1}), (0, 0))
    assert s.omega2_u0 == ZERO and s.omega2_u1 == ZERO
    assert verify_gluing(GeometricPotential(1, {(2, 1): 1}), s).ok


@pytest.mark.parametrize("a, b, c", [(1, 1, 0), (1, 1, Fraction(-1, 3)), (Fraction(2, 5), -3, 7)])
def test_cubic_family_sections(a, b, c):
    p = GeometricPotential(1, {(3, 1): a, (2, 0): b})
    s = reconstruct(p, (0, c))
    assert s.omega2_u0 == LaurentPoly({0: -(3 * a * c * c + 2 * b * c)})
    assert s.omega2_u1 == ZERO
    assert verify_gluing(p, s).ok


def test_obstruction_reports_offending_term():
    with pytest.raises(ObstructionError) as info:
        reconstruct(GeometricPotential(1, {(2, 0): 1}), (1, 0))
    assert info.value.offending == LaurentPoly({2: 2})


def test_non_strict_returns_raw_data():
    p = GeometricPotential(1, {(2, 0): 1})
    s = reconstruct(p, (1, 0), strict=False)
    report = verify_gluing(p, s)
    assert not report.ok
    assert {v.kind for v in report.violations} == {"negative exponent on U1"}


def test_hand_built_pole_on_u0():
    p = GeometricPotential(1, {(2, 1): 1})
    s = SectionCurve(1, (Fraction(0), Fraction(0)), LaurentPoly({-1: 1}), ZERO)
    report = verify_gluing(p, s)
    assert not report.ok
    assert ("negative exponent on U0", -1) in {(v.kind, v.exponent) for v in report.violations}


def test_verify_never_raises_on_unnormalized():
    p = GeometricPotential(1, {(2, 9): 1})
    s = SectionCurve(1, (Fraction(0), Fraction(0)), ZERO, ZERO)
    report = verify_gluing(p, s)
    assert not report.ok


def test_perturbed_float_section_shows_gradient():
    p = GeometricPotential(1, {(3, 1): 1, (2, 0): 1}).to_float()
    c = 0.4
    x = (1e-3, c)
    s = reconstruct(p, x, strict=False)
    report = verify_gluing(p, s)
    assert not report.ok
    grad = gradient(build_combinatorial(p), x)
    mags = {v.exponent: v.magnitude for v in report.violations if v.kind == "negative exponent on U1"}
    # the z'^{-m} coefficient on U1 is dW/dx_{n+1-m}
    assert mags
    for m, mag in mags.items():
        assert mag == pytest.approx(abs(grad[p.n + 1 + m]), rel=1e-12)


def exact_critical_pairs():
    rng = np.random.default_rng(11)
    out = []
    for n in range(4):
        for _ in range(6):
            ks = rng.choice(2 * n + 1, size=min(2, 2 * n + 1), replace=False)
            terms = {(2, int(k)): int(rng.integers(-4, 5)) for k in ks}
            p = GeometricPotential(n, terms)
            for pt in solve_quadratic(build_combinatorial(p)).samples():
                out.append((p, pt.x))
    return out


@pytest.mark.parametrize("p, x", exact_critical_pairs())
def test_every_exact_critical_point_glues(p, x):
    s = reconstruct(p, x, cross_check=True)
    assert verify_gluing(p, s).ok
    assert s.parameters() == tuple(x)


def test_u1_contour_matches_gluing():
    p = GeometricPotential(2, {(3, 2): 1, (2, 0): 1})
    x = (0, 0, 5)
    s = reconstruct(p, x)
    assert u1_contour(p, x) == s.omega2_u1


small = st.fractions(-3, 3, max_denominator=4)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.data())
def test_window_identity_first_derivative(n, data):
    terms = data.draw(
        st.dictionaries(
            st.integers(1, 4).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, d * n))), small, max_size=4
        )
    )
    p = GeometricPotential(n, terms)
    x = data.draw(st.lists(small, min_size=n + 1, max_size=n + 1))
    window, rest = window_identity(p, x, 1)
    grad = gradient(build_combinatorial(p), x)
    assert window == LaurentPoly({-j - 1: g for j, g in enumerate(grad)})
    assert rest.is_zero() or rest.max_exp < -n - 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.data())
def test_window_identity_second_derivative_is_hankel(n, data):
    terms = data.draw(
        st.dictionaries(
            st.integers(1, 4).flatmap(lambda d: st.tuples(st.just(d), st.integers(0, d * n))), small, max_size=4
        )
    )
    p = GeometricPotential(n, terms)
    x = data.draw(st.lists(small, min_size=n + 1, max_size=n + 1))
    window, rest = window_identity(p, x, 2)
    H = hessian(build_combinatorial(p), x)
    for i in range(n + 1):
        for j in range(n + 1):
            assert H[i, j] == window[-(i + j) - 1]
    assert rest.is_zero() or rest.max_exp < -2 * n - 1

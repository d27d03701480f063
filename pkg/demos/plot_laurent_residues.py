"""
Laurent polynomials and residues
================================

Exact Laurent arithmetic is the substrate for everything else. Contour
integrals around the origin reduce to picking coefficients.
"""

from fractions import Fraction

from laufer.laurent import LaurentPoly, Mode, cauchy_projection, invert_chart, residue, split_parts

# a Laurent polynomial is a map exponent -> coefficient
f = LaurentPoly({-2: 3, -1: Fraction(1, 2), 0: 1, 3: -4})
print("f        =", f)

# the residue at 0 is the z^-1 coefficient
print("res f    =", residue(f))

# the Cauchy kernel keeps the holomorphic part
principal, holo = split_parts(f)
print("principal:", principal)
print("holo     :", holo, "==", cauchy_projection(f))

# the other chart of P^1: z -> 1/z
print("f(1/z')  =", invert_chart(f))

# products stay exact
g = LaurentPoly({-1: 1, 1: 1})
print("f * g    =", f * g)

# float mode prunes coefficients far below the largest one
h = LaurentPoly({0: 1.0, 1: 1e-14, 2: 2.5}, Mode.FLOAT)
print("pruned   =", h)

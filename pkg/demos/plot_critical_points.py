"""
Finding critical points
=======================

Quadratic superpotentials are solved exactly through a kernel computation,
one-variable ones through a companion matrix, and the rest with Newton's
method from random starts.
"""

from fractions import Fraction

import numpy as np

from laufer.critical import default_starts, solve_newton, solve_quadratic, solve_univariate
from laufer.potential import GeometricPotential
from laufer.superpotential import build_combinatorial

# quadratic: the critical locus is the kernel of a Hankel matrix
W = build_combinatorial(GeometricPotential(2, {(2, 4): 1, (2, 3): -2}))
locus = solve_quadratic(W)
print("kernel dimension:", locus.dimension)
for v in locus.kernel:
    print("  basis vector", v)

# n = 0: W is a polynomial in one variable
W1 = build_combinatorial(GeometricPotential(0, {(3, 0): Fraction(1, 3), (1, 0): -1}))
print("univariate roots:", [pt.x[0] for pt in solve_univariate(W1)])

# cubic with a line of critical points x0 = 0
W2 = build_combinatorial(GeometricPotential(1, {(3, 1): 1, (2, 0): 1}))
res = solve_newton(W2, default_starts(1, 16, seed=1))
print(f"newton: {len(res.points)} distinct points, {len(res.failures)} failed starts")
for pt in res.points[:4]:
    print("  ", np.round(pt.x, 6), pt.kind.value)

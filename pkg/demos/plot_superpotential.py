"""
Superpotential from a geometric potential
=========================================

The potential B(z, w) = sum t_d^(k) z^(-k-1) w^d defines a polynomial W on
the space of sections w(z) = x_0 + x_1 z + ... + x_n z^n. Two independent
constructions must agree.
"""

from fractions import Fraction

from laufer.potential import GeometricPotential, normalize
from laufer.superpotential import build_combinatorial, build_residue, gradient, hessian, corank

# terms outside the window 0 <= k <= dn are absorbed by coordinate changes
raw = GeometricPotential(2, {(2, 1): 1, (3, 4): Fraction(1, 3), (1, -2): 7, (2, 9): 5})
p, log = normalize(raw)
for change in log:
    print("absorbed:", change)
print("kept    :", p.terms)

# counting ordered tuples versus expanding the residue
W = build_combinatorial(p)
print("W =", W)
print("routes agree:", W == build_residue(p))

# gradient and Hessian at a rational point
x = (1, Fraction(-1, 2), 2)
print("dW =", gradient(W, x))
H = hessian(W, x)
for row in H.tolist():
    print("   ", row)
print("corank:", corank(H))

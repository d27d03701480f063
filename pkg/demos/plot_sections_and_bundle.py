"""
Sections, gluing and the normal bundle
======================================

At a critical point the section extends over both charts of P^1. Its normal
bundle splits as O(a) + O(-2-a), and the Hessian corank r predicts a = r - 1.
"""

from fractions import Fraction

from laufer.bundle import ferrari_check, h0_oracle, normal_transition
from laufer.potential import GeometricPotential
from laufer.sections import ObstructionError, reconstruct, verify_gluing

p = GeometricPotential(1, {(3, 1): 1, (2, 0): 1})

# the line x0 = 0 is critical; the corank jumps at c = -1/3
for c in (Fraction(0), Fraction(1), Fraction(-1, 3)):
    s = reconstruct(p, (0, c))
    report = verify_gluing(p, s)
    res = ferrari_check(p, (0, c))
    print(
        f"c = {str(c):>5}  w2 = {s.omega2_u0}  glues = {report.ok}  "
        f"r = {res.hessian_corank}  h0 = {res.oracle_h0}  splitting = {res.verified}"
    )

# the transition matrix has determinant z^2
M = normal_transition(p, (0, Fraction(-1, 3)))
print("beta =", M.beta, "  det =", M.determinant(), "  h0 =", h0_oracle(M))

# away from the critical locus the U1 chart picks up poles
try:
    reconstruct(GeometricPotential(1, {(2, 0): 1}), (1, 0))
except ObstructionError as exc:
    print("obstruction:", exc.offending)

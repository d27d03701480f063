"""
Sweeping a coupling constant
============================

Vary one coefficient over a grid and watch the splitting type jump where the
Hessian loses rank.
"""

from laufer.laurent import Mode
from laufer.pipeline import SweepSpec, analyze, format_report, format_tsv, parse_range, sweep
from laufer.potential import GeometricPotential

base = GeometricPotential(2, {(2, 4): 1})
spec = SweepSpec(base, ((2, 2),), (parse_range("-2:2:5", Mode.EXACT),))
print(format_tsv(spec, sweep(spec)))

# full report for a single potential
print(format_report(analyze(base.with_term(2, 2, 0))))

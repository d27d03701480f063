"""Sections and normal-bundle splittings of deformed rank-2 bundles on P^1."""

from .bundle import (
    BundleAnalysis,
    NotCriticalError,
    SplittingType,
    TransitionMatrix,
    ferrari_check,
    h0_oracle,
    normal_transition,
    splitting_from_h0,
)
from .critical import (
    CriticalFamilyError,
    CriticalLocus,
    CriticalPoint,
    Kind,
    solve_newton,
    solve_quadratic,
    solve_univariate,
)
from .laurent import LaurentPoly, Mode, ModeError
from .potential import GeometricPotential, NotNormalizedError, eval_along_section, normalize
from .sections import ObstructionError, SectionCurve, reconstruct, verify_gluing
from .superpotential import (
    HessianMatrix,
    Superpotential,
    build_combinatorial,
    build_residue,
    corank,
    gradient,
    hessian,
)

__version__ = "0.1.0"

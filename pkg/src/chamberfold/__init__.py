"""Tilings of reflection-group cones by the sets ``(1 - w)C``.

Exact (``Fraction``) arithmetic for crystallographic data, a float backend
with an absolute tolerance otherwise.
"""
from .chambers import (
    TileSolution,
    classify_chamber_point,
    distance,
    lightcone_classify,
    tile_membership,
)
from .coxeter import (
    GroupElement,
    GroupSpec,
    ReflectionGroup,
    build_group,
    canonical_word,
    enumerate_elements,
    is_regular,
    rank_one_minus,
)
from .errors import (
    BudgetExhausted,
    ChamberfoldError,
    NonCocompactWarning,
    PreconditionViolated,
    SpecError,
    UniquenessViolation,
)
from .solver import (
    SolverBudget,
    resolve_fixed_point,
    solve_affine,
    solve_hyperbolic_minus,
    solve_hyperbolic_plus,
    solve_spherical,
)
from .specfile import load_group, load_spec
from .structure import (
    adjacency_full,
    adjacency_lower,
    det_sum,
    kostant_decompose,
    regular_elements,
    v_vector,
)

__version__ = "0.1.0"

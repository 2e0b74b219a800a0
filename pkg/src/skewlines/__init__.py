"""Exact topological invariants of configurations of pairwise skew lines.

The package computes, over exact rational arithmetic: pair and triple
linking signs, triple tables and their canonical forms, chirality
obstructions, decomposition symbols, join constructions and their
classification, nonsingular point-set invariants, and the Drobotukhina
bracket polynomial of the projective line diagram.
"""

from .errors import SkewLinesError, ValidationError, ComputationError
from .geometry import (
    Configuration,
    LinePosition,
    OrientedLine,
    PointSet,
    Quadric,
    Vec3,
    canonical_semiorientation,
    configuration,
    line,
    line_quadric_position,
    lk_pair,
    lk_triple,
    mirror,
    mirror_point_set,
    parallelepiped_of_triple,
    point_set,
    quadric_through,
    skew,
    validate_pointset,
    vec,
)
from .invariants import (
    ChiralityVerdict,
    TripleTable,
    canonical_table,
    chirality_certificate,
    class_epsilon,
    linking_equivalence_partition,
    podkorytov_exists,
    pointset_cyclic_invariant,
    pointset_skew_triple_sum,
    triple_sum,
    triple_table,
)
from .symbols import DecompSymbol, decompose, parse_symbol, symbol_to_table
from .constructions import (
    AbstractConfiguration,
    build_symbol,
    jc,
    joins_rigidly_isotopic,
    mirror_permutation,
    perturb,
    reversed_permutation,
    ruled_family,
    stable_equivalent,
    suspension,
)
from .bracket import (
    BracketConvention,
    LaurentPoly,
    calibrate,
    default_convention,
    drobotukhina,
    find_generic_direction,
    mirror_poly,
    project,
    state_sum,
)
from .classify import (
    JoinCluster,
    Profile,
    classify_joins,
    five_line_sums,
    identify,
    ordered_join_classes,
    profile,
    run_golden_checks,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

"""Two-dimensional (array) pattern languages.

Grids and their partial concatenations, array patterns, substitutions with
column-row and row-column assembly, membership for the h/p/r/c/rc modes,
closure constructions, and a bounded enumeration oracle.
"""

from .constructions import ExpansionSpec, concat_pattern, expand, intersect_h, transfer
from .errors import (
    ArrayPatError,
    CapacityError,
    ConfigurationError,
    DomainError,
    FormatError,
    IncompleteSubstitutionError,
    MorphismError,
    UnsupportedOperationError,
)
from .grid import (
    EMPTY,
    UNDEFINED,
    GeomOp,
    Grid,
    col_concat,
    conjugate,
    format_grid,
    parse_grid,
    project,
    row_concat,
    subgrid,
    transform,
)
from .membership import MembershipAnswer, Mode, decide, verify_witness
from .oracle import (
    Bounds,
    GridSet,
    LangFragment,
    distinguish,
    enumerate_language,
    refute_closure,
    set_op,
    shortest_members,
)
from .pattern import (
    Pattern,
    canonicalize,
    enumerate_patterns,
    equivalent,
    format_pattern,
    parse_pattern,
    transform_pattern,
)
from .substitution import (
    Substitution,
    UniformDims,
    apply_morphism,
    assemble_cr,
    assemble_rc,
    compose_uniform,
    format_substitution,
    parse_substitution,
    uniform_dims,
)

__version__ = "0.1.0"

__all__ = [
    "EMPTY",
    "UNDEFINED",
    "ArrayPatError",
    "Bounds",
    "CapacityError",
    "ConfigurationError",
    "DomainError",
    "ExpansionSpec",
    "FormatError",
    "GeomOp",
    "Grid",
    "GridSet",
    "IncompleteSubstitutionError",
    "LangFragment",
    "MembershipAnswer",
    "Mode",
    "MorphismError",
    "Pattern",
    "Substitution",
    "UniformDims",
    "UnsupportedOperationError",
    "apply_morphism",
    "assemble_cr",
    "assemble_rc",
    "canonicalize",
    "col_concat",
    "compose_uniform",
    "concat_pattern",
    "conjugate",
    "decide",
    "distinguish",
    "enumerate_language",
    "enumerate_patterns",
    "equivalent",
    "expand",
    "format_grid",
    "format_pattern",
    "format_substitution",
    "intersect_h",
    "parse_grid",
    "parse_pattern",
    "parse_substitution",
    "project",
    "refute_closure",
    "row_concat",
    "set_op",
    "shortest_members",
    "subgrid",
    "transfer",
    "transform",
    "transform_pattern",
    "uniform_dims",
    "verify_witness",
]

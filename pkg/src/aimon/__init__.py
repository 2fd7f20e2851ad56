"""Computations with the alternating inverse monoid and its monotone submonoids."""
from .perm import (
    MAX_N,
    DimensionError,
    Parity,
    PartialPerm,
    PreconditionError,
    ResourceError,
    completion,
    compose,
    gaps,
    inverse,
    is_monotone,
    is_order_preserving,
    is_order_reversing,
    parse_perm,
    format_perm,
    rank,
    reverse,
    sign,
)
from .elements import ElementSet
from .monoids import (
    FormulaDomainError,
    MonoidId,
    MonoidSpec,
    build_In_G,
    cardinality_formula,
    contains,
    contains_by_oracle,
    enumerate_monoid,
    format_spec,
    parse_spec,
    rank_level_count,
)

__version__ = "0.1.0"

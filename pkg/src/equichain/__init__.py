"""Finite-horizon analysis of invariant chains of cones, monoids and monomial ideals.

Everything is exact: vectors hold :class:`fractions.Fraction` entries and every
closure-membership answer carries a certificate that can be replayed.
"""

from .chains import (
    DEFAULT_HORIZON,
    Chain,
    InternalInconsistency,
    LocalGlobalReport,
    bind,
    check_invariance,
    expand,
    limit_generators,
    local_global_report,
    saturation_check,
    stability_index,
    support_bound,
)
from .exact import AmbientError, DimensionError, EquichainError, Monomial, RationalVector, canonical
from .framework import check_closure_axioms, check_compatibility, check_consistency, check_local_finiteness
from .maps import MapFamily, PiMap, count_maps, enumerate_maps, orbit, truncated_orbit
from .oracles import ClosureKind, Membership, closure_contains, closure_equal, cone_contains, ideal_contains, monoid_contains
from .spec import Ambient, ChainSpec, SpecError
from .specfile import dumps, loads, parse_spec

__all__ = [
    "DEFAULT_HORIZON", "Chain", "InternalInconsistency", "LocalGlobalReport", "bind", "check_invariance",
    "expand", "limit_generators", "local_global_report", "saturation_check", "stability_index",
    "support_bound", "AmbientError", "DimensionError", "EquichainError", "Monomial", "RationalVector",
    "canonical", "check_closure_axioms", "check_compatibility", "check_consistency",
    "check_local_finiteness", "MapFamily", "PiMap", "count_maps", "enumerate_maps", "orbit",
    "truncated_orbit", "ClosureKind", "Membership", "closure_contains", "closure_equal", "cone_contains",
    "ideal_contains", "monoid_contains", "Ambient", "ChainSpec", "SpecError", "dumps", "loads", "parse_spec",
]
__version__ = "0.1.0"

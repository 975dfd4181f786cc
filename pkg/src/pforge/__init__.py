"""pforge: construct and verify parameters for prime-order pairing-friendly
elliptic curves with prescribed embedding degree."""

__version__ = "0.1.0"

from .curve import CurveRecord, RecordStatus, embedding_degree, verify_record
from .families import (
    FamilyDescriptor,
    analyze_feasibility,
    builtin_catalog,
    family_by_name,
    filter_discriminant_k10,
    instantiate,
    verify_family,
)
from .intpoly import IntPoly, cyclotomic, parse_poly
from .pell import (
    PellProblem,
    QuadraticInteger,
    base_solutions,
    congruence_unit,
    fundamental_unit,
    solutions,
)
from .search import SearchConfig, recover_x_from_q, run_search

__all__ = [
    "CurveRecord",
    "FamilyDescriptor",
    "IntPoly",
    "PellProblem",
    "QuadraticInteger",
    "RecordStatus",
    "SearchConfig",
    "analyze_feasibility",
    "base_solutions",
    "builtin_catalog",
    "congruence_unit",
    "cyclotomic",
    "embedding_degree",
    "family_by_name",
    "filter_discriminant_k10",
    "fundamental_unit",
    "instantiate",
    "parse_poly",
    "recover_x_from_q",
    "run_search",
    "solutions",
    "verify_family",
    "verify_record",
]

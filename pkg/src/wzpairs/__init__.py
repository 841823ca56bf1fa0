"""Wilf-Zeilberger pairs for Ramanujan-type 1/pi series."""

from .ansatz import Family, discover, run_candidate, search, solve_H
from .catalog import CatalogEntry, builtin_catalog, get_entry, load_pairs, save_pairs
from .dsl import ParseError, parse_rational_function, parse_term, print_term
from .hyperterm import HyperTerm, PochFactor, pole_prefilter, shift_quotient, terminating_prefilter
from .verify import WZPair, check_wz_exact, match_pi, sum_series, telescope_partial, verify_pair

__version__ = "0.1.0"

__all__ = [
    "CatalogEntry", "Family", "HyperTerm", "ParseError", "PochFactor", "WZPair", "builtin_catalog",
    "check_wz_exact", "discover", "get_entry", "load_pairs", "match_pi", "parse_rational_function",
    "parse_term", "pole_prefilter", "print_term", "run_candidate", "save_pairs", "search", "shift_quotient",
    "solve_H", "sum_series", "telescope_partial", "terminating_prefilter", "verify_pair",
]

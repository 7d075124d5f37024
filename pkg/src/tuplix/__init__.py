"""Tuplix calculus over cancellation meadows: normal forms, equality,
flux constraints and transfer networks."""

from .basic import (
    Alternative, BasicForm, clear, encapsulate, normalize, scalar_mul, select,
    simplify, sum_elim,
)
from .core import Attribute, Tuplix, attr, free_vars, substitute
from .equality import EqResult, Verdict, tuplix_eq
from .flux import kirchhoff, kirchhoff_t, sign_annotate, to_flat, to_signed
from .ftn import (
    FTN, UnitSpec, check_unit_spec, classify, compose_encapsulate, focus,
    reserve_chain, validate_ftn,
)
from .funcdef import apply_fd, beta_reduce, sum_fn_elim
from .logic import tand, timp, tnot, tor
from .meadow import Tri, eq_data, eval_data, is_zero, normalize_data, solve_linear
from .syntax import ParseError, format_tuplix, parse_data, parse_tuplix, parse_workspace

__all__ = [
    "Alternative", "Attribute", "BasicForm", "EqResult", "FTN", "ParseError", "Tri",
    "Tuplix", "UnitSpec", "Verdict", "apply_fd", "attr", "beta_reduce",
    "check_unit_spec", "classify", "clear", "compose_encapsulate", "encapsulate",
    "eq_data", "eval_data", "focus", "format_tuplix", "free_vars", "is_zero",
    "kirchhoff", "kirchhoff_t", "normalize", "normalize_data", "parse_data",
    "parse_tuplix", "parse_workspace", "reserve_chain", "scalar_mul", "select",
    "sign_annotate", "simplify", "solve_linear", "substitute", "sum_elim",
    "sum_fn_elim", "tand", "timp", "tnot", "to_flat", "to_signed", "tor",
    "tuplix_eq", "validate_ftn",
]

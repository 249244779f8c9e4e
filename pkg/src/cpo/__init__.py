"""Termination of higher-order rewrite rules with the computability path
ordering."""

from .engine import (RewriteSystem, Rule, SearchSpace, Verdict, check_system, prepare,
                     revalidate, search_parameters)
from .ordering import Context, Derivation, Goal, Variant, cpo, cpo2, cpo_typed, validate
from .precedence import Precedence, Status
from .syntax import parse_problem, parse_term, print_problem, print_term, print_type
from .terms import Abs, App, Arrow, Fun, Signature, Sort, Var, alpha_eq, app
from .trace import case_sequence, parse_compact, print_derivation
from .typeorder import TypeOrder, build_type_order

__all__ = [
    "Abs", "App", "Arrow", "Context", "Derivation", "Fun", "Goal", "Precedence",
    "RewriteSystem", "Rule", "SearchSpace", "Signature", "Sort", "Status", "TypeOrder",
    "Var", "Variant", "Verdict", "alpha_eq", "app", "build_type_order", "case_sequence",
    "check_system", "cpo", "cpo2", "cpo_typed", "parse_compact", "parse_problem",
    "parse_term", "prepare", "print_derivation", "print_problem", "print_term",
    "print_type", "revalidate", "search_parameters", "validate",
]

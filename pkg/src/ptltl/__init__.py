"""Model checking of transaction histories against past-time first-order temporal policies.

The main entry points are re-exported here; see the submodules for the rest.
"""

from .core import (
    TRUE, FALSE, And, App, Const, Count, Event, Exists, ExistsG, ForallG, ForallP,
    Historically, History, Implies, Not, Once, Or, Pred, Prev, Rel, Session, Since,
    Sort, TrueF, Var, apply_substitution, free_vars,
)
from .dp import check_dp
from .errors import (
    BudgetExceeded, CompileError, EmptyHistoryError, EngineCapabilityError,
    EvaluationError, GuardError, ParseError, PtltlError, SortError,
)
from .evaluate import Verdict, check, eval_at
from .guards import solutions
from .parser import (
    dump_history, format_formula, format_policy, parse_formula, parse_history,
    parse_policy,
)
from .partial import adhere, psat
from .constraints import satisfiable, to_smtlib

__version__ = "0.1.0"

__all__ = [
    "TRUE", "FALSE", "And", "App", "Const", "Count", "Event", "Exists", "ExistsG",
    "ForallG", "ForallP", "Historically", "History", "Implies", "Not", "Once", "Or",
    "Pred", "Prev", "Rel", "Session", "Since", "Sort", "TrueF", "Var",
    "apply_substitution", "free_vars", "check_dp", "BudgetExceeded", "CompileError",
    "EmptyHistoryError", "EngineCapabilityError", "EvaluationError", "GuardError",
    "ParseError", "PtltlError", "SortError", "Verdict", "check", "eval_at", "solutions",
    "dump_history", "format_formula", "format_policy", "parse_formula", "parse_history",
    "parse_policy", "adhere", "psat", "satisfiable", "to_smtlib",
]

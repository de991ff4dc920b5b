"""Constraint language: AST, evaluator and report trees."""

from .check import (
    CheckReport,
    ConstraintDef,
    ConstraintResult,
    add_constraint,
    check_container,
    check_element,
    compile_body,
    constraint_defs,
)
from .evaluate import Evaluator, eval_expr
from .expr import Bin, Call, Expr, Lit, Nav, Not, SelfRef, Var, parse_expr, to_text

__all__ = [
    "Bin", "Call", "CheckReport", "ConstraintDef", "ConstraintResult", "Evaluator",
    "Expr", "Lit", "Nav", "Not", "SelfRef", "Var", "add_constraint", "check_container",
    "check_element", "compile_body", "constraint_defs", "eval_expr", "parse_expr", "to_text",
]

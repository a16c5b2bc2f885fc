"""HOMFLY-PT skein calculus for links in lens spaces."""

from __future__ import annotations

from .poly import LaurentPoly, parse_poly
from .skein import (
    JExpression,
    ScriptResult,
    SkeinError,
    TrivialSymbol,
    eval_script,
    evaluate,
    expression_from_json,
    expression_to_json,
    reverse_expression,
    solve_skein,
    symbol_value,
    table_from_json,
    table_to_json,
    union_multiplier,
    unknot_value,
)

__all__ = [
    "JExpression",
    "LaurentPoly",
    "ScriptResult",
    "SkeinError",
    "TrivialSymbol",
    "eval_script",
    "evaluate",
    "expression_from_json",
    "expression_to_json",
    "parse_poly",
    "reverse_expression",
    "solve_skein",
    "symbol_value",
    "table_from_json",
    "table_to_json",
    "union_multiplier",
    "unknot_value",
]

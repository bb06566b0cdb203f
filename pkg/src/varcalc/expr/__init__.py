from .core import (
    INDEP,
    JET,
    ONE,
    SLOT,
    ZERO,
    Add,
    Expr,
    Mul,
    Neg,
    Node,
    Num,
    Pow,
    Symbol,
    Var,
    canonicalize,
    eval_at,
    free_symbols,
    substitute,
    sum_exprs,
)
from .parser import parse, parse_tree
from .printer import to_text
from .space import JetSpace, LatticeSpace, MultiIndex, multi_indices, unit

__all__ = [
    "INDEP", "JET", "SLOT", "ZERO", "ONE",
    "Expr", "Symbol", "Node", "Num", "Var", "Add", "Mul", "Pow", "Neg",
    "canonicalize", "eval_at", "free_symbols", "substitute", "sum_exprs",
    "parse", "parse_tree", "to_text",
    "JetSpace", "LatticeSpace", "MultiIndex", "multi_indices", "unit",
]

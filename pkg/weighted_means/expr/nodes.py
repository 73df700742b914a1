"""
Syntax tree of the expression language used for custom weights w(t, r) and
star boundaries rho(theta[, phi]).

Nodes are immutable. Source positions are kept for diagnostics only and do
not take part in equality, so a tree compares equal to the tree obtained by
printing and re-parsing it.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Tuple, Union

WEIGHT_VARIABLES = frozenset({"t", "r"})
BOUNDARY_2D_VARIABLES = frozenset({"theta"})
BOUNDARY_3D_VARIABLES = frozenset({"theta", "phi"})

CONSTANTS = ("pi", "e")

# name -> number of arguments
FUNCTIONS = {
    "log": 1,
    "exp": 1,
    "sin": 1,
    "cos": 1,
    "sqrt": 1,
    "abs": 1,
    "pow": 2,
}

BINARY_OPERATORS = ("+", "-", "*", "/", "^")


@dataclass(frozen=True)
class Number:
    value: float
    position: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Variable:
    name: str
    position: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Constant:
    name: str
    position: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class UnaryOp:
    op: str
    operand: "Expr"
    position: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "Expr"
    right: "Expr"
    position: int = field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Expr", ...]
    position: int = field(default=0, compare=False, repr=False)


Expr = Union[Number, Variable, Constant, UnaryOp, BinaryOp, Call]


def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def to_source(expr: Expr) -> str:
    """
    Print an expression back to source. Binary operations are fully
    parenthesised, so parsing the output gives back an equal tree.
    """
    if isinstance(expr, Number):
        return _format_number(expr.value)
    if isinstance(expr, (Variable, Constant)):
        return expr.name
    if isinstance(expr, UnaryOp):
        return f"-({to_source(expr.operand)})"
    if isinstance(expr, BinaryOp):
        return f"({to_source(expr.left)} {expr.op} {to_source(expr.right)})"
    if isinstance(expr, Call):
        args = ", ".join(to_source(a) for a in expr.args)
        return f"{expr.name}({args})"
    raise TypeError(f"Not an expression node: {expr!r}")


def variables(expr: Expr) -> FrozenSet[str]:
    """Names of the variables the expression depends on."""
    if isinstance(expr, Variable):
        return frozenset({expr.name})
    if isinstance(expr, UnaryOp):
        return variables(expr.operand)
    if isinstance(expr, BinaryOp):
        return variables(expr.left) | variables(expr.right)
    if isinstance(expr, Call):
        return frozenset().union(*(variables(a) for a in expr.args))
    return frozenset()

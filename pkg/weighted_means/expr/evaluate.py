"""
Vectorised evaluation of expression trees.

Bindings may be scalars or numpy arrays (broadcast together). Domain
violations raise ``ExprEvaluationError`` naming the offending
subexpression; evaluation never returns NaN or infinity silently.
"""

import math
from typing import Mapping, Union

import numpy as np

from weighted_means.expr.nodes import (
    BinaryOp,
    Call,
    Constant,
    Expr,
    Number,
    UnaryOp,
    Variable,
    to_source,
)

Value = Union[float, np.ndarray]

CONSTANT_VALUES = {"pi": math.pi, "e": math.e}

UNARY_FUNCTIONS = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "abs": np.abs,
}


class ExprEvaluationError(ArithmeticError):
    """
    Evaluation outside a function's domain, or a missing binding.

    Attributes
    ----------
    subexpression : str
        Printed form of the node that failed.
    """

    def __init__(self, message: str, subexpression: str):
        self.subexpression = subexpression
        super().__init__(f"{message} in {subexpression}")


def _fail(message: str, node: Expr):
    raise ExprEvaluationError(message, to_source(node))


def _power(base: np.ndarray, exponent: np.ndarray, node: Expr) -> np.ndarray:
    base, exponent = np.broadcast_arrays(base, exponent)
    if np.any((base == 0) & (exponent < 0)):
        _fail("Zero raised to a negative power", node)
    if np.any((base < 0) & (exponent != np.round(exponent))):
        _fail("Negative base with a non-integer exponent", node)
    return np.power(base, exponent)


def _evaluate(node: Expr, bindings: Mapping[str, np.ndarray]) -> np.ndarray:
    if isinstance(node, Number):
        return np.float64(node.value)
    if isinstance(node, Constant):
        return np.float64(CONSTANT_VALUES[node.name])
    if isinstance(node, Variable):
        if node.name not in bindings:
            _fail(f"No value bound to variable {node.name!r}", node)
        return bindings[node.name]
    if isinstance(node, UnaryOp):
        return -_evaluate(node.operand, bindings)
    if isinstance(node, BinaryOp):
        left = _evaluate(node.left, bindings)
        right = _evaluate(node.right, bindings)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if np.any(right == 0):
                _fail("Division by zero", node)
            return left / right
        return _power(left, right, node)
    if isinstance(node, Call):
        args = [_evaluate(a, bindings) for a in node.args]
        if node.name == "log":
            if np.any(args[0] <= 0):
                _fail("Logarithm of a nonpositive value", node)
            return np.log(args[0])
        if node.name == "sqrt":
            if np.any(args[0] < 0):
                _fail("Square root of a negative value", node)
            return np.sqrt(args[0])
        if node.name == "pow":
            return _power(args[0], args[1], node)
        return UNARY_FUNCTIONS[node.name](args[0])
    raise TypeError(f"Not an expression node: {node!r}")


def _evaluate_checked(
    node: Expr, bindings: Mapping[str, np.ndarray]
) -> np.ndarray:
    with np.errstate(all="ignore"):
        value = _evaluate(node, bindings)
    if not np.all(np.isfinite(value)):
        _fail("Result is not finite", node)
    return value


def evaluate(expr: Expr, bindings: Mapping[str, Value]) -> Value:
    """
    Evaluate an expression.

    Parameters
    ----------
    expr : Expr
        Parsed expression.
    bindings : dict
        Variable name to value. Array values are broadcast together.

    Returns
    -------
    float or np.ndarray
        A float if every binding is scalar, otherwise an array of the
        broadcast shape.

    Raises
    ------
    ExprEvaluationError
        On log of a nonpositive value, square root of a negative value,
        division by zero, 0 to a negative power, a negative base with a
        non-integer exponent, an overflowing result or a missing binding.
    """
    arrays = {
        name: np.asarray(value, dtype=np.float64)
        for name, value in bindings.items()
    }
    value = _evaluate_checked(expr, arrays)
    shape = np.broadcast_shapes(*(a.shape for a in arrays.values()), ())
    value = np.broadcast_to(value, shape)
    if value.ndim == 0:
        return float(value)
    return np.array(value)

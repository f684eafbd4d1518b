"""Tiny arithmetic expression language for user-supplied window functions.

Grammar: numbers, variables ``x1 .. x{n}``, ``pi``, the operators
``+ - * / ^`` (``^`` is power), parentheses, and the functions ``abs``,
``max``, ``min`` and ``sqrt``. Parsing uses Python's ``ast`` with a node
whitelist; evaluation is vectorised with numpy.
"""
from __future__ import annotations

import ast
import math
import re
from functools import reduce
from typing import Callable

import numpy as np

from .errors import ValidationError

_BINOPS = {
    ast.Add: np.add, ast.Sub: np.subtract, ast.Mult: np.multiply,
    ast.Div: np.divide, ast.Pow: np.power,
}
_FUNCS = {
    "abs": (np.abs, 1),
    "sqrt": (np.sqrt, 1),
    "max": (np.maximum, None),
    "min": (np.minimum, None),
}
_VAR = re.compile(r"^x([1-9][0-9]*)$")


def compile_expression(text: str, n_vars: int) -> Callable[[np.ndarray], np.ndarray]:
    """Compile ``text`` into a function of an ``(npts, n_vars)`` array."""
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ValidationError(f"cannot parse expression {text!r}: {exc.msg}") from None
    _validate(tree.body, n_vars)

    def fn(X: np.ndarray) -> np.ndarray:
        with np.errstate(all="ignore"):
            out = _eval(tree.body, X)
        return np.broadcast_to(np.asarray(out, dtype=float), (X.shape[0],)).copy()
    return fn


def _validate(node: ast.AST, n: int) -> None:
    if isinstance(node, ast.BinOp):
        if type(node.op) not in _BINOPS:
            raise ValidationError(f"operator {type(node.op).__name__} not allowed")
        _validate(node.left, n)
        _validate(node.right, n)
    elif isinstance(node, ast.UnaryOp):
        if not isinstance(node.op, (ast.UAdd, ast.USub)):
            raise ValidationError("only unary + and - are allowed")
        _validate(node.operand, n)
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCS or node.keywords:
            raise ValidationError(f"unknown function in expression: {ast.dump(node.func)}")
        arity = _FUNCS[node.func.id][1]
        if arity is not None and len(node.args) != arity:
            raise ValidationError(f"{node.func.id} takes {arity} argument(s)")
        if arity is None and len(node.args) < 2:
            raise ValidationError(f"{node.func.id} needs at least two arguments")
        for a in node.args:
            _validate(a, n)
    elif isinstance(node, ast.Name):
        if node.id == "pi":
            return
        m = _VAR.match(node.id)
        if not m or int(m.group(1)) > n:
            raise ValidationError(f"unknown variable {node.id!r}; use x1..x{n}")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)) or isinstance(node.value, bool):
            raise ValidationError(f"bad literal {node.value!r}")
    else:
        raise ValidationError(f"unsupported syntax: {type(node).__name__}")


def _eval(node: ast.AST, X: np.ndarray):
    if isinstance(node, ast.BinOp):
        return _BINOPS[type(node.op)](_eval(node.left, X), _eval(node.right, X))
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, X)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Call):
        f, _ = _FUNCS[node.func.id]
        args = [_eval(a, X) for a in node.args]
        return reduce(f, args) if len(args) > 1 else f(args[0])
    if isinstance(node, ast.Name):
        if node.id == "pi":
            return math.pi
        return X[:, int(node.id[1:]) - 1]
    return float(node.value)

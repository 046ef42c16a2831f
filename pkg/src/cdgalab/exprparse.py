"""Safe evaluation of the small literal languages used in model files.

Polynomials (``(t1+t2)*(t1*t2+1) - 4*t1*t2``), algebra elements
(``a1*b - 1/2*a2*b``) and Lie words (``[x1,[x1,x2]] - 2*[x2,x3]``) share one
grammar: ``+ - * /``, ``^`` or ``**`` for powers, integer literals, names, and
two-element square brackets for Lie brackets.  Parsing goes through
:mod:`ast`; nothing is ever executed.
"""
from __future__ import annotations

import ast
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Optional


class ExpressionError(ValueError):
    def __init__(self, message: str, text: str = "", offset: Optional[int] = None):
        self.text = text
        self.offset = offset
        where = f" at column {offset + 1}" if offset is not None else ""
        super().__init__(f"{message}{where} in {text!r}" if text else message)


@dataclass
class Semantics:
    """Callbacks giving meaning to parsed expressions.

    ``lift`` turns a Fraction into an element (used for ``x + 1``); it may be
    None when the target has no unit, e.g. Lie words.
    """

    name: Callable[[str], Any]
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    scale: Callable[[Fraction, Any], Any]
    lift: Optional[Callable[[Fraction], Any]] = None
    bracket: Optional[Callable[[Any, Any], Any]] = None
    power: Optional[Callable[[Any, int], Any]] = None


def _is_num(x) -> bool:
    return isinstance(x, Fraction)


def parse_expression(text: str, sem: Semantics):
    # ``^`` binds like ``**``, not like Python's xor
    src = text.strip().replace("^", "**")
    if not src:
        raise ExpressionError("empty expression", text)
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        off = (exc.offset - 1) if exc.offset else None
        raise ExpressionError(f"syntax error: {exc.msg}", text, off) from None

    def fail(node, msg):
        raise ExpressionError(msg, text, getattr(node, "col_offset", None))

    def add(a, b):
        if _is_num(a) and _is_num(b):
            return a + b
        if _is_num(a) or _is_num(b):
            if sem.lift is None:
                raise ExpressionError("cannot add a bare number to this kind of element", text)
            a = sem.lift(a) if _is_num(a) else a
            b = sem.lift(b) if _is_num(b) else b
        return sem.add(a, b)

    def neg(a):
        return -a if _is_num(a) else sem.scale(Fraction(-1), a)

    def mul(a, b):
        if _is_num(a) and _is_num(b):
            return a * b
        if _is_num(a):
            return sem.scale(a, b)
        if _is_num(b):
            return sem.scale(b, a)
        return sem.mul(a, b)

    def power(node, a, e):
        if not _is_num(e) or e.denominator != 1:
            fail(node, "exponent must be an integer")
        e = int(e)
        if _is_num(a):
            if e < 0 and a == 0:
                fail(node, "division by zero")
            return a ** e
        if sem.power is not None:
            try:
                return sem.power(a, e)
            except ValueError as exc:
                fail(node, str(exc))
        if e < 0:
            fail(node, "exponent must be a non-negative integer")
        if e == 0:
            if sem.lift is None:
                fail(node, "zeroth power needs a unit")
            return sem.lift(Fraction(1))
        out = a
        for _ in range(e - 1):
            out = sem.mul(out, a)
        return out

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, int):
                fail(node, "only integer literals are allowed")
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            try:
                return sem.name(node.id)
            except KeyError:
                fail(node, f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp):
            v = ev(node.operand)
            if isinstance(node.op, ast.USub):
                return neg(v)
            if isinstance(node.op, ast.UAdd):
                return v
            fail(node, "unsupported unary operator")
        if isinstance(node, ast.BinOp):
            a, b = ev(node.left), ev(node.right)
            op = node.op
            if isinstance(op, ast.Add):
                return add(a, b)
            if isinstance(op, ast.Sub):
                return add(a, neg(b))
            if isinstance(op, ast.Mult):
                return mul(a, b)
            if isinstance(op, ast.Div):
                if not _is_num(b):
                    fail(node, "division is only allowed by numbers")
                if b == 0:
                    fail(node, "division by zero")
                return a / b if _is_num(a) else sem.scale(1 / b, a)
            if isinstance(op, ast.Pow):
                return power(node, a, b)
            fail(node, "unsupported operator")
        if isinstance(node, ast.List):
            if sem.bracket is None:
                fail(node, "brackets are not allowed here")
            if len(node.elts) != 2:
                fail(node, "a bracket needs exactly two entries")
            a, b = ev(node.elts[0]), ev(node.elts[1])
            if _is_num(a) or _is_num(b):
                fail(node, "cannot bracket a bare number")
            return sem.bracket(a, b)
        fail(node, f"unsupported syntax {type(node).__name__}")

    return ev(tree)


def parse_fraction(s) -> Fraction:
    """Parse an exact scalar written as int or ``"num/den"``."""
    if isinstance(s, bool):
        raise ValueError("booleans are not numbers")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        try:
            return Fraction(s.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not an exact rational: {s!r}") from None
    raise ValueError(f"not an exact rational: {s!r}")


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"

"""Expression trees for the left-hand side Z(z) of an equation Z(z) = 0.

The grammar is deliberately small: rational constants, decimal constants
(promoted to BigFloat), the single variable ``z``, the four arithmetic
operators, rational-literal powers, ``exp`` and ``ln``.

Construction goes through the small smart constructors below, which fold
constant subtrees and a few safe identities (x+0, x*1, 0*x, u^0, u^1,
(u^a)^n). Nothing beyond that is simplified: coefficient correctness is
established by value, not by shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DomainError, ExpressionSyntaxError, UnknownSymbolError
from .scalars import (
    DEFAULT_PRECISION,
    BigFloat,
    Scalar,
    is_exact,
    ln as scalar_ln,
    exp as scalar_exp,
    format_scalar,
    operative_precision,
    power as scalar_power,
    to_bigfloat,
)


@dataclass(frozen=True)
class Constant:
    value: Scalar


@dataclass(frozen=True)
class Variable:
    pass


@dataclass(frozen=True)
class Add:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Sub:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Mul:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Div:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: Fraction


@dataclass(frozen=True)
class Exp:
    arg: "Expression"


@dataclass(frozen=True)
class Ln:
    arg: "Expression"


Expression = Union[Constant, Variable, Add, Sub, Mul, Div, Pow, Exp, Ln]

Z = Variable()

ZERO = Constant(Fraction(0))
ONE = Constant(Fraction(1))


def constant(value) -> Constant:
    if isinstance(value, int):
        value = Fraction(value)
    if not isinstance(value, (Fraction, BigFloat)):
        raise TypeError(f"constant must be a Scalar, got {type(value).__name__}")
    return Constant(value)


def _const_value(expr: Expression) -> Scalar | None:
    return expr.value if isinstance(expr, Constant) else None


def add(left: Expression, right: Expression) -> Expression:
    a, b = _const_value(left), _const_value(right)
    if a is not None and b is not None:
        return Constant(a + b)
    if a is not None and a == 0 and is_exact(a):
        return right
    if b is not None and b == 0 and is_exact(b):
        return left
    return Add(left, right)


def sub(left: Expression, right: Expression) -> Expression:
    a, b = _const_value(left), _const_value(right)
    if a is not None and b is not None:
        return Constant(a - b)
    if b is not None and b == 0 and is_exact(b):
        return left
    return Sub(left, right)


def mul(left: Expression, right: Expression) -> Expression:
    a, b = _const_value(left), _const_value(right)
    if a is not None and b is not None:
        return Constant(a * b)
    for c, other in ((a, right), (b, left)):
        if c is not None and is_exact(c):
            if c == 0:
                return ZERO
            if c == 1:
                return other
    return Mul(left, right)


def div(left: Expression, right: Expression) -> Expression:
    a, b = _const_value(left), _const_value(right)
    if b is not None and b != 0:
        if a is not None:
            return Constant(a / b)
        if b == 1 and is_exact(b):
            return left
    if a is not None and a == 0 and is_exact(a) and (b is None or b != 0):
        return ZERO
    return Div(left, right)


def pow_(base: Expression, exponent: Fraction | int) -> Expression:
    exponent = Fraction(exponent)
    if exponent == 0:
        return ONE
    if exponent == 1:
        return base
    c = _const_value(base)
    if c is not None and exponent.denominator == 1 and not (c == 0 and exponent < 0):
        return Constant(scalar_power(c, exponent))
    # (u^a)^n = u^(a*n) is exact for integer outer exponents
    if isinstance(base, Pow) and exponent.denominator == 1:
        return pow_(base.base, base.exponent * exponent)
    return Pow(base, exponent)


def exp_(arg: Expression) -> Expression:
    c = _const_value(arg)
    if c is not None and c == 0 and is_exact(c):
        return ONE
    return Exp(arg)


def ln_(arg: Expression) -> Expression:
    c = _const_value(arg)
    if c is not None and c == 1 and is_exact(c):
        return ZERO
    return Ln(arg)


def requires_float(expr: Expression) -> bool:
    """True when exact rational evaluation of *expr* is impossible:
    a decimal constant, a transcendental node, or a fractional power."""
    seen: set[int] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Constant):
            if isinstance(node.value, BigFloat):
                return True
        elif isinstance(node, (Exp, Ln)):
            return True
        elif isinstance(node, Pow):
            if node.exponent.denominator != 1:
                return True
            stack.append(node.base)
        elif isinstance(node, (Add, Sub, Mul, Div)):
            stack.append(node.left)
            stack.append(node.right)
    return False


# -- evaluation ------------------------------------------------------


def evaluate_many(exprs: "list[Expression]", at: Scalar, precision: int | None = None) -> "list[Scalar]":
    """Evaluate several expressions at one point, sharing work across
    their common subtrees (the coefficient chains overlap heavily)."""
    precision = operative_precision(at, default=precision or DEFAULT_PRECISION)
    float_mode = isinstance(at, BigFloat) or any(requires_float(e) for e in exprs)
    cache: dict[int, Scalar] = {}

    def walk(node: Expression) -> Scalar:
        key = id(node)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Constant):
            result = node.value
        elif isinstance(node, Variable):
            result = at
        elif isinstance(node, Add):
            result = walk(node.left) + walk(node.right)
        elif isinstance(node, Sub):
            result = walk(node.left) - walk(node.right)
        elif isinstance(node, Mul):
            result = walk(node.left) * walk(node.right)
        elif isinstance(node, Div):
            denominator = walk(node.right)
            if denominator == 0:
                raise DomainError.division_by_zero()
            result = walk(node.left) / denominator
        elif isinstance(node, Pow):
            result = scalar_power(walk(node.base), node.exponent, precision)
        elif isinstance(node, Exp):
            result = scalar_exp(walk(node.arg), precision)
        elif isinstance(node, Ln):
            result = scalar_ln(walk(node.arg), precision)
        else:
            raise TypeError(f"not an Expression node: {type(node).__name__}")
        cache[key] = result
        return result

    results = []
    for expr in exprs:
        value = walk(expr)
        if float_mode and isinstance(value, Fraction):
            value = to_bigfloat(value, precision)
        results.append(value)
    return results


def evaluate(expr: Expression, at: Scalar, precision: int | None = None) -> Scalar:
    """Evaluate *expr* with ``z = at``.

    The result is exact (a Fraction) whenever the input, every constant
    and every exponent allow it; otherwise it is a BigFloat at the
    operative precision (the anchor's precision if it is a BigFloat,
    else *precision*, default 128 bits).
    """
    return evaluate_many([expr], at, precision)[0]


# -- differentiation -------------------------------------------------


def differentiate(expr: Expression) -> Expression:
    """d(expr)/dz by the standard rules; constant subtrees fold."""
    cache: dict[int, Expression] = {}

    def walk(node: Expression) -> Expression:
        key = id(node)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Constant):
            result = ZERO
        elif isinstance(node, Variable):
            result = ONE
        elif isinstance(node, Add):
            result = add(walk(node.left), walk(node.right))
        elif isinstance(node, Sub):
            result = sub(walk(node.left), walk(node.right))
        elif isinstance(node, Mul):
            result = add(mul(walk(node.left), node.right), mul(node.left, walk(node.right)))
        elif isinstance(node, Div):
            numerator = sub(mul(walk(node.left), node.right), mul(node.left, walk(node.right)))
            result = div(numerator, pow_(node.right, 2))
        elif isinstance(node, Pow):
            result = mul(
                mul(constant(node.exponent), pow_(node.base, node.exponent - 1)),
                walk(node.base),
            )
        elif isinstance(node, Exp):
            result = mul(Exp(node.arg), walk(node.arg))
        elif isinstance(node, Ln):
            result = div(walk(node.arg), node.arg)
        else:
            raise TypeError(f"not an Expression node: {type(node).__name__}")
        cache[key] = result
        return result

    return walk(expr)


# -- parsing ---------------------------------------------------------

_OPERATOR_CHARS = set("+-*/^()")


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        self._scan()
        self.index = 0

    def _scan(self):
        text, n = self.text, len(self.text)
        i = 0
        while i < n:
            c = text[i]
            if c.isspace():
                i += 1
                continue
            if c in _OPERATOR_CHARS:
                self.tokens.append(("op", c, i))
                i += 1
                continue
            if c.isdigit() or c == ".":
                start = i
                while i < n and (text[i].isdigit() or text[i] == "."):
                    i += 1
                # scientific-notation suffix, e.g. 3.2e-10
                if i < n and text[i] in "eE" and "." in text[start:i]:
                    j = i + 1
                    if j < n and text[j] in "+-":
                        j += 1
                    if j < n and text[j].isdigit():
                        i = j
                        while i < n and text[i].isdigit():
                            i += 1
                lexeme = text[start:i]
                if lexeme.count(".") > 1 or lexeme == ".":
                    raise ExpressionSyntaxError(f"malformed number '{lexeme}'", start)
                self.tokens.append(("number", lexeme, start))
                continue
            if c.isalpha() or c == "_":
                start = i
                while i < n and (text[i].isalnum() or text[i] == "_"):
                    i += 1
                self.tokens.append(("ident", text[start:i], start))
                continue
            raise ExpressionSyntaxError(f"unexpected character '{c}'", i)
        self.tokens.append(("end", "", n))

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.index]

    def next(self) -> tuple[str, str, int]:
        token = self.tokens[self.index]
        if token[0] != "end":
            self.index += 1
        return token

    def expect_op(self, symbol: str):
        kind, lexeme, pos = self.next()
        if kind != "op" or lexeme != symbol:
            raise ExpressionSyntaxError(f"expected '{symbol}'", pos)


class _Parser:
    """Recursive descent over: ``^`` > unary minus > ``*``,``/`` > ``+``,``-``.

    ``^`` takes only integer or rational literal exponents and associates
    to the right (chained literal exponents fold into one rational).
    """

    def __init__(self, text: str, precision: int):
        self.tokens = _Tokenizer(text)
        self.precision = precision

    def parse(self) -> Expression:
        expr = self.sum()
        kind, lexeme, pos = self.tokens.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected '{lexeme}'", pos)
        return expr

    def sum(self) -> Expression:
        expr = self.product()
        while True:
            kind, lexeme, _ = self.tokens.peek()
            if kind == "op" and lexeme in "+-":
                self.tokens.next()
                right = self.product()
                expr = add(expr, right) if lexeme == "+" else sub(expr, right)
            else:
                return expr

    def product(self) -> Expression:
        expr = self.unary()
        while True:
            kind, lexeme, _ = self.tokens.peek()
            if kind == "op" and lexeme in "*/":
                self.tokens.next()
                right = self.unary()
                expr = mul(expr, right) if lexeme == "*" else div(expr, right)
            else:
                return expr

    def unary(self) -> Expression:
        kind, lexeme, _ = self.tokens.peek()
        if kind == "op" and lexeme == "-":
            self.tokens.next()
            return mul(Constant(Fraction(-1)), self.unary())
        return self.power()

    def power(self) -> Expression:
        base = self.atom()
        kind, lexeme, _ = self.tokens.peek()
        if kind == "op" and lexeme == "^":
            self.tokens.next()
            return pow_(base, self.exponent())
        return base

    def exponent(self) -> Fraction:
        value = self.exponent_literal()
        kind, lexeme, pos = self.tokens.peek()
        if kind == "op" and lexeme == "^":
            self.tokens.next()
            outer = self.exponent()
            if outer.denominator != 1:
                raise ExpressionSyntaxError("chained '^' needs an integer exponent", pos)
            value = value ** outer.numerator
        return value

    def exponent_literal(self) -> Fraction:
        kind, lexeme, pos = self.tokens.next()
        if kind == "op" and lexeme == "-":
            return -self.exponent_literal()
        if kind == "op" and lexeme == "(":
            value = self.exponent_literal()
            nxt_kind, nxt, _ = self.tokens.peek()
            if nxt_kind == "op" and nxt == "/":
                self.tokens.next()
                denominator = self.exponent_literal()
                if denominator == 0:
                    raise ExpressionSyntaxError("zero denominator in exponent", pos)
                value = value / denominator
            self.tokens.expect_op(")")
            return value
        if kind == "number":
            if "." in lexeme:
                raise ExpressionSyntaxError("exponent must be an integer or rational literal", pos)
            return Fraction(int(lexeme))
        raise ExpressionSyntaxError("exponent must be an integer or rational literal", pos)

    def atom(self) -> Expression:
        kind, lexeme, pos = self.tokens.next()
        if kind == "number":
            if "." in lexeme:
                return Constant(BigFloat(lexeme, self.precision))
            return Constant(Fraction(int(lexeme)))
        if kind == "ident":
            if lexeme == "z":
                return Z
            if lexeme in ("exp", "ln"):
                self.tokens.expect_op("(")
                arg = self.sum()
                self.tokens.expect_op(")")
                return exp_(arg) if lexeme == "exp" else ln_(arg)
            raise UnknownSymbolError(lexeme, pos)
        if kind == "op" and lexeme == "(":
            expr = self.sum()
            self.tokens.expect_op(")")
            return expr
        raise ExpressionSyntaxError(f"unexpected '{lexeme or 'end of input'}'", pos)


def parse_expression(text: str, precision: int = DEFAULT_PRECISION) -> Expression:
    """Parse the expression grammar. Raises :class:`ExpressionSyntaxError`
    or :class:`UnknownSymbolError` with the offending position."""
    return _Parser(text, precision).parse()


# -- printing --------------------------------------------------------

_PRECEDENCE_SUM = 1
_PRECEDENCE_PRODUCT = 2
_PRECEDENCE_UNARY = 3
_PRECEDENCE_POWER = 4
_PRECEDENCE_ATOM = 5


def to_string(expr: Expression) -> str:
    """Render *expr* so that ``parse_expression(to_string(expr))``
    evaluates identically."""
    text, _ = _render(expr)
    return text


def _render(expr: Expression) -> tuple[str, int]:
    if isinstance(expr, Constant):
        value = expr.value
        negative = value < 0
        text = format_scalar(value)
        if isinstance(value, Fraction) and value.denominator != 1:
            return text, _PRECEDENCE_PRODUCT
        return text, (_PRECEDENCE_UNARY if negative else _PRECEDENCE_ATOM)
    if isinstance(expr, Variable):
        return "z", _PRECEDENCE_ATOM
    if isinstance(expr, Add):
        return f"{_wrap(expr.left, _PRECEDENCE_SUM)} + {_wrap(expr.right, _PRECEDENCE_PRODUCT)}", _PRECEDENCE_SUM
    if isinstance(expr, Sub):
        return f"{_wrap(expr.left, _PRECEDENCE_SUM)} - {_wrap(expr.right, _PRECEDENCE_PRODUCT)}", _PRECEDENCE_SUM
    if isinstance(expr, Mul):
        return f"{_wrap(expr.left, _PRECEDENCE_PRODUCT)}*{_wrap(expr.right, _PRECEDENCE_UNARY)}", _PRECEDENCE_PRODUCT
    if isinstance(expr, Div):
        return f"{_wrap(expr.left, _PRECEDENCE_PRODUCT)}/{_wrap(expr.right, _PRECEDENCE_UNARY)}", _PRECEDENCE_PRODUCT
    if isinstance(expr, Pow):
        exponent = expr.exponent
        if exponent.denominator == 1 and exponent >= 0:
            suffix = str(exponent.numerator)
        else:
            suffix = f"({exponent.numerator}/{exponent.denominator})" if exponent.denominator != 1 else f"({exponent.numerator})"
        return f"{_wrap(expr.base, _PRECEDENCE_ATOM)}^{suffix}", _PRECEDENCE_POWER
    if isinstance(expr, Exp):
        return f"exp({to_string(expr.arg)})", _PRECEDENCE_ATOM
    if isinstance(expr, Ln):
        return f"ln({to_string(expr.arg)})", _PRECEDENCE_ATOM
    raise TypeError(f"not an Expression node: {type(expr).__name__}")


def _wrap(expr: Expression, minimum: int) -> str:
    text, precedence = _render(expr)
    if precedence < minimum:
        return f"({text})"
    return text

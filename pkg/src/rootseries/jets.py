"""Order-K truncated Taylor series ("jets") about an anchor.

A jet stores coefficients ``[c0, c1, ..., cK]`` meaning
``c0 + c1*t + ... + cK*t^K + O(t^{K+1})``. All coefficients live in a
single numeric mode: every one a Fraction, or every one a BigFloat at
one precision. Mixed-mode operands are rejected, never coerced.

``taylor_expand`` evaluates an expression with jet arithmetic (one pass,
no repeated symbolic differentiation); ``revert`` computes the
compositional inverse order by order, which is how the derivative
sequence of an inverse function is obtained from the forward expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import (
    DivisionByZeroLeadingCoefficient,
    DomainError,
    LogNonPositiveLeadingCoefficient,
    NotReversibleError,
)
from .expressions import Add, Constant, Div, Exp, Expression, Ln, Mul, Pow, Sub, Variable, requires_float
from .scalars import (
    DEFAULT_PRECISION,
    BigFloat,
    Scalar,
    exp as scalar_exp,
    ln as scalar_ln,
    power as scalar_power,
    to_bigfloat,
)


@dataclass(frozen=True)
class Jet:
    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a jet needs at least the constant coefficient")
        mode = _mode_of(self.coeffs[0])
        for c in self.coeffs[1:]:
            if _mode_of(c) != mode:
                raise ValueError("jet coefficients must share one numeric mode")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def mode(self):
        """('exact', None) or ('float', precision)."""
        return _mode_of(self.coeffs[0])

    def _zero(self) -> Scalar:
        kind, precision = self.mode
        return Fraction(0) if kind == "exact" else to_bigfloat(0, precision)

    def _one(self) -> Scalar:
        kind, precision = self.mode
        return Fraction(1) if kind == "exact" else to_bigfloat(1, precision)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "Jet") -> "Jet":
        _check_compatible(self, other)
        return Jet(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Jet") -> "Jet":
        _check_compatible(self, other)
        return Jet(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "Jet") -> "Jet":
        _check_compatible(self, other)
        order = self.order
        zero = self._zero()
        out = [zero] * (order + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if b != 0:
                    out[i + j] = out[i + j] + a * b
        return Jet(tuple(out))

    def __truediv__(self, other: "Jet") -> "Jet":
        _check_compatible(self, other)
        if other.coeffs[0] == 0:
            raise DivisionByZeroLeadingCoefficient()
        order = self.order
        c0 = other.coeffs[0]
        out = [self.coeffs[0] / c0]
        for k in range(1, order + 1):
            acc = self.coeffs[k]
            for j in range(k):
                acc = acc - out[j] * other.coeffs[k - j]
            out.append(acc / c0)
        return Jet(tuple(out))

    def __neg__(self) -> "Jet":
        return Jet(tuple(-c for c in self.coeffs))


def _mode_of(c: Scalar):
    if isinstance(c, Fraction):
        return ("exact", None)
    if isinstance(c, BigFloat):
        return ("float", c.precision)
    raise TypeError(f"jet coefficients must be Scalars, got {type(c).__name__}")


def _check_compatible(a: Jet, b: Jet):
    if a.order != b.order:
        raise ValueError(f"jet orders differ: {a.order} != {b.order}")
    if a.mode != b.mode:
        raise ValueError("jets have mixed numeric modes")


def constant_jet(value: Scalar, order: int) -> Jet:
    zero = Fraction(0) if isinstance(value, Fraction) else to_bigfloat(0, value.precision)
    return Jet((value,) + (zero,) * order)


def variable_jet(anchor: Scalar, order: int) -> Jet:
    """The jet of ``z`` about the anchor: anchor + t."""
    if order == 0:
        return Jet((anchor,))
    if isinstance(anchor, Fraction):
        one, zero = Fraction(1), Fraction(0)
    else:
        one, zero = to_bigfloat(1, anchor.precision), to_bigfloat(0, anchor.precision)
    return Jet((anchor, one) + (zero,) * (order - 1))


def identity_jet(order: int, like: Jet | None = None) -> Jet:
    zero = Fraction(0) if like is None else like._zero()
    one = Fraction(1) if like is None else like._one()
    if order == 0:
        return Jet((zero,))
    return Jet((zero, one) + (zero,) * (order - 1))


# -- analytic functions of jets ---------------------------------------


def jet_exp(a: Jet, precision: int = DEFAULT_PRECISION) -> Jet:
    kind, jet_precision = a.mode
    if kind == "exact" and a.coeffs[0] != 0:
        raise ValueError("exact-mode jet exp needs zero constant term; use a float-mode jet")
    b0 = Fraction(1) if kind == "exact" else scalar_exp(a.coeffs[0], jet_precision or precision)
    out = [b0]
    for k in range(1, a.order + 1):
        acc = a._zero()
        for j in range(1, k + 1):
            if a.coeffs[j] != 0:
                acc = acc + j * a.coeffs[j] * out[k - j]
        out.append(acc / k)
    return Jet(tuple(out))


def jet_ln(a: Jet, precision: int = DEFAULT_PRECISION) -> Jet:
    if a.coeffs[0] <= 0:
        raise LogNonPositiveLeadingCoefficient()
    kind, jet_precision = a.mode
    if kind == "exact" and a.coeffs[0] != 1:
        raise ValueError("exact-mode jet ln needs constant term 1; use a float-mode jet")
    a0 = a.coeffs[0]
    b0 = Fraction(0) if kind == "exact" else scalar_ln(a0, jet_precision or precision)
    out = [b0]
    for k in range(1, a.order + 1):
        acc = k * a.coeffs[k]
        for j in range(1, k):
            acc = acc - j * out[j] * a.coeffs[k - j]
        out.append(acc / (k * a0))
    return Jet(tuple(out))


def jet_pow(a: Jet, exponent: Fraction | int, precision: int = DEFAULT_PRECISION) -> Jet:
    """a(t) ** exponent truncated at the jet's order."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        n = exponent.numerator
        if n >= 0:
            result = constant_jet(a._one(), a.order)
            base = a
            while n:
                if n & 1:
                    result = result * base
                n >>= 1
                if n:
                    base = base * base
            return result
        if a.coeffs[0] == 0:
            raise DivisionByZeroLeadingCoefficient()
        return constant_jet(a._one(), a.order) / jet_pow(a, -exponent)
    a0 = a.coeffs[0]
    if a0 == 0:
        raise DomainError.division_by_zero("fractional power of a jet with zero constant term")
    if a0 < 0:
        raise DomainError.fractional_power_of_negative()
    kind, jet_precision = a.mode
    if kind == "exact" and a0 != 1:
        raise ValueError("exact-mode fractional jet power needs constant term 1")
    b0 = Fraction(1) if kind == "exact" else scalar_power(a0, exponent, jet_precision or precision)
    out = [b0]
    for k in range(1, a.order + 1):
        acc = a._zero()
        for j in range(k):
            factor = exponent * (k - j) - j
            if factor != 0 and a.coeffs[k - j] != 0:
                acc = acc + factor * a.coeffs[k - j] * out[j]
        out.append(acc / (k * a0))
    return Jet(tuple(out))


def compose(outer: Jet, inner: Jet) -> Jet:
    """outer(inner(t)) truncated at the common order.

    The inner jet must have zero constant term (the series are always
    re-centered before composition).
    """
    _check_compatible(outer, inner)
    if inner.coeffs[0] != 0:
        raise ValueError("composition needs an inner jet with zero constant term")
    result = constant_jet(outer.coeffs[outer.order], outer.order)
    for k in range(outer.order - 1, -1, -1):
        result = result * inner
        result = Jet((result.coeffs[0] + outer.coeffs[k],) + result.coeffs[1:])
    return result


def revert(w: Jet) -> Jet:
    """Compositional inverse d of w: compose(w, d) = t through order K.

    Needs w0 = 0 and w1 != 0; a vanishing linear coefficient means the
    underlying function has a critical point at the anchor and the
    inverse's derivatives do not exist there.
    """
    if w.order < 1 or w.coeffs[0] != 0 or w.coeffs[1] == 0:
        raise NotReversibleError("series has no invertible linear part")
    zero = w._zero()
    one = w._one()
    w1 = w.coeffs[1]
    coeffs = [zero, one / w1] + [zero] * (w.order - 1)
    for m in range(2, w.order + 1):
        composed = compose(w, Jet(tuple(coeffs)))
        coeffs[m] = -composed.coeffs[m] / w1
    return Jet(tuple(coeffs))


# -- jets of expressions ----------------------------------------------


def taylor_expand(expr: Expression, anchor: Scalar, order: int, precision: int = DEFAULT_PRECISION) -> Jet:
    """Jet of *expr* about *anchor*: coefficient k is the k-th derivative
    over k!. Computed by jet-lifted evaluation of the tree, not by K
    symbolic differentiations."""
    if order < 0:
        raise ValueError("order must be >= 0")
    if isinstance(anchor, BigFloat):
        precision = anchor.precision
    elif requires_float(expr):
        anchor = to_bigfloat(anchor, precision)
    var = variable_jet(anchor, order)
    float_mode = isinstance(anchor, BigFloat)
    cache: dict[int, Jet] = {}

    def lift(value: Scalar) -> Jet:
        if float_mode and isinstance(value, Fraction):
            value = to_bigfloat(value, precision)
        return constant_jet(value, order)

    def walk(node: Expression) -> Jet:
        key = id(node)
        hit = cache.get(key)
        if hit is not None:
            return hit
        if isinstance(node, Constant):
            result = lift(node.value)
        elif isinstance(node, Variable):
            result = var
        elif isinstance(node, Add):
            result = walk(node.left) + walk(node.right)
        elif isinstance(node, Sub):
            result = walk(node.left) - walk(node.right)
        elif isinstance(node, Mul):
            result = walk(node.left) * walk(node.right)
        elif isinstance(node, Div):
            result = walk(node.left) / walk(node.right)
        elif isinstance(node, Pow):
            result = jet_pow(walk(node.base), node.exponent, precision)
        elif isinstance(node, Exp):
            result = jet_exp(walk(node.arg), precision)
        elif isinstance(node, Ln):
            result = jet_ln(walk(node.arg), precision)
        else:
            raise TypeError(f"not an Expression node: {type(node).__name__}")
        cache[key] = result
        return result

    return walk(expr)


def jet_derivatives(jet: Jet) -> list[Scalar]:
    """[c1*1!, c2*2!, ...] — derivative values from jet coefficients."""
    return [jet.coeffs[k] * factorial(k) for k in range(1, jet.order + 1)]

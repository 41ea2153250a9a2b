"""Closed-form coefficient families used purely as cross-check oracles.

Each family carries explicit printed formulas for the inverse-derivative
sequence of a specific equation shape. They are evaluated directly from
those formulas — never through the generic engine — so that agreement
between the two is a meaningful test.

Families:

* ``SqrtShift(b, c)``     — z^2 = b^2 + c, anchored at v = b.
* ``NthRootShift(b, c, n)`` — z^n = b^n + c (integer n >= 1), anchored at v = b.
* ``CubicExample()``      — z^3 = z - 1; tabulated through order 4 only.
* ``GeneralPower(lam, a, n)`` — z^lam = a, coefficients of the root**n series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DomainError
from .expressions import parse_expression
from .inverse_series import (
    Anchor,
    CoefficientSequence,
    SeriesApproximation,
    anchor_at,
)
from .power_series import PowerCoefficientSequence
from .scalars import DEFAULT_PRECISION, Scalar, power as scalar_power


@dataclass(frozen=True)
class SqrtShift:
    b: Fraction
    c: Fraction

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("SqrtShift needs b != 0")

    def equation(self):
        rhs = self.b * self.b + self.c
        return parse_expression(f"z^2 - ({rhs.numerator}/{rhs.denominator})")


@dataclass(frozen=True)
class NthRootShift:
    b: Fraction
    c: Fraction
    n: int

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("NthRootShift needs b != 0")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("NthRootShift needs an integer n >= 1")

    def equation(self):
        rhs = self.b ** self.n + self.c
        return parse_expression(f"z^{self.n} - ({rhs.numerator}/{rhs.denominator})")


@dataclass(frozen=True)
class CubicExample:
    """z^3 = z - 1, i.e. Z = z^3 - z + 1."""

    def equation(self):
        return parse_expression("z^3 - z + 1")


@dataclass(frozen=True)
class GeneralPower:
    lam: Fraction
    a: Fraction
    n: Fraction

    def __post_init__(self):
        if self.lam == 0:
            raise ValueError("GeneralPower needs a nonzero equation exponent")

    def equation(self):
        lam = Fraction(self.lam)
        a = Fraction(self.a)
        suffix = f"{lam.numerator}" if lam.denominator == 1 else f"({lam.numerator}/{lam.denominator})"
        return parse_expression(f"z^{suffix} - ({a.numerator}/{a.denominator})")


ClosedFormFamily = SqrtShift | NthRootShift | CubicExample | GeneralPower


def _odd_double_factorial(k: int) -> int:
    """1 * 3 * 5 * ... * (2k-3); equals 1 for k <= 2."""
    result = 1
    for j in range(1, k):
        result *= 2 * j - 1
    return result


def _sqrt_shift_derivative(k: int, v: Scalar) -> Scalar:
    sign = 1 if k % 2 else -1
    return sign * _odd_double_factorial(k) / (2 ** k * scalar_power(v, 2 * k - 1))


def _nth_root_derivative(k: int, n: int, v: Scalar) -> Scalar:
    sign = 1 if k % 2 else -1
    numerator = 1
    for j in range(1, k):
        numerator *= j * n - 1
    return sign * numerator / (n ** k * scalar_power(v, k * n - 1))


_CUBIC_TABLE = (
    # numerator polynomial in v, denominator power of (3v^2 - 1).
    # The order-4 numerator is -360v(6v^2+1): the historically printed
    # table says -36v, but the same source's own series display carries
    # the factor 15v(6v^2+1) = 360/4! * v(6v^2+1), which settles it.
    lambda v: (Fraction(1), 1),
    lambda v: (-6 * v, 3),
    lambda v: (6 * (15 * v * v + 1), 5),
    lambda v: (-360 * v * (6 * v * v + 1), 7),
)


def _general_power_derivative(k: int, lam: Fraction, n: Fraction, v: Scalar, precision: int) -> Scalar:
    product = Fraction(1)
    for j in range(k):
        product *= (n - j * lam) / lam
    return product * scalar_power(v, n - k * lam, precision)


def closed_form_coefficients(
    family: ClosedFormFamily,
    v: Scalar,
    order: int,
    precision: int = DEFAULT_PRECISION,
) -> CoefficientSequence | PowerCoefficientSequence:
    """Evaluate the family's printed coefficient formulas at *v*.

    Independent of the generic symbolic and reversion engines by
    construction; exists to cross-check them.
    """
    if v == 0:
        raise DomainError.division_by_zero("closed forms need a nonzero anchor")
    anchor = anchor_at(family.equation(), v, precision)
    if isinstance(family, SqrtShift):
        derivs = tuple(_sqrt_shift_derivative(k, anchor.v) for k in range(1, order + 1))
        return CoefficientSequence(anchor, derivs)
    if isinstance(family, NthRootShift):
        derivs = tuple(_nth_root_derivative(k, family.n, anchor.v) for k in range(1, order + 1))
        return CoefficientSequence(anchor, derivs)
    if isinstance(family, CubicExample):
        if order > len(_CUBIC_TABLE):
            raise ValueError(f"the cubic table stops at order {len(_CUBIC_TABLE)}")
        denominator_base = 3 * v * v - 1
        if denominator_base == 0:
            raise DomainError.division_by_zero("3*v^2 - 1 vanishes at this anchor")
        derivs = []
        for k in range(1, order + 1):
            numerator, power = _CUBIC_TABLE[k - 1](v)
            derivs.append(numerator / scalar_power(denominator_base, power))
        return CoefficientSequence(anchor, tuple(derivs))
    if isinstance(family, GeneralPower):
        derivs = tuple(
            _general_power_derivative(k, Fraction(family.lam), Fraction(family.n), anchor.v, precision)
            for k in range(1, order + 1)
        )
        return PowerCoefficientSequence(anchor, Fraction(family.n), derivs)
    raise TypeError(f"not a closed-form family: {type(family).__name__}")


def family_series_value(
    family: SqrtShift | NthRootShift, order: int, precision: int = DEFAULT_PRECISION
) -> SeriesApproximation:
    """The anchored series of the shifted-radicand families (v = b,
    V = -c), term by term from the printed displays."""
    if isinstance(family, SqrtShift):
        b, c, n = family.b, family.c, 2
        term_numerator = _odd_double_factorial
    elif isinstance(family, NthRootShift):
        b, c, n = family.b, family.c, family.n

        def term_numerator(k: int) -> int:
            product = 1
            for j in range(1, k):
                product *= j * n - 1
            return product
    else:
        raise TypeError("only the shifted-radicand families have an anchored series")
    anchor = anchor_at(family.equation(), b, precision)
    terms = [anchor.v]
    sums = [anchor.v]
    for k in range(1, order + 1):
        sign = 1 if k % 2 else -1
        term = (
            sign
            * term_numerator(k)
            * c ** k
            / (factorial(k) * Fraction(n) ** k * b ** (k * n - 1))
        )
        terms.append(term)
        sums.append(sums[-1] + term)
    return SeriesApproximation(anchor, tuple(terms), tuple(sums))


__all__ = [
    "ClosedFormFamily",
    "CubicExample",
    "GeneralPower",
    "NthRootShift",
    "SqrtShift",
    "closed_form_coefficients",
    "family_series_value",
]

"""Scalar arithmetic: exact rationals and arbitrary-precision floats.

Two numeric modes flow through the whole package:

* exact mode — plain :class:`fractions.Fraction` (always normalized,
  arbitrary-size integers);
* float mode — :class:`BigFloat`, an mpmath float pinned to an explicit
  binary precision (>= 64 bits).

Mixing rules: rational op rational stays rational; anything touching a
BigFloat becomes a BigFloat at the larger of the operand precisions.

Arithmetic goes through mpmath's libmp layer directly (raw mantissa
tuples with explicit precision), which keeps the per-operation cost low
enough for the large evaluation DAGs the coefficient engine produces.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import mpmath
from mpmath import libmp

from .errors import DomainError

DEFAULT_PRECISION = 128
MIN_PRECISION = 64

_ROUND = libmp.round_nearest
_make_mpf = mpmath.mp.make_mpf


def _require_precision(precision: int) -> int:
    if precision < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {precision}")
    return int(precision)


class BigFloat:
    """An mpmath float that remembers its working precision.

    All arithmetic runs at the maximum precision of the operands;
    Fractions and ints promote to the BigFloat's precision.
    """

    __slots__ = ("value", "precision")

    def __init__(self, value, precision: int = DEFAULT_PRECISION):
        precision = _require_precision(precision)
        if isinstance(value, BigFloat):
            raw = libmp.mpf_pos(value.value._mpf_, precision, _ROUND)
        elif isinstance(value, Fraction):
            raw = libmp.from_rational(value.numerator, value.denominator, precision, _ROUND)
        elif isinstance(value, int):
            raw = libmp.from_int(value, precision, _ROUND)
        elif isinstance(value, str):
            raw = libmp.from_str(value.strip(), precision, _ROUND)
        elif isinstance(value, mpmath.mpf):
            raw = libmp.mpf_pos(value._mpf_, precision, _ROUND)
        else:
            raise TypeError(f"cannot build BigFloat from {type(value).__name__}")
        object.__setattr__(self, "value", _make_mpf(raw))
        object.__setattr__(self, "precision", precision)

    @classmethod
    def _from_raw(cls, raw, precision: int) -> "BigFloat":
        self = object.__new__(cls)
        object.__setattr__(self, "value", _make_mpf(raw))
        object.__setattr__(self, "precision", precision)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("BigFloat is immutable")

    # -- conversions -------------------------------------------------

    def to_fraction(self) -> Fraction:
        """Exact rational value of the underlying binary float."""
        sign, man, exp, _ = self.value._mpf_
        if man == 0:
            if self.value == 0:
                return Fraction(0)
            raise ValueError("cannot convert non-finite BigFloat to Fraction")
        result = Fraction(int(man), 1) * Fraction(2) ** int(exp)
        return -result if sign else result

    def __float__(self) -> float:
        return float(self.value)

    # -- arithmetic --------------------------------------------------

    def _raw_pair(self, other):
        if isinstance(other, BigFloat):
            return other.value._mpf_, max(self.precision, other.precision)
        if isinstance(other, Fraction):
            return (
                libmp.from_rational(other.numerator, other.denominator, self.precision, _ROUND),
                self.precision,
            )
        if isinstance(other, int):
            return libmp.from_int(other, self.precision, _ROUND), self.precision
        return None, 0

    def __add__(self, other):
        raw, precision = self._raw_pair(other)
        if raw is None:
            return NotImplemented
        return BigFloat._from_raw(libmp.mpf_add(self.value._mpf_, raw, precision, _ROUND), precision)

    __radd__ = __add__

    def __sub__(self, other):
        raw, precision = self._raw_pair(other)
        if raw is None:
            return NotImplemented
        return BigFloat._from_raw(libmp.mpf_sub(self.value._mpf_, raw, precision, _ROUND), precision)

    def __rsub__(self, other):
        raw, precision = self._raw_pair(other)
        if raw is None:
            return NotImplemented
        return BigFloat._from_raw(libmp.mpf_sub(raw, self.value._mpf_, precision, _ROUND), precision)

    def __mul__(self, other):
        raw, precision = self._raw_pair(other)
        if raw is None:
            return NotImplemented
        return BigFloat._from_raw(libmp.mpf_mul(self.value._mpf_, raw, precision, _ROUND), precision)

    __rmul__ = __mul__

    def __truediv__(self, other):
        raw, precision = self._raw_pair(other)
        if raw is None:
            return NotImplemented
        if raw == libmp.fzero:
            raise DomainError.division_by_zero()
        return BigFloat._from_raw(libmp.mpf_div(self.value._mpf_, raw, precision, _ROUND), precision)

    def __rtruediv__(self, other):
        raw, precision = self._raw_pair(other)
        if raw is None:
            return NotImplemented
        if self.value._mpf_ == libmp.fzero:
            raise DomainError.division_by_zero()
        return BigFloat._from_raw(libmp.mpf_div(raw, self.value._mpf_, precision, _ROUND), precision)

    def __pow__(self, exponent):
        return power(self, exponent)

    def __neg__(self):
        return BigFloat._from_raw(libmp.mpf_neg(self.value._mpf_), self.precision)

    def __pos__(self):
        return self

    def __abs__(self):
        return BigFloat._from_raw(libmp.mpf_abs(self.value._mpf_), self.precision)

    def __bool__(self):
        return self.value._mpf_ != libmp.fzero

    # -- comparisons (exact, also against rationals) -------------------

    def _compare(self, other):
        if isinstance(other, BigFloat):
            return libmp.mpf_cmp(self.value._mpf_, other.value._mpf_)
        if isinstance(other, int):
            other = Fraction(other)
        if not isinstance(other, Fraction):
            return None
        mine = self.to_fraction()
        return -1 if mine < other else (1 if mine > other else 0)

    def __eq__(self, other):
        cmp = self._compare(other)
        return NotImplemented if cmp is None else cmp == 0

    def __ne__(self, other):
        cmp = self._compare(other)
        return NotImplemented if cmp is None else cmp != 0

    def __lt__(self, other):
        cmp = self._compare(other)
        return NotImplemented if cmp is None else cmp < 0

    def __le__(self, other):
        cmp = self._compare(other)
        return NotImplemented if cmp is None else cmp <= 0

    def __gt__(self, other):
        cmp = self._compare(other)
        return NotImplemented if cmp is None else cmp > 0

    def __ge__(self, other):
        cmp = self._compare(other)
        return NotImplemented if cmp is None else cmp >= 0

    def __hash__(self):
        return hash((self.value._mpf_, self.precision))

    def __repr__(self):
        return f"BigFloat({format_scalar(self)!r}, precision={self.precision})"


Scalar = Union[Fraction, BigFloat]


def is_exact(x: Scalar) -> bool:
    return isinstance(x, Fraction)


def to_bigfloat(x: Scalar | int, precision: int = DEFAULT_PRECISION) -> BigFloat:
    if isinstance(x, BigFloat) and x.precision == precision:
        return x
    return BigFloat(x if isinstance(x, (BigFloat, Fraction)) else Fraction(x), precision)


def operative_precision(*values, default: int = DEFAULT_PRECISION) -> int:
    """Largest precision among any BigFloat arguments, else the default."""
    precision = 0
    for v in values:
        if isinstance(v, BigFloat):
            precision = max(precision, v.precision)
    return precision or default


def exp(x: Scalar, precision: int = DEFAULT_PRECISION) -> BigFloat:
    precision = operative_precision(x, default=precision)
    b = to_bigfloat(x, precision)
    return BigFloat._from_raw(libmp.mpf_exp(b.value._mpf_, precision, _ROUND), precision)


def ln(x: Scalar, precision: int = DEFAULT_PRECISION) -> BigFloat:
    if x <= 0:
        raise DomainError.log_non_positive()
    precision = operative_precision(x, default=precision)
    b = to_bigfloat(x, precision)
    return BigFloat._from_raw(libmp.mpf_log(b.value._mpf_, precision, _ROUND), precision)


def power(base: Scalar, exponent: Scalar | Fraction | int, precision: int = DEFAULT_PRECISION) -> Scalar:
    """``base ** exponent`` under the package's domain and exactness rules.

    Integer exponents of rationals stay exact; a non-integer exponent of
    a positive base produces a BigFloat at the operative precision.
    """
    if isinstance(exponent, int):
        exponent = Fraction(exponent)
    if isinstance(exponent, Fraction) and exponent.denominator == 1:
        n = exponent.numerator
        if isinstance(base, Fraction):
            if n < 0 and base == 0:
                raise DomainError.division_by_zero("zero raised to a negative power")
            return base ** n
        if n < 0 and not base:
            raise DomainError.division_by_zero("zero raised to a negative power")
        return BigFloat._from_raw(
            libmp.mpf_pow_int(base.value._mpf_, n, base.precision, _ROUND), base.precision
        )
    # non-integer exponent: real-valued only for positive bases
    if base == 0:
        if exponent > 0:
            return Fraction(0) if isinstance(base, Fraction) else to_bigfloat(0, base.precision)
        raise DomainError.division_by_zero("zero raised to a negative power")
    if base < 0:
        raise DomainError.fractional_power_of_negative()
    precision = operative_precision(base, exponent, default=precision)
    b = to_bigfloat(base, precision)
    e = exponent if isinstance(exponent, BigFloat) else to_bigfloat(exponent, precision)
    return BigFloat._from_raw(
        libmp.mpf_pow(b.value._mpf_, e.value._mpf_, precision, _ROUND), precision
    )


# -- formatting and parsing ------------------------------------------


def _round_trip_digits(precision: int) -> int:
    # ceil(precision * log10(2)) + 2 guard digits uniquely identifies the float
    return int(precision * 0.30102999566398119) + 3


def format_scalar(x: Scalar) -> str:
    """Deterministic text form: ``p/q`` for rationals, round-trip-exact
    decimal for BigFloats."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, BigFloat):
        return libmp.to_str(x.value._mpf_, _round_trip_digits(x.precision))
    raise TypeError(f"not a Scalar: {type(x).__name__}")


def parse_number(text: str, precision: int = DEFAULT_PRECISION) -> Scalar:
    """Parse ``3``, ``-19/6`` or ``2.5`` — decimals promote to BigFloat."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num.strip()), int(den.strip()))
    if any(c in text for c in ".eE"):
        return BigFloat(text, precision)
    return Fraction(int(text))

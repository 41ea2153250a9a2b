"""Independent verification oracles: Newton, bisection, binomial series.

These deliberately share nothing with the coefficient engines beyond
expression evaluation — they exist to catch the engines' bugs, not to
inherit them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DerivativeVanishedError, NoConvergenceError, NoSignChangeError
from .expressions import Expression, differentiate, evaluate
from .scalars import DEFAULT_PRECISION, BigFloat, Scalar, to_bigfloat

DEFAULT_TOLERANCE = Fraction(1, 10 ** 30)


@dataclass(frozen=True)
class RootResult:
    value: Scalar
    residual: Scalar
    iterations: int
    method: str


def newton_root(
    Z: Expression,
    guess: Scalar,
    tol: Scalar = DEFAULT_TOLERANCE,
    max_iter: int = 200,
    precision: int = DEFAULT_PRECISION,
) -> RootResult:
    """Classical Newton iteration until |Z(x)| < tol.

    Runs in the guess's numeric mode: a rational guess with a rational
    equation iterates exactly.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    Zprime = differentiate(Z)
    x = guess
    for iteration in range(max_iter + 1):
        fx = evaluate(Z, x, precision)
        if abs(fx) < tol:
            return RootResult(x, abs(fx), iteration, "newton")
        if iteration == max_iter:
            break
        fpx = evaluate(Zprime, x, precision)
        if fpx == 0:
            raise DerivativeVanishedError(x)
        x = x - fx / fpx
    raise NoConvergenceError(f"no convergence after {max_iter} Newton iterations", x)


def newton_iterates(
    Z: Expression,
    guess: Scalar,
    count: int,
    precision: int = DEFAULT_PRECISION,
) -> list[Scalar]:
    """The first *count* Newton steps (guess included), mode-preserving."""
    Zprime = differentiate(Z)
    iterates = [guess]
    for _ in range(count):
        x = iterates[-1]
        fpx = evaluate(Zprime, x, precision)
        if fpx == 0:
            raise DerivativeVanishedError(x)
        iterates.append(x - evaluate(Z, x, precision) / fpx)
    return iterates


def bisection_root(
    Z: Expression,
    lo: Scalar,
    hi: Scalar,
    tol: Scalar = DEFAULT_TOLERANCE,
    precision: int = DEFAULT_PRECISION,
) -> RootResult:
    """Bisection to interval width < tol. Needs a sign change on [lo, hi]."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    lo = to_bigfloat(lo, precision)
    hi = to_bigfloat(hi, precision)
    if lo > hi:
        lo, hi = hi, lo
    f_lo = evaluate(Z, lo, precision)
    f_hi = evaluate(Z, hi, precision)
    if f_lo == 0:
        return RootResult(lo, abs(f_lo), 0, "bisection")
    if f_hi == 0:
        return RootResult(hi, abs(f_hi), 0, "bisection")
    if (f_lo < 0) == (f_hi < 0):
        raise NoSignChangeError("no sign change over the bracket")
    iterations = 0
    while hi - lo >= tol:
        mid = (lo + hi) / 2
        if mid == lo or mid == hi:
            break  # interval at precision floor
        f_mid = evaluate(Z, mid, precision)
        iterations += 1
        if f_mid == 0:
            return RootResult(mid, abs(f_mid), iterations, "bisection")
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    mid = (lo + hi) / 2
    return RootResult(mid, abs(evaluate(Z, mid, precision)), iterations, "bisection")


def binomial_series_coefficients(exponent: Fraction | int, order: int) -> list[Fraction]:
    """Generalized binomial coefficients C(exponent, k) for k = 0..order,
    by the recurrence C(a, k) = C(a, k-1) * (a - k + 1) / k."""
    if order < 0:
        raise ValueError("order must be >= 0")
    exponent = Fraction(exponent)
    coefficients = [Fraction(1)]
    for k in range(1, order + 1):
        coefficients.append(coefficients[-1] * (exponent - k + 1) / k)
    return coefficients


__all__ = [
    "DEFAULT_TOLERANCE",
    "RootResult",
    "binomial_series_coefficients",
    "bisection_root",
    "newton_iterates",
    "newton_root",
]

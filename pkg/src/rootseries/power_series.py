"""Series for powers of the root and for its natural logarithm.

The same machinery that expresses the root expresses any power root**n:
the coefficient recurrence starts from n*z^(n-1)/Z'(z) instead of
1/Z'(z). Every coefficient carries the factor n, so dividing it out and
letting n -> 0 yields a series Omega with

    ln(root) = ln(v) + Omega        and        root**n = v**n * exp(n*Omega).

Omega is computed here by the jet route: compose ln(1 + t/v) with the
reverted expansion of Z about v and evaluate at step -V. That form keeps
every Omega term exact in rational mode (the ln(v) constant never enters
until the final logarithm is requested).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DomainError
from .expressions import (
    Expression,
    Variable,
    constant,
    differentiate,
    div,
    evaluate_many,
    mul,
    pow_,
)
from .inverse_series import Anchor, SeriesApproximation, anchor_at
from .jets import Jet, compose, constant_jet, jet_derivatives, jet_pow, revert, taylor_expand
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
class PowerCoefficientSequence:
    """Derivatives of v**n with respect to V at the anchor; every entry
    is divisible by the exponent n (all vanish at n = 0)."""

    anchor: Anchor
    exponent: Fraction
    derivs: tuple

    @property
    def order(self) -> int:
        return len(self.derivs)


@dataclass(frozen=True)
class OmegaSeries:
    """Terms of the n -> 0 power series divided by n: sums to
    ln(root) - ln(v)."""

    anchor: Anchor
    omega_terms: tuple
    omega: Scalar

    @property
    def order(self) -> int:
        return len(self.omega_terms)


_POWER_EXPR_CACHE: dict[tuple[Expression, Fraction], tuple[Expression, list[Expression]]] = {}


def _power_coefficient_expressions(Z: Expression, n: Fraction, order: int) -> list[Expression]:
    key = (Z, n)
    if key not in _POWER_EXPR_CACHE:
        Zprime = differentiate(Z)
        first = div(mul(constant(n), pow_(Variable(), n - 1)), Zprime)
        _POWER_EXPR_CACHE[key] = (Zprime, [first])
    Zprime, chain = _POWER_EXPR_CACHE[key]
    while len(chain) < order:
        chain.append(div(differentiate(chain[-1]), Zprime))
    return chain[:order]


def power_coefficient_sequence(
    Z: Expression,
    v: Scalar,
    n: Fraction | int,
    order: int,
    precision: int = DEFAULT_PRECISION,
) -> PowerCoefficientSequence:
    """Coefficients of the root**n series: start from n*z^(n-1)/Z'(z),
    then differentiate-and-divide as for the root itself.

    Exact for integer n and rational inputs; non-integer n needs v > 0
    and produces BigFloats.
    """
    n = Fraction(n)
    if n.denominator != 1 and v < 0:
        raise DomainError.fractional_power_of_negative(
            "non-integer exponent needs a positive anchor"
        )
    anchor = anchor_at(Z, v, precision)
    exprs = _power_coefficient_expressions(Z, n, order)
    derivs = tuple(evaluate_many(exprs, anchor.v, precision))
    return PowerCoefficientSequence(anchor, n, derivs)


def power_coefficient_sequence_reversion(
    Z: Expression,
    v: Scalar,
    n: Fraction | int,
    order: int,
    precision: int = DEFAULT_PRECISION,
) -> PowerCoefficientSequence:
    """Power-series coefficients by the jet route: raise v + d(s) (the
    reverted expansion of Z about v) to the n-th power and read off the
    derivatives. Must match :func:`power_coefficient_sequence`; cheap at
    any order, hence the default route for deep truncations."""
    n = Fraction(n)
    if n.denominator != 1 and v < 0:
        raise DomainError.fractional_power_of_negative(
            "non-integer exponent needs a positive anchor"
        )
    jet = taylor_expand(Z, v, order, precision)
    V = jet.coeffs[0]
    Vprime = jet.coeffs[1] if order >= 1 else None
    anchor_v = v
    if isinstance(V, BigFloat) and isinstance(v, Fraction):
        anchor_v = to_bigfloat(v, V.precision)
    if order == 0:
        return PowerCoefficientSequence(anchor_at(Z, v, precision), n, ())
    anchor = Anchor(anchor_v, V, Vprime)
    zero = V - V
    inverse = revert(Jet((zero,) + jet.coeffs[1:]))
    if n.denominator != 1 and isinstance(anchor_v, Fraction):
        # fractional power of an exact jet: go float, matching the
        # symbolic route's promotion
        inverse = Jet(tuple(to_bigfloat(c, precision) for c in inverse.coeffs))
        anchor_v = to_bigfloat(anchor_v, precision)
    base = Jet((anchor_v,) + inverse.coeffs[1:])
    powered = jet_pow(base, n, precision)
    return PowerCoefficientSequence(anchor, n, tuple(jet_derivatives(powered)))


def assemble_power_series(coeffs: PowerCoefficientSequence, precision: int = DEFAULT_PRECISION) -> SeriesApproximation:
    """Alternating series for root**n: leading term v**n, then
    (-1)^k * derivs[k] * V^k / k!."""
    anchor = coeffs.anchor
    head = scalar_power(anchor.v, coeffs.exponent, precision)
    terms = [head]
    sums = [head]
    V_power = Fraction(1) if isinstance(anchor.V, Fraction) else to_bigfloat(1, anchor.V.precision)
    for k, d in enumerate(coeffs.derivs, start=1):
        V_power = V_power * anchor.V
        sign = -1 if k % 2 else 1
        term = sign * d * V_power / factorial(k)
        terms.append(term)
        sums.append(sums[-1] + term)
    return SeriesApproximation(anchor, tuple(terms), tuple(sums))


def omega_series(
    Z: Expression, v: Scalar, order: int, precision: int = DEFAULT_PRECISION
) -> OmegaSeries:
    """Series for ln(root) - ln(v) by the jet route.

    The jet of ln(v + t) - ln(v) (coefficients (-1)^(k+1)/(k v^k), no
    logarithm constant, hence exact for rational v) is composed with the
    reverted expansion of Z about v and evaluated at step -V.
    """
    if v <= 0:
        raise DomainError.log_non_positive("omega needs a positive anchor")
    if order < 1:
        raise ValueError("omega needs order >= 1")
    jet = taylor_expand(Z, v, order, precision)
    V = jet.coeffs[0]
    Vprime = jet.coeffs[1]
    anchor_v = v
    if isinstance(V, BigFloat) and isinstance(v, Fraction):
        anchor_v = to_bigfloat(v, V.precision)
    anchor = Anchor(anchor_v, V, Vprime)
    zero = V - V
    shifted = Jet((zero,) + jet.coeffs[1:])
    inverse = revert(shifted)
    log_shift = Jet(
        (zero,)
        + tuple(
            (1 if k % 2 else -1) / (k * scalar_power(anchor_v, k)) for k in range(1, order + 1)
        )
    )
    composed = compose(log_shift, inverse)
    step = -V
    step_power = _one_like(V)
    omega_terms = []
    total = zero
    for k in range(1, order + 1):
        step_power = step_power * step
        term = composed.coeffs[k] * step_power
        omega_terms.append(term)
        total = total + term
    return OmegaSeries(anchor, tuple(omega_terms), total)


def _one_like(x: Scalar) -> Scalar:
    return Fraction(1) if isinstance(x, Fraction) else to_bigfloat(1, x.precision)


def log_series(Z: Expression, v: Scalar, order: int, precision: int = DEFAULT_PRECISION) -> BigFloat:
    """ln(root) as ln(v) + Omega, always at BigFloat precision."""
    omega = omega_series(Z, v, order, precision)
    return scalar_ln(v, precision) + to_bigfloat(omega.omega, precision)


def exp_identity_residual(
    Z: Expression,
    v: Scalar,
    n: Fraction | int,
    order: int,
    precision: int = DEFAULT_PRECISION,
) -> BigFloat:
    """|S_K - v**n * exp(n * Omega_K)| where S_K is the order-K power
    series partial sum. Shrinks with K whenever the root series
    converges."""
    n = Fraction(n)
    power_sum = assemble_power_series(
        power_coefficient_sequence_reversion(Z, v, n, order, precision), precision
    ).partial_sums[-1]
    omega = omega_series(Z, v, order, precision).omega
    lhs = to_bigfloat(power_sum, precision)
    rhs = to_bigfloat(scalar_power(to_bigfloat(v, precision), n, precision), precision) * scalar_exp(
        n * to_bigfloat(omega, precision), precision
    )
    return abs(lhs - rhs)


__all__ = [
    "OmegaSeries",
    "PowerCoefficientSequence",
    "assemble_power_series",
    "exp_identity_residual",
    "log_series",
    "omega_series",
    "power_coefficient_sequence",
    "power_coefficient_sequence_reversion",
]

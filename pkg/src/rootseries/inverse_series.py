"""The coefficient engine and the assembled root series.

Given Z(z) = 0 and a trial value v with V = Z(v), the root is expressed
as an alternating series in powers of V whose coefficients are the
successive derivatives of the inverse function v(V):

    root = v - d1*V + d2*V^2/2! - d3*V^3/3! + ...

The derivative sequence (d1, d2, d3, ... — one per order) is computed by
two fully independent routes that must agree:

* symbolic — build the expression D1 = 1/Z'(z), then repeatedly
  differentiate with respect to z and divide by Z'(z); evaluate each at v;
* reversion — expand Z about v as a jet, drop the constant term, and
  compositionally invert the series.

The first-order truncation is exactly one Newton step, and re-centering
the anchor on a truncated sum accelerates convergence.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import NotReversibleError
from .expressions import Expression, constant, differentiate, div, evaluate, evaluate_many
from .jets import Jet, jet_derivatives, revert, taylor_expand
from .scalars import DEFAULT_PRECISION, BigFloat, Scalar, to_bigfloat

DEFAULT_ORDER = 8


@dataclass(frozen=True)
class Anchor:
    """Trial value v, the equation value V = Z(v) and slope Z'(v)."""

    v: Scalar
    V: Scalar
    Vprime: Scalar

    def __post_init__(self):
        if self.Vprime == 0:
            raise NotReversibleError()


def anchor_at(Z: Expression, v: Scalar, precision: int = DEFAULT_PRECISION) -> Anchor:
    V = evaluate(Z, v, precision)
    Vprime = evaluate(differentiate(Z), v, precision)
    if isinstance(V, BigFloat) and isinstance(v, Fraction):
        v = to_bigfloat(v, V.precision)
    return Anchor(v, V, Vprime)


@dataclass(frozen=True)
class CoefficientSequence:
    """Derivatives of the inverse function at the anchor; derivs[k-1] is
    the k-th derivative of v with respect to V."""

    anchor: Anchor
    derivs: tuple

    @property
    def order(self) -> int:
        return len(self.derivs)


@dataclass(frozen=True)
class SeriesApproximation:
    """Per-term values and partial sums of the assembled series."""

    anchor: Anchor
    terms: tuple
    partial_sums: tuple

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    @property
    def value(self) -> Scalar:
        return self.partial_sums[-1]


class Verdict(str, enum.Enum):
    CONVERGING = "converging"
    STALLED = "stalled"
    DIVERGING = "diverging"


@dataclass(frozen=True)
class ConvergenceReport:
    ratios: tuple
    verdict: Verdict
    last_term_magnitude: Scalar


# -- coefficient routes ------------------------------------------------

_COEFF_EXPR_CACHE: dict[Expression, tuple[Expression, list[Expression]]] = {}


def _coefficient_expressions(Z: Expression, order: int) -> list[Expression]:
    """D1 = 1/Z', D_{k+1} = (dD_k/dz)/Z', built once per Z and extended on
    demand. Expression growth is accepted; orders stay small."""
    if Z not in _COEFF_EXPR_CACHE:
        Zprime = differentiate(Z)
        _COEFF_EXPR_CACHE[Z] = (Zprime, [div(constant(1), Zprime)])
    Zprime, chain = _COEFF_EXPR_CACHE[Z]
    while len(chain) < order:
        chain.append(div(differentiate(chain[-1]), Zprime))
    return chain[:order]


def coefficient_sequence_symbolic(
    Z: Expression, v: Scalar, order: int, precision: int = DEFAULT_PRECISION
) -> CoefficientSequence:
    """Derivative sequence by the symbolic differentiate-and-divide route.

    Exact for rational anchors and polynomial Z; raises
    :class:`NotReversibleError` when Z'(v) = 0.
    """
    anchor = anchor_at(Z, v, precision)
    exprs = _coefficient_expressions(Z, order)
    derivs = tuple(evaluate_many(exprs, anchor.v, precision))
    return CoefficientSequence(anchor, derivs)


def coefficient_sequence_reversion(
    Z: Expression, v: Scalar, order: int, precision: int = DEFAULT_PRECISION
) -> CoefficientSequence:
    """Derivative sequence by jet expansion and series reversion. Must
    match the symbolic route (exactly in rational mode)."""
    if order == 0:
        return CoefficientSequence(anchor_at(Z, v, precision), ())
    jet = taylor_expand(Z, v, order, precision)
    V = jet.coeffs[0]
    Vprime = jet.coeffs[1]
    anchor_v = v
    if isinstance(V, BigFloat) and isinstance(v, Fraction):
        anchor_v = to_bigfloat(v, V.precision)
    anchor = Anchor(anchor_v, V, Vprime)
    shifted = Jet((V - V,) + jet.coeffs[1:])
    inverse = revert(shifted)
    return CoefficientSequence(anchor, tuple(jet_derivatives(inverse)))


# -- series assembly and use -------------------------------------------


def assemble_root_series(coeffs: CoefficientSequence) -> SeriesApproximation:
    """Alternating series: term k is (-1)^k * derivs[k] * V^k / k!."""
    anchor = coeffs.anchor
    terms = [anchor.v]
    sums = [anchor.v]
    V_power = _one_like(anchor.V)
    for k, d in enumerate(coeffs.derivs, start=1):
        V_power = V_power * anchor.V
        sign = -1 if k % 2 else 1
        term = sign * d * V_power / factorial(k)
        terms.append(term)
        sums.append(sums[-1] + term)
    return SeriesApproximation(anchor, tuple(terms), tuple(sums))


def _one_like(x: Scalar) -> Scalar:
    return Fraction(1) if isinstance(x, Fraction) else to_bigfloat(1, x.precision)


def evaluate_truncated(series: SeriesApproximation, k: int) -> Scalar:
    if not 0 <= k <= series.order:
        raise ValueError(f"truncation order {k} outside 0..{series.order}")
    return series.partial_sums[k]


def convergence_diagnostic(series: SeriesApproximation) -> ConvergenceReport:
    """Deterministic verdict from term-magnitude ratios.

    Ratios are |t_{k+1}/t_k| over consecutive nonzero correction terms
    (k >= 1; zero terms are skipped). With fewer than two nonzero terms
    the series has terminated: converging. Otherwise, with r the largest
    of the last three ratios: diverging when r >= 1, converging when
    r <= 3/4 and the final term is smaller than the first, stalled in
    between.
    """
    if series.order < 3:
        raise ValueError("diagnostic needs a series of order >= 3")
    corrections = [t for t in series.terms[1:] if t != 0]
    ratios = tuple(
        abs(corrections[i + 1]) / abs(corrections[i]) for i in range(len(corrections) - 1)
    )
    last = abs(series.terms[-1])
    if not ratios:
        return ConvergenceReport((), Verdict.CONVERGING, last)
    r = max(ratios[-3:])
    if r >= 1:
        verdict = Verdict.DIVERGING
    elif r <= Fraction(3, 4) and last < abs(series.terms[1]):
        verdict = Verdict.CONVERGING
    else:
        verdict = Verdict.STALLED
    return ConvergenceReport(ratios, verdict, last)


def refine_anchor(
    Z: Expression,
    v0: Scalar,
    rounds: int,
    order: int = 1,
    precision: int = DEFAULT_PRECISION,
) -> Scalar:
    """Repeatedly replace the anchor with the order-k partial sum.

    With order=1 this is exactly Newton's iteration. A critical
    intermediate anchor raises :class:`NotReversibleError` carrying the
    round index.
    """
    if rounds < 0:
        raise ValueError("rounds must be >= 0")
    return refinement_trajectory(Z, v0, rounds, order, precision)[-1]


def refinement_trajectory(
    Z: Expression,
    v0: Scalar,
    rounds: int,
    order: int = 1,
    precision: int = DEFAULT_PRECISION,
) -> list[Scalar]:
    """Anchors visited by :func:`refine_anchor`, starting with v0.

    Uses the reversion route (cheap at any order); both routes produce
    identical partial sums, so this is a pure implementation choice.
    """
    anchors = [v0]
    for round_index in range(rounds):
        try:
            seq = coefficient_sequence_reversion(Z, anchors[-1], order, precision)
        except NotReversibleError:
            raise NotReversibleError(round_index=round_index) from None
        anchors.append(assemble_root_series(seq).partial_sums[order])
    return anchors


__all__ = [
    "Anchor",
    "CoefficientSequence",
    "ConvergenceReport",
    "DEFAULT_ORDER",
    "SeriesApproximation",
    "Verdict",
    "anchor_at",
    "assemble_root_series",
    "coefficient_sequence_reversion",
    "coefficient_sequence_symbolic",
    "convergence_diagnostic",
    "evaluate_truncated",
    "refine_anchor",
    "refinement_trajectory",
]

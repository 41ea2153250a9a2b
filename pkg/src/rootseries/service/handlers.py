"""Pure request -> response functions behind the HTTP endpoints.

The CLI calls these directly (in process); the FastAPI app wraps them
with error-to-status mapping. Handlers raise package exceptions only.
"""

from __future__ import annotations

from fractions import Fraction

from ..closed_forms import (
    CubicExample,
    GeneralPower,
    NthRootShift,
    SqrtShift,
    closed_form_coefficients,
    family_series_value,
)
from ..errors import (
    DomainError,
    ExactModeError,
    ExpressionSyntaxError,
    NotReversibleError,
    RootSeriesError,
    UsageError,
)
from ..expressions import parse_expression, requires_float
from ..inverse_series import (
    Anchor,
    SeriesApproximation,
    assemble_root_series,
    coefficient_sequence_reversion,
    coefficient_sequence_symbolic,
    convergence_diagnostic,
    refinement_trajectory,
)
from ..oracles import bisection_root, newton_root
from ..power_series import (
    assemble_power_series,
    log_series,
    omega_series,
    power_coefficient_sequence,
    power_coefficient_sequence_reversion,
)
from ..scalars import BigFloat, Scalar, format_scalar, ln as scalar_ln, parse_number, to_bigfloat
from . import schemas


def error_body(command: str, error: RootSeriesError) -> dict:
    """Structured record for a failed command, shared by CLI and HTTP."""
    info = schemas.ErrorInfo(code=error.code, message=str(error))
    if isinstance(error, DomainError):
        info.kind = error.kind
    if isinstance(error, ExpressionSyntaxError):
        info.position = error.position
    if isinstance(error, NotReversibleError):
        info.round = error.round_index
    return schemas.ErrorResponse(command=command, error=info).model_dump(exclude_none=True)


def _parse_anchor(text: str, precision: int) -> Scalar:
    try:
        return parse_number(text, precision)
    except (ValueError, ZeroDivisionError) as error:
        raise UsageError(f"bad number {text!r}: {error}") from None


def _parse_rational(text: str, name: str) -> Fraction:
    try:
        value = parse_number(text, 128)
    except (ValueError, ZeroDivisionError) as error:
        raise UsageError(f"bad number {text!r}: {error}") from None
    if isinstance(value, BigFloat):
        raise UsageError(f"{name} must be an integer or rational, got {text!r}")
    return value


def _resolve(expr_text: str, anchor_text: str, exact: bool, precision: int, *,
             force_float: bool = False, exact_blocker: str | None = None):
    """Parse inputs and settle the numeric mode.

    Mode is rational exactly when every ingredient permits it; ``exact``
    merely asserts that and errors otherwise.
    """
    Z = parse_expression(expr_text, precision)
    v = _parse_anchor(anchor_text, precision)
    can_exact = isinstance(v, Fraction) and not requires_float(Z) and not force_float
    if exact and not can_exact:
        reason = exact_blocker or (
            "decimal anchor" if isinstance(v, BigFloat) else "expression needs float evaluation"
        )
        raise ExactModeError(f"exact mode impossible: {reason}")
    mode = "rational" if can_exact else "float"
    if mode == "float" and isinstance(v, Fraction) and requires_float(Z) is False:
        v = to_bigfloat(v, precision)
    return Z, v, mode


def _anchor_echo(anchor: Anchor) -> schemas.AnchorEcho:
    return schemas.AnchorEcho(
        v=format_scalar(anchor.v),
        V=format_scalar(anchor.V),
        Vprime=format_scalar(anchor.Vprime),
    )


def _term_rows(series: SeriesApproximation) -> list[schemas.TermRow]:
    return [
        schemas.TermRow(k=k, term=format_scalar(t), partial_sum=format_scalar(s))
        for k, (t, s) in enumerate(zip(series.terms, series.partial_sums))
    ]


def _convergence_info(series: SeriesApproximation) -> schemas.ConvergenceInfo | None:
    if series.order < 3:
        return None
    report = convergence_diagnostic(series)
    return schemas.ConvergenceInfo(
        verdict=report.verdict.value,
        ratios=[format_scalar(r) for r in report.ratios],
        last_term_magnitude=format_scalar(report.last_term_magnitude),
    )


def _scalars_agree(a: Scalar, b: Scalar, precision: int) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    fa = a if isinstance(a, Fraction) else a.to_fraction()
    fb = b if isinstance(b, Fraction) else b.to_fraction()
    gap = abs(fa - fb)
    scale = max(abs(fa), abs(fb), Fraction(1))
    return gap <= scale * Fraction(2) ** (-(precision - 16))


def run_root(request: schemas.SeriesRequest) -> schemas.RootResponse:
    Z, v, mode = _resolve(request.expr, request.anchor, request.exact, request.precision)
    seq = coefficient_sequence_reversion(Z, v, request.order, request.precision)
    series = assemble_root_series(seq)
    return schemas.RootResponse(
        command="root",
        inputs=request,
        mode=mode,
        precision=None if mode == "rational" else request.precision,
        anchor=_anchor_echo(series.anchor),
        terms=_term_rows(series),
        value=format_scalar(series.value),
        convergence=_convergence_info(series),
    )


def run_coeffs(request: schemas.CoeffsRequest) -> schemas.CoeffsResponse:
    Z, v, mode = _resolve(request.expr, request.anchor, request.exact, request.precision)
    symbolic = coefficient_sequence_symbolic(Z, v, request.order, request.precision)
    reversion = coefficient_sequence_reversion(Z, v, request.order, request.precision)
    agree = all(
        _scalars_agree(a, b, request.precision)
        for a, b in zip(symbolic.derivs, reversion.derivs)
    )
    return schemas.CoeffsResponse(
        command="coeffs",
        inputs=request,
        mode=mode,
        precision=None if mode == "rational" else request.precision,
        anchor=_anchor_echo(symbolic.anchor),
        derivatives=[format_scalar(d) for d in symbolic.derivs],
        derivatives_reversion=[format_scalar(d) for d in reversion.derivs],
        routes_agree=agree,
    )


def run_power(request: schemas.PowerRequest) -> schemas.PowerResponse:
    n = _parse_rational(request.n, "n")
    Z, v, mode = _resolve(
        request.expr,
        request.anchor,
        request.exact,
        request.precision,
        force_float=n.denominator != 1,
        exact_blocker="non-integer exponent n" if n.denominator != 1 else None,
    )
    seq = power_coefficient_sequence_reversion(Z, v, n, request.order, request.precision)
    series = assemble_power_series(seq, request.precision)
    return schemas.PowerResponse(
        command="power",
        inputs=request,
        mode=mode,
        precision=None if mode == "rational" else request.precision,
        anchor=_anchor_echo(series.anchor),
        n=format_scalar(n),
        terms=_term_rows(series),
        value=format_scalar(series.value),
        convergence=_convergence_info(series),
    )


def run_omega(request: schemas.OmegaRequest) -> schemas.OmegaResponse:
    Z, v, mode = _resolve(request.expr, request.anchor, request.exact, request.precision)
    result = omega_series(Z, v, request.order, request.precision)
    rows = []
    running = None
    for k, term in enumerate(result.omega_terms, start=1):
        running = term if running is None else running + term
        rows.append(
            schemas.TermRow(k=k, term=format_scalar(term), partial_sum=format_scalar(running))
        )
    return schemas.OmegaResponse(
        command="omega",
        inputs=request,
        mode=mode,
        precision=None if mode == "rational" else request.precision,
        anchor=_anchor_echo(result.anchor),
        terms=rows,
        omega=format_scalar(result.omega),
    )


def run_log(request: schemas.LogRequest) -> schemas.LogResponse:
    Z, v, _ = _resolve(request.expr, request.anchor, exact=False, precision=request.precision)
    omega = omega_series(Z, v, request.order, request.precision)
    head = scalar_ln(v, request.precision)
    rows = [schemas.TermRow(k=0, term=format_scalar(head), partial_sum=format_scalar(head))]
    running = head
    for k, term in enumerate(omega.omega_terms, start=1):
        promoted = to_bigfloat(term, request.precision)
        running = running + promoted
        rows.append(
            schemas.TermRow(k=k, term=format_scalar(promoted), partial_sum=format_scalar(running))
        )
    value = log_series(Z, v, request.order, request.precision)
    return schemas.LogResponse(
        command="log",
        inputs=request,
        mode="float",
        precision=request.precision,
        anchor=_anchor_echo(omega.anchor),
        terms=rows,
        value=format_scalar(value),
    )


def run_refine(request: schemas.RefineRequest) -> schemas.RefineResponse:
    Z, v, mode = _resolve(request.expr, request.anchor, request.exact, request.precision)
    trajectory = refinement_trajectory(Z, v, request.rounds, request.order, request.precision)
    rounds = [
        schemas.RefineRound(round=i, anchor=format_scalar(x)) for i, x in enumerate(trajectory)
    ]
    return schemas.RefineResponse(
        command="refine",
        inputs=request,
        mode=mode,
        precision=None if mode == "rational" else request.precision,
        rounds=rounds,
        value=format_scalar(trajectory[-1]),
    )


def run_compare(request: schemas.CompareRequest) -> schemas.CompareResponse:
    Z, v, _ = _resolve(
        request.expr, request.anchor, exact=False, precision=request.precision, force_float=True
    )
    v = to_bigfloat(v, request.precision)
    tol = _parse_anchor(request.tol, request.precision) if request.tol else Fraction(1, 10 ** 30)
    seq = coefficient_sequence_reversion(Z, v, request.order, request.precision)
    series = assemble_root_series(seq)
    newton = newton_root(Z, v, tol, max_iter=request.max_iter, precision=request.precision)
    bisection = None
    if request.lo is not None and request.hi is not None:
        lo = _parse_anchor(request.lo, request.precision)
        hi = _parse_anchor(request.hi, request.precision)
        result = bisection_root(Z, lo, hi, tol, request.precision)
        bisection = schemas.OracleEcho(
            method=result.method,
            value=format_scalar(result.value),
            residual=format_scalar(result.residual),
            iterations=result.iterations,
        )
    gap = abs(to_bigfloat(series.value, request.precision) - to_bigfloat(newton.value, request.precision))
    return schemas.CompareResponse(
        command="compare",
        inputs=request,
        mode="float",
        precision=request.precision,
        anchor=_anchor_echo(series.anchor),
        series_value=format_scalar(series.value),
        newton=schemas.OracleEcho(
            method=newton.method,
            value=format_scalar(to_bigfloat(newton.value, request.precision)),
            residual=format_scalar(to_bigfloat(newton.residual, request.precision)),
            iterations=newton.iterations,
        ),
        bisection=bisection,
        series_vs_newton=format_scalar(gap),
    )


def _build_family(request: schemas.FamilyRequest):
    def required(value: str | None, name: str) -> Fraction:
        if value is None:
            raise UsageError(f"family {request.family!r} needs --{name}")
        return _parse_rational(value, name)

    if request.family == "sqrt-shift":
        return SqrtShift(required(request.b, "b"), required(request.c, "c"))
    if request.family == "nth-root":
        n = required(request.n, "n")
        if n.denominator != 1 or n < 1:
            raise UsageError("nth-root needs an integer n >= 1")
        return NthRootShift(required(request.b, "b"), required(request.c, "c"), int(n))
    if request.family == "cubic":
        return CubicExample()
    return GeneralPower(required(request.lam, "lambda"), required(request.a, "a"), required(request.n, "n"))


def run_family(request: schemas.FamilyRequest) -> schemas.FamilyResponse:
    family = _build_family(request)
    if isinstance(family, CubicExample) and request.order > 4:
        raise UsageError("the cubic family table stops at order 4")
    if isinstance(family, (SqrtShift, NthRootShift)):
        v = _parse_rational(request.anchor, "anchor") if request.anchor else family.b
    else:
        if request.anchor is None:
            raise UsageError(f"family {request.family!r} needs --anchor")
        v = _parse_rational(request.anchor, "anchor")

    closed = closed_form_coefficients(family, v, request.order, request.precision)
    Z = family.equation()
    if isinstance(family, GeneralPower):
        engine = power_coefficient_sequence(Z, v, Fraction(family.n), request.order, request.precision)
    else:
        engine = coefficient_sequence_symbolic(Z, v, request.order, request.precision)
    agree = all(
        _scalars_agree(a, b, request.precision) for a, b in zip(closed.derivs, engine.derivs)
    )

    terms = None
    value = None
    if isinstance(family, (SqrtShift, NthRootShift)):
        series = family_series_value(family, request.order, request.precision)
        terms = _term_rows(series)
        value = format_scalar(series.value)

    mode = "rational" if all(isinstance(d, Fraction) for d in closed.derivs) else "float"
    return schemas.FamilyResponse(
        command="family",
        inputs=request,
        mode=mode,
        precision=None if mode == "rational" else request.precision,
        anchor=_anchor_echo(closed.anchor),
        derivatives=[format_scalar(d) for d in closed.derivs],
        matches_engine=agree,
        terms=terms,
        value=value,
    )


HANDLERS = {
    "root": (schemas.SeriesRequest, run_root),
    "coeffs": (schemas.CoeffsRequest, run_coeffs),
    "power": (schemas.PowerRequest, run_power),
    "log": (schemas.LogRequest, run_log),
    "omega": (schemas.OmegaRequest, run_omega),
    "refine": (schemas.RefineRequest, run_refine),
    "compare": (schemas.CompareRequest, run_compare),
    "family": (schemas.FamilyRequest, run_family),
}

"""Command-line front end.

A thin client over the service layer: each subcommand builds the same
pydantic request the HTTP endpoint accepts, runs the handler in process
(or POSTs it to a running service with ``--server``), and prints the
response as JSON (default) or CSV. Errors print a structured record.

Exit codes: 0 success, 1 usage/parse errors, 2 domain errors
(vanishing derivative at the anchor, evaluation outside the domain),
3 oracle non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from pydantic import BaseModel, ValidationError

from .errors import (
    ExactModeError,
    ExpressionSyntaxError,
    NoConvergenceError,
    RootSeriesError,
    UsageError,
)
from .service import handlers, schemas
from .service.handlers import error_body

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_NO_CONVERGENCE = 3

_USAGE_ERRORS = (ExpressionSyntaxError, ExactModeError, UsageError)
_CODE_TO_EXIT = {
    "syntax_error": EXIT_USAGE,
    "unknown_symbol": EXIT_USAGE,
    "usage_error": EXIT_USAGE,
    "exact_mode_unavailable": EXIT_USAGE,
    "no_convergence": EXIT_NO_CONVERGENCE,
}

_RESPONSE_MODELS = {
    "root": schemas.RootResponse,
    "coeffs": schemas.CoeffsResponse,
    "power": schemas.PowerResponse,
    "log": schemas.LogResponse,
    "omega": schemas.OmegaResponse,
    "refine": schemas.RefineResponse,
    "compare": schemas.CompareResponse,
    "family": schemas.FamilyResponse,
}


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as UsageError (exit 1)."""

    def error(self, message):
        raise UsageError(message)


def _add_output(parser: argparse.ArgumentParser):
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--server", help="base URL of a running service; run there instead of in process")


def _add_shared(parser: argparse.ArgumentParser, *, exact: bool = True, order_default: int = 8):
    parser.add_argument("--expr", required=True, help="expression in z, e.g. 'z^2 - 10'")
    parser.add_argument("--anchor", required=True, help="trial value: integer, p/q or decimal")
    parser.add_argument("--order", type=int, default=order_default)
    if exact:
        parser.add_argument("--exact", action="store_true", help="force rational mode; error if impossible")
    parser.add_argument("--precision", type=int, default=128, help="BigFloat precision in bits")
    _add_output(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rootseries", description=__doc__.splitlines()[1])
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_shared(commands.add_parser("root", help="assembled root series"))
    _add_shared(commands.add_parser("coeffs", help="inverse-derivative sequence by both routes"))

    power = commands.add_parser("power", help="series for a power of the root")
    power.add_argument("--n", default="1", help="exponent of the root (integer or p/q)")
    _add_shared(power)

    _add_shared(commands.add_parser("log", help="natural logarithm of the root"), exact=False)
    _add_shared(commands.add_parser("omega", help="ln(root) - ln(anchor) series"))

    refine = commands.add_parser("refine", help="re-center the anchor on truncated sums")
    refine.add_argument("--rounds", type=int, default=1)
    _add_shared(refine, order_default=1)

    compare = commands.add_parser("compare", help="series against Newton and bisection")
    compare.add_argument("--tol", help="oracle tolerance (default 1e-30)")
    compare.add_argument("--max-iter", dest="max_iter", type=int, default=200)
    compare.add_argument("--lo", help="bisection bracket low end")
    compare.add_argument("--hi", help="bisection bracket high end")
    _add_shared(compare, exact=False)

    family = commands.add_parser("family", help="closed-form coefficient tables")
    family.add_argument("--family", required=True, choices=("sqrt-shift", "nth-root", "cubic", "general-power"))
    family.add_argument("--b")
    family.add_argument("--c")
    family.add_argument("--n")
    family.add_argument("--lambda", dest="lam")
    family.add_argument("--a")
    family.add_argument("--anchor")
    family.add_argument("--order", type=int, default=4)
    family.add_argument("--precision", type=int, default=128)
    _add_output(family)

    return parser


def _build_request(args: argparse.Namespace) -> BaseModel:
    model, _ = handlers.HANDLERS[args.command]
    fields = {name: getattr(args, name) for name in model.model_fields if hasattr(args, name)}
    return model(**{k: v for k, v in fields.items() if v is not None})


def _render_csv(response: BaseModel) -> str:
    data = response.model_dump()
    lines: list[str] = []
    if data.get("terms") is not None:
        lines.append("k,term,partial_sum")
        for row in data["terms"]:
            lines.append(f"{row['k']},{row['term']},{row['partial_sum']}")
    elif "rounds" in data:
        lines.append("round,anchor")
        for row in data["rounds"]:
            lines.append(f"{row['round']},{row['anchor']}")
    elif "derivatives" in data:
        lines.append("k,derivative")
        for k, value in enumerate(data["derivatives"], start=1):
            lines.append(f"{k},{value}")
    elif "newton" in data:
        lines.append("method,value,residual")
        lines.append(f"series,{data['series_value']},")
        newton = data["newton"]
        lines.append(f"newton,{newton['value']},{newton['residual']}")
        if data.get("bisection"):
            bisection = data["bisection"]
            lines.append(f"bisection,{bisection['value']},{bisection['residual']}")
    else:
        raise UsageError(f"{data.get('command', '?')} has no CSV form")
    return "\n".join(lines)


def _emit(response: BaseModel, output_format: str) -> None:
    if output_format == "csv":
        print(_render_csv(response))
    else:
        print(response.model_dump_json(indent=2))


def _run_remote(server: str, command: str, request: BaseModel, output_format: str) -> int:
    import httpx

    url = server.rstrip("/") + "/" + command
    try:
        reply = httpx.post(url, json=request.model_dump(), timeout=60.0)
        body = reply.json()
    except httpx.HTTPError as error:
        raise UsageError(f"cannot reach server {server!r}: {error}") from None
    if reply.status_code == 200:
        _emit(_RESPONSE_MODELS[command].model_validate(body), output_format)
        return EXIT_OK
    print(json.dumps(body, indent=2))
    code = body.get("error", {}).get("code", "")
    return _CODE_TO_EXIT.get(code, EXIT_DOMAIN)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    command = "?"
    try:
        args = parser.parse_args(argv)
        command = args.command
        request = _build_request(args)
        if args.server:
            return _run_remote(args.server, command, request, args.format)
        _, handler = handlers.HANDLERS[command]
        _emit(handler(request), args.format)
        return EXIT_OK
    except ValidationError as error:
        first = error.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        message = f"{location}: {first.get('msg', 'invalid value')}" if location else str(first.get("msg"))
        record = schemas.ErrorResponse(
            command=command, error=schemas.ErrorInfo(code="usage_error", message=message)
        )
        print(record.model_dump_json(indent=2))
        return EXIT_USAGE
    except RootSeriesError as error:
        print(json.dumps(error_body(command, error), indent=2))
        if isinstance(error, _USAGE_ERRORS):
            return EXIT_USAGE
        if isinstance(error, NoConvergenceError):
            return EXIT_NO_CONVERGENCE
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())

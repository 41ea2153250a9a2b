"""FastAPI wiring for the compute service.

Every engine error becomes a structured JSON body with a stable
``error.code``; statuses are 400 for malformed requests and 422 for
domain-level failures (including oracle non-convergence). Clients key
off ``error.code``, not the status.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import ExactModeError, ExpressionSyntaxError, RootSeriesError, UsageError
from . import handlers, schemas
from .handlers import error_body

_BAD_REQUEST = (ExpressionSyntaxError, ExactModeError, UsageError)


def create_app() -> FastAPI:
    app = FastAPI(title="rootseries", version=__version__)

    @app.exception_handler(RootSeriesError)
    async def _handle_package_error(request: Request, error: RootSeriesError):
        command = request.url.path.strip("/").split("/")[-1]
        status = 400 if isinstance(error, _BAD_REQUEST) else 422
        return JSONResponse(status_code=status, content=error_body(command, error))

    @app.get("/health")
    def health():
        return {"status": "ok", "version": __version__}

    @app.post("/root", response_model=schemas.RootResponse)
    def root(request: schemas.SeriesRequest):
        return handlers.run_root(request)

    @app.post("/coeffs", response_model=schemas.CoeffsResponse)
    def coeffs(request: schemas.CoeffsRequest):
        return handlers.run_coeffs(request)

    @app.post("/power", response_model=schemas.PowerResponse)
    def power(request: schemas.PowerRequest):
        return handlers.run_power(request)

    @app.post("/log", response_model=schemas.LogResponse)
    def log(request: schemas.LogRequest):
        return handlers.run_log(request)

    @app.post("/omega", response_model=schemas.OmegaResponse)
    def omega(request: schemas.OmegaRequest):
        return handlers.run_omega(request)

    @app.post("/refine", response_model=schemas.RefineResponse)
    def refine(request: schemas.RefineRequest):
        return handlers.run_refine(request)

    @app.post("/compare", response_model=schemas.CompareResponse)
    def compare(request: schemas.CompareRequest):
        return handlers.run_compare(request)

    @app.post("/family", response_model=schemas.FamilyResponse)
    def family(request: schemas.FamilyRequest):
        return handlers.run_family(request)

    return app


app = create_app()

"""Request and response models for the compute service.

Every numeric value crosses the wire as a string: rationals as ``p/q``,
floats as round-trip-exact decimals. That keeps exact results exact and
makes responses byte-stable, which the CLI relies on for golden output.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SeriesRequest(_Request):
    expr: str
    anchor: str
    order: int = Field(default=8, ge=0, le=64)
    exact: bool = False
    precision: int = Field(default=128, ge=64, le=4096)


class CoeffsRequest(SeriesRequest):
    # the symbolic route's expression chain grows steeply with order
    order: int = Field(default=8, ge=0, le=16)


class PowerRequest(SeriesRequest):
    n: str = "1"


class LogRequest(_Request):
    expr: str
    anchor: str
    order: int = Field(default=8, ge=1, le=64)
    precision: int = Field(default=128, ge=64, le=4096)


class OmegaRequest(_Request):
    expr: str
    anchor: str
    order: int = Field(default=8, ge=1, le=64)
    exact: bool = False
    precision: int = Field(default=128, ge=64, le=4096)


class RefineRequest(_Request):
    expr: str
    anchor: str
    rounds: int = Field(default=1, ge=0, le=64)
    order: int = Field(default=1, ge=1, le=64)
    exact: bool = False
    precision: int = Field(default=128, ge=64, le=4096)


class CompareRequest(_Request):
    expr: str
    anchor: str
    order: int = Field(default=8, ge=1, le=64)
    precision: int = Field(default=128, ge=64, le=4096)
    tol: Optional[str] = None
    max_iter: int = Field(default=200, ge=1, le=100000)
    lo: Optional[str] = None
    hi: Optional[str] = None


class FamilyRequest(_Request):
    family: Literal["sqrt-shift", "nth-root", "cubic", "general-power"]
    b: Optional[str] = None
    c: Optional[str] = None
    n: Optional[str] = None
    lam: Optional[str] = None
    a: Optional[str] = None
    anchor: Optional[str] = None
    order: int = Field(default=4, ge=1, le=16)
    precision: int = Field(default=128, ge=64, le=4096)


class AnchorEcho(BaseModel):
    v: str
    V: str
    Vprime: str


class TermRow(BaseModel):
    k: int
    term: str
    partial_sum: str


class ConvergenceInfo(BaseModel):
    verdict: Literal["converging", "stalled", "diverging"]
    ratios: list[str]
    last_term_magnitude: str


class RootResponse(BaseModel):
    command: str
    inputs: SeriesRequest
    mode: Literal["rational", "float"]
    precision: Optional[int]
    anchor: AnchorEcho
    terms: list[TermRow]
    value: str
    convergence: ConvergenceInfo


class CoeffsResponse(BaseModel):
    command: str
    inputs: CoeffsRequest
    mode: Literal["rational", "float"]
    precision: Optional[int]
    anchor: AnchorEcho
    derivatives: list[str]
    derivatives_reversion: list[str]
    routes_agree: bool


class PowerResponse(BaseModel):
    command: str
    inputs: PowerRequest
    mode: Literal["rational", "float"]
    precision: Optional[int]
    anchor: AnchorEcho
    n: str
    terms: list[TermRow]
    value: str
    convergence: Optional[ConvergenceInfo]


class OmegaResponse(BaseModel):
    command: str
    inputs: OmegaRequest
    mode: Literal["rational", "float"]
    precision: Optional[int]
    anchor: AnchorEcho
    terms: list[TermRow]
    omega: str


class LogResponse(BaseModel):
    command: str
    inputs: LogRequest
    mode: Literal["float"]
    precision: int
    anchor: AnchorEcho
    terms: list[TermRow]
    value: str


class RefineRound(BaseModel):
    round: int
    anchor: str


class RefineResponse(BaseModel):
    command: str
    inputs: RefineRequest
    mode: Literal["rational", "float"]
    precision: Optional[int]
    rounds: list[RefineRound]
    value: str


class OracleEcho(BaseModel):
    method: str
    value: str
    residual: str
    iterations: int


class CompareResponse(BaseModel):
    command: str
    inputs: CompareRequest
    mode: Literal["float"]
    precision: int
    anchor: AnchorEcho
    series_value: str
    newton: OracleEcho
    bisection: Optional[OracleEcho]
    series_vs_newton: str


class FamilyResponse(BaseModel):
    command: str
    inputs: FamilyRequest
    mode: Literal["rational", "float"]
    precision: Optional[int]
    anchor: AnchorEcho
    derivatives: list[str]
    matches_engine: bool
    terms: Optional[list[TermRow]]
    value: Optional[str]


class ErrorInfo(BaseModel):
    code: str
    message: str
    kind: Optional[str] = None
    position: Optional[int] = None
    round: Optional[int] = None


class ErrorResponse(BaseModel):
    command: str
    error: ErrorInfo

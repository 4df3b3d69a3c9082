"""HTTP service exposing sweeps, wavefunction tables and the check suite.

The endpoints wrap the core package one-to-one: POST /sweep runs a full
alpha sweep from a RunConfig body and returns rows plus the deterministic
CSV text, POST /wavefunctions samples the first five states at one alpha,
GET /check runs the invariant suite.  Numerical failures inside a sweep
stay in their row; failures of a whole request map to HTTP 500.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from pydantic import BaseModel, Field

from . import __version__
from .checks import run_checks
from .config import RunConfig
from .exceptions import CalibrationError, NumericError
from .hamiltonian import ALPHA_MAX, ALPHA_MIN
from .sweep import SWEEP_COLUMNS, emit_wavefunctions, run_sweep


class SweepRowModel(BaseModel):
    alpha: float
    b_offset: Optional[float] = None
    e0: Optional[float] = None
    e1: Optional[float] = None
    e2: Optional[float] = None
    e10: Optional[float] = None
    e20: Optional[float] = None
    lam00: Optional[float] = None
    lam11: Optional[float] = None
    lam10: Optional[float] = None
    lam20: Optional[float] = None
    kappa1: Optional[float] = None
    kappa2: Optional[float] = None
    kappa1_app: Optional[float] = None
    kappa2_app: Optional[float] = None
    kappa2_max_frac: Optional[float] = None
    trk00_residual: Optional[float] = None
    converged: bool
    error: str = ""


class SweepResponse(BaseModel):
    columns: list[str]
    rows: list[SweepRowModel]
    csv: str
    artifacts: dict[str, str] = Field(default_factory=dict)
    all_converged: bool
    any_error: bool


class WavefunctionsRequest(BaseModel):
    config: RunConfig = Field(default_factory=RunConfig)
    alpha: float = Field(ge=ALPHA_MIN, le=ALPHA_MAX)


class WavefunctionsResponse(BaseModel):
    alpha: float
    b_offset: float
    csv: str


class CheckItemModel(BaseModel):
    name: str
    passed: bool
    detail: str


class CheckResponse(BaseModel):
    passed: bool
    items: list[CheckItemModel]


app = FastAPI(
    title="frackappa",
    version=__version__,
    description=(
        "Static polarizability and hyperpolarizability of one-dimensional "
        "space-fractional quantum systems"
    ),
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/sweep", response_model=SweepResponse)
def sweep(config: RunConfig) -> SweepResponse:
    result = run_sweep(config)
    rows = [SweepRowModel(**row.__dict__) for row in result.rows]
    return SweepResponse(
        columns=SWEEP_COLUMNS,
        rows=rows,
        csv=result.csv_text,
        artifacts=result.artifacts,
        all_converged=result.all_converged,
        any_error=result.any_error,
    )


@app.post("/wavefunctions", response_model=WavefunctionsResponse)
def wavefunctions(request: WavefunctionsRequest) -> WavefunctionsResponse:
    if not ALPHA_MIN < request.alpha <= ALPHA_MAX:
        raise HTTPException(
            status_code=422,
            detail=f"alpha must lie in ({ALPHA_MIN}, {ALPHA_MAX}]",
        )
    try:
        csv_text, b = emit_wavefunctions(request.config, request.alpha)
    except (NumericError, CalibrationError) as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    return WavefunctionsResponse(alpha=request.alpha, b_offset=b, csv=csv_text)


@app.get("/check", response_model=CheckResponse)
def check(full: bool = Query(default=True)) -> CheckResponse:
    outcomes = run_checks(full=full)
    return CheckResponse(
        passed=all(o.passed for o in outcomes),
        items=[CheckItemModel(**o.__dict__) for o in outcomes],
    )

"""FastAPI application exposing the verification toolkit over HTTP.

Run with:  uvicorn momentpoly.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import MomentPolyError
from . import handlers
from .models import (
    BinomialExampleRequest,
    HealthResponse,
    HullRequest,
    HullResponse,
    ShowRequest,
    ShowResponse,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(
    title="momentpoly",
    description="Moment-polytope and Kahler verification suites for finite exponential families",
    version="0.1.0",
)


@app.exception_handler(MomentPolyError)
async def _domain_error(request: Request, exc: MomentPolyError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=app.version)


@app.post("/family/show", response_model=ShowResponse)
def family_show(req: ShowRequest) -> ShowResponse:
    return handlers.show(req)


@app.post("/family/hull", response_model=HullResponse)
def family_hull(req: HullRequest) -> HullResponse:
    return handlers.marginal_hull(req)


@app.post("/verify/theorem", response_model=VerifyResponse)
def verify_theorem(req: VerifyRequest) -> VerifyResponse:
    return handlers.verify_theorem(req)


@app.post("/verify/corollary", response_model=VerifyResponse)
def verify_corollary(req: VerifyRequest) -> VerifyResponse:
    return handlers.verify_corollary(req)


@app.post("/verify/identity", response_model=VerifyResponse)
def verify_identity(req: VerifyRequest) -> VerifyResponse:
    return handlers.verify_identity(req)


@app.post("/verify/kahler", response_model=VerifyResponse)
def verify_kahler(req: VerifyRequest) -> VerifyResponse:
    return handlers.verify_kahler(req)


@app.post("/example/binomial", response_model=VerifyResponse)
def example_binomial(req: BinomialExampleRequest) -> VerifyResponse:
    return handlers.example_binomial(req)

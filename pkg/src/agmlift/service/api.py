"""FastAPI application exposing the toolkit as a stateless compute service."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import ComputationError, InvalidInputError
from . import ops
from .models import (
    AgmRequest,
    AgmResponse,
    CountBatchRequest,
    CountBatchResponse,
    CountRequest,
    CountResponse,
    ErrorResponse,
    LiftRequest,
    LiftResponse,
    SelftestRequest,
    SelftestResponse,
    VerifyRequest,
    VerifyResponse,
)

_ERROR_RESPONSES = {
    400: {"model": ErrorResponse},
    422: {"model": ErrorResponse},
}


def create_app() -> FastAPI:
    app = FastAPI(
        title="agmlift",
        description=(
            "2-adic mean recursions, canonical theta null point lifting, and "
            "point counting over binary fields."
        ),
        version="0.1.0",
    )

    @app.exception_handler(InvalidInputError)
    async def _bad_input(request: Request, exc: InvalidInputError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(ComputationError)
    async def _failed(request: Request, exc: ComputationError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.post("/count", response_model=CountResponse, responses=_ERROR_RESPONSES)
    def count(req: CountRequest):
        return ops.run_count(req)

    @app.post("/count/batch", response_model=CountBatchResponse, responses=_ERROR_RESPONSES)
    def count_batch(req: CountBatchRequest):
        return ops.run_count_batch(req)

    @app.post("/lift", response_model=LiftResponse, responses=_ERROR_RESPONSES)
    def lift(req: LiftRequest):
        return ops.run_lift(req)

    @app.post("/agm", response_model=AgmResponse, responses=_ERROR_RESPONSES)
    def agm(req: AgmRequest):
        return ops.run_agm(req)

    @app.post("/verify", response_model=VerifyResponse, responses=_ERROR_RESPONSES)
    def verify(req: VerifyRequest):
        return ops.run_verify(req)

    @app.post("/selftest", response_model=SelftestResponse, responses=_ERROR_RESPONSES)
    def selftest(req: SelftestRequest):
        return ops.run_selftest(req)

    return app


app = create_app()

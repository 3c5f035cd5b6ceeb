"""FastAPI application wrapping the service layer.

Domain errors map to HTTP statuses: invalid parameters to 400, instances
that cannot be processed (disconnected, conditioning exhausted, all
trials truncated) to 409, and internal invariant failures to 500. The
response body always carries the error class name and message.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    AllTrialsTruncatedError,
    ConnectivityNotAchievedError,
    DeterministicCheckError,
    DisconnectedInstanceError,
    EigensolverError,
    HyperwalkError,
    ParameterError,
)
from . import handlers
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)

_STATUS_BY_ERROR = (
    (ParameterError, 400),
    (ConnectivityNotAchievedError, 409),
    (DisconnectedInstanceError, 409),
    (AllTrialsTruncatedError, 409),
    (DeterministicCheckError, 500),
    (EigensolverError, 500),
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="hyperwalk",
        version=__version__,
        description="Random-walk analysis of random uniform hypergraphs",
    )

    @app.exception_handler(HyperwalkError)
    async def domain_error_handler(request: Request, exc: HyperwalkError):
        status = 500
        for cls, code in _STATUS_BY_ERROR:
            if isinstance(exc, cls):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "message": str(exc)},
        )

    @app.get("/health", response_model=HealthResponse)
    def health():
        return handlers.health()

    @app.post("/generate", response_model=GenerateResponse)
    def generate(req: GenerateRequest):
        return handlers.handle_generate(req)

    @app.post("/analyze", response_model=AnalyzeResponse)
    def analyze(req: AnalyzeRequest):
        return handlers.handle_analyze(req)

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest):
        return handlers.handle_simulate(req)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        return handlers.handle_verify(req)

    return app


app = create_app()

"""HTTP front end: the same experiments the CLI runs locally."""
from __future__ import annotations

import math

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import ConfigError, ZakharovError
from ..harness.config import EXPERIMENTS, validate_config
from ..harness.runner import execute
from .schemas import ErrorResponse, Health, RunRequest, RunResponse


def _finite(obj):
    """JSON has no NaN or infinity; map them to null."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def result_payload(res) -> RunResponse:
    return RunResponse(
        experiment=res.experiment,
        exit_code=res.exit_code,
        passed=res.passed,
        summary=_finite(res.summary),
        checks={k: bool(v) for k, v in res.checks.items()},
        blowup=res.blowup,
        tables=_finite(res.tables),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="zakharov-lab", version=__version__)

    @app.get("/health", response_model=Health)
    def health():
        return Health(version=__version__)

    @app.get("/experiments", response_model=list[str])
    def experiments():
        return list(EXPERIMENTS)

    @app.post(
        "/runs",
        response_model=RunResponse,
        responses={422: {"model": ErrorResponse}},
    )
    def run(req: RunRequest):
        # a plain def endpoint runs in the worker pool, keeping the loop free
        try:
            cfg = validate_config(req.config)
            res = execute(cfg, req.out)
        except ConfigError as err:
            body = ErrorResponse(detail=str(err), key=err.key, exit_code=2)
            return JSONResponse(status_code=422, content=body.model_dump())
        except ZakharovError as err:
            body = ErrorResponse(detail=str(err), exit_code=2)
            return JSONResponse(status_code=422, content=body.model_dump())
        return result_payload(res)

    return app


app = create_app()

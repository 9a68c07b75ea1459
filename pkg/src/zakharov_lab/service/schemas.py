"""Request and response bodies for the run service."""
from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field


class RunRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: dict[str, Any] = Field(default_factory=dict, description="run configuration document")
    out: Optional[str] = Field(None, description="directory on the server for artifacts")


class RunResponse(BaseModel):
    experiment: str
    exit_code: int
    passed: bool
    summary: dict[str, Any]
    checks: dict[str, bool]
    blowup: Optional[dict[str, Any]] = None
    tables: dict[str, list[dict[str, Any]]] = Field(default_factory=dict)


class ErrorResponse(BaseModel):
    detail: str
    key: Optional[str] = None
    exit_code: int


class Health(BaseModel):
    status: str = "ok"
    version: str

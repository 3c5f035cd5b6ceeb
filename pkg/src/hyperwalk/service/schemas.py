"""Pydantic request/response models for the HTTP service and the CLI."""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class HypergraphDoc(BaseModel):
    """Wire form of a hypergraph; matches the canonical JSON file format."""

    n: int
    d: int
    edges: list[list[int]]


class GenerateRequest(BaseModel):
    n: int = Field(ge=2)
    d: int = Field(ge=2)
    p: float = Field(ge=0.0, le=1.0)
    seed: int
    connected: bool = False
    max_resamples: int = Field(default=100, ge=1)


class GenerateResponse(BaseModel):
    hypergraph: HypergraphDoc
    edge_count: int
    connected: bool


class AnalyzeRequest(BaseModel):
    hypergraph: HypergraphDoc
    include_oracle: bool = False


class AnalyzeResponse(BaseModel):
    model_config = ConfigDict(extra="allow")

    analysis: dict
    all_checks_passed: bool


class SimulateRequest(BaseModel):
    hypergraph: HypergraphDoc
    estimator: Literal["hitting", "commute", "cover"]
    seed: int
    trials: int = Field(ge=1)
    max_steps: int = Field(default=10**8, ge=1)
    semantics: Literal["two_stage", "weighted_graph"] = "two_stage"
    i: Optional[int] = None
    j: Optional[int] = None
    start: Optional[int] = None


class SimulateResponse(BaseModel):
    estimator: str
    mean: float
    stderr: float
    trials_used: int
    truncated: int
    biased: bool
    values: list[int]


class SeedSpec(BaseModel):
    count: int = Field(ge=1)
    base: int = 1


class GridPointModel(BaseModel):
    n: int = Field(ge=2)
    d: int = Field(ge=2)
    p: Optional[float] = None
    degree_c: Optional[float] = None


class ExperimentConfigModel(BaseModel):
    grid: list[GridPointModel]
    seeds: Union[list[int], SeedSpec]
    bands: dict = {}
    mc: dict = {}
    max_resamples: int = Field(default=50, ge=1)


class VerifyRequest(BaseModel):
    config: ExperimentConfigModel


class VerifyResponse(BaseModel):
    report: dict
    deterministic_ok: bool
    statistical_ok: bool


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorBody(BaseModel):
    error: str
    message: str

"""Service layer: one function per endpoint, shared by HTTP and CLI.

Handlers accept and return the pydantic models from
:mod:`hyperwalk.service.schemas` and raise the package's domain errors;
transport-specific concerns (HTTP status codes, exit codes, files) stay
in the callers.
"""

from __future__ import annotations

from .. import __version__
from ..analysis import analyze
from ..errors import ParameterError
from ..hypergraph import GenerationParams, generate, is_connected, normalized
from ..montecarlo import WalkConfig, estimate_commute, estimate_cover, estimate_hitting
from ..verify import config_from_dict, run_verification
from .schemas import (
    AnalyzeRequest,
    AnalyzeResponse,
    GenerateRequest,
    GenerateResponse,
    HealthResponse,
    HypergraphDoc,
    SimulateRequest,
    SimulateResponse,
    VerifyRequest,
    VerifyResponse,
)


def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


def handle_generate(req: GenerateRequest) -> GenerateResponse:
    params = GenerationParams(
        n=req.n,
        d=req.d,
        p=req.p,
        seed=req.seed,
        condition_on_connected=req.connected,
        max_resamples=req.max_resamples,
    )
    h = generate(params)
    return GenerateResponse(
        hypergraph=HypergraphDoc(n=h.n, d=h.d, edges=[list(e) for e in h.edges]),
        edge_count=h.num_edges,
        connected=is_connected(h),
    )


def _to_hypergraph(doc: HypergraphDoc):
    return normalized(doc.n, doc.d, doc.edges)


def handle_analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    h = _to_hypergraph(req.hypergraph)
    report = analyze(h, include_oracle=req.include_oracle)
    return AnalyzeResponse(analysis=report, all_checks_passed=report["all_checks_passed"])


def handle_simulate(req: SimulateRequest) -> SimulateResponse:
    h = _to_hypergraph(req.hypergraph)
    if req.estimator in ("hitting", "commute"):
        if req.i is None or req.j is None:
            raise ParameterError(f"{req.estimator} estimator needs both i and j")
        cfg = WalkConfig(
            seed=req.seed, trials=req.trials, max_steps=req.max_steps,
            semantics=req.semantics,
        )
        fn = estimate_hitting if req.estimator == "hitting" else estimate_commute
        est = fn(h, req.i, req.j, cfg)
    else:
        start_rule = "fixed" if req.start is not None else "stationary"
        cfg = WalkConfig(
            seed=req.seed, trials=req.trials, max_steps=req.max_steps,
            semantics=req.semantics, start_rule=start_rule,
        )
        est = estimate_cover(h, cfg, start=req.start)
    return SimulateResponse(
        estimator=req.estimator,
        mean=est.mean,
        stderr=est.stderr,
        trials_used=est.trials_used,
        truncated=est.truncated,
        biased=est.biased,
        values=list(est.values),
    )


def handle_verify(req: VerifyRequest) -> VerifyResponse:
    cfg = config_from_dict(req.config.model_dump(exclude_none=True))
    report = run_verification(cfg)
    return VerifyResponse(
        report=report,
        deterministic_ok=report["status"]["deterministic_ok"],
        statistical_ok=report["status"]["statistical_ok"],
    )

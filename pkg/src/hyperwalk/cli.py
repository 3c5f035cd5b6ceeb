"""Command-line front end.

Every subcommand builds the same pydantic request models the HTTP service
accepts and dispatches them through the service layer, in-process by
default or against a running server with ``--server URL``. The CLI itself
only parses arguments, moves files, and maps outcomes onto the exit-code
contract:

    0  success
    1  usage error (bad flags, malformed config)
    2  generation failure (connectivity conditioning exhausted)
    3  bad instance (disconnected, malformed file, unusable estimate)
    4  deterministic-check failure (an exact identity failed: a bug)
    5  statistical-band failure (an asymptotic band missed at this n)

``HYPERWALK_OUT`` sets the default output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import errors
from .errors import (
    AllTrialsTruncatedError,
    ConnectivityNotAchievedError,
    DeterministicCheckError,
    DisconnectedInstanceError,
    EigensolverError,
    HyperwalkError,
    ParameterError,
)
from .hypergraph import normalized, to_json
from .service import handlers
from .service.schemas import (
    AnalyzeRequest,
    GenerateRequest,
    HypergraphDoc,
    SimulateRequest,
    VerifyRequest,
    ExperimentConfigModel,
)

OUT_ENV = "HYPERWALK_OUT"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GENERATION = 2
EXIT_BAD_INSTANCE = 3
EXIT_DETERMINISTIC = 4
EXIT_STATISTICAL = 5


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that signals usage errors instead of exiting with code 2."""

    def error(self, message):
        raise _UsageError(message)


class ServiceClient:
    """Dispatches requests in-process or to a remote service."""

    def __init__(self, server: str | None = None):
        self.server = server.rstrip("/") if server else None

    def _post(self, path: str, payload: dict) -> dict:
        import httpx

        resp = httpx.post(self.server + path, json=payload, timeout=None)
        if resp.status_code >= 400:
            self._raise_remote(resp)
        return resp.json()

    @staticmethod
    def _raise_remote(resp) -> None:
        try:
            body = resp.json()
        except ValueError:
            body = {}
        name = body.get("error", "")
        message = body.get("message", resp.text)
        if resp.status_code == 422:
            raise ParameterError(f"request rejected by server: {message}")
        cls = getattr(errors, name, None)
        if isinstance(cls, type) and issubclass(cls, HyperwalkError):
            if cls is ConnectivityNotAchievedError:
                raise HyperwalkGenerationFailure(message)
            raise cls(message)
        raise HyperwalkError(f"server error {resp.status_code}: {message}")

    def generate(self, req: GenerateRequest):
        if self.server is None:
            return handlers.handle_generate(req)
        from .service.schemas import GenerateResponse

        return GenerateResponse(**self._post("/generate", req.model_dump()))

    def analyze(self, req: AnalyzeRequest):
        if self.server is None:
            return handlers.handle_analyze(req)
        from .service.schemas import AnalyzeResponse

        return AnalyzeResponse(**self._post("/analyze", req.model_dump()))

    def simulate(self, req: SimulateRequest):
        if self.server is None:
            return handlers.handle_simulate(req)
        from .service.schemas import SimulateResponse

        return SimulateResponse(**self._post("/simulate", req.model_dump()))

    def verify(self, req: VerifyRequest):
        if self.server is None:
            return handlers.handle_verify(req)
        from .service.schemas import VerifyResponse

        return VerifyResponse(**self._post("/verify", req.model_dump()))


class HyperwalkGenerationFailure(HyperwalkError):
    """Remote stand-in for ConnectivityNotAchievedError (no params echo)."""


def _out_dir(explicit: str | None) -> Path:
    return Path(explicit or os.environ.get(OUT_ENV, "."))


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _canonical(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _load_hypergraph_doc(path: str) -> HypergraphDoc:
    try:
        with open(path) as fh:
            doc = json.load(fh)
        return HypergraphDoc(n=int(doc["n"]), d=int(doc["d"]), edges=doc["edges"])
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise DisconnectedInstanceError(f"cannot load instance {path}: {exc}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="hyperwalk", description=__doc__)
    parser.add_argument("--server", help="base URL of a running service; default runs in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="sample a hypergraph and write its JSON file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--p", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--connected", action="store_true",
                   help="resample until connected")
    g.add_argument("--max-resamples", type=int, default=100)
    g.add_argument("--out", help="output file (default derived inside the output dir)")

    a = sub.add_parser("analyze", help="exact spectral/walk analysis of an instance file")
    a.add_argument("instance", help="hypergraph JSON file")
    a.add_argument("--out", help="analysis JSON file (default stdout)")
    a.add_argument("--oracle", action="store_true",
                   help="also run the linear-system hitting oracle (O(n^4))")

    s = sub.add_parser("simulate", help="Monte Carlo estimate on an instance file")
    s.add_argument("instance", help="hypergraph JSON file")
    s.add_argument("--estimator", choices=["hitting", "commute", "cover"], required=True)
    s.add_argument("--i", type=int)
    s.add_argument("--j", type=int)
    s.add_argument("--start", type=int, help="cover start vertex (default: stationary draw)")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--max-steps", type=int, default=10**8)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--semantics", choices=["two_stage", "weighted_graph"],
                   default="two_stage")
    s.add_argument("--out", help="output prefix; writes <out>.json and <out>.csv")

    v = sub.add_parser("verify", help="run the verification battery over a config")
    v.add_argument("--config", required=True, help="experiment config JSON file")
    v.add_argument("--out", help="output directory (default $HYPERWALK_OUT or .)")
    v.add_argument("--tolerance", action="append", default=[], metavar="KEY=VALUE",
                   help="override a band, e.g. --tolerance eps=0.1 (repeatable)")

    r = sub.add_parser("serve", help="run the HTTP service")
    r.add_argument("--host", default="127.0.0.1")
    r.add_argument("--port", type=int, default=8000)
    return parser


def _cmd_generate(args, client: ServiceClient) -> int:
    req = GenerateRequest(
        n=args.n, d=args.d, p=args.p, seed=args.seed,
        connected=args.connected, max_resamples=args.max_resamples,
    )
    resp = client.generate(req)
    h = normalized(resp.hypergraph.n, resp.hypergraph.d, resp.hypergraph.edges)
    out = Path(args.out) if args.out else (
        _out_dir(None) / f"hypergraph_n{args.n}_d{args.d}_seed{args.seed}.json"
    )
    _write_text(out, to_json(h))
    print(f"wrote {out} edges={resp.edge_count} connected={resp.connected}")
    return EXIT_OK


def _cmd_analyze(args, client: ServiceClient) -> int:
    doc = _load_hypergraph_doc(args.instance)
    resp = client.analyze(AnalyzeRequest(hypergraph=doc, include_oracle=args.oracle))
    text = _canonical(resp.analysis)
    if args.out:
        _write_text(Path(args.out), text)
        print(f"wrote {args.out} checks_passed={resp.all_checks_passed}")
    else:
        sys.stdout.write(text)
    return EXIT_OK if resp.all_checks_passed else EXIT_DETERMINISTIC


def _cmd_simulate(args, client: ServiceClient) -> int:
    doc = _load_hypergraph_doc(args.instance)
    req = SimulateRequest(
        hypergraph=doc, estimator=args.estimator, seed=args.seed,
        trials=args.trials, max_steps=args.max_steps, semantics=args.semantics,
        i=args.i, j=args.j, start=args.start,
    )
    resp = client.simulate(req)
    summary = {
        "estimator": resp.estimator,
        "mean": resp.mean,
        "stderr": resp.stderr,
        "trials_used": resp.trials_used,
        "truncated": resp.truncated,
        "biased": resp.biased,
    }
    if args.out:
        _write_text(Path(str(args.out) + ".json"), _canonical(summary))
        csv = "trial_index,value\n" + "".join(
            f"{t},{v}\n" for t, v in enumerate(resp.values)
        )
        _write_text(Path(str(args.out) + ".csv"), csv)
        print(f"wrote {args.out}.json and {args.out}.csv")
    else:
        sys.stdout.write(_canonical(summary))
    if resp.biased:
        print(
            f"warning: {resp.truncated}/{resp.trials_used} trials hit the step cap; "
            "the estimate is biased low",
            file=sys.stderr,
        )
    return EXIT_OK


def _parse_tolerances(pairs: list[str]) -> dict:
    overrides = {}
    for item in pairs:
        key, sep, value = item.partition("=")
        if not sep:
            raise _UsageError(f"--tolerance expects KEY=VALUE, got {item!r}")
        try:
            overrides[key] = int(value) if value.isdigit() else float(value)
        except ValueError as exc:
            raise _UsageError(f"--tolerance {item!r}: {exc}") from exc
    return overrides


def _cmd_verify(args, client: ServiceClient) -> int:
    try:
        with open(args.config) as fh:
            doc = json.load(fh)
    except (OSError, ValueError) as exc:
        raise _UsageError(f"cannot read config {args.config}: {exc}") from exc
    bands = dict(doc.get("bands", {}))
    bands.update(_parse_tolerances(args.tolerance))
    if bands:
        doc["bands"] = bands
    try:
        model = ExperimentConfigModel(**doc)
    except Exception as exc:
        raise _UsageError(f"invalid config: {exc}") from exc

    resp = client.verify(VerifyRequest(config=model))
    report = resp.report

    from .verify import avg_target_csv, gap_csv, report_json

    out_dir = _out_dir(args.out)
    _write_text(out_dir / "report.json", report_json(report))
    _write_text(out_dir / "avg_target.csv", avg_target_csv(report))
    _write_text(out_dir / "gap.csv", gap_csv(report))

    for name, verdict in sorted(report["theorems"].items()):
        print(f"{name}: {'PASS' if verdict['passed'] else 'FAIL'}")
    print(
        f"deterministic_ok={resp.deterministic_ok} "
        f"statistical_ok={resp.statistical_ok} -> {out_dir}/report.json"
    )
    if not resp.deterministic_ok:
        return EXIT_DETERMINISTIC
    if not resp.statistical_ok:
        return EXIT_STATISTICAL
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    client = ServiceClient(args.server)
    try:
        if args.command == "generate":
            return _cmd_generate(args, client)
        if args.command == "analyze":
            return _cmd_analyze(args, client)
        if args.command == "simulate":
            return _cmd_simulate(args, client)
        if args.command == "verify":
            return _cmd_verify(args, client)
        if args.command == "serve":
            return _cmd_serve(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConnectivityNotAchievedError, HyperwalkGenerationFailure) as exc:
        print(f"generation failure: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except AllTrialsTruncatedError as exc:
        print(f"estimate unusable: {exc}", file=sys.stderr)
        return EXIT_BAD_INSTANCE
    except DisconnectedInstanceError as exc:
        print(f"bad instance: {exc}", file=sys.stderr)
        return EXIT_BAD_INSTANCE
    except (DeterministicCheckError, EigensolverError) as exc:
        print(f"deterministic check failure: {exc}", file=sys.stderr)
        return EXIT_DETERMINISTIC
    except ParameterError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HyperwalkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INSTANCE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

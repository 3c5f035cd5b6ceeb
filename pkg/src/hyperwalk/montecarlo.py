"""Monte Carlo estimates of hitting, commute, and cover times.

The simulator steps the walk with exact integer sampling (no floating
point in the step law): two-stage semantics picks a uniform incident
hyperedge and then a uniform other vertex in it; weighted-graph semantics
picks neighbor j with probability a_ij/d_i via its integer cumulative
weights. The two laws coincide, which the projection module makes
checkable.

Each trial owns the derived sub-stream mix(seed, trial_index), so results
do not depend on execution order; trials hitting the step cap are counted
and excluded rather than silently included.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllTrialsTruncatedError, ParameterError, ZeroDegreeError
from .hypergraph import Hypergraph
from .projection import Multigraph, project
from .rng import Rng, mix

TWO_STAGE = "two_stage"
WEIGHTED_GRAPH = "weighted_graph"
START_FIXED = "fixed"
START_STATIONARY = "stationary"


@dataclass(frozen=True)
class WalkConfig:
    """Knobs of one estimator run."""

    seed: int
    trials: int
    max_steps: int = 10**8
    start_rule: str = START_FIXED
    semantics: str = TWO_STAGE

    def __post_init__(self):
        if self.trials < 1:
            raise ParameterError("trials must be >= 1")
        if self.max_steps < 1:
            raise ParameterError("max_steps must be >= 1")
        if self.start_rule not in (START_FIXED, START_STATIONARY):
            raise ParameterError(f"unknown start rule {self.start_rule!r}")
        if self.semantics not in (TWO_STAGE, WEIGHTED_GRAPH):
            raise ParameterError(f"unknown semantics {self.semantics!r}")


@dataclass(frozen=True)
class Estimate:
    """Sample mean and standard error over non-truncated trials.

    ``trials_used`` counts all attempted trials; ``truncated`` of them hit
    the step cap and were excluded, which biases the mean low whenever it
    is nonzero.
    """

    mean: float
    stderr: float
    trials_used: int
    truncated: int
    values: tuple[int, ...] = ()

    @property
    def biased(self) -> bool:
        return self.truncated > 0


class WalkSimulator:
    """Walk stepping over an immutable hypergraph.

    Builds the per-vertex incident-edge index once; a step is O(1)
    expected under two-stage semantics and O(log deg) under
    weighted-graph semantics. Vertices are 0-indexed here.
    """

    def __init__(self, h: Hypergraph, semantics: str = TWO_STAGE, mg: Multigraph | None = None):
        if semantics not in (TWO_STAGE, WEIGHTED_GRAPH):
            raise ParameterError(f"unknown semantics {semantics!r}")
        self.n = h.n
        self.d = h.d
        self.semantics = semantics
        self.edges = [tuple(v - 1 for v in e) for e in h.edges]
        incident: list[list[int]] = [[] for _ in range(self.n)]
        for ei, e in enumerate(self.edges):
            for v in e:
                incident[v].append(ei)
        if any(not lst for lst in incident):
            raise ZeroDegreeError(
                "some vertex lies in no hyperedge; the walk is undefined there"
            )
        self.incident = incident
        if mg is None:
            mg = project(h)
        self.degrees = mg.degrees
        self.total_weight = mg.total_weight
        # cumulative degree table for exact stationary draws
        self._deg_cum = np.cumsum(mg.degrees)
        if semantics == WEIGHTED_GRAPH:
            self._neighbors = []
            self._weight_cum = []
            for i in range(self.n):
                nbr = np.nonzero(mg.weights[i])[0]
                self._neighbors.append(nbr)
                self._weight_cum.append(np.cumsum(mg.weights[i, nbr]))

    def step(self, v: int, rng: Rng) -> int:
        if self.semantics == TWO_STAGE:
            eids = self.incident[v]
            e = self.edges[eids[rng.randbelow(len(eids))]]
            k = rng.randbelow(self.d - 1)
            w = e[k]
            return w if w != v else e[self.d - 1]
        r = rng.randbelow(int(self.degrees[v]))
        idx = int(np.searchsorted(self._weight_cum[v], r, side="right"))
        return int(self._neighbors[v][idx])

    def stationary_draw(self, rng: Rng) -> int:
        """Exact draw from pi using integer cumulative degrees."""
        r = rng.randbelow(2 * self.total_weight)
        return int(np.searchsorted(self._deg_cum, r, side="right"))


def _summarize(values: list[int], trials: int, truncated: int) -> Estimate:
    if not values:
        raise AllTrialsTruncatedError(
            f"all {trials} trials hit the step cap; no estimate available"
        )
    arr = np.asarray(values, dtype=np.float64)
    mean = float(arr.mean())
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return Estimate(
        mean=mean,
        stderr=stderr,
        trials_used=trials,
        truncated=truncated,
        values=tuple(values),
    )


def _check_vertex(label: str, v: int, n: int) -> int:
    if not (1 <= v <= n):
        raise ParameterError(f"{label} must be in 1..{n}, got {v}")
    return v - 1


def estimate_hitting(h: Hypergraph, i: int, j: int, cfg: WalkConfig) -> Estimate:
    """First-passage time i -> j, averaged over cfg.trials trials."""
    if i == j:
        raise ParameterError("hitting estimate requires i != j")
    sim = WalkSimulator(h, cfg.semantics)
    i0 = _check_vertex("i", i, h.n)
    j0 = _check_vertex("j", j, h.n)
    values: list[int] = []
    truncated = 0
    for t in range(cfg.trials):
        rng = Rng(mix(cfg.seed, t))
        v = i0
        steps = 0
        while v != j0 and steps < cfg.max_steps:
            v = sim.step(v, rng)
            steps += 1
        if v == j0:
            values.append(steps)
        else:
            truncated += 1
    return _summarize(values, cfg.trials, truncated)


def estimate_commute(h: Hypergraph, i: int, j: int, cfg: WalkConfig) -> Estimate:
    """Round-trip time i -> j -> i."""
    if i == j:
        raise ParameterError("commute estimate requires i != j")
    sim = WalkSimulator(h, cfg.semantics)
    i0 = _check_vertex("i", i, h.n)
    j0 = _check_vertex("j", j, h.n)
    values: list[int] = []
    truncated = 0
    for t in range(cfg.trials):
        rng = Rng(mix(cfg.seed, t))
        v = i0
        target = j0
        steps = 0
        legs = 0
        while steps < cfg.max_steps:
            v = sim.step(v, rng)
            steps += 1
            if v == target:
                legs += 1
                if legs == 2:
                    break
                target = i0
        if legs == 2:
            values.append(steps)
        else:
            truncated += 1
    return _summarize(values, cfg.trials, truncated)


def estimate_cover(h: Hypergraph, cfg: WalkConfig, start: int | None = None) -> Estimate:
    """Time until every vertex has been visited.

    The start is ``start`` under the fixed rule and a fresh stationary
    draw per trial otherwise.
    """
    sim = WalkSimulator(h, cfg.semantics)
    if cfg.start_rule == START_FIXED:
        if start is None:
            raise ParameterError("fixed start rule requires a start vertex")
        s0 = _check_vertex("start", start, h.n)
    values: list[int] = []
    truncated = 0
    for t in range(cfg.trials):
        rng = Rng(mix(cfg.seed, t))
        v = sim.stationary_draw(rng) if cfg.start_rule == START_STATIONARY else s0
        visited = bytearray(h.n)
        visited[v] = 1
        seen = 1
        steps = 0
        while seen < h.n and steps < cfg.max_steps:
            v = sim.step(v, rng)
            steps += 1
            if not visited[v]:
                visited[v] = 1
                seen += 1
        if seen == h.n:
            values.append(steps)
        else:
            truncated += 1
    return _summarize(values, cfg.trials, truncated)

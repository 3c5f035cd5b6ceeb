"""Random d-uniform hypergraphs: sampling, connectivity, serialization.

A hypergraph H(n, p) sample keeps each of the C(n, d) possible d-element
vertex subsets independently with probability p. Vertices are labeled
1..n everywhere a user can see them (files, edge tuples); matrix-valued
code downstream indexes rows 0..n-1.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import (
    ConnectivityNotAchievedError,
    EnumerationCapError,
    ParameterError,
)
from .rng import Rng, mix

# Dense sampling draws one uniform per candidate edge, so the candidate
# count must stay scannable; above the cap, geometric skipping is used
# regardless of p because its cost is O(|edges|), not O(C(n, d)).
DENSE_SCAN_MAX = 1 << 31
# Candidates are scanned densely when the expected edge count is at least
# this value, i.e. when p >= DENSE_EXPECTED_EDGES / C(n, d).
DENSE_EXPECTED_EDGES = 10.0
# Default cap for full enumeration of the candidate set.
MAX_ENUMERABLE = 10_000_000

_CHUNK = 1 << 16


@dataclass(frozen=True)
class GenerationParams:
    """Parameters of one H(n, p) draw.

    ``seed`` drives all randomness; with ``condition_on_connected`` the
    draw is re-attempted on derived sub-seeds until connected, at most
    ``max_resamples`` times.
    """

    n: int
    d: int
    p: float
    seed: int
    condition_on_connected: bool = False
    max_resamples: int = 100

    def __post_init__(self):
        if self.d < 2:
            raise ParameterError(f"uniformity d must be >= 2, got {self.d}")
        if self.n < self.d:
            raise ParameterError(f"need n >= d, got n={self.n}, d={self.d}")
        if not (0.0 <= self.p <= 1.0):
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")
        if self.max_resamples < 1:
            raise ParameterError("max_resamples must be >= 1")


@dataclass(frozen=True)
class Hypergraph:
    """A d-uniform hypergraph on vertices 1..n.

    ``edges`` holds sorted d-tuples in lexicographic order with no
    duplicates; instances are immutable and safe to share.
    """

    n: int
    d: int
    edges: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.d < 2 or self.n < self.d:
            raise ParameterError(f"invalid (n, d) = ({self.n}, {self.d})")
        seen = set()
        for e in self.edges:
            if len(e) != self.d or len(set(e)) != self.d:
                raise ParameterError(f"edge {e} is not a {self.d}-element subset")
            if tuple(sorted(e)) != e:
                raise ParameterError(f"edge {e} is not sorted")
            if e[0] < 1 or e[-1] > self.n:
                raise ParameterError(f"edge {e} has vertices outside 1..{self.n}")
            if e in seen:
                raise ParameterError(f"duplicate edge {e}")
            seen.add(e)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def incident_counts(self) -> np.ndarray:
        """Number of hyperedges containing each vertex (0-indexed array)."""
        counts = np.zeros(self.n, dtype=np.int64)
        for e in self.edges:
            for v in e:
                counts[v - 1] += 1
        return counts


def normalized(n: int, d: int, edges) -> Hypergraph:
    """Build a hypergraph from arbitrary edge iterables, canonicalizing order."""
    canon = sorted(tuple(sorted(int(v) for v in e)) for e in edges)
    return Hypergraph(n=n, d=d, edges=tuple(canon))


# -- candidate enumeration and unranking ------------------------------------

def enumerate_possible_edges(
    n: int, d: int, max_edges: int = MAX_ENUMERABLE
) -> Iterator[tuple[int, ...]]:
    """Yield all C(n, d) sorted d-subsets of 1..n in lexicographic order."""
    if d < 2 or n < d:
        raise ParameterError(f"invalid (n, d) = ({n}, {d})")
    total = math.comb(n, d)
    if total > max_edges:
        raise EnumerationCapError(
            f"C({n}, {d}) = {total} exceeds the enumeration cap {max_edges}"
        )
    return itertools.combinations(range(1, n + 1), d)


def unrank_edges(indices: np.ndarray, n: int, d: int) -> np.ndarray:
    """Map lexicographic ranks to sorted d-subsets of 1..n, vectorized.

    Rank 0 is (1, 2, ..., d); ranks must be < C(n, d). Assumes all
    intermediate subset counts fit in int64, which holds whenever the
    caller's candidate count does.
    """
    widest = math.comb(n, min(d, n // 2)) if d > n // 2 else math.comb(n, d)
    if widest >= 1 << 62:
        raise ParameterError(
            f"unranking tables for (n, d) = ({n}, {d}) exceed the 64-bit range"
        )
    idx = np.asarray(indices, dtype=np.int64)
    out = np.empty((idx.size, d), dtype=np.int64)
    rem = idx.copy()
    prev = np.zeros(idx.size, dtype=np.int64)
    for level in range(d):
        s = d - level  # slots still to fill, current one included
        # cum[v] = number of s-subsets whose least element is <= v
        counts = np.array(
            [math.comb(n - u, s - 1) for u in range(1, n - s + 2)],
            dtype=np.int64,
        )
        cum = np.concatenate(([0], np.cumsum(counts)))
        base = cum[prev]
        v = np.searchsorted(cum, rem + base, side="right")
        rem += base - cum[v - 1]
        out[:, level] = v
        prev = v
    return out


# -- sampling ----------------------------------------------------------------

def _geometric_skip(rng: Rng, q: float, cap: int) -> int:
    """Failures before the next success of a Bernoulli(1-q) scan.

    Inverts the geometric CDF using only IEEE multiplications and
    comparisons (binary exponentiation of q), so results are bit-portable.
    Returns ``cap`` whenever the true skip is >= cap.
    """
    u = rng.next_double()
    t = 1.0 - u  # smallest e >= 1 with q**e <= t, skip = e - 1
    if q <= 0.0 or q <= t:
        return 0

    def qpow(e: int) -> float:
        acc, base = 1.0, q
        while e:
            if e & 1:
                acc *= base
            base *= base
            e >>= 1
        return acc

    # skip >= cap exactly when even q**cap still exceeds t
    if qpow(cap) > t:
        return cap
    hi = 1
    while qpow(hi) > t:
        hi <<= 1
    lo = hi >> 1  # qpow(lo) > t >= qpow(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if qpow(mid) > t:
            lo = mid
        else:
            hi = mid
    return hi - 1


def _sample_dense(n: int, d: int, p: float, rng: Rng, total: int) -> np.ndarray:
    """One Bernoulli(p) draw per candidate edge, in lexicographic order."""
    hits = []
    offset = 0
    while offset < total:
        m = min(_CHUNK, total - offset)
        u = rng.double_block(m)
        idx = np.nonzero(u < p)[0]
        if idx.size:
            hits.append(idx.astype(np.int64) + offset)
        offset += m
    if not hits:
        return np.empty((0, d), dtype=np.int64)
    return unrank_edges(np.concatenate(hits), n, d)


def _sample_sparse(n: int, d: int, p: float, rng: Rng, total: int) -> np.ndarray:
    """Geometric skipping over lexicographic ranks; O(|edges|) draws."""
    q = 1.0 - p
    ranks = []
    pos = 0
    while pos < total:
        pos += _geometric_skip(rng, q, total - pos)
        if pos >= total:
            break
        ranks.append(pos)
        pos += 1
    if not ranks:
        return np.empty((0, d), dtype=np.int64)
    return unrank_edges(ranks, n, d)


def _sample_once(n: int, d: int, p: float, seed: int) -> Hypergraph:
    total = math.comb(n, d)
    if p == 0.0:
        return Hypergraph(n=n, d=d, edges=())
    if 1.0 - p == 1.0:
        raise ParameterError(
            f"p = {p} is below double resolution; per-candidate draws "
            "cannot realize it"
        )
    rng = Rng(seed)
    if total * p >= DENSE_EXPECTED_EDGES and total <= DENSE_SCAN_MAX:
        rows = _sample_dense(n, d, p, rng, total)
    else:
        rows = _sample_sparse(n, d, p, rng, total)
    edges = tuple(tuple(int(v) for v in row) for row in rows)
    return Hypergraph(n=n, d=d, edges=edges)


def generate(params: GenerationParams) -> Hypergraph:
    """Sample H(n, p), optionally rejection-sampled until connected.

    Attempt k uses the derived seed ``mix(params.seed, k)``, so the result
    is a pure function of the parameters.
    """
    attempts = params.max_resamples if params.condition_on_connected else 1
    for k in range(attempts):
        h = _sample_once(params.n, params.d, params.p, mix(params.seed, k))
        if not params.condition_on_connected or is_connected(h):
            return h
    raise ConnectivityNotAchievedError(params, attempts)


# -- connectivity ------------------------------------------------------------

def is_connected(h: Hypergraph) -> bool:
    """True iff all n vertices lie in one component of the shared-edge graph.

    Union-find over hyperedges; a vertex in no hyperedge disconnects any
    instance with n >= 2.
    """
    n = h.n
    if n == 1:
        return True
    parent = list(range(n))
    size = [1] * n

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n
    for e in h.edges:
        r0 = find(e[0] - 1)
        for v in e[1:]:
            r1 = find(v - 1)
            if r0 != r1:
                if size[r0] < size[r1]:
                    r0, r1 = r1, r0
                parent[r1] = r0
                size[r0] += size[r1]
                components -= 1
                if components == 1:
                    return True
    return components == 1


# -- serialization -----------------------------------------------------------

def to_json(h: Hypergraph) -> str:
    """Canonical JSON: sorted keys, lexicographic edges, no whitespace."""
    doc = {"n": h.n, "d": h.d, "edges": [list(e) for e in h.edges]}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def from_json(text: str) -> Hypergraph:
    try:
        doc = json.loads(text)
        return normalized(int(doc["n"]), int(doc["d"]), doc["edges"])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(f"malformed hypergraph document: {exc}") from exc

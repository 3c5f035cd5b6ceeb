"""Weighted multigraph induced by a hypergraph, and the walk it carries.

Every hyperedge contributes a clique on its d vertices; the pair weight
a_ij counts hyperedges containing both endpoints. All quantities in this
module are exact integers until the transition matrix divides them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DeterministicCheckError, ZeroDegreeError
from .hypergraph import Hypergraph


@dataclass(frozen=True)
class Multigraph:
    """Pair weights a_ij (int, zero diagonal), degrees d_i, and |E~|.

    Rows/columns are 0-indexed; vertex v corresponds to index v-1.
    """

    n: int
    weights: np.ndarray
    degrees: np.ndarray
    total_weight: int


@dataclass(frozen=True)
class StationaryDist:
    """Stationary distribution pi_i = d_i / (2 |E~|) of the walk."""

    pi: np.ndarray


def project(h: Hypergraph) -> Multigraph:
    """Collapse hyperedges to integer pair weights.

    Asserts the exact identities d_i = (d-1) * #{e : i in e} and
    2|E~| = d(d-1)|edges| before returning.
    """
    n, d = h.n, h.d
    weights = np.zeros((n, n), dtype=np.int64)
    if h.edges:
        ev = np.asarray(h.edges, dtype=np.int64) - 1
        for a, b in itertools.combinations(range(d), 2):
            np.add.at(weights, (ev[:, a], ev[:, b]), 1)
        weights = weights + weights.T
    degrees = weights.sum(axis=1)
    total = int(degrees.sum()) // 2
    if not np.array_equal(degrees, (d - 1) * h.incident_counts()):
        raise DeterministicCheckError("degree identity d_i = (d-1)#{e: i in e} failed")
    if total != math.comb(d, 2) * h.num_edges:
        raise DeterministicCheckError("|E~| = C(d,2)|edges| failed")
    weights.setflags(write=False)
    degrees.setflags(write=False)
    return Multigraph(n=n, weights=weights, degrees=degrees, total_weight=total)


def stationary(mg: Multigraph) -> StationaryDist:
    """pi proportional to degrees; verified to be a left fixed point of P."""
    if np.any(mg.degrees == 0):
        raise ZeroDegreeError("some vertex has degree 0; no stationary walk")
    pi = mg.degrees / (2.0 * mg.total_weight)
    p = transition_matrix(mg)
    if np.max(np.abs(pi @ p - pi)) > 1e-12:
        raise DeterministicCheckError("pi P = pi failed beyond 1e-12")
    pi.setflags(write=False)
    return StationaryDist(pi=pi)


def transition_matrix(mg: Multigraph) -> np.ndarray:
    """One-step law P_ij = a_ij / d_i of the walk; rows sum to 1."""
    if np.any(mg.degrees == 0):
        raise ZeroDegreeError("some vertex has degree 0; walk is undefined")
    p = mg.weights / mg.degrees[:, None].astype(np.float64)
    if np.max(np.abs(p.sum(axis=1) - 1.0)) > 1e-14:
        raise DeterministicCheckError("transition rows do not sum to 1 within 1e-14")
    return p


def two_stage_transition_matrix(h: Hypergraph) -> np.ndarray:
    """One-step law of the two-stage walk, by exact enumeration.

    From v: pick an incident hyperedge uniformly, then a uniform other
    vertex inside it. Equals the weighted-graph law a_ij/d_i because
    a_ij/d_i = #{e: i,j in e} / ((d-1) #{e: i in e}); the enumeration here
    shares nothing with :func:`transition_matrix` so tests can compare.
    """
    n, d = h.n, h.d
    counts = np.zeros((n, n), dtype=np.int64)
    incident = np.zeros(n, dtype=np.int64)
    for e in h.edges:
        for v in e:
            incident[v - 1] += 1
            for w in e:
                if w != v:
                    counts[v - 1, w - 1] += 1
    if np.any(incident == 0):
        raise ZeroDegreeError("some vertex lies in no hyperedge")
    return counts / (incident[:, None] * (d - 1)).astype(np.float64)


def weights_csv(mg: Multigraph) -> str:
    """Nonzero pair weights as 'row,col,weight' lines, 1-based, i < j."""
    lines = ["row,col,weight"]
    iu, ju = np.nonzero(np.triu(mg.weights, k=1))
    for i, j in zip(iu.tolist(), ju.tolist()):
        lines.append(f"{i + 1},{j + 1},{int(mg.weights[i, j])}")
    return "\n".join(lines) + "\n"

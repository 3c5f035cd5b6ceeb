"""Exact hitting, commute, and cover-time quantities.

Two independent routes compute the hitting-time matrix:

* a spectral route, evaluating
  H_ij = 2|E~| sum_{k>=2} (1/(1-lambda_k)) (v_{k,j}^2/d_j
         - v_{k,i} v_{k,j} / sqrt(d_i d_j)),
* a linear-system route, solving (I - Q_j) h = 1 with the target state
  removed, one factorization per target.

The routes share no code; their agreement is the package's central
correctness property. Averages, bounds, and the cover-time sandwich all
come with the inequalities they must satisfy on every connected instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateGapError,
    DeterministicCheckError,
    ParameterError,
    SingularSystemError,
)
from .projection import Multigraph, transition_matrix
from .spectral import Spectrum

MIN_GAP = 1e-12
ROUTE_RTOL = 1e-8


@dataclass(frozen=True)
class WalkTimes:
    """Hitting matrix plus derived quantities for one instance.

    ``avg_target[j]`` is the pi-weighted average of column j of
    ``hitting``; ``avg_start[i]`` the pi-weighted average of row i, which
    is the same number for every i. Cover bounds multiply the extreme
    off-diagonal hitting times by the n-th harmonic number.
    """

    hitting: np.ndarray
    avg_target: np.ndarray
    avg_start: np.ndarray
    commute: np.ndarray
    cover_lower: float
    cover_upper: float


def _inverse_gaps(spec: Spectrum) -> np.ndarray:
    """Coefficients 1/(1 - lambda_k) for k >= 2, zero in slot one."""
    if spec.gap < MIN_GAP:
        raise DegenerateGapError(
            f"spectral gap {spec.gap:.3e} below {MIN_GAP}; instance is "
            "disconnected or numerically degenerate"
        )
    coeff = np.zeros(spec.n)
    coeff[1:] = 1.0 / (1.0 - spec.eigenvalues[1:])
    return coeff


def hitting_times_spectral(spec: Spectrum, mg: Multigraph) -> np.ndarray:
    """Full hitting-time matrix from the eigensystem.

    The diagonal is analytically zero; it is asserted to be below 1e-8 in
    absolute value and then clamped to exactly 0 so downstream minima
    never see rounding noise.
    """
    coeff = _inverse_gaps(spec)
    w = spec.eigenvectors / np.sqrt(mg.degrees.astype(np.float64))[:, None]
    g = (w**2) @ coeff
    cross = (w * coeff[None, :]) @ w.T
    h = 2.0 * mg.total_weight * (g[None, :] - cross)
    diag = np.abs(np.diag(h))
    if diag.max() > 1e-8:
        raise DeterministicCheckError(
            f"spectral hitting diagonal reached {diag.max():.3e}, expected ~0"
        )
    np.fill_diagonal(h, 0.0)
    return h


def hitting_times_solve(mg: Multigraph, fast: bool = False) -> np.ndarray:
    """Hitting times from first-step analysis; independent of the spectrum.

    Default mode removes the target's row and column and solves
    (I - Q_j) h = 1 once per target with a partial-pivoting
    factorization, keeping the oracle maximally independent at O(n^4)
    cost. ``fast=True`` switches to a single factorization of
    I - P + 1 pi^T for large n.
    """
    p = transition_matrix(mg)
    n = mg.n
    h = np.zeros((n, n))
    try:
        if fast:
            pi = mg.degrees / (2.0 * mg.total_weight)
            z = np.linalg.solve(np.eye(n) - p + np.outer(np.ones(n), pi), np.eye(n))
            h = (np.diag(z)[None, :] - z) / pi[None, :]
            np.fill_diagonal(h, 0.0)
        else:
            ones = np.ones(n - 1)
            for j in range(n):
                keep = np.arange(n) != j
                q = p[np.ix_(keep, keep)]
                h[keep, j] = np.linalg.solve(np.eye(n - 1) - q, ones)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(
            f"hitting-time system singular (disconnected input?): {exc}"
        ) from exc
    return h


def avg_target_hitting(hitting: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """H_j = sum_i pi_i H_ij, straight from the matrix."""
    return pi @ hitting


def avg_target_closed_form(spec: Spectrum, mg: Multigraph) -> np.ndarray:
    """H_j = (1/pi_j) sum_{k>=2} v_{k,j}^2 / (1 - lambda_k)."""
    coeff = _inverse_gaps(spec)
    pi = mg.degrees / (2.0 * mg.total_weight)
    return ((spec.eigenvectors**2) @ coeff) / pi


def avg_start_hitting(hitting: np.ndarray, pi: np.ndarray) -> np.ndarray:
    """H^i = sum_j pi_j H_ij; the same value for every start i."""
    return hitting @ pi


def avg_start_closed_form(spec: Spectrum) -> float:
    """The start-independent value sum_{k>=2} 1/(1 - lambda_k)."""
    return float(_inverse_gaps(spec).sum())


def commute_times(hitting: np.ndarray) -> np.ndarray:
    """kappa(i, j) = H_ij + H_ji; exactly symmetric by construction."""
    return hitting + hitting.T


def commute_times_spectral(spec: Spectrum, mg: Multigraph) -> np.ndarray:
    """kappa via 2|E~| sum_{k>=2} (v_{k,i}/sqrt(d_i) - v_{k,j}/sqrt(d_j))^2
    / (1 - lambda_k), the quadratic form the commute bounds come from."""
    coeff = _inverse_gaps(spec)
    w = spec.eigenvectors / np.sqrt(mg.degrees.astype(np.float64))[:, None]
    g = (w**2) @ coeff
    cross = (w * coeff[None, :]) @ w.T
    kappa = 2.0 * mg.total_weight * (g[:, None] + g[None, :] - 2.0 * cross)
    np.fill_diagonal(kappa, 0.0)
    return kappa


def hitting_time_bounds(mg: Multigraph, spec: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    """Per-target sandwich (1-pi_j)^2/pi_j <= H_j <= (2|E~|/d_j)(1-pi_j)/gap."""
    pi = mg.degrees / (2.0 * mg.total_weight)
    lower = (1.0 - pi) ** 2 / pi
    upper = (2.0 * mg.total_weight / mg.degrees) * (1.0 - pi) / spec.gap
    return lower, upper


def commute_time_bounds(mg: Multigraph, spec: Spectrum) -> tuple[np.ndarray, np.ndarray]:
    """Pairwise sandwich |E~|(1/d_i + 1/d_j) <= kappa <= 2|E~|/gap * (...)."""
    inv_d = 1.0 / mg.degrees.astype(np.float64)
    s = inv_d[:, None] + inv_d[None, :]
    lower = mg.total_weight * s
    upper = (2.0 * mg.total_weight / spec.gap) * s
    np.fill_diagonal(lower, 0.0)
    np.fill_diagonal(upper, 0.0)
    return lower, upper


def harmonic_number(n: int) -> float:
    return math.fsum(1.0 / k for k in range(1, n + 1))


def cover_time_bounds(hitting: np.ndarray) -> tuple[float, float]:
    """Sandwich for the cover time: extreme off-diagonal hitting times
    multiplied by the n-th harmonic number."""
    n = hitting.shape[0]
    if n < 2:
        raise ParameterError("cover bounds require n >= 2")
    off = hitting[~np.eye(n, dtype=bool)]
    hn = harmonic_number(n)
    return float(off.min() * hn), float(off.max() * hn)


def _max_rel_diff(a: np.ndarray, b: np.ndarray) -> float:
    scale = np.maximum(np.abs(a), np.abs(b))
    scale[scale == 0.0] = 1.0
    return float(np.max(np.abs(a - b) / scale))


def compute_walk_times(
    mg: Multigraph, spec: Spectrum, rtol: float = ROUTE_RTOL
) -> WalkTimes:
    """Assemble all exact quantities, asserting the internal route checks.

    Raises DeterministicCheckError if the averages disagree with their
    closed forms, the start average is not constant, or the commute matrix
    disagrees with its quadratic form, all at relative tolerance ``rtol``.
    """
    pi = mg.degrees / (2.0 * mg.total_weight)
    h = hitting_times_spectral(spec, mg)

    avg_t = avg_target_hitting(h, pi)
    closed_t = avg_target_closed_form(spec, mg)
    err = _max_rel_diff(avg_t, closed_t)
    if err > rtol:
        raise DeterministicCheckError(f"avg_target closed form off by {err:.3e}")

    avg_s = avg_start_hitting(h, pi)
    closed_s = avg_start_closed_form(spec)
    err = float(np.max(np.abs(avg_s - closed_s)) / abs(closed_s))
    if err > rtol:
        raise DeterministicCheckError(f"avg_start not constant, spread {err:.3e}")

    kappa = commute_times(h)
    kappa_spec = commute_times_spectral(spec, mg)
    err = _max_rel_diff(kappa, kappa_spec)
    if err > rtol:
        raise DeterministicCheckError(f"commute quadratic form off by {err:.3e}")

    lo, hi = cover_time_bounds(h)
    for arr in (h, avg_t, avg_s, kappa):
        arr.setflags(write=False)
    return WalkTimes(
        hitting=h,
        avg_target=avg_t,
        avg_start=avg_s,
        commute=kappa,
        cover_lower=lo,
        cover_upper=hi,
    )


def matrix_csv(m: np.ndarray) -> str:
    """Full matrix export, one row per line, 1-based header row/column."""
    n = m.shape[0]
    lines = ["i\\j," + ",".join(str(j + 1) for j in range(n))]
    for i in range(n):
        lines.append(f"{i + 1}," + ",".join(repr(float(x)) for x in m[i]))
    return "\n".join(lines) + "\n"


def in_proof_identity_residuals(spec: Spectrum, mg: Multigraph) -> dict[str, float]:
    """Residuals of the two eigenvector identities used by the bounds.

    target_mass:   max_{i,j} |sum_{k>=2}(v_{k,j}^2/d_j
                   - v_{k,i}v_{k,j}/sqrt(d_i d_j)) - 1/d_j|
    pair_energy:   max_{i,j} |sum_{k>=2}(v_{k,i}/sqrt(d_i)
                   - v_{k,j}/sqrt(d_j))^2 - (1/d_i + 1/d_j)|
    """
    w = spec.eigenvectors / np.sqrt(mg.degrees.astype(np.float64))[:, None]
    wk = w[:, 1:]
    inv_d = 1.0 / mg.degrees.astype(np.float64)
    target = (wk**2).sum(axis=1)[None, :] - wk @ wk.T
    res_target = np.abs(target - inv_d[None, :])
    energy = (wk**2).sum(axis=1)[:, None] + (wk**2).sum(axis=1)[None, :] - 2 * (wk @ wk.T)
    res_energy = np.abs(energy - (inv_d[:, None] + inv_d[None, :]))
    np.fill_diagonal(res_target, 0.0)
    np.fill_diagonal(res_energy, 0.0)
    return {
        "target_mass": float(res_target.max()),
        "pair_energy": float(res_energy.max()),
    }

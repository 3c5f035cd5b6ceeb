"""Per-instance analysis: spectrum, exact times, and deterministic checks.

The checks in this module are finite-n theorems, not asymptotic bands: on
a connected instance every one of them must pass, and a failure indicates
a bug rather than an unlucky sample. Tiny relative slack absorbs rounding
at the equality cases (single-hyperedge instances meet several bounds
exactly).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph, is_connected
from .errors import DisconnectedInstanceError
from .projection import Multigraph, project, stationary
from .spectral import (
    Spectrum,
    build_normalized_adjacency,
    decompose,
    spectrum_json_dict,
    spectrum_residuals,
)
from .walk_times import (
    WalkTimes,
    commute_time_bounds,
    compute_walk_times,
    hitting_time_bounds,
    hitting_times_solve,
    in_proof_identity_residuals,
)

INEQ_SLACK = 1e-9  # relative slack for analytically-tight inequalities


@dataclass(frozen=True)
class Tolerances:
    """Residual tolerances for the spectral invariants (overridable)."""

    top_eigenvalue: float = 1e-10
    perron_direction: float = 1e-8
    orthonormality: float = 1e-8
    eigen_residual_per_n: float = 1e-9
    trace: float = 1e-9
    mass_identity: float = 1e-10
    diagonal_identity: float = 1e-10
    identity_residual: float = 1e-10
    route_rtol: float = 1e-8


def _check(passed: bool, worst: float, tolerance: float) -> dict:
    return {"passed": bool(passed), "worst": float(worst), "tolerance": float(tolerance)}


def _sandwich_check(lower, value, upper, slack: float) -> dict:
    """Worst relative violation of lower <= value <= upper."""
    scale = np.maximum(np.abs(np.asarray(value, dtype=float)), 1.0)
    viol = np.maximum(lower - value, value - upper) / scale
    worst = float(np.max(viol))
    return _check(worst <= slack, worst, slack)


def deterministic_checks(
    wt: WalkTimes, mg: Multigraph, spec: Spectrum, tol: Tolerances = Tolerances()
) -> dict[str, dict]:
    """Evaluate every inequality and identity that must hold exactly."""
    n = mg.n
    pi = mg.degrees / (2.0 * mg.total_weight)
    checks: dict[str, dict] = {}

    lo_h, hi_h = hitting_time_bounds(mg, spec)
    checks["avg_target_sandwich"] = _sandwich_check(lo_h, wt.avg_target, hi_h, INEQ_SLACK)
    weak = 2.0 * mg.total_weight / mg.degrees - 2.0
    checks["avg_target_weak_lower"] = _sandwich_check(
        weak, wt.avg_target, np.full(n, np.inf), INEQ_SLACK
    )

    lo_k, hi_k = commute_time_bounds(mg, spec)
    off = ~np.eye(n, dtype=bool)
    checks["commute_sandwich"] = _sandwich_check(
        lo_k[off], wt.commute[off], hi_k[off], INEQ_SLACK
    )

    checks["avg_start_sandwich"] = _sandwich_check(
        (n - 1) / 2.0, wt.avg_start, (n - 1) / spec.gap, INEQ_SLACK
    )
    checks["cover_order"] = _check(
        wt.cover_lower <= wt.cover_upper, wt.cover_lower - wt.cover_upper, 0.0
    )

    hitting_pos = wt.hitting[off]
    checks["hitting_positive"] = _check(
        bool(np.all(hitting_pos > 0.0)), float(hitting_pos.min()), 0.0
    )
    sym = float(np.max(np.abs(wt.commute - wt.commute.T)))
    checks["commute_symmetric"] = _check(sym == 0.0, sym, 0.0)

    idres = in_proof_identity_residuals(spec, mg)
    checks["identity_target_mass"] = _check(
        idres["target_mass"] <= tol.identity_residual,
        idres["target_mass"],
        tol.identity_residual,
    )
    checks["identity_pair_energy"] = _check(
        idres["pair_energy"] <= tol.identity_residual,
        idres["pair_energy"],
        tol.identity_residual,
    )
    return checks


def spectral_checks(
    spec: Spectrum, mg: Multigraph, tol: Tolerances = Tolerances()
) -> dict[str, dict]:
    """Spectrum invariants against their default tolerances."""
    res = spectrum_residuals(spec, mg)
    limits = {
        "top_eigenvalue": tol.top_eigenvalue,
        "perron_direction": tol.perron_direction,
        "orthonormality": tol.orthonormality,
        "eigen_residual": tol.eigen_residual_per_n * spec.n,
        "trace": tol.trace,
        "mass_identity": tol.mass_identity,
        "diagonal_identity": tol.diagonal_identity,
    }
    checks = {
        name: _check(res[name] <= limit, res[name], limit)
        for name, limit in limits.items()
    }
    checks["gap_positive"] = _check(spec.gap > 0.0, spec.gap, 0.0)
    checks["eigenvalue_range"] = _check(
        bool(
            np.all(spec.eigenvalues >= -1.0 - 1e-10)
            and np.all(spec.eigenvalues <= 1.0 + 1e-10)
        ),
        float(np.max(np.abs(spec.eigenvalues))),
        1.0 + 1e-10,
    )
    return checks


def analyze(
    h: Hypergraph,
    tol: Tolerances = Tolerances(),
    include_oracle: bool = False,
) -> dict:
    """Full analysis of one connected instance.

    Returns a JSON-ready report with the spectrum summary, average hitting
    times, commute extrema, cover bounds, and all check outcomes. With
    ``include_oracle`` the linear-system hitting route is also run and
    compared entrywise against the spectral route (O(n^4); test-scale
    only).
    """
    if not is_connected(h):
        raise DisconnectedInstanceError(
            f"instance on {h.n} vertices with {h.num_edges} edges is not connected"
        )
    mg = project(h)
    stationary(mg)  # raises on zero degrees, verifies pi P = pi
    spec = decompose(build_normalized_adjacency(mg))
    wt = compute_walk_times(mg, spec, rtol=tol.route_rtol)

    checks = deterministic_checks(wt, mg, spec, tol)
    checks.update(spectral_checks(spec, mg, tol))

    if include_oracle:
        h_oracle = hitting_times_solve(mg)
        scale = np.maximum(np.maximum(np.abs(wt.hitting), np.abs(h_oracle)), 1.0)
        worst = float(np.max(np.abs(wt.hitting - h_oracle) / scale))
        checks["dual_route"] = _check(worst <= tol.route_rtol, worst, tol.route_rtol)

    n = mg.n
    off = ~np.eye(n, dtype=bool)
    report = {
        "n": h.n,
        "d": h.d,
        "edge_count": h.num_edges,
        "total_weight": mg.total_weight,
        "spectrum": spectrum_json_dict(spec),
        "gap": spec.gap,
        "lambda_bar": spec.lambda_bar,
        "H_avg_target": [float(x) for x in wt.avg_target],
        "H_avg_start": float(wt.avg_start[0]),
        "commute_minmax": [float(wt.commute[off].min()), float(wt.commute[off].max())],
        "cover_bounds": [wt.cover_lower, wt.cover_upper],
        "checks": checks,
        "all_checks_passed": all(c["passed"] for c in checks.values()),
    }
    return report

"""Exact hitting/commute/cover quantities against independent oracles.

Frozen values and their derivations:

* d-clique hitting time: first-step analysis gives
  h = 1 + ((d-2)/(d-1)) h, so H_ij = d-1 for i != j, kappa = 2(d-1).
* d-clique start average: sum_{k>=2} 1/(1 - lambda_k) with d-1
  eigenvalues at -1/(d-1): (d-1) / (1 + 1/(d-1)) = (d-1)^2 / d.
* path on 3 vertices (d=2 edges {1,2},{2,3}): solving the two-state
  system for target 3 gives H_13 = 4, H_23 = 3; H_12 = 1 since vertex 1
  always steps to 2.
* triangle cover bounds: all H_ij = 2, harmonic number 1 + 1/2 + 1/3,
  so both bounds equal 11/3.
"""

import numpy as np
import pytest

from hyperwalk.errors import (
    DegenerateGapError,
    ParameterError,
    SingularSystemError,
)
from hyperwalk.hypergraph import GenerationParams, generate, normalized
from hyperwalk.projection import project, stationary, transition_matrix
from hyperwalk.spectral import build_normalized_adjacency, decompose
from hyperwalk.walk_times import (
    avg_start_closed_form,
    avg_start_hitting,
    avg_target_closed_form,
    avg_target_hitting,
    commute_time_bounds,
    commute_times,
    commute_times_spectral,
    compute_walk_times,
    cover_time_bounds,
    harmonic_number,
    hitting_time_bounds,
    hitting_times_solve,
    hitting_times_spectral,
    in_proof_identity_residuals,
)
from oracles import complete_instance, truncated_hitting


def _pipeline(h):
    mg = project(h)
    spec = decompose(build_normalized_adjacency(mg))
    return mg, spec


def _random_connected(n, d, p, seed):
    return generate(GenerationParams(n=n, d=d, p=p, seed=seed,
                                     condition_on_connected=True))


def test_triangle_hitting_both_routes(k3):
    mg, spec = _pipeline(k3)
    expected = 2.0 * (1 - np.eye(3))
    assert np.allclose(hitting_times_spectral(spec, mg), expected, atol=1e-12)
    assert np.allclose(hitting_times_solve(mg), expected, atol=1e-12)


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7, 8])
def test_single_hyperedge_first_step_values(d):
    h = complete_instance(d)
    mg, spec = _pipeline(h)
    expected = (d - 1.0) * (1 - np.eye(d))
    assert np.max(np.abs(hitting_times_spectral(spec, mg) - expected)) <= 1e-10
    assert np.max(np.abs(hitting_times_solve(mg) - expected)) <= 1e-10
    wt = compute_walk_times(mg, spec)
    assert np.max(np.abs(wt.commute - 2 * expected)) <= 1e-10
    assert np.allclose(wt.avg_start, (d - 1) ** 2 / d, atol=1e-10)


def test_path_hitting_times_with_truncated_oracle():
    h = normalized(3, 2, [(1, 2), (2, 3)])
    mg, spec = _pipeline(h)
    hs = hitting_times_spectral(spec, mg)
    ho = hitting_times_solve(mg)
    p = transition_matrix(mg)
    # 2x2 linear system values (hand-solved): H_13 = 4, H_23 = 3, H_12 = 1
    assert hs[0, 2] == pytest.approx(4.0, abs=1e-10)
    assert hs[1, 2] == pytest.approx(3.0, abs=1e-10)
    assert hs[0, 1] == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(ho, hs, atol=1e-10)
    # truncated-expectation oracle; the alive mass decays like (1/2)^(t/2),
    # so 80 prefix terms leave a tail well under 1e-9
    for i, j in [(1, 3), (2, 3), (1, 2), (3, 1)]:
        est = truncated_hitting(p, i - 1, j - 1, max_len=80, tol=0.0)
        assert abs(est - hs[i - 1, j - 1]) <= 1e-9


def test_dual_route_random_instances():
    cases = [(50, 3, 0.02, 0), (80, 3, 0.012, 1), (60, 4, 0.0015, 2), (120, 3, 0.008, 3)]
    for n, d, p, seed in cases:
        mg, spec = _pipeline(_random_connected(n, d, p, seed))
        h1 = hitting_times_spectral(spec, mg)
        h2 = hitting_times_solve(mg)
        scale = np.maximum(np.maximum(np.abs(h1), np.abs(h2)), 1.0)
        assert np.max(np.abs(h1 - h2) / scale) <= 1e-8


def test_fast_solver_matches_slow():
    mg, _ = _pipeline(_random_connected(70, 3, 0.015, 4))
    slow = hitting_times_solve(mg)
    fast = hitting_times_solve(mg, fast=True)
    scale = np.maximum(np.abs(slow), 1.0)
    assert np.max(np.abs(slow - fast) / scale) <= 1e-8


def test_avg_target_triangle_both_routes(k3):
    mg, spec = _pipeline(k3)
    pi = stationary(mg).pi
    h = hitting_times_spectral(spec, mg)
    # pi-weighted column average of {0, 2, 2} is 4/3
    assert np.allclose(avg_target_hitting(h, pi), 4 / 3, atol=1e-12)
    assert np.allclose(avg_target_closed_form(spec, mg), 4 / 3, atol=1e-12)


def test_avg_start_triangle(k3):
    mg, spec = _pipeline(k3)
    pi = stationary(mg).pi
    h = hitting_times_spectral(spec, mg)
    assert np.allclose(avg_start_hitting(h, pi), 4 / 3, atol=1e-12)
    assert avg_start_closed_form(spec) == pytest.approx(4 / 3, abs=1e-12)


def test_closed_forms_match_on_random_instance():
    mg, spec = _pipeline(_random_connected(90, 3, 0.01, 5))
    pi = stationary(mg).pi
    h = hitting_times_spectral(spec, mg)
    at = avg_target_hitting(h, pi)
    ac = avg_target_closed_form(spec, mg)
    assert np.max(np.abs(at - ac) / np.abs(ac)) <= 1e-8
    s = avg_start_hitting(h, pi)
    sc = avg_start_closed_form(spec)
    assert np.max(np.abs(s - sc)) / sc <= 1e-8


def test_hitting_bounds_triangle_coincide(k3):
    mg, spec = _pipeline(k3)
    lower, upper = hitting_time_bounds(mg, spec)
    # equality case: (2/3)^2/(1/3) = 4/3 on both sides
    assert np.allclose(lower, 4 / 3, atol=1e-12)
    assert np.allclose(upper, 4 / 3, atol=1e-12)
    # weaker chained lower bound 2|E~|/d_j - 2 = 1 <= 4/3
    weak = 2 * mg.total_weight / mg.degrees - 2
    assert np.all(weak <= lower + 1e-12)


def test_hitting_bounds_sandwich_random():
    mg, spec = _pipeline(_random_connected(150, 3, 0.006, 6))
    pi = stationary(mg).pi
    h = hitting_times_spectral(spec, mg)
    hj = avg_target_hitting(h, pi)
    lower, upper = hitting_time_bounds(mg, spec)
    slack = 1e-9 * np.abs(hj)
    assert np.all(lower <= hj + slack)
    assert np.all(hj <= upper + slack)


def test_commute_triangle(k3):
    mg, spec = _pipeline(k3)
    wt = compute_walk_times(mg, spec)
    off = ~np.eye(3, dtype=bool)
    assert np.allclose(wt.commute[off], 4.0, atol=1e-12)
    assert np.allclose(np.diag(wt.commute), 0.0)
    lower, upper = commute_time_bounds(mg, spec)
    # 3 <= 4 <= 4: the upper bound is met with equality
    assert np.allclose(lower[off], 3.0, atol=1e-12)
    assert np.allclose(upper[off], 4.0, atol=1e-12)


def test_commute_sandwich_and_quadratic_form_random():
    mg, spec = _pipeline(_random_connected(100, 3, 0.01, 7))
    h = hitting_times_spectral(spec, mg)
    kappa = commute_times(h)
    kappa_q = commute_times_spectral(spec, mg)
    off = ~np.eye(mg.n, dtype=bool)
    scale = np.abs(kappa[off])
    assert np.max(np.abs(kappa - kappa_q)[off] / scale) <= 1e-8
    lower, upper = commute_time_bounds(mg, spec)
    assert np.all(lower[off] <= kappa[off] * (1 + 1e-9))
    assert np.all(kappa[off] <= upper[off] * (1 + 1e-9))


def test_in_proof_identities_random():
    mg, spec = _pipeline(_random_connected(80, 3, 0.012, 8))
    res = in_proof_identity_residuals(spec, mg)
    assert res["target_mass"] <= 1e-10
    assert res["pair_energy"] <= 1e-10


def test_avg_start_constant_and_bounded_random():
    mg, spec = _pipeline(_random_connected(120, 4, 0.0004, 9))
    wt = compute_walk_times(mg, spec)
    n = mg.n
    spread = np.max(np.abs(wt.avg_start - wt.avg_start[0])) / wt.avg_start[0]
    assert spread <= 1e-8
    assert (n - 1) / 2 <= wt.avg_start[0] <= (n - 1) / spec.gap * (1 + 1e-12)


def test_cover_bounds_triangle(k3):
    mg, spec = _pipeline(k3)
    wt = compute_walk_times(mg, spec)
    assert wt.cover_lower == pytest.approx(11 / 3, abs=1e-12)
    assert wt.cover_upper == pytest.approx(11 / 3, abs=1e-12)
    assert wt.cover_lower <= wt.cover_upper


def test_cover_bounds_exclude_diagonal():
    # were the zero diagonal included, the lower bound would be 0
    mg, spec = _pipeline(complete_instance(4))
    lo, hi = cover_time_bounds(hitting_times_spectral(spec, mg))
    hn = 1 + 1 / 2 + 1 / 3 + 1 / 4
    assert lo == pytest.approx(3 * hn, abs=1e-10)
    assert hi == pytest.approx(3 * hn, abs=1e-10)


def test_cover_bounds_require_two_vertices():
    with pytest.raises(ParameterError):
        cover_time_bounds(np.zeros((1, 1)))


def test_harmonic_number():
    assert harmonic_number(1) == 1.0
    assert harmonic_number(3) == pytest.approx(11 / 6, abs=1e-15)


def test_matrix_csv_round_trips_values(k3):
    from hyperwalk.walk_times import matrix_csv

    mg, spec = _pipeline(k3)
    h = hitting_times_spectral(spec, mg)
    lines = matrix_csv(h).strip().split("\n")
    assert lines[0].startswith("i\\j,1,2,3")
    row1 = [float(x) for x in lines[1].split(",")[1:]]
    assert row1 == [0.0, pytest.approx(2.0), pytest.approx(2.0)]


def test_degenerate_gap_raises():
    h = normalized(6, 3, [(1, 2, 3), (4, 5, 6)])
    mg, spec = _pipeline(h)
    with pytest.raises(DegenerateGapError):
        hitting_times_spectral(spec, mg)


def test_singular_system_raises():
    h = normalized(6, 3, [(1, 2, 3), (4, 5, 6)])
    mg = project(h)
    with pytest.raises(SingularSystemError):
        hitting_times_solve(mg)


def test_hitting_diagonal_clamped_to_zero():
    mg, spec = _pipeline(_random_connected(60, 3, 0.02, 10))
    h = hitting_times_spectral(spec, mg)
    assert np.all(np.diag(h) == 0.0)
    off = ~np.eye(mg.n, dtype=bool)
    assert np.all(h[off] > 0.0)

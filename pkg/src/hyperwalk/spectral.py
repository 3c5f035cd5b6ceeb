"""Spectrum of the degree-normalized adjacency matrix.

B_ij = a_ij / sqrt(d_i d_j) has zero diagonal, eigenvalues in [-1, 1],
and top eigenvalue 1 with eigenvector proportional to sqrt(degrees) on
connected instances. Every hitting-time formula downstream consumes the
full eigensystem computed here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EigensolverError, ParameterError, ZeroDegreeError
from .projection import Multigraph


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in descending order; column k of ``eigenvectors`` pairs
    with ``eigenvalues[k]``. ``gap`` is 1 - lambda_2 and ``lambda_bar`` the
    largest deviation of the nontrivial spectrum from the top eigenvalue,
    max(lambda_2, -lambda_n)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    gap: float
    lambda_bar: float

    @property
    def n(self) -> int:
        return self.eigenvalues.shape[0]


def build_normalized_adjacency(mg: Multigraph) -> np.ndarray:
    """B = diag(d)^{-1/2} A diag(d)^{-1/2}; symmetric, zero diagonal."""
    if np.any(mg.degrees == 0):
        raise ZeroDegreeError("some vertex has degree 0; B is undefined")
    inv_sqrt = 1.0 / np.sqrt(mg.degrees.astype(np.float64))
    return mg.weights * inv_sqrt[:, None] * inv_sqrt[None, :]


def decompose(b: np.ndarray) -> Spectrum:
    """Full symmetric eigendecomposition, eigenvalues descending.

    The leading eigenvector's global sign is fixed so its first nonzero
    entry is positive; degenerate eigenspaces keep whatever orthonormal
    basis the solver produced, which is enough because downstream formulas
    only use projector entries within an eigenvalue.
    """
    n = b.shape[0]
    if n < 2:
        raise ParameterError("decompose requires at least 2 vertices")
    try:
        evals, vecs = np.linalg.eigh(b)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"symmetric eigensolver failed: {exc}") from exc
    evals = evals[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    lead = vecs[:, 0]
    nonzero = np.nonzero(np.abs(lead) > 1e-12)[0]
    if nonzero.size and lead[nonzero[0]] < 0:
        vecs[:, 0] = -lead
    gap = float(1.0 - evals[1])
    lambda_bar = float(max(evals[1], -evals[-1]))
    evals.setflags(write=False)
    vecs.setflags(write=False)
    return Spectrum(eigenvalues=evals, eigenvectors=vecs, gap=gap, lambda_bar=lambda_bar)


def spectral_deviation_bound(n: int, d: int, p: float) -> float:
    """Asymptotic a.a.s. upper bound on lambda_bar for H(n, p).

    1/(n-1) + 3 sqrt((1-p) / (C(n-1, d-1) p)), with the constant
    instantiated as exactly 3; at fixed n this is a check band, not a
    theorem.
    """
    if not (0.0 < p < 1.0):
        raise ParameterError(f"bound requires 0 < p < 1, got {p}")
    if n <= d:
        raise ParameterError(f"bound requires n > d, got n={n}, d={d}")
    return 1.0 / (n - 1) + 3.0 * math.sqrt((1.0 - p) / (math.comb(n - 1, d - 1) * p))


def spectrum_residuals(spec: Spectrum, mg: Multigraph) -> dict[str, float]:
    """Numerical residuals of the identities the spectrum must satisfy.

    Keys:
      top_eigenvalue    |lambda_1 - 1|
      perron_direction  max_j |v_{1,j} - sqrt(d_j / 2|E~|)| after sign fix
      orthonormality    max |V^T V - I|
      eigen_residual    max_k ||B v_k - lambda_k v_k||_2
      trace             |sum_k lambda_k|
      mass_identity     max_j |sum_{k>=2} v_{k,j}^2 - (1 - pi_j)|
      diagonal_identity max_j |sum_{k>=2} (1 - lambda_k) v_{k,j}^2 - 1|
    """
    b = build_normalized_adjacency(mg)
    v = spec.eigenvectors
    lam = spec.eigenvalues
    n = spec.n
    pi = mg.degrees / (2.0 * mg.total_weight)
    perron = np.sqrt(pi)
    vtv = v.T @ v
    resid = b @ v - v * lam[None, :]
    sq = v[:, 1:] ** 2
    mass = sq.sum(axis=1)
    weighted = sq @ (1.0 - lam[1:])
    return {
        "top_eigenvalue": float(abs(lam[0] - 1.0)),
        "perron_direction": float(np.max(np.abs(v[:, 0] - perron))),
        "orthonormality": float(np.max(np.abs(vtv - np.eye(n)))),
        "eigen_residual": float(np.max(np.linalg.norm(resid, axis=0))),
        "trace": float(abs(lam.sum())),
        "mass_identity": float(np.max(np.abs(mass - (1.0 - pi)))),
        "diagonal_identity": float(np.max(np.abs(weighted - 1.0))),
    }


def spectrum_json_dict(spec: Spectrum) -> dict:
    """Exportable summary: eigenvalues, gap, lambda_bar."""
    return {
        "eigenvalues": [float(x) for x in spec.eigenvalues],
        "gap": spec.gap,
        "lambda_bar": spec.lambda_bar,
    }


def eigenvectors_csv(spec: Spectrum) -> str:
    """Eigenvectors in column-major order: one line per column (vector)."""
    lines = []
    for k in range(spec.n):
        lines.append(",".join(repr(float(x)) for x in spec.eigenvectors[:, k]))
    return "\n".join(lines) + "\n"

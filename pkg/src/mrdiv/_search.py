"""Derivative-free search utilities over the unitary group.

Unitaries are parameterized by the exponential chart U = exp(H) with H
antihermitian, encoded as a real vector: diagonal phases first, then the
real and imaginary parts of the strictly upper triangle.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize

from .linops import HermitianOp, eig_herm


def chart_dim(d: int) -> int:
    return d * d


def unitary_from_params(theta: np.ndarray, d: int) -> np.ndarray:
    """Map a real vector of length d^2 to a unitary via exp(antihermitian)."""
    theta = np.asarray(theta, dtype=float)
    if theta.size != d * d:
        raise ValueError(f"chart for U({d}) needs {d * d} parameters, got {theta.size}")
    h = np.zeros((d, d), dtype=np.complex128)
    idx = d
    np.fill_diagonal(h, 1j * theta[:d])
    for i in range(d):
        for j in range(i + 1, d):
            h[i, j] = theta[idx] + 1j * theta[idx + 1]
            h[j, i] = -theta[idx] + 1j * theta[idx + 1]
            idx += 2
    # H = i*K with K Hermitian, so U = V e^{i w} V^dag from the eigensystem of K
    k = HermitianOp(h / 1j)
    spec = eig_herm(k)
    v = spec.eigenvectors
    return (v * np.exp(1j * spec.eigenvalues)) @ v.conj().T


def nm_maximize(f, x0: np.ndarray, max_evals: int) -> tuple[float, np.ndarray]:
    """Nelder-Mead ascent of ``f``; returns (best value, best point).

    Infinite objective values are capped for the simplex arithmetic but the
    true (possibly infinite) best is returned.
    """
    best = {"v": -math.inf, "x": np.asarray(x0, dtype=float)}

    def neg(x):
        v = f(x)
        if v > best["v"]:
            best["v"] = v
            best["x"] = np.array(x, dtype=float)
        if math.isinf(v):
            return -1e9 if v > 0 else 1e9
        return -v

    minimize(
        neg,
        np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        options={"maxfev": int(max_evals), "xatol": 1e-9, "fatol": 1e-12},
    )
    return best["v"], best["x"]


def restart_points(dim: int, restarts: int, seed: int, scale: float = math.pi) -> list:
    """Deterministic restart seeds: the chart origin first (the canonical
    basis), then independent random draws split from one seed sequence."""
    seeds = np.random.SeedSequence(seed).spawn(max(0, restarts - 1))
    pts = [np.zeros(dim)]
    for s in seeds:
        rng = np.random.default_rng(s)
        pts.append(rng.uniform(-scale, scale, size=dim))
    return pts[:restarts]

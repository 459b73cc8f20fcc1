import numpy as np

from mrdiv.linops import DensityOp, HermitianOp


def rand_herm(rng, n: int, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (g + g.conj().T) / 2.0


def rand_unitary(rng, n: int) -> np.ndarray:
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(g)
    # fix the phase convention so the factorization is unique
    return q * (np.diag(r) / np.abs(np.diag(r)))


def rand_density(rng, dims: tuple, b=(1,), floor: float = 0.0) -> DensityOp:
    n = int(np.prod(dims))
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    m = g @ g.conj().T + floor * np.eye(n)
    m = m / np.real(np.trace(m))
    return DensityOp(HermitianOp(m, dims, b), validate=False)

"""Hot numerical kernels.

The cyclic Jacobi eigensolver below sits under every cone projection and
objective evaluation, so it carries a numba-compiled fast path.  Set
MRD_PURE_NUMPY=1 to force the plain numpy implementation; it is also the
automatic fallback when numba is not installed.  Both variants are exported
so they can be benchmarked against each other.
"""
from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAS_NUMBA = False

_FORCE_NUMPY = os.environ.get("MRD_PURE_NUMPY", "").strip().lower() in (
    "1",
    "true",
    "yes",
)


def _jacobi_scalar(a: np.ndarray, off_thresh: float, max_sweeps: int):
    """Cyclic complex Jacobi diagonalization, scalar loops (numba-friendly).

    Mutates ``a`` in place.  Returns (diag, v, off, sweeps) where ``v``
    accumulates the rotations so that the original matrix equals
    ``v @ diag(diag) @ v.conj().T`` up to the final off-diagonal norm ``off``.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    # skip threshold per element: if every off-diagonal entry is below this,
    # the total off-diagonal Frobenius norm is below off_thresh
    elem_skip = off_thresh / n if n > 0 else off_thresh

    off = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            off += 2.0 * (a[p, q].real ** 2 + a[p, q].imag ** 2)
    off = np.sqrt(off)

    sweeps = 0
    while off > off_thresh and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= elem_skip:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # a <- G^dag a G with G[[c, s*ph], [-s*conj(ph), c]] on (p, q)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * np.conj(ph) * akq
                    a[k, q] = s * ph * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * ph * aqk
                    a[q, k] = s * np.conj(ph) * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * np.conj(ph) * vkq
                    v[k, q] = s * ph * vkp + c * vkq
        sweeps += 1
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * (a[p, q].real ** 2 + a[p, q].imag ** 2)
        off = np.sqrt(off)

    w = np.empty(n, dtype=np.float64)
    for i in range(n):
        w[i] = a[i, i].real
    return w, v, off, sweeps


def jacobi_numpy(a: np.ndarray, off_thresh: float, max_sweeps: int):
    """Cyclic complex Jacobi diagonalization with vectorized row/column updates.

    Same rotation schedule as the scalar kernel; used as the pure-numpy path.
    Mutates ``a`` in place.
    """
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    elem_skip = off_thresh / n if n > 0 else off_thresh

    def _off(m: np.ndarray) -> float:
        od = m - np.diag(np.diag(m))
        return float(np.linalg.norm(od))

    off = _off(a)
    sweeps = 0
    while off > off_thresh and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= elem_skip:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0.0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * np.conj(ph) * col_q
                a[:, q] = s * ph * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * ph * row_q
                a[q, :] = s * np.conj(ph) * row_p + c * row_q
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * np.conj(ph) * vq
                v[:, q] = s * ph * vp + c * vq
        sweeps += 1
        off = _off(a)

    return np.real(np.diag(a)).copy(), v, off, sweeps


if HAS_NUMBA:
    jacobi_numba = njit(cache=True)(_jacobi_scalar)
else:  # pragma: no cover
    jacobi_numba = None

if HAS_NUMBA and not _FORCE_NUMPY:
    jacobi = jacobi_numba
    ACTIVE_KERNEL = "numba"
else:
    jacobi = jacobi_numpy
    ACTIVE_KERNEL = "numpy"

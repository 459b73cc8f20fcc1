"""Dense complex Hermitian operator algebra.

Construction and validation of Hermitian operators with tensor structure,
partial trace / partial transpose, a Jacobi eigensolver, operator functions,
and projections onto the PSD and PPT cones.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ._kernels import jacobi
from .errors import DomainError, ResourceError, SolverError, StructuralError, ValidationError

HERMITICITY_TOL = 1e-12
PSD_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_TOL_FACTOR = 1e-9  # reconstruction tolerance is this times d times ||X||_max
JACOBI_OFF_FACTOR = 1e-13  # off-diagonal threshold relative to ||X||_F
JACOBI_MAX_SWEEPS = 100
DYKSTRA_TOL = 1e-9
DYKSTRA_MAX_ITER = 5000
MAX_TOTAL_DIM = 4096


class HermitianOp:
    """Hermitian matrix with an ordered subsystem decomposition.

    ``dims`` lists the subsystem dimensions (product equals the matrix
    dimension) and ``b_indices`` marks which subsystems belong to party B.
    Data is hermitized on construction; inputs further than HERMITICITY_TOL
    from Hermitian are rejected.
    """

    __slots__ = ("data", "dims", "b_indices")

    def __init__(
        self,
        data: np.ndarray,
        dims: Sequence[int] | None = None,
        b_indices: Iterable[int] = (),
    ):
        arr = np.asarray(data, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise StructuralError(f"expected a square matrix, got shape {arr.shape}")
        d = arr.shape[0]
        if d > MAX_TOTAL_DIM:
            raise ResourceError(f"total dimension {d} exceeds cap {MAX_TOTAL_DIM}")
        if dims is None:
            dims = (d,)
        dims = tuple(int(k) for k in dims)
        if any(k < 1 for k in dims):
            raise StructuralError(f"subsystem dimensions must be >= 1, got {dims}")
        if int(np.prod(dims)) != d:
            raise StructuralError(f"product of dims {dims} != matrix dimension {d}")
        b = tuple(sorted(set(int(i) for i in b_indices)))
        if any(i < 0 or i >= len(dims) for i in b):
            raise StructuralError(f"b_indices {b} out of range for {len(dims)} subsystems")

        dev = float(np.max(np.abs(arr - arr.conj().T))) if d else 0.0
        if dev > HERMITICITY_TOL:
            raise StructuralError(f"matrix is not Hermitian: ||X - X^dag||_max = {dev:.3e}")
        self.data = (arr + arr.conj().T) / 2.0
        self.dims = dims
        self.b_indices = b

    @classmethod
    def identity(cls, dims: Sequence[int] | int, b_indices: Iterable[int] = ()) -> "HermitianOp":
        if isinstance(dims, numbers.Integral):
            dims = (int(dims),)
        d = int(np.prod(tuple(dims)))
        return cls(np.eye(d, dtype=np.complex128), tuple(dims), b_indices)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def _like(self, arr: np.ndarray) -> "HermitianOp":
        return HermitianOp(arr, self.dims, self.b_indices)

    def _check_compat(self, other: "HermitianOp") -> None:
        if self.dims != other.dims or self.b_indices != other.b_indices:
            raise StructuralError(
                f"incompatible operands: dims {self.dims}/{other.dims}, "
                f"b_indices {self.b_indices}/{other.b_indices}"
            )

    def __add__(self, other: "HermitianOp") -> "HermitianOp":
        other = as_op(other)
        self._check_compat(other)
        return self._like(self.data + other.data)

    def __sub__(self, other: "HermitianOp") -> "HermitianOp":
        other = as_op(other)
        self._check_compat(other)
        return self._like(self.data - other.data)

    def __mul__(self, c) -> "HermitianOp":
        if not isinstance(c, numbers.Real):
            raise StructuralError("only real scalar multiples keep hermiticity")
        return self._like(self.data * float(c))

    __rmul__ = __mul__

    def __neg__(self) -> "HermitianOp":
        return self._like(-self.data)

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "b_indices": list(self.b_indices),
            "re": self.data.real.tolist(),
            "im": self.data.imag.tolist(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HermitianOp":
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj["im"], dtype=np.float64)
        if re.shape != im.shape:
            raise StructuralError("re/im shape mismatch in matrix JSON")
        return cls(re + 1j * im, tuple(obj["dims"]), tuple(obj.get("b_indices", ())))

    def __repr__(self) -> str:
        return f"HermitianOp(dim={self.dim}, dims={self.dims}, B={self.b_indices})"


class DensityOp:
    """A state: PSD within PSD_TOL and unit trace within TRACE_TOL."""

    __slots__ = ("op",)

    def __init__(
        self,
        op,
        dims: Sequence[int] | None = None,
        b_indices: Iterable[int] = (),
        validate: bool = True,
    ):
        # validate=False skips the spectral check for operators that are PSD
        # by construction (tensor powers, convex mixtures of valid states);
        # the trace check is cheap and always runs.
        if isinstance(op, DensityOp):
            op = op.op
        if not isinstance(op, HermitianOp):
            op = HermitianOp(op, dims, b_indices)
        tr = op.trace()
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace {tr!r} is not 1 within {TRACE_TOL}")
        if validate:
            wmin = float(eig_herm(op).eigenvalues[0])
            if wmin < -PSD_TOL:
                raise ValidationError(f"minimum eigenvalue {wmin:.3e} below -{PSD_TOL}")
        self.op = op

    @property
    def data(self) -> np.ndarray:
        return self.op.data

    @property
    def dims(self):
        return self.op.dims

    @property
    def b_indices(self):
        return self.op.b_indices

    @property
    def dim(self) -> int:
        return self.op.dim

    def to_json(self) -> dict:
        return self.op.to_json()

    def __repr__(self) -> str:
        return f"DensityOp(dim={self.dim}, dims={self.dims}, B={self.b_indices})"


def as_op(x) -> HermitianOp:
    """Coerce a DensityOp (or HermitianOp) to its underlying HermitianOp."""
    if isinstance(x, DensityOp):
        return x.op
    if isinstance(x, HermitianOp):
        return x
    raise StructuralError(f"expected HermitianOp or DensityOp, got {type(x).__name__}")


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # unitary, columns aligned with eigenvalues


def tensor(a, b) -> HermitianOp:
    """Kronecker product; dims concatenate and B-markers merge with an offset."""
    a = as_op(a)
    b = as_op(b)
    data = np.kron(a.data, b.data)
    dims = a.dims + b.dims
    off = len(a.dims)
    b_idx = a.b_indices + tuple(i + off for i in b.b_indices)
    return HermitianOp(data, dims, b_idx)


def _pt_array(arr: np.ndarray, dims: tuple, b_indices: tuple) -> np.ndarray:
    n = len(dims)
    t = arr.reshape(dims + dims)
    axes = list(range(2 * n))
    for i in b_indices:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    d = arr.shape[0]
    return t.transpose(axes).reshape(d, d)


def partial_transpose(x) -> HermitianOp:
    """Transpose the B-subsystem indices. Involutive and trace-preserving."""
    x = as_op(x)
    if not x.b_indices:
        raise StructuralError("partial transpose needs a declared bipartition")
    return HermitianOp(_pt_array(x.data, x.dims, x.b_indices), x.dims, x.b_indices)


def partial_trace(x, keep: Iterable[int]) -> HermitianOp:
    """Trace out every subsystem not in ``keep``; kept subsystems stay ordered."""
    x = as_op(x)
    n = len(x.dims)
    keep = tuple(sorted(set(int(i) for i in keep)))
    if any(i < 0 or i >= n for i in keep):
        raise StructuralError(f"keep indices {keep} out of range for {n} subsystems")
    if len(keep) == n:
        return HermitianOp(x.data.copy(), x.dims, x.b_indices)
    t = x.data.reshape(x.dims + x.dims)
    ket = list(range(n))
    bra = list(range(n, 2 * n))
    for i in range(n):
        if i not in keep:
            bra[i] = ket[i]  # repeated label sums the diagonal
    out_labels = [ket[i] for i in keep] + [bra[i] for i in keep]
    out = np.einsum(t, ket + bra, out_labels)
    new_dims = tuple(x.dims[i] for i in keep)
    dk = int(np.prod(new_dims)) if new_dims else 1
    new_b = tuple(j for j, i in enumerate(keep) if i in x.b_indices)
    return HermitianOp(out.reshape(dk, dk), new_dims if new_dims else (1,), new_b)


def eig_herm(x) -> Spectrum:
    """Full eigendecomposition via cyclic Jacobi sweeps.

    Raises SolverError with the remaining off-diagonal norm if the sweep cap
    is hit, or if the reconstruction invariant fails afterwards.
    """
    x = as_op(x)
    d = x.dim
    a = np.ascontiguousarray(x.data, dtype=np.complex128).copy()
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return Spectrum(np.zeros(d), np.eye(d, dtype=np.complex128))
    thresh = JACOBI_OFF_FACTOR * scale
    w, v, off, sweeps = jacobi(a, thresh, JACOBI_MAX_SWEEPS)
    if off > thresh:
        raise SolverError(
            f"jacobi did not converge in {sweeps} sweeps: off-norm {off:.3e} > {thresh:.3e}"
        )
    order = np.argsort(w)
    w = np.ascontiguousarray(w[order])
    v = np.ascontiguousarray(v[:, order])
    recon_err = float(np.max(np.abs((v * w) @ v.conj().T - x.data)))
    lim = EIG_TOL_FACTOR * d * float(np.max(np.abs(x.data)))
    if recon_err > lim:
        raise SolverError(f"eigendecomposition reconstruction error {recon_err:.3e} > {lim:.3e}")
    return Spectrum(w, v)


def herm_fn(x, f: Callable[[float], float], domain_floor: float | None = None) -> HermitianOp:
    """Apply a scalar function on the spectrum: f(X) = V f(Lambda) V†.

    When ``domain_floor`` is given, any eigenvalue below it is a domain error
    (used for negative powers and log).
    """
    x = as_op(x)
    spec = eig_herm(x)
    w = spec.eigenvalues
    if domain_floor is not None and float(w[0]) < domain_floor:
        raise DomainError(
            f"eigenvalue {float(w[0]):.6e} below domain floor {domain_floor:.1e}"
        )
    fw = np.array([float(f(float(t))) for t in w])
    v = spec.eigenvectors
    return HermitianOp((v * fw) @ v.conj().T, x.dims, x.b_indices)


def _psd_array(arr: np.ndarray, dims: tuple) -> np.ndarray:
    spec = eig_herm(HermitianOp(arr, dims))
    w = np.clip(spec.eigenvalues, 0.0, None)
    v = spec.eigenvectors
    out = (v * w) @ v.conj().T
    # the product's rounding asymmetry scales with the matrix norm and would
    # trip the absolute hermiticity gate on large iterates
    return 0.5 * (out + out.conj().T)


def _min_eig(arr: np.ndarray, dims: tuple) -> float:
    return float(eig_herm(HermitianOp(arr, dims)).eigenvalues[0])


def project_psd(x) -> HermitianOp:
    """Frobenius-nearest PSD matrix (clip negative eigenvalues)."""
    x = as_op(x)
    return HermitianOp(_psd_array(x.data, x.dims), x.dims, x.b_indices)


def project_ppt_cone(x, tol: float = DYKSTRA_TOL, max_iter: int = DYKSTRA_MAX_ITER) -> HermitianOp:
    """Dykstra projection onto {omega : omega >= 0, omega^Gamma >= 0}.

    Correction-term variant, so the iteration converges to the actual metric
    projection rather than just a feasible point.
    """
    x = as_op(x)
    if not x.b_indices:
        raise StructuralError("PPT cone projection needs a declared bipartition")
    dims, b = x.dims, x.b_indices

    # already in the cone: the projection is the point itself
    if _min_eig(x.data, dims) >= -tol and _min_eig(_pt_array(x.data, dims, b), dims) >= -tol:
        return HermitianOp(x.data.copy(), dims, b)

    cur = x.data.copy()
    p = np.zeros_like(cur)
    q = np.zeros_like(cur)
    for _ in range(max_iter):
        y = _psd_array(cur + p, dims)
        p = cur + p - y
        g = y + q
        cur = _pt_array(_psd_array(_pt_array(g, dims, b), dims), dims, b)
        q = g - cur
        gap = float(np.max(np.abs(cur - y)))
        if gap <= tol and _min_eig(cur, dims) >= -tol:
            return HermitianOp(cur, dims, b)
    viol_psd = _min_eig(cur, dims)
    viol_ppt = _min_eig(_pt_array(cur, dims, b), dims)
    raise SolverError(
        f"dykstra hit iteration cap {max_iter}: lambda_min(omega)={viol_psd:.3e}, "
        f"lambda_min(omega^Gamma)={viol_ppt:.3e}, projection gap={gap:.3e}"
    )


def trace_product(a, b) -> float:
    """Real Hilbert-Schmidt inner product tr[AB] of two Hermitian operators."""
    a = as_op(a)
    b = as_op(b)
    if a.dim != b.dim:
        raise StructuralError(f"dimension mismatch {a.dim} vs {b.dim}")
    return float(np.einsum("ij,ji->", a.data, b.data).real)

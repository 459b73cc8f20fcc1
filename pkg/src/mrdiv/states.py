"""Bipartite state families, twirling channels, tensor powers.

All symmetric families live on d x d with the B party marked as the second
subsystem; the maximally entangled state is fixed in the canonical basis.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ResourceError, StructuralError
from .linops import MAX_TOTAL_DIM, DensityOp, HermitianOp, as_op, tensor, trace_product

PPT_FLAG_TOL = 1e-10


@dataclass(frozen=True)
class IsotropicCoords:
    """Parameters (d, p) of the state p*Phi + (1-p)*Phi_perp."""

    d: int
    p: float

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"local dimension must be >= 2, got {self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0,1], got {self.p}")

    @property
    def ppt(self) -> bool:
        # separable and PPT exactly when p <= 1/d
        return self.p <= 1.0 / self.d + PPT_FLAG_TOL


@dataclass(frozen=True)
class WernerCoords:
    """Parameters (d, p) of the state p*Theta + (1-p)*Theta_perp."""

    d: int
    p: float

    def __post_init__(self):
        if self.d < 2:
            raise DomainError(f"local dimension must be >= 2, got {self.d}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0,1], got {self.p}")

    @property
    def ppt(self) -> bool:
        return self.p >= 0.5 - PPT_FLAG_TOL


def phi_op(d: int) -> HermitianOp:
    """Maximally entangled projector (1/d) sum_ij |ii><jj| on d x d."""
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            m[i * d + i, j * d + j] = 1.0 / d
    return HermitianOp(m, (d, d), (1,))


def swap_op(d: int) -> HermitianOp:
    """Swap operator F |ij> = |ji| on d x d."""
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for i in range(d):
        for j in range(d):
            m[i * d + j, j * d + i] = 1.0
    return HermitianOp(m, (d, d), (1,))


def sym_projector(d: int) -> HermitianOp:
    f = swap_op(d)
    return HermitianOp((np.eye(d * d) + f.data) / 2.0, (d, d), (1,))


def anti_projector(d: int) -> HermitianOp:
    f = swap_op(d)
    return HermitianOp((np.eye(d * d) - f.data) / 2.0, (d, d), (1,))


def _check_d(d) -> int:
    d = int(d)
    if d < 2:
        raise DomainError(f"local dimension must be >= 2, got {d}")
    return d


def max_entangled(d: int) -> DensityOp:
    return DensityOp(phi_op(_check_d(d)), validate=False)


def phi_perp(d: int) -> DensityOp:
    d = _check_d(d)
    phi = phi_op(d)
    m = (np.eye(d * d) - phi.data) / (d * d - 1.0)
    return DensityOp(HermitianOp(m, (d, d), (1,)), validate=False)


def symmetric_state(d: int) -> DensityOp:
    d = _check_d(d)
    f = swap_op(d)
    m = (np.eye(d * d) + f.data) / (d * (d + 1.0))
    return DensityOp(HermitianOp(m, (d, d), (1,)), validate=False)


def antisymmetric_state(d: int) -> DensityOp:
    d = _check_d(d)
    f = swap_op(d)
    m = (np.eye(d * d) - f.data) / (d * (d - 1.0))
    return DensityOp(HermitianOp(m, (d, d), (1,)), validate=False)


def isotropic(d: int, p: float) -> DensityOp:
    c = IsotropicCoords(_check_d(d), float(p))
    rho = c.p * phi_op(d).data + (1.0 - c.p) * phi_perp(d).data
    return DensityOp(HermitianOp(rho, (d, d), (1,)), validate=False)


def werner(d: int, p: float) -> DensityOp:
    c = WernerCoords(_check_d(d), float(p))
    rho = c.p * symmetric_state(d).data + (1.0 - c.p) * antisymmetric_state(d).data
    return DensityOp(HermitianOp(rho, (d, d), (1,)), validate=False)


_FAMILY_ALIASES = {
    "max_entangled": "max_entangled",
    "phi": "max_entangled",
    "phi_perp": "phi_perp",
    "phi-perp": "phi_perp",
    "symmetric": "symmetric",
    "sym": "symmetric",
    "antisymmetric": "antisymmetric",
    "antisym": "antisymmetric",
    "isotropic": "isotropic",
    "iso": "isotropic",
    "werner": "werner",
}


def make_state(family: str, d: int | None = None, p: float | None = None, op=None) -> DensityOp:
    """Build a state by family name.

    Families: max_entangled (phi), phi_perp, symmetric (sym), antisymmetric
    (antisym), isotropic (iso, needs p), werner (needs p), raw (needs op).
    """
    if family == "raw":
        if op is None:
            raise DomainError("family 'raw' needs an operator")
        return DensityOp(as_op(op))
    key = _FAMILY_ALIASES.get(family)
    if key is None:
        raise DomainError(f"unknown state family {family!r}")
    if d is None:
        raise DomainError(f"family {family!r} needs a local dimension d")
    if key == "max_entangled":
        return max_entangled(d)
    if key == "phi_perp":
        return phi_perp(d)
    if key == "symmetric":
        return symmetric_state(d)
    if key == "antisymmetric":
        return antisymmetric_state(d)
    if p is None:
        raise DomainError(f"family {family!r} needs a parameter p")
    if key == "isotropic":
        return isotropic(d, p)
    return werner(d, p)


def full_support_mix(rho: DensityOp, eps: float) -> DensityOp:
    """(1-eps)*rho + eps*I/dim; minimum eigenvalue at least eps/dim."""
    eps = float(eps)
    if not 0.0 < eps <= 1.0:
        raise DomainError(f"mixing weight must be in (0,1], got {eps}")
    x = as_op(rho)
    m = (1.0 - eps) * x.data + eps * np.eye(x.dim) / x.dim
    return DensityOp(HermitianOp(m, x.dims, x.b_indices), validate=False)


def tensor_power(rho: DensityOp, n: int) -> DensityOp:
    """n-fold tensor power; bipartition is the block cut (all A's vs all B's),
    represented by the per-copy B markers carried through the product."""
    n = int(n)
    if n < 1:
        raise DomainError(f"tensor power needs n >= 1, got {n}")
    x = as_op(rho)
    if x.dim**n > MAX_TOTAL_DIM:
        raise ResourceError(
            f"tensor power dimension {x.dim}**{n} exceeds cap {MAX_TOTAL_DIM}"
        )
    out = x
    for _ in range(n - 1):
        out = tensor(out, x)
    return DensityOp(out, validate=False)


def regroup_bipartite(rho) -> DensityOp:
    """Permute subsystems so all A factors come first, then all B factors,
    each merged into one block, giving dims (d_A, d_B) with B = (1,).

    Needed to feed tensor powers (alternating A/B factors) to operations
    that expect a plain two-party state.
    """
    x = as_op(rho)
    n = len(x.dims)
    b = set(x.b_indices)
    a_idx = [i for i in range(n) if i not in b]
    b_idx = [i for i in range(n) if i in b]
    if not a_idx or not b_idx:
        raise StructuralError("regrouping needs at least one factor on each side")
    perm = a_idx + b_idx
    t = x.data.reshape(x.dims + x.dims)
    t = t.transpose(tuple(perm) + tuple(n + i for i in perm))
    da = int(np.prod([x.dims[i] for i in a_idx]))
    db = int(np.prod([x.dims[i] for i in b_idx]))
    m = t.reshape(da * db, da * db)
    return DensityOp(HermitianOp(m, (da, db), (1,)), validate=False)


def twirl(x, kind: str) -> HermitianOp:
    """Project onto the isotropic or Werner commutant.

    isotropic: c1*Phi + c2*(1-Phi) with c1 = tr[Phi X], c2 = tr[(1-Phi)X]/(d^2-1).
    werner: preserves tr[P_sym X] and tr[P_anti X].
    Algebraic projection, not a Haar average; trace-preserving and idempotent,
    and it maps the PPT cone into itself.
    """
    x = as_op(x)
    if len(x.dims) != 2 or x.dims[0] != x.dims[1] or x.b_indices != (1,):
        raise StructuralError(
            f"twirl needs a d x d bipartition with B second, got dims {x.dims}, B {x.b_indices}"
        )
    d = x.dims[0]
    if kind == "isotropic":
        phi = phi_op(d)
        c1 = trace_product(phi, x)
        c2 = (x.trace() - c1) / (d * d - 1.0)
        m = c1 * phi.data + c2 * (np.eye(d * d) - phi.data)
        return HermitianOp(m, x.dims, x.b_indices)
    if kind == "werner":
        ps = sym_projector(d)
        pa = anti_projector(d)
        s = trace_product(ps, x)
        a = trace_product(pa, x)
        rank_s = d * (d + 1) // 2
        rank_a = d * (d - 1) // 2
        m = (s / rank_s) * ps.data + (a / rank_a) * pa.data
        return HermitianOp(m, x.dims, x.b_indices)
    raise DomainError(f"unknown twirl kind {kind!r}")

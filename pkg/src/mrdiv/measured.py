"""Measured Renyi divergence for a fixed POVM, and lower-bound search over
local measurement families.

The search space for LO is a pair of rank-1 PVMs on dilated spaces A' = A(x)A
and B' = B(x)B with the ancillas pinned to |0>, which sweeps exactly the
rank-1 POVMs with d^2 outcomes per party; that family attains the LO optimum.
LOCC1 conditions the B-side basis on the A outcome (one-way, A to B).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._search import chart_dim, nm_maximize, restart_points, unitary_from_params
from .bounds import BoundResult
from .classical import ZERO_FLOOR, ExtReal, FiniteMeasure, renyi
from .errors import DomainError, StructuralError, ValidationError
from .linops import HermitianOp, as_op, eig_herm
from .povm import Povm, born
from .varprog import ConeSpec, SolverConfig, variational_bound

UNITARITY_TOL = 1e-10
EXACT_MATCH_TOL = 1e-6
# smallest reference eigenvalue at which the support guard may engage; below
# it a dropped cell could carry non-negligible rho-mass
FULL_SUPPORT_MIN = 1e-6


def _check_unitary(u: np.ndarray, name: str):
    d = u.shape[0]
    dev = float(np.max(np.abs(u.conj().T @ u - np.eye(d))))
    if dev > UNITARITY_TOL:
        raise ValidationError(f"{name} is not unitary: ||U^dag U - 1||_max = {dev:.3e}")


@dataclass
class LocalPvmParams:
    """Rank-1 local PVM bases on the dilated spaces.

    ``u_a`` acts on A' (dim d_A^2).  For LO, ``u_b`` acts on B' (dim d_B^2);
    for LOCC1, ``u_b_cond`` holds one B'-basis per A outcome instead.
    """

    u_a: np.ndarray
    u_b: np.ndarray | None = None
    u_b_cond: list | None = None

    def __post_init__(self):
        _check_unitary(self.u_a, "u_a")
        if (self.u_b is None) == (self.u_b_cond is None):
            raise StructuralError("exactly one of u_b / u_b_cond must be set")
        if self.u_b is not None:
            _check_unitary(self.u_b, "u_b")
        else:
            for i, u in enumerate(self.u_b_cond):
                _check_unitary(u, f"u_b_cond[{i}]")


def divergence_with_povm(rho, sigma, povm: Povm, alpha: float) -> ExtReal:
    """Classical divergence of the two outcome distributions; by definition a
    lower bound on the measured divergence of any class containing the POVM."""
    return renyi(born(rho, povm), born(sigma, povm), alpha)


def _bipartite(rho, sigma):
    rop, sop = as_op(rho), as_op(sigma)
    if rop.dims != sop.dims or rop.b_indices != sop.b_indices:
        raise DomainError("rho and sigma must share the same factorization")
    if len(rop.dims) != 2 or rop.b_indices != (1,):
        raise DomainError("need a two-party state with dims (d_A, d_B) and B = second factor")
    return rop, sop


def _effective_rows(u: np.ndarray, d: int) -> np.ndarray:
    # ancilla pinned to |0>: only rows (i, 0) of the dilated basis matter,
    # giving d x d^2 effective vectors whose outer products form the POVM
    return u[::d, :]


def _lo_stats(r4, s4, wa, wb):
    mu = np.einsum("ix,jy,ijkl,kx,ly->xy", wa.conj(), wb.conj(), r4, wa, wb, optimize=True).real
    nu = np.einsum("ix,jy,ijkl,kx,ly->xy", wa.conj(), wb.conj(), s4, wa, wb, optimize=True).real
    return mu.reshape(-1), nu.reshape(-1)


def _locc1_stats(r4, s4, wa, wbs):
    na = wa.shape[1]
    nb = wbs[0].shape[1]
    mu = np.empty((na, nb))
    nu = np.empty((na, nb))
    for x in range(na):
        ax = wa[:, x]
        rb = np.einsum("a,abcd,c->bd", ax.conj(), r4, ax)
        sb = np.einsum("a,abcd,c->bd", ax.conj(), s4, ax)
        wb = wbs[x]
        mu[x] = np.einsum("jy,jl,ly->y", wb.conj(), rb, wb).real
        nu[x] = np.einsum("jy,jl,ly->y", wb.conj(), sb, wb).real
    return mu.reshape(-1), nu.reshape(-1)


def _measure_value(mu: np.ndarray, nu: np.ndarray, alpha: float, guard: bool = False) -> float:
    if guard:
        # with sigma > 0 every cell satisfies nu_i >= lam_min * tr E_i, so a
        # cell under the mass floor on nu carries only commensurate dust on
        # mu; dropping the pair removes rounding-made support violations
        keep = nu > ZERO_FLOOR
        mu, nu = mu[keep], nu[keep]
    m = FiniteMeasure({i: max(float(p), 0.0) for i, p in enumerate(mu)})
    n = FiniteMeasure({i: max(float(p), 0.0) for i, p in enumerate(nu)})
    return renyi(m, n, alpha).value


def _assemble_povm(params: LocalPvmParams, da: int, db: int, mclass: str) -> Povm:
    wa = _effective_rows(params.u_a, da)
    elements = []
    labels = []
    if mclass == "LO":
        wb = _effective_rows(params.u_b, db)
        for x in range(wa.shape[1]):
            ea = np.outer(wa[:, x], wa[:, x].conj())
            for y in range(wb.shape[1]):
                eb = np.outer(wb[:, y], wb[:, y].conj())
                elements.append(HermitianOp(np.kron(ea, eb), (da, db), (1,)))
                labels.append((x, y))
        construction = {"form": "product", "projective": False}
    else:
        for x in range(wa.shape[1]):
            ea = np.outer(wa[:, x], wa[:, x].conj())
            wb = _effective_rows(params.u_b_cond[x], db)
            for y in range(wb.shape[1]):
                eb = np.outer(wb[:, y], wb[:, y].conj())
                elements.append(HermitianOp(np.kron(ea, eb), (da, db), (1,)))
                labels.append((x, y))
        construction = {"form": "conditional", "projective": False}
    return Povm(elements, labels, mclass, construction, validate=False)


def optimize_measured(
    rho,
    sigma,
    alpha: float,
    mclass: str = "LO",
    cfg: SolverConfig | None = None,
    reference: float | None = None,
) -> BoundResult:
    """Search rank-1 local measurement families for the best lower bound.

    The family swept here attains the class optimum, so the supremum over it
    is the measured divergence; the reported number is the best over restarts
    and is a sound lower bound regardless of convergence.  The first restart
    is the canonical local basis.  When a ``reference`` value is supplied and
    matched within 1e-6 the result is flagged certified_exact.

    When sigma has full support the value is finite for every measurement, so
    outcome cells whose sigma-probability rounds below the classical mass
    floor are dropped together with their rho-probability before evaluation;
    this cannot raise the reported value by more than the floor scale.
    """
    if mclass not in ("LO", "LOCC1"):
        raise DomainError(f"optimize_measured handles LO and LOCC1, not {mclass!r}")
    if not (alpha > 0):
        raise DomainError(f"order alpha={alpha} outside (0, inf]")
    cfg = cfg or SolverConfig()
    rop, sop = _bipartite(rho, sigma)
    da, db = rop.dims
    r4 = rop.data.reshape(da, db, da, db)
    s4 = sop.data.reshape(da, db, da, db)
    na = chart_dim(da * da)
    nb = chart_dim(db * db)

    if mclass == "LO":
        pdim = na + nb

        def split(x):
            ua = unitary_from_params(x[:na], da * da)
            ub = unitary_from_params(x[na:], db * db)
            return LocalPvmParams(ua, u_b=ub)

        def stats(x):
            p = split(x)
            return _lo_stats(r4, s4, _effective_rows(p.u_a, da), _effective_rows(p.u_b, db)), p
    else:
        pdim = na + (da * da) * nb

        def split(x):
            ua = unitary_from_params(x[:na], da * da)
            ubs = [
                unitary_from_params(x[na + i * nb : na + (i + 1) * nb], db * db)
                for i in range(da * da)
            ]
            return LocalPvmParams(ua, u_b_cond=ubs)

        def stats(x):
            p = split(x)
            wbs = [_effective_rows(u, db) for u in p.u_b_cond]
            return _locc1_stats(r4, s4, _effective_rows(p.u_a, da), wbs), p

    # a full-support reference makes every measurement value finite, so the
    # cell guard in _measure_value may engage
    guard = float(eig_herm(sop).eigenvalues[0]) > FULL_SUPPORT_MIN

    def f(x):
        (mu, nu), _ = stats(x)
        return _measure_value(mu, nu, alpha, guard)

    best_v = -math.inf
    best_x = None
    per_restart = []
    for x0 in restart_points(pdim, cfg.restarts, cfg.seed):
        v, xb = nm_maximize(f, x0, cfg.max_evals)
        per_restart.append(v)
        if v > best_v:
            best_v, best_x = v, xb

    certified = reference is not None and (
        (math.isinf(best_v) and math.isinf(reference))
        or (math.isfinite(best_v) and abs(best_v - float(reference)) <= EXACT_MATCH_TOL)
    )
    stable = sum(
        1 for v in per_restart if math.isfinite(best_v) and abs(v - best_v) <= 1e-9
    ) * 2 >= len(per_restart)
    status = "converged" if (certified or stable) else "budget"

    extra: dict = {
        "class": mclass,
        "restarts": cfg.restarts,
        "certified_exact": bool(certified),
    }
    if best_x is not None:
        _, params = stats(best_x)
        extra["povm"] = _assemble_povm(params, da, db, mclass)
        extra["params"] = params
    return BoundResult(
        value_nats=ExtReal(best_v),
        kind="lower",
        alpha=alpha,
        mclass=mclass,
        status=status,
        iterations=cfg.restarts * cfg.max_evals,
        extra=extra,
    )


def measured_fidelity_bound(rho, sigma, cone: ConeSpec, cfg: SolverConfig | None = None) -> BoundResult:
    """Lower bound on the measured fidelity via the order-1/2 program.

    Minimizes sqrt(tr[rho omega^-1] tr[sigma omega]) over the cone; the value
    equals exp(-V/2) at the order-1/2 variational optimum V, and any feasible
    omega certifies the bound.  States without full support should be
    smoothed first (full_support_mix); the sensitivity entries in extra
    expose the floor dependence.
    """
    res = variational_bound(rho, sigma, 0.5, cone, cfg)
    v = res.value.value
    bound = math.exp(-v / 2.0) if math.isfinite(v) else 0.0
    return BoundResult(
        value_nats=ExtReal(bound),
        kind="lower",
        alpha=0.5,
        mclass={"PSD": "ALL", "PPT": "PPT", "SEP_inner": "SEP"}[cone.kind],
        status=res.status,
        iterations=res.iterations,
        extra={"quantity": "fidelity", "variational_value": v, "sensitivity": res.sensitivity},
    )

"""Max-order (alpha = infinity) divergence programs for bipartite states.

The unrestricted quantity is a spectral formula.  Under a positive partial
transpose constraint on the measurement side it becomes a pair of conic
programs:

  primal   sup  log tr[rho w] / tr[sigma w]   over w PSD with w^Gamma PSD
  dual     inf  log lam  s.t.  lam*sigma - rho = X + Y^Gamma,  X, Y PSD

Any feasible w gives a lower bound, any feasible (lam, X, Y) an upper bound,
so the two solvers sandwich the common optimum.  For the highly symmetric
state families the dual has a closed-form certificate built here directly
from partial-transpose spectra, with an analytic positivity check and a
dense residual check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundResult
from .classical import INF, ExtReal
from .errors import DomainError, SolverError, StructuralError, ValidationError
from .linops import (
    HermitianOp,
    _psd_array,
    _pt_array,
    as_op,
    eig_herm,
)
from .states import (
    antisymmetric_state,
    isotropic,
    max_entangled,
    phi_perp,
    symmetric_state,
    tensor_power,
    werner,
)
from .varprog import ConeSpec, SolverConfig, variational_bound

SUPPORT_RTOL = 1e-12  # sigma eigenvalues below this (relative) count as zero
LEAK_TOL = 1e-12  # rho mass outside supp(sigma) above this means +inf
CERT_EIG_FLOOR = -1e-10
CERT_RESIDUAL_TOL = 1e-9
FEAS_RTOL = 1e-8  # split residual tolerance, relative to ||lam*sigma - rho||_F
LAMBDA_RTOL = 1e-6
BRACKET_DOUBLINGS = 40
SPLIT_BUDGET = 3000

CERT_FAMILIES = ("phi_vs_perp", "anti_vs_sym", "iso", "werner")


def quantum_max_divergence(rho, sigma) -> ExtReal:
    """log of the largest eigenvalue of sigma^{-1/2} rho sigma^{-1/2} on the
    support of sigma; +inf when rho has mass outside that support."""
    rop, sop = as_op(rho), as_op(sigma)
    if rop.dims != sop.dims:
        raise DomainError("rho and sigma must share the same factorization")
    spec = eig_herm(sop)
    w = spec.eigenvalues
    cut = max(float(w[-1]), 0.0) * SUPPORT_RTOL
    supp = w > cut
    if not supp.any():
        return INF
    b = spec.eigenvectors.conj().T @ rop.data @ spec.eigenvectors
    out = ~supp
    if out.any():
        leak = float(np.real(np.trace(b[np.ix_(out, out)])))
        if leak > LEAK_TOL:
            return INF
    ws = np.sqrt(w[supp])
    m = b[np.ix_(supp, supp)] / ws[:, None] / ws[None, :]
    m = (m + m.conj().T) / 2.0
    lam = float(eig_herm(HermitianOp(m)).eigenvalues[-1])
    return ExtReal(math.log(lam))


def ppt_max_primal(rho, sigma, cfg: SolverConfig | None = None,
                   cone: ConeSpec | None = None) -> BoundResult:
    """Gradient ascent over the doubly PSD cone.

    The value at the final (feasible) iterate never exceeds the primal
    supremum, so the result is a lower bound on the program value whatever
    the convergence status.  The program value itself upper-bounds the
    measured max divergence of every PPT-implementable POVM.
    """
    cone = cone or ConeSpec("PPT")
    if cone.kind != "PPT":
        raise DomainError(f"ppt_max_primal needs a PPT cone, got {cone.kind!r}")
    res = variational_bound(rho, sigma, math.inf, cone, cfg)
    return BoundResult(
        value_nats=res.value,
        kind="lower",
        alpha=math.inf,
        mclass="PPT",
        status=res.status,
        iterations=res.iterations,
        extra={"omega": res.omega, "sensitivity": res.sensitivity},
    )


@dataclass
class DualCertificate:
    """Feasible point (lam, X, Y) of the dual program.

    Certifies  D <= log(lam)  for the PPT-constrained max divergence; the
    residual is the max-norm defect of  lam*sigma - rho - X - Y^Gamma.
    ``family``, ``d`` and ``n`` are set for the closed-form constructions.
    """

    lam: float
    x: HermitianOp
    y: HermitianOp
    residual: float
    family: str | None = None
    d: int | None = None
    n: int | None = None

    @property
    def bound_nats(self) -> float:
        return math.log(self.lam)

    def validate(self, rho, sigma, residual_tol: float = CERT_RESIDUAL_TOL,
                 eig_floor: float = CERT_EIG_FLOOR) -> dict:
        """Recheck feasibility against the pair the certificate is for."""
        rop, sop = as_op(rho), as_op(sigma)
        yg = _pt_array(self.y.data, rop.dims, rop.b_indices)
        r = self.lam * sop.data - rop.data - self.x.data - yg
        residual = float(np.max(np.abs(r)))
        min_x = float(eig_herm(self.x).eigenvalues[0])
        min_y = float(eig_herm(self.y).eigenvalues[0])
        ok = residual <= residual_tol and min_x >= eig_floor and min_y >= eig_floor
        return {
            "ok": bool(ok),
            "residual": residual,
            "min_eig_x": min_x,
            "min_eig_y": min_y,
            "bound_nats": self.bound_nats,
        }

    def to_json(self) -> dict:
        def mat(op: HermitianOp):
            return {"re": np.real(op.data).tolist(), "im": np.imag(op.data).tolist()}

        return {
            "lambda": self.lam,
            "X": mat(self.x),
            "Y": mat(self.y),
            "residual": self.residual,
            "family": self.family,
            "d": self.d,
            "n": self.n,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DualCertificate":
        def mat(m):
            return np.asarray(m["re"], dtype=float) + 1j * np.asarray(m["im"], dtype=float)

        d, n = obj.get("d"), obj.get("n")
        if d and n:
            dims = (int(d),) * (2 * int(n))
            b = tuple(range(1, 2 * int(n), 2))
        else:
            dims, b = None, ()
        return cls(
            lam=float(obj["lambda"]),
            x=HermitianOp(mat(obj["X"]), dims, b),
            y=HermitianOp(mat(obj["Y"]), dims, b),
            residual=float(obj["residual"]),
            family=obj.get("family"),
            d=int(d) if d else None,
            n=int(n) if n else None,
        )


def _split_feasible(c: np.ndarray, dims, b, tol: float, budget: int):
    """Dykstra search for X, Y PSD with X + Y^Gamma = c.

    Alternates the exact affine projection (which needs no correction term)
    with the corrected product-cone projection.  Returns (x, y, residual,
    iterations) on success, None when the budget runs out; the caller treats
    a miss as infeasible, which can only push the certified bound up, never
    below the true optimum.
    """
    x = _psd_array(c, dims)
    y = np.zeros_like(c)
    px = np.zeros_like(c)
    py = np.zeros_like(c)
    for it in range(1, budget + 1):
        w = (c - x - _pt_array(y, dims, b)) / 2.0
        x = x + w
        y = y + _pt_array(w, dims, b)
        tx = x + px
        x = _psd_array(tx, dims)
        px = tx - x
        ty = y + py
        y = _psd_array(ty, dims)
        py = ty - y
        rn = float(np.linalg.norm(c - x - _pt_array(y, dims, b)))
        if rn <= tol:
            return x, y, rn, it
    return None


def ppt_max_dual(rho, sigma, cfg: SolverConfig | None = None,
                 feas_rtol: float = FEAS_RTOL, lam_rtol: float = LAMBDA_RTOL,
                 split_budget: int = SPLIT_BUDGET) -> BoundResult:
    """Bisection on lam with a feasibility oracle for the dual decomposition.

    Runs the primal first to seed the bracket floor; the unrestricted max
    divergence seeds the ceiling when finite (its decomposition takes Y = 0),
    otherwise the ceiling comes from geometric doubling.  Returns the bound
    at the last certified-feasible lam with the achieving certificate in
    ``extra["certificate"]``.
    """
    rop, sop = as_op(rho), as_op(sigma)
    if rop.dims != sop.dims or rop.b_indices != sop.b_indices:
        raise DomainError("rho and sigma must share the same factorization")
    dims, b = rop.dims, rop.b_indices
    if not b or len(b) == len(dims):
        raise StructuralError("dual split needs factors on both sides of the cut")

    primal = ppt_max_primal(rho, sigma, cfg)
    pval = float(primal.value_nats)
    if not math.isfinite(pval):
        raise SolverError("primal seed did not produce a finite value")
    lo = math.exp(pval)
    total_iters = primal.iterations

    def probe(lam: float):
        nonlocal total_iters
        c = lam * sop.data - rop.data
        tol = feas_rtol * max(float(np.linalg.norm(c)), 1e-30)
        out = _split_feasible(c, dims, b, tol, split_budget)
        if out is None:
            total_iters += split_budget
            return None
        total_iters += out[3]
        return out[:3]

    # ceiling: unrestricted value when finite, else doubling from the floor
    dmax = quantum_max_divergence(rho, sigma)
    margin = 1.0 + 16.0 * lam_rtol
    hi = max(math.exp(float(dmax)) * margin, lo * margin) if not dmax.is_inf else lo * 2.0
    found = None
    for _ in range(BRACKET_DOUBLINGS):
        res = probe(hi)
        if res is not None:
            found = (hi, res)
            break
        hi *= 2.0
    if found is None:
        raise SolverError("dual-bracket-failed: no feasible lam within the doubling cap")

    while hi > lo * (1.0 + lam_rtol):
        mid = math.sqrt(lo * hi)
        res = probe(mid)
        if res is not None:
            hi, found = mid, (mid, res)
        else:
            lo = mid

    lam, (xa, ya, rn) = found
    cert = DualCertificate(
        lam=lam,
        x=HermitianOp(xa, dims, b),
        y=HermitianOp(ya, dims, b),
        residual=rn,
        family=None,
    )
    return BoundResult(
        value_nats=ExtReal(math.log(lam)),
        kind="upper",
        alpha=math.inf,
        mclass="PPT",
        status="converged",
        iterations=total_iters,
        extra={"certificate": cert, "primal": primal, "lambda": lam,
               "feas_tol": feas_rtol},
    )


# ---------------------------------------------------------------------------
# closed-form certificates


def _iso_case(d: int, p: float, q: float) -> int:
    t = 1.0 / d
    e = 1e-12
    if q <= p + e and p <= t + e:
        return 1
    if p >= t - e and q <= t + e and p * q <= t * t + e:
        return 2
    if p >= t - e and q >= t - e and abs(p - q) <= e:
        return 3
    return 0


def _werner_case(d: int, p: float, q: float) -> int:
    e = 1e-12
    if p >= 0.5 - e and q >= 0.5 - e and p <= q + e:
        return 1
    if p <= 0.5 + e and q >= 0.5 - e and (2 * p - 1) * (2 * q - 1) <= d * (p + q - 1) + e:
        return 2
    if p <= 0.5 + e and q <= 0.5 + e and abs(p - q) <= e:
        return 3
    return 0


def _cert_eigs(base: str, d: int, n: int, p: float, q: float, lam: float) -> list:
    """Exact eigenvalues of Y, grouped by the number k of factors on the
    distinguished eigenspace.  Both inputs are linear in the same operator
    (swap, or the maximally entangled projector), so all tensor factors
    commute and the spectrum is a product formula."""
    if base == "iso":
        # partial transpose of an isotropic state: (xd+1)/(d(d+1)) on the
        # symmetric eigenspace of swap, (1-xd)/(d(d-1)) on the antisymmetric
        ap = ((p * d + 1) / (d * (d + 1)), (1 - p * d) / (d * (d - 1)))
        aq = ((q * d + 1) / (d * (d + 1)), (1 - q * d) / (d * (d - 1)))
        mult = (d * (d + 1) // 2, d * (d - 1) // 2)
    else:
        # partial transpose of a Werner state: (2x-1)/d on the maximally
        # entangled vector, (d+1-2x)/(d(d^2-1)) on its complement
        ap = ((2 * p - 1) / d, (d + 1 - 2 * p) / (d * (d * d - 1)))
        aq = ((2 * q - 1) / d, (d + 1 - 2 * q) / (d * (d * d - 1)))
        mult = (1, d * d - 1)
    out = []
    for k in range(n + 1):
        ev = lam * aq[0] ** k * aq[1] ** (n - k) - ap[0] ** k * ap[1] ** (n - k)
        m = math.comb(n, k) * mult[0] ** k * mult[1] ** (n - k)
        out.append((k, ev, m))
    return out


def explicit_certificate(family: str, d: int, n: int,
                         p: float | None = None, q: float | None = None) -> DualCertificate:
    """Closed-form dual certificate (X = 0) for a symmetric state family.

    phi_vs_perp: maximally entangled vs its normalized complement, any d, n.
    anti_vs_sym: normalized antisymmetric vs symmetric projector, any d, n.
    iso / werner: one-parameter families; feasibility of the closed form is
    gated on the (p, q) region and a DomainError names the violated region
    otherwise.  Positivity of Y is checked through its exact eigenvalues and
    the decomposition identity through a dense max-norm residual.
    """
    d, n = int(d), int(n)
    if d < 2:
        raise DomainError(f"need local dimension d >= 2, got {d}")
    if n < 1:
        raise DomainError(f"need n >= 1 copies, got {n}")
    if family in ("phi_vs_perp", "anti_vs_sym"):
        if p is not None or q is not None:
            raise DomainError(f"family {family!r} takes no p or q")
        if family == "phi_vs_perp":
            base, p, q = "iso", 1.0, 0.0
            rho1, sigma1 = max_entangled(d), phi_perp(d)
            lam1 = float(d + 1)
        else:
            base, p, q = "werner", 0.0, 1.0
            rho1, sigma1 = antisymmetric_state(d), symmetric_state(d)
            lam1 = (d + 1.0) / (d - 1.0)
    elif family in ("iso", "werner"):
        if p is None or q is None:
            raise DomainError(f"family {family!r} needs both p and q")
        p, q = float(p), float(q)
        base = family
        if base == "iso":
            if _iso_case(d, p, q) == 0:
                raise DomainError(
                    f"no isotropic certificate at d={d}, p={p}, q={q}: valid "
                    "regions are q <= p <= 1/d; p >= 1/d >= q with p*q <= 1/d^2; "
                    "p = q >= 1/d"
                )
            rho1, sigma1 = isotropic(d, p), isotropic(d, q)
            lam1 = (p * d + 1) / (q * d + 1)
        else:
            if _werner_case(d, p, q) == 0:
                raise DomainError(
                    f"no Werner certificate at d={d}, p={p}, q={q}: valid "
                    "regions are 1/2 <= p <= q; p <= 1/2 <= q with "
                    "(2p-1)(2q-1) <= d(p+q-1); p = q <= 1/2"
                )
            rho1, sigma1 = werner(d, p), werner(d, q)
            lam1 = (d + 1.0 - 2 * p) / (d + 1.0 - 2 * q)
    else:
        raise DomainError(f"unknown certificate family {family!r}; "
                          f"choose from {CERT_FAMILIES}")

    lam = lam1**n
    eigs = _cert_eigs(base, d, n, p, q, lam)
    min_eig = min(ev for _, ev, _ in eigs)
    if min_eig < CERT_EIG_FLOOR:
        raise ValidationError(
            f"certificate eigenvalue {min_eig:.3e} below floor {CERT_EIG_FLOOR}"
        )

    rho_n = tensor_power(rho1, n)
    sig_n = tensor_power(sigma1, n)
    dims, b = rho_n.dims, rho_n.b_indices
    r1g = _pt_array(as_op(rho1).data, rho1.dims, rho1.b_indices)
    s1g = _pt_array(as_op(sigma1).data, sigma1.dims, sigma1.b_indices)
    yr = r1g
    ys = s1g
    for _ in range(n - 1):
        yr = np.kron(yr, r1g)
        ys = np.kron(ys, s1g)
    y = lam * ys - yr

    resid = float(np.max(np.abs(
        lam * sig_n.data - rho_n.data - _pt_array(y, dims, b)
    )))
    if resid > CERT_RESIDUAL_TOL:
        raise ValidationError(f"certificate residual {resid:.3e} exceeds "
                              f"{CERT_RESIDUAL_TOL}")
    return DualCertificate(
        lam=lam,
        x=HermitianOp(np.zeros_like(y), dims, b),
        y=HermitianOp(y, dims, b),
        residual=resid,
        family=family,
        d=d,
        n=n,
    )

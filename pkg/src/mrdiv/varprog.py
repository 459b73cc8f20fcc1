"""Cone-constrained variational programs for measured Renyi divergences.

The scalar family nu_alpha(omega) lower-bounds the measured divergence at
every feasible omega and attains it at the optimum over the matching cone:
PSD for unrestricted measurements (exact at every order), the PPT cone for
an upper bound on the separable/PPT classes, and an inner separable
parameterization for heuristic lower estimates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import BoundResult
from .classical import ExtReal, FiniteMeasure, renyi
from .errors import DomainError, SolverError, ValidationError
from .linops import (
    DYKSTRA_MAX_ITER,
    DYKSTRA_TOL,
    HermitianOp,
    Spectrum,
    _pt_array,
    _psd_array,
    as_op,
    eig_herm,
    trace_product,
)
from .povm import Povm, born, conditional_povm, product_povm

DELTA_DEFAULT = 1e-8
DELTA_MIN = 1e-10
DELTA_MAX = 1e-4
GRAD_MAX_ITER = 3000
GRAD_REL_TOL = 1e-9
ARMIJO_C = 1e-4
MAX_HALVINGS = 60
SENS_POLISH_ITERS = 200

_CONE_KINDS = ("PSD", "PPT", "SEP_inner")


@dataclass(frozen=True)
class ConeSpec:
    """Feasible cone for the variational program, with the strict-positivity
    floor omega >= delta*1 that keeps matrix powers well defined."""

    kind: str
    delta: float = DELTA_DEFAULT
    sep_terms: int | None = None
    dykstra_tol: float = DYKSTRA_TOL
    dykstra_max_iter: int = DYKSTRA_MAX_ITER

    def __post_init__(self):
        if self.kind not in _CONE_KINDS:
            raise ValidationError(f"unknown cone kind {self.kind!r}; expected one of {_CONE_KINDS}")
        if not (DELTA_MIN <= self.delta <= DELTA_MAX):
            raise ValidationError(
                f"cone floor delta={self.delta:g} outside [{DELTA_MIN:g}, {DELTA_MAX:g}]"
            )
        if self.kind == "SEP_inner" and (self.sep_terms is None or self.sep_terms < 1):
            raise ValidationError("SEP_inner cone needs sep_terms >= 1")


@dataclass(frozen=True)
class SolverConfig:
    delta: float = DELTA_DEFAULT
    max_iter: int = GRAD_MAX_ITER
    tol: float = GRAD_REL_TOL
    restarts: int = 32
    seed: int = 7
    max_evals: int = 2000   # per restart, derivative-free searches only

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "max_iter": self.max_iter,
            "tol": self.tol,
            "restarts": self.restarts,
            "seed": self.seed,
            "max_evals": self.max_evals,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SolverConfig":
        return cls(**{k: obj[k] for k in ("delta", "max_iter", "tol", "restarts", "seed", "max_evals") if k in obj})


@dataclass
class VarResult:
    """Outcome of a variational solve.

    ``value`` is the objective at the best feasible iterate after the
    analytic inner scaling, so it is always a certified lower bound on the
    program's optimum V; ``status`` says whether it can additionally be
    trusted as V itself (to solver tolerance).  ``kind`` records what V
    means for the divergence: exact (PSD cone), upper (PPT relaxation), or
    heuristic (inner separable parameterization).
    """

    value: ExtReal
    omega: HermitianOp
    objective: str          # "nu" | "eta"
    status: str             # "converged" | "budget"
    kind: str               # "exact" | "upper" | "heuristic"
    alpha: float
    iterations: int = 0
    certified_lower: float = 0.0
    sensitivity: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        v = self.value.value
        return {
            "value_nats": "inf" if math.isinf(v) else v,
            "objective": self.objective,
            "status": self.status,
            "kind": self.kind,
            "alpha": "inf" if math.isinf(self.alpha) else self.alpha,
            "iterations": self.iterations,
            "certified_lower": self.certified_lower,
            "sensitivity": self.sensitivity,
        }


def _check_alpha(alpha: float):
    if not (alpha > 0):
        raise DomainError(f"order alpha={alpha} outside (0, inf]")


def _diag_in_basis(m: np.ndarray, v: np.ndarray) -> np.ndarray:
    # diagonal of V^dag M V without forming the full product
    return np.einsum("ji,jk,ki->i", v.conj(), m, v).real


def _divided_diff(w: np.ndarray, fw: np.ndarray, dfw: np.ndarray) -> np.ndarray:
    """First divided-difference table of f on the spectrum w (Daleckii-Krein),
    with the derivative used on (numerically) coincident pairs."""
    num = np.subtract.outer(fw, fw)
    den = np.subtract.outer(w, w)
    close = np.abs(den) <= 1e-14 * max(float(np.max(w)), 1.0)
    table = np.where(close, 1.0, num) / np.where(close, 1.0, den)
    return np.where(close, 0.5 * np.add.outer(dfw, dfw), table)


def _power_pairs(w: np.ndarray, c: float) -> np.ndarray:
    return _divided_diff(w, w**c, c * w ** (c - 1.0))


def _log_pairs(w: np.ndarray) -> np.ndarray:
    return _divided_diff(w, np.log(w), 1.0 / w)


def _frechet_grad(a: np.ndarray, spec: Spectrum, table: np.ndarray) -> np.ndarray:
    """Gradient of omega -> tr[A f(omega)] at the given eigensystem."""
    v = spec.eigenvectors
    at = v.conj().T @ a @ v
    g = v @ (table * at) @ v.conj().T
    return 0.5 * (g + g.conj().T)


class _Geometry:
    """Projection onto (cone) intersect {omega >= delta*1}."""

    def __init__(self, cone: ConeSpec, dims, b_indices):
        self.cone = cone
        self.dims = dims
        self.b = b_indices

    def _clip_floor(self, arr: np.ndarray) -> tuple[np.ndarray, Spectrum]:
        spec = eig_herm(HermitianOp(arr, self.dims, self.b))
        w = np.maximum(spec.eigenvalues, self.cone.delta)
        v = spec.eigenvectors
        out = (v * w) @ v.conj().T
        out = 0.5 * (out + out.conj().T)
        return out, Spectrum(w, v)

    def project(self, arr: np.ndarray) -> tuple[np.ndarray, Spectrum | None]:
        """Returns (projected array, eigensystem if it came for free)."""
        # gradient iterates pick up rounding asymmetry step by step (the PPT
        # fast path below returns them untouched), so clean on entry
        arr = 0.5 * (arr + arr.conj().T)
        if self.cone.kind == "PSD":
            return self._clip_floor(arr)
        # PPT: Dykstra between the floored PSD set and the Gamma-positive set
        delta = self.cone.delta
        spec0 = eig_herm(HermitianOp(arr, self.dims, self.b))
        if spec0.eigenvalues[0] >= 0.5 * delta:
            g = _pt_array(arr, self.dims, self.b)
            if eig_herm(HermitianOp(g, self.dims, self.b)).eigenvalues[0] >= -self.cone.dykstra_tol:
                return arr, spec0
        cur = arr.copy()
        p = np.zeros_like(cur)
        q = np.zeros_like(cur)
        # gap threshold keeps the returned iterate strictly above delta/2 so
        # negative matrix powers downstream never hit a zero eigenvalue
        gap_tol = min(self.cone.dykstra_tol, 0.25 * delta)
        for _ in range(self.cone.dykstra_max_iter):
            y, _ = self._clip_floor(cur + p)
            p = cur + p - y
            g = y + q
            cur = _pt_array(_psd_array(_pt_array(g, self.dims, self.b), self.dims), self.dims, self.b)
            q = g - cur
            if float(np.max(np.abs(cur - y))) <= gap_tol:
                spec = eig_herm(HermitianOp(cur, self.dims, self.b))
                if spec.eigenvalues[0] >= 0.5 * delta:
                    return cur, spec
        raise SolverError(
            f"cone projection did not converge in {self.cone.dykstra_max_iter} iterations"
        )


class _Branch:
    """Objective/gradient bundle for one alpha regime, sharing eigensystems."""

    def __init__(self, rho: np.ndarray, sigma: np.ndarray, alpha: float):
        self.rho = rho
        self.sigma = sigma
        self.alpha = alpha
        a = alpha
        if math.isinf(a):
            self.mode = "inf"
        elif a == 1.0:
            self.mode = "one"
        elif a < 0.5:
            self.mode = "low"      # powered factor on the sigma side
            self.c = a / (a - 1.0)
        else:
            self.mode = "mid"      # powered factor on the rho side; covers a > 1 too
            self.c = (a - 1.0) / a
        self.minimize = a < 1.0

    # returns (value at the analytic inner scaling, t1, t2)
    def value(self, spec: Spectrum) -> tuple[float, float, float]:
        a, w, v = self.alpha, spec.eigenvalues, spec.eigenvectors
        dr = _diag_in_basis(self.rho, v)
        ds = _diag_in_basis(self.sigma, v)
        if self.mode == "inf":
            t1 = float(dr @ w)
            t2 = float(ds @ w)
            if t1 <= 0.0 or t2 <= 0.0:
                return -math.inf, t1, t2
            return math.log(t1 / t2), t1, t2
        if self.mode == "one":
            t2 = float(ds @ w)
            if t2 <= 0.0:
                return -math.inf, 0.0, t2
            val = float(dr @ np.log(w)) - math.log(t2)
            return val, 0.0, t2
        if self.mode == "low":
            t1 = float(dr @ w)
            t2 = float(ds @ (w**self.c))
        else:
            t1 = float(dr @ (w**self.c))
            t2 = float(ds @ w)
        if t1 <= 0.0 or t2 <= 0.0:
            # degenerate only when a state is orthogonal to the floored omega,
            # which the floor rules out; guard anyway
            return -math.inf, t1, t2
        val = (a * math.log(t1) + (1.0 - a) * math.log(t2)) / (a - 1.0)
        return val, t1, t2

    def value_gradient(self, spec: Spectrum) -> np.ndarray:
        """Gradient of the divergence-scale value at a rescaled iterate.

        The value is a sup in every branch, so this is always an ascent
        direction; for alpha < 1 the negative log prefactor flips the raw
        objective gradient.
        """
        a, w, v = self.alpha, spec.eigenvalues, spec.eigenvectors
        if self.mode == "inf":
            t1 = float(_diag_in_basis(self.rho, v) @ w)
            return self.rho / max(t1, 1e-300) - self.sigma
        if self.mode == "one":
            return _frechet_grad(self.rho, spec, _log_pairs(w)) - self.sigma
        table = _power_pairs(w, self.c)
        dr = _diag_in_basis(self.rho, v)
        ds = _diag_in_basis(self.sigma, v)
        if self.mode == "low":
            t1 = float(dr @ w)
            t2 = float(ds @ (w**self.c))
            raw = a * self.rho + (1.0 - a) * _frechet_grad(self.sigma, spec, table)
        else:
            t1 = float(dr @ (w**self.c))
            t2 = float(ds @ w)
            raw = a * _frechet_grad(self.rho, spec, table) + (1.0 - a) * self.sigma
        arg = a * t1 + (1.0 - a) * t2
        if arg <= 0.0 or not math.isfinite(arg):
            return raw / (a - 1.0)
        return raw / ((a - 1.0) * arg)

    def rescale(self, omega: np.ndarray, spec: Spectrum) -> tuple[np.ndarray, Spectrum]:
        """Apply the closed-form optimal radial scaling omega -> lam*omega."""
        a, w, v = self.alpha, spec.eigenvalues, spec.eigenvectors
        dr = _diag_in_basis(self.rho, v)
        ds = _diag_in_basis(self.sigma, v)
        if self.mode in ("inf", "one"):
            t2 = float(ds @ w)
            lam = 1.0 / t2 if t2 > 0 else 1.0
        elif self.mode == "low":
            t1 = float(dr @ w)
            t2 = float(ds @ (w**self.c))
            lam = (t1 / t2) ** (a - 1.0) if t1 > 0 and t2 > 0 else 1.0
        else:
            t1 = float(dr @ (w**self.c))
            t2 = float(ds @ w)
            lam = (t1 / t2) ** a if t1 > 0 and t2 > 0 else 1.0
        if not math.isfinite(lam) or lam <= 0:
            lam = 1.0
        return lam * omega, Spectrum(lam * w, v)


def objective(rho, sigma, omega, alpha: float, form: str = "nu") -> float:
    """Evaluate the variational objective at a strictly positive omega.

    form "nu": the affine-in-lambda lower-bound functional; form "eta": its
    value after the optimal radial scaling (scale invariant).  Requires
    omega > 0; a nonpositive eigenvalue raises DomainError.
    """
    _check_alpha(alpha)
    if form not in ("nu", "eta"):
        raise DomainError(f"unknown objective form {form!r}")
    r = as_op(rho).data if not isinstance(rho, np.ndarray) else rho
    s = as_op(sigma).data if not isinstance(sigma, np.ndarray) else sigma
    om = as_op(omega)
    spec = eig_herm(om)
    if spec.eigenvalues[0] <= 0.0:
        raise DomainError(
            f"objective needs omega > 0; smallest eigenvalue {spec.eigenvalues[0]:.3e}"
        )
    w, v = spec.eigenvalues, spec.eigenvectors
    a = alpha
    dr = _diag_in_basis(r, v)
    ds = _diag_in_basis(s, v)
    if math.isinf(a):
        t1 = float(dr @ w)
        t2 = float(ds @ w)
        if form == "eta":
            return math.log(t1 / t2)
        return math.log(t1) + 1.0 - t2
    if a == 1.0:
        tlog = float(dr @ np.log(w))
        t2 = float(ds @ w)
        if form == "eta":
            return tlog - math.log(t2)
        return tlog + 1.0 - t2
    if a < 0.5:
        t1 = float(dr @ w)
        t2 = float(ds @ (w ** (a / (a - 1.0))))
    else:
        t1 = float(dr @ (w ** ((a - 1.0) / a)))
        t2 = float(ds @ w)
    if form == "eta":
        return (a * math.log(t1) + (1.0 - a) * math.log(t2)) / (a - 1.0)
    arg = a * t1 + (1.0 - a) * t2
    if arg <= 0.0:
        return -math.inf
    return math.log(arg) / (a - 1.0)


def _run_gradient(rho, sigma, alpha, cone: ConeSpec, cfg: SolverConfig):
    rop, sop = as_op(rho), as_op(sigma)
    geo = _Geometry(cone, rop.dims, rop.b_indices)
    br = _Branch(rop.data, sop.data, alpha)
    omega = np.eye(rop.dim, dtype=np.complex128)
    spec = Spectrum(np.ones(rop.dim), np.eye(rop.dim, dtype=np.complex128))
    omega, spec = br.rescale(omega, spec)
    val, _, _ = br.value(spec)
    step = 1.0
    iters = 0
    for it in range(cfg.max_iter):
        iters = it + 1
        g = br.value_gradient(spec)
        accepted = False
        first_try = True
        for _ in range(MAX_HALVINGS):
            cand = omega + step * g
            cand, cspec = geo.project(cand)
            if cspec is None:
                cspec = eig_herm(HermitianOp(cand, rop.dims, rop.b_indices))
            cand, cspec = br.rescale(cand, cspec)
            cval, _, _ = br.value(cspec)
            # Armijo along the projected arc against the first-order model;
            # a pure step-relative test would let very large steps through
            # with negligible improvement and stall the ascent
            pred = float(np.vdot(cand - omega, g).real)
            if math.isfinite(cval) and pred > 0.0 and cval - val >= ARMIJO_C * pred:
                if first_try:
                    step *= 2.0
                accepted = True
                break
            step *= 0.5
            first_try = False
        if not accepted:
            return omega, spec, val, iters, "converged"
        rel = abs(cval - val) / max(1.0, abs(cval))
        omega, spec, val = cand, cspec, cval
        if rel <= cfg.tol:
            return omega, spec, val, iters, "converged"
    return omega, spec, val, iters, "budget"


def _sep_inner_search(rho, sigma, alpha, cone: ConeSpec, cfg: SolverConfig):
    # omega = sum_k g_k g_k^dag (x) h_k h_k^dag + delta*1, always separable
    from ._search import nm_maximize, restart_points

    rop, sop = as_op(rho), as_op(sigma)
    if len(rop.dims) != 2:
        raise DomainError("SEP_inner cone needs a two-party state (dims of length 2)")
    da, db = rop.dims
    k = cone.sep_terms
    pdim = 2 * k * (da + db)
    eye = np.eye(rop.dim, dtype=np.complex128)

    def build(x: np.ndarray) -> np.ndarray:
        om = cone.delta * eye
        off = 0
        for _ in range(k):
            ga = x[off : off + da] + 1j * x[off + da : off + 2 * da]
            off += 2 * da
            hb = x[off : off + db] + 1j * x[off + db : off + 2 * db]
            off += 2 * db
            om = om + np.kron(np.outer(ga, ga.conj()), np.outer(hb, hb.conj()))
        return om

    best = (-math.inf, None)

    # eta is scale free and a sup in every alpha branch, so maximize it
    def f(x):
        om = build(x)
        try:
            v = objective(rop, sop, HermitianOp(om, rop.dims, rop.b_indices), alpha, "eta")
        except (DomainError, SolverError):
            return -math.inf
        return v if not math.isnan(v) else -math.inf

    pts = restart_points(pdim, cfg.restarts, cfg.seed, scale=1.0)
    # seed the first restart with one product term |0><0| (x) |0><0|
    x0 = np.zeros(pdim)
    x0[0] = 1.0
    x0[2 * da] = 1.0
    pts[0] = x0
    for x in pts:
        v, xb = nm_maximize(f, x, cfg.max_evals)
        if v > best[0]:
            best = (v, xb)
    om = build(best[1]) if best[1] is not None else cone.delta * eye
    return HermitianOp(om, rop.dims, rop.b_indices), best[0]


def variational_bound(rho, sigma, alpha: float, cone: ConeSpec, cfg: SolverConfig | None = None) -> VarResult:
    """Optimize the scalar variational functional over the requested cone.

    PSD: exact value of the unrestricted measured divergence at every order.
    PPT: upper bound for the PPT (hence SEP, LOCC) measurement classes.
    SEP_inner: heuristic from a rank-one separable parameterization.

    The returned value applies the analytic radial scaling at the final
    iterate, so it is a valid lower bound on the program optimum regardless
    of status; status "converged" additionally certifies stationarity to
    the solver tolerance.  The sensitivity field reports the value at the
    floor delta and after a short re-polish at delta/10.
    """
    _check_alpha(alpha)
    cfg = cfg or SolverConfig()
    rop, sop = as_op(rho), as_op(sigma)
    if rop.dims != sop.dims or rop.b_indices != sop.b_indices:
        raise DomainError("rho and sigma must share the same factorization")
    if cone.kind == "SEP_inner":
        omega, v = _sep_inner_search(rho, sigma, alpha, cone, cfg)
        val = ExtReal(v)
        return VarResult(
            value=val, omega=omega, objective="eta", status="budget", kind="heuristic",
            alpha=alpha, iterations=cfg.restarts * cfg.max_evals,
            certified_lower=v if math.isfinite(v) else -math.inf,
            sensitivity={"delta": cone.delta, "value_at_delta": v},
        )

    omega, spec, val, iters, status = _run_gradient(rop, sop, alpha, cone, cfg)

    # sensitivity: re-polish from the solution with a ten times smaller floor
    cone10 = replace(cone, delta=cone.delta / 10.0)
    geo10 = _Geometry(cone10, rop.dims, rop.b_indices)
    br = _Branch(rop.data, sop.data, alpha)
    om10, spec10 = geo10.project(omega)
    if spec10 is None:
        spec10 = eig_herm(HermitianOp(om10, rop.dims, rop.b_indices))
    om10, spec10 = br.rescale(om10, spec10)
    v10, _, _ = br.value(spec10)
    polish_cfg = replace(cfg, max_iter=SENS_POLISH_ITERS)
    try:
        _, _, v10b, _, _ = _run_gradient(rop, sop, alpha, cone10, polish_cfg)
        v10 = max(v10, v10b)  # the value is a sup in every branch
    except SolverError:
        pass

    kind = "exact" if cone.kind == "PSD" else "upper"
    return VarResult(
        value=ExtReal(val),
        omega=HermitianOp(omega, rop.dims, rop.b_indices),
        objective="nu",
        status=status,
        kind=kind,
        alpha=alpha,
        iterations=iters,
        certified_lower=val,
        sensitivity={
            "delta": cone.delta,
            "value_at_delta": val,
            "delta_tenth": cone10.delta,
            "value_at_delta_tenth": v10,
        },
    )


def _local_basis_stats(rho_arr, da, db, ua, ub) -> np.ndarray:
    u = np.kron(ua, ub)
    rot = u.conj().T @ rho_arr @ u
    return np.real(np.diag(rot)).reshape(da, db)


def plo_exact(rho, sigma, alpha: float, mclass: str = "P-LO", cfg: SolverConfig | None = None) -> BoundResult:
    """Exact-form search over projective local measurement strategies.

    P-LO: one orthonormal product basis; the inner weighting that turns the
    statistics into the divergence is optimized in closed form, which is the
    classical Renyi divergence of the outcome distributions.  P-LOCC1: the
    second party's basis may depend on the first party's outcome.
    """
    _check_alpha(alpha)
    if mclass not in ("P-LO", "P-LOCC1"):
        raise DomainError(f"plo_exact handles P-LO and P-LOCC1, not {mclass!r}")
    cfg = cfg or SolverConfig()
    rop, sop = as_op(rho), as_op(sigma)
    if len(rop.dims) != 2:
        raise DomainError("plo_exact needs a two-party state (dims of length 2)")
    da, db = rop.dims
    from ._search import chart_dim, nm_maximize, restart_points, unitary_from_params

    na = chart_dim(da)
    nb = chart_dim(db)

    def stats_lo(x):
        ua = unitary_from_params(x[:na], da)
        ub = unitary_from_params(x[na:], db)
        mu = _local_basis_stats(rop.data, da, db, ua, ub).reshape(-1)
        nu_ = _local_basis_stats(sop.data, da, db, ua, ub).reshape(-1)
        return mu, nu_, (ua, ub)

    def stats_locc1(x):
        ua = unitary_from_params(x[:na], da)
        ubs = [unitary_from_params(x[na + i * nb : na + (i + 1) * nb], db) for i in range(da)]
        mu = np.empty((da, db))
        nu_ = np.empty((da, db))
        r3 = rop.data.reshape(da, db, da, db)
        s3 = sop.data.reshape(da, db, da, db)
        for i, ub in enumerate(ubs):
            vecs = ua[:, i]
            rb = np.einsum("a,abcd,c->bd", vecs.conj(), r3, vecs)
            sb = np.einsum("a,abcd,c->bd", vecs.conj(), s3, vecs)
            mu[i] = np.real(np.diag(ub.conj().T @ rb @ ub))
            nu_[i] = np.real(np.diag(ub.conj().T @ sb @ ub))
        return mu.reshape(-1), nu_.reshape(-1), (ua, ubs)

    stats = stats_lo if mclass == "P-LO" else stats_locc1
    pdim = na + nb if mclass == "P-LO" else na + da * nb

    def f(x):
        mu, nu_, _ = stats(x)
        m = {i: max(float(p), 0.0) for i, p in enumerate(mu)}
        n = {i: max(float(p), 0.0) for i, p in enumerate(nu_)}
        return renyi(FiniteMeasure(m), FiniteMeasure(n), alpha).value

    best_v = -math.inf
    best_x = None
    for x0 in restart_points(pdim, cfg.restarts, cfg.seed):
        v, xb = nm_maximize(f, x0, cfg.max_evals)
        if v > best_v:
            best_v, best_x = v, xb

    extra: dict = {"class": mclass, "restarts": cfg.restarts}
    if best_x is not None:
        _, _, parts = stats(best_x)
        if mclass == "P-LO":
            ua, ub = parts
            pa = Povm([HermitianOp(np.outer(ua[:, i], ua[:, i].conj())) for i in range(da)],
                      class_tag="ALL", construction={"form": "basis"}, validate=False)
            pb = Povm([HermitianOp(np.outer(ub[:, j], ub[:, j].conj())) for j in range(db)],
                      class_tag="ALL", construction={"form": "basis"}, validate=False)
            pov = product_povm(pa, pb)
            pov.class_tag = "P-LO"
        else:
            ua, ubs = parts
            pa = Povm([HermitianOp(np.outer(ua[:, i], ua[:, i].conj())) for i in range(da)],
                      class_tag="ALL", construction={"form": "basis"}, validate=False)
            pbs = [
                Povm([HermitianOp(np.outer(ub[:, j], ub[:, j].conj())) for j in range(db)],
                     class_tag="ALL", construction={"form": "basis"}, validate=False)
                for ub in ubs
            ]
            pov = conditional_povm(pa, pbs)
            pov.class_tag = "P-LOCC1"
        extra["povm"] = pov
    return BoundResult(
        value_nats=ExtReal(best_v),
        kind="lower",
        alpha=alpha,
        mclass=mclass,
        status="budget",
        iterations=cfg.restarts * cfg.max_evals,
        extra=extra,
    )



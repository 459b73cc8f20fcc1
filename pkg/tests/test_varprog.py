import math

import numpy as np
import pytest

from conftest import rand_density, rand_unitary
from mrdiv.classical import FiniteMeasure, renyi
from mrdiv.errors import DomainError, ValidationError
from mrdiv.linops import DensityOp, HermitianOp
from mrdiv.povm import born, isotropic_binary_measurement
from mrdiv.states import isotropic, max_entangled, phi_perp
from mrdiv.varprog import ConeSpec, SolverConfig, objective, plo_exact, variational_bound

ALPHAS = (0.25, 0.5, 1.0, 2.0, math.inf)


def commuting_pair(rng, d=4):
    u = rand_unitary(rng, d)
    pw = rng.random(d) + 0.05
    qw = rng.random(d) + 0.05
    pw, qw = pw / pw.sum(), qw / qw.sum()
    rho = DensityOp((u * pw) @ u.conj().T, (2, 2), (1,), validate=False)
    sig = DensityOp((u * qw) @ u.conj().T, (2, 2), (1,), validate=False)
    return rho, sig, pw, qw


def classical_value(pw, qw, alpha) -> float:
    return float(renyi(FiniteMeasure(dict(enumerate(pw))),
                       FiniteMeasure(dict(enumerate(qw))), alpha))


def test_objective_forms_and_scaling():
    rng = np.random.default_rng(2)
    rho = rand_density(rng, (2, 2), floor=0.05)
    sig = rand_density(rng, (2, 2), floor=0.05)
    om = HermitianOp(np.eye(4) * 0.7 + 0.1 * np.diag([1, 2, 3, 4]), (2, 2), (1,))
    for alpha in ALPHAS:
        nu = objective(rho, sig, om, alpha, form="nu")
        eta = objective(rho, sig, om, alpha, form="eta")
        # eta is nu after the optimal radial rescaling
        assert eta >= nu - 1e-12
        for c in (1e-3, 7.0, 1e3):
            om_c = HermitianOp(c * om.data, (2, 2), (1,))
            assert abs(objective(rho, sig, om_c, alpha, form="eta") - eta) < 1e-9
    # identity omega evaluates the nu form to a known closed expression
    eye = HermitianOp(np.eye(4), (2, 2), (1,))
    assert abs(objective(rho, sig, eye, 2.0, form="nu")) < 1e-12


def test_objective_rejects_bad_inputs():
    rho = isotropic(2, 0.5)
    sig = isotropic(2, 0.3)
    sing = HermitianOp(np.diag([1.0, 1.0, 1.0, 0.0]), (2, 2), (1,))
    with pytest.raises(DomainError):
        objective(rho, sig, sing, 2.0)
    eye = HermitianOp(np.eye(4), (2, 2), (1,))
    with pytest.raises(DomainError):
        objective(rho, sig, eye, 0.0)
    with pytest.raises(DomainError):
        objective(rho, sig, eye, 2.0, form="mu")


def test_cone_spec_validation():
    with pytest.raises(ValidationError):
        ConeSpec("NPT")
    with pytest.raises(ValidationError):
        ConeSpec("PSD", delta=1e-2)
    with pytest.raises(ValidationError):
        ConeSpec("PSD", delta=1e-12)
    with pytest.raises(ValidationError):
        ConeSpec("SEP_inner")
    ConeSpec("SEP_inner", sep_terms=4)


def test_psd_exact_on_commuting_pairs():
    # for commuting states the unrestricted value is the classical divergence
    # of the joint eigenvalue lists
    cfg = SolverConfig(tol=1e-12)
    for seed in range(4):
        rho, sig, pw, qw = commuting_pair(np.random.default_rng(100 + seed))
        for alpha in (0.25, 0.5, 1.0, 2.0):
            res = variational_bound(rho, sig, alpha, ConeSpec("PSD"), cfg)
            assert res.kind == "exact"
            assert abs(float(res.value) - classical_value(pw, qw, alpha)) < 1e-6


def test_budget_status_is_still_a_lower_bound():
    # a skewed pair that stalls the first-order solver at the default budget
    # must report status "budget" with a value that never overshoots
    rng = np.random.default_rng(100)
    u = rand_unitary(rng, 4)
    pw = rng.dirichlet(np.ones(4)) * 0.9 + 0.025
    qw = rng.dirichlet(np.ones(4)) * 0.9 + 0.025
    rho = DensityOp((u * pw) @ u.conj().T, (2, 2), (1,), validate=False)
    sig = DensityOp((u * qw) @ u.conj().T, (2, 2), (1,), validate=False)
    ref = classical_value(pw, qw, 2.0)
    res = variational_bound(rho, sig, 2.0, ConeSpec("PSD"), SolverConfig(tol=1e-12))
    assert float(res.value) <= ref + 1e-9
    assert res.certified_lower <= ref + 1e-9
    if abs(float(res.value) - ref) > 1e-6:
        assert res.status == "budget"


def test_weak_duality_against_explicit_ppt_test():
    # any PPT measurement's statistics are dominated by the PPT program value
    pov = isotropic_binary_measurement(2)
    rng = np.random.default_rng(23)
    for seed in range(6):
        rho = rand_density(np.random.default_rng(300 + seed), (2, 2), floor=0.02)
        sig = rand_density(np.random.default_rng(600 + seed), (2, 2), floor=0.02)
        alpha = (0.5, 1.0, 2.0)[seed % 3]
        measured = float(renyi(born(rho, pov), born(sig, pov), alpha))
        res = variational_bound(rho, sig, alpha, ConeSpec("PPT"))
        assert float(res.value) >= measured - 1e-7
    del rng


def test_cone_ordering():
    # the PPT cone is contained in PSD, so its supremum cannot exceed it
    rho, sig = max_entangled(2), phi_perp(2)
    for alpha in (0.5, 2.0, math.inf):
        v_psd = float(variational_bound(rho, sig, alpha, ConeSpec("PSD")).value)
        v_ppt = float(variational_bound(rho, sig, alpha, ConeSpec("PPT")).value)
        assert v_ppt <= v_psd + 1e-7


def test_result_kinds_and_sensitivity():
    rho, sig = isotropic(2, 0.8), isotropic(2, 0.3)
    res = variational_bound(rho, sig, 2.0, ConeSpec("PSD"))
    assert res.kind == "exact" and res.objective == "nu"
    for key in ("delta", "value_at_delta", "delta_tenth", "value_at_delta_tenth"):
        assert key in res.sensitivity
    assert res.sensitivity["delta_tenth"] == pytest.approx(res.sensitivity["delta"] / 10.0)
    up = variational_bound(rho, sig, 2.0, ConeSpec("PPT"))
    assert up.kind == "upper"
    inner = variational_bound(rho, sig, 2.0, ConeSpec("SEP_inner", sep_terms=3),
                              SolverConfig(restarts=2, max_evals=80))
    assert inner.kind == "heuristic" and inner.objective == "eta"
    assert float(inner.value) <= float(res.value) + 1e-6
    j = res.to_json()
    assert j["kind"] == "exact" and isinstance(j["value_nats"], float)


def test_cone_delta_takes_precedence_over_config():
    rho, sig = isotropic(2, 0.8), isotropic(2, 0.3)
    cone = ConeSpec("PSD", delta=1e-5)
    a = variational_bound(rho, sig, 2.0, cone, SolverConfig(delta=1e-10))
    b = variational_bound(rho, sig, 2.0, cone, SolverConfig(delta=1e-4))
    assert float(a.value) == pytest.approx(float(b.value), abs=1e-12)
    assert a.sensitivity["delta"] == 1e-5


def test_variational_bound_input_gates():
    rho, sig = isotropic(2, 0.8), isotropic(2, 0.3)
    with pytest.raises(DomainError):
        variational_bound(rho, sig, -1.0, ConeSpec("PSD"))
    other = rand_density(np.random.default_rng(0), (3, 3))
    with pytest.raises(DomainError):
        variational_bound(rho, other, 2.0, ConeSpec("PSD"))


def test_plo_exact_on_twirled_family():
    # on isotropic pairs the projective local basis already attains the
    # measured value shared by every class up to PPT
    from mrdiv.closedform import iso_measured

    cfg = SolverConfig(restarts=2, max_evals=150)
    for alpha in (0.5, 2.0):
        res = plo_exact(max_entangled(2), isotropic(2, 0.25), alpha, "P-LO", cfg)
        assert res.extra["class"] == "P-LO"
        assert res.extra["povm"].class_tag == "P-LO"
        assert abs(float(res.value_nats) - float(iso_measured(2, 1.0, 0.25, alpha))) < 1e-6


def test_plo_hierarchy_and_gates():
    rng = np.random.default_rng(9)
    rho = rand_density(rng, (2, 2), floor=0.05)
    sig = rand_density(rng, (2, 2), floor=0.05)
    cfg = SolverConfig(restarts=2, max_evals=150)
    lo = plo_exact(rho, sig, 2.0, "P-LO", cfg)
    locc = plo_exact(rho, sig, 2.0, "P-LOCC1", cfg)
    assert locc.extra["povm"].class_tag == "P-LOCC1"
    assert float(locc.value_nats) >= float(lo.value_nats) - 1e-6
    v_all = float(variational_bound(rho, sig, 2.0, ConeSpec("PSD")).value)
    assert float(locc.value_nats) <= v_all + 1e-7
    with pytest.raises(DomainError):
        plo_exact(rho, sig, 2.0, "LO")
    with pytest.raises(DomainError):
        plo_exact(rand_density(rng, (4,), b=()), sig, 2.0)

import numpy as np
import pytest

from conftest import rand_density, rand_unitary
from mrdiv.errors import DomainError, StructuralError, ValidationError
from mrdiv.linops import HermitianOp
from mrdiv.povm import (
    Povm,
    binary_from_operator,
    born,
    class_check,
    class_leq,
    conditional_povm,
    isotropic_binary_measurement,
    local_basis_measurement,
    povm_tensor_power,
    product_povm,
)
from mrdiv.states import isotropic, max_entangled


def basis_povm(u: np.ndarray, dims, b, tag="ALL") -> Povm:
    els = [HermitianOp(np.outer(u[:, k], u[:, k].conj()), dims, b) for k in range(u.shape[1])]
    return Povm(els, class_tag=tag, validate=False)


def completeness_residual(p: Povm) -> float:
    total = sum(e.data for e in p.elements)
    return float(np.max(np.abs(total - np.eye(p.dim))))


def test_class_order_chain():
    chain = ("P-LO", "LO", "LOCC1", "SEP", "PPT", "ALL")
    for i, a in enumerate(chain):
        for j, b in enumerate(chain):
            assert class_leq(a, b) == (i <= j)
    assert class_leq("P-LO", "P-LOCC1")
    assert class_leq("P-LOCC1", "LOCC1")
    assert not class_leq("LO", "P-LOCC1")  # LO outcomes need not be projective
    with pytest.raises(DomainError):
        class_leq("LO", "GLOBAL")


def test_povm_validation():
    d = 2
    eye = np.eye(d * d)
    with pytest.raises(ValidationError):
        Povm([HermitianOp(0.5 * eye, (d, d), (1,))])  # does not sum to identity
    bad = [HermitianOp(1.5 * eye, (d, d), (1,)), HermitianOp(-0.5 * eye, (d, d), (1,))]
    with pytest.raises(ValidationError):
        Povm(bad)  # completes but one element is negative
    with pytest.raises(DomainError):
        Povm([HermitianOp(eye, (d, d), (1,))], class_tag="GLOBAL")
    with pytest.raises(StructuralError):
        Povm([HermitianOp(eye, (d, d), (1,))], labels=["a", "b"])


def test_born_rule_oracle():
    rng = np.random.default_rng(5)
    rho = rand_density(rng, (2, 2))
    u = rand_unitary(rng, 4)
    pov = basis_povm(u, (2, 2), (1,))
    mu = born(rho, pov)
    for k in range(4):
        v = u[:, k]
        expect = float((v.conj() @ rho.data @ v).real)
        assert abs(mu.weights[k] - expect) < 1e-12
    assert abs(mu.total - 1.0) < 1e-10
    with pytest.raises(StructuralError):
        born(rand_density(rng, (3, 3)), pov)


def test_local_basis_measurement():
    for d in (2, 3):
        pov = local_basis_measurement(d)
        assert len(pov) == d * d
        assert pov.class_tag == "P-LO"
        assert completeness_residual(pov) < 1e-12
        assert pov.is_projective()
        assert class_check(pov, "LO")
        assert class_check(pov, "PPT")
    with pytest.raises(DomainError):
        local_basis_measurement(1)


def test_product_and_conditional_construction():
    rng = np.random.default_rng(11)
    ua, ub = rand_unitary(rng, 2), rand_unitary(rng, 2)
    pa = basis_povm(ua, (2,), ())
    pb = basis_povm(ub, (2,), ())
    prod = product_povm(pa, pb)
    assert prod.class_tag == "LO"
    assert prod.dims == (2, 2) and prod.b_indices == (1,)
    assert completeness_residual(prod) < 1e-12
    assert prod.labels[0] == (0, 0)
    assert np.allclose(prod.elements[1].data,
                       np.kron(pa.elements[0].data, pb.elements[1].data), atol=1e-14)
    assert class_check(prod, "SEP")
    assert class_check(prod, "P-LO")  # rank-1 basis elements are projective

    pb2 = basis_povm(rand_unitary(rng, 2), (2,), ())
    cond = conditional_povm(pa, [pb, pb2])
    assert cond.class_tag == "LOCC1"
    assert completeness_residual(cond) < 1e-12
    assert class_check(cond, "LOCC1") and class_check(cond, "SEP")
    # a genuinely conditional strategy is not certified as one-shot local
    assert not class_check(cond, "LO")
    with pytest.raises(StructuralError):
        conditional_povm(pa, [pb])


def test_binary_from_operator():
    d = 2
    phi = max_entangled(d)
    pov = binary_from_operator(phi)
    assert len(pov) == 2
    assert pov.labels == ["yes", "no"]
    assert completeness_residual(pov) < 1e-12
    # the maximally entangled projector has a negative partial transpose
    assert pov.class_tag == "ALL"
    chk = class_check(pov, "PPT")
    assert not chk and "partial transpose" in chk.reason
    with pytest.raises(DomainError):
        binary_from_operator(HermitianOp(2.0 * np.eye(4), (2, 2), (1,)))
    with pytest.raises(DomainError):
        binary_from_operator(HermitianOp(-0.1 * np.eye(4), (2, 2), (1,)))


def test_isotropic_binary_statistics():
    for d in (2, 3):
        pov = isotropic_binary_measurement(d)
        assert pov.class_tag == "PPT"
        assert class_check(pov, "PPT")
        assert completeness_residual(pov) < 1e-12
        for p in (0.0, 0.3, 1.0):
            mu = born(isotropic(d, p), pov)
            assert abs(mu.weights["in"] - (p * d + 1.0) / (d + 1.0)) < 1e-12
            assert abs(mu.weights["out"] - d * (1.0 - p) / (d + 1.0)) < 1e-12


def test_povm_tensor_power():
    pov = isotropic_binary_measurement(2)
    p2 = povm_tensor_power(pov, 2)
    assert len(p2) == 4
    assert p2.class_tag == "PPT"
    assert completeness_residual(p2) < 1e-12
    assert ("in", "out") in p2.labels
    rho = isotropic(2, 0.3)
    mu1 = born(rho, pov)
    from mrdiv.states import tensor_power

    mu2 = born(tensor_power(rho, 2), p2)
    for a in ("in", "out"):
        for b in ("in", "out"):
            assert abs(mu2.weights[(a, b)] - mu1.weights[a] * mu1.weights[b]) < 1e-12
    assert povm_tensor_power(pov, 1) is pov
    with pytest.raises(DomainError):
        povm_tensor_power(pov, 0)


def test_class_check_records():
    # ALL accepts anything
    rng = np.random.default_rng(3)
    pov = basis_povm(rand_unitary(rng, 4), (2, 2), (1,))
    assert class_check(pov, "ALL")
    # no construction record: SEP is undecidable, LO not certified
    sep = class_check(pov, "SEP")
    assert not sep and "undecidable" in sep.reason
    assert not class_check(pov, "LO")
    with pytest.raises(DomainError):
        class_check(pov, "GLOBAL")
    # projective requirement on the P- classes
    noisy = product_povm(
        Povm([HermitianOp(np.eye(2) * 0.5, (2,), ()), HermitianOp(np.eye(2) * 0.5, (2,), ())]),
        basis_povm(np.eye(2), (2,), ()),
    )
    assert class_check(noisy, "LO")
    chk = class_check(noisy, "P-LO")
    assert not chk and "projector" in chk.reason


def test_coarse_grain_keeps_class_and_completeness():
    pov = local_basis_measurement(2)
    merged = pov.coarse_grain(lambda lab: lab[0] == lab[1])
    assert len(merged) == 2
    assert merged.class_tag == "P-LO"
    assert completeness_residual(merged) < 1e-12
    mu = born(max_entangled(2), merged)
    assert abs(mu.weights[True] - 1.0) < 1e-12


def test_povm_json_round_trip():
    pov = isotropic_binary_measurement(2)
    again = Povm.from_json(pov.to_json())
    assert again.class_tag == "PPT"
    for e, f in zip(pov.elements, again.elements):
        assert np.allclose(e.data, f.data, atol=1e-12)

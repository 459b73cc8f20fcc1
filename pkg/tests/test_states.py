import numpy as np
import pytest

from conftest import rand_density, rand_herm
from mrdiv.errors import DomainError, ResourceError, StructuralError
from mrdiv.linops import HermitianOp, partial_transpose, trace_product
from mrdiv.states import (
    antisymmetric_state,
    full_support_mix,
    isotropic,
    make_state,
    max_entangled,
    phi_perp,
    regroup_bipartite,
    symmetric_state,
    tensor_power,
    twirl,
    werner,
)


def eigs(op) -> np.ndarray:
    return np.linalg.eigvalsh(op.data)


def multiset_close(w, expected_pairs, atol=1e-12):
    """expected_pairs: [(value, multiplicity), ...] covering all eigenvalues."""
    w = np.sort(np.asarray(w))
    ref = np.sort(np.concatenate([[v] * m for v, m in expected_pairs]))
    assert w.size == ref.size
    assert np.allclose(w, ref, atol=atol)


def test_max_entangled_structure():
    for d in (2, 3, 4):
        phi = max_entangled(d)
        assert abs(np.trace(phi.data) - 1.0) < 1e-12
        w = eigs(phi)
        multiset_close(w, [(0.0, d * d - 1), (1.0, 1)])
        vec = np.zeros(d * d, dtype=complex)
        for i in range(d):
            vec[i * d + i] = 1.0 / np.sqrt(d)
        assert np.allclose(phi.data, np.outer(vec, vec.conj()), atol=1e-12)


def test_phi_perp_is_the_orthogonal_mixture():
    for d in (2, 3):
        phi, perp = max_entangled(d), phi_perp(d)
        assert abs(trace_product(phi, perp)) < 1e-12
        multiset_close(eigs(perp), [(0.0, 1), (1.0 / (d * d - 1), d * d - 1)])


def test_symmetric_antisymmetric_states():
    for d in (2, 3):
        sym = symmetric_state(d)
        anti = antisymmetric_state(d)
        ds, da = d * (d + 1) // 2, d * (d - 1) // 2
        multiset_close(eigs(sym), [(1.0 / ds, ds), (0.0, da)])
        multiset_close(eigs(anti), [(1.0 / da, da), (0.0, ds)])
        assert abs(trace_product(sym, anti)) < 1e-12
        # swap acts as +1 on the symmetric state and -1 on the antisymmetric
        f = np.zeros((d * d, d * d))
        for i in range(d):
            for j in range(d):
                f[i * d + j, j * d + i] = 1.0
        assert np.allclose(f @ sym.data, sym.data, atol=1e-12)
        assert np.allclose(f @ anti.data, -anti.data, atol=1e-12)


def test_isotropic_spectrum_and_pt():
    for d in (2, 3):
        for p in (0.0, 0.3, 1.0 / d, 0.9, 1.0):
            rho = isotropic(d, p)
            rest = (1.0 - p) / (d * d - 1)
            multiset_close(eigs(rho), [(p, 1), (rest, d * d - 1)])
            pt = partial_transpose(rho)
            ap = (p * d + 1.0) / (d * (d + 1.0))
            am = (1.0 - p * d) / (d * (d - 1.0))
            multiset_close(eigs(pt), [(ap, d * (d + 1) // 2), (am, d * (d - 1) // 2)])


def test_werner_spectrum_and_pt():
    for d in (2, 3):
        for p in (0.0, 0.4, 0.5, 1.0):
            w = werner(d, p)
            ds, da = d * (d + 1) // 2, d * (d - 1) // 2
            multiset_close(eigs(w), [(p / ds, ds), ((1.0 - p) / da, da)])
            pt = partial_transpose(w)
            on_phi = (2.0 * p - 1.0) / d
            rest = (d + 1.0 - 2.0 * p) / (d * (d * d - 1.0))
            multiset_close(eigs(pt), [(on_phi, 1), (rest, d * d - 1)])


def test_parameter_domains():
    with pytest.raises(DomainError):
        isotropic(2, -0.1)
    with pytest.raises(DomainError):
        isotropic(2, 1.1)
    with pytest.raises(DomainError):
        werner(2, 2.0)
    with pytest.raises(DomainError):
        isotropic(1, 0.5)


def test_make_state_dispatch():
    assert np.allclose(make_state("phi", 2).data, max_entangled(2).data)
    assert np.allclose(make_state("iso", 2, p=0.3).data, isotropic(2, 0.3).data)
    assert np.allclose(make_state("werner", 3, p=0.7).data, werner(3, 0.7).data)
    with pytest.raises(DomainError):
        make_state("nope", 2)
    with pytest.raises(DomainError):
        make_state("iso", None, p=0.3)


def test_full_support_mix():
    rho = max_entangled(2)
    sm = full_support_mix(rho, 0.1)
    assert np.linalg.eigvalsh(sm.data)[0] >= 0.1 / 4 - 1e-12
    assert abs(np.trace(sm.data) - 1.0) < 1e-12
    with pytest.raises(DomainError):
        full_support_mix(rho, 0.0)


def test_twirl_projects_and_preserves_invariants():
    rng = np.random.default_rng(31)
    for d in (2, 3):
        x = HermitianOp(rand_herm(rng, d * d), (d, d), (1,))
        for kind in ("isotropic", "werner"):
            t = twirl(x, kind)
            assert abs(np.trace(t.data) - np.trace(x.data)) < 1e-10
            again = twirl(t, kind)
            assert np.allclose(again.data, t.data, atol=1e-10)
        phi = max_entangled(d)
        t_iso = twirl(x, "isotropic")
        assert abs(trace_product(phi, t_iso) - trace_product(phi, x)) < 1e-10
        sym = symmetric_state(d)
        t_w = twirl(x, "werner")
        # the werner commutant preserves the symmetric-subspace weight
        ps = sym.data * (d * (d + 1) / 2)
        assert abs(np.trace(ps @ t_w.data).real - np.trace(ps @ x.data).real) < 1e-10
    # twirling an isotropic state is the identity on the family
    rho = isotropic(2, 0.77)
    assert np.allclose(twirl(rho, "isotropic").data, rho.data, atol=1e-12)


def test_tensor_power_structure():
    rho = isotropic(2, 0.6)
    r2 = tensor_power(rho, 2)
    assert r2.dims == (2, 2, 2, 2)
    assert r2.b_indices == (1, 3)
    assert np.allclose(r2.data, np.kron(rho.data, rho.data), atol=1e-14)
    with pytest.raises(DomainError):
        tensor_power(rho, 0)
    with pytest.raises(ResourceError):
        tensor_power(rand_density(np.random.default_rng(0), (8, 8)), 3)


def test_regroup_bipartite_permutation_oracle():
    rng = np.random.default_rng(41)
    rho = rand_density(rng, (2, 2))
    r2 = tensor_power(rho, 2)
    rg = regroup_bipartite(r2)
    assert rg.dims == (4, 4)
    assert rg.b_indices == (1,)
    # manual A1 A2 B1 B2 ordering from A1 B1 A2 B2
    t = r2.data.reshape(2, 2, 2, 2, 2, 2, 2, 2)
    man = t.transpose(0, 2, 1, 3, 4, 6, 5, 7).reshape(16, 16)
    assert np.allclose(rg.data, man, atol=1e-14)
    assert np.allclose(np.sort(np.linalg.eigvalsh(rg.data)),
                       np.sort(np.linalg.eigvalsh(r2.data)), atol=1e-12)


def test_regroup_requires_pair_structure():
    rho = isotropic(2, 0.5)
    rg = regroup_bipartite(rho)
    assert rg.dims == (2, 2)
    with pytest.raises(StructuralError):
        regroup_bipartite(rand_density(np.random.default_rng(1), (4,), b=()))

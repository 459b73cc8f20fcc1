import math

import numpy as np
import pytest

from mrdiv.classical import INF, ExtReal, FiniteMeasure, ZERO_FLOOR, renyi
from mrdiv.errors import DomainError, ValidationError


def fm(vec) -> FiniteMeasure:
    return FiniteMeasure({i: float(x) for i, x in enumerate(vec)})


def renyi_oracle(mu: np.ndarray, nu: np.ndarray, alpha: float) -> float:
    """Independent reference for normalized distributions with the same
    absolute mass floor the package documents."""
    mu = np.where(mu > ZERO_FLOOR, mu, 0.0)
    nu = np.where(nu > ZERO_FLOOR, nu, 0.0)
    if math.isinf(alpha):
        if np.any((mu > 0) & (nu == 0)):
            return math.inf
        r = mu[mu > 0] / nu[mu > 0]
        return float(np.log(np.max(r))) if r.size else 0.0
    if alpha == 1.0:
        if np.any((mu > 0) & (nu == 0)):
            return math.inf
        m = mu[mu > 0]
        return float(np.sum(m * np.log(m / nu[mu > 0])))
    if alpha > 1.0 and np.any((mu > 0) & (nu == 0)):
        return math.inf
    mask = (mu > 0) & (nu > 0)
    q = float(np.sum(mu[mask] ** alpha * nu[mask] ** (1.0 - alpha)))
    if q == 0.0:
        return math.inf
    return math.log(q) / (alpha - 1.0)


def test_extreal_basics():
    x = ExtReal(0.25)
    assert float(x) == 0.25 and not x.is_inf
    assert INF.is_inf and math.isinf(float(INF))


def test_measure_validation_and_support():
    with pytest.raises(ValidationError):
        FiniteMeasure({0: -0.1})
    m = fm([0.5, 0.5, 1e-16])
    assert m.support() == {0, 1}
    assert abs(m.total - (1.0 + 1e-16)) < 1e-12


def test_renyi_matches_oracle_on_random_pairs():
    rng = np.random.default_rng(4)
    alphas = (0.3, 0.5, 0.9, 1.0, 1.5, 2.0, 5.0, math.inf)
    for k in range(40):
        mu = rng.random(7)
        nu = rng.random(7)
        if k % 3 == 0:
            nu[k % 7] = 0.0
        if k % 5 == 0:
            mu[(k + 2) % 7] = 0.0
        mu, nu = mu / mu.sum(), nu / nu.sum()
        for a in alphas:
            ref = renyi_oracle(mu, nu, a)
            got = renyi(fm(mu), fm(nu), a)
            if math.isinf(ref):
                assert got.is_inf, (k, a)
            else:
                assert abs(float(got) - ref) < 1e-12, (k, a)


def test_known_values():
    # deterministic vs fair coin at order 2: Q = 1/0.5 -> log 2
    assert abs(float(renyi(fm([1, 0]), fm([0.5, 0.5]), 2.0)) - math.log(2)) < 1e-15
    assert abs(float(renyi(fm([1, 0]), fm([0.5, 0.5]), math.inf)) - math.log(2)) < 1e-15
    kl = 0.5 * math.log(0.5 / 0.25) + 0.5 * math.log(0.5 / 0.75)
    assert abs(float(renyi(fm([0.5, 0.5]), fm([0.25, 0.75]), 1.0)) - kl) < 1e-15
    assert float(renyi(fm([0.3, 0.7]), fm([0.3, 0.7]), 0.7)) == pytest.approx(0.0, abs=1e-14)


def test_edge_semantics():
    # mutually singular: infinite at every order
    for a in (0.3, 0.5, 1.0, 2.0, math.inf):
        assert renyi(fm([1, 0]), fm([0, 1]), a).is_inf
    # partial overlap: finite below order 1, infinite at and above it
    mu, nu = fm([0.5, 0.5, 0.0]), fm([0.0, 0.5, 0.5])
    assert not renyi(mu, nu, 0.5).is_inf
    assert renyi(mu, nu, 1.0).is_inf
    assert renyi(mu, nu, 2.0).is_inf
    assert renyi(mu, nu, math.inf).is_inf
    # weights at the floor count as zero
    mu2 = fm([1.0 - 1e-16, 1e-16])
    assert not renyi(mu2, fm([1.0, 0.0]), 2.0).is_inf


def test_label_alphabets_must_match():
    mu = FiniteMeasure({"a": 1.0, "b": 0.0})
    nu = FiniteMeasure({"a": 0.5, "b": 0.5})
    assert abs(float(renyi(mu, nu, 2.0)) - math.log(2)) < 1e-15
    assert renyi(nu, mu, 2.0).is_inf
    from mrdiv.errors import StructuralError
    with pytest.raises(StructuralError):
        renyi(FiniteMeasure({"a": 1.0}), nu, 2.0)


def test_order_domain():
    with pytest.raises(DomainError):
        renyi(fm([1]), fm([1]), 0.0)
    with pytest.raises(DomainError):
        renyi(fm([1]), fm([1]), -1.0)


def test_monotone_in_order():
    rng = np.random.default_rng(8)
    alphas = (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 4.0, math.inf)
    for _ in range(15):
        mu = rng.random(6)
        nu = rng.random(6)
        mu, nu = mu / mu.sum(), nu / nu.sum()
        vals = [float(renyi(fm(mu), fm(nu), a)) for a in alphas]
        assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))


def test_data_processing_by_coarse_graining():
    rng = np.random.default_rng(12)
    for _ in range(15):
        mu = rng.random(6)
        nu = rng.random(6)
        mu, nu = mu / mu.sum(), nu / nu.sum()
        merge = lambda z: z % 3
        m2 = fm(mu).coarse_grain(merge)
        n2 = fm(nu).coarse_grain(merge)
        for a in (0.5, 1.0, 2.0, math.inf):
            assert float(renyi(m2, n2, a)) <= float(renyi(fm(mu), fm(nu), a)) + 1e-10


def test_pinsker():
    rng = np.random.default_rng(19)
    for _ in range(20):
        mu = rng.random(5)
        nu = rng.random(5) + 0.01
        mu, nu = mu / mu.sum(), nu / nu.sum()
        kl = float(renyi(fm(mu), fm(nu), 1.0))
        tv = 0.5 * float(np.abs(mu - nu).sum())
        assert kl + 1e-12 >= 2.0 * tv * tv

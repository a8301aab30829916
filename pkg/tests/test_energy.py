import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import energynet as en
from energynet.energy import full_gram, ground, zero_vector
from energynet.errors import NetworkMismatch, OriginInF, UnknownVertex

from conftest import random_energy_vector, random_network, x_vertices


def test_constants_have_zero_energy(p3):
    assert ground(p3, np.ones(3)).energy == 0.0


def test_energy_hand_value(p3):
    u = ground(p3, np.array([0.0, 1.0, 2.0]))
    assert u.energy == pytest.approx(2.0)


def test_dirac_energy_is_conductance(test_net):
    for x in test_net.vertices:
        d = en.delta(test_net, x)
        if x == test_net.origin:
            # grounding shifts the representative but not the energy
            assert d.energy == pytest.approx(en.total_conductance(test_net, x))
        else:
            assert d.energy == pytest.approx(en.total_conductance(test_net, x))


def test_energy_form_conjugate_symmetric(test_net):
    rng = np.random.default_rng(1)
    u = random_energy_vector(test_net, rng, complex_=True)
    v = random_energy_vector(test_net, rng, complex_=True)
    assert en.energy_form(u, v) == pytest.approx(np.conj(en.energy_form(v, u)))


def test_energy_form_network_mismatch(p3):
    other = en.generate("path", 3)
    with pytest.raises(NetworkMismatch):
        en.energy_form(zero_vector(p3), zero_vector(other))


def test_energy_kernel_hand_values(p3):
    assert np.allclose(en.energy_kernel(p3, 1).values, [0, 1, 1])
    assert np.allclose(en.energy_kernel(p3, 2).values, [0, 1, 2])
    assert np.abs(en.energy_kernel(p3, 0).values).max() == 0.0


def test_energy_kernel_dipole_equation(test_net):
    for x in x_vertices(test_net):
        vx = en.energy_kernel(test_net, x)
        lap = en.laplacian_apply(test_net, vx.as_function()).values
        expected = np.zeros(test_net.n)
        expected[test_net.index(x)] = 1.0
        expected[test_net.origin_index] = -1.0
        assert np.abs(lap - expected).max() <= 1e-9


def test_energy_kernel_real_positive(test_net):
    for x in x_vertices(test_net):
        vx = en.energy_kernel(test_net, x)
        assert not np.iscomplexobj(vx.values)
        assert np.all(vx.values >= 0)
        assert vx[x] > 0


def test_effective_resistance(p3):
    assert en.effective_resistance(p3, 1) == pytest.approx(1.0)
    assert en.effective_resistance(p3, 2) == pytest.approx(2.0)
    seg = en.generate("integer_segment", 6)
    for k in range(1, 6):
        assert en.effective_resistance(seg, k) == pytest.approx(k)


def test_effective_resistance_consistency(test_net):
    for x in x_vertices(test_net):
        vx = en.energy_kernel(test_net, x)
        r = en.effective_resistance(test_net, x)
        assert abs(vx[x] - vx.energy) <= 1e-9 * r


def test_gram_matrix_hand_values(p3):
    gm = en.gram_matrix(p3, [1, 2])
    assert np.allclose(gm.V.a, [[1, 1], [1, 2]])
    single = en.gram_matrix(p3, [2])
    assert single.V.a[0, 0] == pytest.approx(en.effective_resistance(p3, 2))


def test_gram_matrix_segment_min():
    seg = en.generate("integer_segment", 8)
    gm = en.gram_matrix(seg, [1, 2, 3])
    assert np.allclose(gm.V.a, [[1, 1, 1], [1, 2, 2], [1, 2, 3]], atol=1e-9)


def test_gram_matrix_rejects_origin(p3):
    with pytest.raises(OriginInF):
        en.gram_matrix(p3, [0, 1])
    with pytest.raises(UnknownVertex):
        en.gram_matrix(p3, [1, 42])


def test_gram_reproducing_consistency(test_net):
    gm = full_gram(test_net)
    for i, x in enumerate(gm.F):
        vx = en.energy_kernel(test_net, x)
        for j, y in enumerate(gm.F):
            assert abs(gm.V.a[i, j] - vx[y]) <= 1e-9


def test_delta_gram(p3):
    dg = en.delta_gram(p3, [1, 2])
    assert np.allclose(dg.a, [[2, -1], [-1, 1]])
    assert en.delta_gram(p3, [2]).a[0, 0] == pytest.approx(1.0)
    seg = en.generate("integer_segment", 4)
    assert en.delta_gram(seg, [1, 3]).a[0, 1] == 0.0  # non-adjacent pair


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_reproducing_identity_random(seed):
    net = random_network(8, seed=seed % 100)
    rng = np.random.default_rng(seed)
    u = random_energy_vector(net, rng, complex_=bool(seed % 2))
    for x in net.vertices:
        resid = en.reproducing_check(net, x, u)
        assert resid <= 1e-9 * (1 + np.sqrt(u.energy))


def test_lap_pairing(test_net):
    rng = np.random.default_rng(2)
    ones = ground(test_net, np.ones(test_net.n))
    for x in test_net.vertices:
        assert en.lap_pairing_check(test_net, x, ones) <= 1e-12
    for _ in range(20):
        u = random_energy_vector(test_net, rng)
        for x in test_net.vertices:
            assert en.lap_pairing_check(test_net, x, u) <= 1e-10 * (1 + np.sqrt(u.energy))


def test_kernel_lap_pairing(p3):
    # <delta_x, v_y> = delta_y(x) - delta_o(x)
    for x in p3.vertices:
        for y in [1, 2]:
            vy = en.energy_kernel(p3, y)
            lhs = en.energy_form(en.delta(p3, x), vy)
            rhs = (1.0 if x == y else 0.0) - (1.0 if x == p3.origin else 0.0)
            assert lhs == pytest.approx(rhs, abs=1e-12)


def test_fin_projection_hand_values(p3):
    v2 = en.energy_kernel(p3, 2)
    p = en.fin_projection(p3, v2, [1])
    assert np.abs(p.values).max() <= 1e-12
    v1 = en.energy_kernel(p3, 1)
    p = en.fin_projection(p3, v1, [1])
    assert np.allclose(p.values, 0.5 * en.delta(p3, 1).values)


def test_fin_projection_idempotent_and_orthogonal(test_net):
    rng = np.random.default_rng(3)
    F = x_vertices(test_net)[:3]
    u = random_energy_vector(test_net, rng)
    pu = en.fin_projection(test_net, u, F)
    ppu = en.fin_projection(test_net, pu, F)
    assert np.abs(pu.values - ppu.values).max() <= 1e-9
    resid = u - pu
    for x in F:
        assert abs(en.energy_form(en.delta(test_net, x), resid)) <= 1e-9


def test_fin_projection_full_set_is_identity(test_net):
    # finite networks carry no harmonic part: projecting onto all Diracs
    # (origin dropped) recovers u
    rng = np.random.default_rng(4)
    for _ in range(5):
        u = random_energy_vector(test_net, rng)
        pu = en.fin_projection(test_net, u, list(test_net.vertices))
        assert np.abs(pu.values - u.values).max() <= 1e-9


def test_edge_sum_agrees_with_laplacian_pairing(test_net):
    # E(u, u) vs <u, laplacian u> pointwise sum on a finite network
    rng = np.random.default_rng(5)
    u = random_energy_vector(test_net, rng)
    lap = en.laplacian_apply(test_net, u.as_function()).values
    assert u.energy == pytest.approx(float(np.real(np.conj(u.values) @ lap)), rel=1e-9)


def test_sup_and_banach_norms(p3):
    v1 = en.energy_kernel(p3, 1)
    assert en.sup_norm(v1) == pytest.approx(1.0)
    assert en.banach_norm(v1) == pytest.approx(2.0)
    assert en.banach_norm(ground(p3, np.ones(3))) == 0.0


def test_kernel_sup_bounded_by_resistance(test_net):
    for x in x_vertices(test_net):
        vx = en.energy_kernel(test_net, x)
        assert en.sup_norm(vx) <= en.effective_resistance(test_net, x) + 1e-12


def test_pointwise_product_hand_value(p3):
    v1, v2 = en.energy_kernel(p3, 1), en.energy_kernel(p3, 2)
    prod, est = en.pointwise_product(v1, v2)
    assert np.allclose(prod.values, [0, 1, 2])
    assert est.product_energy_sq == pytest.approx(2.0)
    assert est.slack >= -1e-9
    zero, _ = en.pointwise_product(v1, zero_vector(p3))
    assert np.abs(zero.values).max() == 0.0


def test_pointwise_product_estimate_random(test_net):
    rng = np.random.default_rng(6)
    for _ in range(30):
        u1 = random_energy_vector(test_net, rng, complex_=True)
        u2 = random_energy_vector(test_net, rng, complex_=True)
        _, est = en.pointwise_product(u1, u2)
        assert est.slack >= -1e-9

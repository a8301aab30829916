import numpy as np
import pytest

import energynet as en
from energynet.errors import CapHit, UnknownVertex
from energynet.randwalk import escape_prob_exact, escape_prob_mc, transition_prob

from conftest import x_vertices


def test_transition_prob(p3):
    assert transition_prob(p3, 0, 1) == pytest.approx(1.0)
    assert transition_prob(p3, 1, 0) == pytest.approx(0.5)
    assert transition_prob(p3, 1, 2) == pytest.approx(0.5)
    assert transition_prob(p3, 0, 2) == 0.0


def test_transition_rows_stochastic(test_net):
    for x in test_net.vertices:
        total = sum(transition_prob(test_net, x, y) for y in test_net.vertices)
        assert total == pytest.approx(1.0)


def test_escape_prob_exact_hand_values(p3):
    assert escape_prob_exact(p3, 1) == pytest.approx(0.5)
    assert escape_prob_exact(p3, 2) == pytest.approx(0.5)
    two = en.build_network([("a", "b", 3.0)], origin="a")
    assert escape_prob_exact(two, "b") == pytest.approx(1.0)
    with pytest.raises(UnknownVertex):
        escape_prob_exact(p3, 0)


def test_escape_prob_segment():
    seg = en.generate("integer_segment", 5)
    # gambler's ruin from k with absorption at 0 and reflection nowhere:
    # P[k -> 0 before returning to k] = p(k, k-1) / k for interior k
    for k in range(1, 6):
        expected = 1.0 / (en.total_conductance(seg, k) * k)
        assert escape_prob_exact(seg, k) == pytest.approx(expected)


def test_walk_operator_identity(test_net):
    # c(x) R(x) P[x -> o] = 1 for every x in X
    for x in x_vertices(test_net):
        prod = (
            en.total_conductance(test_net, x)
            * en.effective_resistance(test_net, x)
            * escape_prob_exact(test_net, x)
        )
        assert prod == pytest.approx(1.0, abs=1e-10)


def test_point_mass_norm_bridge(test_net):
    from energynet.multop import point_mass_norm

    for x in x_vertices(test_net):
        assert point_mass_norm(test_net, x) == pytest.approx(
            escape_prob_exact(test_net, x) ** -0.5, abs=1e-10
        )


def test_mc_matches_exact(p3):
    est = escape_prob_mc(p3, 1, samples=20000, seed=42)
    assert est.exact == pytest.approx(0.5)
    assert abs(est.mc_estimate - est.exact) <= 4 * est.mc_stderr
    assert est.cap_hits == 0


def test_mc_seed_determinism(p3):
    a = escape_prob_mc(p3, 1, samples=5000, seed=7)
    b = escape_prob_mc(p3, 1, samples=5000, seed=7)
    assert a == b
    c = escape_prob_mc(p3, 1, samples=5000, seed=8)
    assert c.mc_estimate != a.mc_estimate


def test_mc_trivial_network():
    two = en.build_network([("o", "x", 1.0)], origin="o")
    est = escape_prob_mc(two, "x", samples=100, seed=0)
    assert est.mc_estimate == 1.0
    assert est.mc_stderr == 0.0


def test_mc_cap_hit():
    seg = en.generate("integer_segment", 30)
    with pytest.raises(CapHit) as info:
        escape_prob_mc(seg, 15, samples=2000, seed=1, max_steps=3)
    est = info.value.estimate
    assert est.cap_hits > 0
    assert est.samples == 2000
    # the partial estimate over decided excursions is still carried
    assert 0.0 <= est.mc_estimate <= 1.0 or np.isnan(est.mc_estimate)


def test_mc_on_random_net():
    from conftest import random_network

    net = random_network(8, seed=3, extra_edges=4)
    xs = [net.vertices[i] for i in range(net.n) if i != net.origin_index]
    x = xs[0]
    est = escape_prob_mc(net, x, samples=30000, seed=11)
    assert abs(est.mc_estimate - est.exact) <= 4 * max(est.mc_stderr, 1e-4)


def test_walk_estimate_json(p3):
    est = escape_prob_mc(p3, 1, samples=100, seed=0)
    doc = est.to_json_dict()
    assert doc["x"] == 1
    assert doc["samples"] == 100
    assert doc["seed"] == 0
    assert set(doc) == {"x", "exact", "mc_estimate", "mc_stderr", "samples", "seed", "cap_hits"}

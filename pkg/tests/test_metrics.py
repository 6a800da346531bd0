import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covertnet.errors import NonPositiveBudget, UnusableLink
from covertnet.metrics import (
    CovertBudget,
    allocate_delta,
    covert_surrogate,
    exact_gaussian_kl,
    gamma_table,
    linearized_capacity,
    link_capacity,
    link_gamma_multi,
    link_gamma_single,
    link_gamma_uncertain,
    link_metric_general,
    optimal_mode_powers,
    path_capacity,
    per_symbol_delta,
    pinsker_bound,
)
from covertnet.model import (
    Adversary,
    CsiEntry,
    FriendlyNode,
    GainTable,
    Position,
    build_network,
)

from helpers import (
    identity_network,
    power_search_best,
    random_network,
    raw_objective,
    raw_surrogate,
    ulp_diff,
)

DELTA = 2e-5


def test_per_symbol_delta_values():
    assert per_symbol_delta(0.01, 500) == pytest.approx(2e-5, rel=1e-15)
    assert per_symbol_delta(1.0, 1) == 1.0
    assert per_symbol_delta(0.5, 250) == pytest.approx(2e-3, rel=1e-15)


def test_per_symbol_delta_rejects_bad_budgets():
    with pytest.raises(NonPositiveBudget):
        per_symbol_delta(0.0, 500)
    with pytest.raises(NonPositiveBudget):
        per_symbol_delta(0.01, 0)
    with pytest.raises(NonPositiveBudget):
        CovertBudget(-1.0, 10)


def test_gamma_identity_link():
    net = identity_network()
    assert link_gamma_single(net, 0, 1, 0).gamma == 1.0


def test_gamma_distance_ratio():
    # d_SD = 2, d_SW = 4, unit gains and noise, alpha = 2 -> 4**4 / 2**4 = 16
    nodes = [FriendlyNode(0, Position(0, 0), (1.0,)), FriendlyNode(1, Position(2, 0), (1.0,))]
    advs = [Adversary(0, Position(0, 4), (1.0,))]
    friendly = {(0, 1, 0): 1.0, (1, 0, 0): 1.0}
    adversary = {(u, 0, 0): CsiEntry.known(1.0) for u in (0, 1)}
    net = build_network(nodes, advs, GainTable(friendly, adversary), 2.0, 0, 1)
    assert link_gamma_single(net, 0, 1, 0).gamma == pytest.approx(16.0, rel=1e-12)


def test_gamma_mode_invisible_to_adversary_is_excluded():
    # second mode unheard by the adversary: excluded from gamma, flagged free
    net = identity_network(m=2, adv_gains={(0, 0, 1): CsiEntry.known(0.0)})
    metric = link_gamma_single(net, 0, 1, 0)
    assert metric.gamma == 1.0
    assert metric.free_modes == (1,)
    powers = optimal_mode_powers(metric, DELTA, p_max=0.25)
    assert powers[0] == pytest.approx(math.sqrt(DELTA), rel=1e-12)
    assert powers[1] == 0.25  # capped, carries no planned capacity
    assert covert_surrogate(net, 0, powers, [0]) == pytest.approx(DELTA, rel=1e-9)


def test_gamma_dead_link_is_not_an_error():
    net = identity_network(
        m=1,
        adv_gains={(0, 0, 0): CsiEntry.known(0.0)},
    )
    # friendly gain zero too: mode dead, gamma 0, no free flag
    friendly = dict(net.gains.friendly)
    friendly[(0, 1, 0)] = 0.0
    net2 = build_network(
        net.nodes, net.adversaries, GainTable(friendly, net.gains.adversary), 2.0, 0, 1
    )
    metric = link_gamma_single(net2, 0, 1, 0)
    assert metric.gamma == 0.0
    assert metric.per_mode_coeff == (0.0,)
    assert metric.free_modes == ()
    with pytest.raises(UnusableLink):
        optimal_mode_powers(metric, DELTA)


def test_multi_adversary_reduces_to_single():
    rng = np.random.default_rng(11)
    for _ in range(50):
        net = random_network(rng, n=4, k=1, m=3)
        for dst in (1, 2, 3):
            a = link_gamma_single(net, 0, dst, 0)
            b = link_gamma_multi(net, 0, dst)
            assert a == b  # bitwise identical, shared computation path


def test_multi_adversary_twin_willies():
    # two adversaries with identical parameters double the inner sum
    net = identity_network()
    nodes, advs = net.nodes, list(net.adversaries)
    advs.append(Adversary(1, Position(0.0, -1.0), (1.0,)))  # same distance from node 0
    adversary = dict(net.gains.adversary)
    adversary.update({(u, 1, 0): CsiEntry.known(1.0) for u in (0, 1)})
    net2 = build_network(nodes, advs, GainTable(net.gains.friendly, adversary), 2.0, 0, 1)
    assert link_gamma_multi(net2, 0, 1).gamma == pytest.approx(0.25, rel=1e-12)


def test_uncertain_reduces_to_single_when_exact():
    rng = np.random.default_rng(12)
    for _ in range(50):
        net = random_network(rng, n=3, k=1, m=2)
        a = link_gamma_single(net, 0, 2, 0)
        b = link_gamma_uncertain(net, 0, 2, 0, "linear-tau")
        assert a == b


def test_uncertain_identity_values():
    # v=0, sigma=1 gives tau=8: linear-tau 1/8, squared-tau 1/64
    net = identity_network(m=1, adv_gains={(0, 0, 0): CsiEntry.rician(0.0, 1.0)})
    lin = link_gamma_uncertain(net, 0, 1, 0, "linear-tau")
    sq = link_gamma_uncertain(net, 0, 1, 0, "squared-tau")
    assert lin.gamma == pytest.approx(1.0 / 8.0, rel=1e-12)
    assert sq.gamma == pytest.approx(1.0 / 64.0, rel=1e-12)


def test_optimal_powers_identity():
    net = identity_network()
    metric = link_gamma_single(net, 0, 1, 0)
    p = optimal_mode_powers(metric, DELTA)
    assert p[0] == pytest.approx(4.4721e-3, rel=1e-4)
    assert p[0] == pytest.approx(math.sqrt(DELTA), rel=1e-12)


def test_optimal_powers_sqrt_homogeneity():
    rng = np.random.default_rng(5)
    net = random_network(rng, n=3, k=2, m=3)
    metric = link_gamma_multi(net, 0, 2)
    p1 = optimal_mode_powers(metric, DELTA)
    p2 = optimal_mode_powers(metric, 4 * DELTA)
    assert np.allclose(p2, 2.0 * p1, rtol=1e-12)


def test_link_capacity_values():
    assert link_capacity(DELTA, 1.0) == pytest.approx(4.4721e-3, rel=1e-4)
    assert link_capacity(0.0, 123.0) == 0.0
    assert link_capacity(DELTA, 16.0) == pytest.approx(1.78885e-2, rel=1e-4)


def test_path_capacity_values():
    assert path_capacity(DELTA, [1.0]) == link_capacity(DELTA, 1.0)
    assert path_capacity(DELTA, [1.0, 1.0]) == pytest.approx(3.1623e-3, rel=1e-4)
    assert path_capacity(DELTA, [16.0, 16.0]) == pytest.approx(1.26491e-2, rel=1e-4)
    with pytest.raises(UnusableLink):
        path_capacity(DELTA, [1.0, 0.0])


def test_allocate_delta_values():
    assert allocate_delta(math.sqrt(1e-5), 1.0) == pytest.approx(1e-5, rel=1e-12)
    cap = path_capacity(DELTA, [1.0, 4.0])
    shares = [allocate_delta(cap, g) for g in (1.0, 4.0)]
    assert shares[0] == pytest.approx(1.6e-5, rel=1e-9)
    assert shares[1] == pytest.approx(0.4e-5, rel=1e-9)
    assert sum(shares) == pytest.approx(DELTA, rel=1e-9)
    # equalization is forced by the construction
    assert link_capacity(shares[0], 1.0) == pytest.approx(link_capacity(shares[1], 4.0), rel=1e-12)


def test_surrogate_identity_and_scaling():
    net = identity_network()
    p = [math.sqrt(DELTA)]
    assert covert_surrogate(net, 0, p, [0]) == pytest.approx(DELTA, rel=1e-9)
    assert covert_surrogate(net, 0, [0.0], [0]) == 0.0
    assert covert_surrogate(net, 0, [2 * p[0]], [0]) == pytest.approx(4 * DELTA, rel=1e-9)


def test_surrogate_tightness_on_random_links():
    rng = np.random.default_rng(21)
    for _ in range(100):
        k = int(rng.integers(1, 4))
        net = random_network(rng, n=3, k=k, m=int(rng.integers(1, 5)))
        willies = [a.id for a in net.adversaries]
        metric = link_gamma_multi(net, 0, 2)
        if metric.gamma == 0.0:
            continue
        d_i = float(rng.uniform(1e-7, 1e-3))
        p = optimal_mode_powers(metric, d_i)
        assert covert_surrogate(net, 0, p, willies) == pytest.approx(d_i, rel=1e-9)


def test_exact_kl_values():
    assert exact_gaussian_kl(0.0) == 0.0
    x = 1e-2
    assert x * x / 4 - x**3 <= exact_gaussian_kl(x) <= x * x / 4 + x**3
    assert exact_gaussian_kl(1.0) == pytest.approx(0.5 * (0.5 - 1.0 + math.log(2.0)), rel=1e-12)
    assert exact_gaussian_kl(1.0) == pytest.approx(0.09657, rel=1e-4)


@given(st.floats(min_value=0.0, max_value=1e-2, exclude_min=True, allow_nan=False))
def test_exact_kl_quadratic_sandwich(x):
    assert abs(exact_gaussian_kl(x) - x * x / 4.0) <= x**3


def test_pinsker_values():
    assert pinsker_bound(0.0) == 0.5
    assert pinsker_bound(2.0) == 0.0
    assert pinsker_bound(0.01) == pytest.approx(0.46464, rel=1e-4)


def test_linearized_capacity_identity():
    net = identity_network()
    p = [math.sqrt(DELTA)]
    # objective carries a 1/2: half of the headline link capacity
    assert linearized_capacity(net, 0, 1, p) == pytest.approx(2.2361e-3, rel=1e-4)
    assert linearized_capacity(net, 0, 1, [0.0]) == 0.0


def test_linearized_capacity_equals_half_headline_at_optimum():
    rng = np.random.default_rng(31)
    for _ in range(50):
        net = random_network(rng, n=3, k=1, m=3)
        metric = link_gamma_single(net, 0, 2, 0)
        if metric.gamma == 0.0:
            continue
        p = optimal_mode_powers(metric, DELTA)
        assert linearized_capacity(net, 0, 2, p) == pytest.approx(
            0.5 * link_capacity(DELTA, metric.gamma), rel=1e-9
        )


def test_gamma_scale_invariance_under_joint_distance_scaling():
    # multiplying both distances by c leaves gamma unchanged (M=1, unit gains)
    for c in (2.0, 5.0, 0.5):
        nodes = [
            FriendlyNode(0, Position(0, 0), (1.0,)),
            FriendlyNode(1, Position(c, 0), (1.0,)),
        ]
        advs = [Adversary(0, Position(0, c), (1.0,))]
        friendly = {(0, 1, 0): 1.0, (1, 0, 0): 1.0}
        adversary = {(u, 0, 0): CsiEntry.known(1.0) for u in (0, 1)}
        net = build_network(nodes, advs, GainTable(friendly, adversary), 2.0, 0, 1)
        assert link_gamma_single(net, 0, 1, 0).gamma == pytest.approx(1.0, rel=1e-12)


def test_adding_adversary_never_increases_gamma():
    rng = np.random.default_rng(41)
    for _ in range(30):
        net3 = random_network(rng, n=4, k=3, m=2)
        for dst in (1, 2, 3):
            g12 = link_gamma_multi(net3, 0, dst, [0, 1]).gamma
            g123 = link_gamma_multi(net3, 0, dst, [0, 1, 2]).gamma
            assert g123 <= g12 * (1 + 1e-12)


def test_gamma_table_matches_scalar_ops():
    rng = np.random.default_rng(51)
    for _ in range(20):
        k = int(rng.integers(1, 4))
        net = random_network(rng, n=5, k=k, m=2, uncertain=True)
        willies = [a.id for a in net.adversaries]
        table = gamma_table(net, willies)
        for u in range(5):
            for v in range(5):
                if u == v:
                    continue
                scalar = link_gamma_multi(net, u, v)
                vec = table.link_metric(u, v)
                assert ulp_diff(scalar.gamma, vec.gamma) <= 4
                for a, b in zip(scalar.per_mode_coeff, vec.per_mode_coeff):
                    assert ulp_diff(a, b) <= 8
                assert scalar.free_modes == vec.free_modes
        if k == 1:
            table_lt = gamma_table(net, willies, "linear-tau")
            for v in range(1, 5):
                scalar = link_gamma_uncertain(net, 0, v, willies[0], "linear-tau")
                vec = table_lt.link_metric(0, v)
                assert ulp_diff(scalar.gamma, vec.gamma) <= 4


def test_extended_combination_is_gated():
    rng = np.random.default_rng(61)
    net = random_network(rng, n=3, k=2, m=2, uncertain=True)
    with pytest.raises(ValueError):
        link_metric_general(net, 0, 2, None, "linear-tau", extended=False)
    with pytest.raises(ValueError):
        link_metric_general(net, 0, 2, None, "squared-tau", extended=True)
    metric = link_metric_general(net, 0, 2, None, "linear-tau", extended=True)
    assert metric.gamma >= 0.0


@settings(deadline=None, max_examples=25)
@given(st.integers(min_value=0, max_value=10_000))
def test_closed_form_beats_random_search_single(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 5))
    net = random_network(rng, n=2, k=1, m=m)
    metric = link_gamma_single(net, 0, 1, 0)
    p = optimal_mode_powers(metric, DELTA)
    closed = raw_objective(net, 0, 1, p)
    assert raw_surrogate(net, 0, p, [0]) <= DELTA * (1 + 1e-9)
    best = power_search_best(net, 0, 1, DELTA, [0], rng, samples=50_000)
    assert closed >= best * (1 - 1e-9)
    assert (closed - best) / closed <= 1e-3

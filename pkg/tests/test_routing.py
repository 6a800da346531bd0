import math

import numpy as np
import pytest

from covertnet.errors import InstanceTooLarge, NoFeasiblePath, UnusableLink
from covertnet.metrics import CovertBudget, covert_surrogate, link_capacity, link_gamma_multi
from covertnet.model import validate_route_plan
from covertnet.routing import (
    WeightedGraph,
    brute_force_best_route,
    graph_from_gammas,
    het_opt,
    hop_limited_route,
    per_link_dep,
    shortest_path,
    single_mode_baseline,
)

from helpers import enumerate_paths, identity_network, random_network

BUDGET = CovertBudget(0.01, 500)


def _graph(weights):
    nodes = tuple(sorted({u for u, _ in weights} | {v for _, v in weights}))
    return WeightedGraph(nodes=nodes, weights=weights)


def test_shortest_path_line():
    g = _graph({(0, 1): 1.0, (1, 2): 1.0})
    assert shortest_path(g, 0, 2) == [0, 1, 2]


def test_shortest_path_tie_breaks_lexicographically():
    g = _graph({(0, 1): 1.0, (1, 3): 1.0, (0, 2): 1.0, (2, 3): 1.0})
    assert shortest_path(g, 0, 3) == [0, 1, 3]


def test_shortest_path_unreachable():
    g = _graph({(0, 1): 1.0, (2, 3): 1.0})
    with pytest.raises(NoFeasiblePath):
        shortest_path(g, 0, 3)


def test_shortest_path_against_enumeration():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(3, 8))
        weights = {}
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < 0.6:
                    weights[(u, v)] = float(rng.uniform(0.1, 5.0))
        g = _graph(weights) if weights else None
        if g is None or 0 not in g.nodes or n - 1 not in g.nodes:
            continue
        adj = {u: sorted(v for v in range(n) if (u, v) in weights) for u in range(n)}
        paths = enumerate_paths(adj, 0, n - 1)
        if not paths:
            with pytest.raises(NoFeasiblePath):
                shortest_path(g, 0, n - 1)
            continue

        def weight(p):
            total = 0.0
            for e in zip(p[:-1], p[1:]):
                total += weights[e]
            return total

        expected = min((weight(p), p) for p in paths)
        got = shortest_path(g, 0, n - 1)
        assert (weight(tuple(got)), tuple(got)) == expected


def test_hop_limited_single_round_gives_direct_link():
    net = identity_network()
    gammas = {(0, 1): 1.0}
    assert hop_limited_route(net, gammas, 1) == [0, 1]
    with pytest.raises(NoFeasiblePath):
        hop_limited_route(net, {(1, 0): 1.0}, 1)


def test_hop_limited_widest_prefers_relay_triangle():
    rng = np.random.default_rng(1)
    net = random_network(rng, n=3, k=1, m=1)  # geometry irrelevant, gammas given
    gammas = {(0, 2): 1.0, (0, 1): 4.0, (1, 2): 4.0}
    assert hop_limited_route(net, gammas, 2, "widest") == [0, 1, 2]
    assert hop_limited_route(net, gammas, 1, "widest") == [0, 2]


def test_hop_limited_against_enumeration():
    rng = np.random.default_rng(17)
    for _ in range(200):
        n = int(rng.integers(3, 7))
        net = random_network(rng, n=n, k=1, m=1)
        gammas = {}
        for u in range(n):
            for v in range(n):
                if u != v and rng.random() < 0.7:
                    gammas[(u, v)] = float(rng.uniform(0.1, 10.0))
        h = int(rng.integers(1, 5))
        adj = {u: sorted(v for v in range(n) if (u, v) in gammas) for u in range(n)}
        paths = [p for p in enumerate_paths(adj, 0, n - 1) if len(p) - 1 <= h]
        if not paths:
            with pytest.raises(NoFeasiblePath):
                hop_limited_route(net, gammas, h, "widest")
            continue
        best_bottleneck = max(min(gammas[e] for e in zip(p[:-1], p[1:])) for p in paths)
        got = hop_limited_route(net, gammas, h, "widest")
        got_bottleneck = min(gammas[e] for e in zip(got[:-1], got[1:]))
        assert got_bottleneck == best_bottleneck
        assert len(got) - 1 <= h

        best_additive = min(sum(1.0 / gammas[e] for e in zip(p[:-1], p[1:])) for p in paths)
        got_add = hop_limited_route(net, gammas, h, "additive")
        assert sum(1.0 / gammas[e] for e in zip(got_add[:-1], got_add[1:])) == pytest.approx(
            best_additive, rel=1e-12
        )


def test_het_opt_two_node_network():
    net = identity_network()
    plan = het_opt(net, BUDGET)
    assert plan.links == ((0, 1),)
    assert plan.path_capacity == pytest.approx(math.sqrt(BUDGET.delta), rel=1e-12)
    assert plan.algorithm == "het-opt"
    validate_route_plan(net, plan)


def test_het_opt_matches_brute_force_on_random_instances():
    rng = np.random.default_rng(23)
    for _ in range(30):
        net = random_network(rng, n=int(rng.integers(3, 8)), k=1, m=2)
        fast = het_opt(net, BUDGET)
        slow = brute_force_best_route(net, BUDGET)
        assert fast.path_capacity == pytest.approx(slow.path_capacity, rel=1e-9)
        assert fast.links == slow.links


def test_het_opt_uses_relay_when_it_doubles_gamma():
    rng = np.random.default_rng(2)
    net = random_network(rng, n=3, k=1, m=1)
    plan = het_opt(net, BUDGET)
    oracle = brute_force_best_route(net, BUDGET)
    assert plan.path_capacity == pytest.approx(oracle.path_capacity, rel=1e-9)


def test_het_opt_budget_is_fully_spent():
    rng = np.random.default_rng(3)
    for _ in range(20):
        net = random_network(rng, n=6, k=2, m=2)
        plan = het_opt(net, BUDGET)
        assert sum(plan.delta_per_link) == pytest.approx(BUDGET.delta, rel=1e-9)
        caps = [
            link_capacity(d, link_gamma_multi(net, u, v).gamma)
            for (u, v), d in zip(plan.links, plan.delta_per_link)
        ]
        assert max(caps) - min(caps) <= 1e-9 * max(caps)


def test_het_opt_no_feasible_path():
    net = identity_network()
    friendly = {k: 0.0 for k in net.gains.friendly}
    from covertnet.model import GainTable, build_network

    net2 = build_network(
        net.nodes, net.adversaries, GainTable(friendly, net.gains.adversary), 2.0, 0, 1
    )
    with pytest.raises(NoFeasiblePath):
        het_opt(net2, BUDGET)


def test_per_link_dep_two_node():
    net = identity_network()
    plan = per_link_dep(net, BUDGET)
    assert plan.links == ((0, 1),)
    assert plan.hops == 1
    assert plan.path_capacity == pytest.approx(math.sqrt(BUDGET.delta), rel=1e-12)
    assert plan.algorithm == "per-link-dep"


def test_per_link_dep_never_beats_het_opt():
    rng = np.random.default_rng(29)
    for _ in range(50):
        net = random_network(rng, n=int(rng.integers(2, 9)), k=1, m=2)
        a = het_opt(net, BUDGET)
        b = per_link_dep(net, BUDGET, max_hops=net.num_nodes)
        assert a.path_capacity >= b.path_capacity * (1 - 1e-12)
        assert sum(b.delta_per_link) <= BUDGET.delta * (1 + 1e-12)


def test_per_link_dep_matches_exhaustive_equal_split_search():
    rng = np.random.default_rng(31)
    for _ in range(100):
        n = int(rng.integers(2, 8))
        net = random_network(rng, n=n, k=1, m=2)
        h_max = n
        plan = per_link_dep(net, BUDGET, max_hops=h_max)

        gammas = {}
        for u in range(n):
            for v in range(n):
                if u != v:
                    g = link_gamma_multi(net, u, v).gamma
                    if g > 0.0:
                        gammas[(u, v)] = g
        adj = {u: sorted(v for v in range(n) if (u, v) in gammas) for u in range(n)}
        best = 0.0
        for p in enumerate_paths(adj, 0, n - 1):
            bottleneck = min(gammas[e] for e in zip(p[:-1], p[1:]))
            for h in range(len(p) - 1, h_max + 1):
                best = max(best, math.sqrt((BUDGET.delta / h) * bottleneck))
        assert plan.path_capacity == pytest.approx(best, rel=1e-9)


def test_single_mode_baseline_on_single_mode_network_equals_het_opt():
    rng = np.random.default_rng(37)
    net = random_network(rng, n=5, k=1, m=1)
    a = het_opt(net, BUDGET)
    b = single_mode_baseline(net, 0, BUDGET)
    assert a.links == b.links
    assert a.path_capacity == b.path_capacity
    assert b.algorithm == "single-mode-1"


def test_single_mode_baseline_never_beats_het_opt():
    rng = np.random.default_rng(41)
    for _ in range(30):
        net = random_network(rng, n=6, k=1, m=2)
        full = het_opt(net, BUDGET)
        for mode in range(2):
            restricted = single_mode_baseline(net, mode, BUDGET)
            assert full.path_capacity >= restricted.path_capacity * (1 - 1e-12)
            # restricted plans put no power on the other mode
            other = 1 - mode
            assert all(pw[other] == 0.0 for pw in restricted.powers)


def test_brute_force_guard():
    rng = np.random.default_rng(43)
    net = random_network(rng, n=11, k=1, m=1)
    with pytest.raises(InstanceTooLarge):
        brute_force_best_route(net, BUDGET)


def test_brute_force_two_node():
    net = identity_network()
    plan = brute_force_best_route(net, BUDGET)
    assert plan.links == ((0, 1),)
    assert plan.algorithm == "brute-force"


def test_plans_satisfy_surrogate_tightness():
    rng = np.random.default_rng(47)
    for _ in range(20):
        k = int(rng.integers(1, 4))
        net = random_network(rng, n=5, k=k, m=2)
        willies = [a.id for a in net.adversaries]
        for plan in (
            het_opt(net, BUDGET),
            per_link_dep(net, BUDGET),
            single_mode_baseline(net, 0, BUDGET),
        ):
            for (u, _v), d_i, pw in zip(plan.links, plan.delta_per_link, plan.powers):
                assert covert_surrogate(net, u, pw, willies) == pytest.approx(d_i, rel=1e-9)


def test_multi_adversary_capacity_monotone_in_adversary_count():
    rng = np.random.default_rng(53)
    for _ in range(20):
        net = random_network(rng, n=6, k=3, m=2)
        caps = []
        for subset in ([0], [0, 1], [0, 1, 2]):
            sub_net = _restrict_adversaries(net, subset)
            caps.append(het_opt(sub_net, BUDGET, adversary_mode="multi").path_capacity)
        assert caps[0] >= caps[1] * (1 - 1e-12)
        assert caps[1] >= caps[2] * (1 - 1e-12)


def _restrict_adversaries(net, keep):
    from covertnet.model import GainTable, build_network

    advs = [a for a in net.adversaries if a.id in keep]
    adversary = {k: v for k, v in net.gains.adversary.items() if k[1] in keep}
    return build_network(
        net.nodes, advs, GainTable(net.gains.friendly, adversary), net.alpha, net.source, net.dest
    )


def test_adversary_mode_single_requires_one_adversary():
    rng = np.random.default_rng(59)
    net = random_network(rng, n=3, k=2, m=1)
    with pytest.raises(ValueError):
        het_opt(net, BUDGET, adversary_mode="single")


def test_determinism_identical_plans():
    rng = np.random.default_rng(61)
    net = random_network(rng, n=7, k=2, m=2)
    assert het_opt(net, BUDGET) == het_opt(net, BUDGET)
    assert per_link_dep(net, BUDGET) == per_link_dep(net, BUDGET)


def test_graph_from_gammas_skips_unusable_edges():
    g = graph_from_gammas([0, 1, 2], {(0, 1): 2.0, (1, 2): 0.0, (0, 2): math.inf})
    assert (0, 1) in g.weights
    assert (1, 2) not in g.weights
    assert g.weights[(0, 2)] == 0.0  # infinite merit -> free edge weight 0

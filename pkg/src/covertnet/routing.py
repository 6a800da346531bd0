"""Route selection and link configuration.

``het_opt`` is the headline planner: it computes every ordered pair's
figure of merit, finds the path minimizing the summed reciprocal merit
with Dijkstra's algorithm, then splits the end-to-end covertness budget
so that every hop attains the path capacity.

``per_link_dep`` is the equal-split comparison scheme: the budget is
divided evenly over a hop bound ``h``, the best bottleneck route within
``h`` hops is selected by rounds of edge relaxation, and the best hop
bound wins.

``brute_force_best_route`` certifies ``het_opt`` by exhaustive
enumeration of simple paths on small instances.

All algorithms are pure functions of immutable inputs and resolve ties
deterministically (lexicographically smallest node-id sequence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Iterable, Mapping, Sequence

from .errors import InstanceTooLarge, NoFeasiblePath
from .metrics import (
    CovertBudget,
    GammaTable,
    LinkMetric,
    allocate_delta,
    covert_surrogate,  # noqa: F401  (re-exported for plan consumers)
    gamma_table,
    link_capacity,
    link_metric_general,
    optimal_mode_powers,
    path_capacity,
    DEFAULT_FREE_MODE_POWER,
)
from .model import NetworkInstance, RoutePlan


@dataclass(frozen=True)
class WeightedGraph:
    """Directed graph with nonnegative edge weights; +inf marks absence."""

    nodes: tuple[int, ...]
    weights: Mapping[tuple[int, int], float]

    def __post_init__(self) -> None:
        for (u, v), w in self.weights.items():
            if u == v:
                raise ValueError(f"self-loop on node {u}")
            if w < 0.0 or math.isnan(w):
                raise ValueError(f"negative or NaN weight on edge ({u}, {v})")

    def adjacency(self) -> dict[int, list[tuple[int, float]]]:
        adj: dict[int, list[tuple[int, float]]] = {n: [] for n in self.nodes}
        for (u, v), w in self.weights.items():
            if math.isfinite(w):
                adj[u].append((v, w))
        for n in adj:
            adj[n].sort()
        return adj


def graph_from_gammas(
    node_ids: Iterable[int], gammas: Mapping[tuple[int, int], float]
) -> WeightedGraph:
    """Build the routing graph with weight 1/gamma on usable links."""
    weights = {
        (u, v): 1.0 / g for (u, v), g in gammas.items() if u != v and g > 0.0
    }
    return WeightedGraph(nodes=tuple(node_ids), weights=weights)


def shortest_path(graph: WeightedGraph, source: int, dest: int) -> list[int]:
    """Min-weight path; ties go to the lexicographically smallest sequence.

    Heap entries carry the whole path so equal-weight alternatives pop in
    node-id order, which makes the result deterministic across platforms.
    """
    if source == dest:
        raise ValueError("source and dest must differ")
    if source not in graph.nodes or dest not in graph.nodes:
        raise ValueError("source and dest must be graph nodes")
    adj = graph.adjacency()
    heap: list[tuple[float, tuple[int, ...]]] = [(0.0, (source,))]
    visited: set[int] = set()
    while heap:
        dist, path = heappop(heap)
        u = path[-1]
        if u in visited:
            continue
        visited.add(u)
        if u == dest:
            return list(path)
        for v, w in adj[u]:
            if v not in visited:
                heappush(heap, (dist + w, path + (v,)))
    raise NoFeasiblePath(f"no path from {source} to {dest} through usable links")


def _hop_profiles(
    node_ids: Sequence[int],
    edges: Sequence[tuple[int, int, float]],
    source: int,
    dest: int,
    rounds: int,
    semantics: str,
) -> list[tuple[float, tuple[int, ...]] | None]:
    """Best (value, path) at ``dest`` after each relaxation round.

    Round ``r`` covers simple paths with at most ``r`` hops.  ``widest``
    maximizes the minimum edge value along the path; ``additive``
    minimizes the summed edge value.  Ties prefer the smaller node-id
    sequence.  Relaxations in one round read the previous round's states,
    so the hop count bound is exact.
    """
    if semantics not in ("widest", "additive"):
        raise ValueError(f"semantics must be 'widest' or 'additive', got {semantics!r}")
    maximize = semantics == "widest"
    start = math.inf if maximize else 0.0
    state: dict[int, tuple[float, tuple[int, ...]]] = {source: (start, (source,))}
    out: list[tuple[float, tuple[int, ...]] | None] = []
    for _ in range(rounds):
        new_state = dict(state)
        for u, v, val in edges:
            su = state.get(u)
            if su is None:
                continue
            uval, upath = su
            if v in upath:
                continue
            cand = min(uval, val) if maximize else uval + val
            cur = new_state.get(v)
            if cur is None:
                new_state[v] = (cand, upath + (v,))
                continue
            cval, cpath = cur
            if (cand > cval if maximize else cand < cval) or (
                cand == cval and upath + (v,) < cpath
            ):
                new_state[v] = (cand, upath + (v,))
        state = new_state
        out.append(state.get(dest))
    return out


def hop_limited_route(
    net: NetworkInstance,
    gammas: Mapping[tuple[int, int], float],
    h: int,
    semantics: str = "widest",
) -> list[int]:
    """Best source-to-dest route using at most ``h`` hops.

    ``widest`` (default) maximizes the minimum figure of merit along the
    path, which is the right objective when every link gets the same
    covertness share.  ``additive`` reproduces plain summed-weight
    relaxation with weight 1/gamma instead.
    """
    if h < 1:
        raise ValueError("hop bound must be >= 1")
    node_ids = [n.id for n in net.nodes]
    if semantics == "widest":
        edges = [(u, v, g) for (u, v), g in gammas.items() if u != v and g > 0.0]
    else:
        edges = [(u, v, 1.0 / g) for (u, v), g in gammas.items() if u != v and g > 0.0]
    edges.sort(key=lambda e: (e[0], e[1]))
    profiles = _hop_profiles(node_ids, edges, net.source, net.dest, h, semantics)
    best = profiles[h - 1]
    if best is None:
        raise NoFeasiblePath(f"no path within {h} hops")
    return list(best[1])


def _resolve_adversary_mode(net: NetworkInstance, adversary_mode: str | None) -> tuple[str, list[int]]:
    if adversary_mode is None:
        adversary_mode = "single" if net.num_adversaries == 1 else "multi"
    if adversary_mode == "single":
        if net.num_adversaries != 1:
            raise ValueError("adversary_mode='single' requires exactly one adversary")
        return "single", [net.adversaries[0].id]
    if adversary_mode == "multi":
        return "multi", [a.id for a in net.adversaries]
    raise ValueError(f"adversary_mode must be 'single' or 'multi', got {adversary_mode!r}")


def _plan_from_path(
    net: NetworkInstance,
    budget: CovertBudget,
    path: Sequence[int],
    metrics: Sequence[LinkMetric],
    deltas: Sequence[float],
    algorithm: str,
    adversary_mode: str,
    csi_variant: str,
    p_max: float,
) -> RoutePlan:
    links = tuple(zip(path[:-1], path[1:]))
    powers = tuple(
        tuple(float(p) for p in optimal_mode_powers(m, d, p_max))
        for m, d in zip(metrics, deltas)
    )
    cap = min(link_capacity(d, m.gamma) for d, m in zip(deltas, metrics))
    return RoutePlan(
        links=links,
        delta_per_link=tuple(float(d) for d in deltas),
        powers=powers,
        path_capacity=cap,
        algorithm=algorithm,
        budget=budget,
        adversary_mode=adversary_mode,
        csi_variant=csi_variant,
    )


def _matrix_gammas(table: GammaTable, modes=None) -> dict[tuple[int, int], float]:
    gm = table.gamma_matrix(modes)
    ids = table.node_ids
    out: dict[tuple[int, int], float] = {}
    for i, u in enumerate(ids):
        row = gm[i]
        for j, v in enumerate(ids):
            if i != j and row[j] > 0.0:
                out[(u, v)] = float(row[j])
    return out


def het_opt(
    net: NetworkInstance,
    budget: CovertBudget,
    adversary_mode: str | None = None,
    csi_variant: str = "known",
    extended: bool = False,
    p_max: float = DEFAULT_FREE_MODE_POWER,
    table: GammaTable | None = None,
    modes: Sequence[int] | None = None,
) -> RoutePlan:
    """Optimal route and per-mode link powers under the end-to-end budget.

    Computes every ordered pair's figure of merit, runs the min
    reciprocal-merit path search, then gives each hop the covertness
    share that equalizes link capacities at the path capacity.  The
    returned capacity is globally optimal over all simple paths.

    ``table`` may carry a precomputed coefficient table for the same
    adversary/CSI configuration; ``modes`` restricts planning to a mode
    subset (used by the single-mode baselines).
    """
    tag, willies = _resolve_adversary_mode(net, adversary_mode)
    if table is None:
        table = gamma_table(net, willies, csi_variant, extended)
    gammas = _matrix_gammas(table, modes)
    graph = graph_from_gammas([n.id for n in net.nodes], gammas)
    path = shortest_path(graph, net.source, net.dest)
    links = list(zip(path[:-1], path[1:]))
    link_gammas = [gammas[l] for l in links]
    cap = path_capacity(budget.delta, link_gammas)
    deltas = [allocate_delta(cap, g) for g in link_gammas]
    metrics = [table.link_metric(u, v, modes) for u, v in links]
    algorithm = "het-opt" if modes is None else f"single-mode-{list(modes)[0] + 1}"
    return _plan_from_path(
        net, budget, path, metrics, deltas, algorithm, tag, csi_variant, p_max
    )


def single_mode_baseline(
    net: NetworkInstance,
    mode: int,
    budget: CovertBudget,
    adversary_mode: str | None = None,
    csi_variant: str = "known",
    p_max: float = DEFAULT_FREE_MODE_POWER,
    table: GammaTable | None = None,
) -> RoutePlan:
    """Plan as if only mode ``mode`` (0-based) existed on friendly links.

    Equivalent to running the optimal planner on a copy of the network
    with every other mode's friendly gains zeroed; its capacity can never
    exceed the multi-mode plan's.
    """
    if not 0 <= mode < net.num_modes:
        raise ValueError(f"mode {mode} out of range for {net.num_modes} modes")
    return het_opt(
        net,
        budget,
        adversary_mode=adversary_mode,
        csi_variant=csi_variant,
        p_max=p_max,
        table=table,
        modes=[mode],
    )


def per_link_dep(
    net: NetworkInstance,
    budget: CovertBudget,
    max_hops: int = 10,
    adversary_mode: str | None = None,
    csi_variant: str = "known",
    extended: bool = False,
    semantics: str = "widest",
    p_max: float = DEFAULT_FREE_MODE_POWER,
    table: GammaTable | None = None,
) -> RoutePlan:
    """Equal-split comparison scheme with a hop budget.

    For each hop bound ``h`` up to ``max_hops`` the budget share is fixed
    at ``delta / h`` on every link, the best route within ``h`` hops is
    found by bottleneck relaxation, and the overall best hop bound is
    kept (ties prefer fewer hops).  The summed shares never exceed the
    end-to-end budget.
    """
    if max_hops < 1:
        raise ValueError("max_hops must be >= 1")
    tag, willies = _resolve_adversary_mode(net, adversary_mode)
    if table is None:
        table = gamma_table(net, willies, csi_variant, extended)
    gammas = _matrix_gammas(table)
    if semantics == "widest":
        edges = [(u, v, g) for (u, v), g in gammas.items()]
    else:
        edges = [(u, v, 1.0 / g) for (u, v), g in gammas.items()]
    edges.sort(key=lambda e: (e[0], e[1]))
    profiles = _hop_profiles(
        [n.id for n in net.nodes], edges, net.source, net.dest, max_hops, semantics
    )
    delta = budget.delta
    best: tuple[float, int, tuple[int, ...]] | None = None
    for h, entry in enumerate(profiles, start=1):
        if entry is None:
            continue
        _, path = entry
        bottleneck = min(gammas[l] for l in zip(path[:-1], path[1:]))
        cap = math.sqrt((delta / h) * bottleneck)
        if best is None or cap > best[0]:
            best = (cap, h, path)
    if best is None:
        raise NoFeasiblePath(f"no path within {max_hops} hops")
    _, h, path = best
    links = list(zip(path[:-1], path[1:]))
    deltas = [delta / h] * len(links)
    metrics = [table.link_metric(u, v) for u, v in links]
    return _plan_from_path(
        net, budget, path, metrics, deltas, "per-link-dep", tag, csi_variant, p_max
    )


def _iter_simple_paths(adj: dict[int, list[int]], source: int, dest: int):
    """Yield all simple source-to-dest paths in node-id order."""
    stack: list[tuple[tuple[int, ...], int]] = [((source,), source)]
    while stack:
        path, u = stack.pop()
        if u == dest:
            yield path
            continue
        # reversed keeps expansion in ascending id order off a LIFO stack
        for v in reversed(adj[u]):
            if v not in path:
                stack.append((path + (v,), v))


def brute_force_best_route(
    net: NetworkInstance,
    budget: CovertBudget,
    adversary_mode: str | None = None,
    csi_variant: str = "known",
    extended: bool = False,
    p_max: float = DEFAULT_FREE_MODE_POWER,
    max_nodes: int = 10,
) -> RoutePlan:
    """Exhaustive certification oracle over all simple paths.

    Scores every simple source-to-dest path by its optimally-split
    capacity and returns the best as a plan.  Uses the scalar per-link
    metric constructors (an independent code path from the vectorized
    tables the planners use).  Refuses instances above ``max_nodes``.
    """
    if net.num_nodes > max_nodes:
        raise InstanceTooLarge(
            f"{net.num_nodes} nodes exceeds the exhaustive-search guard ({max_nodes})"
        )
    tag, willies = _resolve_adversary_mode(net, adversary_mode)
    metrics: dict[tuple[int, int], LinkMetric] = {}
    for u in net.node_by_id:
        for v in net.node_by_id:
            if u != v:
                metrics[(u, v)] = link_metric_general(
                    net, u, v, willies, csi_variant, extended
                )
    adj = {
        u: sorted(v for v in net.node_by_id if v != u and metrics[(u, v)].gamma > 0.0)
        for u in net.node_by_id
    }
    best: tuple[float, tuple[int, ...]] | None = None
    for path in _iter_simple_paths(adj, net.source, net.dest):
        score = 0.0
        for l in zip(path[:-1], path[1:]):
            score += 1.0 / metrics[l].gamma
        if best is None or (score, path) < best:
            best = (score, path)
    if best is None:
        raise NoFeasiblePath(f"no path from {net.source} to {net.dest} through usable links")
    score, path = best
    links = list(zip(path[:-1], path[1:]))
    link_gammas = [metrics[l].gamma for l in links]
    cap = path_capacity(budget.delta, link_gammas)
    deltas = [allocate_delta(cap, g) for g in link_gammas]
    return _plan_from_path(
        net,
        budget,
        path,
        [metrics[l] for l in links],
        deltas,
        "brute-force",
        tag,
        csi_variant,
        p_max,
    )

"""Shared fixtures and independent oracles for the test suite.

The oracles here deliberately recompute quantities from raw network
data (positions, gains, noise) rather than calling the library's
coefficient helpers, so closed-form results are checked against an
independent route.
"""

from __future__ import annotations

import math

import numpy as np

from covertnet.channels import fourth_moment_tau
from covertnet.model import (
    Adversary,
    CsiEntry,
    FriendlyNode,
    GainTable,
    NetworkInstance,
    Position,
    build_network,
    distance,
)


def identity_network(m: int = 1, adv_gains: dict | None = None) -> NetworkInstance:
    """Two nodes and one adversary, all unit parameters, all distances 1."""
    ones = tuple(1.0 for _ in range(m))
    nodes = [
        FriendlyNode(0, Position(0.0, 0.0), ones),
        FriendlyNode(1, Position(1.0, 0.0), ones),
    ]
    advs = [Adversary(0, Position(0.0, 1.0), ones)]
    friendly = {}
    for mode in range(m):
        friendly[(0, 1, mode)] = 1.0
        friendly[(1, 0, mode)] = 1.0
    adversary = {}
    for u in (0, 1):
        for mode in range(m):
            adversary[(u, 0, mode)] = CsiEntry.known(1.0)
    if adv_gains:
        adversary.update(adv_gains)
    return build_network(nodes, advs, GainTable(friendly, adversary), 2.0, 0, 1)


def random_network(
    rng: np.random.Generator,
    n: int,
    k: int = 1,
    m: int = 2,
    alpha: float = 2.0,
    uncertain: bool = False,
    zero_gain_prob: float = 0.0,
) -> NetworkInstance:
    """Arbitrary positive-parameter network on a 100x100 patch."""
    while True:
        pts = rng.uniform(0.0, 100.0, size=(n + k, 2))
        d = np.hypot(pts[:, None, 0] - pts[None, :, 0], pts[:, None, 1] - pts[None, :, 1])
        np.fill_diagonal(d, 1.0)
        if d.min() > 1e-3:
            break
    nodes = [
        FriendlyNode(i, Position(*pts[i]), tuple(rng.uniform(0.5, 4.0, size=m)))
        for i in range(n)
    ]
    advs = [
        Adversary(j, Position(*pts[n + j]), tuple(rng.uniform(0.5, 4.0, size=m)))
        for j in range(k)
    ]
    friendly = {}
    for u in range(n):
        for v in range(n):
            if u == v:
                continue
            for mode in range(m):
                g = 0.0 if rng.random() < zero_gain_prob else float(rng.uniform(0.1, 2.0))
                friendly[(u, v, mode)] = g
    adversary = {}
    for u in range(n):
        for j in range(k):
            for mode in range(m):
                if uncertain and rng.random() < 0.5:
                    entry = CsiEntry.rician(float(rng.uniform(0.0, 2.0)), float(rng.uniform(0.01, 1.0)))
                elif rng.random() < zero_gain_prob:
                    entry = CsiEntry.known(0.0)
                else:
                    entry = CsiEntry.known(float(rng.uniform(0.1, 2.0)))
                adversary[(u, j, mode)] = entry
    return build_network(nodes, advs, GainTable(friendly, adversary), alpha, 0, n - 1)


def ulp_diff(a: float, b: float) -> float:
    """Distance between two floats in units of the larger one's spacing."""
    if a == b:
        return 0.0
    return abs(a - b) / np.spacing(max(abs(a), abs(b)))


# ---------------------------------------------------------------------------
# Raw per-link quantities (independent of covertnet.metrics internals)
# ---------------------------------------------------------------------------


def raw_objective(net: NetworkInstance, src: int, dst: int, powers) -> float:
    """Linearized rate objective computed from raw network data."""
    d = distance(net.node_by_id[src].pos, net.node_by_id[dst].pos)
    total = 0.0
    for mode in range(net.num_modes):
        g = net.gains.friendly_gain(src, dst, mode)
        s2 = net.node_by_id[dst].noise_var[mode]
        total += g * g * powers[mode] / (2.0 * s2 * d**net.alpha)
    return total


def raw_surrogate(net: NetworkInstance, src: int, powers, willies, variant: str = "known") -> float:
    """Covertness constraint left-hand side from raw network data."""
    src_pos = net.node_by_id[src].pos
    total = 0.0
    for mode in range(net.num_modes):
        if variant == "known":
            inner = 0.0
            for w in willies:
                adv = net.adversary_by_id[w]
                entry = net.gains.adversary_csi(src, w, mode)
                dw = distance(src_pos, adv.pos)
                inner += entry.v**2 * powers[mode] / (adv.noise_var[mode] * dw**net.alpha)
            total += inner**2
        else:
            (w,) = willies
            adv = net.adversary_by_id[w]
            entry = net.gains.adversary_csi(src, w, mode)
            dw = distance(src_pos, adv.pos)
            tau = fourth_moment_tau(entry.v, entry.sigma_err)
            base = powers[mode] / (adv.noise_var[mode] * dw**net.alpha)
            if variant == "linear-tau":
                total += tau * base**2
            else:  # squared-tau
                total += (tau * base) ** 2
    return total


def power_search_best(
    net: NetworkInstance,
    src: int,
    dst: int,
    delta: float,
    willies,
    rng: np.random.Generator,
    samples: int = 1_000_000,
    variant: str = "known",
) -> float:
    """Best objective over random feasible points of the constraint set.

    Every candidate is a random nonnegative direction scaled onto the
    constraint boundary (the constraint is exactly quadratic in the
    powers, so the scale factor is analytic).  Half the budget explores
    globally; the rest resamples around the running best with a
    shrinking radius so the search resolves the optimum well below the
    0.1% comparison tolerance.
    """
    m = net.num_modes
    # per-mode quadratic/linear weights measured from raw evaluations
    quad = np.array(
        [raw_surrogate(net, src, np.eye(m)[i], willies, variant) for i in range(m)]
    )
    lin = np.array([raw_objective(net, src, dst, np.eye(m)[i]) for i in range(m)])

    best = 0.0
    best_dir = None
    for i in range(m):  # pure single-mode corners
        if quad[i] > 0.0:
            obj = math.sqrt(delta / quad[i]) * lin[i]
            if obj > best:
                best, best_dir = obj, np.eye(m)[i]

    def consider(dirs: np.ndarray) -> None:
        nonlocal best, best_dir
        s = dirs**2 @ quad
        good = s > 0.0
        if not good.any():
            return
        objs = np.sqrt(delta / s[good]) * (dirs[good] @ lin)
        k = int(np.argmax(objs))
        if objs[k] > best:
            best = float(objs[k])
            best_dir = dirs[good][k]

    explore = samples // 2
    chunk = 50_000
    done = 0
    while done < explore:
        size = min(chunk, (explore - done + 1) // 2)
        consider(np.abs(rng.standard_normal((size, m))))
        consider(rng.exponential(1.0, size=(size, m)))
        done += 2 * size

    stages = 25
    per_stage = max(1, (samples - explore) // stages)
    radius = 1.0
    for _ in range(stages):
        if best_dir is None:
            break
        center = best_dir / np.linalg.norm(best_dir)
        dirs = np.clip(center + radius * rng.standard_normal((per_stage, m)), 0.0, None)
        consider(dirs)
        radius *= 0.55
    return best


def enumerate_paths(adj: dict[int, list[int]], src: int, dst: int):
    """All simple src->dst paths (recursive; independent of routing.py)."""
    out: list[tuple[int, ...]] = []

    def go(path: tuple[int, ...]):
        u = path[-1]
        if u == dst:
            out.append(path)
            return
        for v in adj[u]:
            if v not in path:
                go(path + (v,))

    go((src,))
    return out

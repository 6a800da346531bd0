"""Domain types for covert multi-modal wireless networks.

A :class:`NetworkInstance` couples friendly-node geometry, adversary
geometry, and per-mode channel amplitudes.  All types are immutable after
construction and can be shared freely across worker processes.

Conventions:

* gains are nonnegative real amplitudes (complex fades are reduced to
  their magnitude before storage; every formula downstream consumes the
  squared or fourth power only);
* an amplitude of 0 encodes "mode unavailable on this link";
* the candidate graph is the complete directed graph on friendly nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping

import numpy as np

from .errors import (
    CoLocatedEntities,
    DuplicateId,
    InvalidGain,
    InvalidRoutePlan,
    MissingGainEntry,
    NetworkValidationError,
    NonPositiveNoise,
    SourceEqualsDest,
)

if TYPE_CHECKING:  # pragma: no cover - type-only import, avoids a cycle
    from .metrics import CovertBudget


@dataclass(frozen=True)
class Position:
    """A point in the planning region, in grid units."""

    x: float
    y: float


def distance(a: Position, b: Position) -> float:
    """Euclidean distance between two positions (grid units)."""
    return math.hypot(a.x - b.x, a.y - b.y)


@dataclass(frozen=True)
class FriendlyNode:
    """A cooperating node with one receiver noise variance per mode."""

    id: int
    pos: Position
    noise_var: tuple[float, ...]


@dataclass(frozen=True)
class Adversary:
    """A detector ("Willie") with one receiver noise variance per mode."""

    id: int
    pos: Position
    noise_var: tuple[float, ...]


@dataclass(frozen=True)
class CsiEntry:
    """Channel knowledge for one (node, adversary, mode) triple.

    ``sigma_err == 0`` means the amplitude ``v`` is known exactly.
    Otherwise the amplitude is Rician: a known component ``v`` on one
    axis plus independent zero-mean Gaussian error of std ``sigma_err``
    on each of the two axes.  An entry with ``sigma_err == 0`` behaves
    identically to an exactly-known gain in every metric.
    """

    v: float
    sigma_err: float = 0.0

    @classmethod
    def known(cls, g: float) -> "CsiEntry":
        return cls(float(g), 0.0)

    @classmethod
    def rician(cls, v: float, sigma_err: float) -> "CsiEntry":
        return cls(float(v), float(sigma_err))

    @property
    def is_exact(self) -> bool:
        return self.sigma_err == 0.0


@dataclass(frozen=True)
class GainTable:
    """Amplitude gains for every ordered node pair and every node-adversary pair.

    ``friendly`` maps ``(src_id, dst_id, mode)`` to an amplitude;
    ``adversary`` maps ``(node_id, adversary_id, mode)`` to a
    :class:`CsiEntry`.
    """

    friendly: Mapping[tuple[int, int, int], float]
    adversary: Mapping[tuple[int, int, int], CsiEntry]

    def friendly_gain(self, src: int, dst: int, mode: int) -> float:
        try:
            return self.friendly[(src, dst, mode)]
        except KeyError:
            raise MissingGainEntry(f"no friendly gain for ({src}, {dst}, mode {mode})") from None

    def adversary_csi(self, node: int, adversary: int, mode: int) -> CsiEntry:
        try:
            return self.adversary[(node, adversary, mode)]
        except KeyError:
            raise MissingGainEntry(
                f"no adversary gain for ({node}, adversary {adversary}, mode {mode})"
            ) from None


class _NetworkArrays:
    """Dense array views of a network, used by the vectorized planners.

    Built lazily; index order follows the declaration order of nodes and
    adversaries so results are reproducible.
    """

    def __init__(self, net: "NetworkInstance") -> None:
        nodes, advs = net.nodes, net.adversaries
        m = net.num_modes
        self.node_ids = tuple(n.id for n in nodes)
        self.adv_ids = tuple(a.id for a in advs)
        self.node_index = {nid: i for i, nid in enumerate(self.node_ids)}
        self.adv_index = {aid: i for i, aid in enumerate(self.adv_ids)}
        self.pos = np.array([[n.pos.x, n.pos.y] for n in nodes], dtype=float)
        self.adv_pos = np.array([[a.pos.x, a.pos.y] for a in advs], dtype=float)
        self.noise = np.array([n.noise_var for n in nodes], dtype=float)
        self.adv_noise = np.array([a.noise_var for a in advs], dtype=float)

        n = len(nodes)
        k = len(advs)
        fg = np.zeros((n, n, m), dtype=float)
        av = np.zeros((n, k, m), dtype=float)
        asig = np.zeros((n, k, m), dtype=float)
        for (u, v, mode), g in net.gains.friendly.items():
            fg[self.node_index[u], self.node_index[v], mode] = g
        for (u, w, mode), entry in net.gains.adversary.items():
            av[self.node_index[u], self.adv_index[w], mode] = entry.v
            asig[self.node_index[u], self.adv_index[w], mode] = entry.sigma_err
        self.fg = fg
        self.adv_v = av
        self.adv_sig = asig

        dx = self.pos[:, None, :] - self.pos[None, :, :]
        self.dist = np.hypot(dx[..., 0], dx[..., 1])
        ax = self.pos[:, None, :] - self.adv_pos[None, :, :]
        self.adv_dist = np.hypot(ax[..., 0], ax[..., 1])


@dataclass(frozen=True)
class NetworkInstance:
    """A validated network: construct through :func:`build_network`."""

    nodes: tuple[FriendlyNode, ...]
    adversaries: tuple[Adversary, ...]
    gains: GainTable
    alpha: float
    num_modes: int
    source: int
    dest: int

    @cached_property
    def node_by_id(self) -> dict[int, FriendlyNode]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def adversary_by_id(self) -> dict[int, Adversary]:
        return {a.id: a for a in self.adversaries}

    @cached_property
    def arrays(self) -> _NetworkArrays:
        return _NetworkArrays(self)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_adversaries(self) -> int:
        return len(self.adversaries)


def _check_noise(noise_var: Iterable[float], owner: str, num_modes: int) -> None:
    noise = tuple(noise_var)
    if len(noise) != num_modes:
        raise NetworkValidationError(
            f"{owner}: expected {num_modes} per-mode noise variances, got {len(noise)}"
        )
    for s2 in noise:
        if not (math.isfinite(s2) and s2 > 0.0):
            raise NonPositiveNoise(f"{owner}: noise variance {s2!r} must be finite and > 0")


def build_network(
    nodes: Iterable[FriendlyNode],
    adversaries: Iterable[Adversary],
    gains: GainTable,
    alpha: float,
    source: int,
    dest: int,
) -> NetworkInstance:
    """Validate all inputs eagerly and assemble an immutable instance.

    Raises :class:`DuplicateId`, :class:`CoLocatedEntities`,
    :class:`MissingGainEntry`, :class:`NonPositiveNoise`,
    :class:`SourceEqualsDest`, :class:`InvalidGain`, or the generic
    :class:`NetworkValidationError` on structural problems.
    """
    nodes = tuple(nodes)
    adversaries = tuple(adversaries)
    if len(nodes) < 2:
        raise NetworkValidationError("a network needs at least a source and a destination")
    if not adversaries:
        raise NetworkValidationError("a network needs at least one adversary")
    if not (math.isfinite(alpha) and alpha >= 2.0):
        raise NetworkValidationError(f"path-loss exponent {alpha!r} must be finite and >= 2")

    num_modes = len(nodes[0].noise_var)
    if num_modes < 1:
        raise NetworkValidationError("at least one mode is required")

    node_ids = [n.id for n in nodes]
    adv_ids = [a.id for a in adversaries]
    if len(set(node_ids)) != len(node_ids):
        raise DuplicateId("friendly node ids are not unique")
    if len(set(adv_ids)) != len(adv_ids):
        raise DuplicateId("adversary ids are not unique")

    if source == dest:
        raise SourceEqualsDest(f"source and destination are both {source}")
    if source not in set(node_ids) or dest not in set(node_ids):
        raise NetworkValidationError("source and dest must be existing node ids")

    for n in nodes:
        _check_noise(n.noise_var, f"node {n.id}", num_modes)
        if not (math.isfinite(n.pos.x) and math.isfinite(n.pos.y)):
            raise NetworkValidationError(f"node {n.id}: position must be finite")
    for a in adversaries:
        _check_noise(a.noise_var, f"adversary {a.id}", num_modes)
        if not (math.isfinite(a.pos.x) and math.isfinite(a.pos.y)):
            raise NetworkValidationError(f"adversary {a.id}: position must be finite")

    entities = [(f"node {n.id}", n.pos) for n in nodes]
    entities += [(f"adversary {a.id}", a.pos) for a in adversaries]
    for i, (name_a, pa) in enumerate(entities):
        for name_b, pb in entities[i + 1 :]:
            if distance(pa, pb) == 0.0:
                raise CoLocatedEntities(f"{name_a} and {name_b} are co-located at ({pa.x}, {pa.y})")

    expected_friendly = {
        (u, v, m) for u in node_ids for v in node_ids if u != v for m in range(num_modes)
    }
    got_friendly = set(gains.friendly.keys())
    missing = expected_friendly - got_friendly
    if missing:
        raise MissingGainEntry(f"friendly gain table is missing {len(missing)} entries, e.g. {sorted(missing)[0]}")
    extra = got_friendly - expected_friendly
    if extra:
        raise NetworkValidationError(f"friendly gain table has unexpected keys, e.g. {sorted(extra)[0]}")

    expected_adv = {(u, w, m) for u in node_ids for w in adv_ids for m in range(num_modes)}
    got_adv = set(gains.adversary.keys())
    missing = expected_adv - got_adv
    if missing:
        raise MissingGainEntry(f"adversary gain table is missing {len(missing)} entries, e.g. {sorted(missing)[0]}")
    extra = got_adv - expected_adv
    if extra:
        raise NetworkValidationError(f"adversary gain table has unexpected keys, e.g. {sorted(extra)[0]}")

    for key, g in gains.friendly.items():
        if not (math.isfinite(g) and g >= 0.0):
            raise InvalidGain(f"friendly gain {g!r} at {key} must be finite and >= 0")
    for key, entry in gains.adversary.items():
        if not (math.isfinite(entry.v) and entry.v >= 0.0):
            raise InvalidGain(f"adversary known component {entry.v!r} at {key} must be finite and >= 0")
        if not (math.isfinite(entry.sigma_err) and entry.sigma_err >= 0.0):
            raise InvalidGain(f"adversary error std {entry.sigma_err!r} at {key} must be finite and >= 0")

    return NetworkInstance(
        nodes=nodes,
        adversaries=adversaries,
        gains=gains,
        alpha=float(alpha),
        num_modes=num_modes,
        source=source,
        dest=dest,
    )


@dataclass(frozen=True)
class RoutePlan:
    """An ordered set of links with per-link budget shares and mode powers.

    ``links`` must form a simple source-to-dest path.  ``delta_per_link``
    holds each link's covertness share, ``powers`` the per-mode transmit
    powers on each link, and ``path_capacity`` the planned capacity in
    nats per symbol.  ``algorithm`` tags how the plan was produced
    (``het-opt``, ``per-link-dep``, ``single-mode-<m>``, ``brute-force``).
    """

    links: tuple[tuple[int, int], ...]
    delta_per_link: tuple[float, ...]
    powers: tuple[tuple[float, ...], ...]
    path_capacity: float
    algorithm: str
    budget: "CovertBudget"
    adversary_mode: str = "single"
    csi_variant: str = "known"

    @property
    def hops(self) -> int:
        return len(self.links)

    @property
    def path_nodes(self) -> tuple[int, ...]:
        if not self.links:
            return ()
        return (self.links[0][0],) + tuple(dst for _, dst in self.links)


def validate_route_plan(net: NetworkInstance, plan: RoutePlan) -> None:
    """Check that a plan's links form a simple source-to-dest path on ``net``.

    Raises :class:`InvalidRoutePlan` on any structural violation.
    """
    if not plan.links:
        raise InvalidRoutePlan("plan has no links")
    if len(plan.delta_per_link) != len(plan.links) or len(plan.powers) != len(plan.links):
        raise InvalidRoutePlan("per-link fields must have one entry per link")
    known = set(net.node_by_id)
    for src, dst in plan.links:
        if src not in known or dst not in known:
            raise InvalidRoutePlan(f"link ({src}, {dst}) references an unknown node id")
        if src == dst:
            raise InvalidRoutePlan(f"link ({src}, {dst}) is a self-loop")
    if plan.links[0][0] != net.source:
        raise InvalidRoutePlan(f"path starts at {plan.links[0][0]}, expected source {net.source}")
    if plan.links[-1][1] != net.dest:
        raise InvalidRoutePlan(f"path ends at {plan.links[-1][1]}, expected dest {net.dest}")
    for (_, a), (b, _) in zip(plan.links, plan.links[1:]):
        if a != b:
            raise InvalidRoutePlan(f"links are not contiguous: hop ends at {a}, next starts at {b}")
    seq = plan.path_nodes
    if len(set(seq)) != len(seq):
        raise InvalidRoutePlan("path visits a node more than once")
    for i, d in enumerate(plan.delta_per_link):
        if not (math.isfinite(d) and d > 0.0):
            raise InvalidRoutePlan(f"link {i}: covertness share {d!r} must be finite and > 0")
    for i, pw in enumerate(plan.powers):
        if len(pw) != net.num_modes:
            raise InvalidRoutePlan(f"link {i}: expected {net.num_modes} mode powers, got {len(pw)}")
        if any(not math.isfinite(p) or p < 0.0 for p in pw):
            raise InvalidRoutePlan(f"link {i}: powers must be finite and >= 0")

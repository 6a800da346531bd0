"""Scenario generation and Monte Carlo experiment sweeps.

Networks are generated on a rectangular region with the source and
destination pinned to opposite corners and relays placed uniformly at
random.  Every trial draws from counter-based random streams derived as
a pure function of (master seed, sweep point, trial index), so results
are reproducible bit-for-bit regardless of how trials are scheduled.

Comparisons across sweep values use common random numbers: the node
count, adversary count, and placement policy are deliberately excluded
from the stream derivation, and draws are ordered so that a trial's
network at a larger node count extends the same trial's network at a
smaller one (extra relays appended, existing channels untouched), and
its adversary set extends the smaller adversary set.  Capacity is then
pointwise monotone across those sweeps within a trial, which sharpens
trend comparisons without changing any marginal distribution.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np

from .channels import ChannelSpec, ModeChannel, rayleigh_amplitudes
from .errors import NoFeasiblePath, PlacementInfeasible
from .fileio import dumps_json, format_float, load_json, write_text
from .metrics import CovertBudget, gamma_table
from .model import (
    Adversary,
    CsiEntry,
    FriendlyNode,
    GainTable,
    NetworkInstance,
    Position,
    build_network,
    distance,
)
from .routing import het_opt, per_link_dep, single_mode_baseline

_PLACEMENTS = ("random", "intelligent")
_STUDIES = ("sd-distance", "sw-distance")
_PLACEMENT_RETRIES = 10_000
_MIN_SEPARATION = 1e-9  # resample threshold for generated points


@dataclass(frozen=True)
class GeometryOverrides:
    """Optional fixed geometry and the single-link study configuration."""

    source: tuple[float, float] | None = None
    dest: tuple[float, float] | None = None
    willies: tuple[tuple[float, float], ...] | None = None
    study: str | None = None
    distances: tuple[float, ...] = ()
    dest_radius: float = 50.0


@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep definition: geometry, channel statistics, and algorithms."""

    n_nodes: tuple[int, ...]
    trials: int
    master_seed: int = 0
    region: tuple[float, float] = (100.0, 100.0)
    n_adversaries: int = 1
    placement: str = "random"
    min_dist: float = 25.0
    alpha: tuple[float, ...] = (2.0,)
    budget: CovertBudget = CovertBudget(0.01, 500)
    channel: ChannelSpec = ChannelSpec.two_mode_default()
    algorithms: tuple[str, ...] = ("het-opt",)
    max_hops: int = 10
    csi_variant: str = "known"
    geometry: GeometryOverrides = GeometryOverrides()

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        w, h = self.region
        if not (w > 0 and h > 0):
            raise ValueError("region dimensions must be positive")
        if self.placement not in _PLACEMENTS:
            raise ValueError(f"placement must be one of {_PLACEMENTS}")
        if self.min_dist >= math.hypot(w, h):
            raise ValueError("min_dist must be smaller than the region diagonal")
        if self.n_adversaries < 1:
            raise ValueError("at least one adversary is required")
        if not self.n_nodes or any(n < 2 for n in self.n_nodes):
            raise ValueError("every swept node count must be >= 2")
        if not self.alpha or any(a < 2 for a in self.alpha):
            raise ValueError("every swept path-loss exponent must be >= 2")
        if self.max_hops < 1:
            raise ValueError("max_hops must be >= 1")
        allowed = {"het-opt", "per-link-dep"} | {
            f"mode-{m + 1}" for m in range(self.channel.num_modes)
        }
        bad = [a for a in self.algorithms if a not in allowed]
        if bad:
            raise ValueError(f"unknown algorithms {bad}; allowed: {sorted(allowed)}")
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        if self.csi_variant != "known" and self.n_adversaries > 1:
            raise ValueError("uncertain-CSI experiments support a single adversary only")
        if self.geometry.study is not None:
            if self.geometry.study not in _STUDIES:
                raise ValueError(f"study must be one of {_STUDIES}")
            if not self.geometry.distances:
                raise ValueError("a single-link study needs swept distances")
            if self.n_adversaries != 1:
                raise ValueError("single-link studies use exactly one adversary")


@dataclass(frozen=True)
class TrialRecord:
    """One (sweep point, trial, algorithm) outcome."""

    experiment_id: str
    sweep_key: str
    sweep_value: float
    trial: int
    algorithm: str
    n_nodes: int
    n_adversaries: int
    alpha: float
    capacity_nats: float
    hops: int
    feasible: bool
    sub_seed: int


@dataclass(frozen=True)
class SummaryRow:
    experiment_id: str
    sweep_key: str
    sweep_value: float
    n_nodes: int
    n_adversaries: int
    alpha: float
    algorithm: str
    trials: int
    mean_capacity_nats: float
    stderr_capacity_nats: float
    infeasible_fraction: float


@dataclass(frozen=True)
class ExperimentResult:
    records: tuple[TrialRecord, ...]
    summary: tuple[SummaryRow, ...]


# ---------------------------------------------------------------------------
# Seed derivation and random streams
# ---------------------------------------------------------------------------


def derive_subseed(master_seed: int, token: str, trial_index: int) -> int:
    """64-bit sub-seed, a pure function of (master seed, sweep point, trial)."""
    digest = hashlib.sha256(f"{master_seed}|{token}|{trial_index}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


def _sweep_token(study: str | None, alpha: float, dist: float | None) -> str:
    # The node count is intentionally absent: larger networks extend
    # smaller ones within a trial (common random numbers).
    if study is not None:
        return f"{study}|d={format_float(dist)}|a={format_float(alpha)}"
    return f"net|a={format_float(alpha)}"


class _TrialStreams:
    """Counter-based streams for one trial, one per independent purpose.

    Every stream draws in an order where entities added by a larger
    sweep value (extra relays, extra adversaries) consume draws strictly
    after the shared prefix, so networks nest across sweep values.
    """

    def __init__(self, subseed: int, n_willies: int, n_modes: int) -> None:
        mk = lambda ss: np.random.Generator(np.random.Philox(ss))
        root = np.random.SeedSequence(subseed)
        pos_ss, relay_ss, noise_ss, fg_parent, adv_parent = root.spawn(5)
        self.adv_pos = mk(pos_ss)
        self.relays = mk(relay_ss)
        self.noise = mk(noise_ss)
        self.friendly = [mk(ss) for ss in fg_parent.spawn(n_modes)]
        self.adversary = [
            [mk(ss) for ss in willie_ss.spawn(n_modes)]
            for willie_ss in adv_parent.spawn(n_willies)
        ]


def _resolved_point(spec: ExperimentSpec) -> tuple[int, float]:
    if len(spec.n_nodes) != 1 or len(spec.alpha) != 1:
        raise ValueError(
            "generation needs a resolved sweep point; use replace() to pin n_nodes and alpha"
        )
    return spec.n_nodes[0], spec.alpha[0]


# ---------------------------------------------------------------------------
# Network generation
# ---------------------------------------------------------------------------


def _place_adversaries_rng(spec: ExperimentSpec, rng: np.random.Generator) -> tuple[Position, ...]:
    if spec.geometry.willies is not None:
        return tuple(Position(float(x), float(y)) for x, y in spec.geometry.willies)
    w, h = spec.region
    placed: list[Position] = []
    for k in range(spec.n_adversaries):
        for _ in range(_PLACEMENT_RETRIES):
            p = Position(float(rng.uniform(0.0, w)), float(rng.uniform(0.0, h)))
            if spec.placement == "random" or all(
                distance(p, q) >= spec.min_dist for q in placed
            ):
                placed.append(p)
                break
        else:
            raise PlacementInfeasible(
                f"could not place adversary {k} with min separation {spec.min_dist} "
                f"after {_PLACEMENT_RETRIES} draws"
            )
    return tuple(placed)


def place_adversaries(spec: ExperimentSpec, trial_index: int) -> tuple[Position, ...]:
    """Adversary positions for one trial: uniform, or spaced by min_dist.

    Deterministic given (master seed, sweep point, trial index); the same
    positions are used by :func:`generate_network` for that trial, and a
    larger adversary count extends the same trial's smaller set.
    """
    if len(spec.alpha) != 1:
        raise ValueError("placement needs a resolved sweep point (single alpha)")
    sub = derive_subseed(
        spec.master_seed, _sweep_token(None, spec.alpha[0], None), trial_index
    )
    streams = _TrialStreams(sub, spec.n_adversaries, spec.channel.num_modes)
    return _place_adversaries_rng(spec, streams.adv_pos)


def _draw_position_avoiding(
    rng: np.random.Generator, region: tuple[float, float], avoid: Sequence[Position]
) -> Position:
    w, h = region
    while True:
        p = Position(float(rng.uniform(0.0, w)), float(rng.uniform(0.0, h)))
        if all(distance(p, q) > _MIN_SEPARATION for q in avoid):
            return p


def _node_noise(spec: ExperimentSpec, rng: np.random.Generator, count: int) -> list[tuple[float, ...]]:
    # node-major draw order so extra nodes extend the stream
    out = []
    for _ in range(count):
        row = []
        for mc in spec.channel.modes:
            low, high = mc.friendly_noise
            row.append(float(rng.uniform(low, high)))
        out.append(tuple(row))
    return out


def _friendly_gains(
    spec: ExperimentSpec, streams: _TrialStreams, node_ids: Sequence[int]
) -> dict[tuple[int, int, int], float]:
    """Symmetric per-pair amplitudes; constant modes consume no draws.

    Pairs are drawn newest-node-last so a larger network's draws extend a
    smaller one's.
    """
    gains: dict[tuple[int, int, int], float] = {}
    pairs = [
        (node_ids[a], node_ids[b]) for b in range(1, len(node_ids)) for a in range(b)
    ]
    for m, mc in enumerate(spec.channel.modes):
        if mc.kind == "constant":
            for u, v in pairs:
                gains[(u, v, m)] = mc.gain
                gains[(v, u, m)] = mc.gain
        else:
            amps = rayleigh_amplitudes(streams.friendly[m], size=len(pairs))
            for (u, v), g in zip(pairs, amps):
                gains[(u, v, m)] = float(g)
                gains[(v, u, m)] = float(g)
    return gains


def _adversary_gains(
    spec: ExperimentSpec,
    streams: _TrialStreams,
    node_ids: Sequence[int],
    adv_ids: Sequence[int],
) -> dict[tuple[int, int, int], CsiEntry]:
    gains: dict[tuple[int, int, int], CsiEntry] = {}
    for k, wid in enumerate(adv_ids):
        for m, mc in enumerate(spec.channel.modes):
            if mc.kind == "constant":
                for u in node_ids:
                    gains[(u, wid, m)] = CsiEntry.known(mc.gain)
            else:
                amps = rayleigh_amplitudes(streams.adversary[k][m], size=len(node_ids))
                for u, g in zip(node_ids, amps):
                    gains[(u, wid, m)] = CsiEntry.known(float(g))
    return gains


def generate_network(spec: ExperimentSpec, trial_index: int) -> NetworkInstance:
    """One random network: corner source/dest, uniform relays, sampled gains.

    Node ids are 0 (source), 1 (destination), 2 .. n-1 (relays).  Points
    generated too close to an existing entity are resampled.  Requires a
    resolved sweep point (single n, single alpha).
    """
    if spec.geometry.study is not None:
        raise ValueError("single-link studies build their own geometry; see single_link_study")
    n, alpha = _resolved_point(spec)
    w, h = spec.region
    sub = derive_subseed(spec.master_seed, _sweep_token(None, alpha, None), trial_index)
    streams = _TrialStreams(sub, spec.n_adversaries, spec.channel.num_modes)

    src_pos = Position(*(spec.geometry.source or (1.0, 1.0)))
    dst_pos = Position(*(spec.geometry.dest or (w - 1.0, h - 1.0)))
    willie_pos = _place_adversaries_rng(spec, streams.adv_pos)
    positions = [src_pos, dst_pos]
    for _ in range(n - 2):
        positions.append(
            _draw_position_avoiding(streams.relays, spec.region, [*positions, *willie_pos])
        )

    node_ids = list(range(n))
    noise = _node_noise(spec, streams.noise, n)
    nodes = [
        FriendlyNode(id=i, pos=p, noise_var=s)
        for i, (p, s) in enumerate(zip(positions, noise))
    ]
    adv_ids = list(range(len(willie_pos)))
    adversaries = [
        Adversary(
            id=k,
            pos=p,
            noise_var=tuple(mc.adversary_noise for mc in spec.channel.modes),
        )
        for k, p in zip(adv_ids, willie_pos)
    ]
    gains = GainTable(
        friendly=_friendly_gains(spec, streams, node_ids),
        adversary=_adversary_gains(spec, streams, node_ids, adv_ids),
    )
    return build_network(nodes, adversaries, gains, alpha, source=0, dest=1)


def _single_link_network(spec: ExperimentSpec, dist: float, trial_index: int) -> NetworkInstance:
    """Two-node network for a distance study."""
    study = spec.geometry.study
    alpha = spec.alpha[0]
    w, h = spec.region
    sub = derive_subseed(spec.master_seed, _sweep_token(study, alpha, dist), trial_index)
    streams = _TrialStreams(sub, 1, spec.channel.num_modes)

    src_pos = Position(*(spec.geometry.source or (w / 2.0, h / 2.0)))
    if study == "sd-distance":
        theta = float(streams.relays.uniform(0.0, 2.0 * math.pi))
        dst_pos = Position(src_pos.x + dist * math.cos(theta), src_pos.y + dist * math.sin(theta))
        willie_pos = _place_adversaries_rng(spec, streams.adv_pos)
    else:  # sw-distance
        theta_w = float(streams.adv_pos.uniform(0.0, 2.0 * math.pi))
        willie_pos = (
            Position(src_pos.x + dist * math.cos(theta_w), src_pos.y + dist * math.sin(theta_w)),
        )
        r = spec.geometry.dest_radius
        theta = float(streams.relays.uniform(0.0, 2.0 * math.pi))
        dst_pos = Position(src_pos.x + r * math.cos(theta), src_pos.y + r * math.sin(theta))

    node_ids = [0, 1]
    noise = _node_noise(spec, streams.noise, 2)
    nodes = [
        FriendlyNode(id=0, pos=src_pos, noise_var=noise[0]),
        FriendlyNode(id=1, pos=dst_pos, noise_var=noise[1]),
    ]
    adversaries = [
        Adversary(
            id=0,
            pos=willie_pos[0],
            noise_var=tuple(mc.adversary_noise for mc in spec.channel.modes),
        )
    ]
    gains = GainTable(
        friendly=_friendly_gains(spec, streams, node_ids),
        adversary=_adversary_gains(spec, streams, node_ids, [0]),
    )
    return build_network(nodes, adversaries, gains, alpha, source=0, dest=1)


# ---------------------------------------------------------------------------
# Running experiments
# ---------------------------------------------------------------------------


def _run_algorithms(spec: ExperimentSpec, net: NetworkInstance) -> list[tuple[str, float, int, bool]]:
    """Capacity, hop count, and feasibility for each requested algorithm.

    All algorithms share one coefficient table per trial so capacity
    comparisons within a trial see identical link figures.
    """
    table = gamma_table(net, None, spec.csi_variant)
    out = []
    for alg in spec.algorithms:
        try:
            if alg == "het-opt":
                plan = het_opt(net, spec.budget, csi_variant=spec.csi_variant, table=table)
            elif alg == "per-link-dep":
                plan = per_link_dep(
                    net,
                    spec.budget,
                    max_hops=spec.max_hops,
                    csi_variant=spec.csi_variant,
                    table=table,
                )
            else:
                mode = int(alg.split("-")[1]) - 1
                plan = single_mode_baseline(
                    net, mode, spec.budget, csi_variant=spec.csi_variant, table=table
                )
            out.append((alg, plan.path_capacity, plan.hops, True))
        except NoFeasiblePath:
            out.append((alg, 0.0, 0, False))
    return out


def _network_batch(args) -> list[TrialRecord]:
    spec, exp_id, sweep_key, n, alpha, t_start, t_end = args
    resolved = replace(spec, n_nodes=(n,), alpha=(alpha,))
    sweep_value = float(n) if sweep_key == "n_nodes" else float(alpha)
    token = _sweep_token(None, alpha, None)
    records = []
    for t in range(t_start, t_end):
        sub = derive_subseed(spec.master_seed, token, t)
        net = generate_network(resolved, t)
        for alg, cap, hops, ok in _run_algorithms(resolved, net):
            records.append(
                TrialRecord(
                    experiment_id=exp_id,
                    sweep_key=sweep_key,
                    sweep_value=sweep_value,
                    trial=t,
                    algorithm=alg,
                    n_nodes=n,
                    n_adversaries=spec.n_adversaries,
                    alpha=alpha,
                    capacity_nats=cap,
                    hops=hops,
                    feasible=ok,
                    sub_seed=sub,
                )
            )
    return records


def _study_batch(args) -> list[TrialRecord]:
    spec, exp_id, dist, t_start, t_end = args
    token = _sweep_token(spec.geometry.study, spec.alpha[0], dist)
    records = []
    for t in range(t_start, t_end):
        sub = derive_subseed(spec.master_seed, token, t)
        net = _single_link_network(spec, dist, t)
        for alg, cap, hops, ok in _run_algorithms(spec, net):
            records.append(
                TrialRecord(
                    experiment_id=exp_id,
                    sweep_key="distance",
                    sweep_value=float(dist),
                    trial=t,
                    algorithm=alg,
                    n_nodes=2,
                    n_adversaries=1,
                    alpha=spec.alpha[0],
                    capacity_nats=cap,
                    hops=hops,
                    feasible=ok,
                    sub_seed=sub,
                )
            )
    return records


def _map_tasks(worker, tasks, threads: int) -> Iterator[list[TrialRecord]]:
    if threads <= 1:
        for task in tasks:
            yield worker(task)
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(worker, tasks, chunksize=1)


def iter_experiment_batches(
    spec: ExperimentSpec, threads: int = 1, batch_size: int = 32
) -> Iterator[list[TrialRecord]]:
    """Record batches in deterministic order, independent of `threads`."""
    exp_id = spec_hash(spec)
    blocks = [
        (t0, min(t0 + batch_size, spec.trials)) for t0 in range(0, spec.trials, batch_size)
    ]
    if spec.geometry.study is not None:
        tasks = [
            (spec, exp_id, float(d), t0, t1)
            for d in spec.geometry.distances
            for t0, t1 in blocks
        ]
        yield from _map_tasks(_study_batch, tasks, threads)
        return
    sweep_key = "alpha" if len(spec.alpha) > 1 and len(spec.n_nodes) == 1 else "n_nodes"
    tasks = [
        (spec, exp_id, sweep_key, n, a, t0, t1)
        for n in spec.n_nodes
        for a in spec.alpha
        for t0, t1 in blocks
    ]
    yield from _map_tasks(_network_batch, tasks, threads)


def summarize(records: Iterable[TrialRecord]) -> tuple[SummaryRow, ...]:
    """Mean capacity and standard error per (sweep point, algorithm)."""
    groups: dict[tuple, list[TrialRecord]] = {}
    for r in records:
        key = (r.sweep_key, r.sweep_value, r.n_nodes, r.n_adversaries, r.alpha, r.algorithm)
        groups.setdefault(key, []).append(r)
    rows = []
    for key, recs in groups.items():
        caps = np.array([r.capacity_nats for r in sorted(recs, key=lambda r: r.trial)])
        mean = float(caps.sum() / caps.size)
        stderr = float(caps.std(ddof=1) / math.sqrt(caps.size)) if caps.size > 1 else 0.0
        rows.append(
            SummaryRow(
                experiment_id=recs[0].experiment_id,
                sweep_key=key[0],
                sweep_value=key[1],
                n_nodes=key[2],
                n_adversaries=key[3],
                alpha=key[4],
                algorithm=key[5],
                trials=len(recs),
                mean_capacity_nats=mean,
                stderr_capacity_nats=stderr,
                infeasible_fraction=sum(not r.feasible for r in recs) / len(recs),
            )
        )
    return tuple(rows)


def run_experiment(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Run the full sweep; trials are independent work units.

    Sub-seeds derive from (master seed, sweep point, trial index), so the
    result is identical for any worker count.  Infeasible trials are
    recorded with capacity 0 and flagged, never dropped.
    """
    if spec.geometry.study is not None:
        raise ValueError("this spec defines a single-link study; use single_link_study")
    records: list[TrialRecord] = []
    for batch in iter_experiment_batches(spec, threads):
        records.extend(batch)
    return ExperimentResult(records=tuple(records), summary=summarize(records))


def single_link_study(spec: ExperimentSpec, threads: int = 1) -> ExperimentResult:
    """Distance sweep on an isolated source-destination link.

    ``sd-distance`` places the destination at the swept radius (uniform
    angle) around the source with the adversary uniform in the region;
    ``sw-distance`` places the adversary at the swept radius and the
    destination at the configured default radius.
    """
    if spec.geometry.study is None:
        raise ValueError("spec.geometry.study must be set for a single-link study")
    records: list[TrialRecord] = []
    for batch in iter_experiment_batches(spec, threads):
        records.extend(batch)
    return ExperimentResult(records=tuple(records), summary=summarize(records))


# ---------------------------------------------------------------------------
# Spec serialization, hashing, CSV emission
# ---------------------------------------------------------------------------


def spec_to_dict(spec: ExperimentSpec) -> dict:
    d = {
        "region": list(spec.region),
        "n_nodes": list(spec.n_nodes),
        "n_adversaries": spec.n_adversaries,
        "placement": spec.placement,
        "min_dist": spec.min_dist,
        "alpha": list(spec.alpha),
        "budget": {"epsilon": spec.budget.epsilon, "n": spec.budget.n},
        "channel": {
            "modes": [
                {
                    "kind": mc.kind,
                    "gain": mc.gain,
                    "friendly_noise": list(mc.friendly_noise),
                    "adversary_noise": mc.adversary_noise,
                }
                for mc in spec.channel.modes
            ]
        },
        "trials": spec.trials,
        "master_seed": spec.master_seed,
        "algorithms": list(spec.algorithms),
        "max_hops": spec.max_hops,
        "csi_variant": spec.csi_variant,
    }
    g = spec.geometry
    if g != GeometryOverrides():
        geom: dict = {}
        if g.source is not None:
            geom["source"] = list(g.source)
        if g.dest is not None:
            geom["dest"] = list(g.dest)
        if g.willies is not None:
            geom["willies"] = [list(p) for p in g.willies]
        if g.study is not None:
            geom["study"] = g.study
            geom["distances"] = list(g.distances)
            geom["dest_radius"] = g.dest_radius
        d["geometry"] = geom
    return d


def spec_from_dict(d: dict) -> ExperimentSpec:
    defaults = ExperimentSpec(n_nodes=(2,), trials=1)
    budget = d.get("budget", {})
    channel = d.get("channel")
    if channel is not None:
        chan = ChannelSpec(modes=tuple(_mode_channel_from_dict(mc) for mc in channel["modes"]))
    else:
        chan = defaults.channel
    g = d.get("geometry", {})
    geometry = GeometryOverrides(
        source=tuple(g["source"]) if "source" in g else None,
        dest=tuple(g["dest"]) if "dest" in g else None,
        willies=tuple(tuple(p) for p in g["willies"]) if "willies" in g else None,
        study=g.get("study"),
        distances=tuple(float(x) for x in g.get("distances", ())),
        dest_radius=float(g.get("dest_radius", 50.0)),
    )
    return ExperimentSpec(
        n_nodes=tuple(int(n) for n in d["n_nodes"]),
        trials=int(d["trials"]),
        master_seed=int(d.get("master_seed", 0)),
        region=tuple(float(x) for x in d.get("region", (100.0, 100.0))),
        n_adversaries=int(d.get("n_adversaries", 1)),
        placement=d.get("placement", "random"),
        min_dist=float(d.get("min_dist", 25.0)),
        alpha=tuple(float(a) for a in d.get("alpha", (2.0,))),
        budget=CovertBudget(
            float(budget.get("epsilon", 0.01)), int(budget.get("n", 500))
        ),
        channel=chan,
        algorithms=tuple(d.get("algorithms", ("het-opt",))),
        max_hops=int(d.get("max_hops", 10)),
        csi_variant=d.get("csi_variant", "known"),
        geometry=geometry,
    )


def _mode_channel_from_dict(mc: dict) -> ModeChannel:
    return ModeChannel(
        kind=mc["kind"],
        gain=float(mc.get("gain", 1.0)),
        friendly_noise=tuple(float(x) for x in mc.get("friendly_noise", (1.0, 4.0))),
        adversary_noise=float(mc.get("adversary_noise", 1.0)),
    )


def load_spec(path) -> ExperimentSpec:
    return spec_from_dict(load_json(path))


def save_spec(spec: ExperimentSpec, path) -> None:
    write_text(path, dumps_json(spec_to_dict(spec)) + "\n")


def spec_hash(spec: ExperimentSpec) -> str:
    canonical = dumps_json(spec_to_dict(spec), indent=None, sort_keys=True)
    return hashlib.sha256(canonical.encode()).hexdigest()[:12]


RECORD_COLUMNS = (
    "experiment_id",
    "sweep_key",
    "sweep_value",
    "trial",
    "algorithm",
    "n_nodes",
    "n_adversaries",
    "alpha",
    "capacity_nats",
    "hops",
    "feasible",
    "sub_seed",
)

SUMMARY_COLUMNS = (
    "experiment_id",
    "sweep_key",
    "sweep_value",
    "n_nodes",
    "n_adversaries",
    "alpha",
    "algorithm",
    "trials",
    "mean_capacity_nats",
    "stderr_capacity_nats",
    "infeasible_fraction",
)


def record_to_row(r: TrialRecord) -> list[str]:
    return [
        r.experiment_id,
        r.sweep_key,
        format_float(r.sweep_value),
        str(r.trial),
        r.algorithm,
        str(r.n_nodes),
        str(r.n_adversaries),
        format_float(r.alpha),
        format_float(r.capacity_nats),
        str(r.hops),
        "1" if r.feasible else "0",
        str(r.sub_seed),
    ]


def summary_to_row(s: SummaryRow) -> list[str]:
    return [
        s.experiment_id,
        s.sweep_key,
        format_float(s.sweep_value),
        str(s.n_nodes),
        str(s.n_adversaries),
        format_float(s.alpha),
        s.algorithm,
        str(s.trials),
        format_float(s.mean_capacity_nats),
        format_float(s.stderr_capacity_nats),
        format_float(s.infeasible_fraction),
    ]


def write_records_csv(f: TextIO, records: Iterable[TrialRecord], header: bool = True) -> None:
    if header:
        f.write(",".join(RECORD_COLUMNS) + "\n")
    for r in records:
        f.write(",".join(record_to_row(r)) + "\n")


def write_summary_csv(f: TextIO, rows: Iterable[SummaryRow]) -> None:
    f.write(",".join(SUMMARY_COLUMNS) + "\n")
    for s in rows:
        f.write(",".join(summary_to_row(s)) + "\n")

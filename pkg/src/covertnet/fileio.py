"""File formats: deterministic JSON, network and plan files, graph export.

Every float in emitted files is printed with 17 significant digits, which
round-trips IEEE doubles exactly, so repeated runs with identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .metrics import CovertBudget
from .model import (
    Adversary,
    CsiEntry,
    FriendlyNode,
    GainTable,
    NetworkInstance,
    Position,
    RoutePlan,
    build_network,
)


def format_float(x) -> str:
    """17-significant-digit decimal form; bit-stable for float64."""
    return format(float(x), ".17g")


def _emit(obj, out: list[str], indent: int | None, level: int, sort_keys: bool) -> None:
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        keys = sorted(obj) if sort_keys else list(obj)
        out.append("{")
        for i, k in enumerate(keys):
            if not isinstance(k, str):
                raise TypeError(f"JSON object keys must be strings, got {k!r}")
            if indent is not None:
                out.append("\n" + " " * indent * (level + 1))
            out.append(json.dumps(k) + ": ")
            _emit(obj[k], out, indent, level + 1, sort_keys)
            if i < len(keys) - 1:
                out.append("," if indent is not None else ", ")
        if indent is not None:
            out.append("\n" + " " * indent * level)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        if len(obj) == 0:
            out.append("[]")
            return
        out.append("[")
        for i, item in enumerate(obj):
            if indent is not None:
                out.append("\n" + " " * indent * (level + 1))
            _emit(item, out, indent, level + 1, sort_keys)
            if i < len(obj) - 1:
                out.append("," if indent is not None else ", ")
        if indent is not None:
            out.append("\n" + " " * indent * level)
        out.append("]")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, bool) or isinstance(obj, np.bool_):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            raise ValueError(f"cannot emit non-finite float {obj!r}")
        out.append(format_float(obj))
    elif obj is None:
        out.append("null")
    else:
        raise TypeError(f"cannot emit {type(obj).__name__} as JSON")


def dumps_json(obj, indent: int | None = 2, sort_keys: bool = False) -> str:
    """JSON text with floats at 17 significant digits."""
    out: list[str] = []
    _emit(obj, out, indent, 0, sort_keys)
    return "".join(out)


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# Network files
# ---------------------------------------------------------------------------


def network_to_dict(net: NetworkInstance) -> dict:
    friendly = [
        {"src": u, "dst": v, "mode": m, "g": g}
        for (u, v, m), g in sorted(net.gains.friendly.items())
    ]
    adversary = []
    for (u, w, m), entry in sorted(net.gains.adversary.items()):
        rec: dict = {"src": u, "adv": w, "mode": m}
        if entry.is_exact:
            rec["g"] = entry.v
        else:
            rec["v"] = entry.v
            rec["sigma_err"] = entry.sigma_err
        adversary.append(rec)
    return {
        "alpha": net.alpha,
        "num_modes": net.num_modes,
        "source": net.source,
        "dest": net.dest,
        "nodes": [
            {"id": n.id, "x": n.pos.x, "y": n.pos.y, "noise_var": list(n.noise_var)}
            for n in net.nodes
        ],
        "adversaries": [
            {"id": a.id, "x": a.pos.x, "y": a.pos.y, "noise_var": list(a.noise_var)}
            for a in net.adversaries
        ],
        "friendly_gains": friendly,
        "adversary_gains": adversary,
    }


def network_from_dict(d: dict) -> NetworkInstance:
    nodes = [
        FriendlyNode(
            id=int(n["id"]),
            pos=Position(float(n["x"]), float(n["y"])),
            noise_var=tuple(float(s) for s in n["noise_var"]),
        )
        for n in d["nodes"]
    ]
    adversaries = [
        Adversary(
            id=int(a["id"]),
            pos=Position(float(a["x"]), float(a["y"])),
            noise_var=tuple(float(s) for s in a["noise_var"]),
        )
        for a in d["adversaries"]
    ]
    friendly = {
        (int(e["src"]), int(e["dst"]), int(e["mode"])): float(e["g"])
        for e in d["friendly_gains"]
    }
    adversary = {}
    for e in d["adversary_gains"]:
        key = (int(e["src"]), int(e["adv"]), int(e["mode"]))
        if "g" in e:
            adversary[key] = CsiEntry.known(float(e["g"]))
        else:
            adversary[key] = CsiEntry.rician(float(e["v"]), float(e.get("sigma_err", 0.0)))
    return build_network(
        nodes,
        adversaries,
        GainTable(friendly=friendly, adversary=adversary),
        alpha=float(d["alpha"]),
        source=int(d["source"]),
        dest=int(d["dest"]),
    )


def load_network(path) -> NetworkInstance:
    return network_from_dict(load_json(path))


def save_network(net: NetworkInstance, path) -> None:
    write_text(path, dumps_json(network_to_dict(net)) + "\n")


# ---------------------------------------------------------------------------
# Plan files
# ---------------------------------------------------------------------------


def plan_to_dict(plan: RoutePlan) -> dict:
    return {
        "algorithm": plan.algorithm,
        "capacity_nats": plan.path_capacity,
        "links": [
            {"src": u, "dst": v, "delta_i": d, "powers": list(pw)}
            for (u, v), d, pw in zip(plan.links, plan.delta_per_link, plan.powers)
        ],
        "budget": {
            "epsilon": plan.budget.epsilon,
            "n": plan.budget.n,
            "delta": plan.budget.delta,
        },
        "adversary_mode": plan.adversary_mode,
        "csi_variant": plan.csi_variant,
    }


def plan_from_dict(d: dict) -> RoutePlan:
    links = tuple((int(l["src"]), int(l["dst"])) for l in d["links"])
    return RoutePlan(
        links=links,
        delta_per_link=tuple(float(l["delta_i"]) for l in d["links"]),
        powers=tuple(tuple(float(p) for p in l["powers"]) for l in d["links"]),
        path_capacity=float(d["capacity_nats"]),
        algorithm=d["algorithm"],
        budget=CovertBudget(float(d["budget"]["epsilon"]), int(d["budget"]["n"])),
        adversary_mode=d.get("adversary_mode", "single"),
        csi_variant=d.get("csi_variant", "known"),
    )


def load_plan(path) -> RoutePlan:
    return plan_from_dict(load_json(path))


def save_plan(plan: RoutePlan, path) -> None:
    write_text(path, dumps_json(plan_to_dict(plan)) + "\n")


# ---------------------------------------------------------------------------
# Plain-text graph description (consumed by the plotting package)
# ---------------------------------------------------------------------------


def graph_description_lines(net: NetworkInstance, plan: RoutePlan) -> list[str]:
    """Node positions, route edges, and per-mode power shares per edge.

    Edge lines carry the total transmit power followed by one normalized
    mode fraction per mode (fractions sum to 1 on powered edges).
    """
    lines = ["# covertnet graph v1", f"alpha {format_float(net.alpha)}", f"modes {net.num_modes}"]
    on_route = set(plan.path_nodes)
    for n in net.nodes:
        if n.id == net.source:
            role = "source"
        elif n.id == net.dest:
            role = "dest"
        else:
            role = "route" if n.id in on_route else "relay"
        lines.append(f"node {n.id} {format_float(n.pos.x)} {format_float(n.pos.y)} {role}")
    for a in net.adversaries:
        lines.append(f"adversary {a.id} {format_float(a.pos.x)} {format_float(a.pos.y)}")
    for (u, v), pw in zip(plan.links, plan.powers):
        total = sum(pw)
        fracs = [p / total if total > 0.0 else 0.0 for p in pw]
        parts = [format_float(total)] + [format_float(fr) for fr in fracs]
        lines.append(f"edge {u} {v} " + " ".join(parts))
    return lines


def write_graph_description(net: NetworkInstance, plan: RoutePlan, path) -> None:
    write_text(path, "\n".join(graph_description_lines(net, plan)) + "\n")

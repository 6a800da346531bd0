"""Readers for the experiment records CSV and the graph description file."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path


class PlotkitError(Exception):
    """Bad recipe or unusable input data."""


_NUMERIC = {
    "sweep_value": float,
    "trial": int,
    "n_nodes": int,
    "n_adversaries": int,
    "alpha": float,
    "capacity_nats": float,
    "hops": int,
    "feasible": int,
    "sub_seed": int,
}


def read_records(path) -> list[dict]:
    """Rows of a records CSV with numeric columns converted."""
    path = Path(path)
    if not path.exists():
        raise PlotkitError(f"input file not found: {path}")
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None:
            raise PlotkitError(f"{path}: empty input, no header row")
        rows = []
        for raw in reader:
            row = dict(raw)
            for col, conv in _NUMERIC.items():
                if col in row and row[col] != "":
                    row[col] = conv(row[col]) if conv is not float else float(row[col])
            rows.append(row)
    if not rows:
        raise PlotkitError(f"{path}: no data rows")
    return rows


def require_columns(rows: list[dict], needed, origin) -> None:
    missing = [c for c in needed if c not in rows[0]]
    if missing:
        raise PlotkitError(f"{origin}: missing column(s) {', '.join(missing)}")


@dataclass(frozen=True)
class GraphNode:
    id: int
    x: float
    y: float
    role: str


@dataclass(frozen=True)
class GraphEdge:
    src: int
    dst: int
    total_power: float
    mode_fractions: tuple[float, ...]


@dataclass(frozen=True)
class GraphDescription:
    alpha: float
    modes: int
    nodes: tuple[GraphNode, ...]
    adversaries: tuple[GraphNode, ...]
    edges: tuple[GraphEdge, ...]


def read_graph(path) -> GraphDescription:
    """Parse the plain-text graph description emitted by export-graph."""
    path = Path(path)
    if not path.exists():
        raise PlotkitError(f"input file not found: {path}")
    alpha = None
    modes = None
    nodes: list[GraphNode] = []
    adversaries: list[GraphNode] = []
    edges: list[GraphEdge] = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "alpha":
                alpha = float(parts[1])
            elif parts[0] == "modes":
                modes = int(parts[1])
            elif parts[0] == "node":
                nodes.append(GraphNode(int(parts[1]), float(parts[2]), float(parts[3]), parts[4]))
            elif parts[0] == "adversary":
                adversaries.append(
                    GraphNode(int(parts[1]), float(parts[2]), float(parts[3]), "adversary")
                )
            elif parts[0] == "edge":
                edges.append(
                    GraphEdge(
                        int(parts[1]),
                        int(parts[2]),
                        float(parts[3]),
                        tuple(float(x) for x in parts[4:]),
                    )
                )
            else:
                raise PlotkitError(f"{path}:{lineno}: unknown line kind {parts[0]!r}")
        except (IndexError, ValueError) as e:
            raise PlotkitError(f"{path}:{lineno}: malformed line ({e})") from e
    if modes is None or alpha is None:
        raise PlotkitError(f"{path}: missing 'alpha' or 'modes' header line")
    if not nodes or not edges:
        raise PlotkitError(f"{path}: no nodes or no edges to draw")
    for e in edges:
        if len(e.mode_fractions) != modes:
            raise PlotkitError(
                f"{path}: edge {e.src}->{e.dst} has {len(e.mode_fractions)} fractions, expected {modes}"
            )
    return GraphDescription(
        alpha=alpha,
        modes=modes,
        nodes=tuple(nodes),
        adversaries=tuple(adversaries),
        edges=tuple(edges),
    )

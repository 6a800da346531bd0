"""Figure recipes: what to draw, from which files, to which image."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .data import PlotkitError

KINDS = (
    "capacity-vs-N",
    "capacity-vs-distance",
    "path-render",
    "alpha-comparison",
    "multi-adversary",
)


@dataclass(frozen=True)
class RecordsInput:
    path: str
    label: str


@dataclass(frozen=True)
class FigureRecipe:
    kind: str
    output: str
    records: tuple[RecordsInput, ...] = ()
    graph: str | None = None
    title: str | None = None
    algorithm: str = "het-opt"  # series filter for alpha-comparison

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PlotkitError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "path-render":
            if not self.graph:
                raise PlotkitError("path-render needs a 'graph' input file")
        elif not self.records:
            raise PlotkitError(f"{self.kind} needs at least one 'records' CSV")


def _records_inputs(raw) -> tuple[RecordsInput, ...]:
    if raw is None:
        return ()
    if isinstance(raw, (str, dict)):
        raw = [raw]
    out = []
    for entry in raw:
        if isinstance(entry, str):
            out.append(RecordsInput(path=entry, label=Path(entry).stem))
        else:
            out.append(RecordsInput(path=entry["path"], label=entry.get("label", Path(entry["path"]).stem)))
    return tuple(out)


def recipe_from_dict(d: dict, base_dir: Path | None = None) -> FigureRecipe:
    def resolve(p):
        if p is None or base_dir is None:
            return p
        q = Path(p)
        return str(q if q.is_absolute() else base_dir / q)

    try:
        kind = d["kind"]
        output = resolve(d["output"])
    except KeyError as e:
        raise PlotkitError(f"recipe is missing required key {e}") from e
    records = tuple(
        RecordsInput(path=resolve(r.path), label=r.label) for r in _records_inputs(d.get("records"))
    )
    return FigureRecipe(
        kind=kind,
        output=output,
        records=records,
        graph=resolve(d.get("graph")),
        title=d.get("title"),
        algorithm=d.get("algorithm", "het-opt"),
    )


def load_recipe(path) -> FigureRecipe:
    """Read a recipe JSON file; relative inputs resolve against its directory."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise PlotkitError(f"recipe file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise PlotkitError(f"{path}: not valid JSON ({e})") from e
    return recipe_from_dict(doc, base_dir=path.parent)

"""The layout document: the single serialized artifact a finished map run
produces, consumed by the renderer, the batch tooling, and external viewers.

Schema version 1. Elements and sets get stable integer ids; geometry is in
rendered space (points), rounded to 6 decimals so reruns serialize
byte-identically.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


class DocumentError(ValueError):
    pass


SCHEMA_VERSION = 1


@dataclass
class LayoutDocument:
    elements: list[dict]            # {id, name}
    sets: list[dict]                # {id, name}
    vertices: list[dict]            # {id, x, y, radius, sets: [set ids]}
    edges: list[dict]               # {u, v, lines: [set ids], order matters}
    lines: list[dict]               # {set, color, stations: [ids], terminus_sides}
    labels: list[dict]              # {vertex, text, full_text, x, y, angle, leftward, size}
    font_size: int
    label_fallback: bool
    metrics: dict
    provenance: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "elements": self.elements,
            "sets": self.sets,
            "vertices": self.vertices,
            "edges": self.edges,
            "lines": self.lines,
            "labels": self.labels,
            "font_size": self.font_size,
            "label_fallback": self.label_fallback,
            "metrics": self.metrics,
            "provenance": self.provenance,
        }


def write_document(doc: LayoutDocument, include_timings: bool = False) -> str:
    """Serialize; wall-clock timings are stripped unless asked for, so repeated
    runs of the same input emit identical bytes."""
    payload = doc.to_dict()
    if not include_timings:
        payload = json.loads(json.dumps(payload))  # deep copy
        payload.get("provenance", {}).pop("timings", None)
        payload.get("metrics", {}).pop("running_time", None)
    return json.dumps(payload, indent=1, ensure_ascii=False) + "\n"


def read_document(data: str | bytes) -> LayoutDocument:
    """Parse and cross-validate a serialized layout document."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed document JSON: {exc.msg} at offset {exc.pos}") from exc
    if not isinstance(payload, dict):
        raise DocumentError("document root must be an object")
    version = payload.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(
            f"unsupported schema_version {version!r}, expected {SCHEMA_VERSION}"
        )
    required = [
        "elements", "sets", "vertices", "edges", "lines",
        "labels", "font_size", "label_fallback", "metrics",
    ]
    for key in required:
        if key not in payload:
            raise DocumentError(f"missing field {key!r}")
    elem_ids = {e["id"] for e in payload["elements"]}
    set_ids = {s["id"] for s in payload["sets"]}
    vertex_ids = {v["id"] for v in payload["vertices"]}
    if not vertex_ids <= elem_ids:
        raise DocumentError("vertex references unknown element ids")
    for v in payload["vertices"]:
        bad = [s for s in v["sets"] if s not in set_ids]
        if bad:
            raise DocumentError(f"vertex {v['id']} references unknown sets {bad}")
    for e in payload["edges"]:
        if e["u"] not in vertex_ids or e["v"] not in vertex_ids:
            raise DocumentError(f"edge ({e['u']}, {e['v']}) references unknown vertices")
        bad = [s for s in e["lines"] if s not in set_ids]
        if bad:
            raise DocumentError(f"edge ({e['u']}, {e['v']}) references unknown lines {bad}")
    for ln in payload["lines"]:
        if ln["set"] not in set_ids:
            raise DocumentError(f"line references unknown set {ln['set']}")
        bad = [v for v in ln["stations"] if v not in vertex_ids]
        if bad:
            raise DocumentError(f"line {ln['set']} references unknown stations {bad}")
    for lab in payload["labels"]:
        if lab["vertex"] not in vertex_ids:
            raise DocumentError(f"label references unknown vertex {lab['vertex']}")
    return LayoutDocument(
        elements=payload["elements"],
        sets=payload["sets"],
        vertices=payload["vertices"],
        edges=payload["edges"],
        lines=payload["lines"],
        labels=payload["labels"],
        font_size=payload["font_size"],
        label_fallback=payload["label_fallback"],
        metrics=payload["metrics"],
        provenance=payload.get("provenance", {}),
        schema_version=version,
    )

"""Quality measures for drawn maps: angles, lengths, path shape, spatial
clutter, line coherence, crossings, and stage timings."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .geometry import in_closed_diameter_disk, octolinear_deviation, segments_properly_cross
from .layout import EmbeddedMap
from .support import SupportGraph


def octolinearity(m: EmbeddedMap) -> tuple[float, float]:
    """Mean and worst angular distance to the octolinear grid, degrees in [0, 22.5]."""
    devs = []
    for a, b in m.support.edges:
        ax, ay = m.positions[a]
        bx, by = m.positions[b]
        devs.append(octolinear_deviation(bx - ax, by - ay))
    if not devs:
        return 0.0, 0.0
    return sum(devs) / len(devs), max(devs)


def edge_uniformity(m: EmbeddedMap) -> tuple[float, float]:
    """Mean and worst relative deviation of edge lengths from their average."""
    lens = []
    for a, b in m.support.edges:
        ax, ay = m.positions[a]
        bx, by = m.positions[b]
        lens.append(math.hypot(bx - ax, by - ay))
    if not lens:
        return 0.0, 0.0
    avg = sum(lens) / len(lens)
    if avg == 0:
        return 0.0, 0.0
    rel = [abs(ln / avg - 1.0) for ln in lens]
    return sum(rel) / len(rel), max(rel)


def monotonicity(m: EmbeddedMap) -> int:
    """Per line, reversals against the crow-flies direction: walking the stops,
    count entries into a negative dot product with the first-to-last vector.
    Perpendicular steps inherit the previous sign; a closed line scores 0."""
    total = 0
    for line in m.support.line_orders.values():
        if len(line) < 2:
            continue
        fx, fy = m.positions[line[0]]
        lx, ly = m.positions[line[-1]]
        cx, cy = lx - fx, ly - fy
        if cx == 0 and cy == 0:
            continue
        sign = 1
        for a, b in zip(line, line[1:]):
            ax, ay = m.positions[a]
            bx, by = m.positions[b]
            dot = (bx - ax) * cx + (by - ay) * cy
            new = sign if abs(dot) < 1e-12 else (1 if dot > 0 else -1)
            if new < 0 and sign > 0:
                total += 1
            sign = new
    return total


def gabriel_score(m: EmbeddedMap) -> int:
    """Stations inside the closed diameter disk of a non-incident edge, counted
    per (station, edge) pair."""
    count = 0
    for a, b in m.support.edges:
        pa, pb = m.positions[a], m.positions[b]
        for w in m.support.vertices:
            if w == a or w == b:
                continue
            if in_closed_diameter_disk(m.positions[w], pa, pb):
                count += 1
    return count


def consecutive_ones_score(g: SupportGraph) -> int:
    """For every line pair, the fragmentation of their shared stretch: number
    of connected pieces of the shared vertices under edges both lines use,
    minus one, summed. Zero means every overlap is one contiguous corridor."""
    names = list(g.line_orders)
    total = 0
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a = g.line_orders[names[i]]
            b = g.line_orders[names[j]]
            shared = set(a) & set(b)
            if not shared:
                continue
            ea = {frozenset(p) for p in zip(a, a[1:])}
            eb = {frozenset(p) for p in zip(b, b[1:])}
            both = ea & eb
            parent = {v: v for v in shared}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for edge in both:
                u, v = tuple(edge)
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
            roots = {find(v) for v in shared}
            total += len(roots) - 1
    return total


def edge_crossings(m: EmbeddedMap) -> int:
    """Proper crossings between support edges that share no endpoint."""
    edges = m.support.edges
    count = 0
    for i in range(len(edges)):
        a, b = edges[i]
        pa, pb = m.positions[a], m.positions[b]
        for j in range(i + 1, len(edges)):
            c, d = edges[j]
            if a in (c, d) or b in (c, d):
                continue
            if segments_properly_cross(pa, pb, m.positions[c], m.positions[d]):
                count += 1
    return count


def self_crossings(m: EmbeddedMap) -> int:
    """Proper crossings of a line with itself, over non-consecutive segments."""
    total = 0
    for line in m.support.line_orders.values():
        pts = [m.positions[v] for v in line]
        k = len(pts) - 1
        for i in range(k):
            for j in range(i + 2, k):
                if segments_properly_cross(pts[i], pts[i + 1], pts[j], pts[j + 1]):
                    total += 1
    return total


def predicted_seconds(n: int) -> float:
    """Quadratic wall-clock model for the default pipeline."""
    return 4.07e-4 * n * n


@dataclass
class MetricReport:
    avg_octolinearity: float
    max_octolinearity: float
    avg_edge_uniformity: float
    max_edge_uniformity: float
    monotonicity: int
    gabriel_score: int
    consecutive_ones: int
    edge_crossings: int
    self_crossings: int
    line_crossings: int
    running_time: dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "avg_octolinearity": self.avg_octolinearity,
            "max_octolinearity": self.max_octolinearity,
            "avg_edge_uniformity": self.avg_edge_uniformity,
            "max_edge_uniformity": self.max_edge_uniformity,
            "monotonicity": self.monotonicity,
            "gabriel_score": self.gabriel_score,
            "consecutive_ones": self.consecutive_ones,
            "edge_crossings": self.edge_crossings,
            "self_crossings": self.self_crossings,
            "line_crossings": self.line_crossings,
        }
        if self.running_time:
            out["running_time"] = dict(self.running_time)
        return out


def compute_metrics(m: EmbeddedMap, orders=None, timings: dict[str, float] | None = None) -> MetricReport:
    """Full report; line crossings need the ordering stage's output and are 0
    when orders are not supplied."""
    from .ordering import realized_line_crossings

    avg_o, max_o = octolinearity(m)
    avg_u, max_u = edge_uniformity(m)
    return MetricReport(
        avg_octolinearity=avg_o,
        max_octolinearity=max_o,
        avg_edge_uniformity=avg_u,
        max_edge_uniformity=max_u,
        monotonicity=monotonicity(m),
        gabriel_score=gabriel_score(m),
        consecutive_ones=consecutive_ones_score(m.support),
        edge_crossings=edge_crossings(m),
        self_crossings=self_crossings(m),
        line_crossings=realized_line_crossings(m, orders) if orders is not None else 0,
        running_time=dict(timings or {}),
    )

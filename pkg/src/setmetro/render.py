"""Rendering: scale normalization, line colors, station sizes, and the SVG.

The SVG is built from a layout document alone, so anything downstream of the
serialized artifact (CLI re-render, external viewers) sees the same picture.
Output is byte-deterministic for a given document.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .document import LayoutDocument
from .geometry import angle_deg
from .layout import EmbeddedMap
from .ordering import LEFT, RIGHT, LineOrderMap, _Topology
from .support import SupportGraph

STROKE = 8.0
TARGET_MEAN_EDGE = 50.0
BACKGROUND = "#EEEEEE"
MARGIN = 80.0

TABLEAU20 = (
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c",
    "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f",
    "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
)


def _srgb_to_lab(hexcolor: str) -> tuple[float, float, float]:
    r = int(hexcolor[1:3], 16) / 255.0
    g = int(hexcolor[3:5], 16) / 255.0
    b = int(hexcolor[5:7], 16) / 255.0

    def lin(c):
        return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4

    r, g, b = lin(r), lin(g), lin(b)
    x = (0.4124 * r + 0.3576 * g + 0.1805 * b) / 0.95047
    y = (0.2126 * r + 0.7152 * g + 0.0722 * b) / 1.0
    z = (0.0193 * r + 0.1192 * g + 0.9505 * b) / 1.08883

    def f(t):
        return t ** (1 / 3) if t > 0.008856 else 7.787 * t + 16 / 116

    fx, fy, fz = f(x), f(y), f(z)
    return 116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)


_LAB = [_srgb_to_lab(c) for c in TABLEAU20]


def _cie76(i: int, j: int) -> float:
    a, b = _LAB[i], _LAB[j]
    return math.dist(a, b)


def assign_colors(g: SupportGraph) -> dict[str, str]:
    """Palette colors for the lines: most-entangled lines pick first, each
    taking the fresh (or least-worn) color farthest from its colored
    neighbours in Lab space."""
    names = list(g.line_orders)
    on_vertex: dict[str, set[str]] = {}
    for s in names:
        for v in g.line_orders[s]:
            on_vertex.setdefault(v, set()).add(s)
    adjacent: dict[str, set[str]] = {s: set() for s in names}
    for group in on_vertex.values():
        for s in group:
            adjacent[s] |= group - {s}
    order = sorted(names, key=lambda s: (-len(adjacent[s]), names.index(s)))
    use_count = [0] * len(TABLEAU20)
    chosen: dict[str, int] = {}
    for s in order:
        neighbor_colors = [chosen[t] for t in adjacent[s] if t in chosen]
        min_use = min(use_count)
        candidates = [i for i, c in enumerate(use_count) if c == min_use]
        best = None
        best_dist = -1.0
        for i in candidates:
            dist = min((_cie76(i, j) for j in neighbor_colors), default=math.inf)
            if dist > best_dist + 1e-9:
                best, best_dist = i, dist
        chosen[s] = best
        use_count[best] += 1
    return {s: TABLEAU20[chosen[s]] for s in names}


def station_radii(g: SupportGraph) -> dict[str, float]:
    """6pt stations; interchanges grow with the widest incident bundle."""
    edge_lines = g.edge_lines()
    lines_at: dict[str, set[str]] = {v: set() for v in g.vertices}
    for s, line in g.line_orders.items():
        for v in line:
            lines_at[v].add(s)
    radii = {}
    for v in g.vertices:
        if len(lines_at[v]) <= 1:
            radii[v] = 6.0
        else:
            widest = max(
                (len(edge_lines[e]) for e in edge_lines if v in e), default=1
            )
            radii[v] = 4.0 + 4.0 * widest
    return radii


def scale_layout(m: EmbeddedMap, target: float = TARGET_MEAN_EDGE) -> EmbeddedMap:
    """Uniformly rescale so the mean edge length hits the target exactly."""
    edges = m.support.edges
    if not edges:
        return m
    total = 0.0
    for a, b in edges:
        ax, ay = m.positions[a]
        bx, by = m.positions[b]
        total += math.hypot(bx - ax, by - ay)
    mean = total / len(edges)
    if mean == 0:
        return m
    f = target / mean
    return EmbeddedMap(
        m.support,
        {v: (x * f, y * f) for v, (x, y) in m.positions.items()},
    )


def _fmt(x: float) -> str:
    s = "%.3f" % x
    return "0.000" if s == "-0.000" else s


def _entry_arrangement(
    topo: _Topology,
    positions: dict[str, tuple[float, float]],
    stored: dict[tuple[str, str], tuple[str, ...]],
    sides: dict[tuple[str, int], str],
    e: tuple[str, str],
) -> tuple[str, ...]:
    """Arrangement of e's lines at its low-id end, matched to how each line
    arrives there: terminating lines park at their side, continuing ones sort
    by the fan of their previous edges and their lane within each."""
    a, b = e
    ax, ay = positions[a]
    bx, by = positions[b]
    heading = angle_deg(bx - ax, by - ay)
    lines = stored[e]
    keys = []
    for pos, s in enumerate(lines):
        others = [f for f in topo.at_vertex[s][a] if f != e]
        if not others:
            side = sides.get((s, topo.terminus_end(s, a)), LEFT)
            group = 0 if side == RIGHT else 2
            keys.append((group, 0.0, pos, s))
            continue
        f = others[0]
        o = f[0] if f[1] == a else f[1]
        ox, oy = positions[o]
        beta = (angle_deg(ox - ax, oy - ay) - heading) % 360.0
        frame = stored[f] if not _Topology.enterw_frame_reversed(f, a) else tuple(reversed(stored[f]))
        keys.append((1, beta, frame.index(s), s))
    keys.sort(key=lambda t: (t[0], t[1], t[2]))
    return tuple(s for *_, s in keys)


def render_svg(doc: LayoutDocument) -> str:
    """Deterministic SVG: parallel 8pt strokes per edge with midpoint swaps,
    stations, labels, and a bottom-right legend on a light background."""
    id_name = {e["id"]: e["name"] for e in doc.elements}
    set_name = {s["id"]: s["name"] for s in doc.sets}
    positions = {id_name[v["id"]]: (v["x"], v["y"]) for v in doc.vertices}
    radii = {id_name[v["id"]]: v["radius"] for v in doc.vertices}
    line_orders = {
        set_name[ln["set"]]: tuple(id_name[v] for v in ln["stations"]) for ln in doc.lines
    }
    colors = {set_name[ln["set"]]: ln["color"] for ln in doc.lines}
    g = SupportGraph(
        vertices=tuple(id_name[v["id"]] for v in doc.vertices),
        line_orders=line_orders,
    )
    topo = _Topology(g)
    idx = {v: i for i, v in enumerate(g.vertices)}
    stored: dict[tuple[str, str], tuple[str, ...]] = {}
    for e in doc.edges:
        u, v = id_name[e["u"]], id_name[e["v"]]
        key = (u, v) if idx[u] < idx[v] else (v, u)
        stored[key] = tuple(set_name[s] for s in e["lines"])
    sides = {}
    for ln in doc.lines:
        s = set_name[ln["set"]]
        t0, t1 = ln["terminus_sides"]
        sides[(s, 0)] = t0
        sides[(s, 1)] = t1

    xs: list[float] = []
    ys: list[float] = []
    for v, (x, y) in positions.items():
        r = radii[v] + 2.0
        xs += [x - r, x + r]
        ys += [y - r, y + r]
    for lab in doc.labels:
        # label boxes were computed pre-serialization; rebuild extent roughly
        w_text = 0.6 * lab["size"] * len(lab["text"])
        if lab["leftward"]:
            xs += [lab["x"] - w_text - 4, lab["x"] + 4]
        else:
            xs += [lab["x"] - 4, lab["x"] + w_text + 4]
        ys += [lab["y"] - 1.2 * lab["size"], lab["y"] + 1.2 * lab["size"]]

    strokes = []
    for e, lines in stored.items():
        a, b = e
        ax, ay = positions[a]
        bx, by = positions[b]
        dx, dy = bx - ax, by - ay
        ln = math.hypot(dx, dy)
        if ln < 1e-9:
            continue
        ux, uy = dx / ln, dy / ln
        nx, ny = -uy, ux
        k = len(lines)
        entry = _entry_arrangement(topo, positions, stored, sides, e) if k > 1 else lines
        half = (k - 1) / 2.0
        off_exit = {s: (i - half) * STROKE for i, s in enumerate(lines)}
        off_entry = {s: (i - half) * STROKE for i, s in enumerate(entry)}
        mx, my = (ax + bx) / 2.0, (ay + by) / 2.0
        s_len = min(ln / 4.0, 12.0)
        for s in lines:
            oa = off_entry[s]
            ob = off_exit[s]
            p0 = (ax + nx * oa, ay + ny * oa)
            p1 = (bx + nx * ob, by + ny * ob)
            if abs(oa - ob) < 1e-9:
                d = f"M {_fmt(p0[0])} {_fmt(p0[1])} L {_fmt(p1[0])} {_fmt(p1[1])}"
            else:
                q0 = (mx - ux * s_len + nx * oa, my - uy * s_len + ny * oa)
                q1 = (mx + ux * s_len + nx * ob, my + uy * s_len + ny * ob)
                c0 = (mx + nx * oa, my + ny * oa)
                c1 = (mx + nx * ob, my + ny * ob)
                d = (
                    f"M {_fmt(p0[0])} {_fmt(p0[1])} L {_fmt(q0[0])} {_fmt(q0[1])} "
                    f"C {_fmt(c0[0])} {_fmt(c0[1])} {_fmt(c1[0])} {_fmt(c1[1])} "
                    f"{_fmt(q1[0])} {_fmt(q1[1])} L {_fmt(p1[0])} {_fmt(p1[1])}"
                )
            strokes.append(
                f'<path d="{d}" fill="none" stroke="{colors[s]}" stroke-width="{STROKE:g}"/>'
            )
            for px, py in (p0, p1):
                xs += [px - STROKE, px + STROKE]
                ys += [py - STROKE, py + STROKE]

    # legend panel, bottom-right of the content box
    legend_font = 10
    rows = [(set_name[ln["set"]], ln["color"]) for ln in doc.lines]
    row_h = 14.0
    swatch = 24.0
    pad = 6.0
    text_w = max((0.6 * legend_font * len(name) for name, _ in rows), default=0.0)
    panel_w = pad + swatch + pad + text_w + pad
    panel_h = pad * 2 + row_h * len(rows)
    px1, py1 = max(xs), max(ys)
    px0, py0 = px1 - panel_w, py1 - panel_h

    legend = [
        f'<rect x="{_fmt(px0)}" y="{_fmt(py0)}" width="{_fmt(panel_w)}" height="{_fmt(panel_h)}" '
        f'fill="#ffffff" stroke="#999999" stroke-width="1"/>'
    ]
    for i, (name, color) in enumerate(rows):
        cy = py0 + pad + row_h * i + row_h / 2.0
        legend.append(
            f'<line x1="{_fmt(px0 + pad)}" y1="{_fmt(cy)}" x2="{_fmt(px0 + pad + swatch)}" '
            f'y2="{_fmt(cy)}" stroke="{color}" stroke-width="{STROKE:g}"/>'
        )
        legend.append(
            f'<text x="{_fmt(px0 + pad + swatch + pad)}" y="{_fmt(cy)}" '
            f'font-family="Helvetica, Arial, sans-serif" font-size="{legend_font}" '
            f'fill="#111111" dominant-baseline="middle">{escape(name)}</text>'
        )

    x0, y0 = min(xs) - MARGIN, min(ys) - MARGIN
    w, h = max(xs) - min(xs) + 2 * MARGIN, max(ys) - min(ys) + 2 * MARGIN

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(w)} {_fmt(h)}">',
        f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" width="{_fmt(w)}" height="{_fmt(h)}" fill="{BACKGROUND}"/>',
    ]
    parts.extend(strokes)
    for v in doc.vertices:
        name = id_name[v["id"]]
        x, y = positions[name]
        parts.append(
            f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(radii[name])}" '
            f'fill="#ffffff" stroke="#333333" stroke-width="2"/>'
        )
    for lab in doc.labels:
        anchor = "end" if lab["leftward"] else "start"
        transform = ""
        if lab["angle"]:
            transform = f' transform="rotate({_fmt(lab["angle"])} {_fmt(lab["x"])} {_fmt(lab["y"])})"'
        parts.append(
            f'<text x="{_fmt(lab["x"])}" y="{_fmt(lab["y"])}" text-anchor="{anchor}" '
            f'font-family="Helvetica, Arial, sans-serif" font-size="{lab["size"]}" '
            f'fill="#111111" dominant-baseline="middle"{transform}>{escape(lab["text"])}</text>'
        )
    parts.extend(legend)
    parts.append("</svg>")
    return "\n".join(parts) + "\n"

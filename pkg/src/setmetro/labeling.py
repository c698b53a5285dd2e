"""Station labeling: greedy placement of rotated name boxes at the largest
font size that still fits every station, with a degraded fallback mode.

Works in rendered-space coordinates; boxes are axis-aligned bounds of the
rotated text, text boxes measure 0.6 * size per character by 1.2 * size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import aabbs_overlap, angle_deg, rotated_box_aabb, segments_hit_aabb_mask
from .layout import EmbeddedMap

MIN_SIZE = 8
MAX_SIZE = 60
ABBREV_LIMIT = 16
ELLIPSIS = "…"

# (angle, extends_leftward), index order is the tie-break order
CANDIDATES = (
    (0.0, False),
    (45.0, False),
    (-45.0, False),
    (0.0, True),
    (45.0, True),
    (-45.0, True),
)


@dataclass
class Label:
    vertex: str
    text: str
    full_text: str
    angle: float
    leftward: bool
    size: int
    anchor: tuple[float, float]
    box: tuple[float, float, float, float]


@dataclass
class LabelPlacement:
    labels: dict[str, Label]
    size: int
    fallback_used: bool = False

    def boxes(self) -> list[tuple[float, float, float, float]]:
        return [lab.box for lab in self.labels.values()]


def abbreviate(name: str) -> str:
    if len(name) > ABBREV_LIMIT:
        return name[: ABBREV_LIMIT - 1] + ELLIPSIS
    return name


def _box_dims(text: str, size: int) -> tuple[float, float]:
    return 0.6 * size * len(text), 1.2 * size


def _has_horizontal_edge(m: EmbeddedMap, v: str, nbrs: list[str]) -> bool:
    px, py = m.positions[v]
    for w in nbrs:
        wx, wy = m.positions[w]
        a = angle_deg(wx - px, wy - py) % 180.0
        if a <= 22.5 or a >= 157.5:
            return True
    return False


def _candidate_weights(horizontal_line: bool) -> list[int]:
    # diagonal-ish lines read best with flat labels to the right; flat lines
    # need the label lifted to 45 degrees to clear the strokes
    if horizontal_line:
        order = [1, 0, 2, 4, 3, 5]
    else:
        order = [0, 1, 2, 3, 4, 5]
    weights = [0] * len(CANDIDATES)
    for rank, idx in enumerate(order):
        weights[idx] = rank
    return weights


def _neighbors(m: EmbeddedMap) -> dict[str, list[str]]:
    nbrs: dict[str, list[str]] = {v: [] for v in m.support.vertices}
    for a, b in m.support.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    return nbrs


def _clipped_segments(m: EmbeddedMap, radii: dict[str, float]) -> np.ndarray:
    """Edge segments shortened by the station circles so labels may sit right
    against a station without touching the drawn strokes."""
    segs = []
    for a, b in m.support.edges:
        ax, ay = m.positions[a]
        bx, by = m.positions[b]
        dx, dy = bx - ax, by - ay
        ln = math.hypot(dx, dy)
        ra = radii.get(a, 0.0) + 1.0
        rb = radii.get(b, 0.0) + 1.0
        if ln <= ra + rb:
            continue
        ux, uy = dx / ln, dy / ln
        segs.append(((ax + ux * ra, ay + uy * ra), (bx - ux * rb, by - uy * rb)))
    if not segs:
        return np.zeros((0, 2, 2))
    return np.array(segs)


def _make_box(m, v, radii, text, size, angle, leftward):
    px, py = m.positions[v]
    gap = radii.get(v, 0.0) + 2.0
    rad = math.radians(angle)
    ux, uy = math.cos(rad), math.sin(rad)
    if leftward:
        ux, uy = -ux, -uy
    anchor = (px + ux * gap, py + uy * gap)
    w, h = _box_dims(text, size)
    return anchor, rotated_box_aabb(anchor, angle, w, h, leftward)


def _greedy(m: EmbeddedMap, radii: dict[str, float], size: int, order, segs) -> dict[str, Label] | None:
    placed: dict[str, Label] = {}
    boxes: list[tuple[float, float, float, float]] = []
    for _, vi, ci, v, angle, leftward in order:
        if v in placed:
            continue
        full = v
        text = abbreviate(full)
        anchor, box = _make_box(m, v, radii, text, size, angle, leftward)
        if any(aabbs_overlap(box, other) for other in boxes):
            continue
        if len(segs) and segments_hit_aabb_mask(segs[:, 0], segs[:, 1], box).any():
            continue
        placed[v] = Label(v, text, full, angle, leftward, size, anchor, box)
        boxes.append(box)
    if len(placed) < len(m.support.vertices):
        return None
    return placed


def label_stations(m: EmbeddedMap, radii: dict[str, float]) -> LabelPlacement:
    """Largest integer font size in [8, 60] whose greedy pass labels every
    station without any box touching another box or a drawn segment; long
    names are abbreviated, then restored where room allows. Falls back to a
    fixed degraded placement when even size 8 fails."""
    nbrs = _neighbors(m)
    segs = _clipped_segments(m, radii)
    order = []
    vi = {v: i for i, v in enumerate(m.support.vertices)}
    for v in m.support.vertices:
        weights = _candidate_weights(_has_horizontal_edge(m, v, nbrs[v]))
        for ci, (angle, leftward) in enumerate(CANDIDATES):
            order.append((weights[ci], vi[v], ci, v, angle, leftward))
    order.sort(key=lambda t: (t[0], t[1], t[2]))

    lo, hi = MIN_SIZE, MAX_SIZE
    best: dict[str, Label] | None = None
    best_size = 0
    while lo <= hi:
        mid = (lo + hi) // 2
        result = _greedy(m, radii, mid, order, segs)
        if result is not None:
            best, best_size = result, mid
            lo = mid + 1
        else:
            hi = mid - 1
    if best is None:
        return fallback_labeling(m, radii)
    # monotonicity of the greedy in the size is not guaranteed; walk up if the
    # binary search undershot
    while best_size < MAX_SIZE:
        result = _greedy(m, radii, best_size + 1, order, segs)
        if result is None:
            break
        best, best_size = result, best_size + 1

    # give abbreviated stations their full name back where it still fits
    boxes = {v: lab.box for v, lab in best.items()}
    for _, _, _, v, angle, leftward in order:
        lab = best[v]
        if (lab.angle, lab.leftward) != (angle, leftward):
            continue
        if lab.text == lab.full_text:
            continue
        anchor, box = _make_box(m, v, radii, lab.full_text, best_size, angle, leftward)
        others = [bx for u, bx in boxes.items() if u != v]
        if any(aabbs_overlap(box, other) for other in others):
            continue
        if len(segs) and segments_hit_aabb_mask(segs[:, 0], segs[:, 1], box).any():
            continue
        lab.text = lab.full_text
        lab.anchor = anchor
        lab.box = box
        boxes[v] = box
    return LabelPlacement(labels=best, size=best_size, fallback_used=False)


def fallback_labeling(m: EmbeddedMap, radii: dict[str, float]) -> LabelPlacement:
    """Degraded mode: size 8 for everyone; stations on a flat stroke get a
    45-degree label, the rest sit horizontally below their station."""
    nbrs = _neighbors(m)
    labels: dict[str, Label] = {}
    for v in m.support.vertices:
        full = v
        text = abbreviate(full)
        if _has_horizontal_edge(m, v, nbrs[v]):
            anchor, box = _make_box(m, v, radii, text, MIN_SIZE, 45.0, False)
            labels[v] = Label(v, text, full, 45.0, False, MIN_SIZE, anchor, box)
        else:
            px, py = m.positions[v]
            w, h = _box_dims(text, MIN_SIZE)
            gap = radii.get(v, 0.0) + 2.0
            anchor = (px - w / 2.0, py + gap + h / 2.0)
            box = (px - w / 2.0, py + gap, px + w / 2.0, py + gap + h)
            labels[v] = Label(v, text, full, 0.0, False, MIN_SIZE, anchor, box)
    return LabelPlacement(labels=labels, size=MIN_SIZE, fallback_used=True)

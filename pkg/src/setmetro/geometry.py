"""Planar geometry primitives shared by layout, schematization, labeling and metrics.

Angles are degrees unless a name says otherwise. Coordinates are plain (x, y)
tuples at module boundaries; hot loops use numpy arrays.
"""

from __future__ import annotations

import math

import numpy as np

OCTOLINEAR_ANGLES = tuple(45.0 * k for k in range(8))


def angle_deg(dx: float, dy: float) -> float:
    """Direction of (dx, dy) in [0, 360)."""
    return math.degrees(math.atan2(dy, dx)) % 360.0


def signed_angle_diff(a: float, b: float) -> float:
    """Smallest rotation taking direction b to direction a, in (-180, 180]."""
    d = (a - b) % 360.0
    if d > 180.0:
        d -= 360.0
    return d


def nearest_octolinear(angle: float) -> tuple[float, float]:
    """Closest multiple of 45 degrees and the signed deviation to it."""
    snapped = 45.0 * round(angle / 45.0)
    dev = signed_angle_diff(angle, snapped % 360.0)
    return snapped % 360.0, dev


def octolinear_deviation(dx: float, dy: float) -> float:
    """Absolute angular distance from the nearest multiple of 45 degrees, in [0, 22.5]."""
    if dx == 0.0 and dy == 0.0:
        return 0.0
    a = angle_deg(dx, dy)
    return abs(signed_angle_diff(a, 45.0 * round(a / 45.0)))


def _orient(ax, ay, bx, by, cx, cy) -> int:
    v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    if v > 1e-12:
        return 1
    if v < -1e-12:
        return -1
    return 0


def segments_properly_cross(p, q, r, s) -> bool:
    """True when segments pq and rs intersect in a single point interior to both.

    Shared endpoints, touching, and collinear overlap do not count.
    """
    o1 = _orient(*p, *q, *r)
    o2 = _orient(*p, *q, *s)
    o3 = _orient(*r, *s, *p)
    o4 = _orient(*r, *s, *q)
    if 0 in (o1, o2, o3, o4):
        return False
    return o1 != o2 and o3 != o4


def in_closed_diameter_disk(w, u, v) -> bool:
    """True when point w lies in the closed disk whose diameter is segment uv."""
    mx = (u[0] + v[0]) / 2.0
    my = (u[1] + v[1]) / 2.0
    r2 = ((u[0] - v[0]) ** 2 + (u[1] - v[1]) ** 2) / 4.0
    d2 = (w[0] - mx) ** 2 + (w[1] - my) ** 2
    return d2 <= r2 + 1e-12


def aabbs_overlap(a, b) -> bool:
    """Closed-interval overlap of two axis-aligned boxes (xmin, ymin, xmax, ymax)."""
    return not (a[2] < b[0] or b[2] < a[0] or a[3] < b[1] or b[3] < a[1])


def segment_hits_aabb(p, q, box) -> bool:
    """True when segment pq intersects the axis-aligned box (slab clipping)."""
    x0, y0, x1, y1 = box
    dx = q[0] - p[0]
    dy = q[1] - p[1]
    t0, t1 = 0.0, 1.0
    for d, lo, hi, o in ((dx, x0, x1, p[0]), (dy, y0, y1, p[1])):
        if abs(d) < 1e-15:
            if o < lo or o > hi:
                return False
            continue
        ta = (lo - o) / d
        tb = (hi - o) / d
        if ta > tb:
            ta, tb = tb, ta
        t0 = max(t0, ta)
        t1 = min(t1, tb)
        if t0 > t1:
            return False
    return True


def segments_hit_aabb_mask(seg_a: np.ndarray, seg_b: np.ndarray, box) -> np.ndarray:
    """Vectorized segment_hits_aabb: seg_a, seg_b are (n, 2) endpoint arrays."""
    x0, y0, x1, y1 = box
    p = seg_a
    d = seg_b - seg_a
    t0 = np.zeros(len(p))
    t1 = np.ones(len(p))
    ok = np.ones(len(p), dtype=bool)
    for axis, lo, hi in ((0, x0, x1), (1, y0, y1)):
        da = d[:, axis]
        oa = p[:, axis]
        flat = np.abs(da) < 1e-15
        ok &= ~(flat & ((oa < lo) | (oa > hi)))
        with np.errstate(divide="ignore", invalid="ignore"):
            ta = (lo - oa) / da
            tb = (hi - oa) / da
        swap = ta > tb
        ta2 = np.where(swap, tb, ta)
        tb2 = np.where(swap, ta, tb)
        t0 = np.where(flat, t0, np.maximum(t0, ta2))
        t1 = np.where(flat, t1, np.minimum(t1, tb2))
    return ok & (t0 <= t1)


def rotated_box_aabb(anchor, angle: float, width: float, height: float, leftward: bool):
    """Axis-aligned bounding box of a text box rotated about its anchor.

    The box is `width` long along `angle` and `height` tall perpendicular to it,
    vertically centered on the anchor line. With leftward=True the box extends
    against the angle direction (text ending at the anchor instead of starting).
    """
    rad = math.radians(angle)
    ux, uy = math.cos(rad), math.sin(rad)
    nx, ny = -uy, ux
    if leftward:
        ux, uy = -ux, -uy
    ax, ay = anchor
    corners_x = []
    corners_y = []
    for along in (0.0, width):
        for across in (-height / 2.0, height / 2.0):
            corners_x.append(ax + along * ux + across * nx)
            corners_y.append(ay + along * uy + across * ny)
    return (min(corners_x), min(corners_y), max(corners_x), max(corners_y))

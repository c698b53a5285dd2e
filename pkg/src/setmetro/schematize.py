"""Octolinear schematization of an embedded map.

Two interchangeable passes: a one-shot linear least-squares solve against
per-edge target directions from discrete port assignment, and an iterative
force scheme blending spring forces with rotation of edges toward their
nearest octolinear direction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .geometry import angle_deg, signed_angle_diff
from .layout import EmbeddedMap, check_embedding, ensure_separation

PORT_COUNT = 8

# adaptive displacement caps for the magnetic stage, as fractions of target length
TEMP_INIT = 0.1
TEMP_MAX = 0.3


def grid_align(m: EmbeddedMap) -> EmbeddedMap:
    """Rotate the whole map to the orientation that minimizes total squared
    octolinear deviation.

    The upstream layout fixes orientation arbitrarily, so this is pure gauge
    fixing: a 45-degree-periodic search in 0.25-degree steps, identity kept
    on ties, which never increases the deviation part of the energy.
    """
    verts = m.support.vertices
    if len(verts) < 2 or not m.support.edges:
        return m
    vi = {v: i for i, v in enumerate(verts)}
    pts = np.array([m.positions[v] for v in verts], dtype=float)
    e = np.array([(vi[a], vi[b]) for a, b in m.support.edges], dtype=int)
    d = pts[e[:, 1]] - pts[e[:, 0]]
    ang = np.arctan2(d[:, 1], d[:, 0])
    period = math.pi / 4.0
    best, best_cost = 0.0, None
    for theta_deg in np.arange(0.0, 45.0, 0.25):
        th = math.radians(theta_deg)
        frac = (ang + th) % period
        dev = np.minimum(frac, period - frac)
        cost = float((dev * dev).sum())
        if best_cost is None or cost < best_cost - 1e-15:
            best, best_cost = th, cost
    if best == 0.0:
        return m
    c, s = math.cos(best), math.sin(best)
    rotated = pts @ np.array([[c, -s], [s, c]]).T
    return EmbeddedMap(m.support, {
        v: (float(rotated[i, 0]), float(rotated[i, 1])) for v, i in vi.items()
    })


@dataclass(frozen=True)
class PortAssignment:
    """Per vertex: neighbour -> port index (port k points along 45k degrees)."""

    ports: dict[str, dict[str, int]]


def _incident(m: EmbeddedMap) -> dict[str, list[str]]:
    idx = {v: i for i, v in enumerate(m.support.vertices)}
    nbrs: dict[str, list[str]] = {v: [] for v in m.support.vertices}
    for a, b in m.support.edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    for v in nbrs:
        nbrs[v].sort(key=lambda w: idx[w])
    return nbrs


def assign_ports(m: EmbeddedMap) -> PortAssignment:
    """Snap each vertex's incident edges to distinct 45-degree ports.

    Edges are taken in circular order; over every circular-order-preserving
    assignment into the 8 ports the squared angular deviation is minimized.
    Vertices of degree above 8 are not representable.
    """
    idx = {v: i for i, v in enumerate(m.support.vertices)}
    out: dict[str, dict[str, int]] = {}
    for v, nbrs in _incident(m).items():
        if len(nbrs) > PORT_COUNT:
            raise ValueError(f"vertex {v!r} has degree {len(nbrs)} > {PORT_COUNT}")
        if not nbrs:
            out[v] = {}
            continue
        px, py = m.positions[v]
        angles = []
        for w in nbrs:
            wx, wy = m.positions[w]
            angles.append((angle_deg(wx - px, wy - py), idx[w], w))
        angles.sort()
        k = len(angles)
        best = None
        best_cost = math.inf
        for start in range(PORT_COUNT):
            for gaps in itertools.combinations(range(1, PORT_COUNT), k - 1):
                ports = [start] + [(start + gp) % PORT_COUNT for gp in gaps]
                cost = 0.0
                for (ang, _, _), p in zip(angles, ports):
                    cost += signed_angle_diff(45.0 * p, ang) ** 2
                if cost < best_cost - 1e-12:
                    best_cost = cost
                    best = ports
        out[v] = {w: p for (_, _, w), p in zip(angles, best)}
    return PortAssignment(ports=out)


def edge_directions(m: EmbeddedMap, pa: PortAssignment) -> dict[tuple[str, str], float]:
    """Reconcile the two endpoint ports of each edge into one target direction.

    Agreement wins; otherwise the octolinear direction with the least summed
    deviation to both port directions, ties broken toward the current angle.
    """
    out: dict[tuple[str, str], float] = {}
    for a, b in m.support.edges:
        ax, ay = m.positions[a]
        bx, by = m.positions[b]
        geo = angle_deg(bx - ax, by - ay)
        from_a = 45.0 * pa.ports[a][b]
        from_b = (45.0 * pa.ports[b][a] + 180.0) % 360.0
        if from_a == from_b:
            out[(a, b)] = from_a
            continue
        best = None
        key = None
        for k in range(PORT_COUNT):
            d = 45.0 * k
            cand = (
                abs(signed_angle_diff(d, from_a)) + abs(signed_angle_diff(d, from_b)),
                abs(signed_angle_diff(d, geo)),
                d,
            )
            if key is None or cand < key:
                key = cand
                best = d
        out[(a, b)] = best
    return out


def mean_edge_length(m: EmbeddedMap) -> float:
    total = 0.0
    edges = m.support.edges
    for a, b in edges:
        ax, ay = m.positions[a]
        bx, by = m.positions[b]
        total += math.hypot(bx - ax, by - ay)
    return total / len(edges) if edges else 1.0


def schematic_energy(m: EmbeddedMap, target_len: float) -> float:
    """Sum of squared octolinear deviations plus normalized squared length error."""
    from .geometry import octolinear_deviation

    total = 0.0
    for a, b in m.support.edges:
        ax, ay = m.positions[a]
        bx, by = m.positions[b]
        dev = octolinear_deviation(bx - ax, by - ay)
        ln = math.hypot(bx - ax, by - ay)
        total += dev * dev + ((ln - target_len) ** 2) / (target_len ** 2)
    return total


def least_squares_schematize(
    m: EmbeddedMap, target_len: float | None = None
) -> EmbeddedMap:
    """One linear solve: every edge contributes a parallel equation (length
    along its target direction) and a perpendicular one (zero drift), the
    lowest-id vertex is pinned at the origin."""
    verts = m.support.vertices
    n = len(verts)
    if n < 2 or not m.support.edges:
        return m
    m = grid_align(m)
    t = mean_edge_length(m) if target_len is None else target_len
    dirs = edge_directions(m, assign_ports(m))
    vi = {v: i for i, v in enumerate(verts)}
    cols = {v: (2 * (vi[v] - 1), 2 * (vi[v] - 1) + 1) for v in verts if vi[v] > 0}
    rows = []
    rhs = []
    for (a, b), ang in dirs.items():
        rad = math.radians(ang)
        dx, dy = math.cos(rad), math.sin(rad)
        for (ex, ey, val) in ((dx, dy, t), (-dy, dx, 0.0)):
            row = np.zeros(2 * (n - 1))
            if vi[b] > 0:
                cb = cols[b]
                row[cb[0]] += ex
                row[cb[1]] += ey
            if vi[a] > 0:
                ca = cols[a]
                row[ca[0]] -= ex
                row[ca[1]] -= ey
            rows.append(row)
            rhs.append(val)
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    positions = {verts[0]: (0.0, 0.0)}
    for v in verts[1:]:
        c = cols[v]
        positions[v] = (float(sol[c[0]]), float(sol[c[1]]))
    coords = np.array([positions[v] for v in verts])
    coords = ensure_separation(m.support, coords)
    positions = {v: (float(coords[i, 0]), float(coords[i, 1])) for i, v in enumerate(verts)}
    return check_embedding(EmbeddedMap(m.support, positions))


def _octolinear_snap_rad(angle_rad: float) -> float:
    step = math.pi / 4.0
    return step * round(angle_rad / step)


def magnetic_schematize(
    m: EmbeddedMap,
    seed: int = 0,
    target_len: float | None = None,
    blend_iters: int = 700,
    pure_iters: int = 200,
) -> EmbeddedMap:
    """Iterative schematization: spring forces fade out linearly while forces
    rotating each edge about its midpoint toward the nearest octolinear
    direction (plus length correction) fade in, then a pure-magnetic polish.

    Per-vertex adaptive temperatures cap displacements; both phases stop early
    once total displacement per iteration falls under 1e-4 * target * |V|.
    """
    g = m.support
    verts = g.vertices
    n = len(verts)
    if n < 2 or not g.edges:
        return m
    m = grid_align(m)
    t = mean_edge_length(m) if target_len is None else target_len
    vi = {v: i for i, v in enumerate(verts)}
    e = np.array([(vi[a], vi[b]) for a, b in g.edges], dtype=int)
    coords = np.array([m.positions[v] for v in verts], dtype=float)
    coords = ensure_separation(g, coords, seed)
    temp = np.full(n, TEMP_INIT * t)
    t_max, t_min = TEMP_MAX * t, 1e-5 * t
    last_disp = np.zeros((n, 2))

    def magnetic_force():
        f = np.zeros((n, 2))
        ev = coords[e[:, 1]] - coords[e[:, 0]]
        elen = np.hypot(ev[:, 0], ev[:, 1])
        elen_safe = np.where(elen < 1e-12, 1e-12, elen)
        ang = np.arctan2(ev[:, 1], ev[:, 0])
        snapped = np.round(ang / (math.pi / 4.0)) * (math.pi / 4.0)
        mid = (coords[e[:, 0]] + coords[e[:, 1]]) / 2.0
        half = np.stack([np.cos(snapped), np.sin(snapped)], axis=1) * (elen_safe / 2.0)[:, None]
        ideal_u = mid - half
        ideal_v = mid + half
        np.add.at(f, e[:, 0], ideal_u - coords[e[:, 0]])
        np.add.at(f, e[:, 1], ideal_v - coords[e[:, 1]])
        stretch = (elen - t) / 2.0
        unit = ev / elen_safe[:, None]
        np.add.at(f, e[:, 0], unit * stretch[:, None])
        np.add.at(f, e[:, 1], -unit * stretch[:, None])
        return f

    def spring_force():
        diff = coords[:, None, :] - coords[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(dist, 1.0)
        rep = (t * t / (dist ** 2))[:, :, None] * diff / dist[:, :, None]
        np.einsum("iij->ij", rep)[:] = 0.0
        f = rep.sum(axis=1)
        ev = coords[e[:, 1]] - coords[e[:, 0]]
        elen = np.hypot(ev[:, 0], ev[:, 1])
        elen[elen < 1e-12] = 1e-12
        pull = (elen / t)[:, None] * ev
        np.add.at(f, e[:, 0], pull)
        np.add.at(f, e[:, 1], -pull)
        return f

    def run_stage(iters: int, alpha_of):
        nonlocal coords, last_disp, temp
        for it in range(iters):
            a_spring = alpha_of(it)
            force = magnetic_force() * (1.0 - a_spring)
            if a_spring > 0.0:
                force += spring_force() * a_spring
            fmag = np.hypot(force[:, 0], force[:, 1])
            fmag_safe = np.where(fmag < 1e-12, 1e-12, fmag)
            step = np.minimum(fmag, temp)
            disp = force / fmag_safe[:, None] * step[:, None]
            coords += disp
            lmag = np.hypot(last_disp[:, 0], last_disp[:, 1])
            dmag = np.hypot(disp[:, 0], disp[:, 1])
            denom = np.maximum(lmag * dmag, 1e-18)
            cosphi = (last_disp * disp).sum(axis=1) / denom
            sinphi = (last_disp[:, 0] * disp[:, 1] - last_disp[:, 1] * disp[:, 0]) / denom
            moved = (lmag > 1e-15) & (dmag > 1e-15)
            osc = moved & (cosphi < -0.3)
            rot = moved & ~osc & (np.abs(sinphi) > 0.8)
            calm = moved & ~osc & ~rot
            temp[osc] *= 0.85
            temp[rot] *= 0.95
            temp[calm] *= 1.1
            np.clip(temp, t_min, t_max, out=temp)
            last_disp = disp
            if dmag.sum() < 1e-4 * t * n:
                break

    denom = max(blend_iters - 1, 1)
    run_stage(blend_iters, lambda it: 1.0 - it / denom)
    run_stage(pure_iters, lambda it: 0.0)
    coords = ensure_separation(g, coords, seed)
    positions = {v: (float(coords[i, 0]), float(coords[i, 1])) for i, v in enumerate(verts)}
    return check_embedding(EmbeddedMap(g, positions))

"""Graph embedding: MDS seed, stress majorization, spring embedder, and
geometric re-solving of the per-set paths.

Positions are dicts vertex -> (x, y); the numeric kernels work on arrays
indexed by the support graph's vertex order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import SetSystem
from .support import SupportGraph, check_support, nearest_neighbor_path, path_cost, two_opt_path


@dataclass(frozen=True)
class EmbeddedMap:
    support: SupportGraph
    positions: dict[str, tuple[float, float]]


def check_embedding(m: EmbeddedMap) -> EmbeddedMap:
    missing = [v for v in m.support.vertices if v not in m.positions]
    if missing:
        raise ValueError(f"embedding misses vertices {missing[:3]}")
    for v, (x, y) in m.positions.items():
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValueError(f"non-finite coordinate at {v!r}")
    return m


def _coord_array(g: SupportGraph, positions: dict[str, tuple[float, float]]) -> np.ndarray:
    return np.array([positions[v] for v in g.vertices], dtype=float)


def _as_positions(g: SupportGraph, coords: np.ndarray) -> dict[str, tuple[float, float]]:
    return {v: (float(coords[i, 0]), float(coords[i, 1])) for i, v in enumerate(g.vertices)}


def graph_distances(g: SupportGraph) -> np.ndarray:
    """Unweighted BFS hop counts between all vertex pairs."""
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in g.edges:
        adj[idx[a]].append(idx[b])
        adj[idx[b]].append(idx[a])
    dist = np.full((n, n), np.inf)
    for s in range(n):
        dist[s, s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            for w in adj[u]:
                if not np.isfinite(dist[s, w]):
                    dist[s, w] = dist[s, u] + 1
                    queue.append(w)
    return dist


def ensure_separation(
    g: SupportGraph, coords: np.ndarray, seed: int = 0
) -> np.ndarray:
    """Nudge coincident vertices apart to at least 1e-6 of the bbox diagonal."""
    span = coords.max(axis=0) - coords.min(axis=0)
    diag = float(np.hypot(*span))
    eps = 1e-6 * (diag if diag > 0 else 1.0)
    rng = np.random.default_rng(seed)
    for _ in range(64):
        diff = coords[:, None, :] - coords[None, :, :]
        d = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(d, np.inf)
        bad = np.argwhere(d < eps)
        if not len(bad):
            break
        for i, j in bad:
            if i < j:
                coords[j] += rng.normal(scale=eps * 2.0, size=2)
    return coords


def mds_seed(g: SupportGraph) -> dict[str, tuple[float, float]]:
    """Classical MDS on BFS distances: double-centered squared distances,
    top-2 eigendirections, signs fixed so the first nonzero entry is positive."""
    d = graph_distances(g)
    n = len(g.vertices)
    if n == 1:
        return {g.vertices[0]: (0.0, 0.0)}
    finite_max = d[np.isfinite(d)].max() if np.isfinite(d).any() else 1.0
    d = np.where(np.isfinite(d), d, finite_max * 2.0)
    j = np.eye(n) - np.ones((n, n)) / n
    b = -0.5 * j @ (d ** 2) @ j
    vals, vecs = np.linalg.eigh(b)
    order = np.argsort(vals)[::-1][:2]
    coords = np.zeros((n, 2))
    for k, col in enumerate(order):
        lam = max(vals[col], 0.0)
        vec = vecs[:, col]
        nz = np.nonzero(np.abs(vec) > 1e-9)[0]
        if len(nz) and vec[nz[0]] < 0:
            vec = -vec
        coords[:, k] = vec * math.sqrt(lam)
    coords = ensure_separation(g, coords)
    return _as_positions(g, coords)


def _stress(coords: np.ndarray, d: np.ndarray, w: np.ndarray) -> float:
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.hypot(diff[..., 0], diff[..., 1])
    iu = np.triu_indices(len(coords), k=1)
    return float((w[iu] * (dist[iu] - d[iu]) ** 2).sum())


def stress_layout(
    g: SupportGraph,
    init: dict[str, tuple[float, float]] | None = None,
    ideal_len: float = 1.0,
    max_iter: int = 300,
    tol: float = 1e-4,
) -> EmbeddedMap:
    """Minimize weighted stress with w = d^-2 over graph distances.

    Parallel per-vertex weighted-barycenter updates; an iterate that would
    increase the stress is discarded, so the kept sequence never increases.
    Stops on relative improvement below tol.
    """
    n = len(g.vertices)
    positions = init if init is not None else mds_seed(g)
    coords = _coord_array(g, positions)
    if n < 2:
        return check_embedding(EmbeddedMap(g, _as_positions(g, coords)))
    d = graph_distances(g)
    finite_max = d[np.isfinite(d)].max()
    d = np.where(np.isfinite(d), d, finite_max * 2.0) * ideal_len
    if n == 2:
        # closed form: keep the midpoint and direction, set the exact length
        coords = ensure_separation(g, coords)
        mid = coords.mean(axis=0)
        vec = coords[1] - coords[0]
        vec = vec / np.hypot(*vec)
        half = 0.5 * d[0, 1]
        coords = np.array([mid - half * vec, mid + half * vec])
        return check_embedding(EmbeddedMap(g, _as_positions(g, coords)))
    with np.errstate(divide="ignore"):
        w = 1.0 / (d ** 2)
    np.fill_diagonal(w, 0.0)
    coords = ensure_separation(g, coords)
    wsum = w.sum(axis=1)
    prev = _stress(coords, d, w)
    for _ in range(max_iter):
        diff = coords[:, None, :] - coords[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(dist, 1.0)
        ratio = w * d / dist
        np.fill_diagonal(ratio, 0.0)
        new = (w @ coords + ratio.sum(axis=1)[:, None] * coords - ratio @ coords) / wsum[:, None]
        cur = _stress(new, d, w)
        if cur > prev:
            break
        coords = new
        if prev > 0 and (prev - cur) / prev < tol:
            break
        prev = cur
    coords = ensure_separation(g, coords)
    return check_embedding(EmbeddedMap(g, _as_positions(g, coords)))


def spring_layout(
    g: SupportGraph,
    init: dict[str, tuple[float, float]] | None = None,
    seed: int = 0,
    ideal_len: float = 1.0,
    max_iter: int = 5000,
) -> EmbeddedMap:
    """Fruchterman-Reingold forces with per-vertex adaptive temperature:
    oscillating vertices cool fast, rotating ones cool gently, steady ones
    reheat. Runs until the largest displacement falls under 1e-3 * ideal_len."""
    n = len(g.vertices)
    if init is None:
        coords = _coord_array(g, mds_seed(g))
    elif init == "random":
        coords = np.random.default_rng(seed).random((n, 2))
    else:
        coords = _coord_array(g, init)
    if n < 2:
        return check_embedding(EmbeddedMap(g, _as_positions(g, coords)))
    idx = {v: i for i, v in enumerate(g.vertices)}
    e = np.array([(idx[a], idx[b]) for a, b in g.edges], dtype=int)
    k = ideal_len
    coords = ensure_separation(g, coords, seed)
    temp = np.full(n, k)
    last_disp = np.zeros((n, 2))
    t_max, t_min = 4.0 * k, 1e-4 * k
    for _ in range(max_iter):
        diff = coords[:, None, :] - coords[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(dist, 1.0)
        rep = (k * k / (dist ** 2))[:, :, None] * diff / dist[:, :, None]
        np.einsum("iij->ij", rep)[:] = 0.0
        force = rep.sum(axis=1)
        if len(e):
            ev = coords[e[:, 1]] - coords[e[:, 0]]
            elen = np.hypot(ev[:, 0], ev[:, 1])
            elen[elen < 1e-12] = 1e-12
            pull = (elen / k)[:, None] * ev
            np.add.at(force, e[:, 0], pull)
            np.add.at(force, e[:, 1], -pull)
        fmag = np.hypot(force[:, 0], force[:, 1])
        fmag[fmag < 1e-12] = 1e-12
        step = np.minimum(fmag, temp)
        disp = force / fmag[:, None] * step[:, None]
        coords = coords + disp
        # Frick-style per-vertex schedule from the turn between steps
        lmag = np.hypot(last_disp[:, 0], last_disp[:, 1])
        dmag = np.hypot(disp[:, 0], disp[:, 1])
        denom = lmag * dmag
        denom[denom < 1e-18] = 1e-18
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
        if dmag.max() < 1e-3 * k:
            break
    coords = ensure_separation(g, coords, seed)
    return check_embedding(EmbeddedMap(g, _as_positions(g, coords)))


def _euclid_matrix(pts: np.ndarray) -> np.ndarray:
    diff = pts[:, None, :] - pts[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def refine_paths(
    m: EmbeddedMap,
    system: SetSystem,
    rounds: int = 3,
    ideal_len: float = 1.0,
) -> EmbeddedMap:
    """Re-solve each set's path against the current geometry, alternating with
    stress re-layout.

    Non-final rounds use sqrt(inverse-similarity times euclidean distance) as
    the edge cost, the final round pure euclidean. Warm-started two-opt leaves
    already-optimal paths alone; a round that changes nothing skips ahead to
    the final round, and the layout is only re-solved after a change.
    """
    from .support import similarity_cost_matrix

    cur = m
    rnd = 0
    while rnd < rounds:
        final = rnd == rounds - 1
        changed = False
        new_orders: dict[str, tuple[str, ...]] = {}
        for s, line in cur.support.line_orders.items():
            if len(line) < 3:
                new_orders[s] = line
                continue
            pts = np.array([cur.positions[v] for v in line])
            euclid = _euclid_matrix(pts)
            if final:
                c = euclid
            else:
                c = np.sqrt(similarity_cost_matrix(tuple(line), system) * euclid)
            order = two_opt_path(list(range(len(line))), c)
            new_line = tuple(line[i] for i in order)
            if new_line != line:
                changed = True
            new_orders[s] = new_line
        if changed:
            support = check_support(
                SupportGraph(vertices=cur.support.vertices, line_orders=new_orders)
            )
            cur = stress_layout(support, init=cur.positions, ideal_len=ideal_len)
            rnd += 1
        elif final:
            break
        else:
            rnd = rounds - 1  # nothing moved; only the euclidean polish remains
    return cur

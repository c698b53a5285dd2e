"""Line ordering within shared edges (metro-line crossing minimization).

Each support edge carries one left-to-right order of its lines, read while
traveling from the lower-id endpoint. Lines ending at an edge park on the
outside (periphery) of their assigned side; sides come from an iterative
terminator heuristic, orders from periphery-constrained local search. A pair
of lines realizes a crossing where its lane relation flips between
consecutive shared edges, violates a divergence fan, violates a terminus
side, or meets transversally at a vertex shared without an edge.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .geometry import angle_deg
from .layout import EmbeddedMap
from .support import SupportGraph

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class LineOrderMap:
    """edge -> line names left-to-right for a traveler going low-id to high-id
    endpoint; terminus_sides maps (line, end 0|1) to its parking side."""

    edge_order: dict[tuple[str, str], tuple[str, ...]]
    terminus_sides: dict[tuple[str, int], str]


def _edge_key(a: str, b: str, idx: dict[str, int]) -> tuple[str, str]:
    return (a, b) if idx[a] < idx[b] else (b, a)


class _Topology:
    """Travel directions, incidences, and frames shared by the ordering code."""

    def __init__(self, g: SupportGraph):
        self.g = g
        self.idx = {v: i for i, v in enumerate(g.vertices)}
        self.names = [s for s in g.line_orders]
        self.name_pos = {s: i for i, s in enumerate(self.names)}
        self.line_edges: dict[str, list[tuple[str, str]]] = {}
        self.travel: dict[str, dict[tuple[str, str], tuple[str, str]]] = {}
        self.at_vertex: dict[str, dict[str, list[tuple[str, str]]]] = {}
        for s in self.names:
            line = g.line_orders[s]
            edges = []
            trav = {}
            at_v: dict[str, list[tuple[str, str]]] = {}
            for a, b in zip(line, line[1:]):
                key = _edge_key(a, b, self.idx)
                edges.append(key)
                trav[key] = (a, b)
                at_v.setdefault(a, []).append(key)
                at_v.setdefault(b, []).append(key)
            self.line_edges[s] = edges
            self.travel[s] = trav
            self.at_vertex[s] = at_v

    def line_frame_reversed(self, s: str, e: tuple[str, str]) -> bool:
        """True when line s travels edge e against its canonical direction."""
        return self.travel[s][e] != e

    @staticmethod
    def enterw_frame_reversed(e: tuple[str, str], w: str) -> bool:
        """True when a traveler arriving at w sees the stored order reversed."""
        return w == e[0]

    def terminus_end(self, s: str, w: str) -> int | None:
        line = self.g.line_orders[s]
        if line and line[0] == w:
            return 0
        if line and line[-1] == w:
            return 1
        return None


def _frame_order(order: tuple[str, ...], reverse: bool) -> tuple[str, ...]:
    return tuple(reversed(order)) if reverse else order


def _divergence_left(
    m: EmbeddedMap,
    w: str,
    e: tuple[str, str],
    out_a: tuple[str, str],
    out_b: tuple[str, str],
    tie_a_first: bool,
) -> bool:
    """Desired 'line a left of line b' entering w via e: the line whose
    continuation swings further counterclockwise from the way back parks
    further left, so the fan opens without crossings."""
    back = e[0] if e[1] == w else e[1]
    wx, wy = m.positions[w]
    bx, by = m.positions[back]
    back_ang = angle_deg(bx - wx, by - wy)

    def beta(out: tuple[str, str]) -> float:
        o = out[0] if out[1] == w else out[1]
        ox, oy = m.positions[o]
        return (angle_deg(ox - wx, oy - wy) - back_ang) % 360.0

    ba, bb = beta(out_a), beta(out_b)
    if abs(ba - bb) < 1e-9:
        return tie_a_first
    return ba > bb


def _pair_cost_at_vertex(
    m: EmbeddedMap,
    topo: _Topology,
    w: str,
    a: str,
    b: str,
    edge_order: dict[tuple[str, str], tuple[str, ...]],
    sides: dict[tuple[str, int], str],
) -> int:
    ea = topo.at_vertex[a].get(w)
    eb = topo.at_vertex[b].get(w)
    if not ea or not eb:
        return 0
    shared = [e for e in ea if e in eb]
    if len(shared) == 2:
        # parallel through w: the lane relation must carry over
        rels = []
        for e in shared:
            frame = _frame_order(edge_order[e], topo.line_frame_reversed(a, e))
            rels.append(frame.index(a) < frame.index(b))
        return 0 if rels[0] == rels[1] else 1
    if len(shared) == 1:
        e = shared[0]
        oa = [x for x in ea if x != e]
        ob = [x for x in eb if x != e]
        frame = _frame_order(edge_order[e], topo.enterw_frame_reversed(e, w))
        if oa and ob:
            want_a_left = _divergence_left(
                m, w, e, oa[0], ob[0],
                tie_a_first=topo.name_pos[a] < topo.name_pos[b],
            )
            is_a_left = frame.index(a) < frame.index(b)
            return 0 if is_a_left == want_a_left else 1
        if not oa and not ob:
            return 0
        term, other = (a, b) if not oa else (b, a)
        side = sides.get((term, topo.terminus_end(term, w)), LEFT)
        term_left = frame.index(term) < frame.index(other)
        return 0 if term_left == (side == LEFT) else 1
    # vertex-only meeting: transversal iff the direction pairs interleave
    if len(ea) < 2 or len(eb) < 2:
        return 0
    wx, wy = m.positions[w]

    def ang(e: tuple[str, str]) -> float:
        o = e[0] if e[1] == w else e[1]
        ox, oy = m.positions[o]
        return angle_deg(ox - wx, oy - wy)

    a1, a2 = sorted((ang(ea[0]), ang(ea[1])))
    inside = sum(1 for e in eb if a1 < ang(e) < a2)
    return 1 if inside == 1 else 0


def realized_line_crossings(m: EmbeddedMap, orders: LineOrderMap) -> int:
    """Total pairwise line crossings the given orders realize on this map."""
    topo = _Topology(m.support)
    total = 0
    for w in m.support.vertices:
        present = [s for s in topo.names if w in topo.at_vertex[s]]
        for i in range(len(present)):
            for j in range(i + 1, len(present)):
                total += _pair_cost_at_vertex(
                    m, topo, w, present[i], present[j], orders.edge_order, orders.terminus_sides
                )
    return total


def _pair_corridors(topo: _Topology, a: str, b: str):
    """Maximal runs of consecutive edges shared by lines a and b, with the
    boundary vertices in a's travel order."""
    eb = set(topo.line_edges[b])
    runs = []
    cur: list[tuple[str, str]] = []
    for e in topo.line_edges[a]:
        if e in eb:
            cur.append(e)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    out = []
    for run in runs:
        first_from, _ = topo.travel[a][run[0]]
        _, last_to = topo.travel[a][run[-1]]
        out.append((run, first_from, last_to))
    return out


def _end_pin(
    m: EmbeddedMap,
    topo: _Topology,
    a: str,
    b: str,
    e: tuple[str, str],
    w: str,
    sides: dict[tuple[str, int], str],
):
    """Constraint on 'a left of b' in a's travel frame on e, at corridor end w.

    ("fixed", bool): forced by a divergence fan or a decided terminus side.
    ("undecided", terminator, pin_if_left): an open terminus; pin_if_left is
    the relation that choosing LEFT for it would force.
    ("free",): both lines end here, any relation is crossing-free.
    """
    oa = [x for x in topo.at_vertex[a].get(w, ()) if x != e]
    ob = [x for x in topo.at_vertex[b].get(w, ()) if x != e]
    flip = topo.line_frame_reversed(a, e) != topo.enterw_frame_reversed(e, w)
    if oa and ob:
        want = _divergence_left(
            m, w, e, oa[0], ob[0], tie_a_first=topo.name_pos[a] < topo.name_pos[b]
        )
        return ("fixed", want != flip)
    if not oa and not ob:
        return ("free",)
    if not oa:
        tau = (a, topo.terminus_end(a, w))
        pin_if_left = not flip  # a parks left entering w -> a left of b there
        if tau in sides:
            return ("fixed", pin_if_left if sides[tau] == LEFT else not pin_if_left)
        return ("undecided", tau, pin_if_left)
    tau = (b, topo.terminus_end(b, w))
    pin_if_left = flip  # b parks left -> a is right of b entering w
    if tau in sides:
        return ("fixed", pin_if_left if sides[tau] == LEFT else not pin_if_left)
    return ("undecided", tau, pin_if_left)


def terminator_heuristic(m: EmbeddedMap) -> dict[tuple[str, int], str]:
    """Choose a parking side for every line end.

    Repeatedly score each open terminus: f_left / f_right count the corridor
    crossings forced against already-fixed far ends when parking left or
    right, r counts partners still open. The terminus with the largest
    |f_left - f_right| - r is fixed to its cheaper side, ties toward left and
    the earlier line."""
    topo = _Topology(m.support)
    sides: dict[tuple[str, int], str] = {}
    pairs = []
    for i in range(len(topo.names)):
        for j in range(i + 1, len(topo.names)):
            a, b = topo.names[i], topo.names[j]
            for run, w0, w1 in _pair_corridors(topo, a, b):
                pairs.append((a, b, run, w0, w1))
    pending = []
    for s in topo.names:
        if topo.line_edges[s]:
            pending.extend([(s, 0), (s, 1)])
    while pending:
        best = None
        for tau in pending:
            f_left = f_right = open_count = 0
            for a, b, run, w0, w1 in pairs:
                ends = (
                    _end_pin(m, topo, a, b, run[0], w0, sides),
                    _end_pin(m, topo, a, b, run[-1], w1, sides),
                )
                for near, far in (ends, ends[::-1]):
                    if near[0] != "undecided" or near[1] != tau:
                        continue
                    if far[0] == "free":
                        continue
                    if far[0] == "undecided":
                        open_count += 1
                        continue
                    pin_if_left = near[2]
                    f_left += 0 if pin_if_left == far[1] else 1
                    f_right += 0 if (not pin_if_left) == far[1] else 1
            score = abs(f_left - f_right) - open_count
            key = (-score, topo.name_pos[tau[0]], tau[1])
            if best is None or key < best[0]:
                best = (key, tau, f_left, f_right)
        _, tau, f_left, f_right = best
        sides[tau] = LEFT if f_left <= f_right else RIGHT
        pending.remove(tau)
    return sides


def _periphery_key(topo: _Topology, e: tuple[str, str], s: str, sides) -> int:
    """0 = pinned to the canonical-left periphery, 2 = right, 1 = interior."""
    a, b = e
    keys = []
    end_b = topo.terminus_end(s, b)
    if end_b is not None and topo.at_vertex[s][b] == [e]:
        keys.append(0 if sides.get((s, end_b), LEFT) == LEFT else 2)
    end_a = topo.terminus_end(s, a)
    if end_a is not None and topo.at_vertex[s][a] == [e]:
        keys.append(0 if sides.get((s, end_a), LEFT) == RIGHT else 2)
    if not keys:
        return 1
    if len(keys) == 1 or keys[0] == keys[1]:
        return keys[0]
    return 1


def _group_permutations(lines: tuple[str, ...], keys: list[int], cap: int = 720):
    """All orders keeping each periphery group at its end, or None above cap."""
    groups: dict[int, list[str]] = {0: [], 1: [], 2: []}
    for s, k in zip(lines, keys):
        groups[k].append(s)
    count = 1
    for p in groups.values():
        for i in range(2, len(p) + 1):
            count *= i
    if count > cap:
        return None
    return [
        p0 + p1 + p2
        for p0 in itertools.permutations(groups[0])
        for p1 in itertools.permutations(groups[1])
        for p2 in itertools.permutations(groups[2])
    ]


def _adjacent_swaps(current: tuple[str, ...], key_of: dict[str, int]):
    out = []
    for i in range(len(current) - 1):
        if key_of[current[i]] == key_of[current[i + 1]]:
            cand = list(current)
            cand[i], cand[i + 1] = cand[i + 1], cand[i]
            out.append(tuple(cand))
    return out


def order_lines(m: EmbeddedMap, sides: dict[tuple[str, int], str]) -> LineOrderMap:
    """Assign per-edge line orders: periphery-respecting start, then sweeps of
    per-edge exhaustive improvement against the realized-crossing objective."""
    topo = _Topology(m.support)
    g = m.support
    edge_lines = g.edge_lines()
    edge_order: dict[tuple[str, str], tuple[str, ...]] = {}
    for e, lines in edge_lines.items():
        keys = [_periphery_key(topo, e, s, sides) for s in lines]
        edge_order[e] = tuple(
            s for _, s in sorted(zip(keys, lines), key=lambda t: (t[0], topo.name_pos[t[1]]))
        )

    def local_cost(e: tuple[str, str]) -> int:
        total = 0
        lines = edge_lines[e]
        for w in e:
            for i in range(len(lines)):
                for j in range(i + 1, len(lines)):
                    total += _pair_cost_at_vertex(
                        m, topo, w, lines[i], lines[j], edge_order, sides
                    )
        return total

    multi = [e for e in g.edges if len(edge_lines[e]) > 1]
    for _ in range(12):
        improved = False
        for e in multi:
            lines = edge_lines[e]
            keys = [_periphery_key(topo, e, s, sides) for s in lines]
            current = edge_order[e]
            cands = _group_permutations(lines, keys)
            if cands is None:
                cands = _adjacent_swaps(current, dict(zip(lines, keys)))
            best = current
            best_cost = local_cost(e)
            for cand in cands:
                cand = tuple(cand)
                if cand == best:
                    continue
                edge_order[e] = cand
                c = local_cost(e)
                if c < best_cost:
                    best, best_cost = cand, c
            edge_order[e] = best
            if best != current:
                improved = True
        if not improved:
            break
    return LineOrderMap(edge_order=edge_order, terminus_sides=dict(sides))

"""Support-graph extraction: one Hamiltonian path per set, union of the paths.

Two strategies: per-set path TSP on inverse-similarity costs (two-opt), and a
global vertex order from a consecutive-ones-motivated TSP over incidence
columns, solved by simulated annealing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import CondensedSystem, SetSystem, signature, similarity


@dataclass(frozen=True)
class SupportGraph:
    """Union of per-set paths. line_orders maps set name -> vertex path."""

    vertices: tuple[str, ...]
    line_orders: dict[str, tuple[str, ...]]

    @property
    def edges(self) -> tuple[tuple[str, str], ...]:
        idx = {v: i for i, v in enumerate(self.vertices)}
        seen: dict[tuple[str, str], None] = {}
        for line in self.line_orders.values():
            for a, b in zip(line, line[1:]):
                key = (a, b) if idx[a] < idx[b] else (b, a)
                seen.setdefault(key)
        return tuple(sorted(seen, key=lambda e: (idx[e[0]], idx[e[1]])))

    def edge_lines(self) -> dict[tuple[str, str], tuple[str, ...]]:
        """Edge -> names of the lines using it, in set order."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        out: dict[tuple[str, str], list[str]] = {e: [] for e in self.edges}
        for name, line in self.line_orders.items():
            for a, b in zip(line, line[1:]):
                key = (a, b) if idx[a] < idx[b] else (b, a)
                out[key].append(name)
        return {e: tuple(v) for e, v in out.items()}


def check_support(g: SupportGraph) -> SupportGraph:
    vset = set(g.vertices)
    if len(vset) != len(g.vertices):
        raise ValueError("duplicate vertices in support graph")
    covered: set[str] = set()
    for name, line in g.line_orders.items():
        if len(set(line)) != len(line):
            raise ValueError(f"line {name!r} repeats a vertex")
        if not set(line) <= vset:
            raise ValueError(f"line {name!r} uses unknown vertices")
        covered.update(line)
    if covered != vset:
        raise ValueError("support graph has vertices on no line")
    return g


def path_cost(order: list[int], cost: np.ndarray) -> float:
    return float(sum(cost[a, b] for a, b in zip(order, order[1:])))


def nearest_neighbor_path(cost: np.ndarray, start: int = 0) -> list[int]:
    """Greedy path from `start`; ties broken toward the lowest index."""
    n = len(cost)
    left = list(range(n))
    left.remove(start)
    order = [start]
    while left:
        cur = order[-1]
        best = min(left, key=lambda j: (cost[cur, j], j))
        left.remove(best)
        order.append(best)
    return order


def two_opt_path(order: list[int], cost: np.ndarray) -> list[int]:
    """Best-improvement two-opt on an open path: reverse the segment that
    shaves the most cost, repeat until no reversal improves."""
    order = list(order)
    n = len(order)
    if n < 3:
        return order
    eps = 1e-12
    while True:
        best_delta = -eps
        best_move = None
        for i in range(n - 1):
            a = order[i - 1] if i > 0 else -1
            for j in range(i + 1, n):
                if i == 0 and j == n - 1:
                    continue  # whole-path reversal, symmetric cost
                b = order[j + 1] if j + 1 < n else -1
                delta = 0.0
                if a >= 0:
                    delta += cost[a, order[j]] - cost[a, order[i]]
                if b >= 0:
                    delta += cost[order[i], b] - cost[order[j], b]
                if delta < best_delta - 1e-15:
                    best_delta = delta
                    best_move = (i, j)
        if best_move is None:
            return order
        i, j = best_move
        order[i:j + 1] = reversed(order[i:j + 1])


def similarity_cost_matrix(vertices: tuple[str, ...], system: SetSystem) -> np.ndarray:
    """Pairwise 1/similarity; infinite only for pairs sharing no set, which
    never happens within one set's vertex list."""
    sigs = np.array([signature(v, system) for v in vertices], dtype=float)
    sim = sigs @ sigs.T
    with np.errstate(divide="ignore"):
        c = 1.0 / sim
    np.fill_diagonal(c, 0.0)
    return c


def extract_support_two_opt(cs: CondensedSystem) -> SupportGraph:
    """Per set, a two-opt path over its kernel vertices under 1/similarity cost.

    Nearest-neighbour init starts at the set's first vertex. A set reduced to a
    single kernel vertex keeps a trivial one-stop line.
    """
    kernel = cs.kernel
    line_orders: dict[str, tuple[str, ...]] = {}
    for s in kernel.sets:
        verts = kernel.members[s]
        if len(verts) < 2:
            line_orders[s] = tuple(verts)
            continue
        c = similarity_cost_matrix(verts, kernel)
        order = two_opt_path(nearest_neighbor_path(c, 0), c)
        line_orders[s] = tuple(verts[i] for i in order)
    return check_support(SupportGraph(vertices=kernel.elements, line_orders=line_orders))


def c1p_cost_matrix(cs: CondensedSystem) -> np.ndarray:
    """Distances between incidence-matrix columns, plus a zero-column dummy
    at the last index."""
    kernel = cs.kernel
    cols = np.array([signature(e, kernel) for e in kernel.elements], dtype=float)
    cols = np.vstack([cols, np.zeros(len(kernel.sets))])
    diff = cols[:, None, :] - cols[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=2))


def tour_cost(tour: list[int], cost: np.ndarray) -> float:
    return float(sum(cost[a, b] for a, b in zip(tour, tour[1:] + tour[:1])))


def anneal_tour(cost: np.ndarray, seed: int, budget: int = 500) -> list[int]:
    """Cyclic TSP by simulated annealing; the dummy is assumed at the last index
    and the returned permutation is the best tour cut open at the dummy.

    Nearest-neighbour seed from the dummy; geometric cooling from the mean edge
    cost, factor 0.995 per sweep, one sweep = n random segment reversals.
    """
    n = len(cost)
    dummy = n - 1
    rng = np.random.default_rng(seed)
    tour = nearest_neighbor_path(cost, dummy)
    cur = tour_cost(tour, cost)
    best, best_cost = list(tour), cur
    off_diag = cost[~np.eye(n, dtype=bool)]
    temp = float(off_diag.mean()) if n > 1 else 1.0
    for _ in range(budget):
        for _ in range(n):
            i, j = sorted(rng.integers(0, n, size=2))
            if i == j or (i == 0 and j == n - 1):
                continue
            a, b = tour[i - 1], tour[i]
            c_, d = tour[j], tour[(j + 1) % n]
            delta = cost[a, c_] + cost[b, d] - cost[a, b] - cost[c_, d]
            if delta < 0 or (temp > 0 and rng.random() < np.exp(-delta / temp)):
                tour[i:j + 1] = reversed(tour[i:j + 1])
                cur += delta
                if cur < best_cost - 1e-12:
                    best, best_cost = list(tour), cur
        temp *= 0.995
    cut = best.index(dummy)
    opened = best[cut + 1:] + best[:cut]
    return opened


def extract_support_c1p(cs: CondensedSystem, seed: int, budget: int = 500) -> SupportGraph:
    """One global vertex order from the annealed incidence-column tour; each
    set's line is its subsequence of that order."""
    kernel = cs.kernel
    cost = c1p_cost_matrix(cs)
    perm = anneal_tour(cost, seed, budget)
    order = [kernel.elements[i] for i in perm]
    member_sets = {s: set(kernel.members[s]) for s in kernel.sets}
    line_orders = {
        s: tuple(v for v in order if v in member_sets[s]) for s in kernel.sets
    }
    return check_support(SupportGraph(vertices=kernel.elements, line_orders=line_orders))

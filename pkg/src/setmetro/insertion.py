"""Re-insertion of condensed vertices into the kernel support.

Expansion replaces each merged representative by its member chain; singles
either all join the front of their set's line (first-viable) or are split
between the front and subdivisions of edges private to that line (split).
"""

from __future__ import annotations

from .model import CondensedSystem
from .support import SupportGraph, check_support


def _rebuild(cs: CondensedSystem, line_orders: dict[str, tuple[str, ...]]) -> SupportGraph:
    used: set[str] = set()
    for line in line_orders.values():
        used.update(line)
    vertices = tuple(e for e in cs.source.elements if e in used)
    return check_support(SupportGraph(vertices=vertices, line_orders=line_orders))


def expand_merged(g: SupportGraph, cs: CondensedSystem) -> SupportGraph:
    """Replace every merged representative by its member chain, same direction
    on every line, so shared expansions stay conjoint."""
    line_orders: dict[str, tuple[str, ...]] = {}
    for name, line in g.line_orders.items():
        out: list[str] = []
        for v in line:
            out.extend(cs.merge_map.get(v, (v,)))
        line_orders[name] = tuple(out)
    return _rebuild(cs, line_orders)


def insert_first_viable(g: SupportGraph, cs: CondensedSystem) -> SupportGraph:
    """Prepend each set's removed singles, input order, before its first stop."""
    line_orders = dict(g.line_orders)
    for s in cs.source.sets:
        singles = cs.singles_map.get(s, ())
        if singles:
            line_orders[s] = tuple(singles) + line_orders[s]
    return _rebuild(cs, line_orders)


def insert_split(g: SupportGraph, cs: CondensedSystem) -> SupportGraph:
    """Prepend the first ceil(m/2) singles; spread the rest round-robin over
    edges private to the set's line, subdividing them in position order.

    A set with no private edge falls back to prepending everything.
    """
    line_orders = {name: list(line) for name, line in g.line_orders.items()}
    for s in cs.source.sets:
        singles = list(cs.singles_map.get(s, ()))
        if not singles:
            continue
        line = line_orders[s]
        edge_use: dict[tuple[str, str], int] = {}
        for name, other in line_orders.items():
            for a, b in zip(other, other[1:]):
                key = (a, b) if a < b else (b, a)
                edge_use[key] = edge_use.get(key, 0) + 1
        candidates = []
        for pos, (a, b) in enumerate(zip(line, line[1:])):
            key = (a, b) if a < b else (b, a)
            if edge_use[key] == 1:
                candidates.append(pos)
        if not candidates:
            line_orders[s] = singles + line
            continue
        half = (len(singles) + 1) // 2
        prefix, spread = singles[:half], singles[half:]
        per_edge: dict[int, list[str]] = {pos: [] for pos in candidates}
        for i, v in enumerate(spread):
            per_edge[candidates[i % len(candidates)]].append(v)
        out: list[str] = prefix + [line[0]]
        for pos in range(len(line) - 1):
            out.extend(per_edge.get(pos, ()))
            out.append(line[pos + 1])
        line_orders[s] = out
    return _rebuild(cs, {name: tuple(v) for name, v in line_orders.items()})

"""Random connected sub-hypergraphs of a larger set system.

Picks a connected collection of sets, then swaps sets in and out to steer the
element count toward a target. Deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SetSystem, check_set_system


@dataclass(frozen=True)
class SampleResult:
    system: SetSystem
    target_elements: int
    achieved: bool


def _connected(chosen: list[str], members: dict[str, tuple[str, ...]]) -> bool:
    if not chosen:
        return False
    memb = {s: set(members[s]) for s in chosen}
    seen = {chosen[0]}
    frontier = [chosen[0]]
    while frontier:
        cur = frontier.pop()
        for other in chosen:
            if other not in seen and memb[cur] & memb[other]:
                seen.add(other)
                frontier.append(other)
    return len(seen) == len(chosen)


def _element_count(chosen: list[str], members: dict[str, tuple[str, ...]]) -> int:
    out: set[str] = set()
    for s in chosen:
        out.update(members[s])
    return len(out)


def subsample(
    base: SetSystem,
    n_elements: int,
    n_sets: int,
    seed: int = 0,
    max_swaps: int | None = None,
) -> SampleResult:
    """Sample a connected induced subsystem with n_sets sets, steering the
    union of members toward n_elements by greedy set swaps."""
    if n_sets < 1 or n_sets > len(base.sets):
        raise ValueError(
            f"cannot sample {n_sets} sets from a system with {len(base.sets)}"
        )
    rng = np.random.default_rng(seed)
    members = base.members
    chosen = [base.sets[int(rng.integers(len(base.sets)))]]
    while len(chosen) < n_sets:
        covered: set[str] = set()
        for s in chosen:
            covered.update(members[s])
        candidates = [
            s for s in base.sets
            if s not in chosen and covered.intersection(members[s])
        ]
        if not candidates:
            break
        chosen.append(candidates[int(rng.integers(len(candidates)))])
    if len(chosen) < n_sets:
        sub = _build(base, chosen)
        return SampleResult(sub, n_elements, False)

    budget = max_swaps if max_swaps is not None else 10 * n_sets
    count = _element_count(chosen, members)
    while count != n_elements and budget > 0:
        budget -= 1
        best = None
        best_gap = abs(count - n_elements)
        for out_set in chosen:
            rest = [s for s in chosen if s != out_set]
            if not _connected(rest, members):
                continue
            for in_set in base.sets:
                if in_set in chosen:
                    continue
                trial = rest + [in_set]
                if not _connected(trial, members):
                    continue
                gap = abs(_element_count(trial, members) - n_elements)
                if gap < best_gap:
                    best_gap = gap
                    best = (out_set, in_set)
        if best is None:
            break
        chosen = [s for s in chosen if s != best[0]] + [best[1]]
        count = _element_count(chosen, members)

    sub = _build(base, chosen)
    return SampleResult(sub, n_elements, count == n_elements)


def _build(base: SetSystem, chosen: list[str]) -> SetSystem:
    ordered = [s for s in base.sets if s in chosen]
    sub = SetSystem(
        sets=tuple(ordered),
        members={s: base.members[s] for s in ordered},
    )
    return check_set_system(sub)

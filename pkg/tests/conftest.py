"""Shared fixtures: deterministic random set systems and finished maps."""

from __future__ import annotations

import numpy as np
import pytest

from setmetro import SetSystem, run_pipeline


def random_system(n: int, h: int, seed: int) -> SetSystem:
    """Connected random set system with ~n elements over h sets.

    Consecutive sets share a link element so the intersection graph is
    connected; every other element joins 1-3 uniformly chosen sets.
    """
    rng = np.random.default_rng(seed)
    sets = [f"S{i}" for i in range(h)]
    members: dict[str, list[str]] = {s: [] for s in sets}
    for i in range(h - 1):
        e = f"link{i}"
        members[sets[i]].append(e)
        members[sets[i + 1]].append(e)
    used = h - 1
    j = 0
    while used < n:
        e = f"v{j}"
        j += 1
        k = int(rng.integers(1, 4))
        for s in rng.choice(h, size=min(k, h), replace=False):
            members[sets[int(s)]].append(e)
        used += 1
    for s in sets:
        while len(set(members[s])) < 2:
            e = f"v{j}"
            j += 1
            members[s].append(e)
    return SetSystem(sets=tuple(sets), members={s: tuple(v) for s, v in members.items()})


def suite_params(count: int = 30) -> list[tuple[int, int, int]]:
    """(n, h, seed) triples for the shared random-map suite."""
    rng = np.random.default_rng(42)
    out = []
    for i in range(count):
        n = int(rng.integers(20, 61))
        h = int(rng.integers(4, 9))
        out.append((n, h, 1000 + i))
    return out


@pytest.fixture(scope="session")
def suite30():
    return [random_system(n, h, seed) for n, h, seed in suite_params(30)]


@pytest.fixture(scope="session")
def suite30_balanced(suite30):
    """Balanced-preset pipeline results for the shared suite (computed once)."""
    return [run_pipeline(system, preset="balanced", seed=0) for system in suite30]


def fig_system() -> SetSystem:
    """Two sets overlapping in a 4-element middle block, 2 private each."""
    return SetSystem(
        sets=("s1", "s2"),
        members={
            "s1": ("v1", "v2", "v3", "v4", "v5", "v6"),
            "s2": ("v3", "v4", "v5", "v6", "v7", "v8"),
        },
    )

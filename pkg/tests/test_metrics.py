import math

import numpy as np
import pytest

from setmetro.geometry import (
    in_closed_diameter_disk,
    octolinear_deviation,
    segments_properly_cross,
)
from setmetro.layout import EmbeddedMap
from setmetro.metrics import (
    compute_metrics,
    consecutive_ones_score,
    edge_crossings,
    edge_uniformity,
    gabriel_score,
    monotonicity,
    octolinearity,
    self_crossings,
)
from setmetro.support import SupportGraph, check_support

from test_layout import make_support


def embed(line_orders, positions):
    g = make_support(line_orders)
    return EmbeddedMap(g, {k: (float(x), float(y)) for k, (x, y) in positions.items()})


def random_map(seed, n_max=40):
    """Random embedded multi-line map for oracle comparisons."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(6, n_max + 1))
    names = [f"v{i}" for i in range(n)]
    lines = {}
    n_lines = int(rng.integers(2, 5))
    for k in range(n_lines):
        size = int(rng.integers(2, max(3, n // 2)))
        picks = list(rng.permutation(n)[:size])
        lines[f"L{k}"] = [names[i] for i in picks]
    # chain lines together so the union is connected
    keys = list(lines)
    for a, b in zip(keys, keys[1:]):
        if not set(lines[a]) & set(lines[b]):
            lines[b][0] = lines[a][-1]
    used = sorted({v for vs in lines.values() for v in vs})
    pos = {v: tuple(rng.uniform(0, 10, 2)) for v in used}
    g = check_support(SupportGraph(
        vertices=tuple(used),
        line_orders={k: tuple(v) for k, v in lines.items()},
    ))
    return EmbeddedMap(g, pos)


# ---------------------------------------------------------------- oracles

def oracle_octolinearity(m):
    devs = []
    for a, b in m.support.edges:
        (ax, ay), (bx, by) = m.positions[a], m.positions[b]
        ang = math.degrees(math.atan2(by - ay, bx - ax)) % 45.0
        devs.append(min(ang, 45.0 - ang))
    return (sum(devs) / len(devs), max(devs)) if devs else (0.0, 0.0)


def oracle_gabriel(m):
    count = 0
    for a, b in m.support.edges:
        (ax, ay), (bx, by) = m.positions[a], m.positions[b]
        cx, cy = (ax + bx) / 2, (ay + by) / 2
        r = math.hypot(bx - ax, by - ay) / 2
        for w in m.support.vertices:
            if w in (a, b):
                continue
            wx, wy = m.positions[w]
            if math.hypot(wx - cx, wy - cy) <= r + 1e-12:
                count += 1
    return count


def oracle_edge_crossings(m):
    edges = list(m.support.edges)
    count = 0
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            a, b = edges[i]
            c, d = edges[j]
            if len({a, b, c, d}) < 4:
                continue
            if segments_properly_cross(
                m.positions[a], m.positions[b], m.positions[c], m.positions[d]
            ):
                count += 1
    return count


def oracle_c1p(g):
    total = 0
    names = list(g.line_orders)
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            a, b = g.line_orders[names[i]], g.line_orders[names[j]]
            shared = set(a) & set(b)
            if not shared:
                continue
            both = {frozenset(p) for p in zip(a, a[1:])} & {
                frozenset(p) for p in zip(b, b[1:])
            }
            # count connected components of (shared, both) by BFS
            seen = set()
            comps = 0
            adj = {v: set() for v in shared}
            for e in both:
                u, v = tuple(e)
                adj[u].add(v)
                adj[v].add(u)
            for v in shared:
                if v in seen:
                    continue
                comps += 1
                stack = [v]
                while stack:
                    x = stack.pop()
                    if x in seen:
                        continue
                    seen.add(x)
                    stack.extend(adj[x] - seen)
            total += comps - 1
    return total


@pytest.mark.parametrize("seed", range(50))
def test_measures_match_independent_oracles(seed):
    m = random_map(seed)
    assert octolinearity(m) == pytest.approx(oracle_octolinearity(m))
    assert gabriel_score(m) == oracle_gabriel(m)
    assert edge_crossings(m) == oracle_edge_crossings(m)
    assert consecutive_ones_score(m.support) == oracle_c1p(m.support)


# ---------------------------------------------------------------- fixtures

def test_uniformity_known_lengths():
    m = embed({"L": ["a", "b", "c", "d"]},
              {"a": (0, 0), "b": (1, 0), "c": (2, 0), "d": (6, 0)})
    avg, worst = edge_uniformity(m)
    assert avg == pytest.approx(2.0 / 3.0)
    assert worst == pytest.approx(1.0)


def test_uniformity_equal_lengths_is_zero():
    m = embed({"L": ["a", "b", "c"]}, {"a": (0, 0), "b": (1, 0), "c": (2, 0)})
    assert edge_uniformity(m) == (0.0, 0.0)


def test_monotonicity_counts_reversals():
    # x runs 0, 2, 1, 3: one step against the overall left-to-right direction
    m = embed({"L": ["a", "b", "c", "d"]},
              {"a": (0, 0), "b": (2, 0), "c": (1, 0.1), "d": (3, 0)})
    assert monotonicity(m) == 1


def test_monotonicity_straight_line_is_zero():
    m = embed({"L": ["a", "b", "c"]}, {"a": (0, 0), "b": (1, 1), "c": (2, 2)})
    assert monotonicity(m) == 0


def test_monotonicity_zigzag_double():
    m = embed({"L": ["a", "b", "c", "d", "e", "f"]},
              {"a": (0, 0), "b": (2, 0), "c": (1, 0.5),
               "d": (3, 0.5), "e": (2, 1), "f": (4, 1)})
    assert monotonicity(m) == 2


def test_monotonicity_perpendicular_steps_inherit():
    m = embed({"L": ["a", "b", "c"]}, {"a": (0, 0), "b": (0, 1), "c": (1, 1)})
    # first step is perpendicular to the crow-flies direction (1,1)? no:
    # dot((0,1),(1,1)) = 1 > 0, then dot((1,0),(1,1)) = 1 > 0: no reversal
    assert monotonicity(m) == 0


def test_gabriel_station_inside_disk():
    m = embed({"L1": ["a", "b"], "L2": ["a", "c"], "L3": ["b", "c"]},
              {"a": (0, 0), "b": (2, 0), "c": (1, 0.2)})
    # c sits inside the diameter disk of edge (a, b)
    assert gabriel_score(m) == 1
    assert in_closed_diameter_disk(m.positions["c"], m.positions["a"], m.positions["b"])


def test_gabriel_clear_map_scores_zero():
    m = embed({"L1": ["a", "b"], "L2": ["b", "c"]},
              {"a": (0, 0), "b": (1, 0), "c": (1, 5)})
    assert gabriel_score(m) == 0


def test_c1p_fragmented_overlap():
    # lines share x and z but no shared edge joins them: two pieces
    g = make_support({
        "A": ["x", "m", "z", "q"],
        "B": ["x", "n", "z", "r"],
    })
    assert consecutive_ones_score(g) == 1


def test_c1p_contiguous_overlap_zero():
    g = make_support({"A": ["p", "x", "y", "q"], "B": ["r", "x", "y", "s"]})
    assert consecutive_ones_score(g) == 0


def test_self_crossing_bowtie():
    m = embed({"L": ["a", "b", "c", "d"]},
              {"a": (0, 0), "b": (1, 1), "c": (1, 0), "d": (0, 1)})
    assert self_crossings(m) == 1


def test_self_crossing_straight_zero():
    m = embed({"L": ["a", "b", "c", "d"]},
              {"a": (0, 0), "b": (1, 0), "c": (2, 0), "d": (3, 0)})
    assert self_crossings(m) == 0


def test_edge_crossings_shared_endpoint_not_counted():
    m = embed({"L1": ["a", "b"], "L2": ["a", "c"]},
              {"a": (0, 0), "b": (1, 1), "c": (1, -1)})
    assert edge_crossings(m) == 0


# ---------------------------------------------------------------- invariance

def rigid_variants(m, seed):
    rng = np.random.default_rng(seed)
    th = rng.uniform(0, 2 * math.pi)
    c, s = math.cos(th), math.sin(th)
    tx, ty = rng.uniform(-5, 5, 2)
    scale = rng.uniform(0.5, 3.0)

    def translate(p):
        return (p[0] + tx, p[1] + ty)

    def scaled(p):
        return (p[0] * scale, p[1] * scale)

    def rotate(p):
        return (p[0] * c - p[1] * s, p[0] * s + p[1] * c)

    for f in (translate, scaled):
        yield EmbeddedMap(m.support, {v: f(p) for v, p in m.positions.items()}), True
    yield EmbeddedMap(m.support, {v: rotate(p) for v, p in m.positions.items()}), False


@pytest.mark.parametrize("seed", range(10))
def test_counts_invariant_under_similarity(seed):
    m = random_map(seed + 100, n_max=25)
    base = (monotonicity(m), gabriel_score(m), edge_crossings(m), self_crossings(m))
    for variant, _ in rigid_variants(m, seed):
        assert (monotonicity(variant), gabriel_score(variant),
                edge_crossings(variant), self_crossings(variant)) == base


@pytest.mark.parametrize("seed", range(10))
def test_uniformity_invariant_translation_and_scale(seed):
    m = random_map(seed + 200, n_max=25)
    base = edge_uniformity(m)
    for variant, length_free in rigid_variants(m, seed):
        assert edge_uniformity(variant) == pytest.approx(base)
        if not length_free:
            # rotation also preserves octolinearity only up to the grid; skip
            continue


def test_octolinearity_invariant_under_translation_and_scale():
    m = random_map(7)
    base = octolinearity(m)
    shifted = EmbeddedMap(m.support, {v: (x + 3, y - 2) for v, (x, y) in m.positions.items()})
    scaled = EmbeddedMap(m.support, {v: (2 * x, 2 * y) for v, (x, y) in m.positions.items()})
    assert octolinearity(shifted) == pytest.approx(base)
    assert octolinearity(scaled) == pytest.approx(base)


def test_octolinearity_rotation_by_45_preserves():
    m = random_map(8)
    base = octolinearity(m)
    c = s = math.sqrt(0.5)
    rot = EmbeddedMap(m.support, {
        v: (x * c - y * s, x * s + y * c) for v, (x, y) in m.positions.items()
    })
    assert octolinearity(rot) == pytest.approx(base)


# ---------------------------------------------------------------- report

def test_report_dict_keys_and_running_time():
    m = random_map(3, n_max=12)
    rep = compute_metrics(m, timings={"layout": 0.5, "total": 1.0})
    d = rep.as_dict()
    assert set(d) == {
        "avg_octolinearity", "max_octolinearity", "avg_edge_uniformity",
        "max_edge_uniformity", "monotonicity", "gabriel_score",
        "consecutive_ones", "edge_crossings", "self_crossings",
        "line_crossings", "running_time",
    }
    assert d["running_time"] == {"layout": 0.5, "total": 1.0}


def test_report_without_timings_omits_running_time():
    m = random_map(4, n_max=12)
    assert "running_time" not in compute_metrics(m).as_dict()

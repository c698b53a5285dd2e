import json

import pytest

from setmetro import (
    condense,
    expand_merged,
    extract_support_two_opt,
    insert_first_viable,
    insert_split,
    parse_set_system,
)
from setmetro.support import check_support

from conftest import fig_system, random_system


def build(payload):
    s = parse_set_system(json.dumps(payload))
    cs = condense(s)
    g = extract_support_two_opt(cs)
    return s, cs, g


def test_expand_merged_replaces_representative_with_chain():
    s, cs, g = build({"sets": {
        "A": ["x", "y", "c", "z1", "z2"],
        "B": ["x", "y", "d"],
        "C": ["c", "d"],
    }})
    out = expand_merged(g, cs)
    for name in ("A", "B"):
        order = out.line_orders[name]
        assert abs(order.index("x") - order.index("y")) == 1


def test_expand_merged_same_direction_on_every_line():
    s, cs, g = build({"sets": {
        "A": ["m1", "m2", "m3", "a", "p"],
        "B": ["m1", "m2", "m3", "b", "p"],
    }})
    out = expand_merged(g, cs)
    chains = []
    for name in ("A", "B"):
        order = out.line_orders[name]
        idx = [order.index(v) for v in ("m1", "m2", "m3")]
        assert max(idx) - min(idx) == 2
        chains.append(tuple(sorted(idx)) == tuple(idx))
    # both lines traverse the chain as m1,m2,m3 or both reversed
    assert len(set(chains)) in (1, 2)
    seq_a = [v for v in out.line_orders["A"] if v in ("m1", "m2", "m3")]
    seq_b = [v for v in out.line_orders["B"] if v in ("m1", "m2", "m3")]
    assert seq_a == seq_b or seq_a == seq_b[::-1]


def test_expand_merged_identity_without_merges():
    s, cs, g = build({"sets": {"A": ["x", "y"], "B": ["y", "z"], "C": ["z", "x"]}})
    out = expand_merged(g, cs)
    assert out.line_orders == g.line_orders


def test_first_viable_prepends_in_input_order():
    s, cs, g = build({"sets": {
        "A": ["p", "q", "a1", "a2"],
        "B": ["p", "q", "r"],
        "C": ["q", "r"],
    }})
    mid = expand_merged(g, cs)
    out = insert_first_viable(mid, cs)
    order = out.line_orders["A"]
    assert order[:2] == ("a1", "a2") or order[:2] == ["a1", "a2"]
    check_support(out)


def test_first_viable_identity_without_singles():
    s, cs, g = build({"sets": {"A": ["x", "y"], "B": ["y", "z"], "C": ["z", "x"]}})
    out = insert_first_viable(expand_merged(g, cs), cs)
    assert out.line_orders == g.line_orders


def test_split_insert_half_prepended_rest_subdivide_private_edges():
    # A has a private corridor; B and C share only one vertex each with it
    s, cs, g = build({"sets": {
        "A": ["p", "q", "r", "a1", "a2", "a3", "a4"],
        "B": ["r", "s", "t"],
        "C": ["p", "s"],
    }})
    mid = expand_merged(g, cs)
    out = insert_split(mid, cs)
    order = list(out.line_orders["A"])
    singles = list(cs.singles_map["A"])
    assert len(singles) >= 4
    half = (len(singles) + 1) // 2
    # first ceil(m/2) prepended in input order
    assert order[:half] == singles[:half]
    # the rest appear as interior stations, not at the ends
    for v in singles[half:]:
        pos = order.index(v)
        assert 0 < pos < len(order) - 1
    check_support(out)
    # every set still induces a path over exactly its own members
    for name in s.sets:
        assert sorted(out.line_orders[name]) == sorted(set(s.members[name]))


def test_split_insert_single_vertex_prepends():
    s, cs, g = build({"sets": {
        "A": ["p", "q", "a1"],
        "B": ["p", "q", "r"],
        "C": ["q", "r"],
    }})
    out = insert_split(expand_merged(g, cs), cs)
    assert out.line_orders["A"][0] == "a1"


def test_split_insert_no_private_edges_degenerates_to_prepend_all():
    # kernels of A and B are both the single edge (p, q): nothing private to A
    s, cs, g = build({"sets": {
        "A": ["p", "q", "a1", "a2", "a3"],
        "B": ["p", "q", "b"],
        "C": ["q", "c"],
    }})
    mid = expand_merged(g, cs)
    assert set(mid.line_orders["A"]) == {"p", "q"}
    assert set(mid.line_orders["B"]) == {"p", "q"}
    out = insert_split(mid, cs)
    order = list(out.line_orders["A"])
    assert order[:3] == ["a1", "a2", "a3"]


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("which", ["split", "first-viable"])
def test_insertion_restores_all_elements(which, seed):
    s = random_system(35, 6, seed)
    cs = condense(s)
    g = expand_merged(extract_support_two_opt(cs), cs)
    out = insert_split(g, cs) if which == "split" else insert_first_viable(g, cs)
    assert sorted(out.vertices) == sorted(s.elements)
    for name in s.sets:
        order = out.line_orders[name]
        assert sorted(order) == sorted(set(s.members[name]))
    check_support(out)


def test_split_insert_edge_bookkeeping():
    s = random_system(40, 5, 17)
    cs = condense(s)
    g = expand_merged(extract_support_two_opt(cs), cs)
    out = insert_split(g, cs)
    # m inserted vertices add exactly m edges overall:
    # each prepend adds 1, each subdivision replaces 1 edge with 2
    m = len(out.vertices) - len(g.vertices)
    assert len(out.edges) == len(g.edges) + m


def test_fig_first_viable_tails():
    s = fig_system()
    cs = condense(s)
    g = expand_merged(extract_support_two_opt(cs), cs)
    out = insert_first_viable(g, cs)
    # each line gains its own private prefix
    assert out.line_orders["s1"][0] not in set(s.members["s2"])
    assert out.line_orders["s2"][0] not in set(s.members["s1"])

import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_graph
from signedhom.sgraph import (
    BI, BLUE, RED, EdgeKind, Homomorphism, InputError, Instance, ParseError, Sign, SignedGraph,
    apply_switching, balancing_potential, bicoloured_part, blue_part, build_switching_graph,
    closed_walk_sign, cycle_graph, format_homomorphism, is_uni_balanced, parse_graph,
    parse_homomorphism, parse_lists, path_graph, plus_lists, serialize_graph, serialize_lists,
)

kinds = st.sampled_from([BLUE, RED, BI])


@st.composite
def signed_graphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    vs = [f"v{i}" for i in range(n)]
    G = SignedGraph(vs)
    for i in range(n):
        for j in range(i + 1, n):
            k = draw(st.one_of(st.none(), kinds))
            if k is not None:
                G.add_edge(vs[i], vs[j], k)
        k = draw(st.one_of(st.none(), kinds))
        if k is not None:
            G.add_loop(vs[i], k)
    return G


def test_edge_kinds():
    assert BI.covers(BLUE) and BI.covers(RED) and not BLUE.covers(BI)
    assert BLUE.negate() is RED and BI.negate() is BI
    assert BI.signs == {Sign.BLUE, Sign.RED}
    assert EdgeKind.parse("-+") is BI
    with pytest.raises(InputError):
        EdgeKind.parse("x")


def test_graph_basics():
    G = path_graph([BLUE, BI], loops={1: RED})
    assert G.vertices == ["v1", "v2", "v3"]
    assert G.kind("v2", "v1") is BLUE and G.kind("v1", "v1") is RED and G.kind("v1", "v3") is None
    assert G.is_tree() and not cycle_graph([BLUE] * 3).is_tree()
    with pytest.raises(InputError):
        G.add_edge("v1", "v1", BLUE)


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError) as e:
        parse_graph("sg 1\nvertex a\n\nedge a b *\n")
    assert e.value.lineno == 4
    with pytest.raises(ParseError) as e:
        parse_graph("sg 1\nedge a b +\nedge b a -\n")
    assert e.value.lineno == 3
    with pytest.raises(ParseError):
        parse_graph("graph\n")
    with pytest.raises(ParseError):
        parse_graph("# nothing\n")
    with pytest.raises(ParseError):
        parse_graph("sg 1\nedge a a +\n")


def test_lists_parse_and_fill():
    G = path_graph([BLUE])
    H = cycle_graph([BLUE] * 3, prefix="h")
    lists = parse_lists("lists 1\nmap v1 : h2 h3  # comment\n", G, H)
    assert lists == {"v1": ["h2", "h3"], "v2": ["h1", "h2", "h3"]}
    assert parse_lists(serialize_lists(lists), G, H) == lists
    for bad in ("lists 1\nmap v9 : h1\n", "lists 1\nmap v1 : h9\n", "lists 1\nmap v1 h1\n",
                "lists 1\nmap v1 : h1\nmap v1 : h2\n"):
        with pytest.raises(ParseError):
            parse_lists(bad, G, H)


def test_instance_normalises_lists():
    G = path_graph([BLUE])
    H = path_graph([BLUE, RED], prefix="h")
    inst = Instance(G, H, {"v1": ["h3", "h1"]})
    assert inst.lists == {"v1": ["h1", "h3"], "v2": ["h1", "h2", "h3"]}
    with pytest.raises(InputError):
        Instance(G, H, {"v1": ["zz"]})
    with pytest.raises(InputError):
        Instance(G, H, {"zz": ["h1"]})


def test_homomorphism_text_round_trip():
    G = path_graph([BLUE, RED])
    hom = Homomorphism({"v1": "a", "v2": "b", "v3": "a"}, frozenset({"v2"}))
    text = format_homomorphism(G, hom)
    assert text == "map v1 -> a\nmap v2 -> b switched\nmap v3 -> a\n"
    assert parse_homomorphism(text) == hom
    assert parse_homomorphism(format_homomorphism(G, None)) is None


@given(signed_graphs())
def test_serialise_round_trip(G):
    assert parse_graph(serialize_graph(G)) == G


@given(signed_graphs(), st.data())
def test_switching_is_an_involution_fixing_loops_and_bicoloured_edges(G, data):
    S = data.draw(st.sets(st.sampled_from(G.vertices)))
    Gs = apply_switching(G, S)
    assert apply_switching(Gs, S) == G
    assert Gs.loops == G.loops
    assert {e for e, k in Gs.edges.items() if k is BI} == {e for e, k in G.edges.items() if k is BI}
    assert apply_switching(G, G.vertices) == G


@given(signed_graphs(), st.data())
def test_balance_is_switching_invariant(G, data):
    S = data.draw(st.sets(st.sampled_from(G.vertices)))
    assert is_uni_balanced(G) == is_uni_balanced(apply_switching(G, S))
    pot = balancing_potential(G)
    if pot is not None:
        Gb = apply_switching(G, [v for v, p in pot.items() if p])
        assert all(k is not RED for k in Gb.edges.values())


def test_closed_walk_sign():
    C = cycle_graph([BLUE, RED, RED])
    assert closed_walk_sign(C, ["v1", "v2", "v3", "v1"]) is Sign.BLUE
    assert closed_walk_sign(C, ["v1", "v2", "v1"]) is Sign.BLUE
    assert closed_walk_sign(cycle_graph([BLUE, BLUE, RED]), ["v1", "v2", "v3", "v1"]) is Sign.RED
    assert closed_walk_sign(cycle_graph([BLUE, BI, RED]), ["v1", "v2", "v3", "v1"]) is None
    with pytest.raises(InputError):
        closed_walk_sign(C, ["v1", "v2"])


def test_parts():
    G = path_graph([BLUE, BI, RED], loops={1: BI, 4: RED})
    assert set(blue_part(G).edges) == set(path_graph([BLUE, BI]).edges)
    B = bicoloured_part(G)
    assert B.vertices == ["v1", "v2", "v3"] and B.loops == {"v1": BI}


def test_switching_graph():
    H = path_graph([BLUE, BI], loops={1: RED})
    sw = build_switching_graph(H)
    assert len(sw.vertices) == 6
    assert sw.partner["v1"] == "v1'" and sw.origin["v1'"] == "v1" and sw.flipped["v1'"]
    b = sw.base
    assert b.has(Sign.BLUE, "v1", "v2") and b.has(Sign.RED, "v1", "v2'") and not b.has(Sign.RED, "v1", "v2")
    assert b.has(Sign.BLUE, "v2", "v3'") and b.has(Sign.RED, "v2", "v3'")
    # a loop at v1 becomes loops at v1 and v1' plus an edge of the other colour between them
    assert b.has(Sign.RED, "v1", "v1") and b.has(Sign.RED, "v1'", "v1'") and b.has(Sign.BLUE, "v1", "v1'")
    assert plus_lists(sw, {"x": ["v2"]}) == {"x": ["v2", "v2'"]}


def test_twin_names_avoid_clashes():
    H = SignedGraph(["a", "a'"], [("a", "a'", BLUE)])
    sw = build_switching_graph(H)
    assert len(set(sw.vertices)) == 4


@settings(max_examples=50)
@given(st.integers(0, 10 ** 6))
def test_switching_graph_is_switching_invariant_up_to_twins(seed):
    rng = random.Random(seed)
    H = random_graph(rng, rng.randint(1, 5))
    S = {v for v in H.vertices if rng.random() < 0.5}
    a = build_switching_graph(H).base
    b = build_switching_graph(apply_switching(H, S)).base
    sw = build_switching_graph(H)
    swap = {x: (sw.partner[x] if sw.origin[x] in S else x) for x in sw.vertices}
    img = lambda es: {frozenset(swap[x] for x in e) for e in es}
    assert img(a.blue) == b.blue and img(a.red) == b.red

import itertools
import random

import networkx as nx
import pytest

from c2lab import corpus
from c2lab.c2 import c2_definition
from c2lab.graph import Graph, GraphError, circulant, decomplete
from c2lab.proof import (
    EXPANSION_TERMS,
    EdgeBipartition,
    LemmaViolation,
    bipartition_set,
    build_swap_graph,
    c2_from_bipartitions,
    classify_case,
    compatible_cycles,
    control_swap,
    control_vertex,
    count,
    crossing_edges,
    cycle_swap,
    ell_identity,
    expansion_check,
    two_valent_swap,
    union_members,
    valid_bipartitions,
    verify_pair,
)
from c2lab.proof.involutions import control_data
from c2lab.proof.verify import A_VERT_TERMS, B_VERT_TERMS, CYCLE_TERMS, T_SWAP_B_TERMS, T_SWAP_C_TERMS

from conftest import k44, triangle


def k33_completion():
    """K_{3,3} on a,b,c | d,e,f plus w ~ a,b,c and v ~ d,e,f, v ~ w."""
    a, b, c, d, e, f, v, w = range(8)
    edges = [(x, y) for x in (a, b, c) for y in (d, e, f)]
    edges += [(w, a), (w, b), (w, c), (v, d), (v, e), (v, f), (v, w)]
    return Graph.from_edges(8, edges), v, w


def pairs_by_case(graphs):
    out = {"R": [], "S": [], "T": []}
    for k in graphs:
        for v, w in k.edges:
            cfg = classify_case(k, v, w)
            if cfg.case in out:
                out[cfg.case].append(cfg)
    return out


ODD = corpus.load("random7")[:6] + corpus.load("random9")[:6] + [circulant(7), circulant(9)]
BY_CASE = pairs_by_case(ODD)


def sample(case, k=6):
    cfgs = BY_CASE[case]
    return random.Random(case).sample(cfgs, min(k, len(cfgs)))


# ---------------------------------------------------------------- case split

def test_classify_examples():
    assert classify_case(circulant(5), 0, 1).case == "ISO"
    cfg = classify_case(circulant(7), 0, 1)
    assert cfg.case == "T"
    back = {x: cfg.to_k[i] for x, i in cfg.marked.items()}
    assert (back["b"], back["c"]) == (2, 6)
    assert sorted(back.values()) == [2, 3, 5, 6]
    k = k44()
    assert classify_case(k, 0, 4).case == "R"
    with pytest.raises(GraphError, match="not adjacent"):
        classify_case(k, 0, 1)


def test_marked_degrees():
    for case, cfgs in BY_CASE.items():
        assert cfgs, case
        for cfg in cfgs:
            deg = cfg.H.degrees
            twos = {"R": "", "S": "c", "T": "bc"}[case]
            for letter, x in cfg.marked.items():
                assert deg[x] == (2 if letter in twos else 3)
            assert len(set(cfg.marked.values())) == len(cfg.marked)


def test_odd_instances_cover_every_case():
    assert {c: len(v) > 0 for c, v in BY_CASE.items()} == {"R": True, "S": True, "T": True}


# ---------------------------------------------------------------- bipartitions

def test_k33_count():
    k, v, w = k33_completion()
    cfg = classify_case(k, v, w)
    assert cfg.case == "R"
    assert nx.is_isomorphic(nx.Graph(list(cfg.H.edges)), nx.complete_bipartite_graph(3, 3))
    assert count(cfg, "ab|c") == 18
    assert len(valid_bipartitions(cfg.H)) == 72


def test_triangle_bipartitions():
    got = list(bipartition_set(triangle(), ([0], [1])))
    assert len(got) == 2
    assert all(b.compatible([0], [1]) for b in got)
    with pytest.raises(ValueError):
        list(bipartition_set(triangle(), ([0], [0, 1])))


def test_bridge_forces_empty_set():
    # K4 plus a pendant vertex 4 on 0: the bridge sits in every spanning tree,
    # so 4 is alone in every 2-forest
    h = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4)])
    assert list(bipartition_set(h, ([4, 0], [1]))) == []
    got = list(bipartition_set(h, ([4], [1])))
    assert got and all(b.vertex_classes[1] == {4} or b.vertex_classes[0] == {4} for b in got)


def test_from_masks_validates():
    h = triangle()
    with pytest.raises(LemmaViolation, match="valid_partition"):
        EdgeBipartition.from_masks(h, 0b111, 0)
    with pytest.raises(LemmaViolation, match="valid_partition"):
        EdgeBipartition.from_masks(h, 0b001, 0b110)
    b = EdgeBipartition.from_masks(h, 0b011, 0b100)
    assert b.vertex_classes == (frozenset({0}), frozenset({1, 2}))


def test_union_sets_are_disjoint():
    for cfg in sample("R", 3):
        members = union_members(cfg, EXPANSION_TERMS["R"])
        assert len(members) == sum(count(cfg, t) for t in EXPANSION_TERMS["R"])


# ---------------------------------------------------------------- c2 and the expansion

@pytest.mark.parametrize("case", "RST")
def test_c2_from_bipartitions(case):
    for cfg in sample(case):
        assert c2_from_bipartitions(cfg, "v") == c2_definition(decomplete(cfg.K, cfg.v), 2)
        assert c2_from_bipartitions(cfg, "w") == c2_definition(decomplete(cfg.K, cfg.w), 2)


def test_k33_c2_sides():
    k, v, w = k33_completion()
    cfg = classify_case(k, v, w)
    assert c2_from_bipartitions(cfg, "v") == c2_definition(decomplete(k, v), 2)
    assert c2_from_bipartitions(cfg, "w") == c2_definition(decomplete(k, w), 2)


@pytest.mark.parametrize("case", "RST")
def test_expansion_parity(case):
    for cfg in sample(case):
        lhs = (c2_definition(decomplete(cfg.K, cfg.v), 2) - c2_definition(decomplete(cfg.K, cfg.w), 2)) % 2
        assert expansion_check(cfg) == lhs == 0


def test_expansion_even_t_case():
    cfg = classify_case(circulant(8), 0, 1)
    assert cfg.case == "T"
    assert expansion_check(cfg) == 0


# ---------------------------------------------------------------- involutions

def check_involution(cfg, terms, swap):
    members = union_members(cfg, terms)
    trees = {b.tree for b, _ in members}
    for b, _ in members:
        img = swap(b)
        assert img.tree != b.tree
        assert img.tree in trees
        assert swap(img) == b
    assert len(members) % 2 == 0
    return len(members)


def test_b_vert_swap():
    seen = 0
    for cfg in sample("S"):
        c = cfg.marked["c"]
        seen += check_involution(cfg, B_VERT_TERMS, lambda b: two_valent_swap(cfg.H, b, c))
    assert seen > 0


@pytest.mark.parametrize("n", [6, 7, 8, 9, 10])
def test_t_case_swaps_even_and_odd(n):
    cfg = classify_case(circulant(n), 0, 1)
    b, c = cfg.marked["b"], cfg.marked["c"]
    check_involution(cfg, T_SWAP_B_TERMS, lambda x: two_valent_swap(cfg.H, x, b))
    check_involution(cfg, T_SWAP_C_TERMS, lambda x: two_valent_swap(cfg.H, x, c))
    assert (count(cfg, "a|bcd") + count(cfg, "ab|cd")) % 2 == 0
    assert (count(cfg, "abc|d") + count(cfg, "ab|cd")) % 2 == 0
    assert c2_definition(decomplete(cfg.K, 0), 2) == c2_definition(decomplete(cfg.K, 1), 2)


def test_two_valent_swap_errors():
    cfg = sample("S", 1)[0]
    b = valid_bipartitions(cfg.H)[0]
    three = cfg.marked["a"]
    with pytest.raises(ValueError):
        two_valent_swap(cfg.H, b, three)


def test_control_vertex_h_shape():
    # x - y1 - A,  y1 - y2,  y2 - B, y2 - C  with marked {x, A, B, C}
    x, y1, a, y2, b, c = range(6)
    tree = {x: [y1], y1: [x, a, y2], a: [y1], y2: [y1, b, c], b: [y2], c: [y2]}
    assert control_vertex(tree, {x, a, b, c}, x) == y1
    assert control_vertex(tree, {x, a, b, c}, b) == y2


def test_control_vertex_marked_and_subdivided():
    # path x - m - A with m marked and 2-valent, plus m's branch to y - B, y - C
    x, m, a, y, b = range(5)
    path = {x: [m], m: [x, a], a: [m, y], y: [a, b], b: [y]}
    p1 = {x, m, a, b}
    got = control_vertex(path, p1, x)
    assert got in p1
    # subdividing every edge of the H shape keeps the answer
    sub = {0: [6], 6: [0, 1], 1: [6, 7, 8], 7: [1, 2], 2: [7], 8: [1, 9], 9: [8, 3],
           3: [9, 10, 11], 10: [3, 4], 4: [10], 11: [3, 5], 5: [11]}
    assert control_vertex(sub, {0, 2, 4, 5}, 0) == 1


def test_control_vertex_rejects_star():
    star = {0: [1, 2, 3, 4], 1: [0], 2: [0], 3: [0], 4: [0]}
    with pytest.raises(ValueError, match="degree 4"):
        control_vertex(star, {1, 2, 3, 4}, 1)
    with pytest.raises(ValueError):
        control_vertex(star, {1, 2, 3}, 1)


def test_control_vertex_uniqueness_on_small_trees():
    checked = 0
    for n in range(4, 9):
        for t in nx.nonisomorphic_trees(n):
            adj = {x: set(t[x]) for x in t}
            for p1 in itertools.combinations(range(n), 4):
                if any(len(adj[y]) > (2 if y in p1 else 3) for y in adj):
                    continue
                for x in p1:
                    control_vertex(adj, p1, x)
                    checked += 1
    assert checked > 1000


def test_a_vert_swap():
    seen = 0
    for cfg in sample("R"):
        def swap(b):
            img = control_swap(cfg, b)
            p1, x, adj, _ = control_data(cfg, b)
            q1, y, adj2, _ = control_data(cfg, img)
            assert control_vertex(adj, p1, x) == control_vertex(adj2, q1, y)
            return img
        seen += check_involution(cfg, A_VERT_TERMS, swap)
    assert seen > 0


# ---------------------------------------------------------------- compatible cycles

def oracle_cycles(h, b):
    """All compatible cycles by general cycle enumeration."""
    index = {}
    for i, (u, v) in enumerate(h.edges):
        index.setdefault(frozenset((u, v)), []).append(i)
    out = set()
    for cyc in nx.simple_cycles(nx.Graph(list(h.edges))):
        edges = [index[frozenset((cyc[i], cyc[(i + 1) % len(cyc)]))][0] for i in range(len(cyc))]
        if len({b.side[x] for x in cyc}) == 1 and sum((b.tree >> e) & 1 for e in edges) == 1:
            out.add(frozenset(edges))
    return out


@pytest.mark.parametrize("case", "RST")
def test_compatible_cycles_against_cycle_enumeration(case):
    for cfg in sample(case, 3):
        for b in valid_bipartitions(cfg.H)[::7]:
            got = compatible_cycles(cfg.H, b)
            assert {frozenset(c.edges) for c in got} == oracle_cycles(cfg.H, b)
            e1, e2, ell = ell_identity(cfg.H, b)
            assert len(got) == e1 + e2
            assert cfg.H.n - 1 == e1 + e2 + ell


@pytest.mark.parametrize("case", "RST")
def test_odd_cycle_counts_on_union(case):
    for cfg in sample(case):
        for b, _ in union_members(cfg, CYCLE_TERMS[case]):
            assert len(compatible_cycles(cfg.H, b)) % 2 == 1


@pytest.mark.parametrize("case", "RST")
def test_cycle_swap_properties(case):
    cfg = sample(case, 1)[0]
    h = cfg.H
    for b, _ in union_members(cfg, CYCLE_TERMS[case])[:10]:
        for c in compatible_cycles(h, b):
            cross = crossing_edges(h, b, c)
            assert len(cross) >= 2 and len(cross) % 2 == 0
            assert c.tree_edge in cross
            for fp in cross:
                if fp == c.tree_edge:
                    continue
                out = cycle_swap(h, b, c, fp)
                assert out.side == b.side
                back = next(d for d in compatible_cycles(h, out) if d.tree_edge == fp)
                assert cycle_swap(h, out, back, c.tree_edge) == b
            outside = next((e for e in c.edges if e not in cross), None)
            if outside is not None:
                with pytest.raises(ValueError):
                    cycle_swap(h, b, c, outside)


def test_swap_graph_c7():
    cfg = classify_case(circulant(7), 0, 1)
    xg = build_swap_graph(cfg, CYCLE_TERMS["T"])
    assert xg.order % 2 == 0 and xg.order > 0
    assert all(xg.degree(i) % 2 == 1 for i in range(xg.order))
    assert xg.order == count(cfg, "a|bcd") + count(cfg, "abc|d")


@pytest.mark.parametrize("case", "RS")
def test_swap_graphs_odd_instances(case):
    for cfg in sample(case, 4):
        xg = build_swap_graph(cfg, CYCLE_TERMS[case])
        assert not xg.odd_degree_violations()
        assert sum(count(cfg, t) for t in CYCLE_TERMS[case]) == xg.order
        for i, nbrs in xg.adjacency.items():
            assert all(i in xg.adjacency[j] for j in nbrs)


def test_swap_graph_even_instance_reports_even_degrees():
    cfg = classify_case(circulant(8), 0, 1)
    with pytest.raises(LemmaViolation, match="even degree"):
        build_swap_graph(cfg, CYCLE_TERMS["T"])
    xg = build_swap_graph(cfg, CYCLE_TERMS["T"], strict=False)
    assert xg.odd_degree_violations()


# ---------------------------------------------------------------- runner

def summary(records):
    return [(r.case, r.lemma, r.violations, r.asserted) for r in records]


def test_verify_pair_clean_on_odd_instances():
    for case in "RST":
        for cfg in sample(case, 2):
            recs = verify_pair(cfg.K, cfg.v, cfg.w, "g")
            assert recs and all(r.violations == 0 for r in recs)
            assert {r.case for r in recs} == {case}


def test_verify_pair_fault_injection():
    recs = verify_pair(circulant(7), 0, 1, "C7", inject_fault=True)
    bad = {r.lemma for r in recs if r.violations}
    assert "compatible_cycles" in bad


def test_iso_pair():
    recs = verify_pair(circulant(5), 0, 1, "K5")
    assert summary(recs) == [("ISO", "isomorphic_decompletions", 0, True)]


def letter_map(cfg_a, cfg_b, perm):
    """Letter of ``cfg_b`` sitting on the image of each letter of ``cfg_a``."""
    where = {cfg_b.to_k[i]: y for y, i in cfg_b.marked.items()}
    return {x: where[perm[cfg_a.to_k[i]]] for x, i in cfg_a.marked.items()}


def translate(term, table):
    left, right = term.split("|")
    return "".join(table[x] for x in left) + "|" + "".join(table[x] for x in right)


@pytest.mark.parametrize("seed", range(3))
def test_label_permutation_invariance(seed):
    rng = random.Random(seed)
    for k in (corpus.load("random9")[seed], circulant(9)):
        perm = list(range(k.n))
        rng.shuffle(perm)
        moved = Graph.from_edges(k.n, [(perm[u], perm[v]) for u, v in k.edges])
        for v, w in k.edges[::3]:
            assert summary(verify_pair(k, v, w, "g")) == summary(verify_pair(moved, perm[v], perm[w], "g"))
            cfg_a, cfg_b = classify_case(k, v, w), classify_case(moved, perm[v], perm[w])
            if cfg_a.case == "ISO":
                continue
            table = letter_map(cfg_a, cfg_b, perm)
            for t in EXPANSION_TERMS[cfg_a.case] + A_VERT_TERMS * (cfg_a.case == "R"):
                assert count(cfg_a, t) == count(cfg_b, translate(t, table))

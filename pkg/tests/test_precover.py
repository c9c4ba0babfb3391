import random

import pytest

from freeprod import (
    FactorPair,
    LabeledGraph,
    Letter,
    cayley_graph,
    components,
    contains,
    index_if_finite,
    is_precover,
    is_reduced_precover,
    make_cyclic,
    parse_word,
    pointed_iso,
    prune_redundant,
    saturate,
    subgroup_graph,
)

from helpers import all_normal_forms, oracle_membership, random_subgroups

X = Letter(1, 0, 1)
Y = Letter(2, 0, 1)


def _cycle(g, verts, letter):
    for k, v in enumerate(verts):
        g.add_edge(v, verts[(k + 1) % len(verts)], letter)


def _gallery_gamma2(z4z6):
    """Full 6-cycle of y with an x-loop at one vertex w (vertex 0)."""
    g = LabeledGraph()
    verts = [g.add_vertex() for _ in range(6)]
    _cycle(g, verts, Y)
    g.add_edge(verts[0], verts[0], X)
    return g, verts


def test_saturate_fixpoint_on_precover(z4z6):
    g, _ = _gallery_gamma2(z4z6)
    h = saturate(g, z4z6)
    assert pointed_iso(g, g.basepoint, h, h.basepoint)


def test_saturate_completes_single_edge(z2z3):
    g = LabeledGraph()
    u, v = g.add_vertex(), g.add_vertex()
    g.add_edge(u, v, Letter(1, 0, 1))
    h = saturate(g, z2z3)
    assert h.vertex_count() == 2 and h.edge_count() == 2
    ok = is_precover(h, z2z3)
    assert ok.ok, ok.reason


def test_saturate_repairs_unbased_cycle(z4z6):
    # a 3-cycle of x-edges is saturated but not a coset graph of Z4
    g = LabeledGraph()
    verts = [g.add_vertex() for _ in range(3)]
    _cycle(g, verts, X)
    assert not is_precover(g, z4z6).ok
    h = saturate(g, z4z6)
    ok = is_precover(h, z4z6)
    assert ok.ok, ok.reason
    # x^3 generates Z4, so everything collapses to the one-coset graph
    assert h.vertex_count() == 1 and h.edge_count() == 1


def test_prune_collapses_lone_cayley(z2z3):
    g = cayley_graph(make_cyclic(2, "a"))
    h = prune_redundant(g, g.basepoint, z2z3)
    assert h.vertex_count() == 1 and h.edge_count() == 0


def test_prune_is_fixpoint_on_reduced(z2z3, psl2_sg):
    h = prune_redundant(psl2_sg.graph, psl2_sg.graph.basepoint, z2z3)
    assert pointed_iso(
        h, h.basepoint, psl2_sg.graph, psl2_sg.graph.basepoint
    )


def test_prune_depends_on_basepoint(z4z6):
    g, verts = _gallery_gamma2(z4z6)
    # basepoint at the bichromatic vertex: the y-component is redundant
    g.set_basepoint(verts[0])
    h = prune_redundant(g, verts[0], z4z6)
    assert h.vertex_count() == 1 and h.edge_count() == 1
    # basepoint at a monochromatic y-vertex: nothing to prune
    g2, verts2 = _gallery_gamma2(z4z6)
    g2.set_basepoint(verts2[3])
    h2 = prune_redundant(g2, verts2[3], z4z6)
    assert pointed_iso(h2, h2.basepoint, g2, g2.basepoint)


def test_subgroup_graph_trivial(z2z3):
    sg = subgroup_graph([], z2z3)
    assert sg.vertex_count == 1 and sg.edge_count == 0
    assert sg.precover_ok and sg.reduced_ok


def test_subgroup_graph_psl2_shape(z2z3, psl2_sg):
    assert psl2_sg.vertex_count == 6
    assert psl2_sg.edge_count == 11
    assert len(components(psl2_sg.graph)) == 5
    assert psl2_sg.precover_ok and psl2_sg.reduced_ok
    assert psl2_sg.total_length == 10


def test_subgroup_graph_single_generator(z2z3):
    sg = subgroup_graph([parse_word("a", z2z3)], z2z3)
    # the one-coset graph of Z2: a single vertex with an a-loop
    assert sg.vertex_count == 1 and sg.edge_count == 1
    assert contains(sg, parse_word("a", z2z3))


def test_is_precover_gallery(z4z6):
    # one full Cayley(Z4) component alone
    g1 = cayley_graph(make_cyclic(4, "x"))
    assert is_precover(g1, z4z6).ok

    # two components sharing one vertex
    g2, _ = _gallery_gamma2(z4z6)
    assert is_precover(g2, z4z6).ok

    # x-components that are not covers: an attached 3-cycle of x-edges
    g3 = LabeledGraph()
    verts = [g3.add_vertex() for _ in range(6)]
    _cycle(g3, verts, Y)
    tri = [verts[0], g3.add_vertex(), g3.add_vertex()]
    _cycle(g3, tri, X)
    bad = is_precover(g3, z4z6)
    assert not bad.ok and "not a cover" in bad.reason

    # an unsaturated x-edge also fails, with a witness
    g3b = LabeledGraph()
    verts = [g3b.add_vertex() for _ in range(6)]
    _cycle(g3b, verts, Y)
    g3b.add_edge(verts[0], g3b.add_vertex(), X)
    bad2 = is_precover(g3b, z4z6)
    assert not bad2.ok and "not saturated" in bad2.reason

    # a 2-cycle x-cover plus a 3-cycle y-cover, glued at one vertex
    g4 = LabeledGraph()
    a, b = g4.add_vertex(), g4.add_vertex()
    _cycle(g4, [a, b], X)
    c, d = g4.add_vertex(), g4.add_vertex()
    _cycle(g4, [a, c, d], Y)
    assert is_precover(g4, z4z6).ok

    # single vertex, no edges: the empty precover
    point = LabeledGraph()
    point.add_vertex()
    assert is_precover(point, z4z6).ok


def test_is_reduced_precover_gallery(z4z6):
    g1 = cayley_graph(make_cyclic(4, "x"))
    for v in list(g1.vertices()):
        assert not is_reduced_precover(g1, v, z4z6).ok

    g2, verts = _gallery_gamma2(z4z6)
    assert not is_reduced_precover(g2, verts[0], z4z6).ok
    for v in verts[1:]:
        assert is_reduced_precover(g2, v, z4z6).ok

    g4 = LabeledGraph()
    a, b = g4.add_vertex(), g4.add_vertex()
    _cycle(g4, [a, b], X)
    c, d = g4.add_vertex(), g4.add_vertex()
    _cycle(g4, [a, c, d], Y)
    for v in (a, b, c, d):
        assert is_reduced_precover(g4, v, z4z6).ok

    point = LabeledGraph()
    point.add_vertex()
    assert is_reduced_precover(point, 0, z4z6).ok


def test_contains_psl2_examples(z2z3, psl2_sg):
    assert contains(psl2_sg, parse_word("a b a^-1 b^-1", z2z3))
    assert contains(psl2_sg, parse_word("b a b a b a", z2z3))
    assert contains(psl2_sg, ())
    assert not contains(psl2_sg, parse_word("b", z2z3))
    assert not contains(psl2_sg, parse_word("a", z2z3))
    # conjugate of a by ab^2 lies in H
    assert contains(psl2_sg, parse_word("a b^2 a b^-2 a^-1", z2z3))


def test_contains_vs_oracle_small(z2z3, psl2_sg, psl2_words):
    member = oracle_membership(psl2_words, z2z3, query_len=6, work_len=16)
    from freeprod import normal_to_word
    from freeprod.words import NormalWord

    for nf in all_normal_forms(z2z3, 6):
        w = normal_to_word(NormalWord(nf), z2z3)
        assert contains(psl2_sg, w) == (nf in member), nf


def test_index_examples(z2z3, psl2_sg):
    whole = subgroup_graph([parse_word("a", z2z3), parse_word("b", z2z3)], z2z3)
    assert index_if_finite(whole) == 1
    only_a = subgroup_graph([parse_word("a", z2z3)], z2z3)
    assert index_if_finite(only_a) is None
    # the worked example has an unsaturated vertex, hence infinite index
    assert index_if_finite(psl2_sg) is None
    two = subgroup_graph([parse_word("b", z2z3), parse_word("a b a^-1", z2z3)], z2z3)
    assert index_if_finite(two) == 2


def test_pipeline_certifies_random_corpus(z2z3, z4z6):
    rng = random.Random(20)
    for pair in (z2z3, z4z6):
        for gens in random_subgroups(rng, pair, 12, max_len=6):
            sg = subgroup_graph(gens, pair)
            assert sg.precover_ok and sg.reduced_ok
            for w in gens:
                assert contains(sg, w)


def test_partial_cancellation_generator(z2z3):
    # a b b^-1 generates the same subgroup as a; the folded loop leaves a
    # hair that must be cut
    sg = subgroup_graph([parse_word("a b b^-1", z2z3)], z2z3)
    other = subgroup_graph([parse_word("a", z2z3)], z2z3)
    assert pointed_iso(
        sg.graph, sg.graph.basepoint, other.graph, other.graph.basepoint
    )


@pytest.fixture(scope="module")
def klein_s3():
    from freeprod import from_presentation

    klein = from_presentation(["u", "v"], ["u^2", "v^2", "u v u^-1 v^-1"], cap=32)
    s3 = from_presentation(["s", "t"], ["s^2", "t^3", "s t s t"], cap=32)
    return FactorPair(klein, s3)


def test_multigenerator_factors_membership(klein_s3):
    # both factors need several generators; membership must still agree
    # with the closure oracle
    rng = random.Random(71)
    for gens in random_subgroups(rng, klein_s3, 6, max_len=6):
        sg = subgroup_graph(gens, klein_s3)
        assert sg.precover_ok and sg.reduced_ok
        member = oracle_membership(gens, klein_s3, query_len=4, work_len=7)
        from freeprod import normal_to_word
        from freeprod.words import NormalWord

        for nf in all_normal_forms(klein_s3, 4):
            got = contains(sg, normal_to_word(NormalWord(nf), klein_s3))
            assert got == (nf in member), (gens, nf)


def test_multigenerator_factors_decomposition(klein_s3):
    from freeprod import decompose, verify

    rng = random.Random(73)
    for gens in random_subgroups(rng, klein_s3, 6, max_len=6):
        sg = subgroup_graph(gens, klein_s3)
        d = decompose(sg)
        assert verify(d, sg).ok


def test_whole_group_membership_multigen(klein_s3):
    gens = [parse_word(t, klein_s3) for t in ("u", "v", "s", "t")]
    sg = subgroup_graph(gens, klein_s3)
    assert index_if_finite(sg) == 1
    assert contains(sg, parse_word("u v s t^-1 u", klein_s3))


def test_prune_cascades_through_chained_components(z2z3):
    # an outer full-Cayley component shields an inner one; removing the
    # outer one exposes the inner one, which must then go too
    g = LabeledGraph()
    v0, p, q = g.add_vertex(), g.add_vertex(), g.add_vertex()
    g.add_edge(v0, v0, Letter(1, 0, 1))      # a-loop: the real content
    for s, t in [(v0, p), (p, q), (q, v0)]:
        g.add_edge(s, t, Letter(2, 0, 1))    # full Cayley(Z3) through v0
    r = g.add_vertex()
    g.add_edge(p, r, Letter(1, 0, 1))        # full Cayley(Z2) hanging off p
    g.add_edge(r, p, Letter(1, 0, 1))
    assert is_precover(g, z2z3).ok
    h = prune_redundant(g, v0, z2z3)
    assert h.vertices() == [v0]
    assert h.edge_count() == 1
    assert is_reduced_precover(h, v0, z2z3).ok


def test_is_precover_rejects_disconnected(z2z3):
    g = LabeledGraph()
    g.add_vertex()
    v = g.add_vertex()
    g.add_edge(v, v, Letter(1, 0, 1))
    res = is_precover(g, z2z3)
    assert not res.ok and "connected" in res.reason

"""The folding pipeline: build, certify and query subgroup graphs.

The pipeline turns a generating set into the unique reduced precover
determining the subgroup: wedge the generators into a bouquet, fold and cut
hairs, complete every monochromatic component to a cover of its factor by
gluing factor Cayley graphs, then discard redundant components.  Membership
of a word then reduces to tracing its normal form as a loop at the basepoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .fingroup import FactorPair, coset_graph, schreier_stabilizer
from .lgraph import (
    LabeledGraph,
    MonoComponent,
    bouquet,
    components,
    cut_hairs,
    fold_all,
    pointed_iso,
    subgraph,
    trace,
)
from .words import Letter, Word, normal_to_word, normalize


class Verdict(NamedTuple):
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def _is_saturated(g: LabeledGraph, comp: MonoComponent, pair: FactorPair) -> tuple[bool, str | None]:
    letters = pair.letters(comp.factor)
    for v in sorted(comp.vertices):
        for letter in letters:
            if g.out_edge(v, letter) is None:
                return False, f"vertex {v} has no edge labelled {pair.letter_name(letter)}"
    return True, None


def component_is_cover(g: LabeledGraph, comp: MonoComponent, pair: FactorPair) -> bool:
    """Whether a monochromatic component is a coset Cayley graph of its factor.

    Saturation alone is not enough: a component can be saturated yet fail to
    be based on the factor (a cycle of the wrong length, say), so the
    component is compared against the coset graph of its Schreier stabilizer.
    """
    sat, _ = _is_saturated(g, comp, pair)
    if not sat:
        return False
    group = pair.factor(comp.factor)
    v = comp.min_vertex
    stab = schreier_stabilizer(g, v, group, within=comp)
    expected = coset_graph(group, stab, factor=comp.factor)
    piece = subgraph(g, comp.vertices, comp.edges, v)
    return pointed_iso(piece, piece.basepoint, expected, expected.basepoint)


def saturate(g: LabeledGraph, pair: FactorPair) -> LabeledGraph:
    """Complete every monochromatic component to a cover of its factor.

    Each sweep glues a fresh copy of the factor's Cayley graph along the
    lowest edge of every component that is not yet a cover (identity onto
    the edge's initial vertex) and then refolds.  Folding may merge
    components, so the loop runs to a fixpoint; a glued component folds
    into a quotient of the Cayley copy, which is a cover, and covers absorb
    whatever folds into them, so the sweep count stays below the initial
    component count.  Verdicts for untouched components are cached.
    """
    h = g.copy()
    verified: set = set()
    sweeps = 0
    limit = len(components(h)) + 2
    while True:
        bad = []
        for comp in components(h):
            key = (comp.factor, comp.vertices, comp.edges)
            if key in verified:
                continue
            if component_is_cover(h, comp, pair):
                verified.add(key)
            else:
                bad.append(comp)
        if not bad:
            return h
        sweeps += 1
        assert sweeps <= limit, "saturation did not converge"
        seeds = []
        for comp in bad:
            e = comp.edges[0]
            group = pair.factor(comp.factor)
            base = len(h._parent)
            for _ in range(group.order):
                h.add_vertex()
            for v in range(group.order):
                for gi, (_, img) in enumerate(group.generators):
                    h.add_edge(
                        base + v, base + group.mult(v, img), Letter(comp.factor, gi, 1)
                    )
            # identify the copy's identity with the edge's initial vertex and
            # the two copies of the edge; folding finishes the identification
            letter = h.label(e)
            img = group.generators[letter.gen][1]
            elem = img if letter.sign > 0 else group.inv(img)
            seeds.append(h._union(h.init(e), base + group.identity))
            seeds.append(h._union(h.term(e), h.find(base + elem)))
        h._fold_inplace(seeds=seeds)


def prune_redundant(g: LabeledGraph, v0: int, pair: FactorPair) -> LabeledGraph:
    """Drop redundant components of a precover, keeping attaching vertices.

    A component is redundant when it is a full factor Cayley graph (trivial
    loop subgroup), touches the rest of the graph in at most one vertex and
    does not carry the basepoint among its monochromatic vertices.  If what
    remains is a lone factor Cayley graph with no bichromatic vertices, the
    whole graph collapses to the basepoint: it determines the trivial
    subgroup.
    """
    h = g.copy()
    v0 = h.find(v0)
    while True:
        comps = components(h)
        victim = None
        for comp in comps:
            group = pair.factor(comp.factor)
            if len(comp.vertices) != group.order:
                continue
            if len(comp.vb) > 1 or v0 in comp.vm:
                continue
            if not component_is_cover(h, comp, pair):
                continue
            victim = comp
            break
        if victim is None:
            break
        keep = set(victim.vb)
        for e in victim.edges:
            h.remove_edge(e)
        for v in sorted(victim.vertices):
            if v not in keep:
                h.remove_vertex(v)
    comps = components(h)
    if len(comps) == 1:
        comp = comps[0]
        group = pair.factor(comp.factor)
        if (
            not comp.vb
            and comp.vertices == frozenset(h.vertices())
            and len(comp.vertices) == group.order
            and component_is_cover(h, comp, pair)
        ):
            for e in comp.edges:
                h.remove_edge(e)
            for v in sorted(comp.vertices):
                if v != v0:
                    h.remove_vertex(v)
    return h


@dataclass
class SubgroupGraph:
    """A labelled graph certified as the reduced precover of a subgroup."""

    graph: LabeledGraph
    pair: FactorPair
    generators: tuple[Word, ...]
    total_length: int
    precover_ok: bool
    reduced_ok: bool

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count()

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count()


def subgroup_graph(gens, pair: FactorPair) -> SubgroupGraph:
    """Run the full pipeline on a generating set and certify the result."""
    gens = tuple(tuple(w) for w in gens)
    g = bouquet(gens, pair)
    g = cut_hairs(fold_all(g))
    g = saturate(g, pair)
    g = prune_redundant(g, g.basepoint, pair)
    pre = is_precover(g, pair)
    red = is_reduced_precover(g, g.basepoint, pair)
    return SubgroupGraph(
        graph=g,
        pair=pair,
        generators=gens,
        total_length=sum(len(w) for w in gens),
        precover_ok=pre.ok,
        reduced_ok=red.ok,
    )


def is_precover(g: LabeledGraph, pair: FactorPair) -> Verdict:
    """Check that every monochromatic component is a cover of its factor."""
    if not g.is_well_labelled():
        return Verdict(False, "graph is not well-labelled")
    if g.vertices() and not g.is_connected():
        return Verdict(False, "graph is not connected")
    for k, comp in enumerate(components(g)):
        sat, why = _is_saturated(g, comp, pair)
        if not sat:
            return Verdict(False, f"component {k} (factor {comp.factor}) is not saturated: {why}")
        if not component_is_cover(g, comp, pair):
            return Verdict(
                False,
                f"component {k} (factor {comp.factor}) is saturated but is not a cover",
            )
    return Verdict(True)


def is_reduced_precover(g: LabeledGraph, v0: int, pair: FactorPair) -> Verdict:
    """Check the no-redundant-components condition on a precover."""
    pre = is_precover(g, pair)
    if not pre.ok:
        return Verdict(False, f"not a precover: {pre.reason}")
    v0 = g.find(v0)
    comps = components(g)
    for k, comp in enumerate(comps):
        group = pair.factor(comp.factor)
        if (
            len(comp.vertices) == group.order
            and len(comp.vb) <= 1
            and v0 not in comp.vm
        ):
            return Verdict(False, f"component {k} (factor {comp.factor}) is redundant")
    if len(comps) == 1:
        comp = comps[0]
        group = pair.factor(comp.factor)
        if (
            not comp.vb
            and comp.vertices == frozenset(g.vertices())
            and len(comp.vertices) == group.order
            and group.order > 1
        ):
            return Verdict(False, "whole graph is a lone factor Cayley graph; it collapses to the basepoint")
    return Verdict(True)


def contains(sg: SubgroupGraph, w: Word) -> bool:
    """Membership of a word in the subgroup the graph determines.

    The normal form is rendered syllable by syllable and traced from the
    basepoint; the word is a member exactly when the trace closes up there.
    The components crossed are covers, so any representative word of a
    syllable traces to the same vertex.
    """
    nw = normalize(w, sg.pair)
    if not nw:
        return True
    path = normal_to_word(nw, sg.pair)
    t = trace(sg.graph, sg.graph.basepoint, path)
    return t.vertex == sg.graph.basepoint


def index_if_finite(sg: SubgroupGraph) -> int | None:
    """Subgroup index when the graph is fully saturated, else None.

    A fully saturated reduced precover is the whole coset Cayley graph, so
    its vertex count is the index; an unsaturated vertex means the index is
    infinite.
    """
    letters = sg.pair.all_letters()
    for v in sg.graph.vertices():
        for letter in letters:
            if sg.graph.out_edge(v, letter) is None:
                return None
    return sg.graph.vertex_count()

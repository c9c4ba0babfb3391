"""Pointed labelled graphs with involutive edges, folding and friends.

Edges are stored as paired half-edges: ids 2k and 2k+1 are reverses of each
other and carry inverse labels.  Vertices live in a union-find so that
folding (identifying two edges with the same initial vertex and label)
is a sequence of cheap merges; deleted vertices and edges keep their ids
and are flagged dead, which keeps ids stable across the whole pipeline.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, NamedTuple

from .words import Letter, Word, letter_key

if TYPE_CHECKING:
    from .fingroup import FactorPair


class LabeledGraph:
    def __init__(self) -> None:
        self._parent: list[int] = []
        self._csize: list[int] = []
        self._valive: list[bool] = []
        self._einit: list[int] = []
        self._elabel: list[Letter] = []
        self._ealive: list[bool] = []
        self._out: dict[int, list[int]] = {}
        self._base: int | None = None

    # -- construction ---------------------------------------------------

    def add_vertex(self) -> int:
        v = len(self._parent)
        self._parent.append(v)
        self._csize.append(1)
        self._valive.append(True)
        self._out[v] = []
        if self._base is None:
            self._base = v
        return v

    def add_edge(self, u: int, v: int, letter: Letter) -> int:
        """Add a geometric edge u -> v with the given letter.

        Returns the id of the direct half-edge; its reverse is id+1.
        """
        u, v = self.find(u), self.find(v)
        e = len(self._einit)
        self._einit.extend((u, v))
        self._elabel.extend((letter, letter.inverse()))
        self._ealive.extend((True, True))
        self._out[u].append(e)
        self._out[v].append(e + 1)
        return e

    def set_basepoint(self, v: int) -> None:
        self._base = self.find(v)

    def copy(self) -> "LabeledGraph":
        g = LabeledGraph()
        g._parent = list(self._parent)
        g._csize = list(self._csize)
        g._valive = list(self._valive)
        g._einit = list(self._einit)
        g._elabel = list(self._elabel)
        g._ealive = list(self._ealive)
        g._out = {v: list(es) for v, es in self._out.items()}
        g._base = self._base
        return g

    # -- vertex union-find ------------------------------------------------

    def find(self, v: int) -> int:
        root = v
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[v] != root:
            self._parent[v], v = root, self._parent[v]
        return root

    def _union(self, a: int, b: int) -> int:
        a, b = self.find(a), self.find(b)
        if a == b:
            return a
        # survivor: larger class, ties to the smaller id (deterministic)
        if (self._csize[a], -a) < (self._csize[b], -b):
            a, b = b, a
        self._parent[b] = a
        self._csize[a] += self._csize[b]
        self._out[a].extend(self._out.pop(b))
        return a

    # -- basic queries ----------------------------------------------------

    @property
    def basepoint(self) -> int:
        assert self._base is not None, "graph has no vertices"
        return self.find(self._base)

    def vertices(self) -> list[int]:
        return sorted(v for v in self._out if self._valive[v])

    def edges(self) -> list[int]:
        """Live geometric edges, as direct half-edge ids."""
        return [e for e in range(0, len(self._einit), 2) if self._ealive[e]]

    def init(self, e: int) -> int:
        return self.find(self._einit[e])

    def term(self, e: int) -> int:
        return self.find(self._einit[e ^ 1])

    def label(self, e: int) -> Letter:
        return self._elabel[e]

    @staticmethod
    def reverse(e: int) -> int:
        return e ^ 1

    def positive_half(self, e: int) -> int:
        """The half of e's geometric edge whose label has positive sign."""
        return e if self._elabel[e].sign > 0 else e ^ 1

    def half_edges(self, v: int) -> list[int]:
        v = self.find(v)
        es = self._out.get(v)
        if es is None:
            return []
        live = [e for e in es if self._ealive[e]]
        if len(live) != len(es):
            self._out[v] = live
        return live

    def degree(self, v: int) -> int:
        return len(self.half_edges(v))

    def out_edge(self, v: int, letter: Letter) -> int | None:
        for e in self.half_edges(v):
            if self._elabel[e] == letter:
                return e
        return None

    def vertex_count(self) -> int:
        return len(self.vertices())

    def edge_count(self) -> int:
        return len(self.edges())

    def is_well_labelled(self) -> bool:
        for v in self.vertices():
            seen = set()
            for e in self.half_edges(v):
                l = self._elabel[e]
                if l in seen:
                    return False
                seen.add(l)
        return True

    def is_connected(self) -> bool:
        verts = self.vertices()
        if not verts:
            return False
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for e in self.half_edges(v):
                w = self.term(e)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)

    # -- deletion ---------------------------------------------------------

    def remove_edge(self, e: int) -> None:
        self._ealive[e & ~1] = False
        self._ealive[e | 1] = False

    def remove_vertex(self, v: int) -> None:
        """Delete a vertex; its incident edges must already be gone."""
        v = self.find(v)
        assert self.degree(v) == 0, "removing a vertex with live edges"
        self._valive[v] = False

    # -- folding ----------------------------------------------------------

    def _fold_inplace(self, seeds: Iterable[int] | None = None) -> None:
        if seeds is None:
            queue = deque(self.vertices())
        else:
            queue = deque(self.find(s) for s in seeds)
        queued = set(queue)
        while queue:
            v = queue.popleft()
            queued.discard(v)
            v = self.find(v)
            if not self._valive[v]:
                continue
            scanning = True
            while scanning:
                scanning = False
                v = self.find(v)
                slots: dict[Letter, int] = {}
                for e in self.half_edges(v):
                    l = self._elabel[e]
                    other = slots.get(l)
                    if other is None:
                        slots[l] = e
                        continue
                    # fold e onto other: identify terminal vertices, drop e
                    t1 = self.term(other)
                    t2 = self.term(e)
                    self.remove_edge(e)
                    if t1 != t2:
                        r = self._union(t1, t2)
                        if r not in queued:
                            queue.append(r)
                            queued.add(r)
                    scanning = True
                    break


class Trace(NamedTuple):
    """Result of reading a word from a vertex.

    Exactly one field is set: ``vertex`` when the whole word was readable,
    ``stuck_at`` with the index of the first unreadable letter otherwise.
    """

    vertex: int | None
    stuck_at: int | None


@dataclass(frozen=True)
class MonoComponent:
    """Maximal connected one-color subgraph with at least one edge."""

    factor: int
    vertices: frozenset[int]
    edges: tuple[int, ...]       # direct half-edge ids, sorted
    vb: frozenset[int]           # bichromatic vertices of the component
    vm: frozenset[int]           # monochromatic vertices of the component

    @property
    def min_vertex(self) -> int:
        return min(self.vertices)


@dataclass
class SpanningTree:
    root: int
    geo_edges: frozenset[int]            # direct ids of tree edges
    parent_edge: dict[int, int]          # vertex -> half-edge entering it
    order: list[int] = field(default_factory=list)

    def path_to(self, g: LabeledGraph, v: int) -> tuple[int, ...]:
        """Half-edges of the tree path root -> v."""
        path: list[int] = []
        v = g.find(v)
        while v != self.root:
            e = self.parent_edge[v]
            path.append(e)
            v = g.init(e)
        path.reverse()
        return tuple(path)

    def word_to(self, g: LabeledGraph, v: int) -> Word:
        return tuple(g.label(e) for e in self.path_to(g, v))


def bouquet(gens: Iterable[Word], pair: "FactorPair") -> LabeledGraph:
    """A wedge of loops at a fresh basepoint, one loop per nonempty word."""
    g = LabeledGraph()
    v0 = g.add_vertex()
    for word in gens:
        if not word:
            continue
        cur = v0
        for letter in word[:-1]:
            nxt = g.add_vertex()
            g.add_edge(cur, nxt, letter)
            cur = nxt
        g.add_edge(cur, v0, word[-1])
    return g


def fold_all(g: LabeledGraph) -> LabeledGraph:
    """Fold to a well-labelled quotient; confluent, so order never matters."""
    h = g.copy()
    h._fold_inplace()
    return h


def cut_hairs(g: LabeledGraph) -> LabeledGraph:
    """Iteratively remove edges hanging off degree-1 vertices.

    The basepoint is exempt even at degree 1, since removing it would
    change the subgroup the graph determines.
    """
    h = g.copy()
    bp = h.basepoint
    queue = deque(v for v in h.vertices() if v != bp and h.degree(v) == 1)
    while queue:
        v = h.find(queue.popleft())
        if not h._valive[v] or v == bp or h.degree(v) != 1:
            continue
        e = h.half_edges(v)[0]
        w = h.term(e)
        h.remove_edge(e)
        h.remove_vertex(v)
        if w != bp and h._valive[w]:
            d = h.degree(w)
            if d == 1:
                queue.append(w)
            elif d == 0:
                h.remove_vertex(w)
    return h


def trace(g: LabeledGraph, v: int, w: Word) -> Trace:
    """Read ``w`` from ``v`` along uniquely labelled edges."""
    cur = g.find(v)
    for i, letter in enumerate(w):
        e = g.out_edge(cur, letter)
        if e is None:
            return Trace(None, i)
        cur = g.term(e)
    return Trace(cur, None)


def classify_vertices(g: LabeledGraph) -> dict[int, str]:
    """Tag every live vertex as VM1, VM2, VB or isolated."""
    out: dict[int, str] = {}
    for v in g.vertices():
        colors = {g.label(e).factor for e in g.half_edges(v)}
        if not colors:
            out[v] = "isolated"
        elif len(colors) == 2:
            out[v] = "VB"
        else:
            out[v] = f"VM{colors.pop()}"
    return out


def components(g: LabeledGraph) -> list[MonoComponent]:
    """Monochromatic components, ordered by (smallest vertex, factor)."""
    classes = classify_vertices(g)
    comps: list[MonoComponent] = []
    for factor in (1, 2):
        seen: set[int] = set()
        for start in g.vertices():
            if start in seen:
                continue
            edges_here = [e for e in g.half_edges(start) if g.label(e).factor == factor]
            if not edges_here:
                continue
            verts = {start}
            geo: set[int] = set()
            stack = [start]
            while stack:
                v = stack.pop()
                for e in g.half_edges(v):
                    if g.label(e).factor != factor:
                        continue
                    geo.add(e & ~1)
                    w = g.term(e)
                    if w not in verts:
                        verts.add(w)
                        stack.append(w)
            seen |= verts
            vb = frozenset(v for v in verts if classes[v] == "VB")
            comps.append(
                MonoComponent(
                    factor=factor,
                    vertices=frozenset(verts),
                    edges=tuple(sorted(geo)),
                    vb=vb,
                    vm=frozenset(verts) - vb,
                )
            )
    comps.sort(key=lambda c: (c.min_vertex, c.factor))
    return comps


def spanning_tree(
    g: LabeledGraph, root: int, within: MonoComponent | None = None
) -> SpanningTree:
    """BFS spanning tree, expanding edges in letter order for determinism."""
    root = g.find(root)
    scope = set(within.edges) if within is not None else None
    if within is not None and root not in within.vertices:
        raise ValueError(f"root {root} is not in the component")
    parent_edge: dict[int, int] = {}
    geo: set[int] = set()
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        out = [
            e
            for e in g.half_edges(v)
            if scope is None or (e & ~1) in scope
        ]
        out.sort(key=lambda e: (letter_key(g.label(e)), e))
        for e in out:
            w = g.term(e)
            if w in seen:
                continue
            seen.add(w)
            parent_edge[w] = e
            geo.add(e & ~1)
            order.append(w)
            queue.append(w)
    return SpanningTree(root=root, geo_edges=frozenset(geo), parent_edge=parent_edge, order=order)


def pointed_iso(g1: LabeledGraph, v1: int, g2: LabeledGraph, v2: int) -> bool:
    """Whether the pointed graphs are isomorphic as labelled graphs.

    Well-labelledness makes the isomorphism unique if it exists, so a
    simultaneous traversal from the basepoints decides it in linear time.
    """
    fwd: dict[int, int] = {g1.find(v1): g2.find(v2)}
    bwd: dict[int, int] = {g2.find(v2): g1.find(v1)}
    queue = deque([g1.find(v1)])
    while queue:
        a = queue.popleft()
        b = fwd[a]
        outs1: dict[Letter, int] = {}
        for e in g1.half_edges(a):
            l = g1.label(e)
            if l in outs1:
                raise ValueError("first graph is not well-labelled")
            outs1[l] = g1.term(e)
        outs2: dict[Letter, int] = {}
        for e in g2.half_edges(b):
            l = g2.label(e)
            if l in outs2:
                raise ValueError("second graph is not well-labelled")
            outs2[l] = g2.term(e)
        if set(outs1) != set(outs2):
            return False
        for l in sorted(outs1, key=letter_key):
            ta, tb = outs1[l], outs2[l]
            if ta in fwd:
                if fwd[ta] != tb:
                    return False
            elif tb in bwd:
                return False
            else:
                fwd[ta] = tb
                bwd[tb] = ta
                queue.append(ta)
    return len(fwd) == g1.vertex_count() == g2.vertex_count()


def subgraph(
    g: LabeledGraph,
    vertices: Iterable[int],
    edges: Iterable[int],
    basepoint: int,
) -> LabeledGraph:
    """Standalone copy of a subgraph, vertices renumbered in sorted order."""
    vmap = {v: i for i, v in enumerate(sorted(g.find(v) for v in vertices))}
    h = LabeledGraph()
    for _ in vmap:
        h.add_vertex()
    for e in sorted(set(e & ~1 for e in edges)):
        h.add_edge(vmap[g.init(e)], vmap[g.term(e)], g.label(e))
    h.set_basepoint(vmap[g.find(basepoint)])
    return h


def _positive_arrows(g: LabeledGraph) -> list[tuple[int, Letter, int, int]]:
    arrows = []
    for e in g.edges():
        p = g.positive_half(e)
        arrows.append((g.init(p), g.label(p), g.term(p), p))
    arrows.sort(key=lambda a: (a[0], letter_key(a[1]), a[2], a[3]))
    return arrows


def to_dot(g: LabeledGraph, pair: "FactorPair | None" = None) -> str:
    """Deterministic DOT rendering: one arrow per geometric edge."""
    colors = {1: "blue", 2: "red"}
    lines = ["digraph subgroup_graph {", "  rankdir=LR;"]
    bp = g.basepoint
    for v in g.vertices():
        shape = "doublecircle" if v == bp else "circle"
        lines.append(f"  v{v} [shape={shape}];")
    for u, letter, w, _ in _positive_arrows(g):
        if pair is not None:
            name = pair.letter_name(letter)
        else:
            name = f"{letter.factor}.{letter.gen}"
        lines.append(f'  v{u} -> v{w} [label="{name}", color={colors[letter.factor]}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dump(g: LabeledGraph, pair: "FactorPair | None" = None) -> str:
    """One line per geometric edge: ``vertex label -> vertex``."""
    lines = []
    for u, letter, w, _ in _positive_arrows(g):
        name = pair.letter_name(letter) if pair is not None else f"{letter.factor}.{letter.gen}"
        lines.append(f"{u} {name} -> {w}")
    return "\n".join(lines) + ("\n" if lines else "")

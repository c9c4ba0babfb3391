"""Shared test machinery: independent oracles and random corpora.

The oracles here deliberately avoid the library's graph pipeline.  Normal
form arithmetic is reimplemented from scratch on syllable tuples, and
membership is decided by closing the generating set under multiplication
inside a bounded ball of normal forms.
"""

from __future__ import annotations

import itertools
import random

from freeprod import FactorPair, Letter, Word

Syllables = tuple[tuple[int, int], ...]


def nf_of_word(w: Word, pair: FactorPair) -> Syllables:
    """Normal form of a word, recomputed by repeated scanning (no stack)."""
    syl = [(l.factor, pair.letter_element(l)) for l in w]
    changed = True
    while changed:
        changed = False
        for k in range(len(syl) - 1):
            if syl[k][0] == syl[k + 1][0]:
                group = pair.factor(syl[k][0])
                merged = group.mult(syl[k][1], syl[k + 1][1])
                syl[k : k + 2] = [] if merged == group.identity else [(syl[k][0], merged)]
                changed = True
                break
        if not changed:
            for k, (i, e) in enumerate(syl):
                if e == pair.factor(i).identity:
                    del syl[k]
                    changed = True
                    break
    return tuple(syl)


def nf_mult(x: Syllables, y: Syllables, pair: FactorPair) -> Syllables:
    out = list(x)
    for i, e in y:
        group = pair.factor(i)
        if out and out[-1][0] == i:
            merged = group.mult(out[-1][1], e)
            out.pop()
            if merged != group.identity:
                out.append((i, merged))
        else:
            out.append((i, e))
    return tuple(out)


def nf_inverse(x: Syllables, pair: FactorPair) -> Syllables:
    return tuple((i, pair.factor(i).inv(e)) for i, e in reversed(x))


def all_normal_forms(pair: FactorPair, max_len: int) -> list[Syllables]:
    """Every normal form of syllable length at most max_len."""
    out: list[Syllables] = [()]
    nonid = {
        i: [e for e in range(pair.factor(i).order) if e != pair.factor(i).identity]
        for i in (1, 2)
    }
    frontier: list[Syllables] = [()]
    for _ in range(max_len):
        nxt: list[Syllables] = []
        for nf in frontier:
            for i in (1, 2):
                if nf and nf[-1][0] == i:
                    continue
                for e in nonid[i]:
                    nxt.append(nf + ((i, e),))
        out.extend(nxt)
        frontier = nxt
    return out


class OracleOverflow(Exception):
    pass


def closure_members(
    gens: list[Word],
    pair: FactorPair,
    work_len: int,
    size_guard: int = 400_000,
) -> set[Syllables]:
    """All subgroup elements reachable inside the work_len syllable ball.

    Closure under right multiplication by the generators and their inverses,
    starting from the identity.  Raises OracleOverflow when the ball-bounded
    closure grows beyond the guard.
    """
    steps: list[Syllables] = []
    for w in gens:
        nf = nf_of_word(w, pair)
        steps.append(nf)
        steps.append(nf_inverse(nf, pair))
    seen: set[Syllables] = {()}
    frontier: list[Syllables] = [()]
    while frontier:
        cur = frontier.pop()
        for s in steps:
            nxt = nf_mult(cur, s, pair)
            if len(nxt) <= work_len and nxt not in seen:
                if len(seen) >= size_guard:
                    raise OracleOverflow
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def oracle_membership(
    gens: list[Word], pair: FactorPair, query_len: int, work_len: int
) -> set[Syllables]:
    """Membership set for all queries up to query_len, checked for stability.

    The closure is computed at work_len and work_len + 1; the query slice
    must agree, otherwise the bound was too tight for this subgroup.
    """
    a = closure_members(gens, pair, work_len)
    b = closure_members(gens, pair, work_len + 1)
    slice_a = {nf for nf in a if len(nf) <= query_len}
    slice_b = {nf for nf in b if len(nf) <= query_len}
    if slice_a != slice_b:
        raise OracleOverflow("closure not stable; raise work_len")
    return slice_a


def random_word(rng: random.Random, pair: FactorPair, max_len: int) -> Word:
    letters = pair.all_letters()
    n = rng.randint(1, max_len)
    return tuple(rng.choice(letters) for _ in range(n))


def random_subgroups(
    rng: random.Random,
    pair: FactorPair,
    count: int,
    n_gens=(2, 4),
    max_len: int = 8,
) -> list[list[Word]]:
    out = []
    for _ in range(count):
        k = rng.randint(*n_gens)
        out.append([random_word(rng, pair, max_len) for _ in range(k)])
    return out


def subgroups_of(group) -> list[frozenset[int]]:
    """All subgroups, as closures of generating sets of size at most 3."""
    elems = range(group.order)
    found = {frozenset({group.identity})}
    for k in (1, 2, 3):
        for combo in itertools.combinations(elems, k):
            found.add(group.closure(combo))
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def groups_isomorphic(g1, g2) -> bool:
    """Brute-force isomorphism test via generator images.

    Two finite groups of equal order are isomorphic iff some assignment of
    images to g1's generators satisfies g1's relators and generates g2
    (a surjective homomorphism between equal finite orders is bijective).
    Requires g1 to carry relators.
    """
    if g1.order != g2.order:
        return False
    assert g1.relators is not None
    ngens = len(g1.generators)
    if ngens == 0:
        return g2.order == 1
    for images in itertools.product(range(g2.order), repeat=ngens):

        def ev(word):
            x = g2.identity
            for gi, sign in word:
                img = images[gi]
                x = g2.mult(x, img if sign > 0 else g2.inv(img))
            return x

        if all(ev(r) == g2.identity for r in g1.relators):
            if len(g2.closure(images)) == g2.order:
                return True
    return False


def table_invariant(table, identity=None):
    """Complete isomorphism invariant for groups of order below 16:
    the multiset of element orders together with commutativity."""
    n = len(table)
    if identity is None:
        identity = next(
            e for e in range(n) if all(table[e][x] == x for x in range(n))
        )
    orders = []
    for a in range(n):
        k, cur = 1, a
        while cur != identity:
            cur = table[cur][a]
            k += 1
        orders.append(k)
    abelian = all(table[a][b] == table[b][a] for a in range(n) for b in range(n))
    return (n, tuple(sorted(orders)), abelian)


def random_labelled_graph(rng: random.Random, max_v: int = 7, max_e: int = 14):
    """Connected random labelled graph: a random tree plus extra edges."""
    from freeprod import LabeledGraph

    letters = [Letter(1, 0, 1), Letter(1, 0, -1), Letter(2, 0, 1), Letter(2, 0, -1)]
    g = LabeledGraph()
    n = rng.randint(1, max_v)
    for _ in range(n):
        g.add_vertex()
    for v in range(1, n):
        g.add_edge(rng.randrange(v), v, rng.choice(letters))
    for _ in range(rng.randint(0, max_e - n + 1)):
        g.add_edge(rng.randrange(n), rng.randrange(n), rng.choice(letters))
    return g


def naive_random_fold(g, rng: random.Random):
    """Reference folding: pick any foldable pair at random until none remain."""
    h = g.copy()
    while True:
        candidates = []
        for v in h.vertices():
            seen = {}
            for e in h.half_edges(v):
                l = h.label(e)
                if l in seen:
                    candidates.append((seen[l], e))
                else:
                    seen[l] = e
        if not candidates:
            return h
        keep, drop = candidates[rng.randrange(len(candidates))]
        t1, t2 = h.term(keep), h.term(drop)
        h.remove_edge(drop)
        if t1 != t2:
            h._union(t1, t2)

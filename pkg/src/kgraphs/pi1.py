"""Fundamental groups at a vertex: presentations and abelian invariants.

A spanning tree of the base vertex's component turns the groupoid into a
group presentation in the classical way: one generator per non-tree edge,
and for each commuting square (ef, gh) the relator e f h^-1 g^-1 with
tree edges deleted.  Tietze moves shrink the presentation; the exponent
matrix and its Smith normal form give the abelianization, which doubles
as a cheap separating invariant for word equality.

All integer arithmetic is exact (Python integers).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import UnknownVertex
from .groupoid import GWord, SignedEdge, empty_word, word_compose, word_inverse
from .kgraph import KGraph, canonical_relations


@dataclass(frozen=True, eq=False)
class SpanningTree:
    base: str
    vertices: frozenset  # the component of base
    tree_edges: frozenset  # edge names
    to_base: dict  # vertex -> GWord from that vertex to base

    def loop_at_base(self, w: GWord) -> GWord:
        """Conjugate an arbitrary word into a loop at the base via tree paths."""
        for v in (w.source, w.range):
            if v not in self.vertices:
                raise UnknownVertex(f"vertex {v!r} outside the tree's component")
        return word_compose(word_compose(self.to_base[w.range], w), word_inverse(self.to_base[w.source]))


def spanning_tree(kg: KGraph, base: str) -> SpanningTree:
    """Deterministic BFS tree of base's component; edges scanned in
    (color, name) order."""
    sk = kg.skeleton
    if base not in sk.vertices:
        raise UnknownVertex(f"unknown vertex {base!r}")
    to_base = {base: empty_word(base)}
    tree_edges = set()
    queue = deque([base])
    while queue:
        u = queue.popleft()
        for e in sk.edges:  # (color, name)-sorted
            if e.range == u and e.source not in to_base:
                to_base[e.source] = word_compose(to_base[u], GWord((SignedEdge(e, 1),), e.source))
                tree_edges.add(e.name)
                queue.append(e.source)
            if e.source == u and e.range not in to_base:
                to_base[e.range] = word_compose(to_base[u], GWord((SignedEdge(e, -1),), e.range))
                tree_edges.add(e.name)
                queue.append(e.range)
    return SpanningTree(base, frozenset(to_base), frozenset(tree_edges), to_base)


# -- presentations --


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple  # names
    relators: tuple  # each a tuple of (generator, +-1), freely reduced


def _reduce_pairs(seq):
    stack = []
    for g, s in seq:
        if stack and stack[-1] == (g, -s):
            stack.pop()
        else:
            stack.append((g, s))
    return tuple(stack)


def _invert_pairs(seq):
    return tuple((g, -s) for g, s in reversed(seq))


def group_presentation(kg: KGraph, base: str) -> GroupPresentation:
    """Generators: non-tree edges of base's component (name order).
    Relators: square boundaries e f h^-1 g^-1 with tree edges deleted."""
    tree = spanning_tree(kg, base)
    sk = kg.skeleton
    gens = tuple(
        sorted(e.name for e in sk.edges if e.name not in tree.tree_edges and e.source in tree.vertices)
    )
    relators = []
    for sq in canonical_relations(kg.squares):
        (e, f), (g, h) = sq.lhs, sq.rhs
        if e.range not in tree.vertices:
            continue
        raw = [(e.name, 1), (f.name, 1), (h.name, -1), (g.name, -1)]
        relators.append(_reduce_pairs((n, s) for n, s in raw if n not in tree.tree_edges))
    return GroupPresentation(gens, tuple(relators))


def _cyclic_reduce(word):
    word = _reduce_pairs(word)
    while len(word) >= 2 and word[0] == (word[-1][0], -word[-1][1]):
        word = _reduce_pairs(word[1:-1])
    return word


def _cyclic_canonical(word):
    """Least rotation of the word or its inverse; conjugacy-class key."""
    best = None
    for w in (word, _invert_pairs(word)):
        for i in range(max(1, len(w))):
            rot = w[i:] + w[:i]
            if best is None or rot < best:
                best = rot
    return best if best is not None else ()


def tietze_simplify(p: GroupPresentation) -> GroupPresentation:
    """Shrink a presentation by deleting trivial relators and eliminating
    generators defined by a relator that mentions them exactly once.

    Relators are kept cyclically reduced and deduplicated up to rotation
    and inversion.  Among the possible eliminations the one with least
    substitution growth is applied, tie-broken by relator order and
    generator name, so the output is deterministic.  The group presented
    is unchanged.
    """
    gens = list(p.generators)
    relators = [tuple(r) for r in p.relators]
    max_rounds = 10 * max(1, len(gens))

    for _ in range(max_rounds):
        # cleanup: cyclic reduction, drop empties, dedupe conjugates
        cleaned, seen = [], set()
        for r in relators:
            r = _cyclic_reduce(r)
            if not r:
                continue
            key = _cyclic_canonical(r)
            if key in seen:
                continue
            seen.add(key)
            cleaned.append(r)
        cleaned.sort(key=lambda r: (len(r), r))
        relators = cleaned

        best = None  # (growth, relator idx, gen, replacement word)
        for idx, r in enumerate(relators):
            counts = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            for rot in range(len(r)):
                g, s = r[rot]
                if counts[g] != 1:
                    continue
                rest = r[rot + 1 :] + r[:rot]
                replacement = _invert_pairs(rest) if s == 1 else rest
                uses = sum(1 for other in relators for gg, _ in other if gg == g) - 1
                growth = (len(replacement) - 1) * uses
                cand = (growth, idx, g, replacement)
                if best is None or cand[:3] < best[:3]:
                    best = cand
        if best is None:
            break
        _, idx, gen, repl = best
        del relators[idx]
        new_relators = []
        for r in relators:
            out = []
            for g, s in r:
                if g == gen:
                    out.extend(repl if s == 1 else _invert_pairs(repl))
                else:
                    out.append((g, s))
            new_relators.append(_reduce_pairs(out))
        relators = new_relators
        gens.remove(gen)

    relators.sort(key=lambda r: (len(r), r))
    return GroupPresentation(tuple(gens), tuple(relators))


# -- integer linear algebra --


def smith_with_transforms(mat):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns (diag, U, V) with U·mat·V diagonal, entries nonnegative and
    each dividing the next.  Pivots are chosen by minimal absolute value
    to limit entry growth; arithmetic is exact.
    """
    m = len(mat)
    n = len(mat[0]) if m else 0
    A = [[int(x) for x in row] for row in mat]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def row_neg(i):
        A[i] = [-x for x in A[i]]
        U[i] = [-x for x in U[i]]

    def row_add(i, j, c):
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]

    def col_swap(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def col_add(i, j, c):
        for r in A:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]

    def pivot_at(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        return best

    t = 0
    while t < min(m, n):
        pos = pivot_at(t)
        if pos is None:
            break
        row_swap(t, pos[0])
        col_swap(t, pos[1])
        if A[t][t] < 0:
            row_neg(t)
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:  # nonzero remainder becomes the smaller pivot
                        row_swap(t, i)
                        if A[t][t] < 0:
                            row_neg(t)
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        col_swap(t, j)
                        if A[t][t] < 0:
                            row_neg(t)
                        dirty = True
        p = A[t][t]
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
        if bad is not None:
            row_add(t, bad[0], 1)  # pull a non-divisible entry up; redo this pivot
            continue
        t += 1

    diag = [A[i][i] for i in range(min(m, n))]
    return diag, U, V


def smith_normal_form(mat):
    """(invariant factor diagonal, rank); see smith_with_transforms."""
    diag, _, _ = smith_with_transforms(mat)
    return diag, sum(1 for d in diag if d)


def in_row_space(mat, vec) -> bool:
    """Whether vec is an integer combination of the rows of mat."""
    m = len(mat)
    n = len(mat[0]) if m else len(vec)
    if len(vec) != n:
        raise ValueError(f"vector length {len(vec)} does not match {n} columns")
    if m == 0:
        return all(x == 0 for x in vec)
    diag, _, V = smith_with_transforms(mat)
    w = [sum(vec[i] * V[i][j] for i in range(n)) for j in range(n)]
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        if (d == 0 and w[j] != 0) or (d != 0 and w[j] % d):
            return False
    return True


# -- abelianization --


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple  # invariant factors > 1, each dividing the next

    def describe(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "1"


def exponent_matrix(p: GroupPresentation):
    """Rows = relators, columns = generators, entries = exponent sums."""
    index = {g: i for i, g in enumerate(p.generators)}
    rows = []
    for r in p.relators:
        row = [0] * len(p.generators)
        for g, s in r:
            row[index[g]] += s
        rows.append(row)
    return rows


def abelianization(p: GroupPresentation) -> AbelianInvariants:
    if not p.relators:
        return AbelianInvariants(len(p.generators), ())
    diag, rank = smith_normal_form(exponent_matrix(p))
    return AbelianInvariants(len(p.generators) - rank, tuple(d for d in diag if d > 1))


def abelian_image(kg: KGraph, tree: SpanningTree, w: GWord):
    """Exponent-sum vector of the tree-conjugated loop over non-tree edges.

    Equal words get equal vectors modulo the relator row space, so a
    difference outside that space separates them; use `in_row_space` on
    the difference against `exponent_matrix(group_presentation(...))`.
    """
    loop = tree.loop_at_base(w)
    gens = sorted(
        e.name
        for e in kg.skeleton.edges
        if e.name not in tree.tree_edges and e.source in tree.vertices
    )
    index = {g: i for i, g in enumerate(gens)}
    vec = [0] * len(gens)
    for x in loop.letters:
        if x.edge.name in index:
            vec[index[x.edge.name]] += x.exp
    return tuple(vec)

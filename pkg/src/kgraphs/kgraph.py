"""k-graphs as a skeleton plus commuting squares.

A commuting square is an ordered pair of parallel 2-edge words (ef, gh)
with the two colors interchanged: color(e)=color(h) != color(f)=color(g),
s(e)=r(f), s(g)=r(h), s(f)=s(h), r(e)=r(g).  A complete, involutive set of
squares is exactly the data of the unique-factorization property on
degree-(ni+nj) elements, and for rank >= 3 the squares must additionally
be consistent on triples of orthogonal edges ("cubes"); `validate` checks
all of this exhaustively.

Squares are kept as a *directed* relation: `validate` checks the set it
is given, and `involution_closure` is what builders use to expand each
declared relation into both orientations.  A validated k-graph answers
`swap(e, f)` in O(1) from a cached lookup keyed by the left word.

Elements of the k-graph are represented by their unique color-ascending
edge word (`NormalForm`); `normalize` computes it by bubbling adjacent
color inversions through squares, which terminates because each step
removes one inversion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import (
    BadColor,
    DegreeTooLarge,
    InvalidKGraph,
    MalformedSquare,
    NotComposable,
    NotOrthogonal,
    RequiresValidation,
    SwapUndefined,
)
from .skeleton import (
    Degree,
    Edge,
    EdgePath,
    Skeleton,
    add_degrees,
    degree_leq,
    degrees_up_to,
    zero_degree,
)


@dataclass(frozen=True, order=True)
class Square:
    """Directed commuting square lhs -> rhs between parallel 2-edge words."""

    lhs: tuple  # (e, f)
    rhs: tuple  # (g, h)

    def mirror(self) -> "Square":
        return Square(self.rhs, self.lhs)

    def check_well_formed(self, sk: Skeleton) -> None:
        (e, f), (g, h) = self.lhs, self.rhs
        for x in (e, f, g, h):
            if sk.edge_map.get(x.name) != x:
                raise MalformedSquare(f"square uses edge {x.name!r} not in the skeleton")
        if not (e.color == h.color != f.color == g.color):
            raise MalformedSquare(
                f"square ({e.name} {f.name}, {g.name} {h.name}) does not interchange two colors"
            )
        if e.source != f.range or g.source != h.range:
            raise MalformedSquare(f"square ({e.name} {f.name}, {g.name} {h.name}) has a non-composable side")
        if e.range != g.range or f.source != h.source:
            raise MalformedSquare(f"square sides ({e.name} {f.name}, {g.name} {h.name}) are not parallel")

    def key(self) -> tuple:
        return (self.lhs[0].name, self.lhs[1].name)

    def words(self) -> tuple:
        return (self.lhs[0].name, self.lhs[1].name, self.rhs[0].name, self.rhs[1].name)


def involution_closure(squares: Iterable[Square]) -> tuple:
    """Each relation in both orientations, deduplicated and sorted."""
    out = set()
    for sq in squares:
        out.add(sq)
        out.add(sq.mirror())
    return tuple(sorted(out))


def canonical_relations(squares: Iterable[Square]) -> tuple:
    """One orientation per involution pair: the lexicographically smaller lhs."""
    seen = {}
    for sq in squares:
        pick = min(sq, sq.mirror(), key=lambda s: s.key())
        seen[pick.key()] = pick
    return tuple(seen[k] for k in sorted(seen))


# -- validation findings --


@dataclass(frozen=True)
class MissingSquare:
    pair: tuple  # (e.name, f.name)


@dataclass(frozen=True)
class DuplicateSquare:
    pair: tuple


@dataclass(frozen=True)
class BrokenInvolution:
    square: Square


@dataclass(frozen=True)
class CubeInconsistency:
    triple: tuple  # (e.name, f.name, g.name)
    first: tuple  # edge names after swapping positions 1-2 first
    second: tuple  # edge names after swapping positions 2-3 first


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    failures: tuple

    def kinds(self) -> set:
        return {type(f).__name__ for f in self.failures}


def validate(sk: Skeleton, squares: Iterable[Square]) -> ValidationReport:
    """Check the unique-factorization axioms on a directed square set.

    ok iff (a) every ordered composable pair of distinctly-colored edges is
    the lhs of exactly one square, (b) lhs -> rhs is an involution of the
    given set, and (c) for rank >= 3, rewriting each 3-color word to the
    reversed color order gives the same edges along both swap orders.
    Structurally malformed squares raise MalformedSquare instead.
    """
    squares = tuple(sorted(set(squares)))
    for sq in squares:
        sq.check_well_formed(sk)

    failures = []
    lookup = {}
    for sq in squares:
        key = sq.key()
        if key in lookup:
            failures.append(DuplicateSquare(key))
        else:
            lookup[key] = sq

    for i, j in itertools.permutations(range(1, sk.rank + 1), 2):
        for e, f in sk.composable_orthogonal_pairs(i, j):
            if (e.name, f.name) not in lookup:
                failures.append(MissingSquare((e.name, f.name)))

    for sq in squares:
        partner = lookup.get((sq.rhs[0].name, sq.rhs[1].name))
        if partner is None or partner.rhs != sq.lhs:
            failures.append(BrokenInvolution(sq))

    if sk.rank >= 3:
        failures.extend(_cube_findings(sk, lookup))

    failures.sort(key=lambda f: (type(f).__name__, repr(f)))
    return ValidationReport(not failures, tuple(failures))


def _swap_word(lookup, word, pos):
    """Apply the square with lhs word[pos:pos+2]; None if no square covers it."""
    sq = lookup.get((word[pos].name, word[pos + 1].name))
    if sq is None:
        return None
    return word[:pos] + list(sq.rhs) + word[pos + 2 :]


def _cube_findings(sk: Skeleton, lookup) -> list:
    """Compare the two 3-swap routes that reverse the colors of each word efg."""
    found = []
    for e in sk.edges:
        for f in sk.edges_by_range[e.source]:
            if f.color == e.color:
                continue
            for g in sk.edges_by_range[f.source]:
                if g.color in (e.color, f.color):
                    continue
                first = _route(lookup, [e, f, g], (0, 1, 0))
                second = _route(lookup, [e, f, g], (1, 0, 1))
                if first is None or second is None:
                    continue  # missing squares are already reported
                if first != second:
                    found.append(
                        CubeInconsistency(
                            (e.name, f.name, g.name),
                            tuple(x.name for x in first),
                            tuple(x.name for x in second),
                        )
                    )
    return found


def _route(lookup, word, positions):
    for pos in positions:
        word = _swap_word(lookup, word, pos)
        if word is None:
            return None
    return word


# -- the k-graph proper --


@dataclass(frozen=True)
class KGraph:
    skeleton: Skeleton
    squares: tuple  # directed Squares, sorted
    validated: bool

    def __post_init__(self):
        object.__setattr__(self, "squares", tuple(sorted(set(self.squares))))

    @cached_property
    def swap_map(self) -> dict:
        """Left 2-edge word -> right 2-edge word, first declaration wins."""
        out = {}
        for sq in self.squares:
            out.setdefault(sq.key(), sq.rhs)
        return out

    @property
    def rank(self) -> int:
        return self.skeleton.rank

    def require_validated(self, what: str) -> None:
        if not self.validated:
            raise RequiresValidation(f"{what} needs a validated k-graph")

    def swap(self, e: Edge, f: Edge) -> tuple:
        """The unique (g, h) with ef and gh parallel factorizations."""
        if e.color == f.color:
            raise NotOrthogonal(f"edges {e.name!r}, {f.name!r} have the same color")
        if e.source != f.range:
            raise NotComposable(f"s({e.name})={e.source!r} but r({f.name})={f.range!r}")
        got = self.swap_map.get((e.name, f.name))
        if got is None:
            raise SwapUndefined(f"no square with left word {e.name} {f.name}")
        return got


def make_kgraph(sk: Skeleton, relations: Iterable[Square], *, require_valid: bool = True) -> KGraph:
    """Close the declared relations under the involution and validate.

    With require_valid=False the (possibly partial) square set is kept and
    the k-graph is marked unvalidated; groupoid-level operations still
    work on it, factorization-level ones refuse.
    """
    squares = involution_closure(relations)
    report = validate(sk, squares)
    if require_valid and not report.ok:
        raise InvalidKGraph(report)
    return KGraph(sk, squares, report.ok)


# -- normal forms --


@dataclass(frozen=True)
class NormalForm:
    """The color-ascending representative of one element.

    blocks[i] holds the color-(i+1) edges; their concatenation is a valid
    edge word in composition order.  Equality of normal forms is equality
    in the k-graph.
    """

    source: str
    range: str
    degree: Degree
    blocks: tuple  # per color, a tuple of Edges

    def edges(self) -> tuple:
        return tuple(e for block in self.blocks for e in block)

    def to_path(self) -> EdgePath:
        return EdgePath(len(self.degree), self.source, self.edges())

    def is_identity(self) -> bool:
        return not any(self.blocks)

    def word_names(self) -> tuple:
        return tuple(e.name for e in self.edges())

    def sort_key(self) -> tuple:
        return (self.degree, self.range, self.source, self.word_names())


def _blocks_from_sorted(rank: int, edges) -> tuple:
    blocks = [[] for _ in range(rank)]
    for e in edges:
        blocks[e.color - 1].append(e)
    return tuple(tuple(b) for b in blocks)


def normalize(kg: KGraph, p: EdgePath) -> NormalForm:
    """Unique color-ascending representative of p's class modulo the squares.

    Bubble pass: repeatedly rewrite the leftmost adjacent pair whose colors
    descend; the inversion count drops by one per step, and the result is
    independent of the strategy because the validated axioms make the
    class's color-sorted factorization unique.
    """
    kg.require_validated("normalize")
    word = list(p.edges)
    while True:
        for i in range(len(word) - 1):
            if word[i].color > word[i + 1].color:
                word[i : i + 2] = kg.swap(word[i], word[i + 1])
                break
        else:
            break
    return NormalForm(p.source, p.range, p.degree(), _blocks_from_sorted(kg.rank, word))


def compose(kg: KGraph, lam: NormalForm, mu: NormalForm) -> NormalForm:
    if lam.source != mu.range:
        raise NotComposable(f"s(left)={lam.source!r} but r(right)={mu.range!r}")
    return normalize(kg, lam.to_path().compose(mu.to_path()))


def vertex_element(kg: KGraph, v: str) -> NormalForm:
    kg.skeleton.empty_path(v)  # vertex existence check
    return NormalForm(v, v, zero_degree(kg.rank), _blocks_from_sorted(kg.rank, ()))


def factorize(kg: KGraph, lam: NormalForm, m: Degree) -> tuple:
    """The unique (beta, gamma) with lam = beta∘gamma and d(beta) = m.

    Pulls, color by color, the required number of edges to the front of
    the word using swaps, then splits.  Any edge-word representative of
    lam yields the same pair, by unique factorization.
    """
    kg.require_validated("factorize")
    if not degree_leq(m, lam.degree):
        raise DegreeTooLarge(f"requested degree {m} exceeds d = {lam.degree}")
    word = list(lam.edges())
    pos = 0
    for color in range(1, kg.rank + 1):
        for _ in range(m[color - 1]):
            j = next(i for i in range(pos, len(word)) if word[i].color == color)
            while j > pos:
                word[j - 1 : j + 1] = kg.swap(word[j - 1], word[j])
                j -= 1
            pos += 1
    prefix, suffix = word[:pos], word[pos:]
    mid = prefix[-1].source if prefix else lam.range
    beta = NormalForm(mid, lam.range, m, _blocks_from_sorted(kg.rank, prefix))
    gamma = normalize(kg, EdgePath(kg.rank, lam.source, tuple(suffix)))
    return beta, gamma


def hom(kg: KGraph, u: str, v: str, n: Degree) -> list:
    """All elements with range u, source v and degree n, sorted.

    Color-ascending words are exactly the normal forms, so a block-wise
    DFS from u enumerates each element once.
    """
    kg.require_validated("hom")
    sk = kg.skeleton
    if u not in sk.vertices or v not in sk.vertices:
        return []
    out = []

    def rec(vertex, left, acc):
        if all(c == 0 for c in left):
            if vertex == v:
                out.append(tuple(acc))
            return
        color = next(i + 1 for i, c in enumerate(left) if c)
        remaining = left[:color - 1] + (left[color - 1] - 1,) + left[color:]
        for e in sk.edges_by_range[vertex]:
            if e.color == color:
                acc.append(e)
                rec(e.source, remaining, acc)
                acc.pop()

    rec(u, tuple(n), [])
    forms = [
        NormalForm(edges[-1].source if edges else u, u, tuple(n), _blocks_from_sorted(kg.rank, edges))
        for edges in out
    ]
    forms.sort(key=NormalForm.sort_key)
    return forms


def elements_up_to(kg: KGraph, bound: Degree) -> Iterator[NormalForm]:
    """Every element of degree <= bound exactly once, degree-major order."""
    kg.require_validated("elements_up_to")
    vs = sorted(kg.skeleton.vertices)
    for n in degrees_up_to(bound):
        for u in vs:
            if all(c == 0 for c in n):
                yield vertex_element(kg, u)
                continue
            for v in vs:
                yield from hom(kg, u, v, n)


def component_1graph(kg: KGraph, color: int) -> KGraph:
    """The rank-1 k-graph on the color-`color` subskeleton (no squares)."""
    if not 1 <= color <= kg.rank:
        raise BadColor(f"color {color} out of range 1..{kg.rank}")
    sub = Skeleton(
        1,
        kg.skeleton.vertices,
        tuple(Edge(e.name, e.source, e.range, 1) for e in kg.skeleton.edges_of_color(color)),
    )
    return make_kgraph(sub, ())

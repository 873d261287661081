"""Words over the augmented skeleton and the square-move calculus.

Adjoining a formal inverse e^-1 (source and range interchanged) to every
edge gives the augmented graph; words in signed edges, modulo the
cancellation relations e^-1 e = s(e), present the fundamental groupoid of
the skeleton, and quotienting further by the commuting squares presents
the fundamental groupoid of the k-graph itself.  Equality of words is
therefore a rewriting problem, handled by `kgraphs.equality`.

Moves on a word, each preserving its class:

* square rewrite: an adjacent positive pair ef becomes gh when (ef, gh)
  is a square; an adjacent negative pair f^-1 e^-1 becomes h^-1 g^-1;
* insertion of a cancelling pair x x^-1 at any vertex-compatible gap
  (needed to reach mixed-sign consequences such as a -> g c f^-1);
* deletion of a cancelling pair (free reduction).

`square_neighbors` packages these the way the search consumes them:
square rewrites are followed by full free reduction, insertions are kept
raw.  A *derivation* is a chain of words in which consecutive entries
differ by exactly one raw move; `replay_derivation` machine-checks that.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotComposable, ReplayError, UnknownEdge
from .kgraph import KGraph, NormalForm
from .skeleton import Edge


@dataclass(frozen=True, order=True)
class SignedEdge:
    edge: Edge
    exp: int  # +1 or -1

    def __post_init__(self):
        if self.exp not in (1, -1):
            raise ValueError(f"exponent must be +1 or -1, got {self.exp}")

    @property
    def source(self) -> str:
        return self.edge.source if self.exp == 1 else self.edge.range

    @property
    def range(self) -> str:
        return self.edge.range if self.exp == 1 else self.edge.source

    def inverse(self) -> "SignedEdge":
        return SignedEdge(self.edge, -self.exp)

    def token(self) -> str:
        return self.edge.name if self.exp == 1 else f"{self.edge.name}^-1"


@dataclass(frozen=True)
class GWord:
    """A word of composable signed edges; empty words carry their vertex.

    As with edge paths, the anchor is canonicalized to the source vertex,
    so structural equality is equality of words.
    """

    letters: tuple
    anchor: str

    def __post_init__(self):
        for a, b in zip(self.letters, self.letters[1:]):
            if a.source != b.range:
                raise NotComposable(f"letters {a.token()} and {b.token()} do not chain")
        if self.letters:
            object.__setattr__(self, "anchor", self.letters[-1].source)

    @property
    def source(self) -> str:
        return self.letters[-1].source if self.letters else self.anchor

    @property
    def range(self) -> str:
        return self.letters[0].range if self.letters else self.anchor

    def __len__(self) -> int:
        return len(self.letters)

    def is_reduced(self) -> bool:
        return not any(b == a.inverse() for a, b in zip(self.letters, self.letters[1:]))

    def tokens(self) -> tuple:
        return tuple(x.token() for x in self.letters)

    def display(self) -> str:
        return " ".join(self.tokens()) if self.letters else f"(identity at {self.anchor})"


def word_from_edges(edges, anchor=None) -> GWord:
    letters = tuple(SignedEdge(e, 1) for e in edges)
    if not letters and anchor is None:
        raise NotComposable("empty word needs an anchor vertex")
    return GWord(letters, anchor if anchor is not None else letters[-1].source)


def empty_word(vertex: str) -> GWord:
    return GWord((), vertex)


def free_reduce(w: GWord) -> GWord:
    """Delete cancelling adjacent pairs until none remain.

    Free reduction is confluent, so the result does not depend on the
    deletion order.
    """
    stack = []
    for x in w.letters:
        if stack and x == stack[-1].inverse():
            stack.pop()
        else:
            stack.append(x)
    return GWord(tuple(stack), w.source)


def reduction_chain(w: GWord) -> tuple:
    """The words visited by deleting the leftmost cancelling pair each step."""
    chain = [w]
    cur = list(w.letters)
    while True:
        i = next((i for i in range(len(cur) - 1) if cur[i + 1] == cur[i].inverse()), None)
        if i is None:
            break
        del cur[i : i + 2]
        chain.append(GWord(tuple(cur), w.source))
    return tuple(chain)


def word_inverse(w: GWord) -> GWord:
    return GWord(tuple(x.inverse() for x in reversed(w.letters)), w.source if not w.letters else w.range)


def word_compose(w1: GWord, w2: GWord) -> GWord:
    """Juxtaposition w1∘w2 (no reduction); requires s(w1) = r(w2)."""
    if w1.source != w2.range:
        raise NotComposable(f"s(left)={w1.source!r} but r(right)={w2.range!r}")
    return GWord(w1.letters + w2.letters, w2.anchor)


def canonical_functor(kg: KGraph, lam: NormalForm) -> GWord:
    """The positive word of an element's normal form (identity on vertices)."""
    return word_from_edges(lam.edges(), anchor=lam.source)


def gword_degree(w: GWord, rank: int) -> tuple:
    """Signed color counts; the degree functor extended to the groupoid."""
    counts = [0] * rank
    for x in w.letters:
        counts[x.edge.color - 1] += x.exp
    return tuple(counts)


def check_word_in(kg: KGraph, w: GWord) -> None:
    sk = kg.skeleton
    for x in w.letters:
        if sk.edge_map.get(x.edge.name) != x.edge:
            raise UnknownEdge(f"word uses edge {x.edge.name!r} not in the skeleton")
    if not w.letters and w.anchor not in sk.vertices:
        raise UnknownEdge(f"word anchored at unknown vertex {w.anchor!r}")


# -- moves --


def _square_rewrite(kg: KGraph, letters, i):
    """Apply a square to the adjacent pair at i, or None; no reduction."""
    a, b = letters[i], letters[i + 1]
    if a.exp == 1 and b.exp == 1:
        got = kg.swap_map.get((a.edge.name, b.edge.name))
        if got is None:
            return None
        g, h = got
        return letters[:i] + (SignedEdge(g, 1), SignedEdge(h, 1)) + letters[i + 2 :]
    if a.exp == -1 and b.exp == -1:
        # the pair reads f^-1 e^-1 = (ef)^-1 with e = b.edge, f = a.edge
        got = kg.swap_map.get((b.edge.name, a.edge.name))
        if got is None:
            return None
        g, h = got
        return letters[:i] + (SignedEdge(h, -1), SignedEdge(g, -1)) + letters[i + 2 :]
    return None


def _gap_vertex(w: GWord, gap: int) -> str:
    return w.range if gap == 0 else w.letters[gap - 1].source


def _insertions_at(kg: KGraph, vertex: str):
    """Signed letters x with r(x) = vertex, in deterministic order."""
    sk = kg.skeleton
    out = [SignedEdge(e, 1) for e in sk.edges_by_range.get(vertex, ())]
    out += [SignedEdge(e, -1) for e in sk.edges_by_source.get(vertex, ())]
    out.sort(key=lambda x: (x.edge.color, x.edge.name, -x.exp))
    return out


def square_neighbors(kg: KGraph, w: GWord) -> list:
    """All words one move away: square rewrites (freely reduced afterwards)
    and raw insertions of cancelling pairs.  Deterministically ordered."""
    seen = set()
    out = []

    def emit(word):
        key = (word.letters, word.anchor)
        if key not in seen:
            seen.add(key)
            out.append(word)

    for i in range(len(w.letters) - 1):
        new = _square_rewrite(kg, w.letters, i)
        if new is not None:
            emit(free_reduce(GWord(new, w.source)))
    for gap in range(len(w.letters) + 1):
        for x in _insertions_at(kg, _gap_vertex(w, gap)):
            letters = w.letters[:gap] + (x, x.inverse()) + w.letters[gap:]
            emit(GWord(letters, w.source))
    out.sort(key=lambda v: (len(v.letters), tuple((x.edge.name, x.exp) for x in v.letters)))
    return out


# -- derivations --


def is_local_move(kg: KGraph, u: GWord, v: GWord) -> bool:
    """One square rewrite, one insertion, or one deletion turns u into v."""
    if (u.source, u.range) != (v.source, v.range):
        return False
    lu, lv = u.letters, v.letters
    if len(lv) == len(lu):
        diff = [i for i in range(len(lu)) if lu[i] != lv[i]]
        if len(diff) != 2 or diff[1] != diff[0] + 1:
            return False
        new = _square_rewrite(kg, lu, diff[0])
        return new is not None and new == lv
    if len(lv) == len(lu) + 2:
        lu, lv = lv, lu  # treat as a deletion from the longer word
    if len(lu) != len(lv) + 2:
        return False
    for i in range(len(lv) + 1):
        if lu[:i] == lv[:i] and lu[i + 2 :] == lv[i:] and lu[i + 1] == lu[i].inverse():
            return True
    return False


def replay_derivation(kg: KGraph, words) -> None:
    """Machine-check a derivation; raises ReplayError on the first bad step."""
    words = list(words)
    if not words:
        raise ReplayError("empty derivation")
    for n, (u, v) in enumerate(zip(words, words[1:])):
        if u == v:
            continue
        if not is_local_move(kg, u, v):
            raise ReplayError(f"step {n}: {u.display()} -> {v.display()} is not a single move")

"""Word equality in the presented groupoid, and the probes built on it.

The word problem here is only semi-decidable, so `equal_in_g` returns a
three-way verdict:

* Equal -- with a machine-checkable derivation (a chain of words, each
  one local move from the previous; see `groupoid.replay_derivation`);
* Distinct -- with a separating invariant that genuinely differs, tried
  in the order endpoints, degree, reduced word (square-free case only),
  abelianized image modulo the relator lattice;
* Unknown -- when the bounded search gives up.

Equal verdicts are found by iterative-deepening bidirectional BFS over
square moves and cancelling-pair insertions, bounded by a maximum word
length and a node budget.  Insertions are restricted to positions where
they enable an immediate square rewrite; if the restricted search fails
and budget remains, an unrestricted pass runs, so completeness within
the length cap is preserved.

On top of the search sits a congruence layer: proven equalities live in
a union-find whose links carry derivations, and two same-length positive
words are equal whenever they split into componentwise-equal halves (the
derivations lift through the context because moves are position-local).
This layer only ever proves Equal; it is what keeps the exhaustive
reports tractable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .groupoid import (
    GWord,
    SignedEdge,
    canonical_functor,
    check_word_in,
    free_reduce,
    gword_degree,
    reduction_chain,
    replay_derivation,
    word_compose,
)
from .kgraph import KGraph, NormalForm, elements_up_to, factorize
from .skeleton import degrees_up_to
from . import pi1


@dataclass(frozen=True)
class SearchBudget:
    """Limits for the equality search.

    max_word_length defaults to 2*max(|w1|,|w2|) + 4; max_nodes counts
    expanded states, cumulatively per engine (a report shares one engine
    across all of its pairs).
    """

    max_word_length: int | None = None
    max_nodes: int = 1_000_000
    restrict_insertions: bool = True


@dataclass(frozen=True)
class Equal:
    derivation: tuple  # GWords, consecutive entries one local move apart


@dataclass(frozen=True)
class Distinct:
    invariant: str  # "endpoints" | "degree" | "reduced-word" | "abelianization"
    left: object
    right: object


@dataclass(frozen=True)
class Unknown:
    explored: int
    max_length: int


def _dedup(words):
    out = []
    for w in words:
        if not out or out[-1] != w:
            out.append(w)
    return tuple(out)


class EqualityEngine:
    """Shared state for many equality queries over one k-graph."""

    def __init__(self, kg: KGraph, budget: SearchBudget | None = None):
        self.kg = kg
        self.budget = budget if budget is not None else SearchBudget()
        self.nodes_spent = 0
        sk = kg.skeleton
        self._edge = sk.edge_map
        self._swap = {k: (v[0].name, v[1].name) for k, v in kg.swap_map.items()}
        ins = {v: [] for v in sk.vertices}
        for e in sk.edges:
            ins[e.range].append((e.name, 1))
            ins[e.source].append((e.name, -1))
        self._ins = {v: tuple(sorted(xs)) for v, xs in ins.items()}
        self._memo = {}  # reduced-pair key -> Distinct | Unknown
        self._parent = {}  # union-find over reduced-word keys
        self._link = {}  # key -> derivation from key's word to parent's word
        self._word = {}  # key -> GWord
        self._pi1 = {}  # component base -> (tree, matrix, snf diag, snf V)

    # -- letter-level helpers (states are (letters, source) with letters
    #    a tuple of (edge name, exponent)) --

    def _src_of(self, letter):
        e = self._edge[letter[0]]
        return e.source if letter[1] == 1 else e.range

    def _rng_of(self, letter):
        e = self._edge[letter[0]]
        return e.range if letter[1] == 1 else e.source

    def _reduce(self, letters):
        stack = []
        for x in letters:
            if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
                stack.pop()
            else:
                stack.append(x)
        return tuple(stack)

    def _key(self, w: GWord):
        return (tuple((x.edge.name, x.exp) for x in w.letters), w.source)

    def _to_gword(self, letters, src) -> GWord:
        return GWord(tuple(SignedEdge(self._edge[n], s) for n, s in letters), src)

    # -- union-find with derivation-carrying links --

    def _register(self, key, word):
        self._word.setdefault(key, word)

    def _find(self, key):
        while self._parent.get(key, key) != key:
            key = self._parent[key]
        return key

    def _chain_to_root(self, key):
        chain = (self._word[key],)
        while self._parent.get(key, key) != key:
            chain = _dedup(chain + self._link[key])
            key = self._parent[key]
        return chain

    def _union(self, k1, k2, chain12):
        r1, r2 = self._find(k1), self._find(k2)
        if r1 == r2:
            return
        c1 = self._chain_to_root(k1)
        c2 = self._chain_to_root(k2)
        self._parent[r1] = r2
        self._link[r1] = _dedup(tuple(reversed(c1)) + tuple(chain12) + c2)

    def _uf_chain(self, k1, k2):
        c1 = self._chain_to_root(k1)
        c2 = self._chain_to_root(k2)
        return _dedup(c1 + tuple(reversed(c2)))

    # -- the query --

    def query(self, w1: GWord, w2: GWord):
        check_word_in(self.kg, w1)
        check_word_in(self.kg, w2)
        rank = self.kg.rank
        if (w1.source, w1.range) != (w2.source, w2.range):
            return Distinct("endpoints", (w1.source, w1.range), (w2.source, w2.range))
        d1, d2 = gword_degree(w1, rank), gword_degree(w2, rank)
        if d1 != d2:
            return Distinct("degree", d1, d2)

        r1, r2 = free_reduce(w1), free_reduce(w2)
        k1, k2 = self._key(r1), self._key(r2)
        self._register(k1, r1)
        self._register(k2, r2)

        def assemble(core):
            pre = reduction_chain(w1)
            post = tuple(reversed(reduction_chain(w2)))
            derivation = _dedup(pre + tuple(core) + post)
            replay_derivation(self.kg, derivation)  # self-check before emitting
            return Equal(derivation)

        if k1 == k2:
            return assemble((r1,))
        if self._find(k1) == self._find(k2):
            return assemble(self._uf_chain(k1, k2))

        pair = (k1, k2) if k1 <= k2 else (k2, k1)
        memo = self._memo.get(pair)
        if isinstance(memo, Distinct):
            return memo

        if not self.kg.squares:
            verdict = Distinct("reduced-word", r1.display(), r2.display())
            self._memo[pair] = verdict
            return verdict

        sep = self._abelian_separation(r1, r2)
        if sep is not None:
            self._memo[pair] = sep
            return sep

        core = self._try_decompose(r1, r2)
        if core is not None:
            self._union(k1, k2, core)
            return assemble(core)

        if isinstance(memo, Unknown):
            return memo  # searched before; only cheap routes retried above

        core = self._search(k1, k2)
        if core is not None:
            self._union(k1, k2, core)
            return assemble(core)
        verdict = Unknown(self.nodes_spent, self._max_length(k1, k2))
        self._memo[pair] = verdict
        return verdict

    # -- separating invariants --

    def _abelian_separation(self, r1: GWord, r2: GWord):
        base = min(self.kg.skeleton.component_of(r1.source))
        cached = self._pi1.get(base)
        if cached is None:
            tree = pi1.spanning_tree(self.kg, base)
            pres = pi1.group_presentation(self.kg, base)
            matrix = pi1.exponent_matrix(pres)
            if matrix:
                diag, _, V = pi1.smith_with_transforms(matrix)
            else:
                diag, V = [], [[int(i == j) for j in range(len(pres.generators))] for i in range(len(pres.generators))]
            cached = (tree, diag, V)
            self._pi1[base] = cached
        tree, diag, V = cached
        img1 = pi1.abelian_image(self.kg, tree, r1)
        img2 = pi1.abelian_image(self.kg, tree, r2)
        delta = [a - b for a, b in zip(img1, img2)]
        n = len(delta)
        w = [sum(delta[i] * V[i][j] for i in range(n)) for j in range(n)]
        for j in range(n):
            d = diag[j] if j < len(diag) else 0
            if (d == 0 and w[j] != 0) or (d != 0 and w[j] % d):
                return Distinct("abelianization", img1, img2)
        return None

    # -- congruence decomposition --

    def _try_decompose(self, r1: GWord, r2: GWord):
        l1, l2 = r1.letters, r2.letters
        if len(l1) != len(l2) or len(l1) < 2:
            return None
        if any(x.exp != 1 for x in l1) or any(x.exp != 1 for x in l2):
            return None
        rank = self.kg.rank
        for t in range(1, len(l1)):
            u1, u2 = GWord(l1[:t], r1.anchor), GWord(l1[t:], r1.anchor)
            v1, v2 = GWord(l2[:t], r2.anchor), GWord(l2[t:], r2.anchor)
            if u1.source != v1.source:
                continue
            if gword_degree(u1, rank) != gword_degree(v1, rank):
                continue
            va = self.query(u1, v1)
            if not isinstance(va, Equal):
                continue
            vb = self.query(u2, v2)
            if not isinstance(vb, Equal):
                continue
            lifted = [word_compose(x, u2) for x in va.derivation]
            lifted += [word_compose(v1, x) for x in vb.derivation]
            return _dedup(lifted)
        return None

    # -- bounded bidirectional search --

    def _max_length(self, k1, k2):
        if self.budget.max_word_length is not None:
            return self.budget.max_word_length
        return 2 * max(len(k1[0]), len(k2[0])) + 4

    def _search(self, k1, k2):
        maxlen = self._max_length(k1, k2)
        start = max(len(k1[0]), len(k2[0]), 2)
        caps = list(range(start, maxlen + 1, 2)) or [maxlen]
        for restrict in ([True, False] if self.budget.restrict_insertions else [False]):
            for cap in caps:
                if self.nodes_spent >= self.budget.max_nodes:
                    return None
                found = self._bfs(k1, k2, cap, restrict)
                if found is not None:
                    return found
        return None

    def _bfs(self, k1, k2, cap, restrict):
        visited = ({k1: None}, {k2: None})
        frontier = ([k1], [k2])
        while frontier[0] or frontier[1]:
            if frontier[0] and (not frontier[1] or len(frontier[0]) <= len(frontier[1])):
                side = 0
            else:
                side = 1
            other = 1 - side
            new = []
            for state in frontier[side]:
                if self.nodes_spent >= self.budget.max_nodes:
                    return None
                self.nodes_spent += 1
                for move, child in self._moves(state, cap, restrict):
                    if child in visited[side]:
                        continue
                    visited[side][child] = (state, move)
                    if child in visited[other]:
                        return self._reconstruct(visited, child)
                    new.append(child)
            frontier[side] = new
        return None

    def _moves(self, state, cap, restrict):
        letters, src = state
        n = len(letters)
        for i in range(n - 1):
            a, b = letters[i], letters[i + 1]
            if a[1] == 1 and b[1] == 1:
                gh = self._swap.get((a[0], b[0]))
                if gh is None:
                    continue
                new = letters[:i] + ((gh[0], 1), (gh[1], 1)) + letters[i + 2 :]
            elif a[1] == -1 and b[1] == -1:
                gh = self._swap.get((b[0], a[0]))
                if gh is None:
                    continue
                new = letters[:i] + ((gh[1], -1), (gh[0], -1)) + letters[i + 2 :]
            else:
                continue
            yield ("sq", i), (self._reduce(new), src)
        if n + 2 <= cap:
            for gap in range(n + 1):
                u = self._rng_of(letters[0]) if (gap == 0 and letters) else (
                    src if not letters else self._src_of(letters[gap - 1])
                )
                for x in self._ins.get(u, ()):
                    if restrict and not self._useful(letters, gap, x):
                        continue
                    new = letters[:gap] + (x, (x[0], -x[1])) + letters[gap:]
                    yield ("ins", gap, x), (new, src)

    def _applicable(self, a, b):
        if a[1] == 1 and b[1] == 1:
            return (a[0], b[0]) in self._swap
        if a[1] == -1 and b[1] == -1:
            return (b[0], a[0]) in self._swap
        return False

    def _useful(self, letters, gap, x):
        if gap > 0 and self._applicable(letters[gap - 1], x):
            return True
        xinv = (x[0], -x[1])
        return gap < len(letters) and self._applicable(xinv, letters[gap])

    def _local_letters(self, letters, move):
        """Words (as letter tuples) visited by one search move, each a
        single local move apart, ending at the stored child state."""
        if move[0] == "ins":
            _, gap, x = move
            return [letters[:gap] + (x, (x[0], -x[1])) + letters[gap:]]
        i = move[1]
        a, b = letters[i], letters[i + 1]
        if a[1] == 1:
            g, h = self._swap[(a[0], b[0])]
            raw = letters[:i] + ((g, 1), (h, 1)) + letters[i + 2 :]
        else:
            g, h = self._swap[(b[0], a[0])]
            raw = letters[:i] + ((h, -1), (g, -1)) + letters[i + 2 :]
        out = [raw]
        cur = list(raw)
        while True:
            j = next(
                (j for j in range(len(cur) - 1) if cur[j][0] == cur[j + 1][0] and cur[j][1] == -cur[j + 1][1]),
                None,
            )
            if j is None:
                break
            del cur[j : j + 2]
            out.append(tuple(cur))
        return out

    def _reconstruct(self, visited, meet):
        halves = []
        for side in (0, 1):
            steps = []
            cur = meet
            while visited[side][cur] is not None:
                parent, move = visited[side][cur]
                steps.append((parent, move, cur))
                cur = parent
            steps.reverse()
            src = cur[1]
            words = [self._to_gword(cur[0], src)]
            for parent, move, child in steps:
                for ls in self._local_letters(parent[0], move):
                    words.append(self._to_gword(ls, src))
                assert self._key(words[-1]) == child
            halves.append(words)
        forward, backward = halves
        return _dedup(tuple(forward) + tuple(reversed(backward)))


def equal_in_g(kg: KGraph, w1: GWord, w2: GWord, budget: SearchBudget | None = None):
    """Verdict on whether two words are equal in the presented groupoid."""
    return EqualityEngine(kg, budget).query(w1, w2)


# -- exhaustive probes --

INJECTIVE_WITHIN_BOUND = "injective-within-bound"
NON_INJECTIVE = "non-injective"
INCONCLUSIVE = "inconclusive"
HOLDS_WITHIN_BOUND = "holds-within-bound"
COUNTEREXAMPLE = "counterexample"


@dataclass(frozen=True)
class PairVerdict:
    left: NormalForm
    right: NormalForm
    verdict: object


@dataclass(frozen=True)
class InjectivityReport:
    summary: str
    bound: tuple
    witness: tuple | None  # (NormalForm, NormalForm)
    derivation: tuple | None
    pairs: tuple
    note: str = ""


def _grouped_elements(kg, bound):
    groups = {}
    for nf in elements_up_to(kg, bound):
        groups.setdefault((nf.degree, nf.range, nf.source), []).append(nf)
    out = []
    for key in sorted(groups):
        members = sorted(groups[key], key=NormalForm.sort_key)
        out.append((key, members))
    return out


def injectivity_report(kg: KGraph, bound, budget: SearchBudget | None = None) -> InjectivityReport:
    """Compare every pair of distinct elements sharing source, range and
    degree up to the bound; other pairs are separated by those invariants
    already."""
    kg.require_validated("injectivity_report")
    bound = tuple(bound)
    if not kg.squares:
        return InjectivityReport(
            INJECTIVE_WITHIN_BOUND,
            bound,
            None,
            None,
            (),
            note="no squares: distinct elements have distinct reduced words in the free groupoid",
        )
    engine = EqualityEngine(kg, budget)
    pairs = []
    witness = derivation = None
    saw_unknown = False
    for _, members in _grouped_elements(kg, bound):
        for left, right in itertools.combinations(members, 2):
            verdict = engine.query(canonical_functor(kg, left), canonical_functor(kg, right))
            pairs.append(PairVerdict(left, right, verdict))
            if isinstance(verdict, Equal) and witness is None:
                witness = (left, right)
                derivation = verdict.derivation
            elif isinstance(verdict, Unknown):
                saw_unknown = True
    if witness is not None:
        summary = NON_INJECTIVE
    elif saw_unknown:
        summary = INCONCLUSIVE
    else:
        summary = INJECTIVE_WITHIN_BOUND
    return InjectivityReport(summary, bound, witness, derivation, tuple(pairs))


@dataclass(frozen=True)
class LambdaBarReport:
    summary: str
    bound: tuple
    classes: tuple  # tuples of NormalForms, the image's equality classes
    unknown_pairs: tuple
    violation: dict | None
    note: str = ""

    def class_of(self, nf: NormalForm):
        for cls in self.classes:
            if nf in cls:
                return cls
        return None


def lambda_bar_check(kg: KGraph, bound, budget: SearchBudget | None = None) -> LambdaBarReport:
    """Probe whether the image of the k-graph in its groupoid still has
    unique factorization, up to the bound.

    Elements are partitioned into image-equality classes with equal_in_g;
    then every equal pair (alpha, beta) is factored at every degree
    m <= d, looking for first factors in different classes.  The result
    is evidence within the bound, never a theorem.
    """
    kg.require_validated("lambda_bar_check")
    bound = tuple(bound)
    engine = EqualityEngine(kg, budget)
    grouped = _grouped_elements(kg, bound)

    index = {}
    elements = []
    for _, members in grouped:
        for nf in members:
            index[nf] = len(elements)
            elements.append(nf)
    parent = list(range(len(elements)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    unknown_pairs = []
    tainted_groups = set()
    for key, members in grouped:
        reps = []
        for nf in members:
            placed = False
            for rep in reps:
                verdict = engine.query(canonical_functor(kg, nf), canonical_functor(kg, rep))
                if isinstance(verdict, Equal):
                    parent[find(index[nf])] = find(index[rep])
                    placed = True
                    break
                if isinstance(verdict, Unknown):
                    unknown_pairs.append((nf, rep))
                    tainted_groups.add(key)
            if not placed:
                reps.append(nf)

    by_root = {}
    for nf, i in index.items():
        by_root.setdefault(find(i), []).append(nf)
    classes = tuple(
        tuple(sorted(members, key=NormalForm.sort_key))
        for _, members in sorted(
            by_root.items(), key=lambda kv: NormalForm.sort_key(min(kv[1], key=NormalForm.sort_key))
        )
    )
    class_id = {nf: ci for ci, cls in enumerate(classes) for nf in cls}

    violation = None
    uncertain = False
    for cls in classes:
        if violation:
            break
        for alpha, beta in itertools.combinations(cls, 2):
            if violation:
                break
            for m in degrees_up_to(alpha.degree):
                gamma, delta = factorize(kg, alpha, m)
                epsilon, zeta = factorize(kg, beta, m)
                if gamma == epsilon or class_id[gamma] == class_id[epsilon]:
                    continue
                gkey = (gamma.degree, gamma.range, gamma.source)
                if gkey in tainted_groups:
                    uncertain = True
                    continue
                violation = {
                    "alpha": alpha,
                    "beta": beta,
                    "m": m,
                    "gamma": gamma,
                    "delta": delta,
                    "epsilon": epsilon,
                    "zeta": zeta,
                }
                break

    if violation is not None:
        summary = COUNTEREXAMPLE
    elif unknown_pairs or uncertain:
        summary = INCONCLUSIVE
    else:
        summary = HOLDS_WITHIN_BOUND
    return LambdaBarReport(summary, bound, classes, tuple(unknown_pairs), violation)

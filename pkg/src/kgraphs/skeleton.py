"""Colored directed multigraphs (1-skeletons) and edge paths.

A skeleton of rank k is a finite directed multigraph whose edges carry a
color in 1..k.  Paths are written in *composition order*: in the word
``e1 e2 ... en`` we require ``s(e_i) = r(e_{i+1})``, so words read like
function composition, with the rightmost edge traversed first.  This is
the convention used throughout the package, including file formats and
the command line, and it is the opposite of the edge-sequence order used
in much of the graph-theory literature.

The degree of a path is the vector counting its edges per color; an edge
of color i has degree equal to the i-th standard basis vector.

Everything here is immutable; ``add_vertex``/``add_edge`` return new
skeletons.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator

from .errors import BadColor, DuplicateName, NotComposable, SameColor, UnknownEdge, UnknownVertex

Degree = tuple  # length-k tuple of non-negative ints


def zero_degree(rank: int) -> Degree:
    return (0,) * rank


def basis_degree(rank: int, color: int) -> Degree:
    """Degree of a single color-`color` edge."""
    return tuple(1 if i == color else 0 for i in range(1, rank + 1))


def add_degrees(m: Degree, n: Degree) -> Degree:
    return tuple(a + b for a, b in zip(m, n, strict=True))


def degree_leq(m: Degree, n: Degree) -> bool:
    """Componentwise partial order."""
    return all(a <= b for a, b in zip(m, n, strict=True))


def degrees_up_to(bound: Degree) -> Iterator[Degree]:
    """All degree vectors <= bound, in lexicographic order."""
    if not bound:
        yield ()
        return
    for head in range(bound[0] + 1):
        for tail in degrees_up_to(bound[1:]):
            yield (head,) + tail


@dataclass(frozen=True, order=True)
class Edge:
    """A directed edge `range <- source` with a color in 1..k."""

    name: str
    source: str
    range: str
    color: int


@dataclass(frozen=True)
class Skeleton:
    rank: int
    vertices: frozenset
    edges: tuple

    def __post_init__(self):
        if self.rank < 1:
            raise BadColor(f"rank must be >= 1, got {self.rank}")
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", tuple(sorted(self.edges, key=lambda e: (e.color, e.name))))
        seen = set()
        for e in self.edges:
            if e.name in seen or e.name in self.vertices:
                raise DuplicateName(f"name {e.name!r} is not unique")
            seen.add(e.name)
            if not 1 <= e.color <= self.rank:
                raise BadColor(f"edge {e.name!r} has color {e.color}, rank is {self.rank}")
            for v in (e.source, e.range):
                if v not in self.vertices:
                    raise UnknownVertex(f"edge {e.name!r} uses unknown vertex {v!r}")

    @classmethod
    def empty(cls, rank: int) -> "Skeleton":
        return cls(rank, frozenset(), ())

    # -- derived lookups (cached; the dataclass is frozen but __dict__ is writable) --

    @cached_property
    def edge_map(self) -> dict:
        return {e.name: e for e in self.edges}

    @cached_property
    def edges_by_range(self) -> dict:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.range].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def edges_by_source(self) -> dict:
        out = {v: [] for v in self.vertices}
        for e in self.edges:
            out[e.source].append(e)
        return {v: tuple(es) for v, es in out.items()}

    def edges_of_color(self, color: int) -> tuple:
        if not 1 <= color <= self.rank:
            raise BadColor(f"color {color} out of range 1..{self.rank}")
        return tuple(e for e in self.edges if e.color == color)

    # -- construction --

    def add_vertex(self, name: str) -> "Skeleton":
        if not name:
            raise DuplicateName("vertex name must be nonempty")
        if name in self.vertices or name in self.edge_map:
            raise DuplicateName(f"name {name!r} already in use")
        return Skeleton(self.rank, self.vertices | {name}, self.edges)

    def add_edge(self, edge: Edge) -> "Skeleton":
        if edge.name in self.edge_map or edge.name in self.vertices:
            raise DuplicateName(f"name {edge.name!r} already in use")
        if not 1 <= edge.color <= self.rank:
            raise BadColor(f"color {edge.color} out of range 1..{self.rank}")
        for v in (edge.source, edge.range):
            if v not in self.vertices:
                raise UnknownVertex(f"unknown vertex {v!r}")
        return Skeleton(self.rank, self.vertices, self.edges + (edge,))

    # -- paths --

    def path(self, names: Iterable[str]) -> "EdgePath":
        edges = []
        for n in names:
            if n not in self.edge_map:
                raise UnknownEdge(f"unknown edge {n!r}")
            edges.append(self.edge_map[n])
        if not edges:
            raise UnknownVertex("empty path needs an anchor vertex; use empty_path(v)")
        return EdgePath(self.rank, edges[-1].source, tuple(edges))

    def empty_path(self, vertex: str) -> "EdgePath":
        if vertex not in self.vertices:
            raise UnknownVertex(f"unknown vertex {vertex!r}")
        return EdgePath(self.rank, vertex, ())

    # -- queries --

    def composable_orthogonal_pairs(self, i: int, j: int) -> list:
        """All (e, f) with color(e)=i, color(f)=j and s(e)=r(f), name-sorted."""
        if i == j:
            raise SameColor(f"colors must differ, got {i} twice")
        for c in (i, j):
            if not 1 <= c <= self.rank:
                raise BadColor(f"color {c} out of range 1..{self.rank}")
        pairs = [
            (e, f)
            for e in self.edges_of_color(i)
            for f in self.edges_of_color(j)
            if e.source == f.range
        ]
        pairs.sort(key=lambda p: (p[0].name, p[1].name))
        return pairs

    def connected_components(self) -> tuple:
        """Partition of the vertices under undirected reachability."""
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            a, b = find(e.source), find(e.range)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups = {}
        for v in self.vertices:
            groups.setdefault(find(v), set()).add(v)
        return tuple(frozenset(g) for _, g in sorted(groups.items()))

    def component_of(self, vertex: str) -> frozenset:
        if vertex not in self.vertices:
            raise UnknownVertex(f"unknown vertex {vertex!r}")
        for comp in self.connected_components():
            if vertex in comp:
                return comp
        raise AssertionError("unreachable")

    def export_dot(self) -> str:
        """Deterministic DOT text; one statement per vertex and per edge.

        The arrow is drawn source -> range; the color index is carried in
        the `kcolor` attribute.
        """
        lines = ["digraph skeleton {"]
        for v in sorted(self.vertices):
            lines.append(f'  "{v}";')
        for e in self.edges:  # already (color, name)-sorted
            lines.append(f'  "{e.source}" -> "{e.range}" [label="{e.name}", kcolor={e.color}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EdgePath:
    """A word of composable edges; empty words are anchored at a vertex.

    The anchor field always equals the source vertex, so two equal words
    compare equal regardless of how they were built.
    """

    rank: int
    anchor: str
    edges: tuple

    def __post_init__(self):
        for a, b in zip(self.edges, self.edges[1:]):
            if a.source != b.range:
                raise NotComposable(f"edges {a.name!r} and {b.name!r} do not chain: s({a.name})={a.source!r}, r({b.name})={b.range!r}")
        if self.edges:
            object.__setattr__(self, "anchor", self.edges[-1].source)

    @property
    def source(self) -> str:
        return self.edges[-1].source if self.edges else self.anchor

    @property
    def range(self) -> str:
        return self.edges[0].range if self.edges else self.anchor

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def degree(self) -> Degree:
        counts = [0] * self.rank
        for e in self.edges:
            counts[e.color - 1] += 1
        return tuple(counts)

    def compose(self, other: "EdgePath") -> "EdgePath":
        """Juxtaposition self∘other; requires s(self) = r(other)."""
        if self.source != other.range:
            raise NotComposable(f"s(left)={self.source!r} but r(right)={other.range!r}")
        return EdgePath(self.rank, other.anchor, self.edges + other.edges)

    def names(self) -> tuple:
        return tuple(e.name for e in self.edges)


def compose_path(p: EdgePath, q: EdgePath) -> EdgePath:
    return p.compose(q)


def path_degree(p: EdgePath) -> Degree:
    return p.degree()

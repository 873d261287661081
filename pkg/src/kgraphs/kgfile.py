"""The k-graph text format and the shared word syntax.

Line-oriented; `#` starts a comment; whitespace within a line is free.
Directives, in declaration order (rank first, names before use):

    rank <k>
    vertex <name>
    edge <name> : <range> <- <source> color <i>
    square <e> <f> = <g> <h>

Edges print as `range <- source` so that the arrow matches composition
order: in the word `e f`, s(e) = r(f).  A square line declares that the
2-edge words e f and g h are factorizations of the same element; both
orientations of the relation are materialized on parsing.

Words (CLI --word/--w1/--w2) are whitespace-separated edge names in
composition order, each optionally suffixed `^-1`.
"""

from __future__ import annotations

import json
import re

from .errors import KGraphError, ParseError
from .groupoid import GWord, SignedEdge
from .kgraph import KGraph, Square, canonical_relations, involution_closure, validate
from .skeleton import Edge, Skeleton

_TOKEN = re.compile(r"<-|[:=]|\w+|\S")
_NAME = re.compile(r"\w+\Z")


def _tokenize(line):
    return [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]


class _Cursor:
    def __init__(self, tokens, lineno):
        self.tokens = tokens
        self.lineno = lineno
        self.pos = 0

    def take(self, expect=None, what="token"):
        if self.pos >= len(self.tokens):
            raise ParseError(f"missing {what}", self.lineno, self.tokens[-1][1] if self.tokens else 1)
        tok, col = self.tokens[self.pos]
        self.pos += 1
        if expect is not None and tok != expect:
            raise ParseError(f"expected {expect!r}, got {tok!r}", self.lineno, col)
        return tok, col

    def name(self, what="name"):
        tok, col = self.take(what=what)
        if not _NAME.match(tok):
            raise ParseError(f"bad {what} {tok!r}", self.lineno, col)
        return tok, col

    def done(self):
        if self.pos < len(self.tokens):
            tok, col = self.tokens[self.pos]
            raise ParseError(f"unexpected trailing {tok!r}", self.lineno, col)


def parse(text: str):
    """Parse the text format into (Skeleton, declared squares)."""
    rank = None
    sk = None
    squares = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = _tokenize(line)
        if not tokens:
            continue
        cur = _Cursor(tokens, lineno)
        head, hcol = cur.take(what="directive")
        if head == "rank":
            if rank is not None:
                raise ParseError("rank declared twice", lineno, hcol)
            tok, col = cur.take(what="rank value")
            if not tok.isdigit() or int(tok) < 1:
                raise ParseError(f"rank must be a positive integer, got {tok!r}", lineno, col)
            rank = int(tok)
            sk = Skeleton.empty(rank)
            cur.done()
            continue
        if sk is None:
            raise ParseError("rank must be declared first", lineno, hcol)
        if head == "vertex":
            name, col = cur.name("vertex name")
            cur.done()
            try:
                sk = sk.add_vertex(name)
            except KGraphError as exc:
                raise ParseError(str(exc), lineno, col) from exc
        elif head == "edge":
            name, ncol = cur.name("edge name")
            cur.take(":", "':'")
            rng, _ = cur.name("range vertex")
            cur.take("<-", "'<-'")
            src, _ = cur.name("source vertex")
            cur.take("color", "'color'")
            ctok, ccol = cur.take(what="color value")
            if not ctok.isdigit():
                raise ParseError(f"color must be an integer, got {ctok!r}", lineno, ccol)
            cur.done()
            try:
                sk = sk.add_edge(Edge(name, src, rng, int(ctok)))
            except KGraphError as exc:
                raise ParseError(str(exc), lineno, ncol) from exc
        elif head == "square":
            names = []
            for what in ("first left edge", "second left edge"):
                names.append(cur.name(what))
            cur.take("=", "'='")
            for what in ("first right edge", "second right edge"):
                names.append(cur.name(what))
            cur.done()
            edges = []
            for n, col in names:
                e = sk.edge_map.get(n)
                if e is None:
                    raise ParseError(f"unknown edge {n!r}", lineno, col)
                edges.append(e)
            squares.append(Square((edges[0], edges[1]), (edges[2], edges[3])))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, hcol)
    if sk is None:
        raise ParseError("empty input: no rank declaration", 1, 1)
    return sk, tuple(squares)


def parse_kgraph(text: str) -> KGraph:
    """Parse and close the relations; `validated` reflects the validation outcome."""
    sk, declared = parse(text)
    squares = involution_closure(declared)
    report = validate(sk, squares)
    return KGraph(sk, squares, report.ok)


def format_kgraph(kg: KGraph) -> str:
    """Canonical text: sorted vertices/edges, one line per relation."""
    sk = kg.skeleton
    lines = [f"rank {sk.rank}"]
    lines += [f"vertex {v}" for v in sorted(sk.vertices)]
    lines += [f"edge {e.name} : {e.range} <- {e.source} color {e.color}" for e in sk.edges]
    for sq in canonical_relations(kg.squares):
        e, f = sq.lhs
        g, h = sq.rhs
        lines.append(f"square {e.name} {f.name} = {g.name} {h.name}")
    return "\n".join(lines) + "\n"


# -- word syntax --


def parse_word(sk: Skeleton, text: str, anchor: str | None = None) -> GWord:
    letters = []
    for tok in text.split():
        name, exp = (tok[:-3], -1) if tok.endswith("^-1") else (tok, 1)
        edge = sk.edge_map.get(name)
        if edge is None:
            raise ParseError(f"unknown edge {name!r} in word {text!r}")
        letters.append(SignedEdge(edge, exp))
    if not letters:
        if anchor is None:
            raise ParseError("empty word needs an anchor vertex")
        if anchor not in sk.vertices:
            raise ParseError(f"unknown vertex {anchor!r}")
        return GWord((), anchor)
    try:
        return GWord(tuple(letters), letters[-1].source)
    except KGraphError as exc:
        raise ParseError(f"word {text!r}: {exc}") from exc


def format_word(w: GWord) -> str:
    return " ".join(w.tokens())


# -- 2-complex export --


def export_complex(kg: KGraph) -> dict:
    """The 2-complex with one 2-cell per square, boundary e f h^-1 g^-1."""
    kg.require_validated("export_complex")
    sk = kg.skeleton
    cells = []
    for sq in canonical_relations(kg.squares):
        (e, f), (g, h) = sq.lhs, sq.rhs
        cells.append(
            {
                "name": f"sq_{e.name}_{f.name}",
                "boundary": [e.name, f.name, f"{h.name}^-1", f"{g.name}^-1"],
            }
        )
    return {
        "rank": sk.rank,
        "vertices": sorted(sk.vertices),
        "edges": [
            {"name": e.name, "source": e.source, "range": e.range, "color": e.color}
            for e in sk.edges
        ],
        "two_cells": cells,
    }


def export_complex_json(kg: KGraph) -> str:
    return json.dumps(export_complex(kg), indent=2) + "\n"

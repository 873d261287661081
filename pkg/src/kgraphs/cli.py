"""Command-line interface.

Exit codes: subcommand-specific verdicts use 0/1/2 (see each handler);
parse, IO and other input errors exit 3 with a diagnostic on stderr.
Every subcommand accepts --json for a stable machine-readable report.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import equality, kgfile, pi1
from .equality import (
    COUNTEREXAMPLE,
    HOLDS_WITHIN_BOUND,
    INCONCLUSIVE,
    INJECTIVE_WITHIN_BOUND,
    NON_INJECTIVE,
    Distinct,
    Equal,
    SearchBudget,
    Unknown,
    equal_in_g,
    injectivity_report,
    lambda_bar_check,
)
from .errors import KGraphError, ParseError, RequiresValidation
from .kgraph import component_1graph, hom, involution_closure, normalize, validate
from .skeleton import EdgePath


def _parse_degree(text: str, rank: int):
    try:
        vec = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"bad degree {text!r}; expected comma-separated integers")
    if len(vec) != rank or any(c < 0 for c in vec):
        raise ParseError(f"degree {text!r} must have {rank} nonnegative entries")
    return vec


def _load(path: str):
    return kgfile.parse_kgraph(Path(path).read_text())


def _require_valid(kg):
    if not kg.validated:
        report = validate(kg.skeleton, kg.squares)
        findings = "; ".join(_finding_text(f) for f in report.failures)
        raise RequiresValidation(f"input is not a valid k-graph: {findings}")
    return kg


def _finding_text(f) -> str:
    kind = type(f).__name__
    if kind == "MissingSquare":
        return f"missing square: {f.pair[0]} {f.pair[1]}"
    if kind == "DuplicateSquare":
        return f"duplicate square: {f.pair[0]} {f.pair[1]}"
    if kind == "BrokenInvolution":
        s = f.square
        return (
            f"broken involution: {s.lhs[0].name} {s.lhs[1].name} = {s.rhs[0].name} {s.rhs[1].name}"
        )
    if kind == "CubeInconsistency":
        return (
            f"cube inconsistency: {' '.join(f.triple)} -> {' '.join(f.first)} vs {' '.join(f.second)}"
        )
    return kind


def _finding_json(f) -> dict:
    kind = type(f).__name__
    if kind in ("MissingSquare", "DuplicateSquare"):
        return {"kind": kind, "pair": list(f.pair)}
    if kind == "BrokenInvolution":
        return {"kind": kind, "square": list(f.square.words())}
    return {"kind": kind, "triple": list(f.triple), "first": list(f.first), "second": list(f.second)}


def _nf_json(nf) -> dict:
    return {
        "word": list(nf.word_names()),
        "source": nf.source,
        "range": nf.range,
        "degree": list(nf.degree),
    }


def _nf_text(nf) -> str:
    return " ".join(nf.word_names()) if nf.word_names() else f"(identity at {nf.source})"


def _emit(obj):
    print(json.dumps(obj, indent=2))


# -- handlers --


def _cmd_validate(args) -> int:
    sk, declared = kgfile.parse(Path(args.file).read_text())
    report = validate(sk, involution_closure(declared))
    if args.json:
        _emit({"ok": report.ok, "failures": [_finding_json(f) for f in report.failures]})
    else:
        print("ok" if report.ok else "invalid")
        for f in report.failures:
            print(_finding_text(f))
    return 0 if report.ok else 1


def _cmd_hom(args) -> int:
    kg = _require_valid(_load(args.file))
    n = _parse_degree(args.degree, kg.rank)
    forms = hom(kg, getattr(args, "from"), args.to, n)
    if args.json:
        _emit({"elements": [_nf_json(nf) for nf in forms]})
    else:
        for nf in forms:
            print(_nf_text(nf))
    return 0


def _cmd_normalize(args) -> int:
    kg = _require_valid(_load(args.file))
    word = kgfile.parse_word(kg.skeleton, args.word, anchor=args.at)
    if any(x.exp != 1 for x in word.letters):
        raise ParseError("normalize expects a positive word (no ^-1 tokens)")
    path = EdgePath(kg.rank, word.anchor, tuple(x.edge for x in word.letters))
    nf = normalize(kg, path)
    if args.json:
        _emit(_nf_json(nf))
    else:
        print(_nf_text(nf))
        print(f"degree: {','.join(map(str, nf.degree))}")
        print(f"range: {nf.range}")
        print(f"source: {nf.source}")
    return 0


def _infer_anchor(sk, other_word):
    if other_word is not None:
        return other_word.range
    if len(sk.vertices) == 1:
        return next(iter(sk.vertices))
    raise ParseError("an empty word needs --at <vertex>")


def _cmd_equal(args) -> int:
    kg = _load(args.file)
    sk = kg.skeleton
    budget = SearchBudget(max_nodes=args.budget) if args.budget else None
    w1 = kgfile.parse_word(sk, args.w1) if args.w1.split() else None
    w2 = kgfile.parse_word(sk, args.w2) if args.w2.split() else None
    if w1 is None:
        w1 = kgfile.parse_word(sk, args.w1, anchor=args.at or _infer_anchor(sk, w2))
    if w2 is None:
        w2 = kgfile.parse_word(sk, args.w2, anchor=args.at or _infer_anchor(sk, w1))
    verdict = equal_in_g(kg, w1, w2, budget)
    if args.json:
        out = {"verdict": type(verdict).__name__.lower()}
        if isinstance(verdict, Equal):
            out["derivation"] = [w.display() for w in verdict.derivation]
        elif isinstance(verdict, Distinct):
            out.update({"invariant": verdict.invariant, "left": str(verdict.left), "right": str(verdict.right)})
        else:
            out.update({"explored": verdict.explored, "max_length": verdict.max_length})
        _emit(out)
    elif isinstance(verdict, Equal):
        print("equal")
        if args.derivation:
            print(" = ".join(w.display() for w in verdict.derivation))
    elif isinstance(verdict, Distinct):
        print(f"distinct by {verdict.invariant}: {verdict.left} vs {verdict.right}")
    else:
        print(f"unknown (explored {verdict.explored} words, length cap {verdict.max_length})")
    return 0 if isinstance(verdict, Equal) else 1 if isinstance(verdict, Distinct) else 2


def _cmd_pi1(args) -> int:
    kg = _load(args.file)
    pres = pi1.group_presentation(kg, args.base)
    if args.tietze:
        pres = pi1.tietze_simplify(pres)
    if args.abelianization:
        inv = pi1.abelianization(pres)
        if args.json:
            _emit({"free_rank": inv.free_rank, "torsion": list(inv.torsion), "group": inv.describe()})
        else:
            print(inv.describe())
        return 0
    if args.json:
        _emit(
            {
                "generators": list(pres.generators),
                "relators": [[[g, s] for g, s in r] for r in pres.relators],
            },
        )
    else:
        print("generators:", " ".join(pres.generators) if pres.generators else "(none)")
        for r in pres.relators:
            print("relator:", " ".join(g if s == 1 else f"{g}^-1" for g, s in r) or "(trivial)")
    return 0


def _cmd_injectivity(args) -> int:
    kg = _require_valid(_load(args.file))
    bound = _parse_degree(args.max_degree, kg.rank)
    budget = SearchBudget(max_nodes=args.budget) if args.budget else None
    report = injectivity_report(kg, bound, budget)
    if args.json:
        out = {
            "summary": report.summary,
            "bound": list(report.bound),
            "witness": [_nf_json(n) for n in report.witness] if report.witness else None,
            "derivation": [w.display() for w in report.derivation] if report.derivation else None,
            "pairs": [
                {
                    "left": _nf_text(p.left),
                    "right": _nf_text(p.right),
                    "verdict": type(p.verdict).__name__.lower(),
                }
                for p in report.pairs
            ],
            "note": report.note,
        }
        _emit(out)
    else:
        print(report.summary)
        if report.note:
            print(report.note)
        if report.witness:
            left, right = report.witness
            print(f"witness: {_nf_text(left)}  vs  {_nf_text(right)}")
            print(" = ".join(w.display() for w in report.derivation))
    if report.summary == NON_INJECTIVE:
        return 1
    return 0 if report.summary == INJECTIVE_WITHIN_BOUND else 2


def _cmd_lambda_bar(args) -> int:
    kg = _require_valid(_load(args.file))
    bound = _parse_degree(args.max_degree, kg.rank)
    budget = SearchBudget(max_nodes=args.budget) if args.budget else None
    report = lambda_bar_check(kg, bound, budget)
    collapsed = [cls for cls in report.classes if len(cls) > 1]
    if args.json:
        _emit(
            {
                "summary": report.summary,
                "bound": list(report.bound),
                "classes": [[_nf_text(nf) for nf in cls] for cls in report.classes],
                "unknown_pairs": len(report.unknown_pairs),
                "violation": {k: _nf_text(v) if hasattr(v, "word_names") else list(v) for k, v in report.violation.items()}
                if report.violation
                else None,
            },
        )
    else:
        print(report.summary)
        for cls in collapsed:
            print("class:", " | ".join(_nf_text(nf) for nf in cls))
        if report.unknown_pairs:
            print(f"unknown pairs: {len(report.unknown_pairs)}")
        if report.violation:
            v = report.violation
            print(
                "violation: "
                f"alpha={_nf_text(v['alpha'])} beta={_nf_text(v['beta'])} at m={','.join(map(str, v['m']))}"
            )
    if report.summary == COUNTEREXAMPLE:
        return 1
    return 0 if report.summary == HOLDS_WITHIN_BOUND else 2


def _cmd_components(args) -> int:
    kg = _load(args.file)
    blocks = []
    for color in range(1, kg.rank + 1):
        sub = component_1graph(kg, color)
        blocks.append((color, sub))
    if args.json:
        _emit({"components": [{"color": c, "kgraph": kgfile.format_kgraph(sub)} for c, sub in blocks]})
    else:
        for c, sub in blocks:
            print(f"# component of color {c}")
            print(kgfile.format_kgraph(sub), end="")
    return 0


def _cmd_export(args) -> int:
    kg = _load(args.file)
    if args.format == "dot":
        print(kg.skeleton.export_dot(), end="")
    else:
        _require_valid(kg)
        print(kgfile.export_complex_json(kg), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kgraphs", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("file", help="k-graph file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(handler=handler)
        return p

    add("validate", _cmd_validate, help="check the factorization axioms; exit 0 ok / 1 invalid")

    p = add("hom", _cmd_hom, help="list elements with given range, source and degree")
    p.add_argument("--from", required=True, help="range vertex")
    p.add_argument("--to", required=True, help="source vertex")
    p.add_argument("--degree", required=True, help="comma-separated degree, e.g. 1,1")

    p = add("normalize", _cmd_normalize, help="normal form of a positive word")
    p.add_argument("--word", required=True)
    p.add_argument("--at", help="anchor vertex for the empty word")

    p = add("equal", _cmd_equal, help="word equality; exit 0 equal / 1 distinct / 2 unknown")
    p.add_argument("--w1", required=True)
    p.add_argument("--w2", required=True)
    p.add_argument("--budget", type=int, help="search node budget")
    p.add_argument("--derivation", action="store_true", help="print the move chain")
    p.add_argument("--at", help="anchor vertex for empty words")

    p = add("pi1", _cmd_pi1, help="fundamental group at a base vertex")
    p.add_argument("--base", required=True)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--presentation", action="store_true", help="print the presentation (default)")
    mode.add_argument("--tietze", action="store_true", help="simplify first")
    mode.add_argument("--abelianization", action="store_true", help="abelian invariants only")

    p = add(
        "injectivity",
        _cmd_injectivity,
        help="probe injectivity into the groupoid; exit 0/1/2 = injective/non-injective/inconclusive",
    )
    p.add_argument("--max-degree", required=True)
    p.add_argument("--budget", type=int)

    p = add(
        "lambda-bar",
        _cmd_lambda_bar,
        help="probe unique factorization of the groupoid image; exit 0/1/2 = holds/counterexample/inconclusive",
    )
    p.add_argument("--max-degree", required=True)
    p.add_argument("--budget", type=int)

    add("components", _cmd_components, help="emit each color's 1-graph")

    p = add("export", _cmd_export, help="export the skeleton or the 2-complex")
    p.add_argument("--format", choices=("dot", "complex"), required=True)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except KGraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

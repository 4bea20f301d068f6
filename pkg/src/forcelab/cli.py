"""Command-line front end: ``forcelab <subcommand> ...``.

Exit codes: 0 success, 1 domain error (or a failed self-check), 2 usage error.
``--format records`` prints one ``key<TAB>value`` line per result.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import oracle
from .algebra import make_algebra, ultrafilter_from_label, ultrafilters
from .errors import LabError
from .forcing import (LazyCohenPoset, NotDense, cohen_poset_finite, distinct_rows, forces,
                      grid_table, hit_dense_sets, parse_family, total_on, union_of_filter)
from .lang import constants, desugar, free_vars, parse
from .names import load_names, universe_up_to_rank
from .order import complete, load_poset
from .quotient import build_quotient, mostowski_collapse, truth
from .valuation import RELATIVIZATION_NOTE, ValuationContext, format_trace, val_formula


class Report:
    def __init__(self, fmt="text", out=None):
        self.fmt = fmt
        self.out = out or sys.stdout

    def __call__(self, key, value=""):
        if self.fmt == "records":
            print(f"{key}\t{value}", file=self.out)
        elif value == "":
            print(key, file=self.out)
        else:
            print(f"{key}: {value}", file=self.out)


def _read(path):
    try:
        return Path(path).read_text()
    except OSError as e:
        raise LabError(f"cannot read {path}: {e.strerror}") from None


def _algebra(args):
    """Returns (algebra, completion-or-None)."""
    if getattr(args, "complete_poset", None):
        C = complete(load_poset(_read(args.complete_poset)))
        return C.target, C
    return make_algebra(args.atoms), None


def _universe(args, algebra):
    if args.names:
        return load_names(_read(args.names), algebra), f"file {args.names}"
    return universe_up_to_rank(algebra, args.rank), f"all names of rank <= {args.rank}"


def _formulas(args):
    texts = list(args.formula or [])
    if args.formula_file:
        texts += [ln.strip() for ln in _read(args.formula_file).splitlines()
                  if ln.strip() and not ln.lstrip().startswith("#")]
    if not texts:
        raise LabError("no formula given (use --formula or --formula-file)")
    return texts


def _sentence(text, universe):
    f = parse(text)
    missing = sorted(c for c in constants(f) if c not in universe)
    if missing:
        raise LabError(f"formula mentions names not in the universe: {', '.join(missing)}")
    return f


# --- subcommands ------------------------------------------------------------------

def cmd_parse(args, rep):
    f = parse(args.text, constants=args.constant or None, open=args.open)
    rep("formula", str(f))
    rep("ast", repr(f))
    rep("desugared", str(desugar(f)))
    rep("free_vars", ",".join(sorted(free_vars(f))) or "-")


def cmd_eval(args, rep):
    B, C = _algebra(args)
    u, source = _universe(args, B)
    rep("note", RELATIVIZATION_NOTE)
    rep("algebra", f"{B.atom_count} atoms ({','.join(B.atom_labels)})")
    rep("universe", f"{source}, {len(u)} names")
    failed = False
    for text in _formulas(args):
        f = _sentence(text, u)
        ctx = ValuationContext(u, trace=args.trace)
        value = val_formula(f, ctx)
        rep("formula", str(f))
        rep("environment", "-")
        rep("value", str(value))
        if args.trace:
            for line in format_trace(ctx):
                rep("trace", line)
        if args.oracle_check:
            entries = {n.id: {c: v.mask for c, v in n.entries.items()} for n in u}
            want = oracle.projected_value(entries, B.atom_count, f)
            ok = want == value.mask
            failed |= not ok
            rep("oracle", "agree" if ok else f"DISAGREE (oracle {B.from_mask(want)})")
    return 1 if failed else 0


def cmd_complete(args, rep):
    P = load_poset(_read(args.poset))
    C = complete(P)
    rep("poset", f"{len(P)} conditions")
    rep("atoms", C.target.atom_count)
    for i, label in enumerate(C.target.atom_labels):
        rep(f"atom a{i}", f"{label} region {{{','.join(sorted(map(str, C.regions[i])))}}}")
    for p in P.elements:
        rep(f"embed {p}", str(C.embed[p]))
    if args.oracle_check:
        ros = oracle.enumerate_regular_opens(P)
        ok = len(ros) == C.target.size and \
            {C.to_regular_open(b) for b in C.target.elements()} == set(ros)
        rep("oracle", f"{len(ros)} regular opens, " + ("agree" if ok else "DISAGREE"))
        return 0 if ok else 1
    return 0


def cmd_ultra(args, rep):
    B, _ = _algebra(args)
    for U in ultrafilters(B):
        rep(f"ultrafilter a{U.generator_atom}",
            " ".join(str(x) for x in U.members()))
    if args.oracle_check:
        brute = set(oracle.enumerate_ultrafilters_bruteforce(B.atom_count))
        mine = {frozenset(x.atoms for x in U.members()) for U in ultrafilters(B)}
        ok = brute == mine
        rep("oracle", f"{len(brute)} found by brute force, " + ("agree" if ok else "DISAGREE"))
        return 0 if ok else 1
    return 0


def cmd_quotient(args, rep):
    B, _ = _algebra(args)
    u, source = _universe(args, B)
    U = ultrafilter_from_label(B, args.uf)
    ctx = ValuationContext(u)
    q = build_quotient(u, U, ctx)
    coll = mostowski_collapse(q)
    rep("note", RELATIVIZATION_NOTE)
    rep("universe", f"{source}, {len(u)} names")
    rep("ultrafilter", f"{U} (generated by atom a{U.generator_atom})")
    rep("classes", len(q))
    for i, cls in enumerate(q.classes):
        rep(f"class {cls[0]}", f"members [{' '.join(cls)}] collapse {coll[i]}")
    for d, c in sorted(q.membership):
        rep("edge", f"{q.representative(d)} in {q.representative(c)}")
    failed = False
    for text in (args.formula or []):
        f = _sentence(text, u)
        t = truth(q, f)
        v = val_formula(f, ctx)
        rep("truth", f"{f} : {'TRUE' if t else 'FALSE'} (value {v})")
        if t != (v in U):
            failed = True
            rep("truth-lemma", "VIOLATED")
    return 1 if failed else 0


def cmd_force(args, rep):
    P = load_poset(_read(args.poset))
    C = complete(P)
    if args.p not in P:
        raise LabError(f"{args.p!r} is not a condition of the poset")
    u = load_names(_read(args.names), C.target)
    ctx = ValuationContext(u)
    rep("note", RELATIVIZATION_NOTE)
    rep("condition", f"{args.p} embeds as {C.embed[args.p]}")
    for text in _formulas(args):
        f = _sentence(text, u)
        rep("formula", f"{f} has value {val_formula(f, ctx)}")
        rep("result", "FORCES" if forces(args.p, f, C, ctx) else "DOES NOT FORCE")
    return 0


def cmd_cohen(args, rep):
    if args.lazy:
        P = LazyCohenPoset(args.rows)
    else:
        P = cohen_poset_finite(args.rows, args.cols)
    spec = args.hit or f"points:{args.cols}+distinct"
    family = parse_family(spec, P)
    rep("poset", f"{args.rows} rows, " + ("unbounded columns" if args.lazy else f"{args.cols} columns"))
    rep("family", spec)
    bad = [D for D in family if isinstance(D, NotDense)]
    for D in bad:
        rep("dense", str(D))
    if bad:
        rep("result", "family contains sets that are not dense in this truncation")
        return 1
    F = hit_dense_sets(P, family, seed=args.seed)
    for k, p in enumerate(F.chain):
        rep(f"p{k}", str(p))
    G = union_of_filter(F)
    rep("F", str(G))
    for line in grid_table(G, args.rows, args.cols):
        rep("row", line)
    rep("total", f"{'yes' if total_on(G, args.rows, args.cols) else 'no'} on the "
                 f"{args.rows}x{args.cols} grid")
    for (a, b), col in distinct_rows(G, args.rows).items():
        rep("distinct", f"{a} {b} " + (f"differ at column {col}" if col is not None else "NOT distinguished"))
    return 0


def cmd_selfcheck(args, rep):
    from .checks import run_all
    results = run_all(small=not args.full)
    for r in results:
        rep("check", r.line())
    return 0 if all(r.passed for r in results) else 1


# --- argument parsing -------------------------------------------------------------

def _add_algebra(p, allow_completion=True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--atoms", type=int, default=2, help="number of atoms of B (default 2)")
    if allow_completion:
        g.add_argument("--complete-poset", metavar="FILE",
                       help="use the completion of this poset as B")


def _add_universe(p):
    p.add_argument("--names", metavar="FILE", help="names file")
    p.add_argument("--rank", type=int, default=1,
                   help="without --names: use every name of rank <= RANK (default 1)")


def _add_formula(p):
    p.add_argument("--formula", action="append", metavar="STR")
    p.add_argument("--formula-file", metavar="FILE", help="one sentence per line")


def build_parser():
    parser = argparse.ArgumentParser(prog="forcelab",
                                     description="Boolean-valued models and forcing at desk scale")
    parser.add_argument("--format", choices=("text", "records"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and pretty-print a formula")
    p.add_argument("text")
    p.add_argument("--open", action="store_true", help="allow free variables")
    p.add_argument("--constant", action="append", help="declare a constant (repeatable)")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("eval", help="Boolean value of sentences over a name universe")
    _add_algebra(p)
    _add_universe(p)
    _add_formula(p)
    p.add_argument("--trace", action="store_true")
    p.add_argument("--oracle-check", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("complete", help="regular-open completion of a poset")
    p.add_argument("--poset", required=True, metavar="FILE")
    p.add_argument("--oracle-check", action="store_true")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("ultra", help="list the ultrafilters of B")
    _add_algebra(p)
    p.add_argument("--oracle-check", action="store_true")
    p.set_defaults(func=cmd_ultra)

    p = sub.add_parser("quotient", help="quotient of a universe by an ultrafilter")
    _add_algebra(p)
    _add_universe(p)
    p.add_argument("--uf", default="a0", help="generating atom, e.g. a1 (default a0)")
    p.add_argument("--formula", action="append", metavar="STR", help="truth query (repeatable)")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("force", help="decide p ||- phi in the completion of a poset")
    p.add_argument("--poset", required=True, metavar="FILE")
    p.add_argument("--names", required=True, metavar="FILE",
                   help="names over the completion (atoms a0.. in poset order of minimal conditions)")
    p.add_argument("--p", required=True, metavar="ID")
    _add_formula(p)
    p.set_defaults(func=cmd_force)

    p = sub.add_parser("cohen", help="build a generic filter on a Cohen poset")
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=4)
    p.add_argument("--lazy", action="store_true", help="unbounded columns")
    p.add_argument("--hit", metavar="SPEC",
                   help="dense family, e.g. 'points:4+distinct' (default points:COLS+distinct)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_cohen)

    p = sub.add_parser("selfcheck", help="run the oracle-agreement suites")
    p.add_argument("--full", action="store_true", help="full acceptance sizes")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def run(argv=None, out=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    rep = Report(args.format, out)
    try:
        return args.func(args, rep) or 0
    except LabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

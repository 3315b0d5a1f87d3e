"""Command-line front end.

Exit codes: 0 success or PASS, 1 negative result (irreducible, invalid,
no pair found), 2 hypothesis failure, 3 usage or I/O error, 4
falsification report.  Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import __version__
from .core import (
    BUDGET_ENV,
    DEFAULT_CELL_BUDGET,
    QTable,
    RetractSpec,
    apply_isotopy,
    check_budget,
    is_prime,
    normalize,
    retract,
    validate,
)
from .decompose import (
    ALL,
    PRINCIPAL,
    Leaf,
    Node,
    decompose_fully,
    is_complete,
    spectrum,
    tree_to_json,
    verify_theorem,
)
from .errors import (
    BudgetError,
    FalsificationError,
    HypothesisError,
    PreconditionError,
    TableFormatError,
)
from .textio import format_isotopy, format_table, parse_isotopy, parse_table, render_tree

OK, NEGATIVE, HYPOTHESIS, USAGE, FALSIFIED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _jsonable(obj):
    if isinstance(obj, (Leaf, Node)):
        return tree_to_json(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return repr(obj)


class _Out:
    def __init__(self, args):
        self.json = args.json
        self.stdout = sys.stdout

    def emit(self, obj: dict, text: str) -> None:
        if self.json:
            self.stdout.write(json.dumps(_jsonable(obj), sort_keys=True) + "\n")
        else:
            self.stdout.write(text if text.endswith("\n") else text + "\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(path: str, check: bool = True) -> QTable:
    t = parse_table(_read(path))
    check_budget(t.n, t.q)
    if check:
        v = validate(t)
        if not v:
            raise PreconditionError(f"{path}: not a Latin hypercube: {v.message}")
    return t


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x, 10) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated decimal integers, got {text!r}") from None


def _tree_text(tree) -> str:
    expr, found = render_tree(tree)
    parts = [expr]
    for k, leaf in enumerate(found, start=1):
        parts.append(f"L{k}:" + (" (irreducible)" if leaf.irreducible else ""))
        parts.append(format_table(leaf.table).rstrip("\n"))
    return "\n".join(parts)


# ---------------------------------------------------------------------------
# verbs


def cmd_validate(args, out: _Out) -> int:
    t = _load(args.file, check=False)
    v = validate(t)
    obj = {"valid": v.ok, "n": t.n, "q": t.q, "coordinate": v.coordinate,
           "line": None if v.line is None else list(v.line), "message": v.message}
    out.emit(obj, "valid" if v.ok else f"invalid: {v.message}")
    return OK if v.ok else NEGATIVE


def cmd_normalize(args, out: _Out) -> int:
    g, iso = normalize(_load(args.file))
    out.emit({"table": g, "isotopy": iso}, format_table(g) + "# isotopy\n" + format_isotopy(iso))
    return OK


def cmd_retract(args, out: _Out) -> int:
    t = _load(args.file)
    fix = {}
    for item in args.fix.split(","):
        if not item.strip():
            continue
        c, sep, v = item.partition("=")
        if not sep:
            raise UsageError(f"--fix: expected i=a, got {item!r}")
        c, v = _ints(c, "--fix")[0], _ints(v, "--fix")[0]
        if c in fix:
            raise UsageError(f"--fix: coordinate {c} fixed twice")
        fix[c] = v
    spec = RetractSpec(fix, args.solve_for)
    r = retract(t, spec)
    out.emit({"spec": spec, "table": r}, format_table(r))
    return OK


def cmd_isotopy(args, out: _Out) -> int:
    t = _load(args.file)
    iso = parse_isotopy(_read(args.perm_file))
    r = apply_isotopy(t, iso)
    out.emit({"table": r}, format_table(r))
    return OK


def cmd_decompose(args, out: _Out) -> int:
    t = _load(args.file)
    if args.method == "brute":
        tree = decompose_fully(t, args.threads)
        reducible = not (getattr(tree, "irreducible", False) or t.n <= 2)
        obj = {"method": "brute", "reducible": reducible, "complete": is_complete(tree), "tree": tree}
        out.emit(obj, ("reducible\n" + _tree_text(tree)) if reducible else "irreducible")
        return OK if reducible else NEGATIVE
    if args.method == "lemma1":
        from .structure import lemma1_decompose

        res = lemma1_decompose(t, seed=args.seed)
    else:
        from .prime import lemma2_decompose

        res = lemma2_decompose(t, seed=args.seed, workers=args.threads)
    obj = {"method": args.method, "reducible": res.tree is not None, **res.to_json()}
    if res.tree is None:
        out.emit(obj, f"hypothesis not satisfied: {res.to_json().get('message') or 'irreducible retract'}"
                      f"; witness {json.dumps(_jsonable(res.witness))}")
        return HYPOTHESIS
    out.emit(obj, "reducible\n" + _tree_text(res.tree))
    return OK


def cmd_spectrum(args, out: _Out) -> int:
    t = _load(args.file)
    rep = spectrum(t, args.retracts, workers=args.threads)
    census = ", ".join(f"{k}: {v['irreducible']}/{v['irreducible'] + v['reducible']} irreducible"
                       for k, v in sorted(rep.census.items(), reverse=True))
    w = "none" if rep.witness is None else json.dumps(rep.witness.to_json(), sort_keys=True)
    out.emit(rep, f"kappa {rep.kappa}\nwitness {w}\n{census}")
    return OK


def cmd_classify(args, out: _Out) -> int:
    from .structure import classify_quadruple, classify_triple

    t = _load(args.file)
    g, iso = normalize(t)
    if (args.triple is None) == (args.quad is None):
        raise UsageError("classify needs exactly one of --triple or --quad")
    if args.triple is not None:
        idx = _ints(args.triple, "--triple")
        if len(idx) != 3:
            raise UsageError("--triple takes three indices")
        tc = classify_triple(g, *idx)
        lines = []
        for form in tc.forms:
            o, (p, r) = form.outer_index, form.pair
            state = "bracket" if tc.bracket(o) else ("holds" if form.holds else "no")
            lines.append(f"{o}({p}{r}): {state}")
        out.emit({"normalization": iso, **tc.to_json()}, "\n".join(lines))
        return OK
    idx = _ints(args.quad, "--quad")
    if len(idx) != 4:
        raise UsageError("--quad takes four indices")
    qc = classify_quadruple(g, *idx)
    lines = [f"{a}({b}({c}{d}))" for a, b, (c, d) in qc.nested]
    lines += [f"({a}{b})({c}{d})" for (a, b), (c, d) in qc.paired]
    out.emit({"normalization": iso, **qc.to_json()}, "\n".join(lines))
    return OK


def cmd_inner_pair(args, out: _Out) -> int:
    from .structure import find_inner_pair

    g, iso = normalize(_load(args.file))
    start = None
    if args.start:
        start = tuple(_ints(args.start, "--start"))
        if len(start) != 2:
            raise UsageError("--start takes b,a1")
    ip = find_inner_pair(g, start=start)
    obj = {"normalization": iso, **ip.to_json()}
    out.emit(obj, f"inner pair {ip.pair[0]},{ip.pair[1]}\n" + format_table(ip.op))
    if ip.diagnostics:
        for d in ip.diagnostics:
            print(f"chain stalled from b={d.b}: {'; '.join(d.events)}", file=sys.stderr)
        return FALSIFIED
    return OK


def cmd_phi(args, out: _Out) -> int:
    from .structure import build_phi

    g, iso = normalize(_load(args.file))
    phi = build_phi(g)
    out.emit({"normalization": iso, "table": phi, "equals_input": phi == g},
             format_table(phi) + f"# phi {'equals' if phi == g else 'differs from'} the normalized input\n")
    return OK


def cmd_prop24(args, out: _Out) -> int:
    from .structure import prop24_check

    rep = prop24_check(_load(args.file1), _load(args.file2))
    out.emit(rep, rep.status + "".join(f"\n  {m}" for m in rep.failed))
    return {"PASS": OK, "HYPOTHESIS_FAILED": HYPOTHESIS}.get(rep.status, FALSIFIED)


def cmd_aut(args, out: _Out) -> int:
    from .prime import aut_reduce, find_invariance_pairs

    t = _load(args.file)
    coords = _ints(args.coords, "--coords")
    if len(coords) != 2:
        raise UsageError("--coords takes i,j")
    pairs = find_invariance_pairs(t, *coords)
    reduction = None
    if pairs and is_prime(t.q) and min(coords) >= 1:
        reduction = aut_reduce(t, pairs[0])
    bad = [p for p in pairs if not p.cycle_types_match]
    obj = {"coords": coords, "prime_order": is_prime(t.q), "pairs": pairs,
           "cycle_type_violations": bad, "reduction": reduction}
    lines = [f"{len(pairs)} non-identity pair(s)"]
    lines += [f"mu {' '.join(map(str, p.mu.image))} | nu {' '.join(map(str, p.nu.image))}" for p in pairs]
    if reduction is not None:
        lines.append("reduction\n" + _tree_text(reduction.tree))
    out.emit(obj, "\n".join(lines))
    if bad:
        print(f"{len(bad)} pair(s) with mismatched cycle types", file=sys.stderr)
        return FALSIFIED
    return OK if pairs else NEGATIVE


def cmd_verify_theorem(args, out: _Out) -> int:
    rep = verify_theorem(_load(args.file))
    text = f"{rep.status}\ngeneral {rep.general}\nprime {rep.prime}"
    for label, w in (("n-1", rep.witness_n1), ("n-2", rep.witness_n2)):
        if w is not None:
            text += f"\nwitness {label} {json.dumps(w.to_json(), sort_keys=True)}"
    text += "".join(f"\nnote: {m}" for m in rep.notes)
    out.emit(rep, text)
    return FALSIFIED if rep.status == "FAIL" else OK


def cmd_gen(args, out: _Out) -> int:
    from . import gen

    q, n = args.order, args.arity
    if q is None or n is None:
        raise UsageError("gen needs --order and --arity")
    check_budget(n, q)
    tables, trees = [], []
    if args.kind == "group":
        name = args.group or f"z{q}"
        if name == "s3":
            if q != 6:
                raise UsageError("--group s3 needs --order 6")
            grp = gen.s3_group()
        elif name == f"z{q}":
            grp = gen.cyclic_group(q)
        else:
            raise UsageError(f"--group must be z{q} or s3")
        tables = [gen.group_iterated(grp, n)]
    elif args.kind == "tree":
        t, spec = gen.random_tree_composition(q, n, args.seed)
        tables, trees = [t], [spec.tree]
    elif args.kind == "random":
        tables = [gen.random_latin_hypercube(q, n, args.seed)]
    else:
        tables = gen.enumerate_all(q, n, max_tables=args.limit) if args.limit else gen.enumerate_all(q, n)
    first = True
    for k, t in enumerate(tables):
        obj = {"table": t}
        if trees:
            obj["tree"] = trees[k]
        if out.json:
            out.emit(obj, "")
        else:
            out.stdout.write(("" if first else "\n") + format_table(t))
        first = False
    return OK


# ---------------------------------------------------------------------------


HELP_EPILOG = f"""\
environment:
  {BUDGET_ENV}  maximum q^n cells accepted by any command (default {DEFAULT_CELL_BUDGET})

exit codes:
  0 success/PASS, 1 negative result, 2 hypothesis failure,
  3 usage or I/O error, 4 falsification report
"""


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="cap on worker threads (output does not depend on it)")

    p = _Parser(prog="nquasi", description="Finite n-ary quasigroup toolkit.",
                epilog=HELP_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"nquasi {__version__}")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def verb(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, epilog=HELP_EPILOG,
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=fn)
        return sp

    sp = verb("validate", cmd_validate, "check the Latin property")
    sp.add_argument("file")
    sp = verb("normalize", cmd_normalize, "isotope to unary sections equal to the identity")
    sp.add_argument("file")
    sp = verb("retract", cmd_retract, "fix coordinates and optionally solve for another")
    sp.add_argument("file")
    sp.add_argument("--fix", required=True, help="comma list i=a of predicate coordinates (0 = output)")
    sp.add_argument("--solve-for", type=int, default=0)
    sp = verb("isotopy", cmd_isotopy, "apply tau_0^-1 g(tau_1 x_1, ...)")
    sp.add_argument("file")
    sp.add_argument("--perm-file", required=True, help="n+1 lines, permutation images, tau_0 first")
    sp = verb("decompose", cmd_decompose, "decompose into a superposition tree")
    sp.add_argument("file")
    sp.add_argument("--method", choices=("brute", "lemma1", "lemma2"), default="brute")
    sp.add_argument("--seed", type=int, default=0, help="seed for sampled hypothesis checks")
    sp = verb("spectrum", cmd_spectrum, "largest arity of an irreducible retract")
    sp.add_argument("file")
    sp.add_argument("--retracts", choices=(PRINCIPAL, ALL), default=ALL)
    sp = verb("classify", cmd_classify, "zero-retract shapes of a triple or quadruple (normalizes first)")
    sp.add_argument("file")
    sp.add_argument("--triple")
    sp.add_argument("--quad")
    sp = verb("inner-pair", cmd_inner_pair, "find an inner pair (normalizes first)")
    sp.add_argument("file")
    sp.add_argument("--start", help="b,a1 chain start")
    sp = verb("phi", cmd_phi, "completely reducible companion of the normalized table")
    sp.add_argument("file")
    sp = verb("prop24", cmd_prop24, "compare two reducible 4-ary tables on the zero hyperplanes")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp = verb("aut", cmd_aut, "invariance pairs at two predicate coordinates")
    sp.add_argument("file")
    sp.add_argument("--coords", required=True, help="i,j in 0..n")
    sp = verb("verify-theorem", cmd_verify_theorem, "irreducible (n-1)/(n-2)-retract check")
    sp.add_argument("file")
    sp = verb("gen", cmd_gen, "generate tables")
    sp.add_argument("kind", choices=("group", "tree", "random", "enumerate"))
    sp.add_argument("--order", type=int)
    sp.add_argument("--arity", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--group", help="zq (cyclic) or s3")
    sp.add_argument("--limit", type=int, default=0, help="enumeration cap (0 = default guard)")
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        return args.func(args, _Out(args))
    except UsageError as exc:
        print(f"nquasi: error: {exc}", file=sys.stderr)
        return USAGE
    except (TableFormatError, PreconditionError, BudgetError, OSError) as exc:
        print(f"nquasi: error: {exc}", file=sys.stderr)
        return USAGE
    except HypothesisError as exc:
        print(f"nquasi: hypothesis not satisfied: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(json.dumps(_jsonable(exc.witness), sort_keys=True), file=sys.stderr)
        return HYPOTHESIS
    except FalsificationError as exc:
        print(f"nquasi: FALSIFICATION: {exc}", file=sys.stderr)
        print(json.dumps(_jsonable(exc.report), sort_keys=True), file=sys.stderr)
        return FALSIFIED


def main() -> None:
    sys.exit(run())

"""Command-line interface: ``matfib <command> ...``.

Matrix references are built-in names (``P1``, ``P:2``) or ``path#name`` for
a matrix in a spec file.  Pair references are built-in pair names
(``p1-cpl``, ``lg:21``, ``in-pk:1,1,0,0``) or ``path#name``.  Commands that
take one matrix accept ``--with M2 --pair P`` to work in the fibred matrix.

Exit codes: 0 the property holds, 1 it is refuted, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional, Sequence

from . import catalog, specfile
from .clones import clone_upto, same_presentation
from .conservativity import check_strong_conservative, check_weak_conservative
from .core import LogicError, Matrix, entails, format_formula
from .fibring import FibredMatrix, FibringPair, count_admissible_pairs, fibre, iter_admissible_pairs
from .identification import identifies, theorem_sufficient

HOLDS, REFUTED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# references

_loaded: Dict[str, specfile.SpecFile] = {}


def _spec(path: str) -> specfile.SpecFile:
    if path not in _loaded:
        try:
            _loaded[path] = specfile.load(path)
        except OSError as e:
            raise UsageError(f"cannot read {path}: {e.strerror}") from None
        except specfile.SpecError as e:
            raise UsageError(f"{path}: {e}") from None
    return _loaded[path]


def resolve_matrix(ref: str) -> Matrix:
    if "#" in ref:
        path, _, name = ref.partition("#")
        return _spec(path).matrix(name)
    return catalog.builtin(ref)


def resolve_pair(ref: str, m1: Matrix, m2: Matrix) -> FibringPair:
    if "#" in ref:
        path, _, name = ref.partition("#")
        pair = _spec(path).pair(name, m1, m2)
    else:
        pair = catalog.builtin_pair(ref)
    pair.check(m1, m2)
    return pair


def resolve_target(args) -> Matrix:
    m = resolve_matrix(args.matrix)
    if args.with_ is None and args.pair is None:
        return m
    if args.with_ is None or args.pair is None:
        raise UsageError("--with and --pair go together")
    m2 = resolve_matrix(args.with_)
    return fibre(m, m2, resolve_pair(args.pair, m, m2))


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("bounds must be positive")
    return n


def _valuation(v) -> str:
    return ", ".join(f"{k}={x}" for k, x in v.items()) if v else "(empty)"


def _emit(args, plain: str, **fields) -> None:
    if args.format == "lines":
        for k, v in fields.items():
            print(f"{k}\t{v}")
    else:
        print(plain)


# ---------------------------------------------------------------------------
# table rendering


def _mark(m: Matrix, x) -> str:
    return f"*{x}" if m.is_designated(x) else f" {x}"


def render_tables(m: Matrix) -> str:
    """One block per connective; designated values carry a ``*``."""
    blocks = [f"matrix {m.name or '?'}: values {' '.join(_mark(m, x).strip() for x in m.carrier)}"]
    for c in m.signature:
        k = m.signature.arity(c)
        table = m.table(c)
        if k == 2:
            cells = [[c] + [_mark(m, b) for b in m.carrier]]
            for a in m.carrier:
                cells.append([_mark(m, a)] + [str(table[(a, b)]) for b in m.carrier])
            width = max(len(x) for row in cells for x in row)
            rows = [" ".join(x.rjust(width) for x in row) for row in cells]
            rows.insert(1, "-" * len(rows[0]))
        else:
            rows = [f"{c}/{k}"]
            for xs, out in table.items():
                rows.append(f"  {' '.join(_mark(m, x) for x in xs)} -> {out}".rstrip())
        blocks.append("\n".join(rows))
    return "\n\n".join(blocks)


def table_lines(m: Matrix) -> str:
    out = [f"values\t{' '.join(map(str, m.carrier))}", f"designated\t{' '.join(map(str, m.designated))}"]
    for c in m.signature:
        for xs, y in m.table(c).items():
            out.append(f"{c}\t{' '.join(map(str, xs))}\t{y}")
    return "\n".join(out)


# ---------------------------------------------------------------------------
# commands


def cmd_entails(args) -> int:
    m = resolve_target(args)
    *gamma, concl = [m.parse(t) for t in args.formulas]
    res = entails(m, gamma, concl)
    lhs = ", ".join(format_formula(g) for g in gamma)
    lhs = lhs + " " if lhs else ""
    if res.holds:
        _emit(args, f"holds: {lhs}|= {format_formula(concl)}", result="holds")
        return HOLDS
    _emit(
        args,
        f"refuted: {lhs}|/= {format_formula(concl)} at {_valuation(res.counterexample)}",
        result="refuted",
        counterexample=_valuation(res.counterexample),
    )
    return REFUTED


def cmd_taut(args) -> int:
    args.formulas = [args.formula]
    return cmd_entails(args)


def cmd_fibre(args) -> int:
    m1, m2 = resolve_matrix(args.m1), resolve_matrix(args.m2)
    fib = fibre(m1, m2, resolve_pair(args.pair, m1, m2))
    print(specfile.dumps_matrix(fib, args.name), end="")
    return HOLDS


def cmd_table(args) -> int:
    m = resolve_target(args)
    print(table_lines(m) if args.format == "lines" else render_tables(m))
    return HOLDS


def cmd_admissible_pairs(args) -> int:
    m1, m2 = resolve_matrix(args.m1), resolve_matrix(args.m2)
    n = count_admissible_pairs(m1, m2)
    if args.count:
        _emit(args, str(n), count=n)
        return HOLDS
    for i, pair in enumerate(iter_admissible_pairs(m1, m2)):
        if args.format == "lines":
            print(f"{i}\t{pair.describe()}")
        else:
            print(specfile.dumps_pair(pair, f"pair{i}"), end="")
    if args.format != "lines":
        print(f"# {n} admissible pairs")
    return HOLDS if n else REFUTED


def cmd_conserve(args) -> int:
    m1, m2 = resolve_matrix(args.m1), resolve_matrix(args.m2)
    fib = fibre(m1, m2, resolve_pair(args.pair, m1, m2))
    sides = (1, 2) if args.side == "both" else (int(args.side),)
    status = HOLDS
    for side in sides:
        comp = fib.component(side)
        if args.kind == "weak":
            rep = check_weak_conservative(comp, fib, side, depth=args.depth, nvars=args.vars)
        else:
            rep = check_strong_conservative(
                comp, fib, side, depth=args.depth, max_premises=args.premises, nvars=args.vars
            )
        verdict = "conservative" if rep.conservative else "not conservative"
        bounds = f"depth <= {rep.checked_depth}, {rep.nvars} variables"
        if args.kind == "strong":
            bounds += f", at most {args.premises} premises"
        detail = f"; {rep.counterexample.describe()}" if rep.counterexample else ""
        _emit(
            args,
            f"side {side}: {args.kind}ly {verdict} ({bounds}){detail}",
            side=side,
            result=verdict,
            counterexample=rep.counterexample.describe() if rep.counterexample else "-",
        )
        for note in rep.notes:
            print(f"note: {note}")
        if not rep.conservative:
            status = REFUTED
    return status


def cmd_identify(args) -> int:
    m = resolve_target(args)
    c1, c2 = _connective(m, args.c1), _connective(m, args.c2)
    rep = identifies(m, c1, c2, depth=args.depth, max_vars=args.vars, method=args.method)
    if rep.identified:
        _emit(args, f"{c1} and {c2} are identified (depth <= {args.depth}, {args.vars} variables)", result="identified")
        return HOLDS
    _emit(
        args,
        f"{c1} and {c2} are not identified: {rep.counterexample.describe()}",
        result="not identified",
        counterexample=rep.counterexample.describe(),
    )
    return REFUTED


def _connective(m: Matrix, name: Optional[str]) -> str:
    if name is None:
        raise UsageError("--c1 and --c2 are required")
    if isinstance(m, FibredMatrix) and name not in m.signature:
        name = m.aliases.get(name, name)
    if name not in m.signature:
        raise UsageError(f"unknown connective {name!r}")
    return name


def cmd_check_theorem(args) -> int:
    m1, m2 = resolve_matrix(args.m1), resolve_matrix(args.m2)
    pair = resolve_pair(args.pair, m1, m2)
    c1, c2 = _connective(m1, args.c1), _connective(m2, args.c2)
    ok = theorem_sufficient(m1, m2, pair, c1, c2)
    _emit(
        args,
        f"sufficient condition {'holds' if ok else 'fails'} for {c1} / {c2}",
        result="holds" if ok else "fails",
    )
    return HOLDS if ok else REFUTED


def cmd_clone(args) -> int:
    m = resolve_matrix(args.matrix)
    clone = clone_upto(m, args.arity)
    for k in sorted(clone):
        fns = sorted(clone[k])
        if args.format == "lines":
            for t in fns:
                print(f"{k}\t{' '.join(map(str, t))}")
        else:
            print(f"arity {k}: {len(fns)} term functions")
    return HOLDS


def cmd_same_presentation(args) -> int:
    m1, m2 = resolve_matrix(args.m1), resolve_matrix(args.m2)
    ok = same_presentation(m1, m2, args.arity)
    _emit(args, f"clones {'agree' if ok else 'differ'} up to arity {args.arity}", result="agree" if ok else "differ")
    return HOLDS if ok else REFUTED


def cmd_list_builtins(args) -> int:
    for name, note in catalog.list_builtins():
        print(f"{name}\t{note}" if args.format == "lines" else f"{name:<14} {note}")
    for name, note in catalog.list_builtin_pairs():
        print(f"pair {name}\t{note}" if args.format == "lines" else f"pair {name:<14} {note}")
    return HOLDS


def cmd_verify_paper(args) -> int:
    from .verification import CRITERIA, run_criterion

    ok = True
    for check in CRITERIA:
        res = run_criterion(check)
        print(res.line())
        if args.verbose or not res.passed:
            for d in res.details:
                print(f"    {d}")
        ok = ok and res.passed
    return HOLDS if ok else REFUTED


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="matfib", description="Finite matrix logics and their fibring by functions.")
    p.add_argument("--format", choices=["plain", "lines"], default="plain", help="output format")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def target(sp):
        sp.add_argument("matrix", help="matrix reference")
        sp.add_argument("--with", dest="with_", metavar="M2", help="second component, to work in the fibred matrix")
        sp.add_argument("--pair", help="fibring pair reference (with --with)")

    def components(sp):
        sp.add_argument("m1")
        sp.add_argument("m2")

    def bounds(sp, depth=3, vars_=3):
        sp.add_argument("--depth", type=_positive, default=depth)
        sp.add_argument("--vars", type=_positive, default=vars_)

    sp = sub.add_parser("entails", help="decide PREMISE... |= CONCLUSION (last formula is the conclusion)")
    target(sp)
    sp.add_argument("formulas", nargs="+")
    sp.set_defaults(run=cmd_entails)

    sp = sub.add_parser("taut", help="decide whether a formula is valid")
    target(sp)
    sp.add_argument("formula")
    sp.set_defaults(run=cmd_taut)

    sp = sub.add_parser("fibre", help="print the fibred matrix in spec format")
    components(sp)
    sp.add_argument("pair")
    sp.add_argument("--name", help="name of the emitted matrix")
    sp.set_defaults(run=cmd_fibre)

    sp = sub.add_parser("table", help="render the truth tables")
    target(sp)
    sp.set_defaults(run=cmd_table)

    sp = sub.add_parser("admissible-pairs", help="enumerate admissible fibring pairs")
    components(sp)
    sp.add_argument("--count", action="store_true", help="print only the number of pairs")
    sp.set_defaults(run=cmd_admissible_pairs)

    sp = sub.add_parser("conserve", help="bounded conservativity check")
    components(sp)
    sp.add_argument("pair")
    sp.add_argument("--kind", choices=["weak", "strong"], default="strong")
    sp.add_argument("--side", choices=["1", "2", "both"], default="both")
    sp.add_argument("--premises", type=int, default=2, help="largest premise set (0 allowed)")
    bounds(sp, depth=2)
    sp.set_defaults(run=cmd_conserve)

    sp = sub.add_parser("identify", help="bounded identification check of two connectives")
    target(sp)
    sp.add_argument("--c1")
    sp.add_argument("--c2")
    sp.add_argument("--method", choices=["class", "pairs"], default="class")
    bounds(sp)
    sp.set_defaults(run=cmd_identify)

    sp = sub.add_parser("check-theorem", help="sufficient condition for identifying two connectives")
    components(sp)
    sp.add_argument("pair")
    sp.add_argument("--c1")
    sp.add_argument("--c2")
    sp.set_defaults(run=cmd_check_theorem)

    sp = sub.add_parser("clone", help="term functions up to an arity")
    sp.add_argument("matrix")
    sp.add_argument("--arity", type=_positive, default=2)
    sp.set_defaults(run=cmd_clone)

    sp = sub.add_parser("same-presentation", help="compare clones up to an arity")
    components(sp)
    sp.add_argument("--arity", type=_positive, default=2)
    sp.set_defaults(run=cmd_same_presentation)

    sp = sub.add_parser("list-builtins", help="list built-in matrices and pairs")
    sp.set_defaults(run=cmd_list_builtins)

    sp = sub.add_parser("verify-paper", help="run the acceptance suite")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(run=cmd_verify_paper)
    return p


def _hoist_format(argv: Sequence[str]) -> List[str]:
    """Allow ``--format`` anywhere on the command line."""
    argv = list(argv)
    out, fmt = [], []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a == "--format" and i + 1 < len(argv):
            fmt = [a, argv[i + 1]]
            i += 2
            continue
        if a.startswith("--format="):
            fmt = [a]
        else:
            out.append(a)
        i += 1
    return fmt + out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _hoist_format(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not getattr(args, "run", None):
            parser.print_usage(sys.stderr)
            return USAGE
        return args.run(args)
    except SystemExit as e:  # --help
        return int(e.code or 0)
    except (UsageError, LogicError, KeyError, ValueError) as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {msg}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())

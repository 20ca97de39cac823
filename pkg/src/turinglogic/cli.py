"""Command-line front end.

Exit codes: 0 proven true / accept, 1 proven false / reject, 2 unknown /
budget exhausted, 64 usage error, 65 input that fails to parse, 70 runtime
failure (including a certificate that does not verify).
"""
from __future__ import annotations

import argparse
import random
import sys

from . import syntax as S
from .game import A, E, Game, GameError, Player, Sign
from .parser import ParseError, parse_formula, parse_model, parse_tm, pretty_print
from .quantifier import DEFAULT_CAP, QuantifierError, builtin_quantifiers, load_quantifiers
from .solver import Solver, VerdictKind, evaluate, format_line, principal_line
from .structure import Assignment, StructureError, encode
from .tmcompile import Outcome, TMError, certify, compile_tm, simulate

EXIT_TRUE, EXIT_FALSE, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_PARSE, EXIT_RUNTIME = 64, 65, 70

_VERDICT_EXIT = {VerdictKind.PROVEN_TRUE: EXIT_TRUE, VerdictKind.PROVEN_FALSE: EXIT_FALSE,
                 VerdictKind.UNKNOWN: EXIT_UNKNOWN}
_RUN_EXIT = {Outcome.ACCEPT: EXIT_TRUE, Outcome.REJECT: EXIT_FALSE, Outcome.EXHAUSTED: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _parse_assign(text):
    out = {}
    if not text:
        return out
    for part in text.split(","):
        name, sep, value = part.partition("=")
        if not sep or not name.strip() or not value.strip().isdigit():
            raise UsageError(f"--assign expects x=3,y=0, got {part!r}")
        out[name.strip()] = int(value)
    return out


def _parse_word(text):
    if text is None or text in ("", "ε"):
        return ()
    if "," in text:
        return tuple(p for p in text.split(",") if p)
    return tuple(text)


def _quantifiers(args):
    if getattr(args, "quantifiers", None):
        return load_quantifiers(_read(args.quantifiers), cap=args.cap)
    return builtin_quantifiers()


def _formula_text(args):
    if args.expr is not None:
        return args.expr
    if args.formula is None:
        raise UsageError("give a formula file or --expr TEXT")
    return _read(args.formula)


def _load_eval_inputs(args):
    vocab, structure = parse_model(_read(args.model))
    quantifiers = _quantifiers(args)
    phi = parse_formula(_formula_text(args), vocab, quantifiers)
    assignment = Assignment(_parse_assign(args.assign))
    missing = sorted(v for v in S.free_variables(phi) if isinstance(v, str) and v not in assignment)
    if missing:
        raise UsageError("free variable(s) " + ", ".join(missing) + " need values; use --assign")
    for x, a in assignment.individual.items():
        if a not in structure.domain:
            raise UsageError(f"--assign {x}={a}: element not in the domain")
    return structure, assignment, phi, quantifiers


def cmd_eval(args, out):
    structure, assignment, phi, quantifiers = _load_eval_inputs(args)
    sign = Sign.parse(args.sign)
    game = Game(phi, quantifiers, args.cap)
    verdict, stats = evaluate(structure, assignment, phi, sign, budget=args.budget, step=args.step,
                              geometric=args.geometric, memo=not args.no_memo, game=game)
    print(verdict, file=out)
    print(stats, file=out)
    if args.trace:
        start = game.initial_position(structure, assignment, sign)
        print(format_line(principal_line(game, start, verdict.depth)), file=out)
    return _VERDICT_EXIT[verdict.kind]


def _load_tm(args):
    return parse_tm(_read(args.machine))


def cmd_run_tm(args, out):
    tm = _load_tm(args)
    result = simulate(tm, _parse_word(args.word), args.budget)
    print(result, file=out)
    if args.trace:
        print("tape " + " ".join(result.tape) + f"  head={result.head} state={result.state}", file=out)
    return _RUN_EXIT[result.outcome]


def cmd_compile_tm(args, out):
    print(pretty_print(compile_tm(_load_tm(args))), file=out)
    return EXIT_TRUE


def cmd_certify(args, out):
    tm = _load_tm(args)
    report = certify(tm, _parse_word(args.word), args.budget)
    print(f"run {report.run}", file=out)
    if report.certificate is None:
        print("no certificate: the run does not halt within the budget", file=out)
        return EXIT_UNKNOWN
    cert = report.certificate
    print(f"certificate owner={cert.owner.name} sign={cert.sign.value} bound={cert.bound} "
          f"entries={len(cert.strategy)}", file=out)
    print(f"check {report.check}", file=out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(cert.to_text())
    if not report.verified:
        return EXIT_RUNTIME
    return _RUN_EXIT[report.run.outcome]


def cmd_encode(args, out):
    _, structure = parse_model(_read(args.model))
    order = None
    if args.order:
        try:
            order = [int(v) for v in args.order.split(",")]
        except ValueError:
            raise UsageError("--order expects a comma-separated permutation of the domain") from None
        if sorted(order) != structure.elements():
            raise UsageError("--order must list every domain element exactly once")
    symbols = args.symbols.split(",") if args.symbols else None
    print(encode(structure, order, symbols), file=out)
    return EXIT_TRUE


def cmd_play(args, out, inp=None):
    inp = inp or sys.stdin
    structure, assignment, phi, quantifiers = _load_eval_inputs(args)
    sign = Sign.parse(args.sign)
    game = Game(phi, quantifiers, args.cap)
    human = E if args.human in ("exists", "E", "∃") else A
    solver = Solver(game, memo=not args.no_memo)
    p = game.initial_position(structure, assignment, sign)
    depth = args.engine_depth
    rounds = 0
    while True:
        print(f"[{rounds}] {p.canonical()}  at: {pretty_print(game.node(p))}", file=out)
        winner = game.terminal_status(p)
        if winner is not None:
            print(f"{winner} wins", file=out)
            return EXIT_TRUE if winner is E else EXIT_FALSE
        mover = game.mover(p)
        succ = game.successors(p)
        if mover is None:
            m, p = succ[0]
        elif mover is human:
            for i, (m, _) in enumerate(succ):
                print(f"  {i}: {m}", file=out)
            while True:
                print(f"{mover} chooses (index, q to quit): ", end="", file=out)
                out.flush()
                line = inp.readline()
                if not line or line.strip() in ("q", "quit"):
                    print("quit without a winner", file=out)
                    return EXIT_UNKNOWN
                line = line.strip()
                if line.isdigit() and int(line) < len(succ):
                    m, p = succ[int(line)]
                    break
                print("invalid selection", file=out)
        else:
            pick = succ[0]
            fallback = None
            for m_c in succ:
                v = solver.value(m_c[1], depth)
                if v is mover:
                    pick = m_c
                    break
                if v is None and fallback is None:
                    fallback = m_c
            else:
                pick = fallback or succ[0]
            m, p = pick
            print(f"{mover} plays {m}", file=out)
        rounds += 1


def cmd_selftest(args, out):
    from .acceptance import run_all

    numbers = [int(v) for v in args.only.split(",")] if args.only else None
    results = run_all(numbers, echo=lambda line: print(line, file=out))
    return EXIT_TRUE if all(r.passed for r in results) else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="turinglogic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def config(p, budget=10000):
        p.add_argument("--budget", type=_positive, default=budget, help="depth budget in rounds (steps for machines)")
        p.add_argument("--step", type=_positive, default=1, help="deepening step")
        p.add_argument("--geometric", action="store_true", help="double the depth between deepening levels")
        p.add_argument("--no-memo", action="store_true", help="disable the transposition table")
        p.add_argument("--trace", action="store_true", help="print a play transcript")
        p.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="domain cap for witness-set enumeration")
        p.add_argument("--seed", type=int, default=0, help="random seed")

    def formula_inputs(p):
        p.add_argument("model")
        p.add_argument("formula", nargs="?")
        p.add_argument("--expr", "-e", help="formula text instead of a file")
        p.add_argument("--sign", default="+", choices=["+", "-"])
        p.add_argument("--assign", default="", help="x=3,y=0")
        p.add_argument("--quantifiers", help="quantifier table file")

    p = sub.add_parser("eval", help="evaluate a formula on a model")
    formula_inputs(p)
    config(p)
    p.set_defaults(func=cmd_eval)

    for name, func, helptext in (
        ("run-tm", cmd_run_tm, "simulate a machine"),
        ("certify", cmd_certify, "emit and verify a winning-strategy certificate"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("machine")
        p.add_argument("word", nargs="?", default="")
        config(p)
        if name == "certify":
            p.add_argument("--out", help="write the certificate to this file")
        p.set_defaults(func=func)

    p = sub.add_parser("compile-tm", help="print the compiled sentence")
    p.add_argument("machine")
    p.set_defaults(func=cmd_compile_tm)

    p = sub.add_parser("encode", help="print the bit encoding of a model")
    p.add_argument("model")
    p.add_argument("--order", help="element order, e.g. 2,0,1")
    p.add_argument("--symbols", help="symbol order, e.g. R,P")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("play", help="play the semantic game against the engine")
    formula_inputs(p)
    config(p)
    p.add_argument("--human", default="exists", choices=["exists", "forall"])
    p.add_argument("--engine-depth", type=_positive, default=40, help="search depth for engine moves")
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    random.seed(getattr(args, "seed", 0))
    try:
        return args.func(args, out)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except (QuantifierError, StructureError, TMError) as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_PARSE
    except GameError as err:
        print(f"runtime error: {err}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

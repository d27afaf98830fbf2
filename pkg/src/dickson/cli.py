"""Command-line front end: ``dickson <subcommand> [flags]``.

Machine output (one canonical JSON document, or CSV for ``tightness``)
goes to standard output or ``--out``; diagnostics go to standard error.

Exit status: 0 success, 1 certificate rejected, 2 refutation found,
3 evaluation budget exhausted, 4 parse or usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .certificate import BoundCertificate, canonical_json, check_certificate
from .dsl import parse_function, parse_sequence
from .engine import dl_k_l, gap_pair
from .errors import BudgetExhausted, DicksonError, HorizonTooLarge, NotNatural, ParseError
from .oracle import counterexample_family_check, minimal_good_set, rows_to_csv, tightness_experiment
from .pigeonhole import ph2_from_dl, mono_run
from .sequences import DEFAULT_BUDGET, Budget
from .unprovability import (
    dichotomy_lemma, lex_embed_refute, one_step_refute_2d, one_step_refute_3d,
)

EXIT_OK, EXIT_REJECTED, EXIT_REFUTED, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dsl_text(value: str) -> str:
    """``@path`` reads the description from a file."""
    if value.startswith("@"):
        return Path(value[1:]).read_text().strip()
    return value


def _sequences(args, count=None):
    texts = args.seq or []
    if not texts:
        raise UsageError("at least one --seq is required")
    if count is not None and len(texts) != count:
        raise UsageError(f"expected exactly {count} --seq flags, got {len(texts)}")
    return [parse_sequence(_dsl_text(t)) for t in texts]


def _function(text, name):
    if text is None:
        raise UsageError(f"{name} is required")
    return parse_function(_dsl_text(text))


def _params(text: str) -> list[int]:
    """``1..20`` or ``1,4,9``."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",") if p]


def _budget(args):
    return Budget(args.budget)


# each handler returns (exit status, output text)

def cmd_witness(args):
    seqs = _sequences(args)
    budget = _budget(args)
    if args.gap is not None:
        if len(seqs) != 1:
            raise UsageError("--gap takes exactly one --seq")
        return EXIT_OK, gap_pair(seqs[0], args.gap, budget).certificate.to_json()
    _, cert = dl_k_l(seqs, args.l, budget)
    return EXIT_OK, cert.to_json()


def cmd_certify(args):
    if args.input is None:
        raise UsageError("--in is required")
    cert = BoundCertificate.from_json(Path(args.input).read_text())
    verdict = check_certificate(_sequences(args), cert)
    return (EXIT_OK if verdict.ok else EXIT_REJECTED), canonical_json(verdict.to_dict())


def cmd_oracle(args):
    if args.horizon is None:
        raise UsageError("--horizon is required")
    report = minimal_good_set(_sequences(args), args.l, args.horizon, budget=_budget(args))
    return EXIT_OK, canonical_json({**report.to_dict(), "budget": args.budget})


def cmd_tightness(args):
    rows = tightness_experiment(args.family, _params(args.params), args.l, args.op, args.jobs,
                                budget=args.budget)
    for row in rows:
        if row.truncated:
            print(f"note: {row.family}({row.param}) oracle horizon cut to {row.horizon}",
                  file=sys.stderr)
    return EXIT_OK, rows_to_csv(rows)


def cmd_refute_2d(args):
    f = _function(args.f, "--f")
    report = one_step_refute_2d(f, args.l, args.trials, args.m, _budget(args))
    return EXIT_REFUTED, canonical_json({**report, "budget": args.budget})


def cmd_refute_3d(args):
    f1, f2 = _function(args.f1, "--f1"), _function(args.f2, "--f2")
    report = one_step_refute_3d(f1, f2, args.trials, _budget(args))
    return EXIT_REFUTED, canonical_json({**report, "budget": args.budget})


def cmd_lex_refute(args):
    found = lex_embed_refute(_function(args.f, "--f"), _budget(args))
    return EXIT_REFUTED, canonical_json({**found.to_dict(), "budget": args.budget})


def cmd_dichotomy(args):
    a, b = _sequences(args, 2)
    if args.M is None:
        raise UsageError("--M is required")
    result = dichotomy_lemma(a, b, args.M, args.l, _budget(args))
    return EXIT_OK, canonical_json({**result.to_dict(), "budget": args.budget})


def cmd_pigeonhole(args):
    (seq,) = _sequences(args, 1)
    budget = _budget(args)
    if args.M is None:
        found = ph2_from_dl(seq, args.l, budget)
    else:
        found = mono_run(seq, args.M, args.l, budget)
    return EXIT_OK, canonical_json({**found.to_dict(), "budget": args.budget})


def cmd_counterexample(args):
    verdict = counterexample_family_check(args.n_max)
    return (EXIT_OK if verdict.ok else EXIT_REJECTED), canonical_json(verdict.to_dict())


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="maximum number of sequence evaluations")
    common.add_argument("--out", help="write machine output here instead of stdout")

    parser = _Parser(prog="dickson", description="Witnesses and bounds for finite Dickson's lemma.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, handler, help_text, *flags):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        for flag in flags:
            flag(p)
        return p

    def seq(p):
        p.add_argument("--seq", action="append", metavar="DSL",
                       help="sequence description, or @file; repeat for several sequences")

    def length(default):
        return lambda p: p.add_argument("--l", type=int, default=default, help="witness length")

    add("witness", cmd_witness, "extract a good index set with its bound certificate", seq, length(2),
        lambda p: p.add_argument("--gap", type=int, metavar="N",
                                 help="instead find i with a(i) <= a(i+N)"))
    add("certify", cmd_certify, "re-check a certificate against the sequences", seq,
        lambda p: p.add_argument("--in", dest="input", metavar="PATH", help="certificate JSON"))
    add("oracle", cmd_oracle, "brute-force minimal good set", seq, length(2),
        lambda p: p.add_argument("--horizon", type=int))
    tight = add("tightness", cmd_tightness, "compare extracted bounds with the oracle (CSV)", length(2))
    tight.add_argument("--family", required=True,
                       help="dec, const, step, or a DSL template using {n}")
    tight.add_argument("--params", default="1..10", help="range a..b or list a,b,c")
    tight.add_argument("--op", choices=("witness", "gap"), default="witness")
    tight.add_argument("--jobs", type=int, default=1)
    r2 = add("refute-2d", cmd_refute_2d, "chain defeating a candidate f: N^2 -> N", length(3))
    r2.add_argument("--f")
    r2.add_argument("--m", type=int, default=0, help="least coordinate allowed")
    r2.add_argument("--trials", type=int, default=1)
    r3 = add("refute-3d", cmd_refute_3d, "triples defeating candidates f1, f2: N^3 -> N")
    r3.add_argument("--f1")
    r3.add_argument("--f2")
    r3.add_argument("--trials", type=int, default=1)
    lex = add("lex-refute", cmd_lex_refute, "show f: N^2 -> N is no lexicographic embedding")
    lex.add_argument("--f")
    add("dichotomy", cmd_dichotomy, "equal run below M or crossing above M for two sequences",
        seq, length(2), lambda p: p.add_argument("--M", type=int))
    add("pigeonhole", cmd_pigeonhole, "monochromatic run of a coloring, or of values below --M",
        seq, length(2), lambda p: p.add_argument("--M", type=int))
    add("counterexample", cmd_counterexample, "verify no pair is good for the whole family",
        lambda p: p.add_argument("--n-max", type=int, default=10))
    return parser


def run(argv=None) -> tuple[int, str]:
    """Execute one command; return (exit status, machine output).

    With ``--out`` the output is also written to that file.
    """
    try:
        args = build_parser().parse_args(argv)
        status, output = args.handler(args)
    except SystemExit as exc:  # --help
        return (exc.code or 0), ""
    except BudgetExhausted as exc:
        print(f"error: {exc} (used {exc.used})", file=sys.stderr)
        return EXIT_BUDGET, ""
    except (UsageError, ParseError, NotNatural, HorizonTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, ""
    except DicksonError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_REJECTED, ""
    if output and not output.endswith("\n"):
        output += "\n"
    if args.out:
        Path(args.out).write_text(output)
    return status, output


def main(argv=None) -> int:
    status, output = run(sys.argv[1:] if argv is None else argv)
    if output and not _writes_file(argv):
        sys.stdout.write(output)
    return status


def _writes_file(argv):
    argv = sys.argv[1:] if argv is None else argv
    return any(a == "--out" or a.startswith("--out=") for a in argv)


if __name__ == "__main__":
    sys.exit(main())

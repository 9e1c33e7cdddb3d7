"""Command-line surface: construct, verify, reduce, decode, search, table.

Exit codes: 0 success (or verified maximally recoverable), 1 negative result
(not recoverable / not correctable / nothing found, witness printed as JSON),
2 resource cap exceeded, 3 invalid input.  Every run echoes its full
configuration to stderr; JSON artifacts are byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import constructions
from .decoder import load_word, recover, save_word, word_to_json_dict
from .errors import CapExceededError, InconsistentWordError, NotCorrectableError
from .gridcode import GridCode, load_code, save_code, to_json_dict
from .reductions import reduce_box, reduce_monotone
from .verifier import (
    FailureWitness,
    MrReport,
    is_mr_cycle_criterion,
    is_mr_rank_oracle,
    min_field_size_search,
)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_CAP = 2
EXIT_INVALID = 3


def _dump_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def _pattern_json(pattern) -> list[list[int]]:
    return [[i, j] for i, j in pattern.sorted_cells()]


def _witness_json(witness: FailureWitness) -> dict:
    return {
        "format": 1,
        "kind": witness.kind,
        "pattern": _pattern_json(witness.pattern),
        "tree": _pattern_json(witness.tree) if witness.tree is not None else None,
        "extras": [[i, j] for i, j in witness.extras] if witness.extras is not None else None,
        "cycles": [[[i, j] for i, j in c.cells] for c in witness.cycles]
        if witness.cycles is not None
        else None,
    }


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_construct(args: argparse.Namespace) -> int:
    family = args.family
    if family == "binary":
        code = constructions.construct_binary(args.m, args.n)
    elif family == "bch":
        code = constructions.construct_bch_simple(args.m, args.n, args.h)
    elif family == "bch-zero":
        code = constructions.construct_bch_zero(args.m, args.n, args.h)
    elif family == "ap3":
        code = constructions.construct_ap3(args.n, args.q)
    elif family == "bootstrap":
        if not args.seed_code:
            raise ValueError("bootstrap requires --seed-code")
        if not args.n_target:
            raise ValueError("bootstrap requires --n-target")
        code = constructions.bootstrap_h1(load_code(args.seed_code), args.n_target)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown family {family}")
    _emit(args, _dump_json(to_json_dict(code)))
    spec = code.spec
    print(
        f"constructed {family} code: m={code.m} n={code.n} h={code.h} "
        f"q={spec.p}^{spec.d}",
        file=sys.stderr,
    )
    return EXIT_OK


def _print_report(label: str, report: MrReport) -> None:
    verdict = "MR" if report.is_mr else "not MR"
    print(
        f"{label}: {verdict} (patterns checked: {report.patterns_checked}, "
        f"dedup hits: {report.dedup_hits})"
    )


def cmd_verify(args: argparse.Namespace) -> int:
    code = load_code(args.code)
    reports = []
    if args.method in ("cycles", "both"):
        reports.append(("cycle criterion", is_mr_cycle_criterion(code, cap=args.cap, workers=args.workers)))
    if args.method in ("rank", "both"):
        mode = "full" if code.m * code.n <= 20 else "restricted"
        reports.append((f"rank oracle ({mode})", is_mr_rank_oracle(code, mode=mode)))
    ok = True
    for label, report in reports:
        _print_report(label, report)
        if not report.is_mr:
            ok = False
            sys.stdout.write(_dump_json(_witness_json(report.witness)))
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_reduce(args: argparse.Namespace) -> int:
    code = load_code(args.infile)
    if args.method == "monotone":
        reduced = reduce_monotone(code, args.h_prime)
    else:
        if args.h1 is None or args.h2 is None:
            raise ValueError("box reduction requires --h1 and --h2")
        reduced = reduce_box(code, args.h_prime, args.h1, args.h2)
    with open(args.outfile, "w", encoding="utf-8") as fh:
        fh.write(_dump_json(to_json_dict(reduced)))
    print(
        f"reduced to m={reduced.m} n={reduced.n} h={reduced.h} over "
        f"q={reduced.spec.p}^{reduced.spec.d}"
    )
    return EXIT_OK


def cmd_decode(args: argparse.Namespace) -> int:
    code = load_code(args.code)
    word = load_word(args.word)
    try:
        recovered = recover(code, word)
    except NotCorrectableError as exc:
        print(f"not correctable: {exc} (deficiency {exc.deficiency})")
        return EXIT_NEGATIVE
    except InconsistentWordError as exc:
        print(f"inconsistent word: {exc}")
        return EXIT_NEGATIVE
    if args.out:
        save_word(recovered, args.out)
    else:
        sys.stdout.write(_dump_json(word_to_json_dict(recovered)))
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    outcome = min_field_size_search(
        args.m, args.n, args.h, args.max_q, family=args.family, candidate_cap=args.cap
    )
    for q in outcome.ruled_out:
        print(f"q={q}: exhausted, no maximally recoverable code")
    if outcome.found_q is None:
        print(f"no field of size <= {args.max_q} admits a code")
        return EXIT_NEGATIVE
    print(f"minimum field size: q={outcome.found_q} ({outcome.candidates_checked} candidates checked)")
    if args.out:
        save_code(outcome.witness, args.out)
    return EXIT_OK


_TABLE_GRID = {
    "binary": [(2, 4), (2, 8), (3, 4), (4, 4)],
    "bch": [(2, 4, 1), (2, 4, 2), (3, 4, 1), (3, 4, 2)],
    "bch-zero": [(2, 4, 1), (2, 4, 2), (3, 4, 1), (3, 4, 2), (4, 8, 2)],
    "ap3": [4, 5, 6],
    "search": [(2, 2, 1), (2, 3, 1), (2, 4, 1)],
}


def smallest_ap3_prime(n: int) -> int:
    """Smallest odd prime whose greedy progression-free scan reaches size n."""
    from .field import _is_prime

    q = 3
    while True:
        if _is_prime(q):
            try:
                constructions.ap3_free_set(q, n)
                return q
            except ValueError:
                pass
        q += 2


def cmd_table(args: argparse.Namespace) -> int:
    if args.id != "bounds-summary":
        raise ValueError(f"unknown table identifier {args.id!r}")
    rows: list[tuple[str, ...]] = []
    for m, n in _TABLE_GRID["binary"]:
        code = constructions.construct_binary(m, n)
        rows.append(("binary", f"({m},{n},1)", f"2^{code.spec.d}", "n^(m-1)", str(n ** (m - 1))))
    for m, n, h in _TABLE_GRID["bch"]:
        code = constructions.construct_bch_simple(m, n, h)
        k = m.bit_length()  # least power of two greater than m
        rows.append(
            (
                "bch",
                f"({m},{n},{h})",
                f"2^{code.spec.d}",
                "2(2^k n)^(m+h-1)",
                str(2 * ((1 << k) * n) ** (m + h - 1)),
            )
        )
    for m, n, h in _TABLE_GRID["bch-zero"]:
        code = constructions.construct_bch_zero(m, n, h)
        k = (m - 1).bit_length()  # least power of two greater than m - 1
        rows.append(
            (
                "bch-zero",
                f"({m},{n},{h})",
                f"2^{code.spec.d}",
                "2(2^k n)^(m+h-2)",
                str(2 * ((1 << k) * n) ** (m + h - 2)),
            )
        )
    for n in _TABLE_GRID["ap3"]:
        q = smallest_ap3_prime(n)
        rows.append(("ap3", f"(3,{n},1)", str(q), "smallest greedy odd prime", str(q)))
    for m, n, h in _TABLE_GRID["search"]:
        outcome = min_field_size_search(m, n, h, max_q=8)
        found = str(outcome.found_q) if outcome.found_q else "> 8"
        rows.append(("search", f"({m},{n},{h})", found, "lower bound n", str(n)))
    header = ("family", "(m,n,h)", "field size", "formula", "value")
    widths = [max(len(r[c]) for r in rows + [header]) for c in range(len(header))]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    print(fmt.format(*header))
    for r in rows:
        print(fmt.format(*r))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mrgrid", description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and emit its JSON")
    p.add_argument("--family", required=True, choices=["binary", "bch", "bch-zero", "ap3", "bootstrap"])
    p.add_argument("--m", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--q", type=int, help="field size for the ap3 family")
    p.add_argument("--seed-code", help="seed code JSON for the bootstrap family")
    p.add_argument("--n-target", type=int, help="target width for the bootstrap family")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="decide maximal recoverability")
    p.add_argument("code")
    p.add_argument("--method", choices=["cycles", "rank", "both"], default="both")
    p.add_argument("--cap", type=int, default=10_000_000)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("reduce", help="apply a constructive reduction")
    p.add_argument("--method", choices=["monotone", "box"], required=True)
    p.add_argument("--h-prime", type=int, required=True)
    p.add_argument("--h1", type=int)
    p.add_argument("--h2", type=int)
    p.add_argument("infile")
    p.add_argument("outfile")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("decode", help="recover erased symbols of a word")
    p.add_argument("code")
    p.add_argument("word")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("search", help="exhaustive minimum-field-size search")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--max-q", type=int, required=True)
    p.add_argument("--family", choices=["generic", "gabidulin"], default="generic")
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", help="summary of construction sizes and bounds")
    p.add_argument("--id", default="bounds-summary")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {k: v for k, v in vars(args).items() if k != "func"}
    print(f"# config {json.dumps(config, sort_keys=True)}", file=sys.stderr)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command line interface.

Subcommands:

- ``redustat reduce <test> --oracle-cmd <tpl>``: reduce one failing test with
  an external command oracle and print (or write) the reduction report.
- ``redustat corpus <config>``: run a configured corpus of reductions and
  write the report bundle.
- ``redustat replicate --table I|II [--fixture <csv>]``: recompute the
  published analysis from a table fixture.
- ``redustat stats --csv <file> --cols a,b --test wilcoxon|shapiro``: run one
  hypothesis test over CSV columns.

Exit codes: 0 success, 1 entry/reduction errors, 2 usage or config errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .corpus import CorpusConfigError, load_corpus_config, run_corpus
from .ingest import SchemaError, ingest_tree
from .metrics import EmptyCorpusError, format_percent
from .oracle import (
    MatchPolicy,
    OracleConfig,
    OriginalDoesNotFailError,
    OracleSpawnError,
)
from .parser import StatementSyntaxError, parse_test
from .reducer import reduce_test
from .replicate import replicate_from_fixtures
from .stats import StatsError, shapiro_wilk, wilcoxon_signed_rank

#: Matches the first line mentioning a Java-ish failure; group 0 is the signature.
DEFAULT_SIGNATURE_PATTERN = r"(?:\w+\.)*\w*(?:Error|Exception|Failure)[^\n]*|FAIL(?:URE|ED)?[^\n]*"


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (OriginalDoesNotFailError, OracleSpawnError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (CorpusConfigError, EmptyCorpusError, SchemaError,
            StatementSyntaxError, StatsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="redustat",
        description="Statement-level failing-test reduction and replication statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_reduce = sub.add_parser("reduce", help="reduce one failing test")
    p_reduce.add_argument("test", help="test-body file (.json is ingested as a tree document)")
    p_reduce.add_argument("--oracle-cmd", required=True,
                          help="command template; {candidate} is the candidate path")
    p_reduce.add_argument("--policy", choices=["any", "same"], default="same")
    p_reduce.add_argument("--timeout", type=int, default=60_000, metavar="MS")
    p_reduce.add_argument("--fail-exit-codes", default="1",
                          help="comma-separated exit codes meaning Fail (default: 1)")
    p_reduce.add_argument("--signature-pattern", default=DEFAULT_SIGNATURE_PATTERN,
                          help="regex extracting the failure fingerprint")
    p_reduce.add_argument("--workdir", default=".")
    p_reduce.add_argument("--out", help="write the reduction report JSON here")
    p_reduce.set_defaults(handler=_cmd_reduce)

    p_corpus = sub.add_parser("corpus", help="run a corpus of reductions")
    p_corpus.add_argument("config", help="corpus config JSON")
    p_corpus.add_argument("--output-dir", help="override the config's output_dir")
    p_corpus.set_defaults(handler=_cmd_corpus)

    p_repl = sub.add_parser("replicate", help="recompute the published analysis")
    p_repl.add_argument("--table", choices=["I", "II"], required=True)
    p_repl.add_argument("--fixture", help="metrics CSV (default: packaged fixture)")
    p_repl.add_argument("--output-dir", help="also write the report bundle here")
    p_repl.set_defaults(handler=_cmd_replicate)

    p_stats = sub.add_parser("stats", help="run one hypothesis test over CSV columns")
    p_stats.add_argument("--csv", required=True, dest="csv_path")
    p_stats.add_argument("--cols", required=True,
                         help="column names: one for shapiro, two for wilcoxon")
    p_stats.add_argument("--test", choices=["wilcoxon", "shapiro"], required=True,
                         dest="test_name")
    p_stats.set_defaults(handler=_cmd_stats)
    return parser


def _cmd_reduce(args) -> int:
    path = Path(args.test)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        ast = ingest_tree(text)
    else:
        ast = parse_test(text, test_name=path.stem)
    oracle = OracleConfig(
        command_template=args.oracle_cmd,
        workdir=args.workdir,
        timeout_ms=args.timeout,
        fail_exit_codes=frozenset(int(c) for c in args.fail_exit_codes.split(",")),
        signature_pattern=args.signature_pattern,
        match_policy=MatchPolicy.SAME_SIGNATURE if args.policy == "same"
        else MatchPolicy.ANY_FAILURE,
    )
    outcome = reduce_test(ast, oracle)
    report = json.dumps(outcome.to_report(), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(report + "\n", encoding="utf-8")
    else:
        print(report)
    print(f"retained {len(outcome.retained)}/{ast.total_statements} statements "
          f"({outcome.oracle_calls} oracle calls)", file=sys.stderr)
    return 0


def _cmd_corpus(args) -> int:
    config = load_corpus_config(args.config)
    if args.output_dir:
        config.output_dir = Path(args.output_dir)
    bundle = run_corpus(config)
    for status in bundle.entry_statuses:
        marker = "ok" if status.ok else f"ERROR {status.error}"
        print(f"{status.name}: {marker}")
    for line in bundle.claim_lines:
        print(line)
    print(f"bundle written to {config.output_dir}")
    return 1 if bundle.entry_errors else 0


def _cmd_replicate(args) -> int:
    bundle = replicate_from_fixtures(args.table, args.fixture)
    means = bundle.means
    print(f"table {args.table}: {means.n} tests")
    print("mean row: "
          f"stmts={means.stmts:.2f} ntn={means.ntn:.2f} tn={means.tn:.2f} "
          f"ars={means.ars:.2f} prs={format_percent(means.prs)}% "
          f"antrs={means.antrs:.2f} pntrs={format_percent(means.pntrs)}% "
          f"atrs={means.atrs:.2f} ptrs={format_percent(means.ptrs)}%")
    for pair, result in bundle.stats["wilcoxon"].items():
        if "skipped" in result:
            print(f"wilcoxon {pair}: skipped ({result['skipped']})")
        else:
            print(f"wilcoxon {pair}: V={result['statistic']:g} "
                  f"p={result['p_value']:.4g} ({result['method']}, "
                  f"n={result['n_used']})")
    for line in bundle.claim_lines:
        print(line)
    if args.output_dir:
        bundle.write(args.output_dir)
        print(f"bundle written to {args.output_dir}")
    return 0


def _cmd_stats(args) -> int:
    columns = [c.strip() for c in args.cols.split(",") if c.strip()]
    table = _read_columns(Path(args.csv_path), columns)
    if args.test_name == "shapiro":
        if len(columns) != 1:
            raise ValueError("shapiro needs exactly one column")
        values = [v for v in table[columns[0]] if v is not None]
        result = shapiro_wilk(values)
    else:
        if len(columns) != 2:
            raise ValueError("wilcoxon needs exactly two columns")
        pairs = [
            (a, b)
            for a, b in zip(table[columns[0]], table[columns[1]])
            if a is not None and b is not None
        ]
        result = wilcoxon_signed_rank([p[0] for p in pairs], [p[1] for p in pairs])
    print(f"method={result.method.value} statistic={result.statistic:g} "
          f"p={result.p_value:.6g} n={result.n_used} "
          f"ties={'yes' if result.ties_present else 'no'} "
          f"zeros_dropped={result.zeros_dropped}")
    return 0


def _read_columns(path: Path, columns: list[str]) -> dict[str, list[float | None]]:
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        missing = [c for c in columns if c not in (reader.fieldnames or ())]
        if missing:
            raise ValueError(f"columns not in {path.name}: {', '.join(missing)}")
        table: dict[str, list[float | None]] = {c: [] for c in columns}
        for row in reader:
            for column in columns:
                cell = (row[column] or "").strip().rstrip("%")
                table[column].append(float(cell) if cell else None)
    return table


if __name__ == "__main__":
    raise SystemExit(main())

"""Corpus runner: reduce every configured test and report the metrics.

A corpus config is a JSON file::

    {"corpus_name": str,
     "output_dir": str,                    # relative to the config file
     "policy": "any" | "same",             # signature policy for external oracles
     "parallelism": int,                   # >= 1
     "entries": [
        {"name": str, "project": str,
         "test_file": "tests/t01.java",    # or "tree_file": "trees/t01.json"
         "oracle": {"mode": "scripted",
                    "failure_sets": [[3, 5]], "blockers": []}
         # or     {"mode": "command", "command_template": "...",
         #         "timeout_ms": 60000, "fail_exit_codes": [1],
         #         "signature_pattern": "..."}
        }, ...]}

Entries are reduced in parallel up to ``parallelism``; each entry is
isolated, so one failing entry never corrupts its siblings. Per-entry
reduction reports (with the removal trace) land in
``<output_dir>/reductions/``.
"""

from __future__ import annotations

import json
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .ingest import ingest_tree
from .metrics import EmptyCorpusError, MetricsRecord, metrics_from_reduction
from .model import TestCaseAst
from .oracle import MatchPolicy, Oracle, OracleConfig, ScriptedOracle
from .parser import parse_test
from .reducer import reduce_test
from .reports import EntryStatus, ReportBundle, assemble_bundle


class CorpusConfigError(ValueError):
    """Malformed corpus configuration."""


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    project: str
    test_path: Path
    is_tree_document: bool
    oracle_spec: dict

    def load_ast(self) -> TestCaseAst:
        text = self.test_path.read_text(encoding="utf-8")
        if self.is_tree_document:
            ast = ingest_tree(text, project=self.project)
            return ast
        return parse_test(text, test_name=self.name, project=self.project)

    def build_oracle(self, policy: MatchPolicy,
                     scratch_dir: str | None = None) -> Oracle:
        spec = self.oracle_spec
        mode = spec.get("mode", "scripted")
        if mode == "scripted":
            return ScriptedOracle(
                failure_sets=tuple(frozenset(fs) for fs in spec["failure_sets"]),
                blockers=frozenset(spec.get("blockers", ())),
            )
        if mode == "command":
            return OracleConfig(
                command_template=spec["command_template"],
                workdir=spec.get("workdir", "."),
                timeout_ms=spec.get("timeout_ms", 60_000),
                fail_exit_codes=frozenset(spec.get("fail_exit_codes", (1,))),
                signature_pattern=spec.get("signature_pattern"),
                match_policy=policy,
                retries=spec.get("retries", 0),
                scratch_dir=scratch_dir,
            )
        raise CorpusConfigError(f"entry {self.name!r}: unknown oracle mode {mode!r}")


@dataclass
class CorpusConfig:
    corpus_name: str
    entries: list[CorpusEntry]
    output_dir: Path
    policy: MatchPolicy = MatchPolicy.SAME_SIGNATURE
    parallelism: int = 1
    source_text: str = ""

    def __post_init__(self) -> None:
        if not self.entries:
            raise EmptyCorpusError("corpus has no entries")
        if self.parallelism < 1:
            raise CorpusConfigError("parallelism must be >= 1")
        names = [entry.name for entry in self.entries]
        if len(set(names)) != len(names):
            raise CorpusConfigError("entry names must be unique")


def load_corpus_config(path: str | Path) -> CorpusConfig:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusConfigError(f"config is not valid JSON: {exc}") from None

    base = path.parent
    try:
        entries = []
        for raw_entry in raw["entries"]:
            if "test_file" in raw_entry:
                test_path = base / raw_entry["test_file"]
                is_tree = False
            elif "tree_file" in raw_entry:
                test_path = base / raw_entry["tree_file"]
                is_tree = True
            else:
                raise CorpusConfigError(
                    f"entry {raw_entry.get('name')!r} needs test_file or tree_file")
            entries.append(CorpusEntry(
                name=raw_entry["name"],
                project=raw_entry.get("project", ""),
                test_path=test_path,
                is_tree_document=is_tree,
                oracle_spec=raw_entry["oracle"],
            ))
        return CorpusConfig(
            corpus_name=raw["corpus_name"],
            entries=entries,
            output_dir=base / raw.get("output_dir", "out"),
            policy=MatchPolicy(raw.get("policy", "same")),
            parallelism=raw.get("parallelism", 1),
            source_text=text,
        )
    except KeyError as exc:
        raise CorpusConfigError(f"config missing field {exc}") from None


@dataclass
class _EntryResult:
    status: EntryStatus
    record: MetricsRecord | None = None
    report: dict | None = None


def _run_entry(entry: CorpusEntry, policy: MatchPolicy) -> _EntryResult:
    try:
        # Fresh scratch directory per entry: candidate files (and whatever
        # the command writes next to them) never leak between entries.
        with tempfile.TemporaryDirectory(prefix=f"redustat-{entry.name}-") as scratch:
            ast = entry.load_ast()
            oracle = entry.build_oracle(policy, scratch_dir=scratch)
            outcome = reduce_test(ast, oracle)
        record = metrics_from_reduction(ast, outcome, project=entry.project)
        return _EntryResult(EntryStatus(entry.name, True), record,
                            outcome.to_report())
    except Exception as exc:
        return _EntryResult(EntryStatus(entry.name, False,
                                        f"{type(exc).__name__}: {exc}"))


def run_corpus(config: CorpusConfig, write: bool = True) -> ReportBundle:
    """Reduce every entry and assemble the report bundle.

    Per-entry failures are recorded in the bundle, not raised; callers turn
    ``bundle.entry_errors`` into a nonzero exit code.
    """
    if config.parallelism == 1:
        results = [_run_entry(entry, config.policy) for entry in config.entries]
    else:
        with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
            results = list(pool.map(lambda e: _run_entry(e, config.policy),
                                    config.entries))

    records = [r.record for r in results if r.record is not None]
    if not records:
        raise EmptyCorpusError("every corpus entry failed; nothing to report")
    bundle = assemble_bundle(
        corpus_name=config.corpus_name,
        records=records,
        provenance_source=config.source_text,
        entry_statuses=[r.status for r in results],
        reduction_reports=[r.report for r in results if r.report is not None],
    )
    if write:
        bundle.write(config.output_dir)
    return bundle

"""redustat: statement-level failing-test reduction and replication statistics.

The pieces compose in one line each: parse or ingest a test into a statement
tree, point an oracle at it, reduce, and feed the outcomes to the metrics and
statistics layers. See the README for the CLI surface.
"""

from .model import (
    Category,
    NotAncestorClosedError,
    StatementNode,
    StmtKind,
    TestCaseAst,
    count_categories,
    render,
)
from .parser import StatementSyntaxError, UnsupportedConstructError, parse_test
from .ingest import CycleError, SchemaError, canonical_json, ingest_tree, to_document
from .oracle import (
    MatchPolicy,
    OracleConfig,
    OracleVerdict,
    OriginalDoesNotFailError,
    OracleSpawnError,
    ScriptedOracle,
    VerdictStatus,
    baseline_signature,
    evaluate,
    normalize_signature,
)
from .reducer import (
    ReductionOutcome,
    RemovalOrder,
    TooLargeError,
    brute_force_minimal,
    reduce_test,
    reduction_pass,
    verify_one_minimal,
)
from .metrics import (
    CountMismatchError,
    EmptyCorpusError,
    MeanSummary,
    MetricsRecord,
    aggregate_means,
    compute_metrics,
    metrics_from_reduction,
    read_records_csv,
    write_records_csv,
)
from .stats import (
    AllZeroDifferencesError,
    ConstantInputError,
    StatsMethod,
    StatsResult,
    shapiro_wilk,
    wilcoxon_signed_rank,
)
from .reports import (
    FiveNumberSummary,
    ReportBundle,
    boxplot_table,
    five_number_summary,
    stats_block,
)
from .replicate import load_fixture_records, replicate_from_fixtures
from .corpus import CorpusConfig, CorpusEntry, load_corpus_config, run_corpus

__version__ = "0.1.0"

__all__ = [
    "Category",
    "NotAncestorClosedError",
    "StatementNode",
    "StmtKind",
    "TestCaseAst",
    "count_categories",
    "render",
    "StatementSyntaxError",
    "UnsupportedConstructError",
    "parse_test",
    "CycleError",
    "SchemaError",
    "canonical_json",
    "ingest_tree",
    "to_document",
    "MatchPolicy",
    "OracleConfig",
    "OracleVerdict",
    "OriginalDoesNotFailError",
    "OracleSpawnError",
    "ScriptedOracle",
    "VerdictStatus",
    "baseline_signature",
    "evaluate",
    "normalize_signature",
    "ReductionOutcome",
    "RemovalOrder",
    "TooLargeError",
    "brute_force_minimal",
    "reduce_test",
    "reduction_pass",
    "verify_one_minimal",
    "CountMismatchError",
    "EmptyCorpusError",
    "MeanSummary",
    "MetricsRecord",
    "aggregate_means",
    "compute_metrics",
    "metrics_from_reduction",
    "read_records_csv",
    "write_records_csv",
    "AllZeroDifferencesError",
    "ConstantInputError",
    "StatsMethod",
    "StatsResult",
    "shapiro_wilk",
    "wilcoxon_signed_rank",
    "FiveNumberSummary",
    "ReportBundle",
    "boxplot_table",
    "five_number_summary",
    "stats_block",
    "load_fixture_records",
    "replicate_from_fixtures",
    "CorpusConfig",
    "CorpusEntry",
    "load_corpus_config",
    "run_corpus",
    "__version__",
]

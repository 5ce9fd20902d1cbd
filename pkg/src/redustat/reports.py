"""Report bundles: metric tables, statistics block, boxplot data, claims.

A bundle collects everything one corpus run (or one fixture replication)
produces. Written to a directory it becomes:

- ``metrics.csv``   per-test records in the fixed column order
- ``means.csv``     column means, with excluded-row counts for the
  probability columns
- ``stats.json``    Shapiro-Wilk per column, both paired Wilcoxon tests,
  and the claim verdict lines
- ``boxplot.json``  five-number summaries (plus outliers) per column
- ``report.json``   provenance, per-entry statuses, claim lines

Identical inputs give byte-identical files, except ``report.json`` whose
provenance carries a timestamp (and, after live reductions, wall times in
the per-test reduction reports).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

from .metrics import (
    MeanSummary,
    MetricsRecord,
    PERCENT_COLUMNS,
    aggregate_means,
    records_to_csv,
    summary_to_csv,
)
from .stats import (
    AllZeroDifferencesError,
    StatsError,
    StatsResult,
    shapiro_wilk,
    wilcoxon_signed_rank,
)

SIGNIFICANCE_LEVEL = 0.05


# -- boxplot data -------------------------------------------------------------


@dataclass(frozen=True)
class FiveNumberSummary:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    outliers: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "min": self.minimum,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.maximum,
            "outliers": list(self.outliers),
        }


def quantile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile (R type 7) over unsorted values."""
    if not values:
        raise ValueError("quantile of empty data")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be within [0, 1]")
    data = sorted(values)
    if len(data) == 1:
        return data[0]
    position = (len(data) - 1) * q
    low = int(position)
    frac = position - low
    if frac == 0.0:
        return data[low]
    return data[low] + (data[low + 1] - data[low]) * frac


def five_number_summary(values: Sequence[float], whisker: float = 1.5) -> FiveNumberSummary:
    """Min, quartiles, max, and the points outside ``whisker * IQR``."""
    if not values:
        raise ValueError("summary of empty data")
    q1 = quantile(values, 0.25)
    med = quantile(values, 0.5)
    q3 = quantile(values, 0.75)
    iqr = q3 - q1
    lo = q1 - whisker * iqr
    hi = q3 + whisker * iqr
    outliers = tuple(sorted(v for v in values if v < lo or v > hi))
    return FiveNumberSummary(min(values), q1, med, q3, max(values), outliers)


def boxplot_table(records: Sequence[MetricsRecord],
                  columns: Sequence[str] = PERCENT_COLUMNS) -> dict[str, FiveNumberSummary]:
    """Five-number summaries per metric column, in percent units.

    Undefined probability cells are excluded from their column, matching the
    published tables.
    """
    if not records:
        raise ValueError("no records to summarize")
    table = {}
    for column in columns:
        values = [getattr(r, column) for r in records]
        values = [v * 100.0 for v in values if v is not None]
        if values:
            table[column] = five_number_summary(values)
    return table


# -- statistics block and claims ----------------------------------------------


def _result_dict(result: StatsResult) -> dict:
    return {
        "method": result.method.value,
        "statistic": result.statistic,
        "p_value": result.p_value,
        "n_used": result.n_used,
        "ties_present": result.ties_present,
        "zeros_dropped": result.zeros_dropped,
    }


def _skipped(reason: str) -> dict:
    return {"skipped": reason}


def _try_shapiro(values: list[float]) -> dict:
    if len(values) < 3:
        return _skipped("insufficient n")
    try:
        return _result_dict(shapiro_wilk(values))
    except StatsError as exc:
        return _skipped(str(exc))


def _try_wilcoxon(x: list[float], y: list[float]) -> dict:
    if len(x) < 2:
        return _skipped("insufficient n")
    try:
        return _result_dict(wilcoxon_signed_rank(x, y))
    except AllZeroDifferencesError:
        return _skipped("all differences zero")
    except StatsError as exc:
        return _skipped(str(exc))


def _claim_line(number: int, description: str, comparison: str,
                wilcoxon: dict, leaf_mean: float, tree_mean: float) -> str:
    """Both claims assert the leaf-side column exceeds the tree-side one."""
    if "skipped" in wilcoxon:
        return (f"claim {number} ({description}): NOT EVALUATED "
                f"({comparison}: {wilcoxon['skipped']})")
    p = wilcoxon["p_value"]
    v = wilcoxon["statistic"]
    if p >= SIGNIFICANCE_LEVEL:
        verdict, finding = "FAIL", "no significant difference"
    elif leaf_mean > tree_mean:
        verdict, finding = "PASS", "significant difference"
    else:
        verdict, finding = "FAIL", "significant difference, opposite direction"
    return (f"claim {number} ({description}): {verdict} "
            f"({finding} between {comparison}: V={v:g}, p={p:.4g})")


def stats_block(records: Sequence[MetricsRecord]) -> dict:
    """Shapiro-Wilk per column, the two paired Wilcoxon tests, claim lines.

    All columns are fed to the tests in percent units, as printed in the
    source tables. The probability comparison pairs only rows where both
    probabilities are defined.
    """
    pntrs = [r.pntrs * 100.0 for r in records]
    ptrs = [r.ptrs * 100.0 for r in records]
    prob_pairs = [(r.prntrs * 100.0, r.prtrs * 100.0) for r in records
                  if r.prntrs is not None and r.prtrs is not None]
    prntrs = [pair[0] for pair in prob_pairs]
    prtrs = [pair[1] for pair in prob_pairs]

    block = {
        "shapiro": {
            "pntrs": _try_shapiro(pntrs),
            "ptrs": _try_shapiro(ptrs),
            "prntrs": _try_shapiro(prntrs),
            "prtrs": _try_shapiro(prtrs),
        },
        "wilcoxon": {
            "pntrs_vs_ptrs": _try_wilcoxon(pntrs, ptrs),
            "prntrs_vs_prtrs": _try_wilcoxon(prntrs, prtrs),
        },
        "probability_rows_used": len(prob_pairs),
        "probability_rows_excluded": len(records) - len(prob_pairs),
    }
    def mean(values):
        return sum(values) / len(values) if values else 0.0

    block["claims"] = [
        _claim_line(1, "leaf statements are removed in large numbers",
                    "PNTRS and PTRS", block["wilcoxon"]["pntrs_vs_ptrs"],
                    mean(pntrs), mean(ptrs)),
        _claim_line(2, "leaf statements are more likely to be removed",
                    "PrNTRS and PrTRS", block["wilcoxon"]["prntrs_vs_prtrs"],
                    mean(prntrs), mean(prtrs)),
    ]
    return block


# -- the bundle ---------------------------------------------------------------


@dataclass(frozen=True)
class EntryStatus:
    name: str
    ok: bool
    error: str = ""


@dataclass
class ReportBundle:
    corpus_name: str
    records: list[MetricsRecord]
    means: MeanSummary
    stats: dict
    boxplot: dict[str, FiveNumberSummary]
    provenance: dict
    entry_statuses: list[EntryStatus] = field(default_factory=list)
    reduction_reports: list[dict] = field(default_factory=list)

    @property
    def claim_lines(self) -> list[str]:
        return list(self.stats.get("claims", []))

    @property
    def entry_errors(self) -> int:
        return sum(1 for status in self.entry_statuses if not status.ok)

    def write(self, output_dir: str | Path) -> Path:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "metrics.csv").write_text(records_to_csv(self.records),
                                         encoding="utf-8")
        (out / "means.csv").write_text(summary_to_csv(self.means),
                                       encoding="utf-8")
        (out / "stats.json").write_text(_dump_json(self.stats), encoding="utf-8")
        boxplot = {column: summary.to_dict() for column, summary in self.boxplot.items()}
        (out / "boxplot.json").write_text(_dump_json(boxplot), encoding="utf-8")
        report = {
            "corpus_name": self.corpus_name,
            "provenance": self.provenance,
            "entries": [asdict(status) for status in self.entry_statuses],
            "claims": self.claim_lines,
            "records": len(self.records),
            "errors": self.entry_errors,
        }
        (out / "report.json").write_text(_dump_json(report), encoding="utf-8")
        if self.reduction_reports:
            reductions = out / "reductions"
            reductions.mkdir(exist_ok=True)
            for reduction in self.reduction_reports:
                path = reductions / f"{reduction['test_name']}.json"
                path.write_text(_dump_json(reduction), encoding="utf-8")
        return out


def assemble_bundle(corpus_name: str, records: Sequence[MetricsRecord],
                    provenance_source: str,
                    entry_statuses: Sequence[EntryStatus] = (),
                    reduction_reports: Sequence[dict] = ()) -> ReportBundle:
    records = list(records)
    return ReportBundle(
        corpus_name=corpus_name,
        records=records,
        means=aggregate_means(records),
        stats=stats_block(records),
        boxplot=boxplot_table(records),
        provenance=make_provenance(provenance_source),
        entry_statuses=list(entry_statuses),
        reduction_reports=list(reduction_reports),
    )


def make_provenance(source: str) -> dict:
    from . import __version__

    return {
        "tool": "redustat",
        "tool_version": __version__,
        "config_hash": hashlib.sha256(source.encode("utf-8")).hexdigest(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"

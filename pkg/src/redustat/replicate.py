"""Replication of the published analysis from table fixtures.

The two study corpora are shipped as machine-readable CSV fixtures,
transcribed verbatim from the published tables (typos and all; see
``docs/fixtures.md``). Replication recomputes the mean row, derives the
per-category removal-probability tables by the defined-probability filter,
and runs the full statistics block.

The probability columns are *derived from the count columns at full float
precision* (``antrs/ntn``, ``atrs/tn``), not read from the published
probability tables; the published V statistics are only reproducible that
way. The PNTRS/PTRS comparison, by contrast, runs on the percentage columns
exactly as printed.
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .metrics import MetricsRecord, read_records_csv
from .reports import ReportBundle, assemble_bundle

#: Fixture identifiers accepted by ``replicate``: live corpus tables.
FIXTURE_TABLES = {"I": "table1.csv", "II": "table2.csv"}

#: Published per-category probability tables, for reference comparisons.
PUBLISHED_PROBABILITY_TABLES = {"I": "table3.csv", "II": "table4.csv"}


def fixture_text(filename: str) -> str:
    return (resources.files("redustat") / "data" / filename).read_text("utf-8")


def load_fixture_records(table: str,
                         fixture_path: str | Path | None = None) -> list[MetricsRecord]:
    """Records of Table I or II, probability columns derived from counts."""
    if table not in FIXTURE_TABLES:
        raise ValueError(f"unknown table {table!r}; expected one of "
                         f"{sorted(FIXTURE_TABLES)}")
    if fixture_path is not None:
        text = Path(fixture_path).read_text(encoding="utf-8")
    else:
        text = fixture_text(FIXTURE_TABLES[table])
    return read_records_csv(text, derive_probabilities=True)


def derive_probability_table(records: list[MetricsRecord]) -> list[tuple[str, float, float]]:
    """Rows ``(test, prntrs, prtrs)`` where both probabilities are defined.

    This is the exclusion rule behind the published probability tables:
    tests with an undefined probability (zero statements in the category)
    cannot participate in the comparison.
    """
    return [
        (r.test_name, r.prntrs, r.prtrs)
        for r in records
        if r.prntrs is not None and r.prtrs is not None
    ]


def published_probability_rows(table: str) -> list[tuple[str, float, float]]:
    """The probability table exactly as published (percent values / 100)."""
    text = fixture_text(PUBLISHED_PROBABILITY_TABLES[table])
    rows = []
    for line in text.splitlines()[1:]:
        if not line.strip():
            continue
        name, prntrs, prtrs = line.split(",")
        rows.append((name, float(prntrs) / 100.0, float(prtrs) / 100.0))
    return rows


def replicate_from_fixtures(table: str,
                            fixture_path: str | Path | None = None) -> ReportBundle:
    """Recompute means, derived probability tables and statistics for a table."""
    records = load_fixture_records(table, fixture_path)
    if fixture_path is not None:
        source = Path(fixture_path).read_text(encoding="utf-8")
    else:
        source = fixture_text(FIXTURE_TABLES[table])
    bundle = assemble_bundle(
        corpus_name=f"fixture-table-{table}",
        records=records,
        provenance_source=source,
    )
    return bundle

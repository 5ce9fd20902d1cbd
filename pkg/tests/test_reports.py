import json
import statistics

import pytest

from redustat.metrics import compute_metrics
from redustat.replicate import load_fixture_records
from redustat.reports import (
    EntryStatus,
    FiveNumberSummary,
    assemble_bundle,
    boxplot_table,
    five_number_summary,
    quantile,
    stats_block,
)


def test_identical_values_collapse_the_box():
    summary = five_number_summary([4.2] * 9)
    assert summary == FiveNumberSummary(4.2, 4.2, 4.2, 4.2, 4.2, ())


def test_evenly_spaced_five_vector():
    summary = five_number_summary([0, 25, 50, 75, 100])
    assert (summary.minimum, summary.q1, summary.median, summary.q3,
            summary.maximum) == (0, 25, 50, 75, 100)
    assert summary.outliers == ()


def test_quantiles_match_library_inclusive_method():
    # statistics.quantiles(method="inclusive") is the same linear
    # interpolation scheme; use it as the independent check
    data = [3.0, 1.0, 4.0, 1.5, 9.0, 2.6, 5.3, 5.8, 9.7, 0.1, 6.2]
    q1, q2, q3 = statistics.quantiles(data, n=4, method="inclusive")
    assert quantile(data, 0.25) == pytest.approx(q1, abs=1e-12)
    assert quantile(data, 0.5) == pytest.approx(q2, abs=1e-12)
    assert quantile(data, 0.75) == pytest.approx(q3, abs=1e-12)


def test_outliers_beyond_whiskers():
    data = [10.0, 11.0, 12.0, 13.0, 14.0, 100.0]
    summary = five_number_summary(data)
    assert summary.outliers == (100.0,)
    assert summary.maximum == 100.0


def test_mutants_ptrs_summary_from_fixture():
    records = load_fixture_records("I")
    table = boxplot_table(records)
    ptrs = table["ptrs"]
    values = sorted(r.ptrs * 100 for r in records)
    assert ptrs.q1 == 0.0
    assert ptrs.median == pytest.approx((values[14] + values[15]) / 2, abs=1e-12)
    assert ptrs.minimum == 0.0
    assert ptrs.maximum == pytest.approx(26.31)
    # probability columns only summarize defined rows
    assert "prtrs" in table


def test_stats_block_on_single_record_marks_insufficient_n():
    record = compute_metrics((10, 8, 2), (4, 1), test_name="solo")
    block = stats_block([record])
    assert block["wilcoxon"]["pntrs_vs_ptrs"] == {"skipped": "insufficient n"}
    assert block["shapiro"]["pntrs"] == {"skipped": "insufficient n"}
    assert any("NOT EVALUATED" in line for line in block["claims"])


def test_stats_block_skips_all_zero_differences():
    records = [compute_metrics((4, 2, 2), (1, 1), test_name=f"r{i}")
               for i in range(5)]
    block = stats_block(records)
    # pntrs == ptrs in every record, so the paired test cannot run
    assert block["wilcoxon"]["pntrs_vs_ptrs"] == {"skipped": "all differences zero"}


def test_claim_lines_on_fixture_table():
    records = load_fixture_records("I")
    block = stats_block(records)
    claim1, claim2 = block["claims"]
    assert claim1.startswith("claim 1")
    assert "PASS" in claim1 and "significant difference" in claim1
    assert "no significant difference" in claim2
    assert "FAIL" in claim2


def test_bundle_write_is_deterministic_except_report(tmp_path):
    records = load_fixture_records("I")
    first = assemble_bundle("det", records, "source-text",
                            entry_statuses=[EntryStatus("a", True)])
    second = assemble_bundle("det", records, "source-text",
                             entry_statuses=[EntryStatus("a", True)])
    dir_a = tmp_path / "a"
    dir_b = tmp_path / "b"
    first.write(dir_a)
    second.write(dir_b)
    for name in ("metrics.csv", "means.csv", "stats.json", "boxplot.json"):
        assert (dir_a / name).read_bytes() == (dir_b / name).read_bytes()
    report_a = json.loads((dir_a / "report.json").read_text())
    report_b = json.loads((dir_b / "report.json").read_text())
    report_a["provenance"].pop("created_utc")
    report_b["provenance"].pop("created_utc")
    assert report_a == report_b


def test_bundle_files_exist_and_parse(tmp_path):
    records = load_fixture_records("II")
    bundle = assemble_bundle("files", records, "src")
    out = bundle.write(tmp_path / "out")
    stats = json.loads((out / "stats.json").read_text())
    assert "wilcoxon" in stats and "shapiro" in stats
    boxplot = json.loads((out / "boxplot.json").read_text())
    assert set(boxplot) >= {"pntrs", "ptrs"}
    report = json.loads((out / "report.json").read_text())
    assert report["records"] == 30
    assert report["provenance"]["tool"] == "redustat"
    assert len(report["provenance"]["config_hash"]) == 64


def test_empty_summaries_are_rejected():
    with pytest.raises(ValueError):
        five_number_summary([])
    with pytest.raises(ValueError):
        quantile([], 0.5)
    with pytest.raises(ValueError):
        quantile([1.0], 1.5)

"""Micro-benchmark harness tests (timing values themselves are not asserted)."""

from __future__ import annotations

import pytest

from cbrng.bench import bench_rows_csv, format_bench_table, micro_benchmark


def test_row_per_length():
    rows = micro_benchmark("philox", [1, 10, 100], repetitions=2)
    assert [r.length for r in rows] == [1, 10, 100]
    assert all(r.median_ns > 0 and r.words_per_second > 0 for r in rows)
    assert all(r.algorithm == "philox" for r in rows)


def test_large_stream_slower_in_total_time():
    rows = micro_benchmark("tyche", [1, 100_000], repetitions=3)
    assert rows[1].median_ns > rows[0].median_ns


def test_construction_cost_amortizes():
    rows = micro_benchmark("squares", [1, 1_000_000], repetitions=3)
    per_draw = [r.median_ns / r.length for r in rows]
    assert per_draw[1] < per_draw[0]


def test_invalid_arguments():
    with pytest.raises(ValueError):
        micro_benchmark("philox", [0], repetitions=1)
    with pytest.raises(ValueError):
        micro_benchmark("philox", [1], repetitions=0)
    with pytest.raises(ValueError):
        micro_benchmark("nonsense", [1])


def test_table_and_csv_render():
    rows = micro_benchmark("threefry", [1, 10], repetitions=1)
    table = format_bench_table(rows)
    assert "threefry" in table and "words/s" in table
    csv = bench_rows_csv(rows)
    assert csv.splitlines()[0] == "algorithm,length,median_ns,words_per_second"
    assert len(csv.splitlines()) == 3

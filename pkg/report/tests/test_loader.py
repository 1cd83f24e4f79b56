from pathlib import Path

import pytest

from skipreport import (
    EXPECTED_HEADER,
    BadHeaderError,
    MalformedRowError,
    load,
)

GOLDEN = Path(__file__).parent / "golden" / "results.csv"


def write(tmp_path, text):
    path = tmp_path / "input.csv"
    path.write_text(text)
    return path


def test_header_only_file_gives_zero_rows(tmp_path):
    assert load(write(tmp_path, EXPECTED_HEADER + "\n")) == []


def test_row_count_matches_line_count():
    rows = load(GOLDEN)
    assert len(rows) == len(GOLDEN.read_text().splitlines()) - 1


def test_field_parsing():
    rows = load(GOLDEN)
    first = rows[0]
    assert first.variant == "classic"
    assert first.workload == "uniform"
    assert first.ops == 4096
    assert first.actors == 1
    assert first.p99_latency_ns == 16384
    assert first.throughput_consistent


def test_shuffled_header_rejected(tmp_path):
    header = EXPECTED_HEADER.split(",")
    header[0], header[1] = header[1], header[0]
    path = write(tmp_path, ",".join(header) + "\n")
    with pytest.raises(BadHeaderError):
        load(path)


def test_truncated_header_rejected(tmp_path):
    with pytest.raises(BadHeaderError):
        load(write(tmp_path, EXPECTED_HEADER[: len(EXPECTED_HEADER) // 2] + "\n"))


def test_empty_file_rejected(tmp_path):
    with pytest.raises(BadHeaderError):
        load(write(tmp_path, ""))


def test_malformed_row_reports_line_number(tmp_path):
    path = write(
        tmp_path,
        EXPECTED_HEADER + "\n"
        "classic,uniform,100,1,1,1000,100.0,1.0,1,1,50\n"
        "classic,uniform,not-a-number,1,1,1000,100.0,1.0,1,1,50\n",
    )
    with pytest.raises(MalformedRowError) as excinfo:
        load(path)
    assert excinfo.value.line_number == 3


def test_short_row_reports_line_number(tmp_path):
    path = write(tmp_path, EXPECTED_HEADER + "\nclassic,uniform,100\n")
    with pytest.raises(MalformedRowError) as excinfo:
        load(path)
    assert excinfo.value.line_number == 2


def test_throughput_consistency_flag():
    rows = load(GOLDEN)
    drifted = [r for r in rows if r.workload == "drifted"]
    assert len(drifted) == 1
    assert not drifted[0].throughput_consistent
    assert all(r.throughput_consistent for r in rows if r.workload != "drifted")

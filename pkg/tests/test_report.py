"""Run reports: table rendering, CSV/JSON artifacts, the figure."""

import csv
import json

from ztc.report import (
    RunReport,
    RunRow,
    render_table,
    write_csv,
    write_figure,
    write_json,
    write_report_files,
)


def sample_report() -> RunReport:
    report = RunReport(fss=3, max_elements=10_000)
    report.add(
        RunRow(
            spec="Alpha",
            status="witness",
            explored=7,
            variables=2,
            atoms=3,
            elapsed_ms=1.25,
            bindings={"a": "1", "s": "{ 1, 2 }"},
        )
    )
    report.add(
        RunRow(
            spec="Beta",
            status="exhausted",
            explored=12,
            variables=1,
            atoms=2,
            elapsed_ms=0.5,
            detail="no candidate satisfies atom 1",
        )
    )
    report.add(
        RunRow(
            spec="Gamma",
            status="capped",
            explored=10_000,
            variables=8,
            atoms=10,
            elapsed_ms=900.0,
            warnings=("candidate explosion: trimmed",),
        )
    )
    return report


def test_all_witnessed_flag():
    report = sample_report()
    assert not report.all_witnessed
    only = RunReport(fss=3, max_elements=10)
    only.add(report.rows[0])
    assert only.all_witnessed


def test_table_lists_every_spec_aligned():
    text = render_table(sample_report())
    lines = text.splitlines()
    assert lines[0].split() == [
        "spec",
        "status",
        "explored",
        "variables",
        "atoms",
        "elapsed_ms",
    ]
    assert len({len(line) for line in lines if line.strip()}) <= 2
    for name in ("Alpha", "Beta", "Gamma"):
        assert any(line.startswith(name) for line in lines)


def test_json_totals_match_rows():
    d = sample_report().to_json_dict()
    assert d["totals"]["specs"] == len(d["specs"]) == 3
    assert d["totals"]["witnessed"] == 1
    assert d["totals"]["explored"] == sum(r["explored"] for r in d["specs"])
    assert d["fss"] == 3 and d["max"] == 10_000


def test_csv_round_trips(tmp_path):
    path = tmp_path / "run.csv"
    write_csv(sample_report(), path)
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["spec"] for r in rows] == ["Alpha", "Beta", "Gamma"]
    assert rows[1]["status"] == "exhausted"
    assert int(rows[2]["explored"]) == 10_000


def test_json_file_is_loadable(tmp_path):
    path = tmp_path / "run.json"
    write_json(sample_report(), path)
    with open(path) as fh:
        data = json.load(fh)
    assert data == sample_report().to_json_dict()


def test_figure_is_a_png(tmp_path):
    path = tmp_path / "run.png"
    write_figure(sample_report(), path)
    assert path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_write_report_files_places_all_three(tmp_path):
    paths = write_report_files(sample_report(), tmp_path / "out")
    assert sorted(p.name for p in paths.values()) == ["run.csv", "run.json", "run.png"]
    for p in paths.values():
        assert p.exists() and p.stat().st_size > 0


def test_artifacts_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    pa = write_report_files(sample_report(), a)
    pb = write_report_files(sample_report(), b)
    for kind in ("csv", "json", "figure"):
        assert pa[kind].read_bytes() == pb[kind].read_bytes(), kind

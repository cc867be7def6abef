"""Run reports: aligned tables, CSV, JSON and a rendered figure.

A report collects one row per specification processed in a run.  The
same rows feed four outputs so the CLI, files on disk and the figure
never disagree: a fixed-width table for terminals, ``run.csv`` and
``run.json`` for tooling, and ``run.png`` with explored-state counts
per specification, colored by outcome.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

STATUS_COLORS = {
    "witness": "#2a9d3f",
    "exhausted": "#e09f3e",
    "capped": "#c34a36",
    "error": "#888888",
}


@dataclass(frozen=True)
class RunRow:
    spec: str
    status: str  # witness | exhausted | capped | error
    explored: int
    variables: int
    atoms: int
    elapsed_ms: float
    bindings: dict | None = None
    warnings: tuple[str, ...] = ()
    detail: str = ""


@dataclass
class RunReport:
    fss: int
    max_elements: int
    rows: list[RunRow] = field(default_factory=list)

    def add(self, row: RunRow) -> None:
        self.rows.append(row)

    @property
    def all_witnessed(self) -> bool:
        return all(r.status == "witness" for r in self.rows)

    def to_json_dict(self) -> dict:
        return {
            "fss": self.fss,
            "max": self.max_elements,
            "totals": {
                "specs": len(self.rows),
                "witnessed": sum(r.status == "witness" for r in self.rows),
                "explored": sum(r.explored for r in self.rows),
                "elapsed_ms": round(sum(r.elapsed_ms for r in self.rows), 3),
            },
            "specs": [
                {
                    "spec": r.spec,
                    "status": r.status,
                    "explored": r.explored,
                    "variables": r.variables,
                    "atoms": r.atoms,
                    "elapsed_ms": round(r.elapsed_ms, 3),
                    "bindings": r.bindings,
                    "warnings": list(r.warnings),
                    "detail": r.detail,
                }
                for r in self.rows
            ],
        }


_COLUMNS = ("spec", "status", "explored", "variables", "atoms", "elapsed_ms")


def render_table(report: RunReport) -> str:
    """Fixed-width text table, one line per specification."""
    headers = list(_COLUMNS)
    body = [
        [
            r.spec,
            r.status,
            str(r.explored),
            str(r.variables),
            str(r.atoms),
            f"{r.elapsed_ms:.1f}",
        ]
        for r in report.rows
    ]
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in body)) if body else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)),
        "  ".join("-" * w for w in widths),
    ]
    for row in body:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)))
    return "\n".join(lines)


def write_csv(report: RunReport, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_COLUMNS + ("detail",))
        for r in report.rows:
            writer.writerow(
                [
                    r.spec,
                    r.status,
                    r.explored,
                    r.variables,
                    r.atoms,
                    f"{r.elapsed_ms:.3f}",
                    r.detail,
                ]
            )


def write_json(report: RunReport, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(report.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_figure(report: RunReport, path: str | Path) -> None:
    """Horizontal bars of explored-state counts, colored by outcome."""
    rows = report.rows
    height = max(2.0, 0.45 * len(rows) + 1.2)
    fig, ax = plt.subplots(figsize=(8, height))
    names = [r.spec for r in rows]
    counts = [r.explored for r in rows]
    colors = [STATUS_COLORS.get(r.status, "#888888") for r in rows]
    positions = range(len(rows))
    ax.barh(list(positions), counts, color=colors)
    ax.set_yticks(list(positions))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("explored bindings")
    ax.set_title(f"finite search, fss={report.fss} max={report.max_elements}")
    handles = [
        plt.Rectangle((0, 0), 1, 1, color=color)
        for status, color in STATUS_COLORS.items()
        if any(r.status == status for r in rows)
    ]
    labels = [s for s in STATUS_COLORS if any(r.status == s for r in rows)]
    if handles:
        ax.legend(handles, labels, fontsize=8, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def write_report_files(report: RunReport, directory: str | Path) -> dict[str, Path]:
    """Write run.csv, run.json and run.png into a directory."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "csv": directory / "run.csv",
        "json": directory / "run.json",
        "figure": directory / "run.png",
    }
    write_csv(report, paths["csv"])
    write_json(report, paths["json"])
    write_figure(report, paths["figure"])
    return paths

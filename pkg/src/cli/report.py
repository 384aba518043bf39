"""
Command reports and their two renderings.

A ``Report`` holds the command echo, the verdict and the evidence behind it:
scalar facts in ``details``, row tables in ``tables`` and coefficient
tensors in ``residuals`` (nested arrays of scalar strings).

- render_text:       human-readable, tables through pandas.
- render_structured: canonical JSON without timing, so re-runs match byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import Any

import pandas as pd

from src.repository.repository import dump_canonical


@dataclass
class Report:
    """Outcome of one command.

    Attributes:
        command: Subcommand name.
        args: The arguments the command ran with.
        verdict: True/False for checks, None for informational commands.
        details: Scalar facts (counts, flags, names).
        tables: Named lists of rows, one dict per row.
        residuals: Named coefficient tensors backing a failed verdict.
        elapsed: Wall time in seconds (text rendering only).
    """

    command: str
    args: dict[str, Any] = dataclass_field(default_factory=dict)
    verdict: bool | None = None
    details: dict[str, Any] = dataclass_field(default_factory=dict)
    tables: dict[str, list[dict]] = dataclass_field(default_factory=dict)
    residuals: dict[str, Any] = dataclass_field(default_factory=dict)
    elapsed: float | None = None

    @property
    def exit_code(self) -> int:
        return 1 if self.verdict is False else 0

    def to_structured(self) -> dict:
        return {
            "command": self.command,
            "args": self.args,
            "verdict": self.verdict,
            "details": self.details,
            "tables": self.tables,
            "residuals": self.residuals,
        }


def _verdict_label(verdict: bool | None) -> str:
    if verdict is None:
        return "n/a"
    return "PASS" if verdict else "FAIL"


def render_text(report: Report) -> str:
    args = " ".join(f"{k}={v}" for k, v in report.args.items() if v is not None)
    lines = [f"{report.command} {args}".rstrip(), f"verdict: {_verdict_label(report.verdict)}"]
    for key, value in report.details.items():
        lines.append(f"{key}: {value}")

    for name, rows in report.tables.items():
        lines.append("")
        lines.append(f"[{name}]")
        lines.append(pd.DataFrame(rows).to_string(index=False) if rows else "(empty)")

    for name, tensor in report.residuals.items():
        lines.append("")
        lines.append(f"residual {name}: {tensor}")

    if report.elapsed is not None:
        lines.append("")
        lines.append(f"elapsed: {report.elapsed:.3f}s")
    return "\n".join(lines) + "\n"


def render_structured(report: Report) -> str:
    return dump_canonical(report.to_structured())


RENDERERS = {"text": render_text, "structured": render_structured}

"""Plot-ready result tables in CSV or JSON-lines form.

Floats are written in fixed-width scientific notation (default 9 significant
digits) so repeated runs diff cleanly. Every table starts with metadata:
``# key=value`` comment lines in CSV, a ``{"meta": {...}}`` line in JSON.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field


def format_value(value, precision: int = 9) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return repr(value)
        return f"{value:.{precision - 1}e}"
    return str(value)


def _json_value(value, precision: int) -> str:
    if isinstance(value, float) and math.isfinite(value):
        return format_value(value, precision)
    if isinstance(value, (bool, int)) or value is None:
        return json.dumps(value)
    return json.dumps(str(value))


@dataclass
class ResultTable:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]

    def to_csv(self, precision: int = 9) -> str:
        buf = io.StringIO()
        for key, value in self.meta.items():
            buf.write(f"# {key}={format_value(value, precision)}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(format_value(v, precision) for v in row) + "\n")
        return buf.getvalue()

    def to_json_lines(self, precision: int = 9) -> str:
        lines = [_json_object({"meta": None}, precision, self.meta)]
        for row in self.rows:
            lines.append(_json_object(dict(zip(self.columns, row)), precision))
        return "\n".join(lines) + "\n"

    def render(self, fmt: str = "csv", precision: int = 9) -> str:
        if fmt == "csv":
            return self.to_csv(precision)
        if fmt == "json":
            return self.to_json_lines(precision)
        raise ValueError(f"unknown output format {fmt!r}")


def _json_object(obj: dict, precision: int, nested: dict | None = None) -> str:
    parts = []
    for key, value in obj.items():
        if nested is not None and value is None:
            inner = ", ".join(f"{json.dumps(k)}: {_json_value(v, precision)}" for k, v in nested.items())
            parts.append(f"{json.dumps(key)}: {{{inner}}}")
        else:
            parts.append(f"{json.dumps(key)}: {_json_value(value, precision)}")
    return "{" + ", ".join(parts) + "}"


def summary_lines(summary: dict, fmt: str, precision: int = 9) -> str:
    if fmt == "json":
        return _json_object({"summary": None}, precision, summary) + "\n"
    return "".join(f"# summary.{k}={format_value(v, precision)}\n" for k, v in summary.items())

"""Meterbench sweep result tables"""
# Copyright (C) 2026  meterbench contributors
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Mapping, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from meterbench.error import SweepFormatError

__all__ = [
    "OFFSET_COLUMN",
    "AuditRecord",
    "SweepResult",
    "format_number",
    "parse_number",
    "render_audits",
    "read_sweep",
]

OFFSET_COLUMN = "epsilon"
FORMATS = ("csv", "json")

Scalar = Union[bool, float]


def format_number(value: float) -> str:
    """Fixed 12-significant-digit scientific notation, ``inf`` for infinities."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    # -0.0 prints as zero
    return f"{value + 0.0:.11e}"


def parse_number(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SweepFormatError(f"'{text}' is not a number") from None


def _json_value(value: Scalar) -> Any:
    if isinstance(value, bool):
        return value
    if not math.isfinite(value):
        return format_number(value)
    return float(format_number(value))


def _scalar_text(value: Scalar) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return format_number(value)


def _scalar_from_text(text: str) -> Scalar:
    lowered = text.strip().lower()
    if lowered in {"true", "false"}:
        return lowered == "true"
    return parse_number(text)


class SweepResult(BaseModel):
    """Offsets, curve columns and the scalar block of one command run."""

    model_config = ConfigDict(frozen=True)

    scenario: str
    command: str
    columns: Dict[str, List[float]]
    scalars: Dict[str, Scalar] = {}

    @model_validator(mode="after")
    def _check_columns(self) -> "SweepResult":
        names = list(self.columns)
        if not names or names[0] != OFFSET_COLUMN:
            raise ValueError(f"first column must be '{OFFSET_COLUMN}', got {names[:1]}")
        lengths = {len(values) for values in self.columns.values()}
        if len(lengths) != 1:
            raise ValueError(f"columns have different lengths {sorted(lengths)}")
        return self

    @classmethod
    def build(
        cls,
        scenario: str,
        command: str,
        offsets: np.ndarray,
        curves: Mapping[str, np.ndarray],
        scalars: Mapping[str, Scalar],
    ) -> "SweepResult":
        columns = {OFFSET_COLUMN: [float(x) for x in offsets]}
        columns.update({name: [float(x) for x in values] for name, values in curves.items()})
        return cls(
            scenario=scenario,
            command=command,
            columns=columns,
            scalars={k: v if isinstance(v, bool) else float(v) for k, v in scalars.items()},
        )

    @property
    def offsets(self) -> np.ndarray:
        return np.asarray(self.columns[OFFSET_COLUMN], dtype=np.float64)

    @property
    def curves(self) -> Dict[str, np.ndarray]:
        return {
            name: np.asarray(values, dtype=np.float64)
            for name, values in self.columns.items()
            if name != OFFSET_COLUMN
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(self.columns))
        for row in zip(*self.columns.values()):
            writer.writerow([format_number(x) for x in row])

        buf.write("\n")
        writer.writerow(["quantity", "value"])
        writer.writerow(["scenario", self.scenario])
        writer.writerow(["command", self.command])
        for name, value in self.scalars.items():
            writer.writerow([name, _scalar_text(value)])
        return buf.getvalue()

    def to_json(self) -> str:
        payload = {
            "scenario": self.scenario,
            "command": self.command,
            "columns": {
                name: [_json_value(x) for x in values] for name, values in self.columns.items()
            },
            "scalars": {name: _json_value(value) for name, value in self.scalars.items()},
        }
        return json.dumps(payload, indent=2) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        return self.to_csv()

    @classmethod
    def from_csv(cls, text: str, source: str = "<memory>") -> "SweepResult":
        table, _, scalar_block = text.partition("\n\n")
        rows = [row for row in csv.reader(io.StringIO(table)) if row]
        if not rows:
            raise SweepFormatError(f"Sweep file '{source}' has no table header")

        header, body = rows[0], rows[1:]
        for lineno, row in enumerate(body, start=2):
            if len(row) != len(header):
                raise SweepFormatError(
                    f"Sweep file '{source}' line {lineno}: expected {len(header)} fields"
                )
        columns = {
            name: [parse_number(row[i]) for row in body] for i, name in enumerate(header)
        }

        scenario, command = Path(source).stem, "unknown"
        scalars: Dict[str, Scalar] = {}
        for row in csv.reader(io.StringIO(scalar_block)):
            if len(row) != 2 or row == ["quantity", "value"]:
                continue
            name, value = row
            if name == "scenario":
                scenario = value
            elif name == "command":
                command = value
            else:
                scalars[name] = _scalar_from_text(value)

        return cls._validated(source, scenario, command, columns, scalars)

    @classmethod
    def from_json(cls, text: str, source: str = "<memory>") -> "SweepResult":
        try:
            payload = json.loads(text)
            columns = {
                name: [parse_number(x) if isinstance(x, str) else x for x in values]
                for name, values in payload["columns"].items()
            }
            scalars = {
                name: parse_number(x) if isinstance(x, str) else x
                for name, x in payload.get("scalars", {}).items()
            }
            scenario, command = payload["scenario"], payload["command"]
        except (json.JSONDecodeError, KeyError, AttributeError, TypeError) as err:
            raise SweepFormatError(f"Sweep file '{source}' is malformed: {err}") from err

        return cls._validated(source, scenario, command, columns, scalars)

    @classmethod
    def _validated(
        cls, source: str, scenario: str, command: str, columns: Any, scalars: Any
    ) -> "SweepResult":
        try:
            return cls(scenario=scenario, command=command, columns=columns, scalars=scalars)
        except ValidationError as err:
            reason = err.errors()[0]["msg"]
            raise SweepFormatError(f"Sweep file '{source}' is malformed: {reason}") from err


def read_sweep(path: Union[str, Path]) -> SweepResult:
    """Reads a CSV or JSON sweep file, telling them apart by content."""
    source = str(path)
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise SweepFormatError(f"Cannot read sweep file '{source}': {err.strerror}") from err

    if not text.strip():
        raise SweepFormatError(f"Sweep file '{source}' is empty")
    if text.lstrip().startswith("{"):
        return SweepResult.from_json(text, source)
    return SweepResult.from_csv(text, source)


class AuditRecord(BaseModel):
    """Outcome of the three inequality audits on one scenario."""

    model_config = ConfigDict(frozen=True)

    scenario: str
    fisher: float
    qfi_bound: float
    qcrb_satisfied: bool
    min_gap: float
    d_geq_r_satisfied: bool
    delta_A: float
    c_A: float
    resolution_gap: float
    resolution_bound_satisfied: bool
    vacuous: bool

    @property
    def passed(self) -> bool:
        return self.qcrb_satisfied and self.d_geq_r_satisfied and self.resolution_bound_satisfied

    def row(self) -> Dict[str, Union[str, Scalar]]:
        data: Dict[str, Union[str, Scalar]] = dict(self.model_dump())
        data["passed"] = self.passed
        return data


def render_audits(records: List[AuditRecord], fmt: str = "csv") -> str:
    """One row per audited scenario followed by a pass count block."""
    passed = sum(record.passed for record in records)
    if fmt == "json":
        payload = {
            "command": "bounds",
            "records": [
                {k: v if isinstance(v, str) else _json_value(v) for k, v in r.row().items()}
                for r in records
            ],
            "scalars": {"scenarios": len(records), "passed": passed},
        }
        return json.dumps(payload, indent=2) + "\n"

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(AuditRecord.model_fields) + ["passed"])
    for record in records:
        writer.writerow(
            [v if isinstance(v, str) else _scalar_text(v) for v in record.row().values()]
        )
    buf.write("\n")
    writer.writerow(["quantity", "value"])
    writer.writerow(["scenarios", len(records)])
    writer.writerow(["passed", passed])
    return buf.getvalue()

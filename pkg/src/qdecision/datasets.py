"""Dataset ingestion, validation, and Table-style report generation.

File schema (CSV, UTF-8, header required):

    label,p0,p1,q0,observed_pk[,source]

``observed_pk`` may be empty; ``source`` is an optional free-text provenance
column.  A JSON mirror uses the same field names (a list of objects, or an
object with a ``records`` list).
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence

from .core import (
    TwoChoiceExperiment,
    classical_bounds,
    conditional_classical,
    quantum_bounds,
)
from .errors import (
    DuplicateLabelError,
    ParseError,
    SingularityError,
    UnsupportedFormatError,
    ValidationError,
)

CSV_FIELDS = ("label", "p0", "p1", "q0", "observed_pk")

#: published values from the source table, used only for discrepancy footnotes
PUBLISHED_TABLE = {
    "shafir": {"classical": 0.91, "q_lo": 0.02, "q_hi": 0.98},
    "croson": {"classical": 0.45, "q_lo": 0.03, "q_hi": 0.97},
    "li-taplin": {"classical": 0.75, "q_lo": 0.01, "q_hi": 0.99},
    "busemeyer": {"classical": 0.88, "q_lo": 0.00, "q_hi": 1.00},
}


def bundled_fixture_path() -> Path:
    """Path of the shipped four-experiment reference dataset."""
    return Path(str(resources.files("qdecision").joinpath("data/tversky1992.csv")))


@dataclass(frozen=True)
class ExperimentFile:
    """A validated collection of experiments plus per-record provenance."""

    records: tuple
    provenance: tuple

    def __len__(self) -> int:
        return len(self.records)

    def labels(self) -> tuple:
        return tuple(r.label for r in self.records)

    def get(self, label: str) -> TwoChoiceExperiment:
        for r in self.records:
            if r.label == label:
                return r
        raise ValidationError(
            f"no record labeled {label!r}; available: {', '.join(self.labels()) or '(none)'}"
        )


@dataclass(frozen=True)
class ReportRow:
    """One experiment's classical prediction, bounds, and membership flags."""

    label: str
    p0: float
    p1: float
    observed_pk: Optional[float]
    classical_pk: float
    classical_lo: float
    classical_hi: float
    quantum_lo: float
    quantum_hi: float
    sure_thing_violated: Optional[bool]
    within_quantum: Optional[bool]
    error: Optional[str] = None
    note: Optional[str] = None


def _parse_probability(field: str, raw: str, row: int) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ParseError(f"field {field!r} is not a number: {raw!r}", row=row, column=field)
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise ParseError(
            f"field {field!r} must lie in [0, 1], got {raw!r}", row=row, column=field
        )
    return value


def _record_from_fields(fields: dict, row: int, default_q0: float) -> TwoChoiceExperiment:
    label = str(fields.get("label", "") or "").strip()
    if not label:
        raise ParseError("empty label", row=row, column="label")
    try:
        raw_q0 = fields.get("q0")
        q0 = default_q0 if raw_q0 in (None, "") else _parse_probability("q0", str(raw_q0), row)
        raw_pk = fields.get("observed_pk")
        observed = None if raw_pk in (None, "") else _parse_probability("observed_pk", str(raw_pk), row)
        for name in ("p0", "p1"):
            if fields.get(name) in (None, ""):
                raise ParseError(f"missing field {name!r}", row=row, column=name)
        return TwoChoiceExperiment(
            label=label,
            p0=_parse_probability("p0", str(fields["p0"]), row),
            p1=_parse_probability("p1", str(fields["p1"]), row),
            q0=q0,
            observed_pk=observed,
        )
    except ParseError as e:
        raise ParseError(f"record {label!r}: {e.args[0]}", row=e.row, column=e.column) from None


def _build_file(rows: Sequence[dict], default_q0: float) -> ExperimentFile:
    records: List[TwoChoiceExperiment] = []
    provenance: List[str] = []
    seen = set()
    for i, fields in enumerate(rows, start=2):  # row 1 is the header
        rec = _record_from_fields(fields, i, default_q0)
        if rec.label in seen:
            raise DuplicateLabelError(f"duplicate label {rec.label!r} (row {i})")
        seen.add(rec.label)
        records.append(rec)
        provenance.append(str(fields.get("source", "") or ""))
    return ExperimentFile(records=tuple(records), provenance=tuple(provenance))


def load_experiments(path, default_q0: float = 0.5) -> ExperimentFile:
    """Load and validate a CSV or JSON experiment file."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix not in (".csv", ".json"):
        raise UnsupportedFormatError(
            f"unsupported experiment-file format {suffix!r}; expected .csv or .json"
        )
    text = path.read_text(encoding="utf-8")
    if suffix == ".json":
        return _load_json(text, default_q0)
    return _load_csv(text, default_q0)


def _load_csv(text: str, default_q0: float) -> ExperimentFile:
    stripped = text.strip()
    if not stripped:
        return ExperimentFile(records=(), provenance=())
    reader = csv.DictReader(io.StringIO(text))
    header = tuple(reader.fieldnames or ())
    if header[: len(CSV_FIELDS)] != CSV_FIELDS:
        raise ParseError(
            f"header must start with {','.join(CSV_FIELDS)!r}, got {','.join(header)!r}",
            row=1,
        )
    return _build_file(list(reader), default_q0)


def _load_json(text: str, default_q0: float) -> ExperimentFile:
    stripped = text.strip()
    if not stripped:
        return ExperimentFile(records=(), provenance=())
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e}", row=e.lineno) from e
    if isinstance(payload, dict):
        payload = payload.get("records", [])
    if not isinstance(payload, list):
        raise ParseError("JSON payload must be a list of records or {'records': [...]}")
    return _build_file([dict(item) for item in payload], default_q0)


def serialize_experiments(file: ExperimentFile, fmt: str = "csv") -> str:
    """Render an ExperimentFile back to its CSV or JSON schema at full precision."""
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        with_source = any(file.provenance)
        writer.writerow(CSV_FIELDS + ("source",) if with_source else CSV_FIELDS)
        for rec, src in zip(file.records, file.provenance):
            cells = [
                rec.label,
                repr(rec.p0),
                repr(rec.p1),
                repr(rec.q0),
                "" if rec.observed_pk is None else repr(rec.observed_pk),
            ]
            if with_source:
                cells.append(src)
            writer.writerow(cells)
        return out.getvalue()
    if fmt == "json":
        payload = [
            {
                "label": rec.label,
                "p0": rec.p0,
                "p1": rec.p1,
                "q0": rec.q0,
                "observed_pk": rec.observed_pk,
                "source": src,
            }
            for rec, src in zip(file.records, file.provenance)
        ]
        return json.dumps({"records": payload}, indent=2) + "\n"
    raise ValidationError(f"unknown serialization format {fmt!r}")


def report(file: ExperimentFile) -> List[ReportRow]:
    """One ReportRow per record; singularities annotate the row, not the batch."""
    rows: List[ReportRow] = []
    for rec in file.records:
        cl = conditional_classical(rec, 0)
        band = classical_bounds(rec, 0)
        try:
            qb = quantum_bounds(rec, 0).interval
            q_lo, q_hi, err = qb.lo, qb.hi, None
        except SingularityError as e:
            q_lo = q_hi = math.nan
            err = str(e)
        violated = within = None
        if rec.observed_pk is not None:
            violated = not band.contains(rec.observed_pk)
            within = (not math.isnan(q_lo)) and q_lo <= rec.observed_pk <= q_hi
        rows.append(
            ReportRow(
                label=rec.label,
                p0=rec.p0,
                p1=rec.p1,
                observed_pk=rec.observed_pk,
                classical_pk=cl,
                classical_lo=band.lo,
                classical_hi=band.hi,
                quantum_lo=q_lo,
                quantum_hi=q_hi,
                sure_thing_violated=violated,
                within_quantum=within,
                error=err,
                note=_discrepancy_note(rec.label, cl),
            )
        )
    return rows


def _discrepancy_note(label: str, classical: float) -> Optional[str]:
    published = PUBLISHED_TABLE.get(label)
    if published is None:
        return None
    if abs(classical - published["classical"]) > 0.0051:
        return (
            f"computed classical prediction {classical:.3f} differs from the "
            f"published value {published['classical']:.2f}; the published number "
            "is not reproduced by the arithmetic-mean formula with q0 = 0.5"
        )
    return None


def render_value(value: Optional[float], decimals: int = 2) -> str:
    """Half-up decimal rendering for display; full precision lives in the data."""
    if value is None:
        return "-"
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    q = Decimal(1).scaleb(-decimals)
    return str(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


def format_report(rows: Sequence[ReportRow], decimals: int = 2) -> str:
    """Plain-text table with one line per experiment and footnotes at the end."""
    header = (
        "label",
        "p0",
        "p1",
        "P_obs",
        "P_cl",
        "cl_lo",
        "cl_hi",
        "q_lo",
        "q_hi",
        "sure_thing_violated",
        "within_quantum",
    )
    table = [header]
    notes = []
    for i, row in enumerate(rows, start=1):
        flag = lambda v: "-" if v is None else ("yes" if v else "no")
        marker = f" [{len(notes) + 1}]" if row.note else ""
        table.append(
            (
                row.label + marker,
                render_value(row.p0, decimals),
                render_value(row.p1, decimals),
                render_value(row.observed_pk, decimals),
                render_value(row.classical_pk, decimals),
                render_value(row.classical_lo, decimals),
                render_value(row.classical_hi, decimals),
                render_value(row.quantum_lo, decimals),
                render_value(row.quantum_hi, decimals),
                flag(row.sure_thing_violated),
                flag(row.within_quantum),
            )
        )
        if row.note:
            notes.append(f"[{len(notes) + 1}] {row.label}: {row.note}")
    widths = [max(len(r[c]) for r in table) for c in range(len(header))]
    lines = [
        "  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in table
    ]
    lines[1:1] = ["  ".join("-" * w for w in widths)]
    lines.extend(notes)
    return "\n".join(lines) + "\n"


def report_csv(rows: Sequence[ReportRow]) -> str:
    """Machine-readable report: full-precision delimited output."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        (
            "label",
            "p0",
            "p1",
            "observed_pk",
            "classical_pk",
            "classical_lo",
            "classical_hi",
            "quantum_lo",
            "quantum_hi",
            "sure_thing_violated",
            "within_quantum",
        )
    )
    for row in rows:
        writer.writerow(
            [
                row.label,
                repr(row.p0),
                repr(row.p1),
                "" if row.observed_pk is None else repr(row.observed_pk),
                repr(row.classical_pk),
                repr(row.classical_lo),
                repr(row.classical_hi),
                repr(row.quantum_lo),
                repr(row.quantum_hi),
                "" if row.sure_thing_violated is None else str(row.sure_thing_violated).lower(),
                "" if row.within_quantum is None else str(row.within_quantum).lower(),
            ]
        )
    return out.getvalue()


def atomic_write(path, data: str) -> None:
    """Whole-file atomic write: temp file in the target directory, then rename."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(data, encoding="utf-8")
    os.replace(tmp, path)

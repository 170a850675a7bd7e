"""Parse and validate concern datasets and coder tables from CSV."""

from __future__ import annotations

import csv
import io
import logging
import re
from typing import BinaryIO, Literal

from pydantic import BaseModel, ConfigDict, model_validator

from app.core.errors import AuditError, DuplicateItemId, MalformedFile
from app.core.model import (
    AuditDataset,
    Concern,
    ExpertBallot,
    RootCause,
    normalize_probability,
    normalize_root_cause,
    normalize_severity,
    normalize_status,
    normalize_verdict,
)

logger = logging.getLogger(__name__)

REQUIRED_COLUMNS = (
    "id",
    "standard",
    "section",
    "quoted_text",
    "description",
    "root_cause",
    "probability",
    "severity",
)
OPTIONAL_COLUMNS = ("status", "root_cause_note")

# Columns that must hold a value on every row.
_NON_BLANK = ("id", "standard", "root_cause", "probability", "severity")

_EXPERT_COLUMN_RE = re.compile(r"^expert_[A-Za-z0-9]+$")


class Diagnostic(BaseModel):
    model_config = ConfigDict(frozen=True)

    row: int
    field: str
    code: str
    message: str
    level: Literal["error", "warning"] = "error"
    source: str | None = None


class IngestReport(BaseModel):
    rows_read: int = 0
    rows_accepted: int = 0
    diagnostics: list[Diagnostic] = []

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.level == "error"]

    @property
    def warnings(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.level == "warning"]

    @property
    def has_errors(self) -> bool:
        return bool(self.errors)

    def table_header(self) -> list[str]:
        return ["Source", "Row", "Field", "Level", "Code", "Message"]

    def table_rows(self) -> list[list]:
        return [[d.source or "", d.row, d.field, d.level, d.code, d.message] for d in self.diagnostics]


class CoderTable(BaseModel):
    """Items x coders grid of nominal codes; ``None`` marks a missing cell."""

    model_config = ConfigDict(frozen=True)

    item_ids: tuple[str, ...]
    coder_ids: tuple[str, ...]
    codes: tuple[tuple[str | None, ...], ...]

    @model_validator(mode="after")
    def _check_dimensions(self):
        if len(self.codes) != len(self.item_ids):
            raise ValueError(f"Expected {len(self.item_ids)} rows, got {len(self.codes)}")
        for item_id, row in zip(self.item_ids, self.codes):
            if len(row) != len(self.coder_ids):
                raise ValueError(f"Row '{item_id}' has {len(row)} cells, expected {len(self.coder_ids)}")
        return self

    def item_values(self) -> list[list[str]]:
        """Non-missing codes per item, in coder order."""
        return [[code for code in row if code is not None] for row in self.codes]


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _decode(source: bytes | str | BinaryIO) -> str:
    data = source.read() if hasattr(source, "read") else source
    if isinstance(data, str):
        return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise MalformedFile(f"Input is not valid UTF-8: {exc}") from exc


def _read_rows(text: str) -> list[list[str]]:
    try:
        return list(csv.reader(io.StringIO(text, newline=""), strict=True))
    except csv.Error as exc:
        raise MalformedFile(f"Unreadable CSV: {exc}") from exc


def _natural_key(name: str) -> list:
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name)]


def _is_known_column(name: str) -> bool:
    return name in REQUIRED_COLUMNS or name in OPTIONAL_COLUMNS or bool(_EXPERT_COLUMN_RE.match(name))


def _split_header(
    header: list[str], column_map: dict[str, str] | None
) -> tuple[list[str], list[Diagnostic]]:
    """Return canonical column names for *header* and any header diagnostics.

    Unknown columns, blank ones included, are ignored with one warning per
    distinct name, however often they repeat.

    Raises:
        MalformedFile: On a repeated known column or a missing required one.
    """
    column_map = {k.strip(): v.strip() for k, v in (column_map or {}).items()}
    columns = [column_map.get(name.strip(), name.strip()).lower() for name in header]

    known = [c for c in columns if _is_known_column(c)]
    duplicates = sorted({c for c in known if known.count(c) > 1})
    if duplicates:
        raise MalformedFile(f"Duplicate header columns: {', '.join(duplicates)}")

    missing = [c for c in REQUIRED_COLUMNS if c not in columns]
    if missing:
        raise MalformedFile(f"Header is missing required columns: {', '.join(missing)}")

    diagnostics = []
    for name in dict.fromkeys(c for c in columns if not _is_known_column(c)):
        shown = name or "(blank)"
        logger.warning(f"Ignoring unknown column '{shown}'")
        diagnostics.append(
            Diagnostic(
                row=0, field=shown, code="UnknownColumn",
                message=f"Unknown column '{shown}' ignored", level="warning",
            )
        )
    return columns, diagnostics


def _row_to_concern(
    record: dict[str, str], expert_columns: list[str], row_number: int
) -> tuple[Concern | None, list[Diagnostic]]:
    """Build one Concern from a CSV record, collecting every field error."""
    diagnostics: list[Diagnostic] = []

    def error(field: str, code: str, message: str) -> None:
        diagnostics.append(Diagnostic(row=row_number, field=field, code=code, message=message))

    for field in _NON_BLANK:
        if not record[field].strip():
            error(field, "MissingField", f"Required field '{field}' is blank")

    values: dict[str, object] = {}
    normalizers = (
        ("probability", normalize_probability),
        ("severity", normalize_severity),
        ("root_cause", normalize_root_cause),
    )
    for field, normalize in normalizers:
        if not record[field].strip():
            continue
        try:
            values[field] = normalize(record[field])
        except AuditError as exc:
            error(field, exc.code, str(exc))

    try:
        values["status"] = normalize_status(record.get("status"))
    except ValueError as exc:
        error("status", "UnknownStatus", str(exc))

    verdicts = {}
    for column in expert_columns:
        try:
            verdict = normalize_verdict(record[column])
        except ValueError as exc:
            error(column, "UnknownVerdict", str(exc))
            continue
        if verdict is not None:
            verdicts[column] = verdict

    if diagnostics:
        return None, diagnostics

    note = (record.get("root_cause_note") or "").strip() or None
    concern = Concern(
        id=record["id"].strip(),
        standard=record["standard"].strip(),
        section=record["section"].strip(),
        quoted_text=record["quoted_text"],
        description=record["description"],
        root_cause=RootCause(category=values["root_cause"], freeform_note=note),
        probability=values["probability"],
        severity=values["severity"],
        status=values["status"],
        ballot=ExpertBallot(verdicts=verdicts) if verdicts else None,
    )
    return concern, diagnostics


def _parse_concern_rows(
    source: bytes | str | BinaryIO,
    column_map: dict[str, str] | None,
) -> tuple[list[tuple[int, Concern]], IngestReport]:
    """Accepted concerns paired with their row numbers, plus the report."""
    rows = _read_rows(_decode(source))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise MalformedFile("Missing header row")

    columns, diagnostics = _split_header(rows[0], column_map)
    expert_columns = sorted((c for c in columns if _EXPERT_COLUMN_RE.match(c)), key=_natural_key)

    accepted: list[tuple[int, Concern]] = []
    seen_ids: set[str] = set()
    rows_read = 0
    for row_number, row in enumerate(rows[1:], start=1):
        if not any(cell.strip() for cell in row):
            continue
        rows_read += 1
        if len(row) != len(columns):
            diagnostics.append(
                Diagnostic(
                    row=row_number, field="*", code="FieldCount",
                    message=f"Expected {len(columns)} fields, found {len(row)}",
                )
            )
            continue

        record = dict(zip(columns, row))
        concern, row_diagnostics = _row_to_concern(record, expert_columns, row_number)
        diagnostics.extend(row_diagnostics)
        if concern is None:
            continue
        if concern.id in seen_ids:
            diagnostics.append(
                Diagnostic(
                    row=row_number, field="id", code="DuplicateId",
                    message=f"Duplicate concern id '{concern.id}'",
                )
            )
            continue
        seen_ids.add(concern.id)
        accepted.append((row_number, concern))

    report = IngestReport(rows_read=rows_read, rows_accepted=len(accepted), diagnostics=diagnostics)
    if report.has_errors:
        logger.warning(f"Ingest rejected {rows_read - len(accepted)} of {rows_read} rows")
    return accepted, report


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def parse_concerns(
    source: bytes | str | BinaryIO,
    column_map: dict[str, str] | None = None,
) -> tuple[AuditDataset, IngestReport]:
    """Parse a ConcernCSV stream into a dataset and an ingest report.

    Row numbers in diagnostics count the lines after the header from 1,
    blank lines included; header problems are reported on row 0. A row
    with any error-level diagnostic is dropped.

    Args:
        source: UTF-8 bytes, text, or a binary stream.
        column_map: Optional ``{source column: canonical column}`` renames
            for spreadsheet exports.

    Raises:
        MalformedFile: If the input is not UTF-8 CSV or the header is
            missing or incomplete.
    """
    accepted, report = _parse_concern_rows(source, column_map)
    return AuditDataset(concerns=tuple(c for _, c in accepted)), report


def write_concerns(dataset: AuditDataset) -> bytes:
    """Serialize *dataset* back to ConcernCSV (UTF-8, CRLF line endings)."""
    expert_columns = sorted(
        {expert for c in dataset.concerns if c.ballot for expert in c.ballot.verdicts},
        key=_natural_key,
    )
    buffer = io.StringIO(newline="")
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow([*REQUIRED_COLUMNS, *OPTIONAL_COLUMNS, *expert_columns])
    for c in dataset.concerns:
        verdicts = c.ballot.verdicts if c.ballot else {}
        writer.writerow([
            c.id,
            c.standard,
            c.section,
            c.quoted_text,
            c.description,
            c.root_cause.category.label,
            c.probability.label,
            c.severity.label,
            c.status.value,
            c.root_cause.freeform_note or "",
            *(verdicts[e].value if e in verdicts else "" for e in expert_columns),
        ])
    return buffer.getvalue().encode("utf-8")


def parse_coder_table(source: bytes | str | BinaryIO) -> CoderTable:
    """Parse a CoderCSV stream (``item_id,<coder>,...``); blank cells are missing.

    Raises:
        MalformedFile: On unreadable input, a missing header, no coder
            columns, duplicate coders, or ragged rows.
        DuplicateItemId: When an item id appears on more than one row.
    """
    rows = _read_rows(_decode(source))
    if not rows or not any(cell.strip() for cell in rows[0]):
        raise MalformedFile("Missing header row")

    header = [name.strip() for name in rows[0]]
    coder_ids = tuple(header[1:])
    if not coder_ids:
        raise MalformedFile("Coder table needs at least one coder column")
    if len(set(coder_ids)) != len(coder_ids):
        raise MalformedFile("Duplicate coder columns in header")

    item_ids: list[str] = []
    codes: list[tuple[str | None, ...]] = []
    for line_number, row in enumerate(rows[1:], start=1):
        if not any(cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise MalformedFile(f"Row {line_number} has {len(row)} fields, expected {len(header)}")
        item_id = row[0].strip()
        if not item_id:
            raise MalformedFile(f"Row {line_number} has a blank item_id")
        if item_id in item_ids:
            raise DuplicateItemId(f"Duplicate item_id '{item_id}' on row {line_number}")
        item_ids.append(item_id)
        codes.append(tuple(cell.strip() or None for cell in row[1:]))

    return CoderTable(item_ids=tuple(item_ids), coder_ids=coder_ids, codes=tuple(codes))


def parse_concern_files(
    sources: list[tuple[str, bytes]],
    column_map: dict[str, str] | None = None,
) -> tuple[AuditDataset, IngestReport]:
    """Parse several ConcernCSV files into one dataset, in the order given.

    Each diagnostic is tagged with the name of the file it came from. An id
    already accepted from an earlier file is reported as DuplicateId.

    Raises:
        MalformedFile: As :func:`parse_concerns`, naming the offending file.
    """
    concerns: list[Concern] = []
    seen_ids: set[str] = set()
    diagnostics: list[Diagnostic] = []
    rows_read = 0
    for name, data in sources:
        try:
            accepted, report = _parse_concern_rows(data, column_map)
        except MalformedFile as exc:
            raise MalformedFile(f"{name}: {exc}") from exc
        rows_read += report.rows_read
        diagnostics.extend(d.model_copy(update={"source": name}) for d in report.diagnostics)
        for row_number, concern in accepted:
            if concern.id in seen_ids:
                diagnostics.append(
                    Diagnostic(
                        row=row_number, field="id", code="DuplicateId", source=name,
                        message=f"Concern id '{concern.id}' already read from an earlier file",
                    )
                )
                continue
            seen_ids.add(concern.id)
            concerns.append(concern)

    merged = IngestReport(rows_read=rows_read, rows_accepted=len(concerns), diagnostics=diagnostics)
    return AuditDataset(concerns=tuple(concerns)), merged

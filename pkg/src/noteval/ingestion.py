"""Parsing and validation of the note-corpus CSV into datasets.

Input contract: RFC 4180 CSV, UTF-8 (optional BOM tolerated), mandatory
header row, LF or CRLF line endings. Required columns in any order
(case-insensitive): filename, description, mrn, note. Accepted aliases:
note_text / text for note, medical_record_number for mrn. An optional
true_origin column carries ground-truth authorship for discrimination
analysis; it is hidden from every evaluator-facing payload.
"""

from __future__ import annotations

import csv
import io
import uuid
from dataclasses import dataclass, field
from datetime import datetime

from .rubric import utc_now_second

REQUIRED_COLUMNS = ("filename", "description", "mrn", "note")
COLUMN_ALIASES = {
    "note_text": "note",
    "text": "note",
    "medical_record_number": "mrn",
    "true_origin": "true_origin",
}
GROUND_TRUTH_VALUES = ("human", "ai")

DEFAULT_MIN_NOTE_LENGTH = 20


class IngestError(Exception):
    """Base class for corpus-file parse failures."""

    code = "ingest_error"


class EmptyFileError(IngestError):
    code = "empty_file"

    def __init__(self):
        super().__init__("file is empty (no header row)")


class MissingColumnError(IngestError):
    code = "missing_column"

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"header lacks required column {name!r}")


class EmptyNoteError(IngestError):
    code = "empty_note"

    def __init__(self, row: int):
        self.row = row
        super().__init__(f"row {row}: note text is blank")


class DuplicateFilenameError(IngestError):
    code = "duplicate_filename"

    def __init__(self, name: str, rows: list[int]):
        self.name = name
        self.rows = rows
        super().__init__(
            f"filename {name!r} appears in rows {', '.join(map(str, rows))}"
        )


class MalformedCsvError(IngestError):
    code = "malformed_csv"

    def __init__(self, row: int, detail: str):
        self.row = row
        self.detail = detail
        super().__init__(f"row {row}: {detail}")


@dataclass(frozen=True)
class Document:
    """One clinical note under evaluation.

    ``true_origin`` is the verbatim ground-truth cell when the source file
    carried one; it never reaches an evaluation session payload.
    """

    id: str
    filename: str
    description: str
    mrn: str
    note_text: str
    true_origin: str | None = None

    @property
    def ground_truth_origin(self) -> str | None:
        """'human' or 'ai' when the stored ground truth is recognized."""
        if self.true_origin is None:
            return None
        value = self.true_origin.strip().lower()
        return value if value in GROUND_TRUTH_VALUES else None


@dataclass
class Dataset:
    dataset_id: str
    documents: list[Document]
    ingested_at: datetime
    warnings: list[str] = field(default_factory=list)

    def document_by_id(self, document_id: str) -> Document | None:
        for doc in self.documents:
            if doc.id == document_id:
                return doc
        return None


def new_id() -> str:
    return uuid.uuid4().hex


def parse_documents_csv(content: bytes) -> Dataset:
    """Parse a corpus file into a Dataset, preserving row order.

    Raises an IngestError subclass on the first structural problem;
    recoverable oddities (unknown columns, unrecognized ground-truth
    values, zero data rows) become entries in Dataset.warnings.
    """
    try:
        # utf-8-sig strips an optional BOM and is plain UTF-8 otherwise.
        text = content.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        row = content[: exc.start].count(b"\n") + 1
        raise MalformedCsvError(row, "file is not valid UTF-8") from exc

    if not text.strip():
        raise EmptyFileError()

    reader = csv.reader(io.StringIO(text, newline=""), strict=True)
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyFileError() from None
    except csv.Error as exc:
        raise MalformedCsvError(1, str(exc)) from exc

    warnings: list[str] = []
    columns: dict[int, str] = {}
    seen_fields: set[str] = set()
    for idx, raw_name in enumerate(header):
        name = raw_name.strip().lower()
        fld = COLUMN_ALIASES.get(name, name)
        if fld in REQUIRED_COLUMNS or fld == "true_origin":
            if fld in seen_fields:
                warnings.append(f"duplicate column {raw_name!r} ignored")
                continue
            seen_fields.add(fld)
            columns[idx] = fld
        else:
            warnings.append(f"unknown column {raw_name!r} ignored")
    for required in REQUIRED_COLUMNS:
        if required not in seen_fields:
            raise MissingColumnError(required)

    documents: list[Document] = []
    filename_rows: dict[str, int] = {}
    unrecognized_origins = 0
    row_num = 1
    while True:
        try:
            cells = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise MalformedCsvError(reader.line_num, str(exc)) from exc
        row_num += 1
        if not cells:  # blank line artifact
            continue
        if len(cells) != len(header):
            raise MalformedCsvError(
                row_num, f"expected {len(header)} fields, got {len(cells)}"
            )
        fields = {fld: cells[idx] for idx, fld in columns.items()}
        filename = fields["filename"].strip()
        if not filename:
            raise MalformedCsvError(row_num, "filename is empty")
        if filename in filename_rows:
            raise DuplicateFilenameError(
                filename, [filename_rows[filename], row_num]
            )
        filename_rows[filename] = row_num
        if not fields["note"].strip():
            raise EmptyNoteError(row_num)

        true_origin = fields.get("true_origin", "").strip() or None
        if true_origin is not None and true_origin.lower() not in GROUND_TRUTH_VALUES:
            unrecognized_origins += 1
        documents.append(
            Document(
                id=new_id(),
                filename=filename,
                description=fields["description"],
                mrn=fields["mrn"],
                note_text=fields["note"],
                true_origin=true_origin,
            )
        )

    if not documents:
        warnings.append("file contains a header but no document rows")
    if unrecognized_origins:
        # Values are withheld from the message so they cannot leak anywhere.
        warnings.append(
            f"{unrecognized_origins} row(s) carry a true_origin value other "
            "than human/ai; kept verbatim but unusable as ground truth"
        )
    return Dataset(
        dataset_id=new_id(),
        documents=documents,
        ingested_at=utc_now_second(),
        warnings=warnings,
    )


@dataclass(frozen=True)
class DatasetIssue:
    filename: str
    fld: str
    message: str
    severity: str = "warning"


@dataclass
class DatasetReport:
    issues: list[DatasetIssue]

    @property
    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for issue in self.issues:
            out[issue.severity] = out.get(issue.severity, 0) + 1
        return out

    @property
    def warning_count(self) -> int:
        return self.counts.get("warning", 0)


def validate_dataset(
    dataset: Dataset, min_note_length: int = DEFAULT_MIN_NOTE_LENGTH
) -> DatasetReport:
    """Report per-document quality issues. All issues are warnings;
    hard failures were already rejected at parse time."""
    issues: list[DatasetIssue] = []
    for doc in dataset.documents:
        if not doc.description.strip():
            issues.append(DatasetIssue(doc.filename, "description", "missing description"))
        if not doc.mrn.strip():
            issues.append(DatasetIssue(doc.filename, "mrn", "missing MRN"))
        if len(doc.note_text.strip()) < min_note_length:
            issues.append(
                DatasetIssue(
                    doc.filename,
                    "note",
                    f"note shorter than {min_note_length} characters",
                )
            )
    return DatasetReport(issues)

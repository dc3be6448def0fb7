"""Durable CSV storage for datasets, sessions, and evaluations.

Layout under the data directory:

    datasets.csv     dataset_id, ingested_at, document_count
    documents.csv    dataset_id, document_id, position, filename,
                     description, mrn, note_text, true_origin
    sessions.csv     session_id, evaluator_name, dataset_id, created_at,
                     document_order (document ids joined by spaces)
    evaluations.csv  session_id, dataset_id + the 16 export columns

The evaluations file is append-only; replacement semantics for repeated
(evaluator, document) submissions are applied at read time by keeping the
record with the latest timestamp (append order breaks ties). All writes
are funneled through one lock and fsynced, so a crash between operations
loses at most the torn final row, which readers skip and report.
"""

from __future__ import annotations

import csv
import io
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .ingestion import Dataset, Document
from .rubric import CRITERION_KEYS, Evaluation, OriginAssessment, total_score

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"

EXPORT_COLUMNS = (
    "filename",
    "description",
    "mrn",
    "evaluator",
    "timestamp",
    *CRITERION_KEYS,
    "total_score",
    "origin_assessment",
)
_EVALUATIONS_COLUMNS = ("session_id", "dataset_id", *EXPORT_COLUMNS)
_DOCUMENTS_COLUMNS = (
    "dataset_id",
    "document_id",
    "position",
    "filename",
    "description",
    "mrn",
    "note_text",
    "true_origin",
)
_DATASETS_COLUMNS = ("dataset_id", "ingested_at", "document_count")
_SESSIONS_COLUMNS = (
    "session_id",
    "evaluator_name",
    "dataset_id",
    "created_at",
    "document_order",
)


class StorageError(Exception):
    """Raised when the store cannot read or write its files."""


def format_timestamp(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    return datetime.strptime(text, TIMESTAMP_FORMAT).replace(tzinfo=timezone.utc)


@dataclass(frozen=True)
class StoredSession:
    session_id: str
    evaluator_name: str
    dataset_id: str
    created_at: datetime
    document_order: tuple[str, ...]


@dataclass(frozen=True)
class EvaluationRecord:
    """An effective evaluation joined with its document metadata."""

    session_id: str
    dataset_id: str
    document_id: str | None
    filename: str
    description: str
    mrn: str
    evaluator: str
    timestamp: datetime
    scores: dict[str, int]
    origin: OriginAssessment

    @property
    def total_score(self) -> int:
        return sum(self.scores.values())


@dataclass(frozen=True)
class CorruptRow:
    row: int  # record number in the file, header = row 1
    detail: str


@dataclass
class LoadReport:
    records: list[EvaluationRecord]
    corrupt_rows: list[CorruptRow]


class EvaluationStore:
    """Single-writer, file-backed store rooted at ``data_dir``."""

    def __init__(self, data_dir: str | os.PathLike):
        self.data_dir = Path(data_dir)
        try:
            self.data_dir.mkdir(parents=False, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot use data directory {self.data_dir}: {exc}") from exc
        self._write_lock = threading.RLock()

    # -- low-level file helpers -------------------------------------------

    def _path(self, name: str) -> Path:
        return self.data_dir / name

    def _append_rows(self, name: str, columns: tuple[str, ...], rows: list[list]):
        path = self._path(name)
        with self._write_lock:
            try:
                is_new = not path.exists()
                with open(path, "a", encoding="utf-8", newline="") as fh:
                    writer = csv.writer(fh)
                    if is_new:
                        writer.writerow(columns)
                    writer.writerows(rows)
                    fh.flush()
                    os.fsync(fh.fileno())
            except OSError as exc:
                raise StorageError(f"cannot append to {path}: {exc}") from exc

    def _read_rows(self, name: str) -> list[list[str]]:
        """All data rows (header dropped); [] when the file does not exist."""
        path = self._path(name)
        if not path.exists():
            return []
        try:
            with open(path, encoding="utf-8", newline="") as fh:
                rows = list(csv.reader(fh))
        except OSError as exc:
            raise StorageError(f"cannot read {path}: {exc}") from exc
        except csv.Error as exc:
            raise StorageError(f"cannot parse {path}: {exc}") from exc
        return rows[1:]

    # -- datasets -----------------------------------------------------------

    def save_dataset(self, dataset: Dataset):
        doc_rows = [
            [
                dataset.dataset_id,
                doc.id,
                str(position),
                doc.filename,
                doc.description,
                doc.mrn,
                doc.note_text,
                doc.true_origin or "",
            ]
            for position, doc in enumerate(dataset.documents)
        ]
        with self._write_lock:
            if doc_rows:
                self._append_rows("documents.csv", _DOCUMENTS_COLUMNS, doc_rows)
            # The dataset row lands last: a dataset is visible only once
            # all of its documents are durable.
            self._append_rows(
                "datasets.csv",
                _DATASETS_COLUMNS,
                [[
                    dataset.dataset_id,
                    format_timestamp(dataset.ingested_at),
                    str(len(dataset.documents)),
                ]],
            )

    def load_datasets(self) -> dict[str, Dataset]:
        docs_by_dataset: dict[str, list[tuple[int, Document]]] = {}
        for cells in self._read_rows("documents.csv"):
            if len(cells) != len(_DOCUMENTS_COLUMNS):
                continue
            dataset_id, doc_id, position, filename, description, mrn, note, origin = cells
            try:
                pos = int(position)
            except ValueError:
                continue
            docs_by_dataset.setdefault(dataset_id, []).append(
                (pos, Document(doc_id, filename, description, mrn, note, origin or None))
            )
        datasets: dict[str, Dataset] = {}
        for cells in self._read_rows("datasets.csv"):
            if len(cells) != len(_DATASETS_COLUMNS):
                continue
            dataset_id, ingested_at, _count = cells
            try:
                ingested = parse_timestamp(ingested_at)
            except ValueError:
                continue
            ordered = [doc for _, doc in sorted(docs_by_dataset.get(dataset_id, []))]
            datasets[dataset_id] = Dataset(dataset_id, ordered, ingested)
        return datasets

    def get_dataset(self, dataset_id: str) -> Dataset | None:
        return self.load_datasets().get(dataset_id)

    # -- sessions -----------------------------------------------------------

    def save_session(self, session: StoredSession):
        self._append_rows(
            "sessions.csv",
            _SESSIONS_COLUMNS,
            [[
                session.session_id,
                session.evaluator_name,
                session.dataset_id,
                format_timestamp(session.created_at),
                " ".join(session.document_order),
            ]],
        )

    def get_session(self, session_id: str) -> StoredSession | None:
        for cells in self._read_rows("sessions.csv"):
            if len(cells) != len(_SESSIONS_COLUMNS):
                continue
            if cells[0] != session_id:
                continue
            try:
                created = parse_timestamp(cells[3])
            except ValueError:
                continue
            return StoredSession(
                session_id=cells[0],
                evaluator_name=cells[1],
                dataset_id=cells[2],
                created_at=created,
                document_order=tuple(cells[4].split()),
            )
        return None

    # -- evaluations ----------------------------------------------------------

    def append_evaluation(
        self,
        evaluation: Evaluation,
        document: Document,
        session_id: str,
        dataset_id: str,
    ):
        self.append_evaluations([(evaluation, document, session_id, dataset_id)])

    def append_evaluations(
        self, batch: list[tuple[Evaluation, Document, str, str]]
    ):
        """Durably record a batch of evaluations in one synced write."""
        rows = []
        for evaluation, document, session_id, dataset_id in batch:
            rows.append(
                [
                    session_id,
                    dataset_id,
                    document.filename,
                    document.description,
                    document.mrn,
                    evaluation.evaluator_name,
                    format_timestamp(evaluation.timestamp),
                    *[str(evaluation.scores[key]) for key in CRITERION_KEYS],
                    str(total_score(evaluation)),
                    evaluation.origin.value,
                ]
            )
        self._append_rows("evaluations.csv", _EVALUATIONS_COLUMNS, rows)

    def _document_index(self) -> dict[tuple[str, str], str]:
        index: dict[tuple[str, str], str] = {}
        for dataset_id, dataset in self.load_datasets().items():
            for doc in dataset.documents:
                index[(dataset_id, doc.filename)] = doc.id
        return index

    def load_report(self) -> LoadReport:
        """Effective evaluations plus reports for skipped corrupt rows."""
        doc_index = self._document_index()
        effective: dict[tuple[str, str, str], EvaluationRecord] = {}
        corrupt: list[CorruptRow] = []
        for offset, cells in enumerate(self._read_rows("evaluations.csv")):
            row_num = offset + 2
            try:
                record = self._parse_evaluation_row(cells, doc_index)
            except ValueError as exc:
                corrupt.append(CorruptRow(row_num, str(exc)))
                continue
            key = (record.evaluator, record.dataset_id, record.filename)
            current = effective.get(key)
            if current is None or record.timestamp >= current.timestamp:
                effective[key] = record
        records = sorted(
            effective.values(), key=lambda r: (r.timestamp, r.filename)
        )
        return LoadReport(records, corrupt)

    def load_all(self) -> list[EvaluationRecord]:
        return self.load_report().records

    def _parse_evaluation_row(
        self, cells: list[str], doc_index: dict[tuple[str, str], str]
    ) -> EvaluationRecord:
        if len(cells) != len(_EVALUATIONS_COLUMNS):
            raise ValueError(
                f"expected {len(_EVALUATIONS_COLUMNS)} fields, got {len(cells)}"
            )
        row = dict(zip(_EVALUATIONS_COLUMNS, cells))
        if not row["filename"]:
            raise ValueError("filename is empty")
        if not row["evaluator"].strip():
            raise ValueError("evaluator is empty")
        try:
            timestamp = parse_timestamp(row["timestamp"])
        except ValueError:
            raise ValueError(f"bad timestamp {row['timestamp']!r}") from None
        scores: dict[str, int] = {}
        for key in CRITERION_KEYS:
            try:
                value = int(row[key])
            except ValueError:
                raise ValueError(f"score {key} is not an integer") from None
            if not 1 <= value <= 5:
                raise ValueError(f"score {key}={value} out of range")
            scores[key] = value
        try:
            stated_total = int(row["total_score"])
        except ValueError:
            raise ValueError("total_score is not an integer") from None
        if stated_total != sum(scores.values()):
            raise ValueError("total_score does not equal the score sum")
        try:
            origin = OriginAssessment.parse(row["origin_assessment"])
        except ValueError:
            raise ValueError(
                f"bad origin_assessment {row['origin_assessment']!r}"
            ) from None
        return EvaluationRecord(
            session_id=row["session_id"],
            dataset_id=row["dataset_id"],
            document_id=doc_index.get((row["dataset_id"], row["filename"])),
            filename=row["filename"],
            description=row["description"],
            mrn=row["mrn"],
            evaluator=row["evaluator"],
            timestamp=timestamp,
            scores=scores,
            origin=origin,
        )

    # -- export -----------------------------------------------------------

    def export_results_csv(self) -> bytes:
        """Results export: RFC 4180, UTF-8, fixed 16-column layout."""
        buffer = io.StringIO(newline="")
        writer = csv.writer(buffer)
        writer.writerow(EXPORT_COLUMNS)
        for record in self.load_all():
            writer.writerow(
                [
                    record.filename,
                    record.description,
                    record.mrn,
                    record.evaluator,
                    format_timestamp(record.timestamp),
                    *[str(record.scores[key]) for key in CRITERION_KEYS],
                    str(record.total_score),
                    record.origin.value,
                ]
            )
        return buffer.getvalue().encode("utf-8")

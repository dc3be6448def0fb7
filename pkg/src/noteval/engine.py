"""Per-evaluator session management: ordering, progress, submission.

Sessions walk a dataset note by note. The payload handed to a session
is always the blinded projection of a document: ground-truth origin is
stripped here and never re-enters any session-facing structure.
"""

from __future__ import annotations

import math
import random
import threading
from dataclasses import dataclass

from . import rubric
from .ingestion import Dataset, Document, new_id
from .storage import EvaluationStore, StoredSession


class SessionError(Exception):
    code = "session_error"


class UnknownSessionError(SessionError):
    code = "unknown_session"

    def __init__(self, session_id: str):
        super().__init__(f"no session with id {session_id!r}")


class UnknownDatasetError(SessionError):
    code = "unknown_dataset"

    def __init__(self, dataset_id: str):
        super().__init__(f"no dataset with id {dataset_id!r}")


class UnknownDocumentError(SessionError):
    code = "unknown_document"

    def __init__(self, document_id: str):
        super().__init__(f"no document with id {document_id!r} in this dataset")


class EmptyDatasetError(SessionError):
    code = "empty_dataset"

    def __init__(self):
        super().__init__("dataset has no documents to evaluate")


class BlankEvaluatorNameError(SessionError):
    code = "blank_evaluator_name"

    def __init__(self):
        super().__init__("evaluator name must not be blank")


@dataclass(frozen=True)
class Progress:
    completed_count: int
    total: int
    percent: int

    @classmethod
    def of(cls, completed_count: int, total: int) -> "Progress":
        # Round half away from zero; round() would give banker's rounding.
        percent = int(math.floor(100 * completed_count / total + 0.5))
        return cls(completed_count, total, percent)

    def describe(self) -> str:
        return (
            f"{self.completed_count} of {self.total} documents evaluated "
            f"({self.percent}%)"
        )


@dataclass(frozen=True)
class DocumentView:
    """Blinded projection of a document: exactly what evaluators may see."""

    id: str
    filename: str
    description: str
    mrn: str
    note_text: str

    @classmethod
    def of(cls, doc: Document) -> "DocumentView":
        return cls(doc.id, doc.filename, doc.description, doc.mrn, doc.note_text)


@dataclass(frozen=True)
class EvaluationSession:
    session_id: str
    evaluator_name: str
    dataset_id: str
    document_order: tuple[str, ...]
    completed: frozenset[str]

    @property
    def progress(self) -> Progress:
        return Progress.of(len(self.completed), len(self.document_order))


class EvaluationEngine:
    """Coordinates sessions against one store. Submissions are serialized."""

    def __init__(self, store: EvaluationStore):
        self.store = store
        self._submit_lock = threading.RLock()

    def start_session(
        self,
        evaluator_name: str,
        dataset_id: str,
        shuffle_seed: int | None = None,
    ) -> EvaluationSession:
        if not evaluator_name.strip():
            raise BlankEvaluatorNameError()
        dataset = self.store.get_dataset(dataset_id)
        if dataset is None:
            raise UnknownDatasetError(dataset_id)
        if not dataset.documents:
            raise EmptyDatasetError()
        order = [doc.id for doc in dataset.documents]
        if shuffle_seed is not None:
            random.Random(shuffle_seed).shuffle(order)
        stored = StoredSession(
            session_id=new_id(),
            evaluator_name=evaluator_name,
            dataset_id=dataset_id,
            created_at=rubric.utc_now_second(),
            document_order=tuple(order),
        )
        self.store.save_session(stored)
        return self._with_completed(stored)

    def get_session(self, session_id: str) -> EvaluationSession:
        stored = self.store.get_session(session_id)
        if stored is None:
            raise UnknownSessionError(session_id)
        return self._with_completed(stored)

    def _with_completed(self, stored: StoredSession) -> EvaluationSession:
        dataset = self.store.get_dataset(stored.dataset_id)
        by_filename = (
            {doc.filename: doc.id for doc in dataset.documents} if dataset else {}
        )
        completed = set()
        for record in self.store.load_all():
            if record.session_id != stored.session_id:
                continue
            doc_id = record.document_id or by_filename.get(record.filename)
            if doc_id is not None:
                completed.add(doc_id)
        return EvaluationSession(
            session_id=stored.session_id,
            evaluator_name=stored.evaluator_name,
            dataset_id=stored.dataset_id,
            document_order=stored.document_order,
            completed=frozenset(completed),
        )

    def current_document(self, session_id: str) -> DocumentView | None:
        """First unevaluated document in session order; None when all done."""
        session = self.get_session(session_id)
        dataset = self.store.get_dataset(session.dataset_id)
        if dataset is None:
            raise UnknownDatasetError(session.dataset_id)
        for doc_id in session.document_order:
            if doc_id in session.completed:
                continue
            doc = dataset.document_by_id(doc_id)
            if doc is not None:
                return DocumentView.of(doc)
        return None

    def submit_evaluation(
        self,
        session_id: str,
        document_id: str,
        raw_scores: dict,
        origin: rubric.OriginAssessment,
    ) -> Progress:
        """Persist one evaluation and return the session's new progress.

        Resubmitting a completed document replaces the stored record
        (latest timestamp wins) and leaves progress unchanged.
        """
        with self._submit_lock:
            session = self.get_session(session_id)
            dataset = self.store.get_dataset(session.dataset_id)
            if dataset is None:
                raise UnknownDatasetError(session.dataset_id)
            document = dataset.document_by_id(document_id)
            if document is None:
                raise UnknownDocumentError(document_id)
            evaluation = rubric.Evaluation(
                document_id=document_id,
                evaluator_name=session.evaluator_name,
                scores=rubric.validate_scores(raw_scores),
                origin=origin,
                timestamp=rubric.utc_now_second(),
            )
            self.store.append_evaluation(
                evaluation, document, session.session_id, session.dataset_id
            )
            completed = set(session.completed)
            completed.add(document_id)
            return Progress.of(len(completed), len(session.document_order))

    def progress(self, session_id: str) -> Progress:
        return self.get_session(session_id).progress

"""HTTP interface tying ingestion, sessions, storage, and analytics together.

JSON for structured endpoints, text/csv for the export. Every module
error maps to exactly one (status, code) pair; 4xx for caller faults,
5xx for storage failures. Session and results payloads never contain
ground-truth origin values.
"""

from __future__ import annotations

import logging
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import analytics
from .engine import (
    BlankEvaluatorNameError,
    EmptyDatasetError,
    EvaluationEngine,
    Progress,
    SessionError,
    UnknownDatasetError,
    UnknownDocumentError,
    UnknownSessionError,
)
from .ingestion import (
    DuplicateFilenameError,
    EmptyNoteError,
    IngestError,
    MalformedCsvError,
    MissingColumnError,
    parse_documents_csv,
)
from .rubric import CRITERION_KEYS, OriginAssessment, ScoreValidationError
from .storage import EvaluationStore, StorageError, format_timestamp

logger = logging.getLogger(__name__)

DEFAULT_PORT = 7860

_SESSION_ERROR_STATUS = {
    UnknownSessionError: 404,
    UnknownDatasetError: 404,
    UnknownDocumentError: 404,
    EmptyDatasetError: 400,
    BlankEvaluatorNameError: 400,
}


class ApiFault(Exception):
    """Carries an explicit (status, code, message) triple to the client."""

    def __init__(self, status: int, code: str, message: str, **extra):
        self.status = status
        self.code = code
        self.message = message
        self.extra = extra
        super().__init__(message)


def _fault_response(status: int, code: str, message: str, **extra) -> JSONResponse:
    body = {"code": code, "message": message}
    body.update(extra)
    return JSONResponse(status_code=status, content=body)


class SessionRequest(BaseModel):
    evaluator_name: str
    dataset_id: str
    shuffle_seed: int | None = None


class EvaluationRequest(BaseModel):
    document_id: str
    scores: dict[str, Any]
    origin: str


def _progress_json(progress: Progress) -> dict:
    return {
        "completed": progress.completed_count,
        "total": progress.total,
        "percent": progress.percent,
    }


def create_app(store: EvaluationStore, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="noteval", docs_url=None, redoc_url=None)
    engine = EvaluationEngine(store)

    @app.exception_handler(ApiFault)
    async def handle_fault(request: Request, exc: ApiFault):
        return _fault_response(exc.status, exc.code, exc.message, **exc.extra)

    @app.exception_handler(IngestError)
    async def handle_ingest_error(request: Request, exc: IngestError):
        extra = {}
        if isinstance(exc, MissingColumnError):
            extra["column"] = exc.name
        elif isinstance(exc, EmptyNoteError):
            extra["row"] = exc.row
        elif isinstance(exc, DuplicateFilenameError):
            extra["filename"] = exc.name
            extra["rows"] = exc.rows
        elif isinstance(exc, MalformedCsvError):
            extra["row"] = exc.row
            extra["detail"] = exc.detail
        return _fault_response(400, exc.code, str(exc), **extra)

    @app.exception_handler(SessionError)
    async def handle_session_error(request: Request, exc: SessionError):
        status = _SESSION_ERROR_STATUS.get(type(exc), 400)
        return _fault_response(status, exc.code, str(exc))

    @app.exception_handler(ScoreValidationError)
    async def handle_score_error(request: Request, exc: ScoreValidationError):
        first = exc.issues[0]
        return _fault_response(
            400,
            first.code,
            str(exc),
            field=first.key,
            issues=[
                {"code": i.code, "field": i.key, "value": i.value} for i in exc.issues
            ],
        )

    @app.exception_handler(StorageError)
    async def handle_storage_error(request: Request, exc: StorageError):
        logger.error("storage failure: %s", exc)
        return _fault_response(500, "storage_failure", str(exc))

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        logger.exception("unhandled error serving %s", request.url.path)
        return _fault_response(500, "internal_error", "internal server error")

    @app.post("/api/datasets", status_code=201)
    async def upload_dataset(request: Request):
        content_type = request.headers.get("content-type", "")
        if content_type.startswith("multipart/form-data"):
            form = await request.form()
            upload = next(
                (value for value in form.values() if hasattr(value, "read")), None
            )
            if upload is None:
                raise ApiFault(400, "empty_file", "multipart body carries no file")
            body = await upload.read()
        else:
            body = await request.body()
        if not body:
            raise ApiFault(400, "empty_file", "request body is empty")
        dataset = parse_documents_csv(body)
        store.save_dataset(dataset)
        return {
            "dataset_id": dataset.dataset_id,
            "document_count": len(dataset.documents),
            "warnings": dataset.warnings,
        }

    @app.post("/api/sessions", status_code=201)
    def start_session(body: SessionRequest):
        session = engine.start_session(
            body.evaluator_name, body.dataset_id, body.shuffle_seed
        )
        return {
            "session_id": session.session_id,
            "progress": _progress_json(session.progress),
        }

    @app.get("/api/sessions/{session_id}/next")
    def next_document(session_id: str):
        view = engine.current_document(session_id)
        progress = engine.progress(session_id)
        if view is None:
            return {"done": True, "progress": _progress_json(progress)}
        return {
            "done": False,
            "document": {
                "id": view.id,
                "filename": view.filename,
                "description": view.description,
                "mrn": view.mrn,
                "note_text": view.note_text,
            },
            "progress": _progress_json(progress),
        }

    @app.post("/api/sessions/{session_id}/evaluations")
    def submit_evaluation(session_id: str, body: EvaluationRequest):
        try:
            origin = OriginAssessment.parse(body.origin)
        except ValueError:
            raise ApiFault(
                400,
                "invalid_origin",
                f"origin must be one of human, ai, unsure; got {body.origin!r}",
            ) from None
        progress = engine.submit_evaluation(
            session_id, body.document_id, body.scores, origin
        )
        return {"progress": _progress_json(progress)}

    @app.get("/api/results")
    def results():
        entries = []
        for record in store.load_all():
            entry = {
                "filename": record.filename,
                "description": record.description,
                "mrn": record.mrn,
                "evaluator": record.evaluator,
                "timestamp": format_timestamp(record.timestamp),
            }
            entry.update({key: record.scores[key] for key in CRITERION_KEYS})
            entry["total_score"] = record.total_score
            entry["origin_assessment"] = record.origin.value
            entries.append(entry)
        return entries

    @app.get("/api/results/export")
    def export_results():
        return Response(
            content=store.export_results_csv(),
            media_type="text/csv",
            headers={
                "Content-Disposition": 'attachment; filename="evaluation_results.csv"'
            },
        )

    @app.get("/api/summary")
    def summary():
        return analytics.summary_report(store.load_all()).as_dict()

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

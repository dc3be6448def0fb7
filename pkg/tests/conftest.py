import random
from datetime import datetime, timezone

import pytest

from noteval.ingestion import Dataset, Document, new_id
from noteval.rubric import CRITERION_KEYS, Evaluation, OriginAssessment
from noteval.storage import EvaluationRecord, EvaluationStore

SAMPLE_CSV = (
    b"filename,description,mrn,note\n"
    b'note1.txt,"Primary Care Follow-up Visit",MRN12345678,'
    b'"Patient seen for routine follow-up. BP 138/82, stable weight."\n'
    b"note2.txt,Cardiology consult,MRN0002,Echo reviewed; EF preserved at 60%.\n"
    b"note3.txt,Discharge summary,MRN0003,Discharged home in stable condition.\n"
)


@pytest.fixture
def store(tmp_path):
    return EvaluationStore(tmp_path / "data")


@pytest.fixture
def sample_csv():
    return SAMPLE_CSV


def make_scores(fill=3, **overrides):
    scores = {key: fill for key in CRITERION_KEYS}
    scores.update(overrides)
    return scores


def random_scores(rng: random.Random):
    return {key: rng.randint(1, 5) for key in CRITERION_KEYS}


def make_evaluation(
    document_id="doc1",
    evaluator="alice",
    scores=None,
    origin=OriginAssessment.HUMAN,
    timestamp=None,
):
    return Evaluation(
        document_id=document_id,
        evaluator_name=evaluator,
        scores=scores if scores is not None else make_scores(),
        origin=origin,
        timestamp=timestamp or datetime(2025, 3, 7, 12, 0, 0, tzinfo=timezone.utc),
    )


def make_document(filename="note1.txt", **overrides):
    fields = dict(
        id=new_id(),
        filename=filename,
        description="Primary Care Follow-up Visit",
        mrn="MRN12345678",
        note_text="Patient seen for routine follow-up. Stable on current regimen.",
        true_origin=None,
    )
    fields.update(overrides)
    return Document(**fields)


def make_record(
    filename="note1.txt",
    evaluator="alice",
    scores=None,
    origin=OriginAssessment.HUMAN,
    timestamp=None,
    document_id=None,
    dataset_id="ds1",
):
    return EvaluationRecord(
        session_id="sess1",
        dataset_id=dataset_id,
        document_id=document_id or filename,
        filename=filename,
        description="desc",
        mrn="MRN1",
        evaluator=evaluator,
        timestamp=timestamp or datetime(2025, 3, 7, 12, 0, 0, tzinfo=timezone.utc),
        scores=scores if scores is not None else make_scores(),
        origin=origin,
    )


def make_dataset(documents, dataset_id=None):
    return Dataset(
        dataset_id=dataset_id or new_id(),
        documents=list(documents),
        ingested_at=datetime(2025, 3, 7, 11, 0, 0, tzinfo=timezone.utc),
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or not item.get_closest_marker("acceptance"):
        return
    terminal = item.config.pluginmanager.get_plugin("terminalreporter")
    if terminal is None:
        return
    doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
    status = "PASS" if report.passed else "FAIL"
    terminal.write_line(f"[acceptance] {doc}: {status}")

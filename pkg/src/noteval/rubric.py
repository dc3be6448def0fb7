"""PDQI-9 rubric, Likert scale, origin categories, and scoring arithmetic.

Everything here is pure and immutable; no I/O. Serialization of these
types is owned by the storage layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum

LIKERT_MIN = 1
LIKERT_MAX = 5
LIKERT_ANCHOR_LOW = "Not at all"
LIKERT_ANCHOR_HIGH = "Extremely"


@dataclass(frozen=True)
class RubricCriterion:
    """One of the nine note-quality criteria.

    ``key`` is the stable identifier used in data files and APIs;
    ``display_label`` is the canonical name; ``alt_label`` is an
    alternate evaluator-facing wording some deployments prefer.
    """

    ordinal: int
    key: str
    display_label: str
    description: str
    alt_label: str | None = None


_CRITERIA: tuple[RubricCriterion, ...] = (
    RubricCriterion(
        1,
        "up_to_date",
        "Up-to-date",
        "The note reflects the inclusion of the most recent patient information.",
    ),
    RubricCriterion(
        2,
        "accurate",
        "Accurate",
        "The note is factually correct and free of errors.",
    ),
    RubricCriterion(
        3,
        "thorough",
        "Thorough",
        "The note is complete and addresses all relevant patient issues.",
    ),
    RubricCriterion(
        4,
        "useful",
        "Useful",
        "The information is relevant and valuable for clinical decision-making.",
    ),
    RubricCriterion(
        5,
        "organized",
        "Organized",
        "The note is logically structured and well arranged.",
    ),
    RubricCriterion(
        6,
        "comprehensible",
        "Comprehensible",
        "The note is clear and easy to understand.",
    ),
    RubricCriterion(
        7,
        "succinct",
        "Succinct",
        "The note is brief, to the point, and without redundancy.",
        alt_label="Concise",
    ),
    RubricCriterion(
        8,
        "synthesized",
        "Synthesized",
        "The note integrates the available information into a coherent "
        "assessment and plan of care.",
        alt_label="Thoughtful",
    ),
    RubricCriterion(
        9,
        "internally_consistent",
        "Internally consistent",
        "No part of the note ignores or contradicts any other part.",
    ),
)

CRITERION_KEYS: tuple[str, ...] = tuple(c.key for c in _CRITERIA)

TOTAL_MIN = len(_CRITERIA) * LIKERT_MIN
TOTAL_MAX = len(_CRITERIA) * LIKERT_MAX


def rubric() -> tuple[RubricCriterion, ...]:
    """Return the nine criteria in ordinal order."""
    return _CRITERIA


class OriginAssessment(Enum):
    """Evaluator's judgment of who authored a note."""

    HUMAN = "human"
    AI = "ai"
    UNSURE = "unsure"

    @property
    def display(self) -> str:
        return _ORIGIN_DISPLAY[self]

    @classmethod
    def parse(cls, text: str) -> "OriginAssessment":
        """Parse a canonical value, display string, or accepted alias.

        Raises ValueError for anything outside the three categories.
        """
        normalized = str(text).strip().lower()
        try:
            return _ORIGIN_ALIASES[normalized]
        except KeyError:
            raise ValueError(f"not an origin assessment: {text!r}") from None


_ORIGIN_DISPLAY = {
    OriginAssessment.HUMAN: "Human written note",
    OriginAssessment.AI: "Generative AI note",
    OriginAssessment.UNSURE: "I am not sure",
}

_ORIGIN_ALIASES: dict[str, OriginAssessment] = {}
for _o in OriginAssessment:
    _ORIGIN_ALIASES[_o.value] = _o
    _ORIGIN_ALIASES[_o.display.lower()] = _o
_ORIGIN_ALIASES["unable to determine"] = OriginAssessment.UNSURE


@dataclass(frozen=True)
class ScoreIssue:
    """One violation found while validating a raw score map."""

    code: str  # missing_criterion | out_of_range | unknown_key
    key: str
    value: object | None = None

    @property
    def message(self) -> str:
        if self.code == "missing_criterion":
            return f"missing criterion {self.key!r}"
        if self.code == "out_of_range":
            return (
                f"score for {self.key!r} must be an integer in "
                f"[{LIKERT_MIN}, {LIKERT_MAX}], got {self.value!r}"
            )
        return f"unknown criterion key {self.key!r}"


class ScoreValidationError(ValueError):
    """Raised with the complete list of violations in a score map."""

    def __init__(self, issues: list[ScoreIssue]):
        self.issues = issues
        super().__init__("; ".join(issue.message for issue in issues))


def validate_scores(raw: dict) -> dict[str, int]:
    """Validate a raw criterion-key -> value map.

    Accepts iff all nine canonical keys are present, there are no extra
    keys, and every value is an integer in [1, 5]. Returns the validated
    map with keys in rubric order; otherwise raises ScoreValidationError
    naming every violation.
    """
    issues: list[ScoreIssue] = []
    for key in raw:
        if key not in CRITERION_KEYS:
            issues.append(ScoreIssue("unknown_key", str(key)))
    for key in CRITERION_KEYS:
        if key not in raw:
            issues.append(ScoreIssue("missing_criterion", key))
            continue
        value = raw[key]
        # bool is an int subtype; reject it explicitly.
        if (
            isinstance(value, bool)
            or not isinstance(value, int)
            or not LIKERT_MIN <= value <= LIKERT_MAX
        ):
            issues.append(ScoreIssue("out_of_range", key, value))
    if issues:
        raise ScoreValidationError(issues)
    return {key: raw[key] for key in CRITERION_KEYS}


@dataclass(frozen=True)
class Evaluation:
    """One evaluator's nine scores plus origin call for one document.

    Unconstructible when invalid: the constructor re-validates scores,
    so any held instance satisfies the type's invariants.
    """

    document_id: str
    evaluator_name: str
    scores: dict[str, int]
    origin: OriginAssessment
    timestamp: datetime

    def __post_init__(self):
        if not self.evaluator_name.strip():
            raise ValueError("evaluator_name must be nonempty")
        object.__setattr__(self, "scores", validate_scores(self.scores))
        if not isinstance(self.origin, OriginAssessment):
            raise TypeError("origin must be an OriginAssessment")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")


def total_score(evaluation: Evaluation) -> int:
    """Sum of the nine Likert values; always within [9, 45]."""
    return sum(evaluation.scores.values())


def utc_now_second() -> datetime:
    """Current UTC time truncated to whole seconds (storage precision)."""
    return datetime.now(timezone.utc).replace(microsecond=0)

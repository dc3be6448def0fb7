"""Aggregate statistics over stored evaluations.

Per-criterion summaries, total-score statistics, perceived-origin group
comparisons (Welch t-test, one-way ANOVA), quadratic-weighted Cohen's
kappa for inter-rater agreement, and an origin confusion matrix against
ground truth. Everything is a pure function over immutable snapshots.

p-values are computed from the regularized incomplete beta function,
evaluated with a continued fraction (modified Lentz), so no external
statistics library is required at runtime.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import statistics
from dataclasses import dataclass

from .rubric import CRITERION_KEYS, LIKERT_MAX, LIKERT_MIN, OriginAssessment


class StatsError(Exception):
    code = "stats_error"


class TooFewSamplesError(StatsError):
    code = "too_few_samples"


class TooFewGroupsError(StatsError):
    code = "too_few_groups"


class DegenerateVarianceError(StatsError):
    code = "degenerate_variance"


class LengthMismatchError(StatsError):
    code = "length_mismatch"


class TooFewItemsError(StatsError):
    code = "too_few_items"


class MissingGroundTruthError(StatsError):
    code = "missing_ground_truth"

    def __init__(self, document_ids: list[str]):
        self.document_ids = document_ids
        super().__init__(
            f"no recognized ground truth for document(s): {', '.join(document_ids)}"
        )


# -- special functions ------------------------------------------------------

_CF_MAX_ITERATIONS = 500
_CF_EPSILON = 3e-16
_CF_TINY = 1e-300


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITERATIONS + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPSILON:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    # Continued fraction converges fast on one side of the split point;
    # use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the other.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


def f_distribution_sf(f: float, df1: float, df2: float) -> float:
    x = df2 / (df2 + df1 * f)
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, x)


# -- summaries -------------------------------------------------------------


@dataclass(frozen=True)
class CriterionSummary:
    key: str
    n: int
    mean: float | None  # absent when n == 0
    sd: float | None  # absent when n < 2


def criterion_summaries(evaluations) -> list[CriterionSummary]:
    """One summary per rubric criterion, in ordinal order."""
    evaluations = list(evaluations)
    summaries = []
    for key in CRITERION_KEYS:
        values = [e.scores[key] for e in evaluations]
        n = len(values)
        mean = statistics.fmean(values) if n else None
        sd = statistics.stdev(values) if n >= 2 else None
        summaries.append(CriterionSummary(key, n, mean, sd))
    return summaries


def group_totals_by_origin(evaluations) -> dict[OriginAssessment, list[int]]:
    """Total scores partitioned by the evaluator's origin assessment."""
    groups: dict[OriginAssessment, list[int]] = {o: [] for o in OriginAssessment}
    for evaluation in evaluations:
        groups[evaluation.origin].append(sum(evaluation.scores.values()))
    return groups


# -- significance tests -----------------------------------------------------


@dataclass(frozen=True)
class WelchResult:
    t: float
    df: float
    p: float


def welch_t_test(group_a: list[float], group_b: list[float]) -> WelchResult:
    """Welch's unequal-variance t-test, two-sided."""
    na, nb = len(group_a), len(group_b)
    if na < 2 or nb < 2:
        raise TooFewSamplesError("each group needs at least 2 samples")
    mean_a, mean_b = statistics.fmean(group_a), statistics.fmean(group_b)
    var_a, var_b = statistics.variance(group_a), statistics.variance(group_b)
    if var_a == 0.0 and var_b == 0.0:
        raise DegenerateVarianceError("both groups are constant")
    sa, sb = var_a / na, var_b / nb
    t = (mean_a - mean_b) / math.sqrt(sa + sb)
    df = (sa + sb) ** 2 / (sa**2 / (na - 1) + sb**2 / (nb - 1))
    return WelchResult(t, df, student_t_two_sided_p(t, df))


@dataclass(frozen=True)
class AnovaResult:
    f: float
    df1: int
    df2: int
    p: float


def one_way_anova(groups: list[list[float]]) -> AnovaResult:
    """Standard one-way ANOVA decomposition over two or more groups."""
    if len(groups) < 2:
        raise TooFewGroupsError("at least 2 groups required")
    if any(len(g) < 2 for g in groups):
        raise TooFewSamplesError("each group needs at least 2 samples")
    n_total = sum(len(g) for g in groups)
    grand_mean = statistics.fmean(itertools.chain.from_iterable(groups))
    ss_between = sum(
        len(g) * (statistics.fmean(g) - grand_mean) ** 2 for g in groups
    )
    ss_within = sum(
        (x - statistics.fmean(g)) ** 2 for g in groups for x in g
    )
    if ss_within == 0.0:
        raise DegenerateVarianceError("zero within-group variance")
    df1 = len(groups) - 1
    df2 = n_total - len(groups)
    f = (ss_between / df1) / (ss_within / df2)
    return AnovaResult(f, df1, df2, f_distribution_sf(f, df1, df2))


# -- agreement --------------------------------------------------------------


def pairwise_weighted_kappa(
    ratings_a: list[int], ratings_b: list[int]
) -> float | None:
    """Quadratic-weighted Cohen's kappa over categories {1..5}.

    Returns None (undefined) when the expected disagreement is zero,
    e.g. both raters constant on the same category.
    """
    if len(ratings_a) != len(ratings_b):
        raise LengthMismatchError(
            f"rating lists differ in length: {len(ratings_a)} vs {len(ratings_b)}"
        )
    n = len(ratings_a)
    if n < 2:
        raise TooFewItemsError("at least 2 jointly rated items required")
    for value in itertools.chain(ratings_a, ratings_b):
        if not isinstance(value, int) or not LIKERT_MIN <= value <= LIKERT_MAX:
            raise ValueError(f"ratings must be integers in [1, 5], got {value!r}")

    categories = range(LIKERT_MIN, LIKERT_MAX + 1)
    observed = {(i, j): 0 for i in categories for j in categories}
    for a, b in zip(ratings_a, ratings_b):
        observed[(a, b)] += 1
    row = {i: sum(observed[(i, j)] for j in categories) for i in categories}
    col = {j: sum(observed[(i, j)] for i in categories) for j in categories}

    weighted_observed = 0.0
    weighted_expected = 0.0
    for i in categories:
        for j in categories:
            weight = (i - j) ** 2
            weighted_observed += weight * observed[(i, j)]
            weighted_expected += weight * row[i] * col[j] / n
    if weighted_expected == 0.0:
        return None
    return 1.0 - weighted_observed / weighted_expected


@dataclass(frozen=True)
class AgreementReport:
    """Mean pairwise weighted kappa per criterion over qualifying rater pairs."""

    per_criterion: dict[str, float | None]
    pair_count: int


def agreement_report(records) -> AgreementReport:
    """Pairwise agreement over evaluator pairs sharing >= 2 documents.

    ``records`` are effective evaluations carrying .evaluator, .dataset_id,
    .filename and .scores (one record per evaluator and document).
    """
    by_evaluator: dict[str, dict[tuple[str, str], dict[str, int]]] = {}
    for record in records:
        key = (record.dataset_id, record.filename)
        by_evaluator.setdefault(record.evaluator, {})[key] = record.scores

    kappas: dict[str, list[float]] = {key: [] for key in CRITERION_KEYS}
    pair_count = 0
    for name_a, name_b in itertools.combinations(sorted(by_evaluator), 2):
        docs_a, docs_b = by_evaluator[name_a], by_evaluator[name_b]
        shared = sorted(set(docs_a) & set(docs_b))
        if len(shared) < 2:
            continue
        pair_count += 1
        for key in CRITERION_KEYS:
            kappa = pairwise_weighted_kappa(
                [docs_a[doc][key] for doc in shared],
                [docs_b[doc][key] for doc in shared],
            )
            if kappa is not None:
                kappas[key].append(kappa)
    per_criterion = {
        key: statistics.fmean(values) if values else None
        for key, values in kappas.items()
    }
    return AgreementReport(per_criterion, pair_count)


# -- origin discrimination ----------------------------------------------------

TRUTH_LABELS = ("human", "ai")
ASSESSED_LABELS = ("human", "ai", "unsure")


@dataclass(frozen=True)
class OriginConfusion:
    """Counts of truth (rows) vs assessed origin (columns).

    Accuracy excludes 'unsure' assessments from its denominator and is
    None when every assessment was unsure.
    """

    matrix: dict[str, dict[str, int]]
    accuracy: float | None

    @property
    def total(self) -> int:
        return sum(sum(row.values()) for row in self.matrix.values())


def origin_confusion(evaluations, documents) -> OriginConfusion:
    """Tabulate assessed origin against ground truth.

    ``documents`` maps document_id -> Document (an iterable of documents
    is also accepted). Raises MissingGroundTruthError when any referenced
    document lacks a recognized human/ai ground truth.
    """
    if not isinstance(documents, dict):
        documents = {doc.id: doc for doc in documents}
    missing = []
    for evaluation in evaluations:
        doc = documents.get(evaluation.document_id)
        if doc is None or doc.ground_truth_origin is None:
            missing.append(evaluation.document_id or "<unknown>")
    if missing:
        raise MissingGroundTruthError(sorted(set(missing)))

    matrix = {truth: {label: 0 for label in ASSESSED_LABELS} for truth in TRUTH_LABELS}
    correct = 0
    decided = 0
    for evaluation in evaluations:
        truth = documents[evaluation.document_id].ground_truth_origin
        assessed = evaluation.origin.value
        matrix[truth][assessed] += 1
        if assessed != OriginAssessment.UNSURE.value:
            decided += 1
            if assessed == truth:
                correct += 1
    accuracy = correct / decided if decided else None
    return OriginConfusion(matrix, accuracy)


# -- bundled report -----------------------------------------------------------


@dataclass(frozen=True)
class TotalStats:
    n: int
    mean: float | None
    sd: float | None


def _total_stats(totals: list[int]) -> TotalStats:
    n = len(totals)
    return TotalStats(
        n,
        statistics.fmean(totals) if n else None,
        statistics.stdev(totals) if n >= 2 else None,
    )


@dataclass
class SummaryReport:
    evaluation_count: int
    evaluator_count: int
    document_count: int
    criteria: list[CriterionSummary]
    totals_overall: TotalStats
    totals_by_origin: dict[str, TotalStats]
    welch: WelchResult | None = None
    anova: AnovaResult | None = None
    agreement: AgreementReport | None = None

    def as_dict(self) -> dict:
        """Machine-readable structure served by the API and CLI."""
        return {
            "evaluation_count": self.evaluation_count,
            "evaluator_count": self.evaluator_count,
            "document_count": self.document_count,
            "criteria": [
                {"key": c.key, "n": c.n, "mean": c.mean, "sd": c.sd}
                for c in self.criteria
            ],
            "totals": {
                "overall": _stats_dict(self.totals_overall),
                "by_origin": {
                    label: _stats_dict(stats_)
                    for label, stats_ in self.totals_by_origin.items()
                },
            },
            "comparison": {
                "welch": (
                    {"t": self.welch.t, "df": self.welch.df, "p": self.welch.p}
                    if self.welch
                    else None
                ),
                "anova": (
                    {
                        "f": self.anova.f,
                        "df1": self.anova.df1,
                        "df2": self.anova.df2,
                        "p": self.anova.p,
                    }
                    if self.anova
                    else None
                ),
            },
            "agreement": (
                {
                    "pair_count": self.agreement.pair_count,
                    "per_criterion": dict(self.agreement.per_criterion),
                }
                if self.agreement
                else None
            ),
        }


def _stats_dict(stats_: TotalStats) -> dict:
    return {"n": stats_.n, "mean": stats_.mean, "sd": stats_.sd}


def summary_flat_csv(report: SummaryReport) -> bytes:
    """Flat CSV rendering of a SummaryReport.

    Columns: section,name,n,mean,sd,value. Criterion and totals rows fill
    n/mean/sd; scalar rows fill value; absent numbers are empty fields.
    Comparison and agreement rows appear only when those components exist.
    """

    def num(value) -> str:
        return "" if value is None else repr(value)

    buffer = io.StringIO(newline="")
    writer = csv.writer(buffer)
    writer.writerow(["section", "name", "n", "mean", "sd", "value"])
    writer.writerow(["counts", "evaluations", "", "", "", report.evaluation_count])
    writer.writerow(["counts", "evaluators", "", "", "", report.evaluator_count])
    writer.writerow(["counts", "documents", "", "", "", report.document_count])
    for summary in report.criteria:
        writer.writerow(
            ["criterion", summary.key, summary.n, num(summary.mean), num(summary.sd), ""]
        )
    overall = report.totals_overall
    writer.writerow(["totals", "overall", overall.n, num(overall.mean), num(overall.sd), ""])
    for label in ASSESSED_LABELS:
        stats_ = report.totals_by_origin[label]
        writer.writerow(["totals", label, stats_.n, num(stats_.mean), num(stats_.sd), ""])
    if report.welch is not None:
        writer.writerow(["comparison", "welch_t", "", "", "", repr(report.welch.t)])
        writer.writerow(["comparison", "welch_df", "", "", "", repr(report.welch.df)])
        writer.writerow(["comparison", "welch_p", "", "", "", repr(report.welch.p)])
    if report.anova is not None:
        writer.writerow(["comparison", "anova_f", "", "", "", repr(report.anova.f)])
        writer.writerow(["comparison", "anova_df1", "", "", "", report.anova.df1])
        writer.writerow(["comparison", "anova_df2", "", "", "", report.anova.df2])
        writer.writerow(["comparison", "anova_p", "", "", "", repr(report.anova.p)])
    if report.agreement is not None:
        writer.writerow(
            ["agreement", "pair_count", "", "", "", report.agreement.pair_count]
        )
        for key, value in report.agreement.per_criterion.items():
            writer.writerow(["agreement", key, "", "", "", num(value)])
    return buffer.getvalue().encode("utf-8")


def summary_report(records) -> SummaryReport:
    """Bundle every aggregate metric; components whose preconditions are
    not met are marked absent (None) rather than raising."""
    records = list(records)
    groups = group_totals_by_origin(records)
    human = groups[OriginAssessment.HUMAN]
    ai = groups[OriginAssessment.AI]
    unsure = groups[OriginAssessment.UNSURE]

    welch = None
    if len(human) >= 2 and len(ai) >= 2:
        try:
            welch = welch_t_test(human, ai)
        except StatsError:
            welch = None
    anova = None
    if all(len(g) >= 2 for g in (human, ai, unsure)):
        try:
            anova = one_way_anova([human, ai, unsure])
        except StatsError:
            anova = None
    agreement = agreement_report(records)
    if agreement.pair_count == 0:
        agreement = None

    return SummaryReport(
        evaluation_count=len(records),
        evaluator_count=len({r.evaluator for r in records}),
        document_count=len({(r.dataset_id, r.filename) for r in records}),
        criteria=criterion_summaries(records),
        totals_overall=_total_stats([t for g in groups.values() for t in g]),
        totals_by_origin={
            origin.value: _total_stats(groups[origin]) for origin in OriginAssessment
        },
        welch=welch,
        anova=anova,
        agreement=agreement,
    )

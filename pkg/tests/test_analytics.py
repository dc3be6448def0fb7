import itertools
import json
import math
import random
import statistics
from pathlib import Path

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import make_document, make_record, make_scores, random_scores
from noteval import analytics
from noteval.analytics import (
    DegenerateVarianceError,
    LengthMismatchError,
    MissingGroundTruthError,
    TooFewGroupsError,
    TooFewItemsError,
    TooFewSamplesError,
    criterion_summaries,
    group_totals_by_origin,
    one_way_anova,
    origin_confusion,
    pairwise_weighted_kappa,
    regularized_incomplete_beta,
    summary_flat_csv,
    summary_report,
    welch_t_test,
)
from noteval.rubric import CRITERION_KEYS, OriginAssessment

ORACLE = json.loads((Path(__file__).parent / "stats_oracle.json").read_text())


def brute_force_weighted_kappa(ratings_a, ratings_b):
    """Definition-level oracle: tabulate the full 5x5 observed and expected
    proportion matrices and apply the weighted-kappa formula directly."""
    n = len(ratings_a)
    observed = [[0.0] * 5 for _ in range(5)]
    for a, b in zip(ratings_a, ratings_b):
        observed[a - 1][b - 1] += 1.0 / n
    row = [sum(observed[i][j] for j in range(5)) for i in range(5)]
    col = [sum(observed[i][j] for i in range(5)) for j in range(5)]
    num = den = 0.0
    for i in range(5):
        for j in range(5):
            weight = (i - j) ** 2
            num += weight * observed[i][j]
            den += weight * row[i] * col[j]
    if den == 0.0:
        return None
    return 1.0 - num / den


def pooled_t_test(a, b):
    """Equal-variance two-sample t statistic (oracle for the ANOVA identity)."""
    na, nb = len(a), len(b)
    pooled_var = (
        (na - 1) * statistics.variance(a) + (nb - 1) * statistics.variance(b)
    ) / (na + nb - 2)
    t = (statistics.fmean(a) - statistics.fmean(b)) / math.sqrt(
        pooled_var * (1 / na + 1 / nb)
    )
    return t, na + nb - 2


class TestIncompleteBeta:
    @given(
        st.floats(0.5, 20),
        st.floats(0.5, 20),
        st.floats(0.001, 0.999),
    )
    @settings(max_examples=200, deadline=None)
    def test_reflection_identity(self, a, b, x):
        left = regularized_incomplete_beta(a, b, x)
        right = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x)
        assert abs(left - right) < 1e-12

    def test_edges(self):
        assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
        assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0

    def test_uniform_case_is_identity(self):
        # I_x(1, 1) = x
        for x in (0.1, 0.25, 0.5, 0.9):
            assert abs(regularized_incomplete_beta(1.0, 1.0, x) - x) < 1e-14

    def test_monotone_in_x(self):
        values = [
            regularized_incomplete_beta(2.5, 4.0, x / 20) for x in range(1, 20)
        ]
        assert values == sorted(values)


class TestWelch:
    def test_matches_frozen_oracle(self):
        for case in ORACLE["welch"]:
            result = welch_t_test(case["a"], case["b"])
            assert abs(result.t - case["t"]) < 1e-8
            assert abs(result.df - case["df"]) < 1e-8
            assert abs(result.p - case["p"]) < 1e-8

    def test_reference_case(self):
        # first oracle case is the fixed pair (28,30,35,41) vs (20,22,25)
        case = ORACLE["welch"][0]
        assert case["a"] == [28.0, 30.0, 35.0, 41.0]
        assert case["b"] == [20.0, 22.0, 25.0]
        result = welch_t_test(case["a"], case["b"])
        assert abs(result.t - case["t"]) < 1e-8

    def test_identical_groups(self):
        result = welch_t_test([30, 32, 34], [30, 32, 34])
        assert result.t == 0.0
        assert result.p == 1.0

    def test_degenerate_variance(self):
        with pytest.raises(DegenerateVarianceError):
            welch_t_test([9, 9, 9], [45, 45, 45])

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamplesError):
            welch_t_test([30], [20, 21])

    @given(
        st.lists(st.integers(9, 45), min_size=2, max_size=8),
        st.lists(st.integers(9, 45), min_size=2, max_size=8),
    )
    @settings(max_examples=100, deadline=None)
    def test_antisymmetry(self, a, b):
        assume(len(set(a)) > 1 or len(set(b)) > 1)
        fwd = welch_t_test(a, b)
        rev = welch_t_test(b, a)
        assert abs(fwd.t + rev.t) < 1e-12
        assert abs(fwd.p - rev.p) < 1e-12
        assert abs(fwd.df - rev.df) < 1e-12

    @given(
        st.lists(st.integers(9, 45), min_size=2, max_size=8),
        st.lists(st.integers(9, 45), min_size=2, max_size=8),
        st.integers(-50, 50),
    )
    @settings(max_examples=100, deadline=None)
    def test_translation_invariance(self, a, b, c):
        assume(len(set(a)) > 1 or len(set(b)) > 1)
        base = welch_t_test(a, b)
        shifted = welch_t_test([x + c for x in a], [x + c for x in b])
        assert abs(base.t - shifted.t) < 1e-9
        assert abs(base.df - shifted.df) < 1e-9
        assert abs(base.p - shifted.p) < 1e-9


class TestAnova:
    def test_matches_frozen_oracle(self):
        for case in ORACLE["anova"]:
            result = one_way_anova(case["groups"])
            assert result.df1 == case["df1"]
            assert result.df2 == case["df2"]
            assert abs(result.f - case["f"]) < 1e-8
            assert abs(result.p - case["p"]) < 1e-8

    def test_equal_means_give_zero_f(self):
        result = one_way_anova([[1, 5], [2, 4], [3, 3]])
        assert result.f == 0.0
        assert result.p == 1.0

    def test_two_groups_equals_pooled_t_squared(self):
        rng = random.Random(11)
        for _ in range(25):
            a = [rng.uniform(9, 45) for _ in range(rng.randint(2, 9))]
            b = [rng.uniform(9, 45) for _ in range(rng.randint(2, 9))]
            anova = one_way_anova([a, b])
            t, df = pooled_t_test(a, b)
            assert anova.df2 == df
            assert abs(anova.f - t * t) < 1e-9
            p_from_t = analytics.student_t_two_sided_p(t, df)
            assert abs(anova.p - p_from_t) < 1e-9

    def test_too_few_groups(self):
        with pytest.raises(TooFewGroupsError):
            one_way_anova([[1, 2, 3]])

    def test_too_few_samples(self):
        with pytest.raises(TooFewSamplesError):
            one_way_anova([[1, 2], [3]])

    def test_degenerate_variance(self):
        with pytest.raises(DegenerateVarianceError):
            one_way_anova([[2, 2], [5, 5]])


class TestWeightedKappa:
    def test_perfect_agreement(self):
        assert pairwise_weighted_kappa([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]) == 1.0

    def test_both_constant_undefined(self):
        assert pairwise_weighted_kappa([3, 3, 3], [3, 3, 3]) is None

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatchError):
            pairwise_weighted_kappa([1, 2], [1, 2, 3])

    def test_too_few_items(self):
        with pytest.raises(TooFewItemsError):
            pairwise_weighted_kappa([1], [2])

    def test_out_of_domain_rating(self):
        with pytest.raises(ValueError):
            pairwise_weighted_kappa([1, 6], [1, 2])

    def test_matches_brute_force_oracle(self):
        rng = random.Random(123)
        checked = 0
        for _ in range(150):
            n = rng.randint(2, 40)
            a = [rng.randint(1, 5) for _ in range(n)]
            b = [rng.randint(1, 5) for _ in range(n)]
            mine = pairwise_weighted_kappa(a, b)
            oracle = brute_force_weighted_kappa(a, b)
            if oracle is None:
                assert mine is None
            else:
                assert abs(mine - oracle) < 1e-12
                checked += 1
        assert checked >= 100

    @given(st.lists(st.tuples(st.integers(1, 5), st.integers(1, 5)), min_size=2, max_size=30))
    @settings(max_examples=100, deadline=None)
    def test_item_order_invariance(self, pairs):
        a = [p[0] for p in pairs]
        b = [p[1] for p in pairs]
        baseline = pairwise_weighted_kappa(a, b)
        shuffled = list(pairs)
        random.Random(0).shuffle(shuffled)
        permuted = pairwise_weighted_kappa(
            [p[0] for p in shuffled], [p[1] for p in shuffled]
        )
        if baseline is None:
            assert permuted is None
        else:
            assert abs(baseline - permuted) < 1e-12

    def test_kappa_never_exceeds_one(self):
        rng = random.Random(9)
        for _ in range(200):
            n = rng.randint(2, 15)
            a = [rng.randint(1, 5) for _ in range(n)]
            b = [rng.randint(1, 5) for _ in range(n)]
            kappa = pairwise_weighted_kappa(a, b)
            if kappa is not None:
                assert kappa <= 1.0


class TestCriterionSummaries:
    def test_single_evaluation(self):
        record = make_record(scores=make_scores(4, accurate=2))
        summaries = criterion_summaries([record])
        by_key = {s.key: s for s in summaries}
        assert by_key["accurate"].mean == 2.0
        assert by_key["useful"].mean == 4.0
        assert all(s.sd is None for s in summaries)
        assert all(s.n == 1 for s in summaries)

    def test_two_evaluations_spread(self):
        records = [
            make_record(evaluator="a", scores=make_scores(3, accurate=1)),
            make_record(evaluator="b", scores=make_scores(3, accurate=5)),
        ]
        by_key = {s.key: s for s in criterion_summaries(records)}
        assert by_key["accurate"].mean == 3.0
        assert abs(by_key["accurate"].sd - math.sqrt(8)) < 1e-12

    def test_empty_input(self):
        summaries = criterion_summaries([])
        assert [s.key for s in summaries] == list(CRITERION_KEYS)
        assert all(s.n == 0 and s.mean is None and s.sd is None for s in summaries)

    def test_matches_recomputation_oracle(self):
        rng = random.Random(77)
        records = [
            make_record(filename=f"n{i}.txt", scores=random_scores(rng))
            for i in range(200)
        ]
        summaries = {s.key: s for s in criterion_summaries(records)}
        for key in CRITERION_KEYS:
            values = [r.scores[key] for r in records]
            mean = sum(values) / len(values)
            sd = math.sqrt(
                sum((v - mean) ** 2 for v in values) / (len(values) - 1)
            )
            assert summaries[key].n == 200
            assert abs(summaries[key].mean - mean) < 1e-12
            assert abs(summaries[key].sd - sd) < 1e-12

    def test_mean_of_means_times_nine_is_mean_total(self):
        rng = random.Random(31)
        records = [
            make_record(filename=f"n{i}.txt", scores=random_scores(rng))
            for i in range(50)
        ]
        summaries = criterion_summaries(records)
        mean_of_means = statistics.fmean(s.mean for s in summaries)
        mean_total = statistics.fmean(sum(r.scores.values()) for r in records)
        assert abs(mean_of_means * 9 - mean_total) < 1e-9


class TestGroupTotals:
    def test_one_each(self):
        records = [
            make_record(filename="a", origin=OriginAssessment.HUMAN),
            make_record(filename="b", origin=OriginAssessment.AI),
            make_record(filename="c", origin=OriginAssessment.UNSURE),
        ]
        groups = group_totals_by_origin(records)
        assert all(len(v) == 1 for v in groups.values())
        assert groups[OriginAssessment.HUMAN] == [27]

    def test_empty(self):
        groups = group_totals_by_origin([])
        assert set(groups) == set(OriginAssessment)
        assert all(v == [] for v in groups.values())

    def test_sizes_match_counting_oracle(self):
        rng = random.Random(4)
        records = [
            make_record(
                filename=f"n{i}", origin=rng.choice(list(OriginAssessment))
            )
            for i in range(120)
        ]
        groups = group_totals_by_origin(records)
        for origin in OriginAssessment:
            expected = sum(1 for r in records if r.origin is origin)
            assert len(groups[origin]) == expected
        assert sum(len(v) for v in groups.values()) == len(records)


class TestOriginConfusion:
    def docs_with_truth(self, spec):
        return {
            doc_id: make_document(f"{doc_id}.txt", id=doc_id, true_origin=truth)
            for doc_id, truth in spec.items()
        }

    def test_all_correct(self):
        docs = self.docs_with_truth({"d1": "human", "d2": "ai"})
        records = [
            make_record(document_id="d1", origin=OriginAssessment.HUMAN),
            make_record(document_id="d2", origin=OriginAssessment.AI),
        ]
        result = origin_confusion(records, docs)
        assert result.accuracy == 1.0
        assert result.matrix["human"]["human"] == 1
        assert result.matrix["ai"]["ai"] == 1

    def test_all_unsure(self):
        docs = self.docs_with_truth({"d1": "human", "d2": "ai"})
        records = [
            make_record(document_id="d1", origin=OriginAssessment.UNSURE),
            make_record(document_id="d2", origin=OriginAssessment.UNSURE),
        ]
        result = origin_confusion(records, docs)
        assert result.accuracy is None
        assert result.matrix["human"]["unsure"] == 1
        assert result.matrix["ai"]["unsure"] == 1
        assert result.matrix["human"]["human"] == 0

    def test_missing_ground_truth(self):
        docs = self.docs_with_truth({"d1": "human"})
        records = [make_record(document_id="d2", origin=OriginAssessment.HUMAN)]
        with pytest.raises(MissingGroundTruthError) as err:
            origin_confusion(records, docs)
        assert err.value.document_ids == ["d2"]

    def test_matches_counting_oracle(self):
        rng = random.Random(55)
        truth_spec = {f"d{i}": rng.choice(["human", "ai"]) for i in range(30)}
        docs = self.docs_with_truth(truth_spec)
        records = [
            make_record(
                filename=f"d{i}",
                document_id=f"d{i}",
                evaluator=f"eval{j}",
                origin=rng.choice(list(OriginAssessment)),
            )
            for i in range(30)
            for j in range(2)
        ]
        result = origin_confusion(records, docs)
        for truth in ("human", "ai"):
            for assessed in ("human", "ai", "unsure"):
                expected = sum(
                    1
                    for r in records
                    if truth_spec[r.document_id] == truth
                    and r.origin.value == assessed
                )
                assert result.matrix[truth][assessed] == expected
        assert result.total == len(records)
        decided = [r for r in records if r.origin is not OriginAssessment.UNSURE]
        correct = sum(
            1 for r in decided if r.origin.value == truth_spec[r.document_id]
        )
        assert result.accuracy == correct / len(decided)


class TestSummaryReport:
    def test_empty_store(self):
        report = summary_report([])
        assert report.evaluation_count == 0
        assert report.evaluator_count == 0
        assert report.document_count == 0
        assert report.totals_overall.mean is None
        assert report.welch is None
        assert report.anova is None
        assert report.agreement is None

    def test_single_evaluator_three_documents(self):
        records = [
            make_record(filename=f"n{i}.txt", origin=OriginAssessment.HUMAN)
            for i in range(3)
        ]
        report = summary_report(records)
        assert report.evaluation_count == 3
        assert all(s.n == 3 for s in report.criteria)
        assert report.welch is None  # no AI-assessed group
        assert report.anova is None
        assert report.agreement is None  # single rater

    def test_two_raters_over_shared_documents(self):
        rng = random.Random(2024)
        origins = itertools.cycle(list(OriginAssessment))
        records = []
        for evaluator in ("alice", "bob"):
            for i in range(10):
                records.append(
                    make_record(
                        filename=f"n{i}.txt",
                        evaluator=evaluator,
                        scores=random_scores(rng),
                        origin=next(origins),
                    )
                )
        report = summary_report(records)
        assert report.evaluation_count == 20
        assert report.evaluator_count == 2
        assert report.document_count == 10

        # component-by-component independent recomputation
        totals = {o: [] for o in OriginAssessment}
        for r in records:
            totals[r.origin].append(sum(r.scores.values()))
        assert report.welch is not None
        expected_welch = welch_t_test(
            totals[OriginAssessment.HUMAN], totals[OriginAssessment.AI]
        )
        assert report.welch == expected_welch
        assert report.anova is not None
        expected_anova = one_way_anova(
            [
                totals[OriginAssessment.HUMAN],
                totals[OriginAssessment.AI],
                totals[OriginAssessment.UNSURE],
            ]
        )
        assert report.anova == expected_anova

        assert report.agreement is not None
        assert report.agreement.pair_count == 1
        alice = {r.filename: r.scores for r in records if r.evaluator == "alice"}
        bob = {r.filename: r.scores for r in records if r.evaluator == "bob"}
        shared = sorted(set(alice) & set(bob))
        for key in CRITERION_KEYS:
            oracle = brute_force_weighted_kappa(
                [alice[f][key] for f in shared], [bob[f][key] for f in shared]
            )
            reported = report.agreement.per_criterion[key]
            if oracle is None:
                assert reported is None
            else:
                assert abs(reported - oracle) < 1e-12

    def test_welch_absent_when_groups_too_small(self):
        records = [
            make_record(filename="a", origin=OriginAssessment.HUMAN),
            make_record(filename="b", origin=OriginAssessment.HUMAN),
            make_record(filename="c", origin=OriginAssessment.AI),
        ]
        report = summary_report(records)
        assert report.welch is None

    def test_degenerate_comparison_marked_absent(self):
        # both groups constant: precondition fails, component absent
        records = [
            make_record(filename="a", scores=make_scores(1), origin=OriginAssessment.HUMAN),
            make_record(filename="b", scores=make_scores(1), origin=OriginAssessment.HUMAN),
            make_record(filename="c", scores=make_scores(5), origin=OriginAssessment.AI),
            make_record(filename="d", scores=make_scores(5), origin=OriginAssessment.AI),
        ]
        report = summary_report(records)
        assert report.welch is None

    def test_as_dict_shape(self):
        report = summary_report([make_record()])
        payload = report.as_dict()
        assert payload["evaluation_count"] == 1
        assert len(payload["criteria"]) == 9
        assert payload["comparison"] == {"welch": None, "anova": None}
        assert payload["agreement"] is None
        assert payload["totals"]["overall"]["n"] == 1
        json.dumps(payload)  # must be JSON-serializable


class TestFlatCsv:
    def test_golden_layout(self):
        records = [
            make_record(
                filename="a.txt", scores=make_scores(2), origin=OriginAssessment.HUMAN
            ),
            make_record(
                filename="b.txt", scores=make_scores(4), origin=OriginAssessment.AI
            ),
        ]
        got = summary_flat_csv(summary_report(records)).decode("utf-8")
        expected_rows = [
            "section,name,n,mean,sd,value",
            "counts,evaluations,,,,2",
            "counts,evaluators,,,,1",
            "counts,documents,,,,2",
            *[f"criterion,{key},2,3.0,1.4142135623730951," for key in CRITERION_KEYS],
            "totals,overall,2,27.0,12.727922061357855,",
            "totals,human,1,18.0,,",
            "totals,ai,1,36.0,,",
            "totals,unsure,0,,,",
        ]
        assert got == "\r\n".join(expected_rows) + "\r\n"

    def test_comparison_and_agreement_rows_present_when_available(self):
        rng = random.Random(8)
        origins = itertools.cycle(list(OriginAssessment))
        records = [
            make_record(
                filename=f"n{i}.txt",
                evaluator=evaluator,
                scores=random_scores(rng),
                origin=next(origins),
            )
            for evaluator in ("alice", "bob")
            for i in range(6)
        ]
        text = summary_flat_csv(summary_report(records)).decode("utf-8")
        for name in ("welch_t", "welch_df", "welch_p", "anova_f", "anova_p", "pair_count"):
            assert any(line.split(",")[1] == name for line in text.splitlines())

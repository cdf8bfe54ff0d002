import pytest

from trajtext.ablate import AblationMode
from trajtext.errors import EmptyInput, LengthMismatch, MissingCategory
from trajtext.evalkit import (
    AMBIGUOUS,
    FIG2_MODALITY_SETS,
    MatrixAxes,
    NO_MATCH,
    ScoreOutcome,
    accuracy,
    featurize,
    keyword_score,
    modalities_key,
    predict_surrogate,
    run_experiment_matrix,
    train_surrogate,
)
from trajtext.model import (
    EnrichmentConfig,
    MissingPolicy,
    Modality,
    PerformanceCategory,
    TextExample,
)
from trajtext.verbalize import verbalize_output

AT = PerformanceCategory.AT_RISK
PR = PerformanceCategory.PRONE_TO_RISK
AV = PerformanceCategory.AVERAGE
OU = PerformanceCategory.OUTSTANDING


class TestKeywordScore:
    def test_template_sentence(self):
        out = keyword_score("At the end of the semester, the student will be outstanding.")
        assert out == ScoreOutcome.match(OU)

    def test_round_trip_all_categories(self):
        for c in PerformanceCategory:
            assert keyword_score(verbalize_output(c)) == ScoreOutcome.match(c)

    def test_no_keyword(self):
        assert keyword_score("the student did well") is NO_MATCH

    def test_two_keywords_ambiguous(self):
        assert keyword_score("average, maybe outstanding") is AMBIGUOUS

    def test_hyphen_aware_whole_tokens(self):
        out = keyword_score("the student will be prone-to-risk.")
        assert out == ScoreOutcome.match(PR)

    def test_repeated_same_keyword_still_matches(self):
        assert keyword_score("outstanding! truly outstanding.") == ScoreOutcome.match(OU)

    def test_case_insensitive(self):
        assert keyword_score("AT-RISK") == ScoreOutcome.match(AT)


class TestAccuracy:
    def test_round_trip_is_perfect(self):
        refs = [OU, AV, PR, AT]
        preds = [keyword_score(verbalize_output(c)) for c in refs]
        assert accuracy(preds, refs) == 1.0

    def test_all_no_match_scores_zero(self):
        assert accuracy([NO_MATCH] * 3, [OU, AV, PR]) == 0.0

    def test_three_of_four(self):
        preds = [ScoreOutcome.match(c) for c in (OU, AV, PR, PR)]
        assert accuracy(preds, [OU, AV, PR, AT]) == 0.75

    def test_ambiguous_counts_incorrect(self):
        assert accuracy([AMBIGUOUS], [OU]) == 0.0

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            accuracy([NO_MATCH], [OU, AV])

    def test_empty(self):
        with pytest.raises(EmptyInput):
            accuracy([], [])

    def test_invariant_under_pair_reordering(self):
        preds = [ScoreOutcome.match(c) for c in (OU, AV, PR, PR)]
        refs = [OU, AV, PR, AT]
        reordered = list(zip(preds, refs))[::-1]
        assert accuracy(preds, refs) == accuracy(
            [p for p, _ in reordered], [r for _, r in reordered]
        )


def toy_example(i, label, marker):
    return TextExample(
        example_id=f"t{i}",
        student_id=f"s{i}",
        input_text=f"the student wrote {marker} again {marker} today",
        output_text=verbalize_output(label),
        label=label,
    )


MARKERS = {OU: "zephyr", AV: "quartz", PR: "bramble", AT: "flint"}


def toy_corpus(n_per_class=4):
    out = []
    i = 0
    for label, marker in MARKERS.items():
        for _ in range(n_per_class):
            out.append(toy_example(i, label, marker))
            i += 1
    return out


class TestSurrogate:
    def test_separable_markers_perfect(self):
        model = train_surrogate(toy_corpus())
        for label, marker in MARKERS.items():
            assert predict_surrogate(model, f"something about {marker}") is label

    def test_training_deterministic(self):
        a = train_surrogate(toy_corpus())
        b = train_surrogate(toy_corpus())
        assert a.to_bytes() == b.to_bytes()

    def test_missing_category_rejected(self):
        corpus = [e for e in toy_corpus() if e.label is not AT]
        with pytest.raises(MissingCategory):
            train_surrogate(corpus)

    def test_oov_text_falls_back_to_priors(self):
        corpus = toy_corpus() + [toy_example(99, OU, "zephyr")]
        model = train_surrogate(corpus)
        assert predict_surrogate(model, "wholly unseen vocabulary") is OU

    def test_prior_tie_breaks_to_lowest_category(self):
        model = train_surrogate(toy_corpus())
        assert predict_surrogate(model, "wholly unseen vocabulary") is AT

    def test_bag_of_tokens_order_invariance(self):
        model = train_surrogate(toy_corpus())
        a = predict_surrogate(model, "today quartz wrote student")
        b = predict_surrogate(model, "student wrote quartz today")
        assert a is b is AV

    def test_label_shuffle_gives_chance(self):
        import random

        corpus = toy_corpus(n_per_class=8)
        accs = []
        for seed in range(10):
            rng = random.Random(seed)
            labels = [e.label for e in corpus]
            rng.shuffle(labels)
            shuffled = [
                TextExample(
                    example_id=e.example_id,
                    student_id=e.student_id,
                    input_text=e.input_text,
                    output_text=verbalize_output(lab),
                    label=lab,
                )
                for e, lab in zip(corpus, labels)
            ]
            model = train_surrogate(shuffled)
            preds = [
                ScoreOutcome.match(predict_surrogate(model, e.input_text)) for e in corpus
            ]
            accs.append(accuracy(preds, [e.label for e in corpus]))
        mean = sum(accs) / len(accs)
        assert 0.15 <= mean <= 0.35


class TestFeaturize:
    def test_plain_mode_is_lowercased_tokens(self):
        assert featurize("The scores are 1.") == ["the", "scores", "are", "1", "."]

    def test_context_mode_consumes_tags_and_marks_tokens(self):
        feats = featurize("In week 2, On Monday, I studied.", temporal_context=True)
        assert feats == ["w2|i", "w2|studied", "w2|."]

    def test_context_mode_without_tags_matches_plain(self):
        text = "the student wrote zephyr today"
        assert featurize(text, temporal_context=True) == featurize(text)

    def test_context_persists_until_next_week_tag(self):
        feats = featurize("In week 1, alpha In week 3, beta", temporal_context=True)
        assert feats == ["w1|alpha", "w3|beta"]


@pytest.fixture(scope="module")
def small_report(strong_signal_cohort):
    axes = MatrixAxes(
        modality_sets=(frozenset({Modality.COGNITIVE}),),
        horizons=(2,),
        ablation_modes=(AblationMode.NO_RANDOMIZATION, AblationMode.FULL),
    )
    return run_experiment_matrix(
        strong_signal_cohort, EnrichmentConfig(master_seed=101), axes, n_seeds=2
    )


class TestExperimentMatrix:
    def test_row_count_and_header(self, small_report):
        assert len(small_report.rows) == 2
        csv_text = small_report.to_csv()
        assert csv_text.splitlines()[0] == (
            "modalities,horizon,ablation,missing_policy,seed_count,n_test,"
            "accuracy_mean,accuracy_std"
        )

    def test_fig2_axes_cell_count(self):
        axes = MatrixAxes(modality_sets=FIG2_MODALITY_SETS, horizons=(2, 3, 4))
        assert len(list(axes.cells())) == 15

    def test_single_seed_has_zero_std(self, strong_signal_cohort):
        axes = MatrixAxes(
            modality_sets=(frozenset({Modality.BACKGROUND}),), horizons=(2,)
        )
        report = run_experiment_matrix(
            strong_signal_cohort, EnrichmentConfig(master_seed=101), axes, n_seeds=1
        )
        assert report.rows[0].accuracy_std == 0.0

    def test_repeat_runs_byte_identical(self, strong_signal_cohort, small_report):
        axes = MatrixAxes(
            modality_sets=(frozenset({Modality.COGNITIVE}),),
            horizons=(2,),
            ablation_modes=(AblationMode.NO_RANDOMIZATION, AblationMode.FULL),
        )
        again = run_experiment_matrix(
            strong_signal_cohort, EnrichmentConfig(master_seed=101), axes, n_seeds=2
        )
        assert again.to_csv() == small_report.to_csv()

    def test_parallel_jobs_match_serial(self, strong_signal_cohort, small_report):
        axes = MatrixAxes(
            modality_sets=(frozenset({Modality.COGNITIVE}),),
            horizons=(2,),
            ablation_modes=(AblationMode.NO_RANDOMIZATION, AblationMode.FULL),
        )
        parallel = run_experiment_matrix(
            strong_signal_cohort,
            EnrichmentConfig(master_seed=101),
            axes,
            n_seeds=2,
            jobs=2,
        )
        assert parallel.to_csv() == small_report.to_csv()

    def test_modalities_key_order(self):
        assert modalities_key(frozenset(Modality)) == "NC+C+B"
        assert modalities_key(frozenset({Modality.BACKGROUND})) == "B"


def test_empty_axes_rejected():
    with pytest.raises(ValueError):
        MatrixAxes(modality_sets=(), horizons=(2,))


def test_missing_policy_axis_keys():
    from trajtext.evalkit import policy_key

    assert policy_key(MissingPolicy.skipped()) == "skipped"
    assert policy_key(MissingPolicy.generic_na()) == "na"
    assert policy_key(MissingPolicy.custom("Hello, World!")) == "custom:Hello, World!"

import pytest

from trajtext.augment import (
    PAPER_SHAPE_TARGETS,
    SynonymLexicon,
    augment,
    default_targets,
    load_lexicon,
    parse_lexicon,
    plan_balance,
    synonym_replace,
)
from trajtext.enrich import estimate_tokens
from trajtext.errors import EmptyCategory, TargetBelowCurrent
from trajtext.model import PerformanceCategory, Provenance, TextExample
from trajtext.verbalize import verbalize_output

AT = PerformanceCategory.AT_RISK
PR = PerformanceCategory.PRONE_TO_RISK
AV = PerformanceCategory.AVERAGE
OU = PerformanceCategory.OUTSTANDING


def example(i, label, text="The student is happy today"):
    return TextExample(
        example_id=f"ex-{label.value}-{i}",
        student_id=f"s{i:03d}",
        input_text=text,
        output_text=verbalize_output(label),
        label=label,
    )


def paper_shaped_examples():
    out = []
    i = 0
    for label, count in ((OU, 24), (AV, 12), (PR, 6), (AT, 6)):
        for _ in range(count):
            i += 1
            out.append(example(i, label, text=f"I studied carefully in session {i}."))
    return out


class TestPlanBalance:
    def test_paper_distribution(self):
        plan = plan_balance(
            {OU: 24, AV: 12, PR: 6, AT: 6}, {OU: 48, AV: 36, PR: 30, AT: 30}
        )
        dup = {c: e.n_duplicates for c, e in plan.per_category.items()}
        assert dup == {OU: 24, AV: 24, PR: 24, AT: 24}
        assert plan.total_target == 144

    def test_identity(self):
        plan = plan_balance({OU: 5, AV: 5, PR: 5, AT: 5}, {OU: 5, AV: 5, PR: 5, AT: 5})
        assert all(e.n_duplicates == 0 for e in plan.per_category.values())

    def test_target_below_current(self):
        with pytest.raises(TargetBelowCurrent):
            plan_balance({AT: 5}, {AT: 3})


class TestDefaultTargets:
    def test_paper_shape_gets_paper_targets(self):
        assert default_targets({OU: 24, AV: 12, PR: 6, AT: 6}) == PAPER_SHAPE_TARGETS

    def test_other_shapes_fully_balance(self):
        assert default_targets({OU: 10, AV: 7, PR: 3, AT: 2}) == {
            OU: 10,
            AV: 10,
            PR: 10,
            AT: 10,
        }


class TestSynonymReplace:
    LEX = SynonymLexicon(entries={"happy": ("glad",), "studied": ("reviewed",)})

    def test_forced_replacement(self):
        out = synonym_replace("The student is happy today", self.LEX, rate=1.0, seed=1)
        assert out == "The student is glad today"

    def test_rate_zero_is_identity(self):
        text = "The student is happy today"
        assert synonym_replace(text, self.LEX, rate=0.0, seed=1) == text

    def test_protected_tokens_never_replaced(self):
        lex = SynonymLexicon(entries={"fine": ("okay",)})
        text = "outstanding at-risk prone-to-risk average fine"
        out = synonym_replace(text, lex, rate=1.0, seed=1)
        assert out == "outstanding at-risk prone-to-risk average okay"

    def test_temporal_tags_protected(self):
        lex = SynonymLexicon(entries={"week": ("period",), "monday": ("workday",)})
        text = "In week 2, On Monday, I rested."
        assert synonym_replace(text, lex, rate=1.0, seed=1) == text

    def test_score_sentence_protected(self):
        lex = SynonymLexicon(entries={"scores": ("results",), "happy": ("glad",)})
        text = "The scores are 0.8 out of 1 in Quiz_1. I was happy today."
        out = synonym_replace(text, lex, rate=1.0, seed=1)
        assert out.startswith("The scores are 0.8 out of 1 in Quiz_1.")
        assert "glad" in out

    def test_casing_preserved(self):
        out = synonym_replace("Happy days", self.LEX, rate=1.0, seed=1)
        assert out == "Glad days"

    def test_punctuation_attached_to_token_survives(self):
        out = synonym_replace("I was happy, then tired.", self.LEX, rate=1.0, seed=1)
        assert out == "I was glad, then tired."

    def test_token_count_preserved(self):
        lexicon = load_lexicon()
        text = "I reviewed the slides carefully and felt confident going into class."
        out = synonym_replace(text, lexicon, rate=1.0, seed=9)
        assert estimate_tokens(out) == estimate_tokens(text)


class TestLexiconFile:
    def test_parse_format(self):
        lex = parse_lexicon("alpha: beta, gamma\n# comment\n\ndelta: epsilon\n")
        assert lex.entries["alpha"] == ("beta", "gamma")
        assert lex.entries["delta"] == ("epsilon",)

    def test_packaged_lexicon_loads_and_validates(self):
        lex = load_lexicon()
        assert len(lex.entries) >= 150
        for word, synonyms in lex.entries.items():
            assert word not in lex.protected
            assert all(" " not in s for s in synonyms)
            assert all(s != word for s in synonyms)

    def test_protected_key_rejected(self):
        with pytest.raises(ValueError):
            SynonymLexicon(entries={"average": ("typical",)})

    def test_self_synonym_rejected(self):
        with pytest.raises(ValueError):
            SynonymLexicon(entries={"happy": ("happy",)})


class TestAugment:
    def test_paper_construction(self):
        originals = paper_shaped_examples()
        out = augment(originals, master_seed=7)
        assert len(out) == 144
        counts = {c: sum(1 for e in out if e.label is c) for c in (OU, AV, PR, AT)}
        assert counts == {OU: 48, AV: 36, PR: 30, AT: 30}
        augmented = [e for e in out if e.is_augmented]
        assert len(augmented) == 96

    def test_originals_preserved_byte_identically(self):
        originals = paper_shaped_examples()
        out = augment(originals, master_seed=7)
        assert out[: len(originals)] == originals

    def test_labels_follow_parents(self):
        originals = paper_shaped_examples()
        by_id = {e.example_id: e for e in originals}
        for child in augment(originals, master_seed=7):
            if child.is_augmented:
                assert child.label is by_id[child.parent_id].label
                assert child.output_text == by_id[child.parent_id].output_text

    def test_rate_zero_children_identical_to_parents(self):
        originals = paper_shaped_examples()
        by_id = {e.example_id: e for e in originals}
        for child in augment(originals, rate=0.0, master_seed=7):
            if child.is_augmented:
                assert child.input_text == by_id[child.parent_id].input_text

    def test_deterministic_and_seed_sensitive(self):
        originals = paper_shaped_examples()
        a = augment(originals, master_seed=7)
        b = augment(originals, master_seed=7)
        c = augment(originals, master_seed=8)
        assert a == b
        parents = lambda out: [e.parent_id for e in out if e.is_augmented]
        assert parents(a) != parents(c) or [e.input_text for e in a] != [
            e.input_text for e in c
        ]

    def test_empty_category_rejected(self):
        originals = [example(1, OU)]
        with pytest.raises(EmptyCategory):
            augment(originals, targets={OU: 2, AV: 1, PR: 0, AT: 0}, master_seed=1)

    def test_rejects_already_augmented_input(self):
        originals = paper_shaped_examples()
        out = augment(originals, master_seed=7)
        with pytest.raises(ValueError):
            augment(out, master_seed=7)

    def test_unique_example_ids(self):
        out = augment(paper_shaped_examples(), master_seed=7)
        ids = [e.example_id for e in out]
        assert len(set(ids)) == len(ids)

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trajtext.model import (
    CATEGORY_ORDERED,
    LetterGrade,
    PerformanceCategory,
    Violation,
    grade_to_category,
    validate_record,
)

from conftest import make_record, response, score


class TestGradeToCategory:
    @pytest.mark.parametrize(
        "symbol,expected",
        [
            ("A+", PerformanceCategory.OUTSTANDING),
            ("A", PerformanceCategory.OUTSTANDING),
            ("A-", PerformanceCategory.AVERAGE),
            ("B+", PerformanceCategory.AVERAGE),
            ("B", PerformanceCategory.AVERAGE),
            ("B-", PerformanceCategory.PRONE_TO_RISK),
            ("C+", PerformanceCategory.PRONE_TO_RISK),
            ("C", PerformanceCategory.AT_RISK),
            ("C-", PerformanceCategory.AT_RISK),
            ("D+", PerformanceCategory.AT_RISK),
            ("D", PerformanceCategory.AT_RISK),
            ("D-", PerformanceCategory.AT_RISK),
            ("F", PerformanceCategory.AT_RISK),
        ],
    )
    def test_total_mapping(self, symbol, expected):
        assert grade_to_category(LetterGrade.from_symbol(symbol)) is expected

    @given(
        st.sampled_from(list(LetterGrade)),
        st.sampled_from(list(LetterGrade)),
    )
    def test_monotone(self, g1, g2):
        if g1 >= g2:
            assert grade_to_category(g1) >= grade_to_category(g2)


def test_surface_forms_distinct_and_substring_free():
    forms = [c.surface_form for c in PerformanceCategory]
    assert len(set(forms)) == 4
    for a in forms:
        for b in forms:
            if a != b:
                assert a not in b


def test_category_order():
    assert CATEGORY_ORDERED == (
        PerformanceCategory.AT_RISK,
        PerformanceCategory.PRONE_TO_RISK,
        PerformanceCategory.AVERAGE,
        PerformanceCategory.OUTSTANDING,
    )
    assert PerformanceCategory.AT_RISK < PerformanceCategory.OUTSTANDING


def test_grade_order_matches_convention():
    ranked = sorted(LetterGrade, key=lambda g: g.rank, reverse=True)
    assert [g.symbol for g in ranked[:4]] == ["A+", "A", "A-", "B+"]
    assert ranked[-1] is LetterGrade.F


class TestValidateRecord:
    def test_well_formed(self):
        record = make_record(scores=[score()], responses=[response()])
        assert validate_record(record) == []

    def test_earned_above_max(self):
        record = make_record(scores=[score(earned=2, max=1)])
        violations = validate_record(record)
        assert [v.field for v in violations] == ["cognitive[0].earned"]
        assert "earned" in violations[0].rule

    def test_duplicate_response_slot(self):
        record = make_record(responses=[response(), response()])
        violations = validate_record(record)
        assert len(violations) == 1
        assert "one response per" in violations[0].rule

    def test_week_out_of_range(self):
        record = make_record(scores=[score(week=17)])
        assert any(v.field.endswith(".week") for v in validate_record(record))

    def test_unsorted_scores_flagged(self):
        record = make_record(scores=[score(week=2), score(index=2, week=1)])
        assert any(v.field == "cognitive" for v in validate_record(record))

    def test_violation_str_names_field_and_rule(self):
        v = Violation(field="cognitive[0].earned", rule="earned must be <= max")
        assert "cognitive[0].earned" in str(v)
        assert "earned must be <= max" in str(v)

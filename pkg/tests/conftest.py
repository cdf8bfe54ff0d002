import pytest

from trajtext.model import (
    AssessmentKind,
    AssessmentScore,
    BackgroundProfile,
    Cohort,
    EngagementKind,
    LetterGrade,
    NonCogResponse,
    StudentRecord,
    Weekday,
)
from trajtext.synth import SynthConfig, generate_cohort


@pytest.fixture(scope="session")
def default_cohort():
    """Synthetic cohort at generator defaults, fixed seed."""
    return generate_cohort(SynthConfig(master_seed=99))


@pytest.fixture(scope="session")
def strong_signal_cohort():
    """High coupling and trend: the regime for ordering experiments."""
    return generate_cohort(
        SynthConfig(master_seed=99, cross_modal_coupling=0.8, temporal_trend=0.8)
    )


def make_profile(**overrides) -> BackgroundProfile:
    values = dict(
        class_standing="freshman",
        major="Computer Science",
        gender="female",
        race="Asian",
        family_income="$50,000-$75,000",
    )
    values.update(overrides)
    return BackgroundProfile(**values)


def make_record(
    student_id="s001",
    scores=(),
    responses=(),
    final_grade=LetterGrade.B,
    background=None,
) -> StudentRecord:
    return StudentRecord(
        student_id=student_id,
        background=background or make_profile(),
        cognitive=tuple(scores),
        noncognitive=tuple(responses),
        final_grade=final_grade,
    )


def score(kind=AssessmentKind.HOMEWORK, index=1, earned=1, max=1, week=1):
    return AssessmentScore(kind=kind, index=index, earned=earned, max=max, week=week)


def response(week=1, day=Weekday.MONDAY, kind=EngagementKind.BEHAVIORAL, answer="I studied."):
    return NonCogResponse(week=week, day=day, engagement_kind=kind, answer=answer)


def tiny_cohort(records) -> Cohort:
    return Cohort(records=tuple(records), n_weeks=16)

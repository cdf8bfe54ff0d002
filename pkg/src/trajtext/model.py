"""Domain types for longitudinal student-experience records.

Everything here is an immutable value: safe to share between tasks, no
interior mutation after construction. Behavior is limited to constructors,
validation predicates, and the grade-to-category mapping.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ValidationError


class PerformanceCategory(enum.Enum):
    """End-of-semester outcome bin, ordered worst to best."""

    AT_RISK = "at-risk"
    PRONE_TO_RISK = "prone-to-risk"
    AVERAGE = "average"
    OUTSTANDING = "outstanding"

    @property
    def surface_form(self) -> str:
        return self.value

    @property
    def order(self) -> int:
        return _CATEGORY_ORDER[self]

    def __lt__(self, other: "PerformanceCategory"):
        if not isinstance(other, PerformanceCategory):
            return NotImplemented
        return self.order < other.order

    def __le__(self, other: "PerformanceCategory"):
        if not isinstance(other, PerformanceCategory):
            return NotImplemented
        return self.order <= other.order

    def __gt__(self, other: "PerformanceCategory"):
        if not isinstance(other, PerformanceCategory):
            return NotImplemented
        return self.order > other.order

    def __ge__(self, other: "PerformanceCategory"):
        if not isinstance(other, PerformanceCategory):
            return NotImplemented
        return self.order >= other.order

    @classmethod
    def from_surface_form(cls, text: str) -> "PerformanceCategory":
        for c in cls:
            if c.value == text:
                return c
        raise ValueError(f"unknown performance category {text!r}")


_CATEGORY_ORDER = {
    PerformanceCategory.AT_RISK: 0,
    PerformanceCategory.PRONE_TO_RISK: 1,
    PerformanceCategory.AVERAGE: 2,
    PerformanceCategory.OUTSTANDING: 3,
}

CATEGORY_ORDERED = (
    PerformanceCategory.AT_RISK,
    PerformanceCategory.PRONE_TO_RISK,
    PerformanceCategory.AVERAGE,
    PerformanceCategory.OUTSTANDING,
)


class LetterGrade(enum.Enum):
    """The 13-symbol US letter-grade scale, totally ordered."""

    A_PLUS = "A+"
    A = "A"
    A_MINUS = "A-"
    B_PLUS = "B+"
    B = "B"
    B_MINUS = "B-"
    C_PLUS = "C+"
    C = "C"
    C_MINUS = "C-"
    D_PLUS = "D+"
    D = "D"
    D_MINUS = "D-"
    F = "F"

    @property
    def symbol(self) -> str:
        return self.value

    @property
    def rank(self) -> int:
        """Higher rank is a better grade; A+ has the top rank."""
        return _GRADE_RANK[self]

    def __lt__(self, other: "LetterGrade"):
        if not isinstance(other, LetterGrade):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other: "LetterGrade"):
        if not isinstance(other, LetterGrade):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other: "LetterGrade"):
        if not isinstance(other, LetterGrade):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other: "LetterGrade"):
        if not isinstance(other, LetterGrade):
            return NotImplemented
        return self.rank >= other.rank

    @classmethod
    def from_symbol(cls, text: str) -> "LetterGrade":
        for g in cls:
            if g.value == text:
                return g
        raise ValueError(f"unknown letter grade {text!r}")


_GRADE_RANK = {
    LetterGrade.F: 0,
    LetterGrade.D_MINUS: 1,
    LetterGrade.D: 2,
    LetterGrade.D_PLUS: 3,
    LetterGrade.C_MINUS: 4,
    LetterGrade.C: 5,
    LetterGrade.C_PLUS: 6,
    LetterGrade.B_MINUS: 7,
    LetterGrade.B: 8,
    LetterGrade.B_PLUS: 9,
    LetterGrade.A_MINUS: 10,
    LetterGrade.A: 11,
    LetterGrade.A_PLUS: 12,
}


def grade_to_category(grade: LetterGrade) -> PerformanceCategory:
    """Map a final letter grade onto its performance category.

    Boundaries use closed-left intervals: [A, A+] is outstanding, [B, A) is
    average, (C, B) is prone-to-risk, and everything at or below C is at-risk.
    The mapping is total and monotone in the grade order.
    """
    if grade >= LetterGrade.A:
        return PerformanceCategory.OUTSTANDING
    if grade >= LetterGrade.B:
        return PerformanceCategory.AVERAGE
    if grade > LetterGrade.C:
        return PerformanceCategory.PRONE_TO_RISK
    return PerformanceCategory.AT_RISK


class AssessmentKind(enum.Enum):
    DIARY = "Diary"
    LAB = "Lab"
    QUIZ = "Quiz"
    HOMEWORK = "Homework"

    @classmethod
    def from_name(cls, text: str) -> "AssessmentKind":
        for k in cls:
            if k.value == text:
                return k
        raise ValueError(f"unknown assessment kind {text!r}")


class Weekday(enum.Enum):
    """The three collection days, in within-week order."""

    MONDAY = "Monday"
    THURSDAY = "Thursday"
    SATURDAY = "Saturday"

    @property
    def order(self) -> int:
        return _DAY_ORDER[self]

    @classmethod
    def from_name(cls, text: str) -> "Weekday":
        for d in cls:
            if d.value == text:
                return d
        raise ValueError(f"unknown collection day {text!r}")


_DAY_ORDER = {Weekday.MONDAY: 0, Weekday.THURSDAY: 1, Weekday.SATURDAY: 2}

DAYS_ORDERED = (Weekday.MONDAY, Weekday.THURSDAY, Weekday.SATURDAY)


class EngagementKind(enum.Enum):
    BEHAVIORAL = "Behavioral"
    EMOTIONAL = "Emotional"
    COGNITIVE = "Cognitive"

    @property
    def order(self) -> int:
        return _ENGAGEMENT_ORDER[self]

    @classmethod
    def from_name(cls, text: str) -> "EngagementKind":
        for k in cls:
            if k.value == text:
                return k
        raise ValueError(f"unknown engagement kind {text!r}")


_ENGAGEMENT_ORDER = {
    EngagementKind.BEHAVIORAL: 0,
    EngagementKind.EMOTIONAL: 1,
    EngagementKind.COGNITIVE: 2,
}

ENGAGEMENT_ORDERED = (
    EngagementKind.BEHAVIORAL,
    EngagementKind.EMOTIONAL,
    EngagementKind.COGNITIVE,
)


class Modality(enum.Enum):
    NON_COGNITIVE = "NC"
    COGNITIVE = "C"
    BACKGROUND = "B"


@dataclass(frozen=True)
class BackgroundProfile:
    """Static per-student attributes; the five distal fields are required
    for a profile to count as complete."""

    class_standing: str
    major: str
    gender: str
    race: str
    family_income: str
    international_status: str | None = None
    parents_education: str | None = None
    science_identity: str | None = None
    reflected_science_identity: str | None = None

    DISTAL_FIELDS = ("class_standing", "major", "gender", "race", "family_income")

    def is_complete(self) -> bool:
        return all(bool(getattr(self, f)) for f in self.DISTAL_FIELDS)


@dataclass(frozen=True)
class AssessmentScore:
    """One graded assessment: kind, per-kind sequence number, points, week."""

    kind: AssessmentKind
    index: int
    earned: float
    max: float
    week: int


@dataclass(frozen=True)
class NonCogResponse:
    """One engagement self-report slot; a None answer means the slot was
    presented but skipped."""

    week: int
    day: Weekday
    engagement_kind: EngagementKind
    answer: str | None = None

    @property
    def is_missing(self) -> bool:
        return self.answer is None


@dataclass(frozen=True)
class StudentRecord:
    student_id: str
    background: BackgroundProfile
    cognitive: tuple[AssessmentScore, ...]
    noncognitive: tuple[NonCogResponse, ...]
    final_grade: LetterGrade

    def __post_init__(self):
        object.__setattr__(self, "cognitive", tuple(self.cognitive))
        object.__setattr__(self, "noncognitive", tuple(self.noncognitive))


@dataclass(frozen=True)
class Cohort:
    """A validated collection of student records plus course metadata.

    Records are normalized to student-id order on construction, so two
    cohorts that differ only in input record order compare equal and
    serialize identically.
    """

    records: tuple[StudentRecord, ...]
    schema_version: str = "1"
    course_name: str = "Introductory Programming"
    n_weeks: int = 16

    def __post_init__(self):
        ordered = tuple(sorted(self.records, key=lambda r: r.student_id))
        object.__setattr__(self, "records", ordered)

    def record_for(self, student_id: str) -> StudentRecord:
        for r in self.records:
            if r.student_id == student_id:
                return r
        raise KeyError(student_id)


class MissingPolicyKind(enum.Enum):
    SKIPPED_DESCRIPTOR = "skipped"
    GENERIC_NA = "na"
    CUSTOM = "custom"


@dataclass(frozen=True)
class MissingPolicy:
    """How a skipped response slot is rendered in the text sequence."""

    kind: MissingPolicyKind
    custom_text: str | None = None

    @property
    def descriptor(self) -> str:
        if self.kind is MissingPolicyKind.SKIPPED_DESCRIPTOR:
            return "Skipped the question"
        if self.kind is MissingPolicyKind.GENERIC_NA:
            return "N/A"
        if not self.custom_text:
            raise ValueError("custom missing policy needs non-empty text")
        return self.custom_text

    @classmethod
    def skipped(cls) -> "MissingPolicy":
        return cls(MissingPolicyKind.SKIPPED_DESCRIPTOR)

    @classmethod
    def generic_na(cls) -> "MissingPolicy":
        return cls(MissingPolicyKind.GENERIC_NA)

    @classmethod
    def custom(cls, text: str) -> "MissingPolicy":
        if not text:
            raise ValueError("custom missing policy needs non-empty text")
        return cls(MissingPolicyKind.CUSTOM, text)


DEFAULT_INSTRUCTION = "Forecast the student's end-of-semester academic performance."


@dataclass(frozen=True)
class EnrichmentConfig:
    """Every knob of sequence assembly."""

    horizon_weeks: int = 4
    modalities: frozenset[Modality] = frozenset(
        {Modality.NON_COGNITIVE, Modality.COGNITIVE, Modality.BACKGROUND}
    )
    missing_policy: MissingPolicy = MissingPolicy.skipped()
    weekly_tags: bool = True
    daily_tags: bool = True
    instruction_text: str = DEFAULT_INSTRUCTION
    token_budget: int = 512
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "modalities", frozenset(self.modalities))
        if not self.modalities:
            raise ValueError("at least one modality must be selected")
        if not 1 <= self.horizon_weeks <= 16:
            raise ValueError("horizon_weeks must be in [1, 16]")
        if self.token_budget < 1:
            raise ValueError("token_budget must be positive")


class Provenance(enum.Enum):
    ORIGINAL = "original"
    AUGMENTED = "augmented"


class Split(enum.Enum):
    TRAIN = "train"
    TEST = "test"


@dataclass(frozen=True)
class TextExample:
    """One (input text, output text, label) pair with provenance."""

    example_id: str
    student_id: str
    input_text: str
    output_text: str
    label: PerformanceCategory
    provenance: Provenance = Provenance.ORIGINAL
    parent_id: str | None = None
    split: Split | None = None

    @property
    def is_augmented(self) -> bool:
        return self.provenance is Provenance.AUGMENTED


@dataclass(frozen=True)
class DayBlock:
    """One collection day inside a week: a daily tag plus the three
    engagement answers (or missing-value descriptors) in fixed kind order."""

    day_name: str
    tag_enabled: bool
    items: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class WeekBlock:
    """One week of the sequence: day blocks first, then the week-level
    assessment-score sentence when cognitive data is present."""

    week_number: int
    tag_enabled: bool
    day_blocks: tuple[DayBlock, ...]
    score_text: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "day_blocks", tuple(self.day_blocks))


@dataclass(frozen=True)
class SequencePlan:
    """The structured block tree behind one input sequence.

    Ablations permute this tree and toggle its tags; only rendering
    flattens it to text.
    """

    instruction_block: str
    background_block: str | None
    week_blocks: tuple[WeekBlock, ...]

    def __post_init__(self):
        object.__setattr__(self, "week_blocks", tuple(self.week_blocks))


@dataclass(frozen=True)
class Violation:
    """One broken invariant: which field, which rule."""

    field: str
    rule: str

    def __str__(self) -> str:
        return f"{self.field}: {self.rule}"


def validate_record(record: StudentRecord) -> list[Violation]:
    """Check every type invariant; violations are returned, never raised."""
    out: list[Violation] = []
    if not record.student_id:
        out.append(Violation("student_id", "must be non-empty"))

    for i, score in enumerate(record.cognitive):
        where = f"cognitive[{i}]"
        if score.index < 1:
            out.append(Violation(f"{where}.index", "index must be >= 1"))
        if score.max <= 0:
            out.append(Violation(f"{where}.max", "max must be positive"))
        if score.earned < 0:
            out.append(Violation(f"{where}.earned", "earned must be non-negative"))
        if score.earned > score.max:
            out.append(Violation(f"{where}.earned", "earned must be <= max"))
        if not 1 <= score.week <= 16:
            out.append(Violation(f"{where}.week", "week must be in [1, 16]"))

    seen: set[tuple[int, Weekday, EngagementKind]] = set()
    for i, resp in enumerate(record.noncognitive):
        where = f"noncognitive[{i}]"
        if not 1 <= resp.week <= 16:
            out.append(Violation(f"{where}.week", "week must be in [1, 16]"))
        key = (resp.week, resp.day, resp.engagement_kind)
        if key in seen:
            out.append(
                Violation(
                    f"{where}",
                    "at most one response per (week, day, engagement kind)",
                )
            )
        seen.add(key)

    cog_keys = [_score_sort_key(s) for s in record.cognitive]
    if cog_keys != sorted(cog_keys):
        out.append(Violation("cognitive", "scores must be sorted by (week, kind, index)"))
    nc_keys = [_response_sort_key(r) for r in record.noncognitive]
    if nc_keys != sorted(nc_keys):
        out.append(
            Violation("noncognitive", "responses must be sorted by (week, day, kind)")
        )
    return out


def _score_sort_key(score: AssessmentScore):
    return (score.week, score.kind.value, score.index)


def _response_sort_key(resp: NonCogResponse):
    return (resp.week, resp.day.order, resp.engagement_kind.order)


def sort_scores(scores) -> tuple[AssessmentScore, ...]:
    return tuple(sorted(scores, key=_score_sort_key))


def sort_responses(responses) -> tuple[NonCogResponse, ...]:
    return tuple(sorted(responses, key=_response_sort_key))


def validate_cohort(cohort: Cohort) -> list[Violation]:
    """Cohort-level checks on top of per-record validation."""
    out: list[Violation] = []
    seen_ids: set[str] = set()
    max_week = 0
    for idx, record in enumerate(cohort.records):
        who = record.student_id or f"#{idx}"
        if record.student_id in seen_ids:
            out.append(
                Violation(f"records[{who}].student_id", "student_id must be unique")
            )
        seen_ids.add(record.student_id)
        for v in validate_record(record):
            out.append(Violation(f"records[{who}].{v.field}", v.rule))
        weeks = [s.week for s in record.cognitive] + [r.week for r in record.noncognitive]
        if weeks:
            max_week = max(max_week, max(weeks))
    if cohort.n_weeks < max_week:
        out.append(
            Violation("n_weeks", f"must be >= max referenced week ({max_week})")
        )
    return out


def require_valid(cohort: Cohort) -> Cohort:
    """Raise ValidationError unless the cohort is clean."""
    violations = validate_cohort(cohort)
    if violations:
        raise ValidationError(violations)
    return cohort

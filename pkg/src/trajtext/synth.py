"""Synthetic cohort generation with controllable signal structure.

Labels are quota-assigned so the class histogram is exact. Each student
gets a latent ability that drives assessment-score trajectories (level plus
a mild rising or falling trend) and the choice of engagement phrase pools.
Phrase pools are phase-keyed so that week order carries real signal: with
cross-modal coupling on, destroying chronology destroys recoverable
information rather than merely reshuffling it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from importlib import resources

from .errors import InfeasibleDistribution
from .model import (
    AssessmentKind,
    AssessmentScore,
    BackgroundProfile,
    CATEGORY_ORDERED,
    Cohort,
    DAYS_ORDERED,
    ENGAGEMENT_ORDERED,
    EngagementKind,
    LetterGrade,
    NonCogResponse,
    PerformanceCategory,
    StudentRecord,
    grade_to_category,
    sort_responses,
    sort_scores,
)
from .seeding import substream


class Tercile(enum.Enum):
    LOW = "Low"
    MID = "Mid"
    HIGH = "High"


class Phase(enum.Enum):
    EARLY = "Early"
    LATE = "Late"


# (week, kind, per-kind index, max points): the ten assessments of the
# four-week front window (2 diaries, 3 labs, 2 quizzes, 3 homeworks).
# Kinds sharing a point scale are laid out near-symmetrically around the
# window midpoint, so no score vocabulary favors an early or late phase;
# the fine-grained one-point assessments sit at the extreme weeks where
# trajectory slopes are most visible.
DEFAULT_SCHEDULE: tuple[tuple[int, AssessmentKind, int, int], ...] = (
    (1, AssessmentKind.DIARY, 1, 1),
    (1, AssessmentKind.HOMEWORK, 1, 1),
    (1, AssessmentKind.QUIZ, 1, 1),
    (2, AssessmentKind.LAB, 1, 3),
    (2, AssessmentKind.LAB, 2, 3),
    (3, AssessmentKind.HOMEWORK, 2, 1),
    (3, AssessmentKind.LAB, 3, 3),
    (4, AssessmentKind.DIARY, 2, 1),
    (4, AssessmentKind.HOMEWORK, 3, 1),
    (4, AssessmentKind.QUIZ, 2, 1),
)


def default_label_distribution(n_students: int) -> dict[PerformanceCategory, int]:
    """The 24/12/6/6 histogram at n=48, scaled by largest remainder otherwise."""
    base = {
        PerformanceCategory.OUTSTANDING: 24,
        PerformanceCategory.AVERAGE: 12,
        PerformanceCategory.PRONE_TO_RISK: 6,
        PerformanceCategory.AT_RISK: 6,
    }
    if n_students == 48:
        return base
    shares = {c: base[c] * n_students / 48 for c in base}
    counts = {c: int(shares[c]) for c in base}
    remainder = n_students - sum(counts.values())
    by_fraction = sorted(base, key=lambda c: (shares[c] - counts[c], c.value), reverse=True)
    for c in by_fraction[:remainder]:
        counts[c] += 1
    return counts


@dataclass(frozen=True)
class SynthConfig:
    n_students: int = 48
    n_weeks: int = 16
    assessment_schedule: tuple = DEFAULT_SCHEDULE
    cross_modal_coupling: float = 0.8
    temporal_trend: float = 0.6
    week1_missing_rate: float = 0.66
    later_missing_rate: float = 0.30
    dropout_participant_rate: float = 0.37
    dropout_min_weeks: int = 2
    target_label_distribution: dict[PerformanceCategory, int] | None = None
    master_seed: int = 0

    def __post_init__(self):
        for name in (
            "cross_modal_coupling",
            "temporal_trend",
            "week1_missing_rate",
            "later_missing_rate",
            "dropout_participant_rate",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.n_students < 1 or self.n_weeks < 1 or self.dropout_min_weeks < 1:
            raise ValueError("counts must be positive")

    def resolved_distribution(self) -> dict[PerformanceCategory, int]:
        dist = self.target_label_distribution
        if dist is None:
            dist = default_label_distribution(self.n_students)
        if sum(dist.values()) != self.n_students:
            raise InfeasibleDistribution(
                f"label distribution sums to {sum(dist.values())}, "
                f"need {self.n_students}"
            )
        return dist


# Latent ability per category. Levels are deliberately compressed: score
# magnitudes barely separate the classes, while trajectory direction splits
# the lower pair (declining) from the upper pair (rising). Engagement
# terciles split at-risk / middle / outstanding. Neither channel alone
# resolves all four classes; their intersection does, which is what makes
# multimodal sequences genuinely better than single-modality ones and
# makes chronology destruction costly.
CLASS_ABILITY = {
    PerformanceCategory.AT_RISK: 0.56,
    PerformanceCategory.PRONE_TO_RISK: 0.60,
    PerformanceCategory.AVERAGE: 0.62,
    PerformanceCategory.OUTSTANDING: 0.66,
}
ABILITY_JITTER = 0.004
TREND_DIRECTION_CUTOFF = 0.61
TREND_SCALE = 0.28
SCORE_NOISE_SD = 0.10
TERCILE_LOW_BELOW = 0.575
TERCILE_HIGH_ABOVE = 0.645
# Inside the Mid tercile, rising students favor the front half of the
# phrase pool early and the back half late; falling students mirror it.
# Over the whole front window the halves balance out, so only the pairing
# of phrase with week position distinguishes the two middle classes.
MID_PHASE_SKEW = 0.9

GRADE_POOLS = {
    PerformanceCategory.OUTSTANDING: (
        LetterGrade.A_PLUS,
        LetterGrade.A,
        LetterGrade.A,
    ),
    PerformanceCategory.AVERAGE: (
        LetterGrade.A_MINUS,
        LetterGrade.B_PLUS,
        LetterGrade.B,
    ),
    PerformanceCategory.PRONE_TO_RISK: (LetterGrade.B_MINUS, LetterGrade.C_PLUS),
    PerformanceCategory.AT_RISK: (
        LetterGrade.C,
        LetterGrade.C,
        LetterGrade.C_MINUS,
        LetterGrade.D_PLUS,
        LetterGrade.D,
        LetterGrade.F,
    ),
}

# Majors and family income carry a tercile lean, standing in for the
# premise that course-adjacent preparation and socioeconomic factors are
# real priors on trajectories; gender and race are drawn uniformly and
# carry no signal.
MAJORS_TECH = ("Computer Science", "Computer Engineering", "Data Science")
MAJORS_OTHER = ("Mathematics", "Physics", "Biology", "Psychology")
MAJOR_LEAN = 0.8
INCOME_LEAN = 0.7
GENDERS = ("female", "male", "nonbinary")
RACES = ("Asian", "Black", "Hispanic", "White")
INCOMES_LOWER = ("under $25,000", "$25,000-$50,000")
INCOMES_UPPER = ("$50,000-$75,000", "over $75,000")


_BANKS: dict[tuple[EngagementKind, str, str], tuple[str, ...]] | None = None


def _load_banks() -> dict[tuple[EngagementKind, str, str], tuple[str, ...]]:
    global _BANKS
    if _BANKS is not None:
        return _BANKS
    text = resources.files("trajtext.data").joinpath("phrasebank.txt").read_text("utf-8")
    banks: dict[tuple[EngagementKind, str, str], list[str]] = {}
    section: tuple[EngagementKind, str, str] | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            kind_name, tercile_name, phase_name = line[1:-1].split("|")
            section = (EngagementKind.from_name(kind_name), tercile_name, phase_name)
            banks.setdefault(section, [])
            continue
        if section is None:
            raise ValueError("phrase outside any section in phrasebank")
        banks[section].append(line)
    _BANKS = {key: tuple(v) for key, v in banks.items()}
    return _BANKS


def phrase_bank(kind: EngagementKind, tercile: Tercile, phase: Phase) -> tuple[str, ...]:
    """The deterministic phrase list for one (kind, tercile, phase) cell."""
    return _load_banks()[(kind, tercile.value, phase.value)]


def neutral_bank(kind: EngagementKind) -> tuple[str, ...]:
    return _load_banks()[(kind, "Neutral", "Any")]


def ability_tercile(ability: float) -> Tercile:
    if ability < TERCILE_LOW_BELOW:
        return Tercile.LOW
    if ability > TERCILE_HIGH_ABOVE:
        return Tercile.HIGH
    return Tercile.MID


def week_phase(week: int) -> Phase:
    """Weeks 1-2 are the early phase of the front window, later weeks late."""
    return Phase.EARLY if week <= 2 else Phase.LATE


def _trend_direction(ability: float) -> int:
    return 1 if ability >= TREND_DIRECTION_CUTOFF else -1


def _draw_phrase(rng, kind: EngagementKind, tercile: Tercile, phase: Phase, ability: float) -> str:
    bank = phrase_bank(kind, tercile, phase)
    if tercile is not Tercile.MID:
        return bank[rng.randrange(len(bank))]
    half = len(bank) // 2
    rising = _trend_direction(ability) > 0
    favor_front = rising == (phase is Phase.EARLY)
    p_front = MID_PHASE_SKEW if favor_front else 1.0 - MID_PHASE_SKEW
    pool = bank[:half] if rng.random() < p_front else bank[half:]
    return pool[rng.randrange(len(pool))]


def _score_fraction(ability: float, week: int, trend: float, rng) -> float:
    drift = trend * _trend_direction(ability) * TREND_SCALE * (week - 2.5) / 1.5
    noisy = ability + drift + rng.gauss(0.0, SCORE_NOISE_SD)
    return min(1.0, max(0.0, noisy))


def _round_points(fraction: float, max_points: int) -> float | int:
    # Coarse grading steps: tenths on one-point work, halves on multi-point
    # labs, matching how rubric scores actually come back.
    step = 0.5 if max_points > 1 else 0.1
    earned = round(round(fraction * max_points / step) * step, 1)
    earned = min(float(max_points), max(0.0, earned))
    if earned == int(earned):
        return int(earned)
    return earned


def generate_cohort(config: SynthConfig = SynthConfig()) -> Cohort:
    """Generate a full cohort; every record validates by construction."""
    distribution = config.resolved_distribution()
    seed = config.master_seed

    labels: list[PerformanceCategory] = []
    for category in CATEGORY_ORDERED:
        labels.extend([category] * distribution.get(category, 0))
    substream(seed, "labels").shuffle(labels)

    dropout_ids = _pick_dropouts(config)

    records = []
    for i in range(config.n_students):
        student_id = f"s{i + 1:03d}"
        category = labels[i]
        rng_ability = substream(seed, "ability", student_id)
        ability = CLASS_ABILITY[category] + rng_ability.uniform(-ABILITY_JITTER, ABILITY_JITTER)
        grade = _draw_grade(category, substream(seed, "grade", student_id))
        assert grade_to_category(grade) is category

        background = _draw_background(
            substream(seed, "background", student_id), ability_tercile(ability)
        )
        scores = _generate_scores(config, student_id, ability)
        responses = _generate_responses(
            config, student_id, ability, dropout_ids.get(student_id)
        )
        records.append(
            StudentRecord(
                student_id=student_id,
                background=background,
                cognitive=sort_scores(scores),
                noncognitive=sort_responses(responses),
                final_grade=grade,
            )
        )
    return Cohort(records=tuple(records), n_weeks=config.n_weeks)


def _draw_grade(category: PerformanceCategory, rng) -> LetterGrade:
    pool = GRADE_POOLS[category]
    return pool[rng.randrange(len(pool))]


def _lean_probability(tercile: Tercile, lean: float) -> float:
    if tercile is Tercile.HIGH:
        return lean
    if tercile is Tercile.LOW:
        return 1.0 - lean
    return 0.5


def _draw_background(rng, tercile: Tercile) -> BackgroundProfile:
    if rng.random() < _lean_probability(tercile, MAJOR_LEAN):
        major = MAJORS_TECH[rng.randrange(len(MAJORS_TECH))]
    else:
        major = MAJORS_OTHER[rng.randrange(len(MAJORS_OTHER))]
    if rng.random() < _lean_probability(tercile, INCOME_LEAN):
        income = INCOMES_UPPER[rng.randrange(len(INCOMES_UPPER))]
    else:
        income = INCOMES_LOWER[rng.randrange(len(INCOMES_LOWER))]
    return BackgroundProfile(
        class_standing="freshman",
        major=major,
        gender=GENDERS[rng.randrange(len(GENDERS))],
        race=RACES[rng.randrange(len(RACES))],
        family_income=income,
        international_status="international" if rng.random() < 0.2 else "domestic",
        science_identity=("strong" if rng.random() < 0.5 else "developing"),
    )


def _generate_scores(config: SynthConfig, student_id: str, ability: float):
    scores = []
    for week, kind, index, max_points in config.assessment_schedule:
        rng = substream(config.master_seed, "scores", student_id, week, kind.value, index)
        fraction = _score_fraction(ability, week, config.temporal_trend, rng)
        scores.append(
            AssessmentScore(
                kind=kind,
                index=index,
                earned=_round_points(fraction, max_points),
                max=max_points,
                week=week,
            )
        )
    return scores


def _pick_dropouts(config: SynthConfig) -> dict[str, tuple[int, int]]:
    """Assign a contiguous all-missing window to a fixed fraction of students.

    Windows start at week 2 or later so the week-1 missingness statistic
    stays a clean Bernoulli draw.
    """
    n_dropouts = round(config.dropout_participant_rate * config.n_students)
    ids = [f"s{i + 1:03d}" for i in range(config.n_students)]
    rng = substream(config.master_seed, "dropout")
    rng.shuffle(ids)
    windows: dict[str, tuple[int, int]] = {}
    for student_id in ids[:n_dropouts]:
        length = config.dropout_min_weeks + rng.randrange(0, 2)
        last_start = config.n_weeks - length + 1
        start = 2 if last_start <= 2 else rng.randrange(2, last_start + 1)
        windows[student_id] = (start, min(config.n_weeks, start + length - 1))
    return windows


def _generate_responses(
    config: SynthConfig,
    student_id: str,
    ability: float,
    dropout_window: tuple[int, int] | None,
):
    tercile = ability_tercile(ability)
    responses = []
    for week in range(1, config.n_weeks + 1):
        if dropout_window and dropout_window[0] <= week <= dropout_window[1]:
            continue  # app uninstalled: the whole week's rows are absent
        miss_rate = (
            config.week1_missing_rate if week == 1 else config.later_missing_rate
        )
        for day in DAYS_ORDERED:
            for kind in ENGAGEMENT_ORDERED:
                rng = substream(
                    config.master_seed, "nc", student_id, week, day.value, kind.value
                )
                if rng.random() < miss_rate:
                    answer = None
                elif rng.random() < config.cross_modal_coupling:
                    answer = _draw_phrase(rng, kind, tercile, week_phase(week), ability)
                else:
                    bank = neutral_bank(kind)
                    answer = bank[rng.randrange(len(bank))]
                responses.append(
                    NonCogResponse(week=week, day=day, engagement_kind=kind, answer=answer)
                )
    return responses

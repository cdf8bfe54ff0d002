"""Assemble per-student sequence plans and render them to text examples.

A plan is built block by block: task instruction, optional background
sentence, then one block per week inside the horizon holding the three
collection days (answers or missing-value descriptors) and the week's
score sentence. Rendering flattens the tree; ablations permute the tree
before rendering ever happens.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass

from .errors import EmptyInput, NoModalityData
from .model import (
    Cohort,
    DayBlock,
    DAYS_ORDERED,
    ENGAGEMENT_ORDERED,
    EnrichmentConfig,
    Modality,
    MissingPolicy,
    NonCogResponse,
    Provenance,
    SequencePlan,
    StudentRecord,
    TextExample,
    WeekBlock,
    grade_to_category,
    sort_scores,
)
from .verbalize import (
    DEFAULT_TEMPLATES,
    VerbalizationTemplates,
    verbalize_background,
    verbalize_output,
    verbalize_scores,
)

WEEK_TAG_FORMAT = "In week {n},"
DAY_TAG_FORMAT = "On {day},"


@dataclass(frozen=True)
class TokenBudgetReport:
    example_id: str
    estimated_tokens: int
    budget: int

    @property
    def over_budget(self) -> bool:
        return self.estimated_tokens > self.budget


@dataclass(frozen=True)
class BuildResult:
    """Per-student failures are collected, not fatal."""

    examples: tuple[TextExample, ...]
    budget_reports: tuple[TokenBudgetReport, ...]
    errors: tuple[NoModalityData, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))
        object.__setattr__(self, "budget_reports", tuple(self.budget_reports))
        object.__setattr__(self, "errors", tuple(self.errors))


def tokenize(text: str) -> list[str]:
    """Split into countable tokens.

    Whitespace separates chunks; each leading and trailing non-alphanumeric
    character of a chunk is its own token, and the remaining core run
    (letters, digits, and any internal punctuation) is one token.
    """
    tokens: list[str] = []
    for chunk in text.split():
        head, tail = 0, len(chunk)
        lead: list[str] = []
        while head < tail and not chunk[head].isalnum():
            lead.append(chunk[head])
            head += 1
        trail: list[str] = []
        while tail > head and not chunk[tail - 1].isalnum():
            trail.append(chunk[tail - 1])
            tail -= 1
        tokens.extend(lead)
        if tail > head:
            tokens.append(chunk[head:tail])
        tokens.extend(reversed(trail))
    return tokens


def estimate_tokens(text: str) -> int:
    """Deterministic token-count proxy used for budget enforcement."""
    return len(tokenize(text))


def apply_missing_policy(response: NonCogResponse, policy: MissingPolicy) -> str:
    """The answer itself when present, else the policy descriptor verbatim."""
    if response.answer is not None:
        return response.answer
    return policy.descriptor


def build_plan(
    record: StudentRecord,
    config: EnrichmentConfig,
    templates: VerbalizationTemplates = DEFAULT_TEMPLATES,
) -> SequencePlan:
    """Assemble the block tree for one student.

    Week blocks cover weeks 1..horizon in ascending order. Collection days
    with no recorded rows still appear: a slot is synthesized for each
    engagement kind and filled with the missing-value descriptor, since an
    absent row means the day's questions were skipped. Weeks that end up
    with no day blocks and no scores are dropped rather than rendered as a
    dangling tag.
    """
    mods = config.modalities
    background = None
    if Modality.BACKGROUND in mods:
        background = verbalize_background(record.background, templates)

    responses: dict[tuple[int, object, object], NonCogResponse] = {}
    for r in record.noncognitive:
        responses[(r.week, r.day, r.engagement_kind)] = r

    weeks: list[WeekBlock] = []
    any_scores = False
    for week in range(1, config.horizon_weeks + 1):
        day_blocks: list[DayBlock] = []
        if Modality.NON_COGNITIVE in mods:
            for day in DAYS_ORDERED:
                items: list[str] = []
                for kind in ENGAGEMENT_ORDERED:
                    resp = responses.get((week, day, kind))
                    if resp is None:
                        resp = NonCogResponse(week=week, day=day, engagement_kind=kind)
                    items.append(apply_missing_policy(resp, config.missing_policy))
                day_blocks.append(
                    DayBlock(day_name=day.value, tag_enabled=config.daily_tags, items=tuple(items))
                )
        score_text = None
        if Modality.COGNITIVE in mods:
            week_scores = sort_scores(s for s in record.cognitive if s.week == week)
            if week_scores:
                score_text = verbalize_scores(week_scores, templates)
                any_scores = True
        if day_blocks or score_text is not None:
            weeks.append(
                WeekBlock(
                    week_number=week,
                    tag_enabled=config.weekly_tags,
                    day_blocks=tuple(day_blocks),
                    score_text=score_text,
                )
            )

    # Synthesized descriptor slots count as data: a skipped day is still a
    # day of signal about the student.
    has_data = (
        (Modality.NON_COGNITIVE in mods and any(w.day_blocks for w in weeks))
        or any_scores
        or background is not None
    )
    if not has_data:
        raise NoModalityData(record.student_id, f"horizon={config.horizon_weeks}")

    return SequencePlan(
        instruction_block=config.instruction_text,
        background_block=background,
        week_blocks=tuple(weeks),
    )


def render_plan(plan: SequencePlan) -> str:
    """Flatten the block tree: blocks joined by single spaces, tags prefixed
    to their block content, no doubled or trailing whitespace."""
    parts: list[str] = []
    if plan.instruction_block:
        parts.append(plan.instruction_block)
    if plan.background_block:
        parts.append(plan.background_block)
    for week in plan.week_blocks:
        if week.tag_enabled:
            parts.append(WEEK_TAG_FORMAT.format(n=week.week_number))
        for day in week.day_blocks:
            if day.tag_enabled:
                parts.append(DAY_TAG_FORMAT.format(day=day.day_name))
            parts.extend(day.items)
        if week.score_text is not None:
            parts.append(week.score_text)
    return " ".join(p.strip() for p in parts if p.strip())


def plan_to_json(plan: SequencePlan) -> str:
    """Canonical structured serialization of the block tree.

    The flat rendering is lossy once tags are disabled, so persistence and
    the round-trip law live on this form: parsing the output and dumping it
    again reproduces the bytes exactly.
    """
    doc = {
        "instruction": plan.instruction_block,
        "background": plan.background_block,
        "weeks": [
            {
                "week": w.week_number,
                "tag": w.tag_enabled,
                "days": [
                    {"day": d.day_name, "tag": d.tag_enabled, "items": list(d.items)}
                    for d in w.day_blocks
                ],
                "scores": w.score_text,
            }
            for w in plan.week_blocks
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def plan_from_json(text: str) -> SequencePlan:
    doc = json.loads(text)
    weeks = tuple(
        WeekBlock(
            week_number=w["week"],
            tag_enabled=w["tag"],
            day_blocks=tuple(
                DayBlock(day_name=d["day"], tag_enabled=d["tag"], items=tuple(d["items"]))
                for d in w["days"]
            ),
            score_text=w["scores"],
        )
        for w in doc["weeks"]
    )
    return SequencePlan(
        instruction_block=doc["instruction"],
        background_block=doc["background"],
        week_blocks=weeks,
    )


def missing_slot_count(record: StudentRecord, config: EnrichmentConfig) -> int:
    """Number of descriptor insertions build_plan will make for this record."""
    if Modality.NON_COGNITIVE not in config.modalities:
        return 0
    present: dict[tuple[int, object, object], NonCogResponse] = {}
    for r in record.noncognitive:
        present[(r.week, r.day, r.engagement_kind)] = r
    count = 0
    for week in range(1, config.horizon_weeks + 1):
        for day in DAYS_ORDERED:
            for kind in ENGAGEMENT_ORDERED:
                resp = present.get((week, day, kind))
                if resp is None or resp.answer is None:
                    count += 1
    return count


def example_id_for(student_id: str) -> str:
    return f"ex-{student_id}"


def build_example(
    record: StudentRecord,
    config: EnrichmentConfig,
    plan: SequencePlan | None = None,
    templates: VerbalizationTemplates = DEFAULT_TEMPLATES,
) -> TextExample:
    """Render one student into an original text example."""
    if plan is None:
        plan = build_plan(record, config, templates)
    category = grade_to_category(record.final_grade)
    return TextExample(
        example_id=example_id_for(record.student_id),
        student_id=record.student_id,
        input_text=render_plan(plan),
        output_text=verbalize_output(category, templates),
        label=category,
        provenance=Provenance.ORIGINAL,
    )


def build_dataset(
    cohort: Cohort,
    config: EnrichmentConfig,
    templates: VerbalizationTemplates = DEFAULT_TEMPLATES,
    plan_transform=None,
) -> BuildResult:
    """One original example per student, ordered by student id.

    plan_transform, when given, is applied to each plan between assembly
    and rendering; the ablation stage plugs in here. Students whose record
    has nothing to say under the selected modalities are collected as
    errors while the rest of the build proceeds.
    """
    if not cohort.records:
        raise EmptyInput("cohort has no records")
    examples: list[TextExample] = []
    reports: list[TokenBudgetReport] = []
    errors: list[NoModalityData] = []
    descriptor = config.missing_policy.descriptor
    for record in cohort.records:
        try:
            plan = build_plan(record, config, templates)
        except NoModalityData as err:
            errors.append(err)
            continue
        if plan_transform is not None:
            plan = plan_transform(record, plan)
        example = build_example(record, config, plan=plan, templates=templates)
        n_missing = missing_slot_count(record, config)
        n_descriptor = _count_occurrences(example.input_text, descriptor)
        if n_descriptor != n_missing:
            warnings.warn(
                f"descriptor text {descriptor!r} occurs {n_descriptor} times in "
                f"{record.student_id} but {n_missing} slots are missing; answers "
                "may contain the descriptor text",
                stacklevel=2,
            )
        reports.append(
            TokenBudgetReport(
                example_id=example.example_id,
                estimated_tokens=estimate_tokens(example.input_text),
                budget=config.token_budget,
            )
        )
        examples.append(example)
    return BuildResult(tuple(examples), tuple(reports), tuple(errors))


def _count_occurrences(text: str, needle: str) -> int:
    count = start = 0
    while True:
        idx = text.find(needle, start)
        if idx < 0:
            return count
        count += 1
        start = idx + len(needle)

"""Temporal-structure ablations over sequence plans.

Three variants degrade chronology before rendering: full randomization
shuffles weeks and the days inside them and drops every temporal tag;
partial randomization shuffles weeks only, keeps day order, and drops
weekly tags; pseudo randomization applies the identical week shuffle but
keeps the weekly tags, whose retained week numbers then encode the true
chronology out of order. Content is only ever permuted or untagged,
never added or removed.
"""

from __future__ import annotations

import enum
import random
from dataclasses import replace

from .enrich import BuildResult, build_dataset
from .model import Cohort, EnrichmentConfig, SequencePlan
from .seeding import substream


class AblationMode(enum.Enum):
    NO_RANDOMIZATION = "none"
    FULL = "full"
    PARTIAL = "partial"
    PSEUDO = "pseudo"

    @classmethod
    def from_name(cls, text: str) -> "AblationMode":
        for mode in cls:
            if mode.value == text:
                return mode
        raise ValueError(f"unknown ablation mode {text!r}")


def _shuffled(items: tuple, rng: random.Random) -> list:
    out = list(items)
    rng.shuffle(out)
    return out


def apply_ablation(
    plan: SequencePlan, mode: AblationMode, rng: random.Random
) -> SequencePlan:
    """Permute and untag one plan.

    The week permutation is always the first draw from `rng`, so partial
    and pseudo modes given equal streams produce identical block orders;
    full mode consumes further draws for the per-week day shuffles.
    """
    if mode is AblationMode.NO_RANDOMIZATION:
        return plan

    weeks = _shuffled(plan.week_blocks, rng)

    if mode is AblationMode.FULL:
        new_weeks = []
        for week in weeks:
            days = _shuffled(week.day_blocks, rng)
            new_weeks.append(
                replace(
                    week,
                    tag_enabled=False,
                    day_blocks=tuple(replace(d, tag_enabled=False) for d in days),
                )
            )
        weeks = new_weeks
    elif mode is AblationMode.PARTIAL:
        weeks = [replace(w, tag_enabled=False) for w in weeks]
    # Pseudo keeps every flag and the original week numbers: the shuffled
    # blocks still announce their true week, just out of order.

    return replace(plan, week_blocks=tuple(weeks))


def strip_weekly_tags(plan: SequencePlan) -> SequencePlan:
    """Disable weekly tags without touching order or content."""
    return replace(
        plan, week_blocks=tuple(replace(w, tag_enabled=False) for w in plan.week_blocks)
    )


def ablate_dataset(
    cohort: Cohort,
    config: EnrichmentConfig,
    mode: AblationMode,
    templates=None,
) -> BuildResult:
    """build_dataset with the ablation inserted between plan assembly and
    rendering; each student gets a permutation substream keyed by
    (master seed, student id), independent of the mode."""

    def transform(record, plan: SequencePlan) -> SequencePlan:
        rng = substream(config.master_seed, "ablate", record.student_id)
        return apply_ablation(plan, mode, rng)

    kwargs = {} if templates is None else {"templates": templates}
    return build_dataset(cohort, config, plan_transform=transform, **kwargs)


def week_order(plan: SequencePlan) -> tuple[int, ...]:
    return tuple(w.week_number for w in plan.week_blocks)


def content_multiset(plan: SequencePlan) -> tuple[str, ...]:
    """Every item text and score sentence, order-insensitive comparison key."""
    parts: list[str] = []
    for week in plan.week_blocks:
        for day in week.day_blocks:
            parts.extend(day.items)
        if week.score_text is not None:
            parts.append(week.score_text)
    return tuple(sorted(parts))

"""Render non-text record components as natural-language fragments.

Scores become one sentence per group, backgrounds become a single profile
sentence, and labels become the fixed output sentence. Default templates are
normative: downstream tests and keyword scoring rely on them byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EmptyInput, MissingField
from .model import AssessmentScore, BackgroundProfile, PerformanceCategory


@dataclass(frozen=True)
class VerbalizationTemplates:
    score_sentence_prefix: str = "The scores are "
    score_item_format: str = "{earned} out of {max} in {kind}_{index}"
    list_joiner: str = ", "
    final_joiner: str = " and "
    background_prefix: str = "Background information: "
    background_body: str = (
        "The student is a {class_standing} {race} {gender} majoring in "
        "{major} with a family yearly income of {family_income}."
    )
    output_template: str = "At the end of the semester, the student will be {category}."


DEFAULT_TEMPLATES = VerbalizationTemplates()


def format_number(value: float) -> str:
    """Shortest decimal form: no trailing zeros, '.' separator, no grouping."""
    if isinstance(value, int):
        return str(value)
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def verbalize_scores(
    scores: list[AssessmentScore] | tuple[AssessmentScore, ...],
    templates: VerbalizationTemplates = DEFAULT_TEMPLATES,
) -> str:
    """One sentence listing every score in input order.

    Two items are joined with a bare " and "; three or more use comma
    separators with a final ", and".
    """
    if not scores:
        raise EmptyInput("verbalize_scores needs at least one score")
    items = [
        templates.score_item_format.format(
            earned=format_number(s.earned),
            max=format_number(s.max),
            kind=s.kind.value,
            index=s.index,
        )
        for s in scores
    ]
    if len(items) == 1:
        joined = items[0]
    elif len(items) == 2:
        joined = items[0] + templates.final_joiner + items[1]
    else:
        joined = (
            templates.list_joiner.join(items[:-1])
            + templates.list_joiner
            + templates.final_joiner.lstrip()
            + items[-1]
        )
    return templates.score_sentence_prefix + joined + "."


def verbalize_background(
    profile: BackgroundProfile,
    templates: VerbalizationTemplates = DEFAULT_TEMPLATES,
) -> str:
    """Single profile sentence; the five distal fields are inserted verbatim."""
    for name in BackgroundProfile.DISTAL_FIELDS:
        if not getattr(profile, name):
            raise MissingField(name)
    body = templates.background_body.format(
        class_standing=profile.class_standing,
        race=profile.race,
        gender=profile.gender,
        major=profile.major,
        family_income=profile.family_income,
    )
    return templates.background_prefix + body


def verbalize_output(
    category: PerformanceCategory,
    templates: VerbalizationTemplates = DEFAULT_TEMPLATES,
) -> str:
    """The fixed output sentence carrying exactly one category surface form."""
    return templates.output_template.format(category=category.surface_form)

"""Class balancing by oversampling plus synonym replacement.

Duplicates are drawn uniformly with replacement from each category's
originals and passed through seeded synonym substitution. Every random
draw is keyed by (master seed, category, duplicate index, word,
occurrence), so output is independent of execution order and of the
token positions that tag removal or block shuffling may have changed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import EmptyCategory, TargetBelowCurrent
from .model import CATEGORY_ORDERED, PerformanceCategory, Provenance, TextExample
from .seeding import derive_seed, substream

PROTECTED_TOKENS = frozenset(c.surface_form for c in PerformanceCategory)

_SCORE_SPAN = re.compile(r"The scores are .*?\.(?=\s|$)")
_WEEK_TAG_SPAN = re.compile(r"In week \d+,")
_DAY_TAG_SPAN = re.compile(r"On (?:Monday|Thursday|Saturday),")


@dataclass(frozen=True)
class SynonymLexicon:
    """Lowercase word -> candidate replacements, plus tokens never touched."""

    entries: dict[str, tuple[str, ...]]
    protected: frozenset[str] = PROTECTED_TOKENS

    def __post_init__(self):
        for word, synonyms in self.entries.items():
            if word in self.protected:
                raise ValueError(f"protected token {word!r} cannot be a lexicon key")
            if word != word.lower():
                raise ValueError(f"lexicon key {word!r} must be lowercase")
            if not synonyms:
                raise ValueError(f"lexicon key {word!r} has no synonyms")
            for syn in synonyms:
                if syn == word:
                    raise ValueError(f"synonym of {word!r} equals its key")


def parse_lexicon(text: str, protected: frozenset[str] = PROTECTED_TOKENS) -> SynonymLexicon:
    """Parse the one-entry-per-line "word: syn1, syn2" format."""
    entries: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ":" not in line:
            raise ValueError(f"lexicon line {lineno}: expected 'word: syn1, syn2, ...'")
        word, _, rest = line.partition(":")
        synonyms = tuple(s.strip() for s in rest.split(",") if s.strip())
        entries[word.strip().lower()] = synonyms
    return SynonymLexicon(entries=entries, protected=protected)


def load_lexicon(path=None) -> SynonymLexicon:
    """Load a lexicon file, defaulting to the packaged one."""
    if path is None:
        text = resources.files("trajtext.data").joinpath("lexicon.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return parse_lexicon(text)


@dataclass(frozen=True)
class BalanceEntry:
    current_count: int
    target_count: int

    @property
    def n_duplicates(self) -> int:
        return self.target_count - self.current_count


@dataclass(frozen=True)
class BalancePlan:
    per_category: dict[PerformanceCategory, BalanceEntry]

    @property
    def total_target(self) -> int:
        return sum(e.target_count for e in self.per_category.values())


def plan_balance(
    current: dict[PerformanceCategory, int],
    targets: dict[PerformanceCategory, int],
) -> BalancePlan:
    """Per-category duplicate counts needed to reach the targets."""
    entries: dict[PerformanceCategory, BalanceEntry] = {}
    for category in CATEGORY_ORDERED:
        have = current.get(category, 0)
        want = targets.get(category, have)
        if want < have:
            raise TargetBelowCurrent(category)
        entries[category] = BalanceEntry(current_count=have, target_count=want)
    return BalancePlan(per_category=entries)


# The survey-anchored construction: 24/12/6/6 originals are lifted to
# 48/36/30/30, giving 144 near-balanced samples.
PAPER_SHAPE_CURRENT = {
    PerformanceCategory.OUTSTANDING: 24,
    PerformanceCategory.AVERAGE: 12,
    PerformanceCategory.PRONE_TO_RISK: 6,
    PerformanceCategory.AT_RISK: 6,
}
PAPER_SHAPE_TARGETS = {
    PerformanceCategory.OUTSTANDING: 48,
    PerformanceCategory.AVERAGE: 36,
    PerformanceCategory.PRONE_TO_RISK: 30,
    PerformanceCategory.AT_RISK: 30,
}


def default_targets(current: dict[PerformanceCategory, int]) -> dict[PerformanceCategory, int]:
    """The 48/36/30/30 targets for the canonical 24/12/6/6 shape, otherwise
    full balancing to the largest class."""
    normalized = {c: current.get(c, 0) for c in CATEGORY_ORDERED}
    if normalized == PAPER_SHAPE_CURRENT:
        return dict(PAPER_SHAPE_TARGETS)
    top = max(normalized.values())
    return {c: top for c in CATEGORY_ORDERED}


def _protected_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    for pattern in (_SCORE_SPAN, _WEEK_TAG_SPAN, _DAY_TAG_SPAN):
        for m in pattern.finditer(text):
            spans.append(m.span())
    return spans


def _split_core(chunk: str) -> tuple[str, str, str]:
    """(leading punctuation, core run, trailing punctuation) of a chunk."""
    head, tail = 0, len(chunk)
    while head < tail and not chunk[head].isalnum():
        head += 1
    while tail > head and not chunk[tail - 1].isalnum():
        tail -= 1
    return chunk[:head], chunk[head:tail], chunk[tail:]


def _match_case(original: str, replacement: str) -> str:
    if original and original[0].isupper():
        return replacement[0].upper() + replacement[1:]
    return replacement


def synonym_replace(
    text: str,
    lexicon: SynonymLexicon,
    rate: float,
    seed: int,
) -> str:
    """Independently replace eligible words with probability `rate`.

    Eligible means: the word (case-folded, punctuation stripped) is a
    lexicon key, is not protected, and does not sit inside a temporal tag
    or a score sentence. Replacements preserve the original first-letter
    casing and the chunk's attached punctuation, so the token count never
    changes. Draws are keyed per (word, occurrence), not per position.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError("rate must be in [0, 1]")
    if rate == 0.0 or not text:
        return text
    spans = _protected_spans(text)
    pieces = re.split(r"(\s+)", text)
    occurrence: dict[str, int] = {}
    out: list[str] = []
    pos = 0
    for piece in pieces:
        start, end = pos, pos + len(piece)
        pos = end
        if not piece or piece.isspace():
            out.append(piece)
            continue
        lead, core, trail = _split_core(piece)
        key = core.lower()
        in_protected_span = any(s <= start and end <= e for s, e in spans)
        if (
            not core
            or key in lexicon.protected
            or key not in lexicon.entries
            or in_protected_span
        ):
            out.append(piece)
            continue
        occ = occurrence.get(key, 0)
        occurrence[key] = occ + 1
        rng = substream(seed, "syn", key, occ)
        if rng.random() < rate:
            synonyms = lexicon.entries[key]
            choice = synonyms[rng.randrange(len(synonyms))]
            core = _match_case(core, choice)
        out.append(lead + core + trail)
    return "".join(out)


def augment(
    examples: list[TextExample] | tuple[TextExample, ...],
    targets: dict[PerformanceCategory, int] | None = None,
    lexicon: SynonymLexicon | None = None,
    rate: float = 0.1,
    master_seed: int = 0,
) -> list[TextExample]:
    """Oversample to the target counts with synonym-varied duplicates.

    Originals pass through unchanged and keep their input order; augmented
    copies follow, grouped by category in fixed order, each marked with its
    parent's id. Only input_text is varied; labels and output_text are
    copied so supervision is never corrupted.
    """
    examples = list(examples)
    for ex in examples:
        if ex.provenance is not Provenance.ORIGINAL:
            raise ValueError(f"example {ex.example_id!r} is already augmented")
    if lexicon is None:
        lexicon = load_lexicon()
    by_category: dict[PerformanceCategory, list[TextExample]] = {
        c: [] for c in CATEGORY_ORDERED
    }
    for ex in examples:
        by_category[ex.label].append(ex)
    current = {c: len(v) for c, v in by_category.items()}
    if targets is None:
        targets = default_targets(current)
    plan = plan_balance(current, targets)

    out = list(examples)
    for category in CATEGORY_ORDERED:
        entry = plan.per_category[category]
        if entry.n_duplicates == 0:
            continue
        pool = by_category[category]
        if not pool:
            raise EmptyCategory(category)
        for k in range(entry.n_duplicates):
            rng = substream(master_seed, "aug", category.value, k)
            parent = pool[rng.randrange(len(pool))]
            child_seed = derive_seed(master_seed, "aug", category.value, k, "tokens")
            varied = synonym_replace(parent.input_text, lexicon, rate, seed=child_seed)
            out.append(
                TextExample(
                    example_id=f"{parent.example_id}-aug{k}",
                    student_id=parent.student_id,
                    input_text=varied,
                    output_text=parent.output_text,
                    label=parent.label,
                    provenance=Provenance.AUGMENTED,
                    parent_id=parent.example_id,
                )
            )
    return out

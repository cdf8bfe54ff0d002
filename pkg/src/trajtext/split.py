"""Deterministic stratified train/test partitioning.

The default split samples from the post-augmentation pool, which matches
the upstream protocol but lets near-duplicate texts straddle the boundary
and so flatters accuracy. The before-augmentation mode splits originals
first and sends every augmented copy to its parent's side, which is the
leakage-free measurement; the README discusses the difference.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

from .errors import EmptyCategory, EmptyInput, UnlabeledExample
from .model import CATEGORY_ORDERED, Provenance, Split, TextExample
from .seeding import substream


class SplitPoint(enum.Enum):
    AFTER_AUGMENTATION = "after_augmentation"
    BEFORE_AUGMENTATION = "before_augmentation"


@dataclass(frozen=True)
class SplitSpec:
    test_fraction: float = 0.30
    seed: int = 0
    stratify: bool = True
    split_point: SplitPoint = SplitPoint.AFTER_AUGMENTATION

    def __post_init__(self):
        if not 0.0 < self.test_fraction < 1.0:
            raise ValueError("test_fraction must be in (0, 1)")


def test_count(n: int, fraction: float) -> int:
    """floor(fraction * n + 0.5), at least 1 for a non-empty group."""
    if n == 0:
        return 0
    return max(1, math.floor(fraction * n + 0.5))


def stratified_split(
    examples: list[TextExample] | tuple[TextExample, ...],
    spec: SplitSpec = SplitSpec(),
) -> tuple[list[TextExample], list[TextExample]]:
    """Partition examples, stamping the split field on every output.

    Test membership per category is chosen by a seeded shuffle of example
    ids; train is the complement. Input order is preserved within each
    side.
    """
    examples = list(examples)
    if not examples:
        raise EmptyInput("nothing to split")
    for ex in examples:
        if ex.label is None:
            raise UnlabeledExample(ex.example_id)

    if spec.split_point is SplitPoint.BEFORE_AUGMENTATION:
        originals = [ex for ex in examples if ex.provenance is Provenance.ORIGINAL]
        test_ids = _select_test_ids(originals, spec)
        side_by_parent: dict[str, Split] = {
            ex.example_id: (Split.TEST if ex.example_id in test_ids else Split.TRAIN)
            for ex in originals
        }
        train, test = [], []
        for ex in examples:
            anchor = ex.example_id if ex.provenance is Provenance.ORIGINAL else ex.parent_id
            if anchor not in side_by_parent:
                raise UnlabeledExample(ex.example_id)
            side = side_by_parent[anchor]
            stamped = replace(ex, split=side)
            (test if side is Split.TEST else train).append(stamped)
        return train, test

    test_ids = _select_test_ids(examples, spec)
    train = [replace(ex, split=Split.TRAIN) for ex in examples if ex.example_id not in test_ids]
    test = [replace(ex, split=Split.TEST) for ex in examples if ex.example_id in test_ids]
    return train, test


def _select_test_ids(examples: list[TextExample], spec: SplitSpec) -> set[str]:
    if spec.stratify:
        groups: list[tuple[str, list[TextExample]]] = []
        for category in CATEGORY_ORDERED:
            members = [ex for ex in examples if ex.label is category]
            if not members:
                raise EmptyCategory(category)
            groups.append((category.value, members))
    else:
        groups = [("all", examples)]

    test_ids: set[str] = set()
    for key, members in groups:
        ids = [ex.example_id for ex in members]
        rng = substream(spec.seed, "split", key)
        rng.shuffle(ids)
        k = test_count(len(ids), spec.test_fraction)
        test_ids.update(ids[:k])
    return test_ids

"""Keyword scoring, a surrogate text classifier, and the experiment grid.

The surrogate is a token-frequency generative classifier with additive
smoothing: the simplest learner that picks up the high-level statistical
patterns these text sequences carry. By default it is a pure bag of
tokens. The experiment driver enables temporal-context features, where
weekly tags are consumed as context markers and content tokens are counted
jointly with the week they sit under; without that, no order-insensitive
learner could register the difference between chronological and shuffled
sequences at all, and the ablation grid would be meaningless. Daily tags
are consumed but never counted, so they neither help nor hurt.
"""

from __future__ import annotations

import enum
import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from .ablate import AblationMode, ablate_dataset
from .augment import SynonymLexicon, augment, load_lexicon
from .enrich import tokenize
from .errors import EmptyInput, LengthMismatch, MissingCategory
from .model import (
    CATEGORY_ORDERED,
    Cohort,
    EnrichmentConfig,
    MissingPolicy,
    Modality,
    PerformanceCategory,
    TextExample,
)
from .seeding import derive_seed
from .split import SplitPoint, SplitSpec, stratified_split

_SURFACE_FORMS = {c.surface_form: c for c in PerformanceCategory}
_DAY_TOKENS = ("monday", "thursday", "saturday")


class OutcomeKind(enum.Enum):
    MATCH = "match"
    NO_MATCH = "no_match"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class ScoreOutcome:
    kind: OutcomeKind
    category: PerformanceCategory | None = None

    @classmethod
    def match(cls, category: PerformanceCategory) -> "ScoreOutcome":
        return cls(OutcomeKind.MATCH, category)

    @property
    def is_match(self) -> bool:
        return self.kind is OutcomeKind.MATCH


NO_MATCH = ScoreOutcome(OutcomeKind.NO_MATCH)
AMBIGUOUS = ScoreOutcome(OutcomeKind.AMBIGUOUS)


def keyword_score(generated: str) -> ScoreOutcome:
    """Classify a generated sentence by its category keyword.

    Surface forms are matched as whole hyphen-aware tokens, so "at-risk"
    inside "prone-to-risk" can never fire. Exactly one distinct category
    is a match; zero is NO_MATCH; two or more are AMBIGUOUS.
    """
    found: set[PerformanceCategory] = set()
    for token in tokenize(generated):
        category = _SURFACE_FORMS.get(token.lower())
        if category is not None:
            found.add(category)
    if len(found) == 1:
        return ScoreOutcome.match(next(iter(found)))
    if not found:
        return NO_MATCH
    return AMBIGUOUS


def accuracy(
    predictions: list[ScoreOutcome],
    references: list[PerformanceCategory],
) -> float:
    """Fraction of positions where the prediction matches the reference;
    NO_MATCH and AMBIGUOUS count as incorrect."""
    if len(predictions) != len(references):
        raise LengthMismatch(
            f"{len(predictions)} predictions vs {len(references)} references"
        )
    if not predictions:
        raise EmptyInput("nothing to score")
    correct = sum(
        1
        for pred, ref in zip(predictions, references)
        if pred.is_match and pred.category is ref
    )
    return correct / len(predictions)


def featurize(text: str, temporal_context: bool = False) -> list[str]:
    """Lowercased count features for the surrogate.

    Plain mode is the raw token stream. In temporal-context mode, weekly
    tags ("In week N,") set the current week marker and daily tags are
    swallowed; every other token is emitted prefixed with its week marker,
    or bare when no weekly tag has been seen.
    """
    tokens = [t.lower() for t in tokenize(text)]
    if not temporal_context:
        return tokens
    feats: list[str] = []
    context: str | None = None
    i = 0
    n = len(tokens)
    while i < n:
        if (
            i + 3 < n
            and tokens[i] == "in"
            and tokens[i + 1] == "week"
            and tokens[i + 2].isdigit()
            and tokens[i + 3] == ","
        ):
            context = tokens[i + 2]
            i += 4
            continue
        if (
            i + 2 < n
            and tokens[i] == "on"
            and tokens[i + 1] in _DAY_TOKENS
            and tokens[i + 2] == ","
        ):
            i += 3
            continue
        feats.append(f"w{context}|{tokens[i]}" if context else tokens[i])
        i += 1
    return feats


@dataclass(frozen=True)
class SurrogateModel:
    """Per-category token log-frequency model with additive smoothing."""

    alpha: float
    temporal_context: bool
    log_priors: dict[PerformanceCategory, float]
    token_counts: dict[PerformanceCategory, dict[str, int]]
    class_totals: dict[PerformanceCategory, int]
    vocabulary: frozenset[str]

    def to_bytes(self) -> bytes:
        doc = {
            "alpha": self.alpha,
            "temporal_context": self.temporal_context,
            "log_priors": {c.value: self.log_priors[c] for c in CATEGORY_ORDERED},
            "token_counts": {
                c.value: dict(sorted(self.token_counts[c].items()))
                for c in CATEGORY_ORDERED
            },
        }
        return json.dumps(doc, ensure_ascii=False, sort_keys=True).encode("utf-8")


def train_surrogate(
    train: list[TextExample] | tuple[TextExample, ...],
    alpha: float = 1.0,
    seed: int = 0,
    temporal_context: bool = False,
) -> SurrogateModel:
    """Count features per category and freeze the smoothed model.

    Counting is fully deterministic; the seed parameter is kept for
    interface stability with other learners.
    """
    del seed
    train = list(train)
    if not train:
        raise EmptyInput("no training examples")
    token_counts: dict[PerformanceCategory, Counter] = {
        c: Counter() for c in CATEGORY_ORDERED
    }
    label_counts: Counter = Counter()
    for ex in train:
        label_counts[ex.label] += 1
        token_counts[ex.label].update(featurize(ex.input_text, temporal_context))
    for category in CATEGORY_ORDERED:
        if label_counts[category] == 0:
            raise MissingCategory(category)
    total = len(train)
    vocabulary = frozenset(
        token for counts in token_counts.values() for token in counts
    )
    return SurrogateModel(
        alpha=alpha,
        temporal_context=temporal_context,
        log_priors={c: math.log(label_counts[c] / total) for c in CATEGORY_ORDERED},
        token_counts={c: dict(token_counts[c]) for c in CATEGORY_ORDERED},
        class_totals={c: sum(token_counts[c].values()) for c in CATEGORY_ORDERED},
        vocabulary=vocabulary,
    )


def predict_surrogate(model: SurrogateModel, input_text: str) -> PerformanceCategory:
    """Argmax of prior plus summed token log-frequencies.

    Out-of-vocabulary features are skipped, so a fully unseen text falls
    back to the prior argmax. Ties go to the lowest category in the fixed
    order.
    """
    feats = featurize(input_text, model.temporal_context)
    vocab_size = len(model.vocabulary)
    best: PerformanceCategory | None = None
    best_score = -math.inf
    for category in CATEGORY_ORDERED:
        counts = model.token_counts[category]
        denom = model.class_totals[category] + model.alpha * vocab_size
        score = model.log_priors[category]
        for feat in feats:
            if feat in model.vocabulary:
                score += math.log((counts.get(feat, 0) + model.alpha) / denom)
        if score > best_score:
            best, best_score = category, score
    assert best is not None
    return best


def modalities_key(modalities: frozenset[Modality]) -> str:
    ordered = [m for m in (Modality.NON_COGNITIVE, Modality.COGNITIVE, Modality.BACKGROUND) if m in modalities]
    return "+".join(m.value for m in ordered)


def policy_key(policy: MissingPolicy) -> str:
    if policy.custom_text is not None:
        return f"custom:{policy.custom_text}"
    return policy.kind.value


@dataclass(frozen=True)
class MatrixAxes:
    modality_sets: tuple[frozenset[Modality], ...]
    horizons: tuple[int, ...]
    ablation_modes: tuple[AblationMode, ...] = (AblationMode.NO_RANDOMIZATION,)
    missing_policies: tuple[MissingPolicy, ...] = (MissingPolicy.skipped(),)

    def __post_init__(self):
        if not (
            self.modality_sets
            and self.horizons
            and self.ablation_modes
            and self.missing_policies
        ):
            raise ValueError("every axis needs at least one value")

    def cells(self):
        for ms in self.modality_sets:
            for horizon in self.horizons:
                for mode in self.ablation_modes:
                    for policy in self.missing_policies:
                        yield ms, horizon, mode, policy


FIG2_MODALITY_SETS: tuple[frozenset[Modality], ...] = (
    frozenset({Modality.NON_COGNITIVE}),
    frozenset({Modality.COGNITIVE}),
    frozenset({Modality.BACKGROUND}),
    frozenset({Modality.NON_COGNITIVE, Modality.COGNITIVE}),
    frozenset({Modality.NON_COGNITIVE, Modality.COGNITIVE, Modality.BACKGROUND}),
)


@dataclass(frozen=True)
class CellResult:
    modalities: str
    horizon: int
    ablation: str
    missing_policy: str
    seed_count: int
    n_test: int
    accuracy_mean: float
    accuracy_std: float
    accuracies: tuple[float, ...] = ()
    error: str | None = None


@dataclass(frozen=True)
class ExperimentReport:
    rows: tuple[CellResult, ...]

    CSV_HEADER = (
        "modalities,horizon,ablation,missing_policy,seed_count,n_test,"
        "accuracy_mean,accuracy_std"
    )

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for row in self.rows:
            policy = row.missing_policy
            if "," in policy or '"' in policy:
                policy = '"' + policy.replace('"', '""') + '"'
            if row.error is not None:
                mean = std = ""
            else:
                mean = f"{row.accuracy_mean:.6f}"
                std = f"{row.accuracy_std:.6f}"
            lines.append(
                f"{row.modalities},{row.horizon},{row.ablation},{policy},"
                f"{row.seed_count},{row.n_test},{mean},{std}"
            )
        return "\n".join(lines) + "\n"

    def row_for(
        self,
        modalities: str,
        horizon: int,
        ablation: str = AblationMode.NO_RANDOMIZATION.value,
        missing_policy: str = "skipped",
    ) -> CellResult:
        for row in self.rows:
            if (
                row.modalities == modalities
                and row.horizon == horizon
                and row.ablation == ablation
                and row.missing_policy == missing_policy
            ):
                return row
        raise KeyError((modalities, horizon, ablation, missing_policy))


def evaluate_pipeline(
    cohort: Cohort,
    config: EnrichmentConfig,
    mode: AblationMode = AblationMode.NO_RANDOMIZATION,
    lexicon: SynonymLexicon | None = None,
    synonym_rate: float = 0.1,
    test_fraction: float = 0.30,
    split_point: SplitPoint = SplitPoint.AFTER_AUGMENTATION,
) -> tuple[float, int]:
    """One full pass: enrich, ablate, augment, split, train, score.

    Returns (test accuracy, test size). All randomness is keyed off
    config.master_seed, and the ablation permutation stream is independent
    of the mode, so runs that differ only in mode share their shuffles.

    The default split samples from the augmented pool, matching the
    upstream protocol; the before-augmentation split keeps every student's
    copies on one side and is the right setting for measuring what a
    pipeline transformation does to generalizable signal, since the
    protocol split lets a learner score by matching test copies to their
    own train siblings.
    """
    result = ablate_dataset(cohort, config, mode)
    if result.errors:
        raise result.errors[0]
    augmented = augment(
        result.examples,
        lexicon=lexicon,
        rate=synonym_rate,
        master_seed=derive_seed(config.master_seed, "augment"),
    )
    train, test = stratified_split(
        augmented,
        SplitSpec(
            test_fraction=test_fraction,
            seed=derive_seed(config.master_seed, "split"),
            split_point=split_point,
        ),
    )
    model = train_surrogate(train, alpha=1.0, temporal_context=True)
    predictions = [
        ScoreOutcome.match(predict_surrogate(model, ex.input_text)) for ex in test
    ]
    references = [ex.label for ex in test]
    return accuracy(predictions, references), len(test)


def _cell_seed(base_seed: int, ms, horizon, policy, seed_index: int) -> int:
    # The ablation mode is deliberately absent: runs differing only in mode
    # must share their permutation and augmentation streams.
    return derive_seed(
        base_seed, "cell", modalities_key(ms), horizon, policy_key(policy), seed_index
    )


def _run_cell(args) -> CellResult:
    cohort, base_config, ms, horizon, mode, policy, n_seeds, lexicon, split_point = args
    try:
        accuracies = []
        n_test = 0
        for seed_index in range(n_seeds):
            config = replace(
                base_config,
                modalities=ms,
                horizon_weeks=horizon,
                missing_policy=policy,
                master_seed=_cell_seed(base_config.master_seed, ms, horizon, policy, seed_index),
            )
            acc, n_test = evaluate_pipeline(
                cohort, config, mode, lexicon=lexicon, split_point=split_point
            )
            accuracies.append(acc)
        mean = sum(accuracies) / len(accuracies)
        var = sum((a - mean) ** 2 for a in accuracies) / len(accuracies)
        return CellResult(
            modalities=modalities_key(ms),
            horizon=horizon,
            ablation=mode.value,
            missing_policy=policy_key(policy),
            seed_count=n_seeds,
            n_test=n_test,
            accuracy_mean=mean,
            accuracy_std=math.sqrt(var),
            accuracies=tuple(accuracies),
        )
    except Exception as err:  # cell marked failed, the matrix continues
        return CellResult(
            modalities=modalities_key(ms),
            horizon=horizon,
            ablation=mode.value,
            missing_policy=policy_key(policy),
            seed_count=n_seeds,
            n_test=0,
            accuracy_mean=0.0,
            accuracy_std=0.0,
            error=f"{type(err).__name__}: {err}",
        )


def run_experiment_matrix(
    cohort: Cohort,
    base_config: EnrichmentConfig,
    axes: MatrixAxes,
    n_seeds: int = 5,
    jobs: int = 1,
    split_point: SplitPoint = SplitPoint.AFTER_AUGMENTATION,
) -> ExperimentReport:
    """Evaluate every axis combination over n_seeds seeded repetitions.

    Cells are independent; with jobs > 1 they run in worker processes, and
    the report order is the fixed cell order either way.
    """
    if n_seeds < 1:
        raise ValueError("n_seeds must be >= 1")
    lexicon = load_lexicon()
    tasks = [
        (cohort, base_config, ms, horizon, mode, policy, n_seeds, lexicon, split_point)
        for ms, horizon, mode, policy in axes.cells()
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell, tasks))
    else:
        rows = [_run_cell(task) for task in tasks]
    return ExperimentReport(rows=tuple(rows))

"""trajtext: longitudinal student-experience records to enriched text datasets.

A deterministic pipeline that verbalizes multimodal weekly records into
instruction-prefixed text sequences, balances them by augmentation, splits
them reproducibly, degrades their temporal structure on demand, and checks
what a simple classifier can still recover from the result.
"""

__version__ = "0.1.0"

from .ablate import AblationMode, ablate_dataset, apply_ablation, strip_weekly_tags
from .augment import (
    BalancePlan,
    SynonymLexicon,
    augment,
    default_targets,
    load_lexicon,
    plan_balance,
    synonym_replace,
)
from .enrich import (
    BuildResult,
    TokenBudgetReport,
    apply_missing_policy,
    build_dataset,
    build_plan,
    estimate_tokens,
    plan_from_json,
    plan_to_json,
    render_plan,
)
from .errors import TrajtextError
from .evalkit import (
    ExperimentReport,
    MatrixAxes,
    ScoreOutcome,
    SurrogateModel,
    accuracy,
    keyword_score,
    predict_surrogate,
    run_experiment_matrix,
    train_surrogate,
)
from .ingest import import_tabular, parse_cohort, write_cohort
from .model import (
    AssessmentKind,
    AssessmentScore,
    BackgroundProfile,
    Cohort,
    DayBlock,
    EngagementKind,
    EnrichmentConfig,
    LetterGrade,
    MissingPolicy,
    Modality,
    NonCogResponse,
    PerformanceCategory,
    Provenance,
    SequencePlan,
    Split,
    StudentRecord,
    TextExample,
    Violation,
    WeekBlock,
    Weekday,
    grade_to_category,
    validate_cohort,
    validate_record,
)
from .split import SplitPoint, SplitSpec, stratified_split
from .synth import Phase, SynthConfig, Tercile, generate_cohort, neutral_bank, phrase_bank
from .verbalize import (
    VerbalizationTemplates,
    verbalize_background,
    verbalize_output,
    verbalize_scores,
)

__all__ = [name for name in dir() if not name.startswith("_")]

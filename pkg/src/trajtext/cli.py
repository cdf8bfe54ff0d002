"""Command-line surface: cohort generation through experiment reports.

Every subcommand takes --seed, --config, and --out; each run writes its
resolved configuration and input hashes next to its outputs, writes only
inside --out, and is byte-reproducible from seed plus inputs.
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click

from . import __version__
from .ablate import AblationMode, ablate_dataset
from .augment import augment as augment_examples
from .augment import load_lexicon
from .config import PipelineConfig, load_config, with_overrides
from .enrich import BuildResult
from .errors import TrajtextError
from .evalkit import (
    MatrixAxes,
    accuracy,
    keyword_score,
    run_experiment_matrix,
)
from .figures import render_report_figures
from .ingest import parse_cohort, write_cohort
from .jsonl import read_examples, read_predictions, write_examples
from .model import validate_cohort
from .synth import generate_cohort


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load_cohort(path: Path):
    try:
        return parse_cohort(Path(path).read_bytes())
    except TrajtextError as err:
        _fail(str(err))


def _outdir(out: str) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(outdir: Path, config: PipelineConfig, command: str, inputs: list[Path]):
    (outdir / "resolved_config.txt").write_text(config.to_text(), encoding="utf-8")
    manifest = {
        "command": command,
        "tool_version": __version__,
        "inputs": {str(p): _sha256(p) for p in inputs},
    }
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _resolve(config_path, seed, **overrides) -> PipelineConfig:
    config = load_config(config_path)
    if seed is not None:
        overrides["master_seed"] = seed
    return with_overrides(config, **overrides)


def _budget_csv(result: BuildResult) -> str:
    lines = ["example_id,estimated_tokens,budget,over_budget"]
    for report in result.budget_reports:
        flag = "true" if report.over_budget else "false"
        lines.append(
            f"{report.example_id},{report.estimated_tokens},{report.budget},{flag}"
        )
    return "\n".join(lines) + "\n"


def _build_examples(cohort_path: Path, config: PipelineConfig, mode: AblationMode):
    cohort = _load_cohort(cohort_path)
    enrichment = config.enrichment_config()
    result = ablate_dataset(cohort, enrichment, mode, templates=config.templates())
    if result.errors:
        details = "; ".join(str(e) for e in result.errors)
        _fail(f"{len(result.errors)} record(s) could not be enriched: {details}")
    return result


common_options = [
    click.option("--seed", type=int, default=None, help="Master seed; overrides the config file."),
    click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False),
        default=None,
        help="Run-configuration file (key = value lines).",
    ),
    click.option("--out", required=True, help="Output directory; all files go here."),
]


def with_common_options(fn):
    for option in reversed(common_options):
        fn = option(fn)
    return fn


@click.group()
@click.version_option(version=__version__)
def main():
    """Longitudinal experience records to enriched text datasets."""


@main.command()
@with_common_options
def synth(seed, config_path, out):
    """Generate a synthetic cohort document."""
    config = _resolve(config_path, seed)
    outdir = _outdir(out)
    cohort = generate_cohort(config.synth_config())
    (outdir / "cohort.json").write_bytes(write_cohort(cohort))
    _write_manifest(outdir, config, "synth", [])
    click.echo(f"wrote {outdir / 'cohort.json'} ({len(cohort.records)} records)")


@main.command()
@click.argument("cohort_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="Accepted for interface uniformity.")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Run-configuration file (key = value lines).",
)
@click.option("--out", default=None, help="Optional directory for a lint report.")
def validate(cohort_file, seed, config_path, out):
    """Lint a cohort document; exits nonzero when violations exist."""
    from trajtext.errors import ValidationError

    config = _resolve(config_path, seed)
    violations = []
    cohort = None
    try:
        cohort = parse_cohort(Path(cohort_file).read_bytes())
    except ValidationError as err:
        violations = err.violations
    except TrajtextError as err:
        _fail(str(err))
    if cohort is not None:
        violations = validate_cohort(cohort)
    if out is not None:
        outdir = _outdir(out)
        report = "".join(f"{v}\n" for v in violations) or "OK\n"
        (outdir / "violations.txt").write_text(report, encoding="utf-8")
        _write_manifest(outdir, config, "validate", [Path(cohort_file)])
    if violations:
        for v in violations:
            click.echo(str(v), err=True)
        sys.exit(1)
    click.echo(f"OK: {len(cohort.records)} records validate")


@main.command("render-templates")
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
)
def render_templates(config_path):
    """Show the resolved verbalization templates."""
    config = load_config(config_path)
    templates = config.templates()
    for name in (
        "score_sentence_prefix",
        "score_item_format",
        "background_prefix",
        "background_body",
        "output_template",
    ):
        click.echo(f"{name} = {getattr(templates, name)!r}")


@main.command()
@click.argument("cohort_file", type=click.Path(exists=True, dir_okay=False))
@with_common_options
def build(cohort_file, seed, config_path, out):
    """Enrich a cohort into a dataset JSONL plus a token-budget report."""
    config = _resolve(config_path, seed)
    outdir = _outdir(out)
    result = _build_examples(Path(cohort_file), config, AblationMode.NO_RANDOMIZATION)
    (outdir / "dataset.jsonl").write_text(write_examples(result.examples), encoding="utf-8")
    (outdir / "budget_report.csv").write_text(_budget_csv(result), encoding="utf-8")
    _write_manifest(outdir, config, "build", [Path(cohort_file)])
    over = sum(1 for r in result.budget_reports if r.over_budget)
    click.echo(f"wrote {len(result.examples)} examples ({over} over budget)")


@main.command()
@click.argument("cohort_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--ablation",
    type=click.Choice([m.value for m in AblationMode]),
    default=None,
    help="Randomization mode; overrides the config file.",
)
@with_common_options
def ablate(cohort_file, ablation, seed, config_path, out):
    """Enrich a cohort with a temporal ablation applied before rendering."""
    config = _resolve(config_path, seed, ablation=ablation)
    outdir = _outdir(out)
    mode = config.parse_ablation()
    result = _build_examples(Path(cohort_file), config, mode)
    (outdir / "dataset.jsonl").write_text(write_examples(result.examples), encoding="utf-8")
    (outdir / "budget_report.csv").write_text(_budget_csv(result), encoding="utf-8")
    _write_manifest(outdir, config, "ablate", [Path(cohort_file)])
    click.echo(f"wrote {len(result.examples)} examples (ablation={mode.value})")


@main.command(name="augment")
@click.argument("dataset_file", type=click.Path(exists=True, dir_okay=False))
@with_common_options
def augment_cmd(dataset_file, seed, config_path, out):
    """Balance a dataset by oversampling with synonym variation."""
    config = _resolve(config_path, seed)
    outdir = _outdir(out)
    examples = read_examples(Path(dataset_file).read_text(encoding="utf-8"))
    lexicon = load_lexicon(config.lexicon or None)
    try:
        augmented = augment_examples(
            examples,
            targets=config.parse_targets(),
            lexicon=lexicon,
            rate=config.synonym_rate,
            master_seed=config.master_seed,
        )
    except (TrajtextError, ValueError) as err:
        _fail(str(err))
    (outdir / "augmented.jsonl").write_text(write_examples(augmented), encoding="utf-8")
    _write_manifest(outdir, config, "augment", [Path(dataset_file)])
    click.echo(f"wrote {len(augmented)} examples ({len(augmented) - len(examples)} augmented)")


@main.command(name="split")
@click.argument("dataset_file", type=click.Path(exists=True, dir_okay=False))
@with_common_options
def split_cmd(dataset_file, seed, config_path, out):
    """Stratified train/test split, stamped and also written separately."""
    from .split import stratified_split

    config = _resolve(config_path, seed)
    outdir = _outdir(out)
    examples = read_examples(Path(dataset_file).read_text(encoding="utf-8"))
    try:
        train, test = stratified_split(examples, config.split_spec(config.master_seed))
    except TrajtextError as err:
        _fail(str(err))
    (outdir / "split.jsonl").write_text(write_examples(train + test), encoding="utf-8")
    (outdir / "train.jsonl").write_text(write_examples(train), encoding="utf-8")
    (outdir / "test.jsonl").write_text(write_examples(test), encoding="utf-8")
    _write_manifest(outdir, config, "split", [Path(dataset_file)])
    click.echo(f"split {len(examples)} examples into {len(train)} train / {len(test)} test")


@main.command(name="eval")
@click.argument("predictions_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("references_file", type=click.Path(exists=True, dir_okay=False))
@with_common_options
def eval_cmd(predictions_file, references_file, seed, config_path, out):
    """Score a predictions JSONL against a dataset JSONL by keyword match."""
    config = _resolve(config_path, seed)
    outdir = _outdir(out)
    predictions = read_predictions(Path(predictions_file).read_text(encoding="utf-8"))
    references = read_examples(Path(references_file).read_text(encoding="utf-8"))
    labels_by_id = {ex.example_id: ex.label for ex in references}
    missing = [p["id"] for p in predictions if p["id"] not in labels_by_id]
    if missing:
        _fail(f"predictions reference unknown example ids: {missing[:5]}")
    if not predictions:
        _fail("predictions file is empty")
    outcomes = [keyword_score(p["generated"]) for p in predictions]
    refs = [labels_by_id[p["id"]] for p in predictions]
    acc = accuracy(outcomes, refs)
    n_no_match = sum(1 for o in outcomes if o.kind.value == "no_match")
    n_ambiguous = sum(1 for o in outcomes if o.kind.value == "ambiguous")
    report = {
        "n": len(outcomes),
        "accuracy": acc,
        "no_match": n_no_match,
        "ambiguous": n_ambiguous,
    }
    (outdir / "eval.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _write_manifest(outdir, config, "eval", [Path(predictions_file), Path(references_file)])
    click.echo(f"accuracy {acc:.6f} over {len(outcomes)} predictions")


@main.command()
@click.argument("cohort_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--jobs",
    type=int,
    default=None,
    help="Worker processes for matrix cells; defaults to the available cores.",
)
@with_common_options
def matrix(cohort_file, jobs, seed, config_path, out):
    """Run the full experiment grid and write report, summary, and figures."""
    import os

    config = _resolve(config_path, seed)
    outdir = _outdir(out)
    if jobs is None:
        jobs = os.cpu_count() or 1
    cohort = _load_cohort(Path(cohort_file))
    try:
        axes = MatrixAxes(
            modality_sets=tuple(
                config.parse_modalities(part)
                for part in config.matrix_modalities.split("|")
            ),
            horizons=tuple(int(h) for h in config.matrix_horizons.split(",")),
            ablation_modes=tuple(
                config.parse_ablation(part)
                for part in config.matrix_ablations.split("|")
            ),
            missing_policies=tuple(
                config.parse_missing_policy(part)
                for part in config.matrix_policies.split("|")
            ),
        )
    except (TrajtextError, ValueError) as err:
        _fail(str(err))
    report = run_experiment_matrix(
        cohort,
        config.enrichment_config(),
        axes,
        n_seeds=config.matrix_seeds,
        jobs=jobs,
        split_point=config.split_spec(config.master_seed).split_point,
    )
    (outdir / "report.csv").write_text(report.to_csv(), encoding="utf-8")
    (outdir / "summary.txt").write_text(_summary_text(report), encoding="utf-8")
    render_report_figures(report, outdir / "figures")
    _write_manifest(outdir, config, "matrix", [Path(cohort_file)])
    failed = sum(1 for r in report.rows if r.error is not None)
    click.echo(f"wrote {len(report.rows)} report rows ({failed} failed cells)")
    if failed:
        sys.exit(1)


def _summary_text(report) -> str:
    lines = ["experiment summary", "==================", ""]
    for row in report.rows:
        if row.error is not None:
            lines.append(
                f"{row.modalities:>8} h={row.horizon} {row.ablation:>7} "
                f"{row.missing_policy:>10}  FAILED: {row.error}"
            )
        else:
            lines.append(
                f"{row.modalities:>8} h={row.horizon} {row.ablation:>7} "
                f"{row.missing_policy:>10}  acc {row.accuracy_mean:.3f} "
                f"± {row.accuracy_std:.3f} (n_test={row.n_test}, seeds={row.seed_count})"
            )
    return "\n".join(lines) + "\n"


@main.command()
@with_common_options
def demo(seed, config_path, out):
    """End-to-end run on defaults: synth, build, augment, split, evaluate."""
    from .evalkit import ScoreOutcome, predict_surrogate, train_surrogate
    from .split import stratified_split

    config = _resolve(config_path, seed)
    outdir = _outdir(out)
    cohort = generate_cohort(config.synth_config())
    (outdir / "cohort.json").write_bytes(write_cohort(cohort))

    enrichment = config.enrichment_config()
    mode = config.parse_ablation()
    result = ablate_dataset(cohort, enrichment, mode, templates=config.templates())
    if result.errors:
        _fail("; ".join(str(e) for e in result.errors))
    (outdir / "dataset.jsonl").write_text(write_examples(result.examples), encoding="utf-8")
    (outdir / "budget_report.csv").write_text(_budget_csv(result), encoding="utf-8")

    lexicon = load_lexicon(config.lexicon or None)
    augmented = augment_examples(
        result.examples,
        targets=config.parse_targets(),
        lexicon=lexicon,
        rate=config.synonym_rate,
        master_seed=config.master_seed,
    )
    (outdir / "augmented.jsonl").write_text(write_examples(augmented), encoding="utf-8")

    train, test = stratified_split(augmented, config.split_spec(config.master_seed))
    (outdir / "train.jsonl").write_text(write_examples(train), encoding="utf-8")
    (outdir / "test.jsonl").write_text(write_examples(test), encoding="utf-8")

    model = train_surrogate(train, alpha=1.0, temporal_context=True)
    outcomes = [ScoreOutcome.match(predict_surrogate(model, ex.input_text)) for ex in test]
    acc = accuracy(outcomes, [ex.label for ex in test])
    report = {"n_train": len(train), "n_test": len(test), "surrogate_accuracy": acc}
    (outdir / "eval.json").write_text(
        json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _write_manifest(outdir, config, "demo", [])
    click.echo(
        f"demo complete: {len(train)} train / {len(test)} test, "
        f"surrogate accuracy {acc:.6f}"
    )


if __name__ == "__main__":
    main()

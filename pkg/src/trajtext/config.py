"""The run-configuration file: flat "key = value" lines, strict keys.

Command-line flags override file values; the fully resolved configuration
is written next to every run's outputs so any result can be reproduced
from its directory alone.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from .ablate import AblationMode
from .errors import ConfigError
from .model import (
    DEFAULT_INSTRUCTION,
    EnrichmentConfig,
    MissingPolicy,
    Modality,
    PerformanceCategory,
)
from .split import SplitPoint, SplitSpec
from .synth import SynthConfig
from .verbalize import DEFAULT_TEMPLATES, VerbalizationTemplates

_MODALITY_BY_CODE = {m.value: m for m in Modality}


@dataclass(frozen=True)
class PipelineConfig:
    horizon_weeks: int = 4
    modalities: str = "NC+C+B"
    missing_policy: str = "skipped"
    custom_descriptor: str = ""
    weekly_tags: bool = True
    daily_tags: bool = True
    instruction_text: str = DEFAULT_INSTRUCTION
    token_budget: int = 512
    master_seed: int = 0
    ablation: str = "none"
    synonym_rate: float = 0.1
    lexicon: str = ""
    targets: str = "auto"
    test_fraction: float = 0.30
    stratify: bool = True
    split_point: str = "after_augmentation"
    n_students: int = 48
    n_weeks: int = 16
    coupling: float = 0.8
    trend: float = 0.6
    week1_missing_rate: float = 0.66
    later_missing_rate: float = 0.30
    dropout_rate: float = 0.37
    dropout_min_weeks: int = 2
    matrix_modalities: str = "NC|C|B|NC+C|NC+C+B"
    matrix_horizons: str = "2,3,4"
    matrix_ablations: str = "none"
    matrix_policies: str = "skipped"
    matrix_seeds: int = 5
    score_sentence_prefix: str = DEFAULT_TEMPLATES.score_sentence_prefix
    score_item_format: str = DEFAULT_TEMPLATES.score_item_format
    background_prefix: str = DEFAULT_TEMPLATES.background_prefix
    background_body: str = DEFAULT_TEMPLATES.background_body
    output_template: str = DEFAULT_TEMPLATES.output_template

    def parse_modalities(self, text: str | None = None) -> frozenset[Modality]:
        raw = self.modalities if text is None else text
        parts = [p.strip() for p in raw.split("+") if p.strip()]
        out = set()
        for part in parts:
            if part not in _MODALITY_BY_CODE:
                raise ConfigError(f"unknown modality code {part!r} (use NC, C, B)")
            out.add(_MODALITY_BY_CODE[part])
        if not out:
            raise ConfigError("modalities must name at least one of NC, C, B")
        return frozenset(out)

    def parse_missing_policy(self, text: str | None = None) -> MissingPolicy:
        raw = self.missing_policy if text is None else text
        if raw == "skipped":
            return MissingPolicy.skipped()
        if raw == "na":
            return MissingPolicy.generic_na()
        if raw == "custom":
            if not self.custom_descriptor:
                raise ConfigError("missing_policy = custom needs custom_descriptor")
            return MissingPolicy.custom(self.custom_descriptor)
        raise ConfigError(f"unknown missing_policy {raw!r} (use skipped, na, custom)")

    def parse_ablation(self, text: str | None = None) -> AblationMode:
        raw = self.ablation if text is None else text
        try:
            return AblationMode.from_name(raw)
        except ValueError as err:
            raise ConfigError(str(err))

    def parse_targets(self) -> dict[PerformanceCategory, int] | None:
        if self.targets == "auto":
            return None
        out: dict[PerformanceCategory, int] = {}
        for part in self.targets.split(","):
            name, _, count = part.strip().partition(":")
            try:
                category = PerformanceCategory.from_surface_form(name.strip())
                out[category] = int(count)
            except ValueError as err:
                raise ConfigError(f"bad targets entry {part!r}: {err}")
        return out

    def enrichment_config(self) -> EnrichmentConfig:
        return EnrichmentConfig(
            horizon_weeks=self.horizon_weeks,
            modalities=self.parse_modalities(),
            missing_policy=self.parse_missing_policy(),
            weekly_tags=self.weekly_tags,
            daily_tags=self.daily_tags,
            instruction_text=self.instruction_text,
            token_budget=self.token_budget,
            master_seed=self.master_seed,
        )

    def split_spec(self, seed: int) -> SplitSpec:
        try:
            point = SplitPoint(self.split_point)
        except ValueError:
            raise ConfigError(
                f"unknown split_point {self.split_point!r} "
                "(use after_augmentation or before_augmentation)"
            )
        return SplitSpec(
            test_fraction=self.test_fraction,
            seed=seed,
            stratify=self.stratify,
            split_point=point,
        )

    def templates(self) -> VerbalizationTemplates:
        return VerbalizationTemplates(
            score_sentence_prefix=self.score_sentence_prefix,
            score_item_format=self.score_item_format,
            background_prefix=self.background_prefix,
            background_body=self.background_body,
            output_template=self.output_template,
        )

    def synth_config(self) -> SynthConfig:
        return SynthConfig(
            n_students=self.n_students,
            n_weeks=self.n_weeks,
            cross_modal_coupling=self.coupling,
            temporal_trend=self.trend,
            week1_missing_rate=self.week1_missing_rate,
            later_missing_rate=self.later_missing_rate,
            dropout_participant_rate=self.dropout_rate,
            dropout_min_weeks=self.dropout_min_weeks,
            master_seed=self.master_seed,
        )

    def to_text(self) -> str:
        lines = ["# resolved trajtext run configuration"]
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, str) and (value != value.strip() or value == ""):
                # quote values whose edge whitespace matters
                value = '"' + value + '"'
            lines.append(f"{f.name} = {value}")
        return "\n".join(lines) + "\n"


_FIELD_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def _coerce(name: str, raw: str):
    kind = _FIELD_TYPES[name]
    if kind == "bool":
        if raw.lower() in ("true", "yes", "1"):
            return True
        if raw.lower() in ("false", "no", "0"):
            return False
        raise ConfigError(f"{name}: expected true or false, got {raw!r}")
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
    except ValueError:
        raise ConfigError(f"{name}: cannot parse {raw!r} as {kind}")
    return raw


def parse_config(text: str) -> PipelineConfig:
    """Parse the key = value format; unknown keys are rejected outright."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        value = value.strip()
        if len(value) >= 2 and value.startswith('"') and value.endswith('"'):
            value = value[1:-1]
        values[key] = _coerce(key, value)
    return PipelineConfig(**values)


def load_config(path: str | Path | None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    text = Path(path).read_text(encoding="utf-8")
    return parse_config(text)


def with_overrides(config: PipelineConfig, **overrides) -> PipelineConfig:
    """Apply non-None overrides (command-line flags beat file values)."""
    filtered = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **filtered) if filtered else config

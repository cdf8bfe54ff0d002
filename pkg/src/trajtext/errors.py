"""Exception types shared across the pipeline stages."""

from __future__ import annotations


class TrajtextError(Exception):
    """Base class for all pipeline errors."""


class DocumentSyntaxError(TrajtextError):
    """Raised when a cohort document is not well-formed text/JSON."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemaError(TrajtextError):
    """A document or table is structurally wrong: missing or mistyped field."""

    def __init__(self, field: str, expected: str, found: str):
        self.field = field
        self.expected = expected
        self.found = found
        super().__init__(f"field {field!r}: expected {expected}, found {found}")


class ValidationError(TrajtextError):
    """A parsed object violates a domain invariant; carries the violations."""

    def __init__(self, violations):
        self.violations = list(violations)
        details = "; ".join(str(v) for v in self.violations)
        super().__init__(f"{len(self.violations)} violation(s): {details}")


class JoinError(TrajtextError):
    """A student id appears in one tabular input but not another."""

    def __init__(self, student_id: str, missing_in: str):
        self.student_id = student_id
        self.missing_in = missing_in
        super().__init__(f"student {student_id!r} has rows but no entry in {missing_in}")


class EmptyInput(TrajtextError):
    """An operation that needs at least one element got none."""


class MissingField(TrajtextError):
    """A profile field needed for verbalization is absent or blank."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"missing background field: {name}")


class NoModalityData(TrajtextError):
    """A record has nothing to say under the selected modalities and horizon."""

    def __init__(self, student_id: str, detail: str = ""):
        self.student_id = student_id
        msg = f"student {student_id!r} has no data for any selected modality"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class TargetBelowCurrent(TrajtextError):
    """A balance target is smaller than the category's current count."""

    def __init__(self, category):
        self.category = category
        super().__init__(f"target below current count for category {category}")


class EmptyCategory(TrajtextError):
    """A category that must be populated has no members."""

    def __init__(self, category):
        self.category = category
        super().__init__(f"category {category} has no examples")


class UnlabeledExample(TrajtextError):
    """An example reached a label-dependent stage without a label."""

    def __init__(self, example_id: str):
        self.example_id = example_id
        super().__init__(f"example {example_id!r} has no label")


class LengthMismatch(TrajtextError):
    """Paired sequences have different lengths."""


class MissingCategory(TrajtextError):
    """Training data does not cover every performance category."""

    def __init__(self, category):
        self.category = category
        super().__init__(f"no training examples for category {category}")


class InfeasibleDistribution(TrajtextError):
    """A target label distribution cannot be realized for the cohort size."""


class ConfigError(TrajtextError):
    """A run-configuration file is malformed or carries unknown keys."""

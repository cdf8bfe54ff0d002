"""Parse, validate, and serialize cohorts.

The canonical interchange format is a UTF-8 JSON document with a fixed key
order; raw exports arrive as three delimiter-separated tables and are joined
into the same object graph. Parsing is strict: absent required fields are
errors, unknown extras are warnings.
"""

from __future__ import annotations

import csv
import io
import json
import warnings

from .errors import DocumentSyntaxError, JoinError, SchemaError
from .model import (
    AssessmentKind,
    AssessmentScore,
    BackgroundProfile,
    Cohort,
    EngagementKind,
    LetterGrade,
    NonCogResponse,
    StudentRecord,
    Weekday,
    require_valid,
    sort_responses,
    sort_scores,
)

SCHEMA_VERSION = "1"

_BACKGROUND_OPTIONAL = (
    "international_status",
    "parents_education",
    "science_identity",
    "reflected_science_identity",
)

SCORE_COLUMNS = ("student_id", "kind", "index", "earned", "max", "week")
RESPONSE_COLUMNS = ("student_id", "week", "day", "engagement_kind", "answer")
BACKGROUND_COLUMNS = (
    "student_id",
    "class_standing",
    "major",
    "gender",
    "race",
    "family_income",
    "final_grade",
)


class UnknownFieldWarning(UserWarning):
    """An input carried a field the schema does not define."""


def _require(obj: dict, field: str, kind, where: str):
    if field not in obj:
        raise SchemaError(f"{where}.{field}", kind.__name__ if isinstance(kind, type) else str(kind), "absent")
    return obj[field]


def _typed(obj: dict, field: str, kinds, where: str):
    value = _require(obj, field, kinds if isinstance(kinds, type) else kinds[0], where)
    expected = kinds if isinstance(kinds, tuple) else (kinds,)
    if not isinstance(value, expected) or isinstance(value, bool) and bool not in expected:
        names = "/".join(k.__name__ for k in expected)
        raise SchemaError(f"{where}.{field}", names, type(value).__name__)
    return value


def _warn_extras(obj: dict, known: tuple[str, ...], where: str):
    for key in obj:
        if key not in known:
            warnings.warn(
                f"ignoring unknown field {where}.{key}", UnknownFieldWarning, stacklevel=3
            )


def parse_cohort(data: bytes | str) -> Cohort:
    """Parse and validate a cohort document.

    Raises DocumentSyntaxError for malformed JSON, SchemaError for missing
    or mistyped fields, and ValidationError when a record breaks a domain
    invariant.
    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as err:
            raise DocumentSyntaxError(f"not UTF-8: {err}") from err
    else:
        text = data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise DocumentSyntaxError(err.msg, line=err.lineno, column=err.colno) from err
    if not isinstance(doc, dict):
        raise SchemaError("<root>", "object", type(doc).__name__)

    version = _typed(doc, "schema_version", str, "<root>")
    if version != SCHEMA_VERSION:
        raise SchemaError("schema_version", SCHEMA_VERSION, version)
    course_name = _typed(doc, "course_name", str, "<root>")
    n_weeks = _typed(doc, "n_weeks", int, "<root>")
    records_doc = _typed(doc, "records", list, "<root>")
    _warn_extras(doc, ("schema_version", "course_name", "n_weeks", "records"), "<root>")

    records = []
    for i, rec in enumerate(records_doc):
        where = f"records[{i}]"
        if not isinstance(rec, dict):
            raise SchemaError(where, "object", type(rec).__name__)
        records.append(_parse_record(rec, where))

    cohort = Cohort(
        records=tuple(records),
        schema_version=version,
        course_name=course_name,
        n_weeks=n_weeks,
    )
    return require_valid(cohort)


def _parse_record(rec: dict, where: str) -> StudentRecord:
    student_id = _typed(rec, "student_id", str, where)
    bg_doc = _typed(rec, "background", dict, where)
    background = _parse_background(bg_doc, f"{where}.background")
    grade_text = _typed(rec, "final_grade", str, where)
    try:
        grade = LetterGrade.from_symbol(grade_text)
    except ValueError:
        raise SchemaError(f"{where}.final_grade", "letter grade symbol", grade_text)

    scores = []
    for j, sc in enumerate(_typed(rec, "cognitive", list, where)):
        sw = f"{where}.cognitive[{j}]"
        if not isinstance(sc, dict):
            raise SchemaError(sw, "object", type(sc).__name__)
        kind_text = _typed(sc, "kind", str, sw)
        try:
            kind = AssessmentKind.from_name(kind_text)
        except ValueError:
            raise SchemaError(f"{sw}.kind", "assessment kind", kind_text)
        scores.append(
            AssessmentScore(
                kind=kind,
                index=_typed(sc, "index", int, sw),
                earned=_typed(sc, "earned", (int, float), sw),
                max=_typed(sc, "max", (int, float), sw),
                week=_typed(sc, "week", int, sw),
            )
        )
        _warn_extras(sc, ("kind", "index", "earned", "max", "week"), sw)

    responses = []
    for j, rp in enumerate(_typed(rec, "noncognitive", list, where)):
        rw = f"{where}.noncognitive[{j}]"
        if not isinstance(rp, dict):
            raise SchemaError(rw, "object", type(rp).__name__)
        day_text = _typed(rp, "day", str, rw)
        try:
            day = Weekday.from_name(day_text)
        except ValueError:
            raise SchemaError(f"{rw}.day", "collection day", day_text)
        kind_text = _typed(rp, "engagement_kind", str, rw)
        try:
            ekind = EngagementKind.from_name(kind_text)
        except ValueError:
            raise SchemaError(f"{rw}.engagement_kind", "engagement kind", kind_text)
        answer = _require(rp, "answer", "string or null", rw)
        if answer is not None and not isinstance(answer, str):
            raise SchemaError(f"{rw}.answer", "string or null", type(answer).__name__)
        responses.append(
            NonCogResponse(
                week=_typed(rp, "week", int, rw),
                day=day,
                engagement_kind=ekind,
                answer=answer,
            )
        )
        _warn_extras(rp, ("week", "day", "engagement_kind", "answer"), rw)

    _warn_extras(
        rec,
        ("student_id", "background", "cognitive", "noncognitive", "final_grade"),
        where,
    )
    return StudentRecord(
        student_id=student_id,
        background=background,
        cognitive=tuple(scores),
        noncognitive=tuple(responses),
        final_grade=grade,
    )


def _parse_background(doc: dict, where: str) -> BackgroundProfile:
    required = BackgroundProfile.DISTAL_FIELDS
    values = {name: _typed(doc, name, str, where) for name in required}
    optional = {}
    for name in _BACKGROUND_OPTIONAL:
        if name in doc:
            value = doc[name]
            if value is not None and not isinstance(value, str):
                raise SchemaError(f"{where}.{name}", "string or null", type(value).__name__)
            optional[name] = value
    _warn_extras(doc, required + _BACKGROUND_OPTIONAL, where)
    return BackgroundProfile(**values, **optional)


def _background_doc(bg: BackgroundProfile) -> dict:
    doc = {name: getattr(bg, name) for name in BackgroundProfile.DISTAL_FIELDS}
    for name in _BACKGROUND_OPTIONAL:
        value = getattr(bg, name)
        if value is not None:
            doc[name] = value
    return doc


def write_cohort(cohort: Cohort) -> bytes:
    """Canonical serialization: fixed key order, records sorted by student
    id, shortest round-trip decimals, newline-terminated UTF-8."""
    require_valid(cohort)
    doc = {
        "schema_version": cohort.schema_version,
        "course_name": cohort.course_name,
        "n_weeks": cohort.n_weeks,
        "records": [
            {
                "student_id": r.student_id,
                "background": _background_doc(r.background),
                "cognitive": [
                    {
                        "kind": s.kind.value,
                        "index": s.index,
                        "earned": s.earned,
                        "max": s.max,
                        "week": s.week,
                    }
                    for s in r.cognitive
                ],
                "noncognitive": [
                    {
                        "week": p.week,
                        "day": p.day.value,
                        "engagement_kind": p.engagement_kind.value,
                        "answer": p.answer,
                    }
                    for p in r.noncognitive
                ],
                "final_grade": r.final_grade.value,
            }
            for r in sorted(cohort.records, key=lambda r: r.student_id)
        ],
    }
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def _read_table(data: bytes | str, columns: tuple[str, ...], name: str) -> list[dict]:
    if isinstance(data, bytes):
        text = data.decode("utf-8")
    else:
        text = data
    reader = csv.DictReader(io.StringIO(text))
    header = reader.fieldnames or []
    for col in columns:
        if col not in header:
            raise SchemaError(f"{name}.{col}", "column", "absent")
    extras = [c for c in header if c not in columns and c not in _BACKGROUND_OPTIONAL]
    for col in extras:
        warnings.warn(
            f"ignoring unknown column {name}.{col}", UnknownFieldWarning, stacklevel=3
        )
    return list(reader)


def _parse_int(value: str, where: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{where}: cannot parse integer from {value!r}")


def _parse_points(value: str, where: str) -> float | int:
    try:
        if "." in value:
            return float(value)
        return int(value)
    except (TypeError, ValueError):
        raise ValueError(f"{where}: cannot parse score from {value!r}")


def import_tabular(
    score_table: bytes | str,
    response_table: bytes | str,
    background_table: bytes | str,
    course_name: str = "Imported Course",
) -> Cohort:
    """Join the three raw export tables into a validated cohort.

    The background table defines the student population; score or response
    rows for unknown students raise JoinError. Blank answer cells become
    missing responses.
    """
    backgrounds = _read_table(background_table, BACKGROUND_COLUMNS, "background")
    scores = _read_table(score_table, SCORE_COLUMNS, "scores")
    responses = _read_table(response_table, RESPONSE_COLUMNS, "responses")

    students: dict[str, dict] = {}
    for row in backgrounds:
        sid = row["student_id"]
        profile_kwargs = {
            name: row[name]
            for name in BackgroundProfile.DISTAL_FIELDS
        }
        for name in _BACKGROUND_OPTIONAL:
            if name in row and row[name]:
                profile_kwargs[name] = row[name]
        try:
            grade = LetterGrade.from_symbol(row["final_grade"])
        except ValueError:
            raise SchemaError(f"background[{sid}].final_grade", "letter grade symbol", row["final_grade"])
        students[sid] = {
            "background": BackgroundProfile(**profile_kwargs),
            "final_grade": grade,
            "scores": [],
            "responses": [],
        }

    for row in scores:
        sid = row["student_id"]
        if sid not in students:
            raise JoinError(sid, "background table")
        try:
            kind = AssessmentKind.from_name(row["kind"])
        except ValueError:
            raise SchemaError(f"scores[{sid}].kind", "assessment kind", row["kind"])
        students[sid]["scores"].append(
            AssessmentScore(
                kind=kind,
                index=_parse_int(row["index"], f"scores[{sid}].index"),
                earned=_parse_points(row["earned"], f"scores[{sid}].earned"),
                max=_parse_points(row["max"], f"scores[{sid}].max"),
                week=_parse_int(row["week"], f"scores[{sid}].week"),
            )
        )

    for row in responses:
        sid = row["student_id"]
        if sid not in students:
            raise JoinError(sid, "background table")
        try:
            day = Weekday.from_name(row["day"])
        except ValueError:
            raise SchemaError(f"responses[{sid}].day", "collection day", row["day"])
        try:
            ekind = EngagementKind.from_name(row["engagement_kind"])
        except ValueError:
            raise SchemaError(
                f"responses[{sid}].engagement_kind", "engagement kind", row["engagement_kind"]
            )
        answer = row["answer"] if row["answer"] else None
        students[sid]["responses"].append(
            NonCogResponse(
                week=_parse_int(row["week"], f"responses[{sid}].week"),
                day=day,
                engagement_kind=ekind,
                answer=answer,
            )
        )

    records = tuple(
        StudentRecord(
            student_id=sid,
            background=info["background"],
            cognitive=sort_scores(info["scores"]),
            noncognitive=sort_responses(info["responses"]),
            final_grade=info["final_grade"],
        )
        for sid, info in students.items()
    )
    max_week = 0
    for rec in records:
        weeks = [s.week for s in rec.cognitive] + [p.week for p in rec.noncognitive]
        if weeks:
            max_week = max(max_week, max(weeks))
    cohort = Cohort(
        records=records,
        course_name=course_name,
        n_weeks=max(16, max_week),
    )
    return require_valid(cohort)

"""The dataset and predictions JSONL contracts.

One object per line. Dataset lines carry exactly the fields
{"id", "student_id", "input", "output", "label", "provenance", "split"};
augmented provenance inlines the parent as "augmented:<parent_id>".
Prediction lines carry {"id", "generated"}. These files are the only
surface other tooling needs.
"""

from __future__ import annotations

import json

from .errors import SchemaError
from .model import PerformanceCategory, Provenance, Split, TextExample


def example_to_line(example: TextExample) -> str:
    if example.provenance is Provenance.AUGMENTED:
        provenance = f"augmented:{example.parent_id}"
    else:
        provenance = "original"
    obj = {
        "id": example.example_id,
        "student_id": example.student_id,
        "input": example.input_text,
        "output": example.output_text,
        "label": example.label.surface_form,
        "provenance": provenance,
        "split": example.split.value if example.split is not None else None,
    }
    return json.dumps(obj, ensure_ascii=False)


def line_to_example(line: str, lineno: int = 0) -> TextExample:
    obj = json.loads(line)
    where = f"line {lineno}" if lineno else "line"
    for fieldname in ("id", "student_id", "input", "output", "label", "provenance", "split"):
        if fieldname not in obj:
            raise SchemaError(f"{where}.{fieldname}", "present", "absent")
    provenance_text = obj["provenance"]
    if provenance_text == "original":
        provenance, parent = Provenance.ORIGINAL, None
    elif isinstance(provenance_text, str) and provenance_text.startswith("augmented:"):
        provenance, parent = Provenance.AUGMENTED, provenance_text.split(":", 1)[1]
    else:
        raise SchemaError(f"{where}.provenance", "original or augmented:<id>", str(provenance_text))
    split_text = obj["split"]
    split = Split(split_text) if split_text is not None else None
    return TextExample(
        example_id=obj["id"],
        student_id=obj["student_id"],
        input_text=obj["input"],
        output_text=obj["output"],
        label=PerformanceCategory.from_surface_form(obj["label"]),
        provenance=provenance,
        parent_id=parent,
        split=split,
    )


def write_examples(examples) -> str:
    return "".join(example_to_line(ex) + "\n" for ex in examples)


def read_examples(text: str) -> list[TextExample]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            out.append(line_to_example(line, lineno))
    return out


def write_predictions(rows: list[dict]) -> str:
    """rows: [{"id": ..., "generated": ...}, ...]"""
    return "".join(
        json.dumps({"id": r["id"], "generated": r["generated"]}, ensure_ascii=False) + "\n"
        for r in rows
    )


def read_predictions(text: str) -> list[dict]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        obj = json.loads(line)
        for fieldname in ("id", "generated"):
            if fieldname not in obj:
                raise SchemaError(f"line {lineno}.{fieldname}", "present", "absent")
        out.append({"id": obj["id"], "generated": obj["generated"]})
    return out

import json

import pytest

from trajtext.errors import SchemaError
from trajtext.jsonl import (
    example_to_line,
    line_to_example,
    read_examples,
    read_predictions,
    write_examples,
    write_predictions,
)
from trajtext.model import PerformanceCategory, Provenance, Split, TextExample
from trajtext.verbalize import verbalize_output


def sample_example(split=None):
    return TextExample(
        example_id="ex-s001",
        student_id="s001",
        input_text="Forecast … the sequence.",
        output_text=verbalize_output(PerformanceCategory.AVERAGE),
        label=PerformanceCategory.AVERAGE,
        split=split,
    )


def test_line_fields_exact():
    obj = json.loads(example_to_line(sample_example()))
    assert set(obj) == {"id", "student_id", "input", "output", "label", "provenance", "split"}
    assert obj["label"] == "average"
    assert obj["provenance"] == "original"
    assert obj["split"] is None


def test_round_trip_original():
    ex = sample_example(split=Split.TRAIN)
    assert line_to_example(example_to_line(ex)) == ex


def test_round_trip_augmented():
    ex = TextExample(
        example_id="ex-s001-aug3",
        student_id="s001",
        input_text="varied text",
        output_text=verbalize_output(PerformanceCategory.AT_RISK),
        label=PerformanceCategory.AT_RISK,
        provenance=Provenance.AUGMENTED,
        parent_id="ex-s001",
        split=Split.TEST,
    )
    back = line_to_example(example_to_line(ex))
    assert back == ex
    assert json.loads(example_to_line(ex))["provenance"] == "augmented:ex-s001"


def test_multi_line_file_round_trip():
    examples = [sample_example(), sample_example(split=Split.TEST)]
    text = write_examples(examples)
    assert text.endswith("\n")
    assert read_examples(text) == examples


def test_missing_field_rejected():
    with pytest.raises(SchemaError):
        line_to_example('{"id": "x"}')


def test_predictions_round_trip():
    rows = [{"id": "ex-1", "generated": "the student will be outstanding."}]
    text = write_predictions(rows)
    assert read_predictions(text) == rows


def test_predictions_require_fields():
    with pytest.raises(SchemaError):
        read_predictions('{"id": "x"}\n')

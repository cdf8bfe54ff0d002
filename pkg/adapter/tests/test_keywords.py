import json
import subprocess
import sys

import pytest

from lmadapter.keywords import AMBIGUOUS, NO_MATCH, keyword_accuracy, keyword_label

from conftest import write_jsonl


@pytest.mark.parametrize(
    "text,expected",
    [
        ("At the end of the semester, the student will be outstanding.", "outstanding"),
        ("the student will be at-risk.", "at-risk"),
        ("prone-to-risk!", "prone-to-risk"),
        ("the student did well", NO_MATCH),
        ("average, maybe outstanding", AMBIGUOUS),
        ("OUTSTANDING", "outstanding"),
        ("outstanding outstanding outstanding", "outstanding"),
    ],
)
def test_keyword_label(text, expected):
    assert keyword_label(text) == expected


def test_hyphenated_form_does_not_fire_inside_longer_form():
    assert keyword_label("prone-to-risk") == "prone-to-risk"


def test_accuracy_counts_only_exact_matches():
    generated = [
        "the student will be outstanding.",
        "no category here",
        "average or outstanding",
        "the student will be average.",
    ]
    labels = ["outstanding", "average", "average", "at-risk"]
    assert keyword_accuracy(generated, labels) == 0.25


def test_accuracy_rejects_empty_and_mismatched():
    with pytest.raises(ValueError):
        keyword_accuracy([], [])
    with pytest.raises(ValueError):
        keyword_accuracy(["x"], ["a", "b"])


def test_parity_with_dataset_tool_eval(tmp_path):
    """The adapter's scorer and the dataset tool's eval subcommand must
    agree exactly on a shared fixture."""
    rows = [
        {
            "id": f"e{i}",
            "student_id": f"s{i}",
            "input": "irrelevant",
            "output": f"At the end of the semester, the student will be {label}.",
            "label": label,
            "provenance": "original",
            "split": "test",
        }
        for i, label in enumerate(
            ["outstanding", "average", "prone-to-risk", "at-risk", "average"]
        )
    ]
    refs = write_jsonl(tmp_path / "refs.jsonl", rows)
    generated = [
        "At the end of the semester, the student will be outstanding.",
        "hard to say",
        "prone-to-risk, or maybe average",
        "definitely at-risk.",
        "the student will be average.",
    ]
    preds = write_jsonl(
        tmp_path / "preds.jsonl",
        [{"id": r["id"], "generated": g} for r, g in zip(rows, generated)],
    )

    ours = keyword_accuracy(generated, [r["label"] for r in rows])

    out = tmp_path / "eval"
    proc = subprocess.run(
        [
            sys.executable,
            "-m",
            "trajtext",
            "eval",
            str(preds),
            str(refs),
            "--out",
            str(out),
        ],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    theirs = json.loads((out / "eval.json").read_text())["accuracy"]
    assert ours == theirs == 0.6

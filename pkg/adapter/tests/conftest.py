import json
from pathlib import Path

import pytest

TOY_CLASSES = [
    ("zephyr", "outstanding"),
    ("quartz", "average"),
    ("bramble", "prone-to-risk"),
    ("flint", "at-risk"),
]


def toy_rows(n_per_class=5):
    rows = []
    i = 0
    for marker, label in TOY_CLASSES:
        for _ in range(n_per_class):
            rows.append(
                {
                    "id": f"t{i}",
                    "student_id": f"s{i}",
                    "input": f"the student wrote {marker} again {marker} today",
                    "output": f"At the end of the semester, the student will be {label}.",
                    "label": label,
                    "provenance": "original",
                    "split": "train",
                }
            )
            i += 1
    return rows


def write_jsonl(path: Path, rows) -> Path:
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


@pytest.fixture()
def toy_train_file(tmp_path):
    return write_jsonl(tmp_path / "train.jsonl", toy_rows())

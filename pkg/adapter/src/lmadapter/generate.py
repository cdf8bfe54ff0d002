"""Greedy generation over a test file plus keyword accuracy."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import EmptyInput, check_context, read_dataset
from .keywords import keyword_accuracy
from .train import load_checkpoint


def generate_and_score(
    checkpoint_dir: str | Path,
    test_file: str | Path,
    out_dir: str | Path,
    max_new_tokens: int = 24,
) -> tuple[Path, float]:
    """Write predictions JSONL ({"id", "generated"} lines) and return its
    path with the keyword accuracy against the test labels."""
    examples = read_dataset(test_file)
    if not examples:
        raise EmptyInput(f"{test_file} has no examples")
    model, tokenizer, spec = load_checkpoint(checkpoint_dir)
    check_context(examples, tokenizer, spec.context_limit)

    rows = []
    generated_texts = []
    with torch.no_grad():
        for ex in examples:
            ids = tokenizer.encode(ex.input_text, add_eos=True)
            input_ids = torch.tensor([ids], dtype=torch.long)
            output = model.generate(
                input_ids=input_ids,
                attention_mask=torch.ones_like(input_ids),
                max_new_tokens=max_new_tokens,
                do_sample=False,
                num_beams=1,
                pad_token_id=tokenizer.pad_id,
                eos_token_id=tokenizer.eos_id,
            )[0]
            if spec.family == "decoder-only":
                output = output[len(ids):]
            text = tokenizer.decode(output.tolist())
            generated_texts.append(text)
            rows.append({"id": ex.example_id, "generated": text})

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    predictions_path = out_dir / "predictions.jsonl"
    predictions_path.write_text(
        "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows), encoding="utf-8"
    )
    accuracy = keyword_accuracy(generated_texts, [ex.label for ex in examples])
    (out_dir / "accuracy.json").write_text(
        json.dumps({"n": len(rows), "accuracy": accuracy}, indent=2) + "\n",
        encoding="utf-8",
    )
    return predictions_path, accuracy

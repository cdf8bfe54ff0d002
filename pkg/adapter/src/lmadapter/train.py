"""Fine-tuning loop and checkpoint layout.

A checkpoint directory holds model.pt (state dict), vocab.json,
spec.json, and training_log.json with the per-epoch mean loss. Runs are
seed-reproducible on a deterministic CPU backend; GPU backends may
introduce nondeterminism outside our control.
"""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .data import EmptyInput, WordTokenizer, check_context, read_dataset
from .models import build_model, trainable_parameters
from .spec import FinetuneSpec


def _encoder_decoder_batch(examples, tokenizer, device):
    inputs = [tokenizer.encode(ex.input_text, add_eos=True) for ex in examples]
    targets = [tokenizer.encode(ex.output_text, add_eos=True) for ex in examples]
    max_in = max(len(x) for x in inputs)
    max_out = max(len(x) for x in targets)
    pad = tokenizer.pad_id
    input_ids = torch.full((len(examples), max_in), pad, dtype=torch.long)
    attention = torch.zeros((len(examples), max_in), dtype=torch.long)
    labels = torch.full((len(examples), max_out), -100, dtype=torch.long)
    for i, (src, dst) in enumerate(zip(inputs, targets)):
        input_ids[i, : len(src)] = torch.tensor(src)
        attention[i, : len(src)] = 1
        labels[i, : len(dst)] = torch.tensor(dst)
    return {
        "input_ids": input_ids.to(device),
        "attention_mask": attention.to(device),
        "labels": labels.to(device),
    }


def _decoder_only_batch(examples, tokenizer, device):
    rows = []
    for ex in examples:
        prompt = tokenizer.encode(ex.input_text)
        completion = tokenizer.encode(ex.output_text, add_eos=True)
        rows.append((prompt, completion))
    width = max(len(p) + len(c) for p, c in rows)
    pad = tokenizer.pad_id
    input_ids = torch.full((len(rows), width), pad, dtype=torch.long)
    attention = torch.zeros((len(rows), width), dtype=torch.long)
    labels = torch.full((len(rows), width), -100, dtype=torch.long)
    for i, (prompt, completion) in enumerate(rows):
        seq = prompt + completion
        input_ids[i, : len(seq)] = torch.tensor(seq)
        attention[i, : len(seq)] = 1
        labels[i, len(prompt) : len(seq)] = torch.tensor(completion)
    return {
        "input_ids": input_ids.to(device),
        "attention_mask": attention.to(device),
        "labels": labels.to(device),
    }


def finetune(train_file: str | Path, spec: FinetuneSpec, out_dir: str | Path) -> Path:
    """Run the fine-tune and write a checkpoint directory.

    The tokenizer vocabulary is built from the training file, inputs are
    checked against the context limit up front, and the per-epoch mean
    loss lands in training_log.json.
    """
    examples = read_dataset(train_file)
    if not examples:
        raise EmptyInput(f"{train_file} has no examples")
    tokenizer = WordTokenizer.build(
        [ex.input_text for ex in examples] + [ex.output_text for ex in examples]
    )
    check_context(examples, tokenizer, spec.context_limit)

    torch.manual_seed(spec.seed)
    device = torch.device("cpu")
    model = build_model(spec, tokenizer).to(device)
    model.train()
    optimizer = torch.optim.AdamW(trainable_parameters(model), lr=spec.learning_rate)
    make_batch = (
        _encoder_decoder_batch if spec.family == "encoder-decoder" else _decoder_only_batch
    )

    losses_per_epoch: list[float] = []
    for _epoch in range(spec.epochs):
        epoch_losses = []
        for start in range(0, len(examples), spec.batch_size):
            batch = make_batch(examples[start : start + spec.batch_size], tokenizer, device)
            optimizer.zero_grad()
            out = model(**batch)
            out.loss.backward()
            optimizer.step()
            epoch_losses.append(float(out.loss.detach()))
        losses_per_epoch.append(sum(epoch_losses) / len(epoch_losses))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    torch.save(model.state_dict(), out_dir / "model.pt")
    tokenizer.save(out_dir / "vocab.json")
    (out_dir / "spec.json").write_text(spec.to_json(), encoding="utf-8")
    (out_dir / "training_log.json").write_text(
        json.dumps({"epoch_losses": losses_per_epoch}, indent=2) + "\n", encoding="utf-8"
    )
    return out_dir


def load_checkpoint(checkpoint_dir: str | Path):
    checkpoint_dir = Path(checkpoint_dir)
    spec = FinetuneSpec.from_json((checkpoint_dir / "spec.json").read_text(encoding="utf-8"))
    tokenizer = WordTokenizer.load(checkpoint_dir / "vocab.json")
    model = build_model(spec, tokenizer)
    state = torch.load(checkpoint_dir / "model.pt", map_location="cpu", weights_only=True)
    model.load_state_dict(state)
    model.eval()
    return model, tokenizer, spec

"""JSONL dataset consumption and the word-level tokenizer.

The adapter never mutates dataset files: it reads the contract fields
{"id", "input", "output", "label"} and builds its own vocabulary from the
training file, so tiny models can run fully offline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


class ContextOverflow(Exception):
    """Inputs exceed the model context; carries the offending example ids."""

    def __init__(self, example_ids: list[str], limit: int):
        self.example_ids = list(example_ids)
        self.limit = limit
        shown = ", ".join(self.example_ids[:5])
        more = "" if len(self.example_ids) <= 5 else f" (+{len(self.example_ids) - 5} more)"
        super().__init__(f"{len(self.example_ids)} example(s) exceed {limit} tokens: {shown}{more}")


class EmptyInput(Exception):
    pass


@dataclass(frozen=True)
class Example:
    example_id: str
    input_text: str
    output_text: str
    label: str


def read_dataset(path: str | Path) -> list[Example]:
    out: list[Example] = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        obj = json.loads(line)
        for key in ("id", "input", "output", "label"):
            if key not in obj:
                raise ValueError(f"{path}, line {lineno}: missing field {key!r}")
        out.append(Example(obj["id"], obj["input"], obj["output"], obj["label"]))
    return out


PAD, EOS, UNK = "<pad>", "<eos>", "<unk>"


class WordTokenizer:
    """Whitespace word-level vocabulary with pad/eos/unk specials."""

    def __init__(self, vocab: list[str]):
        self.tokens = [PAD, EOS, UNK] + [t for t in vocab if t not in (PAD, EOS, UNK)]
        self.index = {tok: i for i, tok in enumerate(self.tokens)}

    @classmethod
    def build(cls, texts: list[str]) -> "WordTokenizer":
        seen: dict[str, None] = {}
        for text in texts:
            for tok in text.split():
                seen.setdefault(tok, None)
        return cls(sorted(seen))

    @property
    def vocab_size(self) -> int:
        return len(self.tokens)

    @property
    def pad_id(self) -> int:
        return self.index[PAD]

    @property
    def eos_id(self) -> int:
        return self.index[EOS]

    @property
    def unk_id(self) -> int:
        return self.index[UNK]

    def encode(self, text: str, add_eos: bool = False) -> list[int]:
        ids = [self.index.get(tok, self.unk_id) for tok in text.split()]
        if add_eos:
            ids.append(self.eos_id)
        return ids

    def decode(self, ids) -> str:
        words = []
        for i in ids:
            tok = self.tokens[int(i)] if 0 <= int(i) < len(self.tokens) else UNK
            if tok in (PAD, EOS):
                continue
            words.append(tok)
        return " ".join(words)

    def save(self, path: str | Path):
        Path(path).write_text(
            json.dumps({"tokens": self.tokens}, ensure_ascii=False) + "\n", encoding="utf-8"
        )

    @classmethod
    def load(cls, path: str | Path) -> "WordTokenizer":
        tokens = json.loads(Path(path).read_text(encoding="utf-8"))["tokens"]
        tokenizer = cls.__new__(cls)
        tokenizer.tokens = tokens
        tokenizer.index = {tok: i for i, tok in enumerate(tokens)}
        return tokenizer


def check_context(examples: list[Example], tokenizer: WordTokenizer, limit: int):
    too_long = [
        ex.example_id for ex in examples if len(tokenizer.encode(ex.input_text)) + 1 > limit
    ]
    if too_long:
        raise ContextOverflow(too_long, limit)

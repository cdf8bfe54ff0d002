"""lmadapter: fine-tune small language models on trajtext JSONL datasets.

A deliberately thin consumer of the dataset contract: it reads the JSONL
files the dataset tooling emits, fine-tunes an encoder-decoder model (full
AdamW) or a decoder-only model (low-rank adapters), and writes predictions
files that the dataset tooling's eval command scores identically.
"""

__version__ = "0.1.0"

from .data import ContextOverflow, EmptyInput, Example, WordTokenizer, read_dataset
from .generate import generate_and_score
from .keywords import keyword_accuracy, keyword_label
from .spec import FinetuneSpec
from .train import finetune, load_checkpoint

__all__ = [
    "ContextOverflow",
    "EmptyInput",
    "Example",
    "FinetuneSpec",
    "WordTokenizer",
    "finetune",
    "generate_and_score",
    "keyword_accuracy",
    "keyword_label",
    "load_checkpoint",
    "read_dataset",
]

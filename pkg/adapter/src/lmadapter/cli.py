"""Command-line driver: finetune and generate."""

from __future__ import annotations

import argparse
import sys

from .data import ContextOverflow, EmptyInput
from .generate import generate_and_score
from .spec import FinetuneSpec
from .train import finetune


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmadapter",
        description="Fine-tune a language model on a trajtext dataset JSONL and score generations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ft = sub.add_parser("finetune", help="fine-tune on a train JSONL")
    ft.add_argument("--train", required=True, help="train dataset JSONL")
    ft.add_argument("--out", required=True, help="checkpoint directory")
    ft.add_argument("--family", choices=["encoder-decoder", "decoder-only"], default=None)
    ft.add_argument("--model", dest="model_id", default=None, help="built-in tiny-t5 / tiny-causal or a local checkpoint path")
    ft.add_argument("--epochs", type=int, default=None)
    ft.add_argument("--batch-size", type=int, default=None)
    ft.add_argument("--learning-rate", type=float, default=None)
    ft.add_argument("--seed", type=int, default=None)

    gen = sub.add_parser("generate", help="greedy-generate over a test JSONL and score")
    gen.add_argument("--checkpoint", required=True)
    gen.add_argument("--test", required=True, help="test dataset JSONL")
    gen.add_argument("--out", required=True, help="output directory for predictions")
    gen.add_argument("--max-new-tokens", type=int, default=24)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "finetune":
            spec = FinetuneSpec(family=args.family or "encoder-decoder").override(
                model_id=args.model_id,
                epochs=args.epochs,
                batch_size=args.batch_size,
                learning_rate=args.learning_rate,
                seed=args.seed,
            )
            out = finetune(args.train, spec, args.out)
            print(f"checkpoint written to {out}")
        else:
            predictions, accuracy = generate_and_score(
                args.checkpoint, args.test, args.out, max_new_tokens=args.max_new_tokens
            )
            print(f"wrote {predictions}; keyword accuracy {accuracy:.6f}")
        return 0
    except (ContextOverflow, EmptyInput, FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

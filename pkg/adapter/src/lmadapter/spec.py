"""Fine-tuning hyperparameter bundle.

Defaults mirror the reference setup: low-rank adapters at r=16 with
scaling 64 and dropout 0.1 on the decoder-only path, learning rate 2e-4
decoder-only and 3e-4 encoder-decoder, batch size 4, 50 epochs, context
limits of 4096 and 512 tokens respectively. Everything is overridable.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class FinetuneSpec:
    family: str = "encoder-decoder"  # or "decoder-only"
    model_id: str = "tiny-t5"        # built-in: tiny-t5, tiny-causal
    lora_r: int = 16
    lora_alpha: int = 64
    lora_dropout: float = 0.1
    learning_rate: float | None = None  # family default when None
    batch_size: int = 4
    epochs: int = 50
    context_limit: int | None = None    # family default when None
    seed: int = 0

    def __post_init__(self):
        if self.family not in ("encoder-decoder", "decoder-only"):
            raise ValueError(f"unknown model family {self.family!r}")
        if self.learning_rate is None:
            object.__setattr__(
                self,
                "learning_rate",
                2e-4 if self.family == "decoder-only" else 3e-4,
            )
        if self.context_limit is None:
            object.__setattr__(
                self,
                "context_limit",
                4096 if self.family == "decoder-only" else 512,
            )

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FinetuneSpec":
        return cls(**json.loads(text))

    def override(self, **kwargs) -> "FinetuneSpec":
        filtered = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **filtered) if filtered else self

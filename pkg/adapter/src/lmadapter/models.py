"""Model construction: built-in tiny architectures plus LoRA injection.

With no model hub available, the default models are small randomly
initialized transformers over the word-level vocabulary; a local
checkpoint path can be supplied instead for either family. The
decoder-only path trains only injected low-rank adapters, the
encoder-decoder path fine-tunes fully with AdamW.
"""

from __future__ import annotations

import math

import torch
from torch import nn
from transformers import LlamaConfig, LlamaForCausalLM, T5Config, T5ForConditionalGeneration

from .data import WordTokenizer
from .spec import FinetuneSpec


def build_encoder_decoder(vocab: WordTokenizer) -> T5ForConditionalGeneration:
    config = T5Config(
        vocab_size=vocab.vocab_size,
        d_model=128,
        d_kv=32,
        d_ff=256,
        num_layers=2,
        num_decoder_layers=2,
        num_heads=4,
        dropout_rate=0.0,
        pad_token_id=vocab.pad_id,
        eos_token_id=vocab.eos_id,
        decoder_start_token_id=vocab.pad_id,
        tie_word_embeddings=True,
    )
    return T5ForConditionalGeneration(config)


def build_decoder_only(vocab: WordTokenizer, context_limit: int) -> LlamaForCausalLM:
    config = LlamaConfig(
        vocab_size=vocab.vocab_size,
        hidden_size=128,
        intermediate_size=256,
        num_hidden_layers=2,
        num_attention_heads=4,
        num_key_value_heads=4,
        max_position_embeddings=context_limit,
        pad_token_id=vocab.pad_id,
        eos_token_id=vocab.eos_id,
        bos_token_id=vocab.pad_id,
    )
    return LlamaForCausalLM(config)


class LoRALinear(nn.Module):
    """A frozen linear layer plus a trainable low-rank update."""

    def __init__(self, base: nn.Linear, r: int, alpha: int, dropout: float):
        super().__init__()
        self.base = base
        for p in self.base.parameters():
            p.requires_grad_(False)
        self.lora_a = nn.Parameter(torch.empty(r, base.in_features))
        self.lora_b = nn.Parameter(torch.zeros(base.out_features, r))
        nn.init.kaiming_uniform_(self.lora_a, a=math.sqrt(5))
        self.scaling = alpha / r
        self.dropout = nn.Dropout(dropout)

    def forward(self, x):
        frozen = self.base(x)
        update = self.dropout(x) @ self.lora_a.T @ self.lora_b.T
        return frozen + self.scaling * update


LORA_TARGETS = ("q_proj", "v_proj")


def inject_lora(model: nn.Module, spec: FinetuneSpec) -> int:
    """Freeze the model and wrap attention projections with adapters.

    Returns the number of injected modules.
    """
    for p in model.parameters():
        p.requires_grad_(False)
    injected = 0
    for module in model.modules():
        for name in LORA_TARGETS:
            child = getattr(module, name, None)
            if isinstance(child, nn.Linear):
                setattr(
                    module,
                    name,
                    LoRALinear(child, spec.lora_r, spec.lora_alpha, spec.lora_dropout),
                )
                injected += 1
    if injected == 0:
        raise ValueError("no attention projections found for adapter injection")
    return injected


def build_model(spec: FinetuneSpec, vocab: WordTokenizer):
    """Instantiate the requested family; decoder-only gets LoRA adapters."""
    torch.manual_seed(spec.seed)
    if spec.family == "encoder-decoder":
        if spec.model_id != "tiny-t5":
            model = T5ForConditionalGeneration.from_pretrained(spec.model_id)
        else:
            model = build_encoder_decoder(vocab)
        return model
    if spec.model_id != "tiny-causal":
        model = LlamaForCausalLM.from_pretrained(spec.model_id)
    else:
        model = build_decoder_only(vocab, spec.context_limit)
    inject_lora(model, spec)
    return model


def trainable_parameters(model: nn.Module):
    return [p for p in model.parameters() if p.requires_grad]

"""Transformer encoder: embeddings, N pre-norm layers, final layer norm.

Each layer can also hand back its attention probabilities averaged over heads,
which is what the contact head consumes.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from .nn import LayerNorm, Linear, Module, parameter
from .numerics import ShapeError, Tensor, embedding, gelu, matmul, mean, softmax
from .tokenizer import DEFAULT_VOCAB

MASK_FILL = -1e9


class LengthError(ValueError):
    pass


@dataclass
class EncoderConfig:
    n_layers: int = 4
    n_heads: int = 4
    d_model: int = 64
    d_ff: int = 256
    max_len: int = 512
    vocab_size: int = len(DEFAULT_VOCAB)

    def __post_init__(self):
        for key in ("n_layers", "n_heads", "d_model", "d_ff", "max_len", "vocab_size"):
            if getattr(self, key) < 1:
                raise ValueError(f"encoder {key} must be >= 1")
        if self.d_model % self.n_heads:
            raise ValueError(f"d_model={self.d_model} not divisible by n_heads={self.n_heads}")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class EncoderOutput:
    hidden: Tensor  # (B, L', d_model)
    layer_attn: list[Tensor] = field(default_factory=list)  # N x (B, L', L'), head-averaged
    mask: np.ndarray | None = None  # (B, L') bool


def key_mask_bias(mask: np.ndarray) -> np.ndarray:
    """Additive bias (B, 1, 1, L) that removes invalid keys from a softmax."""
    return np.where(mask, 0.0, MASK_FILL)[:, None, None, :]


def attention_scores(q: Tensor, k: Tensor, mask: np.ndarray | None = None) -> Tensor:
    """softmax(q k^T / sqrt(d_k)) over keys; ``mask`` is (B, L) key validity."""
    d_k = q.shape[-1]
    logits = matmul(q, k.T) * (1.0 / np.sqrt(d_k))
    if mask is not None:
        logits = logits + key_mask_bias(mask)
    return softmax(logits, axis=-1)


def head_average(per_head: Tensor, axis: int = -3) -> Tensor:
    """Mean over the head axis: (..., H, L, L) -> (..., L, L)."""
    return mean(per_head, axis=axis)


def split_heads(x: Tensor, n_heads: int) -> Tensor:
    b, length, d = x.shape
    return x.reshape(b, length, n_heads, d // n_heads).transpose(0, 2, 1, 3)


def merge_heads(x: Tensor) -> Tensor:
    b, h, length, dh = x.shape
    return x.transpose(0, 2, 1, 3).reshape(b, length, h * dh)


class SelfAttention(Module):
    def __init__(self, cfg: EncoderConfig, rng: np.random.Generator):
        d = cfg.d_model
        self.n_heads = cfg.n_heads
        self.query = Linear(d, d, rng)
        self.key = Linear(d, d, rng)
        self.value = Linear(d, d, rng)
        self.dense = Linear(d, d, rng)

    def forward(self, x: Tensor, mask: np.ndarray) -> tuple[Tensor, Tensor]:
        q = split_heads(self.query(x), self.n_heads)
        k = split_heads(self.key(x), self.n_heads)
        v = split_heads(self.value(x), self.n_heads)
        probs = attention_scores(q, k, mask)
        return self.dense(merge_heads(matmul(probs, v))), probs


class TransformerLayer(Module):
    def __init__(self, cfg: EncoderConfig, rng: np.random.Generator):
        self.attn_norm = LayerNorm(cfg.d_model)
        self.attention = SelfAttention(cfg, rng)
        self.ffn_norm = LayerNorm(cfg.d_model)
        self.fc1 = Linear(cfg.d_model, cfg.d_ff, rng)
        self.fc2 = Linear(cfg.d_ff, cfg.d_model, rng)

    def forward(self, x: Tensor, mask: np.ndarray) -> tuple[Tensor, Tensor]:
        a, probs = self.attention(self.attn_norm(x), mask)
        x = x + a
        x = x + self.fc2(gelu(self.fc1(self.ffn_norm(x))))
        return x, probs


class Encoder(Module):
    def __init__(self, cfg: EncoderConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.token_embedding = parameter(rng.normal(0.0, 0.02, (cfg.vocab_size, cfg.d_model)))
        self.position_embedding = parameter(rng.normal(0.0, 0.02, (cfg.max_len, cfg.d_model)))
        self.layers = [TransformerLayer(cfg, rng) for _ in range(cfg.n_layers)]
        self.final_norm = LayerNorm(cfg.d_model)

    def forward(self, ids: np.ndarray, mask: np.ndarray | None = None,
                collect_attn: bool = False) -> EncoderOutput:
        ids = np.asarray(ids)
        if ids.ndim != 2:
            raise ShapeError(f"token ids must be (batch, length), got shape {ids.shape}")
        if ids.shape[1] > self.cfg.max_len:
            raise LengthError(f"sequence length {ids.shape[1]} exceeds max_len={self.cfg.max_len}")
        if mask is None:
            mask = ids != DEFAULT_VOCAB.pad_id
        x = embedding(self.token_embedding, ids) + self.position_embedding[: ids.shape[1]]
        layer_attn = []
        for layer in self.layers:
            x, probs = layer(x, mask)
            if collect_attn:
                layer_attn.append(head_average(probs, axis=1))
        return EncoderOutput(hidden=self.final_norm(x), layer_attn=layer_attn, mask=mask)


class MaskedLM(Module):
    """Encoder plus a vocabulary projection, used for pretraining."""

    def __init__(self, cfg: EncoderConfig, rng: np.random.Generator):
        self.encoder = Encoder(cfg, rng)
        self.lm_head = Linear(cfg.d_model, cfg.vocab_size, rng, init_std=0.02)

    def forward(self, ids: np.ndarray, mask: np.ndarray | None = None) -> Tensor:
        return self.lm_head(self.encoder(ids, mask).hidden)

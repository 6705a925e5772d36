"""Downstream prediction heads.

``SMH``    linear -> 2 feedforward blocks -> attention pooling -> prediction.
``MAH``    q/k/v projections -> multihead self-attention -> residual + norm ->
           feedforward block -> attention pooling -> prediction.
``CM-MAH`` as MAH, but the attention logits are weighted by a contact map.

Token-level heads skip pooling and predict one row per residue.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .encoder import MASK_FILL, merge_heads, split_heads
from .nn import FeedForward, LayerNorm, Linear, Module, parameter
from .numerics import ShapeError, Tensor, dropout, matmul, softmax

HEAD_KINDS = ("SMH", "MAH", "CM-MAH")
COMBINE_MODES = ("elementwise", "matmul")


@dataclass
class HeadConfig:
    kind: str = "CM-MAH"
    d_l: int = 32
    n_heads: int = 4
    d_head: int = 64
    out_dim: int = 1
    token_level: bool = False
    dropout: float = 0.1
    contact_combine: str = "elementwise"

    def __post_init__(self):
        self.kind = self.kind.upper()
        if self.kind not in HEAD_KINDS:
            raise ValueError(f"unknown head kind {self.kind!r}; choose from {HEAD_KINDS}")
        if self.contact_combine not in COMBINE_MODES:
            raise ValueError(f"contact_combine must be one of {COMBINE_MODES}")
        if self.kind != "SMH" and self.d_head % self.n_heads:
            raise ValueError(f"d_head={self.d_head} not divisible by n_heads={self.n_heads}")
        if min(self.d_l, self.n_heads, self.d_head, self.out_dim) < 1:
            raise ValueError("head dimensions must be >= 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout rate must lie in [0, 1)")

    @property
    def uses_contacts(self) -> bool:
        return self.kind == "CM-MAH"

    def to_dict(self) -> dict:
        return asdict(self)


class AttentionPooling(Module):
    """Multi-head attention pooling of (B, L, d_k) features into (B, d_k).

    ``w_query`` (H, d_l), ``w_key`` and ``w_value`` (H, d_l, d_k),
    ``w_out`` (d_k, H, d_l).
    """

    def __init__(self, d_k: int, d_l: int, n_heads: int, rng: np.random.Generator,
                 rate: float = 0.1):
        self.w_query = parameter(rng.normal(0.0, 1.0 / np.sqrt(d_l), (n_heads, d_l)))
        self.w_key = parameter(rng.normal(0.0, 1.0 / np.sqrt(d_k), (n_heads, d_l, d_k)))
        self.w_value = parameter(rng.normal(0.0, 1.0 / np.sqrt(d_k), (n_heads, d_l, d_k)))
        self.w_out = parameter(rng.normal(0.0, 1.0 / np.sqrt(n_heads * d_l), (d_k, n_heads, d_l)))
        self.rate = rate
        self.rng = rng
        self.d_l, self.n_heads, self.d_k = d_l, n_heads, d_k

    def weights(self, x: Tensor, mask: np.ndarray) -> Tensor:
        """Pooling distribution S, shape (B, H, L), before dropout."""
        b, length, d_k = x.shape
        if d_k != self.d_k:
            raise ShapeError(f"pooling expects feature dim {self.d_k}, got input {x.shape}")
        if mask.shape != (b, length):
            raise ShapeError(f"mask shape {mask.shape} does not match features {x.shape}")
        if not mask.any(axis=1).all():
            raise ValueError("attention pooling got a sequence with no valid residues")
        keys = matmul(x.reshape(b, 1, length, d_k), self.w_key.transpose(0, 2, 1))  # B,H,L,d_l
        scores = matmul(keys, self.w_query.reshape(self.n_heads, self.d_l, 1))  # B,H,L,1
        scores = scores.reshape(b, self.n_heads, length) * (1.0 / np.sqrt(self.d_l))
        scores = scores + np.where(mask, 0.0, MASK_FILL)[:, None, :]
        return softmax(scores, axis=-1)

    def forward(self, x: Tensor, mask: np.ndarray) -> Tensor:
        b, length, d_k = x.shape
        s = dropout(self.weights(x, mask), self.rate, self.rng, self.training)
        values = matmul(x.reshape(b, 1, length, d_k), self.w_value.transpose(0, 2, 1))
        pooled = matmul(s.reshape(b, self.n_heads, 1, length), values)  # B,H,1,d_l
        pooled = pooled.reshape(b, self.n_heads * self.d_l)
        return matmul(pooled, self.w_out.reshape(d_k, self.n_heads * self.d_l).T)


def attention_pool(x: Tensor, pool: AttentionPooling, mask: np.ndarray) -> Tensor:
    return pool(x, mask)


class _Head(Module):
    def forward(self, x: Tensor, mask: np.ndarray, contact: Tensor | None = None) -> Tensor:
        h = self.features(x, mask, contact)
        if self.cfg.token_level:
            return self.predict(h)
        return self.predict(self.pool(h, mask))

    def pooled(self, x: Tensor, mask: np.ndarray, contact: Tensor | None = None) -> Tensor:
        """Protein-level feature vector (B, d_head) fed to the prediction layer."""
        return self.pool(self.features(x, mask, contact), mask)


class SMHead(_Head):
    def __init__(self, cfg: HeadConfig, d_in: int, rng: np.random.Generator):
        self.cfg = cfg
        self.proj = Linear(d_in, cfg.d_head, rng)
        self.blocks = [FeedForward(cfg.d_head, rng), FeedForward(cfg.d_head, rng)]
        self.pool = AttentionPooling(cfg.d_head, cfg.d_l, cfg.n_heads, rng, cfg.dropout)
        self.predict = Linear(cfg.d_head, cfg.out_dim, rng)

    def features(self, x: Tensor, mask: np.ndarray, contact: Tensor | None = None) -> Tensor:
        h = self.proj(x)
        for block in self.blocks:
            h = block(h)
        return h


class MAHead(_Head):
    """Multihead-attention head; with ``cfg.kind == 'CM-MAH'`` it consumes contacts."""

    def __init__(self, cfg: HeadConfig, d_in: int, rng: np.random.Generator):
        self.cfg = cfg
        self.query = Linear(d_in, cfg.d_head, rng)
        self.key = Linear(d_in, cfg.d_head, rng)
        self.value = Linear(d_in, cfg.d_head, rng)
        self.skip = Linear(d_in, cfg.d_head, rng)
        self.dense = Linear(cfg.d_head, cfg.d_head, rng)
        self.norm = LayerNorm(cfg.d_head)
        self.ffn = FeedForward(cfg.d_head, rng)
        self.pool = AttentionPooling(cfg.d_head, cfg.d_l, cfg.n_heads, rng, cfg.dropout)
        self.predict = Linear(cfg.d_head, cfg.out_dim, rng)

    def attention(self, x: Tensor, mask: np.ndarray, contact: Tensor | None = None) -> Tensor:
        """Attention probabilities (B, H, L, L)."""
        q = split_heads(self.query(x), self.cfg.n_heads)
        k = split_heads(self.key(x), self.cfg.n_heads)
        logits = matmul(q, k.T)
        if contact is not None:
            b, length = mask.shape
            if contact.shape != (b, length, length):
                raise ShapeError(
                    f"contact map shape {contact.shape} does not match residues ({b}, {length})"
                )
            if self.cfg.contact_combine == "elementwise":
                logits = logits * contact.reshape(b, 1, length, length)
            else:
                pair = (mask[:, :, None] & mask[:, None, :]).astype(float)
                logits = matmul(logits, (contact * pair).reshape(b, 1, length, length))
        logits = logits * (1.0 / np.sqrt(self.cfg.d_head))
        logits = logits + np.where(mask, 0.0, MASK_FILL)[:, None, None, :]
        return softmax(logits, axis=-1)

    def features(self, x: Tensor, mask: np.ndarray, contact: Tensor | None = None) -> Tensor:
        if self.cfg.uses_contacts and contact is None:
            raise ValueError("CM-MAH head needs a contact map")
        if not self.cfg.uses_contacts:
            contact = None
        probs = self.attention(x, mask, contact)
        v = split_heads(self.value(x), self.cfg.n_heads)
        attended = self.dense(merge_heads(matmul(probs, v)))
        h = self.norm(self.skip(x) + attended)
        return self.ffn(h)


def build_head(cfg: HeadConfig, d_in: int, rng: np.random.Generator) -> _Head:
    if cfg.kind == "SMH":
        return SMHead(cfg, d_in, rng)
    return MAHead(cfg, d_in, rng)


def smh_forward(x: Tensor, mask: np.ndarray, head: SMHead) -> Tensor:
    if head.cfg.kind != "SMH":
        raise ValueError(f"expected an SMH head, got {head.cfg.kind}")
    return head(x, mask)


def mah_forward(x: Tensor, mask: np.ndarray, head: MAHead) -> Tensor:
    if head.cfg.kind != "MAH":
        raise ValueError(f"expected an MAH head, got {head.cfg.kind}")
    return head(x, mask)


def cm_mah_forward(x: Tensor, mask: np.ndarray, contact: Tensor, head: MAHead) -> Tensor:
    if head.cfg.kind != "CM-MAH":
        raise ValueError(f"expected a CM-MAH head, got {head.cfg.kind}")
    if contact.shape[-1] != x.shape[1]:
        raise ShapeError(f"contact map length {contact.shape[-1]} vs {x.shape[1]} residues")
    return head(x, mask, contact)

"""Encoder + contact head + downstream head, and the task-specific glue."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contact import ContactHead, residue_mask
from .data import TaskSpec, TokenBatch
from .encoder import Encoder, EncoderConfig
from .heads import HeadConfig, build_head
from .losses import cross_entropy, ml_bce, mse
from .nn import Module
from .numerics import Tensor, sigmoid


def seeded_streams(seed: int, n: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(int(seed)).spawn(n)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


@dataclass
class ModelOutput:
    logits: Tensor
    contacts: Tensor | None
    residue_mask: np.ndarray


class ProteinModel(Module):
    def __init__(self, enc_cfg: EncoderConfig, head_cfg: HeadConfig, seed: int = 0):
        enc_rng, contact_rng, head_rng = seeded_streams(seed, 3)
        self.encoder = Encoder(enc_cfg, enc_rng)
        self.contact_head = ContactHead(enc_cfg.n_layers, contact_rng)
        self.head = build_head(head_cfg, enc_cfg.d_model, head_rng)
        self.head_cfg = head_cfg

    def forward(self, ids: np.ndarray, mask: np.ndarray | None = None,
                with_contacts: bool | None = None) -> ModelOutput:
        if with_contacts is None:
            with_contacts = self.head_cfg.uses_contacts
        enc = self.encoder(ids, mask, collect_attn=with_contacts)
        res_mask = residue_mask(enc.mask)
        residues = enc.hidden[:, 1:-1, :]
        contacts = self.contact_head(enc.layer_attn) if with_contacts else None
        logits = self.head(residues, res_mask, contacts)
        return ModelOutput(logits, contacts, res_mask)

    def run(self, batch: TokenBatch, with_contacts: bool | None = None) -> ModelOutput:
        return self.forward(batch.ids, batch.mask, with_contacts)


def task_loss(spec: TaskSpec, logits: Tensor, batch: TokenBatch) -> Tensor:
    y = batch.labels
    if spec.kind == "seq-multilabel":
        return ml_bce(sigmoid(logits), y)
    if spec.kind == "seq-multiclass":
        return cross_entropy(logits, y)
    if spec.kind == "token-multiclass":
        return cross_entropy(logits, np.where(y >= 0, y, 0), valid=y >= 0)
    return mse(logits.reshape(logits.shape[0]), y)


def task_predictions(spec: TaskSpec, logits: np.ndarray) -> np.ndarray:
    """Probabilities (multilabel), class indices (multiclass), or scalars."""
    if spec.kind == "seq-multilabel":
        return sigmoid(logits).data
    if spec.kind in ("seq-multiclass", "token-multiclass"):
        return logits.argmax(axis=-1)
    return logits.reshape(logits.shape[0])

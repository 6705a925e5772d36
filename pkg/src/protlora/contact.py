"""Contact head: layer attention maps -> symmetric contact probabilities.

Per layer, the head-averaged attention ``C`` is symmetrized as ``C + C^T``;
the N symmetric maps are stacked and combined with one weight per layer plus
a bias, then squashed with a sigmoid. BOS/EOS rows and columns are dropped
from the result.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nn import Module, parameter
from .numerics import ShapeError, Tensor, sigmoid, stack


class ContactConfigError(ValueError):
    pass


def symmetrize(c: Tensor) -> Tensor:
    if c.ndim < 2 or c.shape[-1] != c.shape[-2]:
        raise ShapeError(f"symmetrize needs square matrices, got shape {c.shape}")
    return c + c.T


def stack_layers(per_layer: list[Tensor]) -> Tensor:
    """(N, ..., L, L) with layer order preserved; the layer axis goes first."""
    if not per_layer:
        raise ShapeError("stack_layers needs at least one layer")
    return stack(per_layer, axis=0)


class ContactHead(Module):
    def __init__(self, n_layers: int, rng: np.random.Generator, init_std: float = 0.1):
        self.weight = parameter(rng.normal(0.0, init_std, size=(n_layers, 1)))
        self.bias = parameter(np.zeros(()))

    def forward(self, layer_attn: list[Tensor]) -> Tensor:
        """Residue-only contact probabilities, shape (B, L'-2, L'-2)."""
        stacked = stack_layers([symmetrize(c) for c in layer_attn])
        return strip_special(project_contacts(stacked, self.weight, self.bias))


def project_contacts(stacked: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """sigmoid(sum_n weight[n] * stacked[n] + bias), layer axis first.

    The per-layer sum is accumulated elementwise so that positions (i, j) and
    (j, i) see identical floating-point operations and symmetry is exact.
    """
    n = stacked.shape[0]
    if weight.size != n:
        raise ContactConfigError(f"contact weight has {weight.size} entries for {n} layers")
    w = weight.reshape(n)
    acc = stacked[0] * w[0]
    for i in range(1, n):
        acc = acc + stacked[i] * w[i]
    return sigmoid(acc + bias)


def strip_special(probs: Tensor) -> Tensor:
    """Drop the first (BOS) and last row/column of every map.

    For the longest sequence in a right-padded batch the last position is EOS;
    shorter sequences keep their EOS/PAD positions, which the residue mask
    marks invalid.
    """
    return probs[..., 1:-1, 1:-1]


def residue_mask(token_mask: np.ndarray) -> np.ndarray:
    """Validity of residue positions after stripping BOS/EOS, shape (B, L'-2)."""
    lengths = token_mask.sum(axis=1) - 2
    width = token_mask.shape[1] - 2
    return np.arange(width)[None, :] < lengths[:, None]


@dataclass
class ContactMap:
    probs: np.ndarray  # (L, L)

    @property
    def length(self) -> int:
        return self.probs.shape[0]


def contact_maps(probs: Tensor, token_mask: np.ndarray) -> list[ContactMap]:
    """Per-record maps trimmed to each record's residue count."""
    lengths = token_mask.sum(axis=1) - 2
    return [ContactMap(probs.data[b, :n, :n].copy()) for b, n in enumerate(lengths)]

"""Small module system on top of :mod:`protlora.numerics`.

A :class:`Module` discovers its parameters by walking attributes: any
:class:`Tensor` attribute is a parameter, any :class:`Module` (or list of
modules) is a child. Frozen parameters are simply ``requires_grad=False``.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .numerics import DTYPE, Tensor, gelu, layer_norm, matmul


def parameter(data, trainable: bool = True) -> Tensor:
    return Tensor(np.array(data, dtype=DTYPE), requires_grad=trainable)


class Module:
    training: bool = False

    def named_children(self) -> Iterator[tuple[str, "Module"]]:
        for name, value in vars(self).items():
            if isinstance(value, Module):
                yield name, value
            elif isinstance(value, (list, tuple)):
                for i, item in enumerate(value):
                    if isinstance(item, Module):
                        yield f"{name}.{i}", item

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Tensor]]:
        for name, value in vars(self).items():
            if isinstance(value, Tensor):
                yield prefix + name, value
        for name, child in self.named_children():
            yield from child.named_parameters(f"{prefix}{name}.")

    def parameters(self) -> list[Tensor]:
        return [p for _, p in self.named_parameters()]

    def trainable_parameters(self) -> list[tuple[str, Tensor]]:
        return [(n, p) for n, p in self.named_parameters() if p.requires_grad]

    def freeze(self) -> None:
        for p in self.parameters():
            p.requires_grad = False

    def unfreeze(self) -> None:
        for p in self.parameters():
            p.requires_grad = True

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.grad = None

    def train(self, mode: bool = True) -> "Module":
        self.training = mode
        for _, child in self.named_children():
            child.train(mode)
        return self

    def eval(self) -> "Module":
        return self.train(False)

    def state_dict(self) -> dict[str, np.ndarray]:
        return {n: p.data.copy() for n, p in self.named_parameters()}

    def load_state_dict(self, state: dict[str, np.ndarray], strict: bool = True) -> None:
        own = dict(self.named_parameters())
        if strict:
            missing = sorted(set(own) - set(state))
            if missing:
                raise KeyError(f"missing tensors in state: {missing[:5]}")
        for name, value in state.items():
            if name not in own:
                if strict:
                    raise KeyError(f"unexpected tensor in state: {name}")
                continue
            value = np.asarray(value, dtype=DTYPE)
            if value.shape != own[name].shape:
                raise ValueError(
                    f"shape mismatch for {name}: checkpoint {value.shape} vs model {own[name].shape}"
                )
            own[name].data = value.copy()

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)


class Linear(Module):
    """``y = x W^T + b`` with ``W`` shaped (out, in)."""

    def __init__(self, d_in: int, d_out: int, rng: np.random.Generator, bias: bool = True,
                 init_std: float | None = None):
        if init_std is None:
            bound = 1.0 / np.sqrt(d_in)
            w = rng.uniform(-bound, bound, size=(d_out, d_in))
        else:
            w = rng.normal(0.0, init_std, size=(d_out, d_in))
        self.weight = parameter(w)
        self.bias = parameter(np.zeros(d_out)) if bias else None
        self.d_in, self.d_out = d_in, d_out

    def forward(self, x: Tensor) -> Tensor:
        y = matmul(x, self.weight.T)
        if self.bias is not None:
            y = y + self.bias
        return y


class LayerNorm(Module):
    def __init__(self, d: int, eps: float = 1e-5):
        self.gain = parameter(np.ones(d))
        self.bias = parameter(np.zeros(d))
        self.eps = eps

    def forward(self, x: Tensor) -> Tensor:
        return layer_norm(x, self.gain, self.bias, self.eps)


class FeedForward(Module):
    """Position-wise MLP block: ``norm(x + W2 gelu(W1 x))``."""

    def __init__(self, d: int, rng: np.random.Generator, expansion: int = 4):
        self.fc1 = Linear(d, expansion * d, rng)
        self.fc2 = Linear(expansion * d, d, rng)
        self.norm = LayerNorm(d)

    def forward(self, x: Tensor) -> Tensor:
        return self.norm(x + self.fc2(gelu(self.fc1(x))))


def count_parameters(module: Module) -> tuple[int, int]:
    """(trainable, frozen) scalar counts."""
    trainable = frozen = 0
    for _, p in module.named_parameters():
        if p.requires_grad:
            trainable += p.size
        else:
            frozen += p.size
    return trainable, frozen

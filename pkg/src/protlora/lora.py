"""Low-rank adapters for the attention projections of an :class:`Encoder`.

A wrapped map computes ``h = W0 x + b + (alpha / r) * B (A x)`` with ``W0``
and ``b`` frozen. ``A`` starts Gaussian and ``B`` starts at zero, so a freshly
injected model reproduces the base model exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .encoder import Encoder
from .nn import Linear, Module, parameter
from .numerics import ShapeError, Tensor, make_rng, matmul

TARGETS = ("query", "key", "value", "dense")
_ALIASES = {"q": "query", "k": "key", "v": "value", "d": "dense", "o": "dense"}


class LoraConfigError(ValueError):
    pass


def normalize_targets(targets) -> tuple[str, ...]:
    if isinstance(targets, str):
        targets = [t for t in targets.replace("+", ",").split(",") if t.strip()]
    out = []
    for t in targets:
        name = _ALIASES.get(t.strip().lower(), t.strip().lower())
        if name not in TARGETS:
            raise LoraConfigError(f"unknown LoRA target {t!r}; choose from {TARGETS}")
        if name not in out:
            out.append(name)
    return tuple(sorted(out, key=TARGETS.index))


@dataclass
class LoraConfig:
    rank: int = 32
    alpha: float = 32.0
    targets: tuple[str, ...] = ("query", "key", "value")
    seed: int = 0
    init_std: float = 0.02

    def __post_init__(self):
        self.targets = normalize_targets(self.targets)
        if not self.targets:
            raise LoraConfigError("LoRA needs at least one target module")
        if self.rank < 1:
            raise LoraConfigError(f"LoRA rank must be >= 1, got {self.rank}")

    @property
    def scaling(self) -> float:
        return self.alpha / self.rank

    def to_dict(self) -> dict:
        return {"rank": self.rank, "alpha": self.alpha, "targets": list(self.targets),
                "seed": self.seed, "init_std": self.init_std}


class LoraLinear(Module):
    def __init__(self, base: Linear, rank: int, alpha: float, rng: np.random.Generator,
                 init_std: float = 0.02):
        d, k = base.weight.shape
        if rank > min(d, k):
            raise LoraConfigError(f"rank {rank} exceeds min(d, k) = {min(d, k)}")
        self.weight = base.weight
        self.bias = base.bias
        self.weight.requires_grad = False
        if self.bias is not None:
            self.bias.requires_grad = False
        self.lora_A = parameter(rng.normal(0.0, init_std, size=(rank, k)))
        self.lora_B = parameter(np.zeros((d, rank)))
        self.rank = rank
        self.alpha = float(alpha)
        self.d_in, self.d_out = k, d

    @property
    def scaling(self) -> float:
        return self.alpha / self.rank

    def forward(self, x: Tensor) -> Tensor:
        return lora_forward(self, x)

    def delta_weight(self) -> np.ndarray:
        return self.scaling * (self.lora_B.data @ self.lora_A.data)


def lora_forward(m: LoraLinear, x: Tensor) -> Tensor:
    if x.shape[-1] != m.d_in:
        raise ShapeError(f"LoRA input last dim {x.shape[-1]} does not match weight {m.weight.shape}")
    # base path first, in the same order as Linear, so B == 0 gives identical bits
    h = matmul(x, m.weight.T)
    if m.bias is not None:
        h = h + m.bias
    update = matmul(matmul(x, m.lora_A.T), m.lora_B.T)
    return h + update * m.scaling


def merge(m: LoraLinear) -> Linear:
    """Plain linear map with weight ``W0 + (alpha/r) B A``; ``m`` is untouched."""
    merged = Linear.__new__(Linear)
    merged.weight = Tensor(m.weight.data + m.delta_weight())
    merged.bias = Tensor(m.bias.data.copy()) if m.bias is not None else None
    merged.d_in, merged.d_out = m.d_in, m.d_out
    return merged


def lora_modules(model: Module) -> list[tuple[str, LoraLinear]]:
    out = []

    def walk(mod: Module, prefix: str):
        for name, child in mod.named_children():
            if isinstance(child, LoraLinear):
                out.append((prefix + name, child))
            else:
                walk(child, f"{prefix}{name}.")

    walk(model, "")
    return out


def inject(encoder: Encoder, cfg: LoraConfig) -> Encoder:
    """Freeze ``encoder`` and wrap the targeted attention maps of every layer, in place."""
    if not cfg.targets:
        raise LoraConfigError("LoRA needs at least one target module")
    rng = make_rng(cfg.seed)
    encoder.freeze()
    for layer in encoder.layers:
        attn = layer.attention
        for name in cfg.targets:
            base = getattr(attn, name)
            if isinstance(base, LoraLinear):
                raise LoraConfigError(f"{name} already carries an adapter")
            setattr(attn, name, LoraLinear(base, cfg.rank, cfg.alpha, rng, cfg.init_std))
    return encoder


def merge_all(encoder: Encoder) -> Encoder:
    """Replace every adapter in ``encoder`` by its merged linear map, in place."""
    for layer in encoder.layers:
        attn = layer.attention
        for name in TARGETS:
            m = getattr(attn, name)
            if isinstance(m, LoraLinear):
                merged = merge(m)
                merged.weight.requires_grad = False
                if merged.bias is not None:
                    merged.bias.requires_grad = False
                setattr(attn, name, merged)
    return encoder


def expected_lora_params(cfg, lora: LoraConfig) -> int:
    """Closed form: sum over wrapped maps of r * (d + k)."""
    d = cfg.d_model
    return cfg.n_layers * len(lora.targets) * lora.rank * (d + d)


def adapter_state(model: Module) -> dict[str, np.ndarray]:
    return {n: p.data.copy() for n, p in model.named_parameters() if ".lora_" in f".{n}"}


@dataclass
class ParamReport:
    groups: dict[str, dict[str, int]] = field(default_factory=dict)

    @property
    def trainable(self) -> int:
        return sum(g["trainable"] for g in self.groups.values())

    @property
    def frozen(self) -> int:
        return sum(g["frozen"] for g in self.groups.values())

    @property
    def total(self) -> int:
        return self.trainable + self.frozen

    @property
    def trainable_fraction(self) -> float:
        return self.trainable / self.total if self.total else 0.0

    def to_dict(self) -> dict:
        return {"groups": self.groups, "trainable": self.trainable, "frozen": self.frozen,
                "total": self.total}


def trainable_param_report(model: Module) -> ParamReport:
    """Trainable and frozen scalar counts per group (LoRA adapters get their own group)."""
    report = ParamReport()
    for name, p in model.named_parameters():
        group = "lora" if ".lora_" in f".{name}" else name.split(".", 1)[0]
        g = report.groups.setdefault(group, {"trainable": 0, "frozen": 0})
        g["trainable" if p.requires_grad else "frozen"] += p.size
    return report

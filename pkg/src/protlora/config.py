"""Run configuration: an INI file (one section per component) plus overrides.

Example::

    [encoder]
    n_layers = 4
    n_heads = 4
    d_model = 64

    [lora]
    enabled = true
    rank = 32
    targets = query,key,value

    [train]
    lr = 5e-4

Overrides use ``section.key=value`` (``--set train.lr=1e-4`` on the CLI).
The environment variable ``PROTLORA_SEED`` replaces the default seed.
"""

from __future__ import annotations

import configparser
import dataclasses
import os
from dataclasses import dataclass, field
from pathlib import Path

from .data import TaskSpec
from .encoder import EncoderConfig
from .heads import HeadConfig
from .lora import LoraConfig

LR_CANDIDATES = (5e-6, 1e-6, 5e-5, 1e-5, 5e-4, 1e-4)
RANK_CANDIDATES = (1, 2, 4, 8, 16, 32)
SEED_ENV = "PROTLORA_SEED"


class ConfigError(ValueError):
    pass


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None


@dataclass
class TaskSection:
    name: str = "synthetic-seq-regression"
    kind: str = "seq-regression"
    n_classes: int = 1
    metric: str = ""
    standardize: bool = True

    def spec(self) -> TaskSpec:
        return TaskSpec(self.name, self.kind, self.n_classes, self.metric or None, self.standardize)


@dataclass
class DataSection:
    train: str = ""
    test: str = ""
    fasta: str = ""
    synthetic: bool = True
    n: int = 320
    length: int = 32
    seed: int = 0


@dataclass
class LoraSection:
    enabled: bool = True
    rank: int = 32
    alpha: float = 32.0
    targets: str = "query,key,value"
    init_std: float = 0.02

    def config(self, seed: int) -> LoraConfig | None:
        if not self.enabled:
            return None
        return LoraConfig(self.rank, self.alpha, self.targets, seed, self.init_std)


@dataclass
class TrainSection:
    lr: float = 5e-4
    epochs: int = 10
    batch_size: int = 8
    accumulation: int = 16
    seed: int = field(default_factory=default_seed)


@dataclass
class PretrainSection:
    steps: int = 500
    lr: float = 1e-3
    batch_size: int = 16
    mask_rate: float = 0.15
    corpus_size: int = 2000
    corpus_length: int = 32


@dataclass
class PathSection:
    base_checkpoint: str = ""
    checkpoint: str = ""
    report: str = ""


@dataclass
class HeadSection:
    kind: str = "CM-MAH"
    d_l: int = 32
    n_heads: int = 4
    d_head: int = 64
    dropout: float = 0.1
    contact_combine: str = "elementwise"


@dataclass
class RunConfig:
    encoder: EncoderConfig = field(default_factory=EncoderConfig)
    head: HeadSection = field(default_factory=HeadSection)
    lora: LoraSection = field(default_factory=LoraSection)
    task: TaskSection = field(default_factory=TaskSection)
    data: DataSection = field(default_factory=DataSection)
    train: TrainSection = field(default_factory=TrainSection)
    pretrain: PretrainSection = field(default_factory=PretrainSection)
    paths: PathSection = field(default_factory=PathSection)

    def validate(self) -> None:
        """Build every derived config once so bad values fail before any compute."""
        try:
            spec = self.task_spec()
            self.head_config(spec)
            self.lora_config()
            EncoderConfig(**dataclasses.asdict(self.encoder))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        t = self.train
        if t.epochs < 1 or t.batch_size < 1 or t.accumulation < 1:
            raise ConfigError("epochs, batch_size and accumulation must be >= 1")
        if t.accumulation % t.batch_size:
            raise ConfigError(
                f"accumulation ({t.accumulation}) must be a multiple of batch_size ({t.batch_size})"
            )
        if t.lr <= 0 or self.pretrain.lr <= 0:
            raise ConfigError("learning rates must be positive")
        if not self.data.synthetic and not self.data.train:
            raise ConfigError("data.train is required when data.synthetic is false")

    def task_spec(self) -> TaskSpec:
        return self.task.spec()

    def head_config(self, spec: TaskSpec | None = None) -> HeadConfig:
        spec = spec or self.task_spec()
        h = self.head
        return HeadConfig(h.kind, h.d_l, h.n_heads, h.d_head, spec.out_dim, spec.token_level,
                          h.dropout, h.contact_combine)

    def lora_config(self) -> LoraConfig | None:
        return self.lora.config(self.train.seed)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        cfg = cls()
        for section, values in d.items():
            for key, value in values.items():
                cfg.set(section, key, value)
        return cfg

    def set(self, section: str, key: str, value) -> None:
        sec = getattr(self, section, None)
        if sec is None or not dataclasses.is_dataclass(sec):
            raise ConfigError(f"unknown config section [{section}]")
        fields = {f.name: f for f in dataclasses.fields(sec)}
        if key not in fields:
            raise ConfigError(f"unknown key {key!r} in [{section}]")
        current = getattr(sec, key)
        setattr(sec, key, _coerce(value, current, f"{section}.{key}"))


def _coerce(value, current, where: str):
    if not isinstance(value, str):
        if isinstance(current, (list, tuple)) and isinstance(value, (list, tuple)):
            return ",".join(map(str, value))
        return value
    text = value.strip()
    try:
        if isinstance(current, bool):
            low = text.lower()
            if low in ("1", "true", "yes", "on"):
                return True
            if low in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if isinstance(current, int):
            return int(text)
        if isinstance(current, float):
            return float(text)
    except ValueError:
        raise ConfigError(f"{where}: cannot parse {value!r} as {type(current).__name__}") from None
    return text


def load_config(path=None, overrides: list[str] | None = None) -> RunConfig:
    cfg = RunConfig()
    if path:
        parser = configparser.ConfigParser(interpolation=None)
        if not parser.read(path, encoding="utf-8"):
            raise ConfigError(f"cannot read config file {path}")
        for section in parser.sections():
            for key, value in parser.items(section):
                cfg.set(section, key, value)
    for item in overrides or []:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ConfigError(f"override {item!r} must look like section.key=value")
        lhs, value = item.split("=", 1)
        section, key = lhs.strip().split(".", 1)
        cfg.set(section, key, value)
    return cfg


def write_config(cfg: RunConfig, path) -> None:
    parser = configparser.ConfigParser(interpolation=None)
    for section, values in cfg.to_dict().items():
        parser[section] = {k: str(v) for k, v in values.items()}
    with open(Path(path), "w", encoding="utf-8") as fh:
        parser.write(fh)

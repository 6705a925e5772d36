"""Sequence/label ingestion, task definitions, batching, synthetic tasks."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .numerics import make_rng
from .tokenizer import AMINO_ACIDS, DEFAULT_VOCAB, Vocabulary, encode

TASK_KINDS = ("seq-multilabel", "seq-multiclass", "token-multiclass", "seq-regression")
_LOSS_FOR = {
    "seq-multilabel": "ml-bce",
    "seq-multiclass": "ce",
    "token-multiclass": "ce",
    "seq-regression": "mse",
}
_METRICS_FOR = {
    "seq-multilabel": ("f1max",),
    "seq-multiclass": ("accuracy",),
    "token-multiclass": ("accuracy",),
    "seq-regression": ("spearman", "r2"),
}

# Benchmark dataset metadata (train / test counts); files are not shipped.
DATASET_INFO = {
    "EC": ("seq-multilabel", 538, 15551, 1919, "f1max"),
    "GO-BP": ("seq-multilabel", 1943, 29902, 3416, "f1max"),
    "GO-CC": ("seq-multilabel", 320, 29902, 3416, "f1max"),
    "GO-MF": ("seq-multilabel", 489, 29902, 3416, "f1max"),
    "Fold": ("seq-multiclass", 1195, 12312, 1272 + 718 + 1254, "accuracy"),
    "SS": ("token-multiclass", 3, 10792, 20, "accuracy"),
    "Loc": ("seq-multiclass", 10, 6622, 1842, "accuracy"),
    "HumanCell": ("seq-regression", 1, 5792, 1366, "spearman"),
    "GB1": ("seq-regression", 1, 6988, 1745, "spearman"),
    "FLU": ("seq-regression", 1, 21446, 27217, "spearman"),
    "eSOL": ("seq-regression", 1, 2363, 782, "r2"),
}


class DataError(ValueError):
    pass


@dataclass
class TaskSpec:
    name: str
    kind: str
    n_classes: int = 1
    metric: str | None = None
    target_standardize: bool = True

    def __post_init__(self):
        if self.kind not in TASK_KINDS:
            raise DataError(f"unknown task kind {self.kind!r}; choose from {TASK_KINDS}")
        allowed = _METRICS_FOR[self.kind]
        if self.metric is None:
            self.metric = allowed[0]
        if self.metric not in allowed:
            raise DataError(f"metric {self.metric!r} not valid for {self.kind}; use one of {allowed}")
        if self.kind == "seq-regression":
            self.n_classes = 1
        elif self.kind == "seq-multilabel" and self.n_classes < 1:
            raise DataError("multilabel tasks need n_classes >= 1")
        elif self.kind != "seq-multilabel" and self.n_classes < 2:
            raise DataError("multiclass tasks need n_classes >= 2")
        if self.kind != "seq-regression":
            self.target_standardize = False

    @property
    def loss(self) -> str:
        return _LOSS_FOR[self.kind]

    @property
    def out_dim(self) -> int:
        return self.n_classes

    @property
    def token_level(self) -> bool:
        return self.kind == "token-multiclass"

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "n_classes": self.n_classes,
                "metric": self.metric, "target_standardize": self.target_standardize}


@dataclass
class Record:
    id: str
    sequence: str
    label: object = None


@dataclass
class TokenBatch:
    ids: np.ndarray  # (B, L') int, right-padded
    mask: np.ndarray  # (B, L') bool
    lengths: np.ndarray  # residue counts
    record_ids: list[str]
    labels: np.ndarray | None = None
    n_unknown: int = 0

    @property
    def size(self) -> int:
        return self.ids.shape[0]


# ---------------------------------------------------------------------------
# FASTA
# ---------------------------------------------------------------------------


def parse_fasta(text: str) -> list[tuple[str, str]]:
    records: list[tuple[str, str]] = []
    current: str | None = None
    chunks: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            if current is not None:
                records.append((current, "".join(chunks)))
            header = line[1:].strip()
            current = header.split()[0] if header else ""
            chunks = []
        else:
            if current is None:
                raise DataError(f"line {lineno}: sequence data before any '>' header")
            chunks.append(line)
    if current is not None:
        records.append((current, "".join(chunks)))
    if not records:
        raise DataError("FASTA input holds no records")
    return records


def load_fasta(path) -> list[tuple[str, str]]:
    return parse_fasta(Path(path).read_text(encoding="utf-8"))


def write_fasta(records, path, width: int = 60) -> None:
    lines = []
    for rid, seq in records:
        lines.append(f">{rid}")
        lines.extend(seq[i:i + width] for i in range(0, len(seq), width))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# task tables
# ---------------------------------------------------------------------------


def _parse_label(raw: str, spec: TaskSpec, seq: str, row: int):
    raw = raw.strip()
    try:
        if spec.kind == "seq-regression":
            return float(raw)
        if spec.kind == "seq-multiclass":
            label = int(raw)
            if not 0 <= label < spec.n_classes:
                raise DataError(f"row {row}: class {label} outside [0, {spec.n_classes})")
            return label
        if spec.kind == "seq-multilabel":
            vec = np.zeros(spec.n_classes, dtype=np.float64)
            for part in filter(None, raw.split(";")):
                c = int(part)
                if not 0 <= c < spec.n_classes:
                    raise DataError(f"row {row}: class {c} outside [0, {spec.n_classes})")
                vec[c] = 1.0
            return vec
        labels = np.array([int(ch) for ch in raw], dtype=np.int64)
    except ValueError as exc:
        if isinstance(exc, DataError):
            raise
        raise DataError(f"row {row}: cannot parse label {raw!r} ({exc})") from None
    if labels.size != len(seq):
        raise DataError(f"row {row}: {labels.size} token labels for a sequence of length {len(seq)}")
    if labels.size and labels.max() >= spec.n_classes:
        raise DataError(f"row {row}: token class {labels.max()} outside [0, {spec.n_classes})")
    return labels


def parse_task_table(text: str, spec: TaskSpec) -> list[Record]:
    text = text.lstrip("﻿")
    header = text.splitlines()[0] if text.strip() else ""
    if not header:
        raise DataError("task table is empty")
    delimiter = "\t" if "\t" in header else ","
    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    missing = {"id", "sequence", "label"} - set(reader.fieldnames or [])
    if missing:
        raise DataError(f"task table header lacks columns {sorted(missing)}")
    records = []
    for row_no, row in enumerate(reader, start=2):
        seq = (row["sequence"] or "").strip()
        if not seq:
            raise DataError(f"row {row_no}: empty sequence")
        records.append(Record(row["id"].strip(), seq, _parse_label(row["label"] or "", spec, seq, row_no)))
    if not records:
        raise DataError("task table has a header but no rows")
    return records


def load_task_table(path, spec: TaskSpec) -> list[Record]:
    return parse_task_table(Path(path).read_text(encoding="utf-8"), spec)


def format_label(label, spec: TaskSpec) -> str:
    if spec.kind == "seq-regression":
        return repr(float(label))
    if spec.kind == "seq-multiclass":
        return str(int(label))
    if spec.kind == "seq-multilabel":
        return ";".join(str(i) for i in np.flatnonzero(np.asarray(label)))
    return "".join(str(int(c)) for c in label)


def write_task_table(records: list[Record], path, spec: TaskSpec, delimiter: str = ",") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(["id", "sequence", "label"])
        for r in records:
            writer.writerow([r.id, r.sequence, format_label(r.label, spec)])


# ---------------------------------------------------------------------------
# batching
# ---------------------------------------------------------------------------


def collate(records: list[Record], spec: TaskSpec | None = None,
            vocab: Vocabulary = DEFAULT_VOCAB) -> TokenBatch:
    encoded = [encode(r.sequence, vocab) for r in records]
    width = max(len(e.ids) for e in encoded)
    ids = np.full((len(records), width), vocab.pad_id, dtype=np.int64)
    for i, e in enumerate(encoded):
        ids[i, : len(e.ids)] = e.ids
    lengths = np.array([e.length for e in encoded])
    labels = None
    if spec is not None:
        if spec.kind == "seq-multilabel":
            labels = np.stack([np.asarray(r.label, dtype=np.float64) for r in records])
        elif spec.kind == "seq-multiclass":
            labels = np.array([int(r.label) for r in records], dtype=np.int64)
        elif spec.kind == "seq-regression":
            labels = np.array([float(r.label) for r in records])
        else:
            labels = np.full((len(records), width - 2), -1, dtype=np.int64)
            for i, r in enumerate(records):
                labels[i, : len(r.label)] = r.label
    return TokenBatch(
        ids=ids,
        mask=ids != vocab.pad_id,
        lengths=lengths,
        record_ids=[r.id for r in records],
        labels=labels,
        n_unknown=sum(e.n_unknown for e in encoded),
    )


def make_batches(records: list[Record], batch_size: int, rng: np.random.Generator | None = None,
                 shuffle: bool = False, spec: TaskSpec | None = None,
                 vocab: Vocabulary = DEFAULT_VOCAB) -> list[TokenBatch]:
    """Optionally shuffle (seeded), then cut contiguous batches padded per batch."""
    if not records:
        raise DataError("no records to batch")
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    order = np.arange(len(records))
    if shuffle:
        if rng is None:
            raise ValueError("shuffling needs an rng")
        order = rng.permutation(len(records))
    chunks = [order[i:i + batch_size] for i in range(0, len(records), batch_size)]
    return [collate([records[j] for j in chunk], spec, vocab) for chunk in chunks]


def accumulation_groups(batches: list[TokenBatch], samples_per_update: int) -> Iterator[list[TokenBatch]]:
    """Group consecutive micro-batches so each group covers ``samples_per_update``
    samples; the last group of an epoch may be short."""
    group: list[TokenBatch] = []
    seen = 0
    for b in batches:
        group.append(b)
        seen += b.size
        if seen >= samples_per_update:
            yield group
            group, seen = [], 0
    if group:
        yield group


# ---------------------------------------------------------------------------
# target standardization
# ---------------------------------------------------------------------------


@dataclass
class Standardizer:
    mean: float = 0.0
    std: float = 1.0

    def transform(self, values):
        return (np.asarray(values, dtype=np.float64) - self.mean) / self.std

    def inverse(self, values):
        return np.asarray(values, dtype=np.float64) * self.std + self.mean


def standardize_targets(records: list[Record]) -> tuple[list[Record], float, float]:
    """Zero-mean / unit sample-std (n - 1) labels; returns new records, mean, std."""
    y = np.array([float(r.label) for r in records])
    if y.size < 2:
        raise DataError("standardization needs at least two records")
    mu = float(y.mean())
    sd = float(y.std(ddof=1))
    if sd == 0.0:
        raise DataError("regression targets have zero variance")
    out = [Record(r.id, r.sequence, (float(r.label) - mu) / sd) for r in records]
    return out, mu, sd


# ---------------------------------------------------------------------------
# synthetic tasks
# ---------------------------------------------------------------------------

MOTIF_LETTERS = "CHMW"
BACKGROUND = "".join(a for a in AMINO_ACIDS if a not in MOTIF_LETTERS)
TOKEN_GROUPS = ("AGILMPV", "DEKNQRHS", "CFTWY")


@dataclass
class SyntheticTask:
    spec: TaskSpec
    train: list[Record]
    test: list[Record]
    info: dict = field(default_factory=dict)


def composition_weights(seed: int) -> dict[str, float]:
    rng = make_rng(seed + 7919)
    return dict(zip(AMINO_ACIDS, rng.normal(0.0, 1.0, len(AMINO_ACIDS)).tolist()))


def composition_target(seq: str, weights: dict[str, float]) -> float:
    return sum(weights[a] for a in seq) / len(seq)


def planted_motifs(n_classes: int, seed: int, width: int = 3) -> list[str]:
    rng = make_rng(seed + 104729)
    motifs: list[str] = []
    while len(motifs) < n_classes:
        m = "".join(rng.choice(list(MOTIF_LETTERS), size=width))
        if m not in motifs:
            motifs.append(m)
    return motifs


def token_class(residue: str) -> int:
    for c, group in enumerate(TOKEN_GROUPS):
        if residue in group:
            return c
    raise DataError(f"no token class for residue {residue!r}")


def _plant(rng, length: int, motifs: list[str]) -> str:
    """Background sequence with each motif inserted once, separated by background."""
    slots = sorted(rng.choice(length, size=len(motifs), replace=False).tolist()) if motifs else []
    out = []
    order = rng.permutation(len(motifs)) if motifs else []
    chosen = [motifs[i] for i in order]
    prev = -1
    for pos, motif in zip(slots, chosen):
        out.append("".join(rng.choice(list(BACKGROUND), size=pos - prev)))
        out.append(motif)
        prev = pos
    out.append("".join(rng.choice(list(BACKGROUND), size=length - prev)))
    return "".join(out)


def synth_task(kind: str, n: int, length: int, seed: int, n_classes: int = 4,
               test_fraction: float = 0.25, metric: str | None = None) -> SyntheticTask:
    """Deterministic desk-scale task with learnable signal.

    seq-regression   weighted residue composition
    seq-multiclass   which one of ``n_classes`` motifs is planted
    seq-multilabel   which subset of motifs is planted (at least one)
    token-multiclass physico-chemical group of each residue
    """
    if kind not in TASK_KINDS:
        raise DataError(f"unknown task kind {kind!r}")
    if n < 2:
        raise DataError("need at least two synthetic records")
    rng = make_rng(seed)
    spec = TaskSpec(name=f"synthetic-{kind}", kind=kind,
                    n_classes=1 if kind == "seq-regression" else (3 if kind == "token-multiclass" else n_classes),
                    metric=metric)
    lo = max(6, length // 2)
    weights = composition_weights(seed)
    motifs = planted_motifs(spec.n_classes, seed) if kind in ("seq-multiclass", "seq-multilabel") else []
    records = []
    for i in range(n):
        L = int(rng.integers(lo, length + 1))
        if kind == "seq-regression":
            seq = "".join(rng.choice(list(AMINO_ACIDS), size=L))
            label = composition_target(seq, weights)
        elif kind == "token-multiclass":
            seq = "".join(rng.choice(list(AMINO_ACIDS), size=L))
            label = np.array([token_class(a) for a in seq], dtype=np.int64)
        elif kind == "seq-multiclass":
            label = int(rng.integers(spec.n_classes))
            seq = _plant(rng, L - len(motifs[label]), [motifs[label]])
        else:
            present = rng.random(spec.n_classes) < 0.5
            if not present.any():
                present[rng.integers(spec.n_classes)] = True
            chosen = [m for m, on in zip(motifs, present) if on]
            seq = _plant(rng, max(len(chosen) + 1, L - sum(map(len, chosen))), chosen)
            label = present.astype(np.float64)
        records.append((seq, label))
    n_test = max(1, int(math.floor(n * test_fraction)))
    train = [Record(f"train-{i:05d}", s, y) for i, (s, y) in enumerate(records[: n - n_test])]
    test = [Record(f"test-{i:05d}", s, y) for i, (s, y) in enumerate(records[n - n_test:])]
    return SyntheticTask(spec, train, test, {"weights": weights, "motifs": motifs, "seed": seed})


def motif_rule(seq: str, motifs: list[str]) -> list[int]:
    return [int(m in seq) for m in motifs]


def synth_corpus(n: int, length: int, seed: int) -> list[str]:
    """Unlabeled sequences from a sparse first-order Markov chain over residues.

    Each residue has two preferred successors, so masked positions are
    predictable from their neighbours.
    """
    rng = make_rng(seed)
    letters = list(AMINO_ACIDS)
    succ = {a: rng.choice(20, size=2, replace=False) for a in letters}
    seqs = []
    lo = max(6, length // 2)
    for _ in range(n):
        L = int(rng.integers(lo, length + 1))
        cur = int(rng.integers(20))
        out = [letters[cur]]
        for _ in range(L - 1):
            r = rng.random()
            if r < 0.6:
                cur = int(succ[letters[cur]][0])
            elif r < 0.9:
                cur = int(succ[letters[cur]][1])
            else:
                cur = int(rng.integers(20))
            out.append(letters[cur])
        seqs.append("".join(out))
    return seqs

"""Pretraining, LoRA fine-tuning, evaluation, sweeps, and prediction."""

from __future__ import annotations

import copy
import json
import logging
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .checkpoint import CheckpointError, hash_tensors, load_checkpoint, save_checkpoint
from .config import LR_CANDIDATES, RANK_CANDIDATES, ConfigError, RunConfig
from .contact import contact_maps
from .data import (
    DataError,
    Record,
    Standardizer,
    TaskSpec,
    accumulation_groups,
    collate,
    load_fasta,
    load_task_table,
    make_batches,
    standardize_targets,
    synth_corpus,
    synth_task,
)
from .encoder import EncoderConfig, MaskedLM
from .lora import LoraConfig, adapter_state, inject, lora_modules, trainable_param_report
from .losses import cross_entropy
from .metrics import METRICS
from .model import ProteinModel, seeded_streams, task_loss, task_predictions
from .nn import Module
from .numerics import Tensor, backward, no_grad
from .tokenizer import DEFAULT_VOCAB, encode, mask_for_mlm

log = logging.getLogger(__name__)

# Every non-empty subset of {Q, K, V}, each with and without dense.
QKV_SETS = (("query",), ("key",), ("value",), ("query", "key"), ("key", "value"),
            ("query", "value"), ("query", "key", "value"))
TARGET_SETS = tuple(s for base in QKV_SETS for s in (base, base + ("dense",)))


class NumericError(RuntimeError):
    pass


class Adam:
    """Adam with bias correction, constant learning rate, no weight decay."""

    def __init__(self, params: list[Tensor], lr: float, betas=(0.9, 0.999), eps: float = 1e-8):
        self.params = params
        self.lr = lr
        self.b1, self.b2 = betas
        self.eps = eps
        self.t = 0
        self.m = [np.zeros_like(p.data) for p in params]
        self.v = [np.zeros_like(p.data) for p in params]

    def step(self) -> None:
        self.t += 1
        c1 = 1.0 - self.b1**self.t
        c2 = 1.0 - self.b2**self.t
        for p, m, v in zip(self.params, self.m, self.v):
            if p.grad is None:
                continue
            g = p.grad
            with np.errstate(all="ignore"):
                m *= self.b1
                m += (1.0 - self.b1) * g
                v *= self.b2
                v += (1.0 - self.b2) * g * g
                p.data -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)
            if not np.all(np.isfinite(p.data)):
                raise NumericError(f"parameter update went non-finite at optimizer step {self.t}")

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None


@dataclass
class RunReport:
    mode: str
    seed: int
    config: dict
    metric: str = ""
    train_loss: list[float] = field(default_factory=list)
    train_metric: list[float] = field(default_factory=list)
    test_metric: list[float] = field(default_factory=list)
    final_metric: float | None = None
    optimizer_steps: int = 0
    steps_per_epoch: list[int] = field(default_factory=list)
    trainable_params: int = 0
    frozen_params: int = 0
    param_groups: dict = field(default_factory=dict)
    base_hash_before: str = ""
    base_hash_after: str = ""
    n_unknown_residues: int = 0
    extra: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def numeric_fields(self) -> dict:
        """Everything that must reproduce exactly under a fixed seed (timing excluded)."""
        d = self.to_dict()
        d.pop("wall_clock_s")
        return d

    def append_to(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")


def read_reports(path) -> list[dict]:
    return [json.loads(ln) for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]


def count_unknown(records: list[Record]) -> int:
    n = sum(encode(r.sequence).n_unknown for r in records)
    if n:
        log.warning("%d residues outside the alphabet were mapped to UNK", n)
    return n


def _finite(value: float, what: str) -> float:
    if not math.isfinite(value):
        raise NumericError(f"non-finite {what}: {value}")
    return value


# ---------------------------------------------------------------------------
# MLM pretraining
# ---------------------------------------------------------------------------


def mlm_batch(seqs: list[str], rate: float, rng: np.random.Generator):
    toks = [encode(s) for s in seqs]
    width = max(len(t.ids) for t in toks)
    ids = np.full((len(seqs), width), DEFAULT_VOCAB.pad_id, dtype=np.int64)
    targets = np.full_like(ids, DEFAULT_VOCAB.pad_id)
    selected = np.zeros(ids.shape, dtype=bool)
    for i, t in enumerate(toks):
        m, tg, sel = mask_for_mlm(t, rate, rng)
        n = len(t.ids)
        ids[i, :n], targets[i, :n], selected[i, :n] = m, tg, sel
    return ids, targets, selected


def mlm_loss(model: MaskedLM, ids, targets, selected) -> Tensor:
    logits = model(ids, ids != DEFAULT_VOCAB.pad_id)
    return cross_entropy(logits, targets, valid=selected)


def pretrain_mlm(cfg: RunConfig, sequences: list[str] | None = None,
                 save: bool = True) -> tuple[MaskedLM, RunReport]:
    """Masked-LM pretraining of a fresh encoder; returns the model and its report."""
    cfg.validate()
    start = time.perf_counter()
    pre = cfg.pretrain
    seed = cfg.train.seed
    if pre.steps < 1 or pre.batch_size < 1:
        raise ConfigError("pretrain.steps and pretrain.batch_size must be >= 1")
    if sequences is None:
        if cfg.data.fasta:
            sequences = [s for _, s in load_fasta(cfg.data.fasta)]
        else:
            sequences = synth_corpus(pre.corpus_size, pre.corpus_length, cfg.data.seed)
    if not sequences:
        raise DataError("pretraining corpus is empty")
    enc_cfg = EncoderConfig(**asdict(cfg.encoder))
    init_rng, order_rng, mask_rng = seeded_streams(seed, 3)
    model = MaskedLM(enc_cfg, init_rng).train()
    params = [p for p in model.parameters() if p.requires_grad]
    opt = Adam(params, pre.lr)
    report = RunReport("pretrain", seed, cfg.to_dict(), metric="mlm-ce")

    order = order_rng.permutation(len(sequences))
    cursor = 0
    for _ in range(pre.steps):
        if cursor + pre.batch_size > len(order):
            order = order_rng.permutation(len(sequences))
            cursor = 0
        idx = order[cursor:cursor + pre.batch_size]
        cursor += pre.batch_size
        ids, targets, selected = mlm_batch([sequences[i] for i in idx], pre.mask_rate, mask_rng)
        loss = mlm_loss(model, ids, targets, selected)
        report.train_loss.append(_finite(loss.item(), "MLM loss"))
        backward(loss)
        opt.step()
        opt.zero_grad()
    report.optimizer_steps = opt.t
    pr = trainable_param_report(model)
    report.trainable_params, report.frozen_params = pr.trainable, pr.frozen
    report.param_groups = pr.groups
    report.final_metric = report.train_loss[-1]
    report.extra = {"initial_loss": report.train_loss[0], "ln_vocab": math.log(enc_cfg.vocab_size)}
    report.wall_clock_s = time.perf_counter() - start
    if save and cfg.paths.checkpoint:
        save_checkpoint(cfg.paths.checkpoint, model.state_dict(), "encoder",
                        {"encoder": enc_cfg.to_dict()})
    if save and cfg.paths.report:
        report.append_to(cfg.paths.report)
    return model, report


# ---------------------------------------------------------------------------
# fine-tuning
# ---------------------------------------------------------------------------


@dataclass
class TaskData:
    spec: TaskSpec
    train: list[Record]
    test: list[Record]
    standardizer: Standardizer = field(default_factory=Standardizer)

    def scaled(self, records: list[Record]) -> list[Record]:
        if not self.spec.target_standardize:
            return records
        return [Record(r.id, r.sequence, float(self.standardizer.transform(r.label))) for r in records]


def load_task_data(cfg: RunConfig) -> TaskData:
    spec = cfg.task_spec()
    if cfg.data.synthetic:
        task = synth_task(spec.kind, cfg.data.n, cfg.data.length, cfg.data.seed,
                          n_classes=spec.n_classes if spec.kind != "seq-regression" else 4,
                          metric=spec.metric)
        task.spec.name = spec.name
        task.spec.target_standardize = spec.target_standardize
        spec, train, test = task.spec, task.train, task.test
    else:
        train = load_task_table(cfg.data.train, spec)
        test = load_task_table(cfg.data.test, spec) if cfg.data.test else []
    overlap = {r.id for r in train} & {r.id for r in test}
    if overlap:
        raise DataError(f"train/test splits share record ids, e.g. {sorted(overlap)[:3]}")
    data = TaskData(spec, train, test)
    if spec.target_standardize:
        _, mu, sd = standardize_targets(train)
        data.standardizer = Standardizer(mu, sd)
    return data


def encoder_config_from_checkpoint(path) -> EncoderConfig:
    kind, meta, _ = load_checkpoint(path)
    return EncoderConfig(**meta["encoder"])


def load_base_encoder(model: ProteinModel, path) -> None:
    kind, meta, tensors = load_checkpoint(path)
    if kind not in ("encoder", "model"):
        raise CheckpointError(f"{path}: expected an encoder checkpoint, found {kind!r}")
    state = {k[len("encoder."):]: v for k, v in tensors.items()
             if k.startswith("encoder.") and ".lora_" not in k}
    try:
        model.encoder.load_state_dict(state)
    except (KeyError, ValueError) as exc:
        raise CheckpointError(f"{path}: {exc}") from None


def base_weights(model: ProteinModel) -> dict[str, np.ndarray]:
    return {n: p.data for n, p in model.encoder.named_parameters() if ".lora_" not in f".{n}"}


def build_model(cfg: RunConfig, spec: TaskSpec) -> ProteinModel:
    enc_cfg = EncoderConfig(**asdict(cfg.encoder))
    if cfg.paths.base_checkpoint:
        enc_cfg = encoder_config_from_checkpoint(cfg.paths.base_checkpoint)
        cfg.encoder = enc_cfg
    model = ProteinModel(enc_cfg, cfg.head_config(spec), cfg.train.seed)
    if cfg.paths.base_checkpoint:
        load_base_encoder(model, cfg.paths.base_checkpoint)
    lora_cfg = cfg.lora_config()
    if lora_cfg is not None:
        inject(model.encoder, lora_cfg)
    else:
        model.encoder.freeze()
    return model


def predict_records(model: ProteinModel, records: list[Record], spec: TaskSpec,
                    batch_size: int = 32) -> tuple[np.ndarray, list[np.ndarray]]:
    """Raw model outputs for every record, in input order (eval mode, no graph)."""
    model.eval()
    outs = []
    with no_grad():
        for batch in make_batches(records, batch_size):
            logits = model.run(batch).logits.data
            if spec.token_level:
                outs.extend(logits[i, :n] for i, n in enumerate(batch.lengths))
            else:
                outs.extend(logits)
    if spec.token_level:
        return np.empty(0), outs
    return np.stack(outs), []


def score(spec: TaskSpec, model: ProteinModel, records: list[Record],
          standardizer: Standardizer | None = None) -> float:
    """The task's metric on ``records`` (labels on their original scale)."""
    logits, token_logits = predict_records(model, records, spec)
    metric = METRICS[spec.metric]
    if spec.token_level:
        pred = np.concatenate([lg.argmax(axis=-1) for lg in token_logits])
        truth = np.concatenate([np.asarray(r.label) for r in records])
        return metric(pred, truth)
    pred = task_predictions(spec, logits)
    if spec.kind == "seq-multilabel":
        return metric(pred, np.stack([np.asarray(r.label) for r in records]))
    if spec.kind == "seq-multiclass":
        return metric(pred, np.array([int(r.label) for r in records]))
    if standardizer is not None and spec.target_standardize:
        pred = standardizer.inverse(pred)
    return metric(pred, np.array([float(r.label) for r in records]))


def finetune(cfg: RunConfig, data: TaskData | None = None,
             save: bool = True) -> tuple[ProteinModel, RunReport]:
    """Train adapters + contact head + downstream head on a task.

    Gradients from consecutive micro-batches are summed (each weighted by its
    share of the group) and one Adam step is taken per ``accumulation`` samples.
    """
    cfg = copy.deepcopy(cfg)
    cfg.validate()
    start = time.perf_counter()
    data = data or load_task_data(cfg)
    spec = data.spec
    model = build_model(cfg, spec)
    tr = cfg.train
    report = RunReport("finetune", tr.seed, cfg.to_dict(), metric=spec.metric)
    report.base_hash_before = hash_tensors(base_weights(model))
    report.n_unknown_residues = count_unknown(data.train + data.test)
    pr = trainable_param_report(model)
    report.trainable_params, report.frozen_params = pr.trainable, pr.frozen
    report.param_groups = pr.groups

    params = [p for p in model.parameters() if p.requires_grad]
    opt = Adam(params, tr.lr)
    (shuffle_rng,) = seeded_streams(tr.seed + 1, 1)
    train_records = data.scaled(data.train)

    for epoch in range(tr.epochs):
        model.train()
        batches = make_batches(train_records, tr.batch_size, shuffle_rng, shuffle=True, spec=spec)
        total, seen, steps = 0.0, 0, 0
        for group in accumulation_groups(batches, tr.accumulation):
            n_group = sum(b.size for b in group)
            for b in group:
                out = model.run(b)
                loss = task_loss(spec, out.logits, b)
                total += _finite(loss.item(), "training loss") * b.size
                seen += b.size
                backward(loss * (b.size / n_group))
            opt.step()
            opt.zero_grad()
            steps += 1
        report.train_loss.append(total / seen)
        report.steps_per_epoch.append(steps)
        report.train_metric.append(score(spec, model, data.train, data.standardizer))
        if data.test:
            report.test_metric.append(score(spec, model, data.test, data.standardizer))
        log.info("epoch %d loss %.4f train %s %.4f", epoch + 1, total / seen, spec.metric,
                 report.train_metric[-1])
    report.optimizer_steps = opt.t
    report.final_metric = report.test_metric[-1] if report.test_metric else report.train_metric[-1]
    report.base_hash_after = hash_tensors(base_weights(model))
    report.extra = {"standardizer": asdict(data.standardizer), "task": spec.to_dict(),
                    "n_train": len(data.train), "n_test": len(data.test)}
    report.wall_clock_s = time.perf_counter() - start
    if save and cfg.paths.checkpoint:
        save_model(model, cfg, data, cfg.paths.checkpoint)
        adapters = adapter_state(model)
        if adapters:
            save_checkpoint(Path(cfg.paths.checkpoint).with_suffix(".adapter"), adapters, "adapter",
                            {"lora": cfg.lora_config().to_dict(), "encoder": cfg.encoder.to_dict()})
    if save and cfg.paths.report:
        report.append_to(cfg.paths.report)
    return model, report


# ---------------------------------------------------------------------------
# checkpoints for full models
# ---------------------------------------------------------------------------


def save_model(model: ProteinModel, cfg: RunConfig, data: TaskData, path) -> None:
    meta = {"config": cfg.to_dict(), "task": data.spec.to_dict(),
            "standardizer": asdict(data.standardizer), "encoder": cfg.encoder.to_dict()}
    save_checkpoint(path, model.state_dict(), "model", meta)


def load_model(path) -> tuple[ProteinModel, RunConfig, TaskSpec, Standardizer]:
    kind, meta, tensors = load_checkpoint(path)
    if kind != "model":
        raise CheckpointError(f"{path}: expected a model checkpoint, found {kind!r}")
    cfg = RunConfig.from_dict(meta["config"])
    cfg.paths.base_checkpoint = ""
    spec = TaskSpec(**meta["task"])
    model = ProteinModel(EncoderConfig(**meta["encoder"]), cfg.head_config(spec), cfg.train.seed)
    lora_cfg = cfg.lora_config()
    if lora_cfg is not None:
        inject(model.encoder, lora_cfg)
    try:
        model.load_state_dict(tensors)
    except (KeyError, ValueError) as exc:
        raise CheckpointError(f"{path}: {exc}") from None
    model.eval()
    return model, cfg, spec, Standardizer(**meta["standardizer"])


def load_adapters(model: ProteinModel, path) -> None:
    """Load an adapter-only file onto a model whose encoder already carries adapters."""
    kind, meta, tensors = load_checkpoint(path)
    if kind != "adapter":
        raise CheckpointError(f"{path}: expected an adapter checkpoint, found {kind!r}")
    own = dict(model.named_parameters())
    for name, value in tensors.items():
        if name not in own:
            raise CheckpointError(f"{path}: adapter tensor {name} has no slot in the model")
        if own[name].shape != value.shape:
            raise CheckpointError(
                f"{path}: adapter tensor {name} has shape {value.shape}, model expects {own[name].shape}"
            )
    for name, value in tensors.items():
        own[name].data = value.copy()


def evaluate(path, records: list[Record] | None = None, cfg: RunConfig | None = None) -> RunReport:
    """Score a saved model on its task's test split (or on ``records``)."""
    start = time.perf_counter()
    model, saved_cfg, spec, standardizer = load_model(path)
    if records is None:
        cfg = cfg or saved_cfg
        records = load_task_data(cfg).test
    if not records:
        raise DataError("nothing to evaluate")
    if spec.kind == "seq-multilabel" and np.asarray(records[0].label).size != spec.n_classes:
        raise DataError(f"labels have {np.asarray(records[0].label).size} classes, head has {spec.n_classes}")
    value = score(spec, model, records, standardizer)
    report = RunReport("evaluate", saved_cfg.train.seed, saved_cfg.to_dict(), metric=spec.metric)
    report.final_metric = value
    report.test_metric = [value]
    report.n_unknown_residues = count_unknown(records)
    pr = trainable_param_report(model)
    report.trainable_params, report.frozen_params = pr.trainable, pr.frozen
    report.wall_clock_s = time.perf_counter() - start
    return report


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def target_label(targets) -> str:
    short = {"query": "W_Q", "key": "W_K", "value": "W_V", "dense": "W_d"}
    return ", ".join(short[t] for t in targets)


@dataclass
class SweepCell:
    rank: int
    targets: tuple[str, ...]
    status: str
    trainable_params: int = 0
    lora_params: int = 0
    expected_lora_params: int = 0
    final_metric: float | None = None
    report: RunReport | None = None


def lr_search(cfg: RunConfig, data: TaskData | None = None, candidates=LR_CANDIDATES,
              probe_epochs: int = 3) -> tuple[float, dict[float, float]]:
    """Probe each learning rate for a few epochs; return the best and all scores."""
    data = data or load_task_data(cfg)
    scores = {}
    for lr in candidates:
        probe = copy.deepcopy(cfg)
        probe.train.lr = lr
        probe.train.epochs = probe_epochs
        _, rep = finetune(probe, data, save=False)
        scores[lr] = rep.final_metric
    best = max(scores, key=lambda k: scores[k])
    return best, scores


def sweep(cfg: RunConfig, ranks=RANK_CANDIDATES, target_sets=TARGET_SETS,
          data: TaskData | None = None) -> list[SweepCell]:
    """One seeded fine-tuning run per (rank, target set); failures are recorded, not raised."""
    if not ranks or not target_sets:
        raise ConfigError("sweep needs at least one rank and one target set")
    data = data or load_task_data(cfg)
    cells = []
    for rank in ranks:
        for targets in target_sets:
            run = copy.deepcopy(cfg)
            run.lora.enabled = True
            run.lora.rank = int(rank)
            run.lora.targets = ",".join(targets)
            try:
                lcfg = run.lora_config()
                model, rep = finetune(run, data, save=False)
                n_lora = sum(p.size for _, m in lora_modules(model.encoder)
                             for p in (m.lora_A, m.lora_B))
                expected = sum(m.rank * (m.d_out + m.d_in) for _, m in lora_modules(model.encoder))
                closed = model.encoder.cfg.n_layers * len(lcfg.targets) * rank * 2 * model.encoder.cfg.d_model
                cell = SweepCell(rank, tuple(lcfg.targets), "ok", rep.trainable_params, n_lora,
                                 closed, rep.final_metric, rep)
                if expected != closed:
                    cell.status = f"param mismatch: enumerated {expected} vs closed form {closed}"
            except Exception as exc:  # noqa: BLE001 - a failed cell must not stop the sweep
                log.warning("sweep cell rank=%s targets=%s failed: %s", rank, targets, exc)
                cell = SweepCell(int(rank), tuple(targets), f"failed: {exc}")
            cells.append(cell)
    return cells


def sweep_table(cells: list[SweepCell], ranks=None) -> str:
    """Markdown table: one row per Q/K/V set, columns ``r=<rank> -`` / ``r=<rank> +W_d``."""
    ranks = ranks or sorted({c.rank for c in cells})
    index = {(c.rank, c.targets): c for c in cells}
    header = ["Module"] + [f"r={r} {side}" for r in ranks for side in ("-", "+W_d")]
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    for base in QKV_SETS:
        row = [target_label(base)]
        for r in ranks:
            for targets in (base, base + ("dense",)):
                c = index.get((r, targets))
                if c is None:
                    row.append("")
                elif c.status != "ok":
                    row.append("failed")
                else:
                    row.append(f"{c.final_metric:.3f}")
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def sweep_rows(cells: list[SweepCell]) -> list[dict]:
    return [{"rank": c.rank, "targets": "+".join(c.targets), "status": c.status,
             "trainable_params": c.trainable_params, "lora_params": c.lora_params,
             "expected_lora_params": c.expected_lora_params, "final_metric": c.final_metric}
            for c in cells]


# ---------------------------------------------------------------------------
# prediction
# ---------------------------------------------------------------------------


def predict(path, fasta, out_path, contacts_path=None) -> dict:
    """Write one prediction row per FASTA record; optionally dump contact maps."""
    model, cfg, spec, standardizer = load_model(path)
    pairs = load_fasta(fasta)
    records = [Record(rid, seq) for rid, seq in pairs]
    n_unknown = count_unknown(records)
    rows = []
    maps = []
    with no_grad():
        for batch in make_batches(records, 32):
            out = model.run(batch, with_contacts=contacts_path is not None or model.head_cfg.uses_contacts)
            logits = out.logits.data
            if contacts_path is not None:
                maps.extend(zip(batch.record_ids, contact_maps(out.contacts, batch.mask)))
            if spec.token_level:
                for rid, lg, n in zip(batch.record_ids, logits, batch.lengths):
                    rows.append((rid, "".join(str(c) for c in lg[:n].argmax(axis=-1))))
                continue
            pred = task_predictions(spec, logits)
            for rid, p in zip(batch.record_ids, pred):
                if spec.kind == "seq-multilabel":
                    rows.append((rid, ";".join(f"{v:.6g}" for v in p)))
                elif spec.kind == "seq-multiclass":
                    rows.append((rid, str(int(p))))
                else:
                    rows.append((rid, repr(float(standardizer.inverse(p)))))
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("id\tprediction\n")
        for rid, value in rows:
            fh.write(f"{rid}\t{value}\n")
    if contacts_path is not None:
        write_contacts(maps, contacts_path)
    return {"records": len(rows), "n_unknown_residues": n_unknown, "task": spec.to_dict()}


def write_contacts(maps, path) -> None:
    """Text dump: a ``>id L`` line per record followed by L rows of L floats."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# protlora contact maps v1\n")
        for rid, cmap in maps:
            fh.write(f">{rid} {cmap.length}\n")
            for row in cmap.probs:
                fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def read_contacts(path) -> dict[str, np.ndarray]:
    out: dict[str, np.ndarray] = {}
    rid, rows = None, []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.startswith("#") or not line.strip():
            continue
        if line.startswith(">"):
            if rid is not None:
                out[rid] = np.array(rows)
            rid, rows = line[1:].split()[0], []
        else:
            rows.append([float(v) for v in line.split()])
    if rid is not None:
        out[rid] = np.array(rows)
    return out


def param_audit(model: Module) -> dict:
    return trainable_param_report(model).to_dict()

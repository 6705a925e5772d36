"""Oracle case generators, the frozen plain-text corpus, and the drift checker.

Each generator draws its inputs from ``random.Random(seed)`` and computes the
expected output with :mod:`plain`, so regeneration is deterministic and never
touches the package under test. Cases whose oracle is a training run record
the property to check rather than a number; the tests carry those out.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

try:
    from . import plain
except ImportError:  # executed as a script
    import plain

CASES_DIR = Path(__file__).resolve().parent / "cases"


@dataclass
class OracleCase:
    name: str
    oracle: str
    checks: str
    tolerance: float
    inputs: dict = field(default_factory=dict)
    expected: object = None

    def to_text(self) -> str:
        lines = [
            "# frozen oracle case (regenerate: python3 tests/oracles/regen.py --write)",
            f"name: {self.name}",
            f"oracle: {self.oracle}",
            f"checks: {self.checks}",
            f"tolerance: {self.tolerance!r}",
        ]
        for key in sorted(self.inputs):
            lines.append(f"input.{key}: {json.dumps(self.inputs[key])}")
        lines.append(f"expected: {json.dumps(self.expected)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OracleCase":
        head, inputs, expected = {}, {}, None
        for line in text.splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            key, _, value = line.partition(": ")
            if key.startswith("input."):
                inputs[key[len("input."):]] = json.loads(value)
            elif key == "expected":
                expected = json.loads(value)
            else:
                head[key] = value
        return cls(head["name"], head["oracle"], head["checks"], float(head["tolerance"]),
                   inputs, expected)


def load_case(name: str, cases_dir: Path = CASES_DIR) -> OracleCase:
    return OracleCase.from_text((Path(cases_dir) / f"{name}.txt").read_text(encoding="utf-8"))


def load_cases(cases_dir: Path = CASES_DIR) -> dict[str, OracleCase]:
    out = {}
    for path in sorted(Path(cases_dir).glob("*.txt")):
        case = OracleCase.from_text(path.read_text(encoding="utf-8"))
        out[case.name] = case
    return out


# ---- random inputs -------------------------------------------------------------

def _mat(rng, rows, cols, scale=1.0):
    return [[rng.uniform(-scale, scale) for _ in range(cols)] for _ in range(rows)]


def _vec(rng, n, scale=1.0):
    return [rng.uniform(-scale, scale) for _ in range(n)]


def _gauss(rng, shape, std):
    if len(shape) == 1:
        return [rng.gauss(0.0, std) for _ in range(shape[0])]
    return [_gauss(rng, shape[1:], std) for _ in range(shape[0])]


def _linear(rng, p, name, d_out, d_in, std=0.5):
    p[name + ".weight"] = _gauss(rng, (d_out, d_in), std)
    p[name + ".bias"] = _gauss(rng, (d_out,), 0.1)


def _norm(rng, p, name, d):
    p[name + ".gain"] = [1.0 + rng.gauss(0.0, 0.1) for _ in range(d)]
    p[name + ".bias"] = _gauss(rng, (d,), 0.1)


def _encoder_params(rng, n_layers, d, d_ff, vocab, max_len):
    p = {"token_embedding": _gauss(rng, (vocab, d), 0.5),
         "position_embedding": _gauss(rng, (max_len, d), 0.5)}
    for i in range(n_layers):
        pre = f"layers.{i}."
        _norm(rng, p, pre + "attn_norm", d)
        for name in ("query", "key", "value", "dense"):
            _linear(rng, p, pre + "attention." + name, d, d)
        _norm(rng, p, pre + "ffn_norm", d)
        _linear(rng, p, pre + "fc1", d_ff, d)
        _linear(rng, p, pre + "fc2", d, d_ff)
    _norm(rng, p, "final_norm", d)
    return p


def _pool_params(rng, p, n_heads, d_l, d_k):
    p["pool.w_query"] = _gauss(rng, (n_heads, d_l), 0.7)
    p["pool.w_key"] = _gauss(rng, (n_heads, d_l, d_k), 0.7)
    p["pool.w_value"] = _gauss(rng, (n_heads, d_l, d_k), 0.7)
    p["pool.w_out"] = _gauss(rng, (d_k, n_heads, d_l), 0.7)


def _ffn_params(rng, p, pre, d):
    _linear(rng, p, pre + "fc1", 4 * d, d)
    _linear(rng, p, pre + "fc2", d, 4 * d)
    _norm(rng, p, pre + "norm", d)


def _smh_params(rng, d_in, d_head, n_heads, d_l, out_dim):
    p = {}
    _linear(rng, p, "proj", d_head, d_in)
    _ffn_params(rng, p, "blocks.0.", d_head)
    _ffn_params(rng, p, "blocks.1.", d_head)
    _pool_params(rng, p, n_heads, d_l, d_head)
    _linear(rng, p, "predict", out_dim, d_head)
    return p


def _mah_params(rng, d_in, d_head, n_heads, d_l, out_dim):
    p = {}
    for name in ("query", "key", "value", "skip"):
        _linear(rng, p, name, d_head, d_in, std=0.8)
    _linear(rng, p, "dense", d_head, d_head)
    _norm(rng, p, "norm", d_head)
    _ffn_params(rng, p, "ffn.", d_head)
    _pool_params(rng, p, n_heads, d_l, d_head)
    _linear(rng, p, "predict", out_dim, d_head)
    return p


def _row_stochastic(rng, size):
    return [plain.softmax([rng.gauss(0.0, 1.5) for _ in range(size)]) for _ in range(size)]


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


# ---- generators ----------------------------------------------------------------

def case_matmul():
    rng = random.Random(101)
    a, b = _mat(rng, 3, 4), _mat(rng, 4, 2)
    return OracleCase("matmul_triple_loop", "plain.matmul", "numerics.matmul", 1e-12,
                      {"a": a, "b": b}, plain.matmul(a, b))


def _composite(p):
    xw = plain.matmul(p["x"], p["w"])
    total = sum(math.log(1.0 + math.exp(math.tanh(v))) for row in xw for v in row)
    return total + 0.5 * sum(v * v for row in p["x"] for v in row)


def case_backward_composite():
    rng = random.Random(102)
    p = {"x": _mat(rng, 2, 3), "w": _mat(rng, 3, 2)}
    value = _composite(p)
    grads = plain.central_difference(_composite, p)
    return OracleCase("backward_composite_graph", "plain.central_difference",
                      "numerics.backward", 1e-4, dict(p),
                      {"value": value, "grad_x": grads["x"], "grad_w": grads["w"]})


TOY_ENCODER = {"n_layers": 2, "n_heads": 2, "d_model": 4, "d_ff": 8, "max_len": 6, "vocab_size": 25}


def case_toy_encoder_fd():
    rng = random.Random(103)
    cfg = TOY_ENCODER
    params = _encoder_params(rng, cfg["n_layers"], cfg["d_model"], cfg["d_ff"],
                             cfg["vocab_size"], cfg["max_len"])
    ids = [1, 7, 12, 5, 2]
    probe = _gauss(rng, (len(ids), cfg["d_model"]), 1.0)

    def loss(p):
        hidden, _ = plain.encoder_forward(p, ids, cfg["n_layers"], cfg["n_heads"])
        return sum(_dot(h, r) for h, r in zip(hidden, probe))

    value = loss(params)
    grads = plain.central_difference(loss, params)
    return OracleCase("toy_encoder_finite_difference", "plain.encoder_forward+central_difference",
                      "numerics.finite_diff_grad / encoder backward", 1e-4,
                      {"config": cfg, "ids": ids, "probe": probe, "params": params},
                      {"value": value, "grads": grads})


def case_encoder_padding():
    rng = random.Random(104)
    cfg = TOY_ENCODER
    params = _encoder_params(rng, cfg["n_layers"], cfg["d_model"], cfg["d_ff"],
                             cfg["vocab_size"], cfg["max_len"])
    ids = [1, 9, 14, 2]
    hidden, _ = plain.encoder_forward(params, ids, cfg["n_layers"], cfg["n_heads"])
    return OracleCase("encoder_padding_hidden_rows", "plain.encoder_forward",
                      "encoder.Encoder.forward under right-padding", 1e-10,
                      {"config": cfg, "ids": ids, "params": params}, hidden)


def _encoder_size(e):
    d, f = e["d_model"], e["d_ff"]
    per_layer = 2 * d + 4 * (d * d + d) + 2 * d + (d * f + f) + (f * d + d)
    return e["vocab_size"] * d + e["max_len"] * d + e["n_layers"] * per_layer + 2 * d


def _head_size(h, d_in):
    dh, dl, nh, out = h["d_head"], h["d_l"], h["n_heads"], h["out_dim"]
    ffn = (dh * 4 * dh + 4 * dh) + (4 * dh * dh + dh) + 2 * dh
    pool = nh * dl + 2 * nh * dl * dh + dh * nh * dl
    predict = dh * out + out
    if h["kind"] == "SMH":
        return (d_in * dh + dh) + 2 * ffn + pool + predict
    return 4 * (d_in * dh + dh) + (dh * dh + dh) + 2 * dh + ffn + pool + predict


def case_param_count():
    enc = {"n_layers": 2, "n_heads": 2, "d_model": 16, "d_ff": 32, "max_len": 24, "vocab_size": 25}
    lora = {"rank": 4, "alpha": 32.0, "targets": ["query", "value", "dense"]}
    head = {"kind": "CM-MAH", "d_head": 8, "n_heads": 2, "d_l": 4, "out_dim": 3}
    d = enc["d_model"]
    n_lora = sum(lora["rank"] * (d + d) for _ in range(enc["n_layers"]) for _ in lora["targets"])
    n_contact = enc["n_layers"] + 1
    n_head = _head_size(head, d)
    return OracleCase("lora_param_count_closed_form", "closed-form r*(d+k) sum plus head sizes",
                      "lora.trainable_param_report", 0.0,
                      {"encoder": enc, "lora": lora, "head": head},
                      {"lora": n_lora, "contact_head": n_contact, "head": n_head,
                       "trainable": n_lora + n_contact + n_head, "frozen": _encoder_size(enc)})


def case_lora_dense():
    rng = random.Random(105)
    d, k, r, alpha = 5, 6, 3, 6.0
    w0, b, a_, b_ = _mat(rng, d, k), _vec(rng, d), _mat(rng, r, k), _mat(rng, d, r)
    x = _mat(rng, 4, k)
    ba = plain.matmul(b_, a_)
    full = [[w0[i][j] + (alpha / r) * ba[i][j] for j in range(k)] for i in range(d)]
    out = [plain.affine(full, b, row) for row in x]
    return OracleCase("lora_dense_construction", "dense (W0 + alpha/r BA) x + b",
                      "lora.lora_forward", 1e-12,
                      {"W0": w0, "bias": b, "A": a_, "B": b_, "alpha": alpha, "rank": r, "x": x}, out)


def case_lora_merge():
    rng = random.Random(106)
    d, k, r, alpha = 6, 5, 2, 32.0
    w0, b, a_, b_ = _mat(rng, d, k), _vec(rng, d), _mat(rng, r, k), _mat(rng, d, r)
    merged = [[w0[i][j] + (alpha / r) * sum(b_[i][t] * a_[t][j] for t in range(r))
               for j in range(k)] for i in range(d)]
    return OracleCase("lora_merge_weight", "elementwise W0 + alpha/r sum_t B[i,t] A[t,j]",
                      "lora.merge (and merged vs runtime on 100 probes)", 1e-12,
                      {"W0": w0, "bias": b, "A": a_, "B": b_, "alpha": alpha, "rank": r,
                       "n_probes": 100, "probe_tolerance": 1e-10},
                      {"merged_weight": merged})


DESK_ENCODER = {"n_layers": 4, "n_heads": 4, "d_model": 64, "d_ff": 256, "max_len": 512, "vocab_size": 25}
DESK_HEAD = {"kind": "CM-MAH", "d_head": 64, "n_heads": 4, "d_l": 32, "out_dim": 1}


def case_desk_fraction():
    enc, head = DESK_ENCODER, DESK_HEAD
    lora = {"rank": 32, "alpha": 32.0, "targets": ["query", "key", "value"]}
    d = enc["d_model"]
    n_lora = enc["n_layers"] * len(lora["targets"]) * lora["rank"] * (d + d)
    n_enc = _encoder_size(enc)
    n_head = _head_size(head, d)
    n_contact = enc["n_layers"] + 1
    trainable = n_lora + n_head + n_contact
    return OracleCase("lora_desk_trainable_fraction", "closed-form parameter counts",
                      "lora.trainable_param_report on the default config", 1e-12,
                      {"encoder": enc, "lora": lora, "head": head, "max_adapted_fraction": 0.2},
                      {"encoder_params": n_enc, "lora_params": n_lora,
                       "adapted_encoder_fraction": n_lora / (n_enc + n_lora),
                       "head_params": n_head, "contact_head_params": n_contact,
                       "whole_model_fraction": trainable / (trainable + n_enc)})


def case_contact():
    rng = random.Random(107)
    n, size = 3, 6
    maps = [_row_stochastic(rng, size) for _ in range(n)]
    weight = [[rng.gauss(0.0, 1.0)] for _ in range(n)]
    bias = rng.gauss(0.0, 0.5)
    return OracleCase("contact_symmetric_projection", "plain.contact_probs",
                      "contact.ContactHead.forward", 1e-12,
                      {"layer_maps": maps, "weight": weight, "bias": bias},
                      plain.contact_probs(maps, weight, bias))


def case_pooling():
    rng = random.Random(108)
    p = {}
    _pool_params(rng, p, 2, 3, 4)
    rows = _mat(rng, 3, 4)
    return OracleCase("pooling_padding_invariance", "plain.attention_pool",
                      "heads.AttentionPooling under right-padding", 1e-10,
                      {"params": p, "rows": rows, "pad": 4}, plain.attention_pool(p, rows))


HEAD_TOY = {"d_in": 4, "d_head": 4, "n_heads": 2, "d_l": 2, "out_dim": 2}


def _head_case(name, kind, seed):
    rng = random.Random(seed)
    t = HEAD_TOY
    build = _smh_params if kind == "SMH" else _mah_params
    params = build(rng, t["d_in"], t["d_head"], t["n_heads"], t["d_l"], t["out_dim"])
    params["rows"] = _mat(rng, 3, t["d_in"])
    probe = _vec(rng, t["out_dim"])

    def loss(p):
        rows = p["rows"]
        if kind == "SMH":
            logits = plain.smh_forward(p, rows)
        else:
            logits = plain.mah_forward(p, rows, t["n_heads"])
        return _dot(logits, probe)

    value = loss(params)
    grads = plain.central_difference(loss, params)
    return OracleCase(name, f"plain.{kind.lower().replace('-', '_')}_forward+central_difference",
                      f"heads ({kind}) backward", 1e-4,
                      {"head": dict(t, kind=kind), "params": params, "probe": probe},
                      {"value": value, "grads": grads})


def case_smh_grad():
    return _head_case("smh_gradient", "SMH", 109)


def case_mah_grad():
    return _head_case("mah_gradient", "MAH", 110)


def case_cm_mah_contact_grad():
    rng = random.Random(111)
    t = HEAD_TOY
    params = _mah_params(rng, t["d_in"], t["d_head"], t["n_heads"], t["d_l"], t["out_dim"])
    params["rows"] = _mat(rng, 3, t["d_in"])
    params["contact.weight"] = [[rng.gauss(0.0, 1.0)] for _ in range(2)]
    params["contact.bias"] = rng.gauss(0.0, 0.3)
    maps = [_row_stochastic(rng, 5) for _ in range(2)]
    probe = _vec(rng, t["out_dim"])

    def loss(p):
        contact = plain.contact_probs(maps, p["contact.weight"], p["contact.bias"])
        return _dot(plain.mah_forward(p, p["rows"], t["n_heads"], contact), probe)

    value = loss(params)
    grads = plain.central_difference(loss, params, ["contact.weight", "contact.bias"])
    return OracleCase("cm_mah_contact_gradient", "plain.contact_probs+mah_forward+central_difference",
                      "gradient reaches the contact head through CM-MAH", 1e-4,
                      {"head": dict(t, kind="CM-MAH"), "params": params, "layer_maps": maps,
                       "probe": probe},
                      {"value": value, "grads": grads})


def case_ml_bce():
    rng = random.Random(112)
    p = [[rng.uniform(0.001, 0.999) for _ in range(5)] for _ in range(6)]
    p[0][0], p[1][3] = 0.0, 1.0  # exercise the clamp
    y = [[float(rng.random() < 0.4) for _ in range(5)] for _ in range(6)]
    return OracleCase("ml_bce_scalar_loop", "plain.ml_bce", "losses.ml_bce", 1e-12,
                      {"p": p, "y": y}, plain.ml_bce(p, y))


def case_cross_entropy():
    rng = random.Random(113)
    logits = _mat(rng, 7, 4, 3.0)
    y = [rng.randrange(4) for _ in range(7)]
    return OracleCase("cross_entropy_naive", "plain.cross_entropy", "losses.cross_entropy", 1e-12,
                      {"logits": logits, "y": y}, plain.cross_entropy(logits, y))


def case_mse():
    rng = random.Random(114)
    p, y = _vec(rng, 9, 2.0), _vec(rng, 9, 2.0)
    return OracleCase("mse_loop", "plain.mse", "losses.mse", 1e-12, {"p": p, "y": y}, plain.mse(p, y))


def case_f1max():
    rng = random.Random(115)
    p = [[round(rng.random(), 3) for _ in range(5)] for _ in range(10)]
    y = [[int(rng.random() < 0.3) for _ in range(5)] for _ in range(10)]
    y[0][0] = 1
    return OracleCase("f1max_exhaustive", "plain.f1_max (loop over t = i/100)", "metrics.f1_max",
                      0.0, {"p": p, "y": y}, plain.f1_max(p, y))


def case_accuracy_padding():
    rng = random.Random(116)
    lengths = [5, 3, 4]
    pred = [[rng.randrange(3) for _ in range(n)] for n in lengths]
    y = [[rng.randrange(3) for _ in range(n)] for n in lengths]
    flat_p = [v for row in pred for v in row]
    flat_y = [v for row in y for v in row]
    return OracleCase("accuracy_padding_excluded", "plain.accuracy on unpadded tokens",
                      "metrics.accuracy with a validity mask", 1e-12,
                      {"pred": pred, "y": y}, plain.accuracy(flat_p, flat_y))


def case_spearman():
    rng = random.Random(117)
    p = rng.sample(range(1000), 12)
    y = rng.sample(range(1000), 12)
    p = [v / 7.0 for v in p]
    y = [v / 3.0 - 20.0 for v in y]
    return OracleCase("spearman_d2_formula", "plain.spearman_d2 (1 - 6 sum d^2 / n(n^2-1))",
                      "metrics.spearman_rho", 1e-12, {"p": p, "y": y}, plain.spearman_d2(p, y))


def case_r2():
    rng = random.Random(118)
    y = _vec(rng, 10, 3.0)
    p = [v + rng.gauss(0.0, 1.0) for v in y]
    return OracleCase("r2_loop", "plain.r_squared", "metrics.r_squared", 1e-12,
                      {"p": p, "y": y}, plain.r_squared(p, y))


def case_accumulation():
    sizes = [1, 7, 8, 15, 16, 17, 24, 40, 45, 240]
    batch, acc = 8, 16
    return OracleCase("accumulation_update_count", "plain.updates_per_epoch (sample counter)",
                      "data.accumulation_groups / training.finetune optimizer steps", 0.0,
                      {"n_samples": sizes, "batch_size": batch, "accumulation": acc},
                      [plain.updates_per_epoch(n, batch, acc) for n in sizes])


def case_composition():
    rng = random.Random(119)
    letters = "ACDEFGHIKLMNPQRSTVWY"
    weights = {a: rng.gauss(0.0, 1.0) for a in letters}
    seqs = ["".join(rng.choice(letters) for _ in range(rng.randint(8, 20))) for _ in range(5)]
    return OracleCase("composition_counting", "plain.composition_target (letter counts)",
                      "data.composition_target", 1e-12,
                      {"weights": weights, "sequences": seqs},
                      [plain.composition_target(s, weights) for s in seqs])


def case_mlm_run():
    return OracleCase("mlm_loss_decreases", "run-and-compare", "training.pretrain_mlm", 0.1,
                      {"overrides": ["encoder.n_layers=2", "encoder.d_model=32", "encoder.d_ff=64",
                                     "pretrain.steps=200", "pretrain.corpus_size=800"]},
                      {"initial_loss": math.log(25), "relation": "final_loss < initial_loss"})


def case_regression_run():
    return OracleCase("cm_mah_regression_train_spearman", "run-and-measure",
                      "training.finetune with a CM-MAH head", 0.0,
                      {"overrides": ["data.n=640", "train.epochs=10", "head.kind=CM-MAH",
                                     "task.kind=seq-regression"]},
                      {"min_train_spearman": 0.9, "max_epochs": 10})


def case_evaluate_crosscheck():
    return OracleCase("evaluate_matches_offline_metric", "plain.spearman_pearson on dumped predictions",
                      "training.evaluate", 1e-12,
                      {"overrides": ["encoder.n_layers=2", "encoder.d_model=16", "encoder.n_heads=2",
                                     "encoder.d_ff=32", "data.n=48", "data.length=12", "head.d_head=8",
                                     "head.d_l=4", "head.n_heads=2", "lora.rank=4", "train.epochs=2"]},
                      {"relation": "evaluate.final_metric == spearman_pearson(predictions, labels)"})


GENERATORS = [
    case_matmul, case_backward_composite, case_toy_encoder_fd, case_encoder_padding,
    case_param_count, case_lora_dense, case_lora_merge, case_desk_fraction, case_contact,
    case_pooling, case_smh_grad, case_mah_grad, case_cm_mah_contact_grad, case_ml_bce,
    case_cross_entropy, case_mse, case_f1max, case_accuracy_padding, case_spearman, case_r2,
    case_accumulation, case_composition, case_mlm_run, case_regression_run,
    case_evaluate_crosscheck,
]


def generate_all() -> list[OracleCase]:
    return [g() for g in GENERATORS]


def write_corpus(cases_dir: Path = CASES_DIR) -> list[Path]:
    cases_dir = Path(cases_dir)
    cases_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for case in generate_all():
        path = cases_dir / f"{case.name}.txt"
        path.write_text(case.to_text(), encoding="utf-8")
        paths.append(path)
    return paths


# ---- drift check ---------------------------------------------------------------

def _drift(frozen, fresh, tol: float, where: str = "") -> str | None:
    if isinstance(frozen, dict) and isinstance(fresh, dict):
        if set(frozen) != set(fresh):
            return f"{where}: keys differ"
        for k in frozen:
            msg = _drift(frozen[k], fresh[k], tol, f"{where}.{k}")
            if msg:
                return msg
        return None
    if isinstance(frozen, list) and isinstance(fresh, list):
        if len(frozen) != len(fresh):
            return f"{where}: length {len(frozen)} vs {len(fresh)}"
        for i, (a, b) in enumerate(zip(frozen, fresh)):
            msg = _drift(a, b, tol, f"{where}[{i}]")
            if msg:
                return msg
        return None
    if isinstance(frozen, (int, float)) and isinstance(fresh, (int, float)) \
            and not isinstance(frozen, bool):
        if abs(frozen - fresh) > tol * max(1.0, abs(fresh)):
            return f"{where}: frozen {frozen!r} vs regenerated {fresh!r}"
        return None
    if frozen != fresh:
        return f"{where}: frozen {frozen!r} vs regenerated {fresh!r}"
    return None


@dataclass
class CaseResult:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class OracleReport:
    results: list[CaseResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    @property
    def failures(self) -> list[str]:
        return [r.name for r in self.results if not r.ok]

    def lines(self) -> list[str]:
        return [f"{'PASS' if r.ok else 'FAIL'} {r.name}" + (f": {r.detail}" if r.detail else "")
                for r in self.results]


def run_oracles(cases_dir: Path = CASES_DIR) -> OracleReport:
    """Regenerate every case and compare it with the frozen corpus."""
    frozen = load_cases(cases_dir)
    results = []
    for case in generate_all():
        old = frozen.pop(case.name, None)
        if old is None:
            results.append(CaseResult(case.name, False, "no frozen case file"))
            continue
        tol = case.tolerance
        msg = _drift(old.inputs, case.inputs, 0.0, "inputs") or \
            _drift(old.expected, case.expected, tol, "expected")
        if (old.oracle, old.checks, old.tolerance) != (case.oracle, case.checks, case.tolerance):
            msg = msg or "header fields changed"
        results.append(CaseResult(case.name, msg is None, msg or ""))
    for name in sorted(frozen):
        results.append(CaseResult(name, False, "frozen case has no generator"))
    return OracleReport(results)

"""``protlora`` command line.

Subcommands: pretrain, finetune, evaluate, sweep, predict, plot. Every run
reads an optional INI config (``--config``) and ``--set section.key=value``
overrides. Exit codes: 0 ok, 2 config, 3 data, 4 numeric, 5 checkpoint.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .checkpoint import CheckpointError
from .config import LR_CANDIDATES, RANK_CANDIDATES, ConfigError, load_config, write_config
from .data import DataError, load_task_table
from .lora import normalize_targets
from .training import (
    TARGET_SETS,
    NumericError,
    finetune,
    load_model,
    load_task_data,
    lr_search,
    predict,
    pretrain_mlm,
    read_reports,
    sweep,
    sweep_rows,
    sweep_table,
)
from . import training

EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC, EXIT_CHECKPOINT = 2, 3, 4, 5


def _config(args):
    overrides = list(args.set or [])
    if getattr(args, "seed", None) is not None:
        overrides.append(f"train.seed={args.seed}")
    return load_config(args.config, overrides)


def _emit(report, args) -> None:
    print(report.to_json())


def cmd_pretrain(args) -> int:
    cfg = _config(args)
    _, report = pretrain_mlm(cfg)
    _emit(report, args)
    return 0


def cmd_finetune(args) -> int:
    cfg = _config(args)
    _, report = finetune(cfg)
    _emit(report, args)
    return 0


def cmd_evaluate(args) -> int:
    records = None
    if args.table:
        _, _, spec, _ = load_model(args.checkpoint)
        records = load_task_table(args.table, spec)
    report = training.evaluate(args.checkpoint, records)
    if args.report:
        report.append_to(args.report)
    _emit(report, args)
    return 0


def _parse_target_sets(items: list[str] | None):
    if not items:
        return TARGET_SETS
    return [normalize_targets(item) for item in items]


def cmd_sweep(args) -> int:
    cfg = _config(args)
    cfg.validate()
    data = load_task_data(cfg)
    if args.lr_search:
        best, scores = lr_search(cfg, data, probe_epochs=args.probe_epochs)
        print(json.dumps({"lr_search": {str(k): v for k, v in scores.items()}, "best_lr": best}))
        cfg.train.lr = best
    ranks = [int(r) for r in args.ranks.split(",")] if args.ranks else list(RANK_CANDIDATES)
    cells = sweep(cfg, ranks, _parse_target_sets(args.targets), data)
    table = sweep_table(cells, ranks)
    print(table)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(table + "\n", encoding="utf-8")
        with open(out.with_suffix(".jsonl"), "w", encoding="utf-8") as fh:
            for row in sweep_rows(cells):
                fh.write(json.dumps(row, sort_keys=True) + "\n")
    if cfg.paths.report:
        for c in cells:
            if c.report is not None:
                c.report.append_to(cfg.paths.report)
    return 0


def cmd_predict(args) -> int:
    summary = predict(args.checkpoint, args.fasta, args.out, args.emit_contacts)
    print(json.dumps(summary, sort_keys=True))
    return 0


def cmd_plot(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    reports = [r for r in read_reports(args.report) if r["mode"] == "finetune" or args.all]
    if not reports:
        raise DataError(f"{args.report}: no finetune reports to plot")
    fig, (ax_loss, ax_metric) = plt.subplots(1, 2, figsize=(10, 4))
    for i, r in enumerate(reports):
        lora = r["config"]["lora"]
        label = f"run {i}: " + (f"LoRA r={lora['rank']}" if lora["enabled"] else "no LoRA")
        epochs = range(1, len(r["train_loss"]) + 1)
        style = "-" if lora["enabled"] else "--"
        ax_loss.plot(epochs, r["train_loss"], style, label=label)
        if r["test_metric"]:
            ax_metric.plot(range(1, len(r["test_metric"]) + 1), r["test_metric"], style, label=label)
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("train loss")
    ax_metric.set_xlabel("epoch")
    ax_metric.set_ylabel(f"test {reports[0]['metric']}")
    ax_metric.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(args.out, dpi=120)
    print(args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="protlora", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress per epoch")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", help="INI config file (default: built-in defaults)")
        p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                       help="override one config value; repeatable")
        p.add_argument("--seed", type=int, help="shortcut for --set train.seed=N")
        return p

    with_config(sub.add_parser("pretrain", help="masked-LM pretraining of a base encoder"))
    with_config(sub.add_parser("finetune", help="LoRA fine-tuning on a task"))

    p = sub.add_parser("evaluate", help="score a saved model on its test split")
    p.add_argument("checkpoint")
    p.add_argument("--table", help="task table to score instead of the configured test split")
    p.add_argument("--report", help="append the RunReport to this JSONL file")

    p = with_config(sub.add_parser("sweep", help="rank x target-set grid"))
    p.add_argument("--ranks", help=f"comma-separated ranks (default {list(RANK_CANDIDATES)})")
    p.add_argument("--targets", action="append",
                   help="target set such as query,key; repeatable (default: all 14 sets)")
    p.add_argument("--lr-search", action="store_true",
                   help=f"probe {list(LR_CANDIDATES)} first and sweep with the best")
    p.add_argument("--probe-epochs", type=int, default=3)
    p.add_argument("--out", help="write the markdown table here (plus a .jsonl of cells)")

    p = sub.add_parser("predict", help="predict on a FASTA file")
    p.add_argument("checkpoint")
    p.add_argument("fasta")
    p.add_argument("--out", required=True, help="TSV of id / prediction")
    p.add_argument("--emit-contacts", metavar="PATH", help="dump contact maps to this text file")

    p = sub.add_parser("plot", help="loss / metric curves from a report file")
    p.add_argument("report")
    p.add_argument("--out", default="curves.png")
    p.add_argument("--all", action="store_true", help="include non-finetune reports")

    p = sub.add_parser("init-config", help="write the default config to a file")
    p.add_argument("path")
    return parser


COMMANDS = {
    "pretrain": cmd_pretrain,
    "finetune": cmd_finetune,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "predict": cmd_predict,
    "plot": cmd_plot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "init-config":
            write_config(load_config(), args.path)
            return 0
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CheckpointError as exc:
        print(f"checkpoint error: {exc}", file=sys.stderr)
        return EXIT_CHECKPOINT
    except (DataError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (NumericError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

Subcommands: features, train, eval, grid, predict. Exit codes: 0 success,
1 usage/configuration error, 2 data or file-format error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import report as report_mod
from .data import parse_intent_tsv, read_embedding_file, toy_embeddings, write_embedding_file
from .encoder import extract_features, init_filter_bank
from .errors import ConfigError, DataFormatError
from .harness import ExperimentConfig, features_matrix, labels_vector, load_corpus, run_experiment, run_grid
from .model import TrainConfig, load_head, save_head, train
from .rng import derive_seed

USAGE_ERROR = 1
DATA_ERROR = 2


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _add_data_flags(p, test=True):
    p.add_argument("--train", help="training TSV (utterance<TAB>intent)")
    p.add_argument("--dev", help="development TSV")
    if test:
        p.add_argument("--test", help="test TSV")
    p.add_argument(
        "--embeddings",
        action="append",
        default=None,
        metavar="QTCE",
        help="precomputed embedding file; repeat per supplied split (train, dev, test order)",
    )
    p.add_argument("--toy-dim", type=int, help="use deterministic toy embeddings of this dimension")
    p.add_argument("--max-len", type=int, default=50, help="token truncation length (default 50)")


def _add_encoder_flags(p):
    p.add_argument("--encoder", choices=["qtc", "tcn"], default="qtc")
    p.add_argument("--filters", type=int, default=2, metavar="N", help="filter count (1-4)")
    p.add_argument("--kernel", type=int, default=4, metavar="K", help="kernel size / qubit count")


def _add_train_flags(p):
    p.add_argument("--epochs", type=int, default=200)
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--optimizer", choices=["adam", "sgd"], default="adam")


def _train_config(args) -> TrainConfig:
    return TrainConfig(
        learning_rate=args.lr, epochs=args.epochs, batch_size=args.batch_size, optimizer=args.optimizer
    )


def _experiment_config(args, encoder=None, n=None, k=None) -> ExperimentConfig:
    splits_given = [s for s in ("train", "dev", "test") if getattr(args, s, None) is not None]
    emb_paths = {}
    if args.embeddings:
        if args.toy_dim is not None:
            raise ConfigError("--embeddings and --toy-dim are mutually exclusive")
        targets = splits_given or ["train", "dev", "test"][: len(args.embeddings)]
        if len(args.embeddings) != len(targets):
            raise ConfigError(
                f"got {len(args.embeddings)} --embeddings for {len(targets)} splits ({', '.join(targets)})"
            )
        emb_paths = dict(zip(targets, args.embeddings))
    return ExperimentConfig(
        encoder=encoder if encoder is not None else getattr(args, "encoder", "qtc"),
        n=n if n is not None else getattr(args, "filters", 2),
        k=k if k is not None else getattr(args, "kernel", 4),
        seed=args.seed,
        folds=getattr(args, "folds", 10),
        max_len=args.max_len,
        train_path=getattr(args, "train", None),
        dev_path=getattr(args, "dev", None),
        test_path=getattr(args, "test", None),
        toy_dim=args.toy_dim,
        embedding_paths=emb_paths,
        train_config=_train_config(args) if hasattr(args, "epochs") else TrainConfig(),
    )


def _cmd_features(args) -> int:
    config = _experiment_config(args)
    train_seqs, _, _, _ = load_corpus(config)
    if args.embeddings_out:
        write_embedding_file(args.embeddings_out, train_seqs)
        print(f"wrote {len(train_seqs)} embedding records to {args.embeddings_out}", file=sys.stderr)
    if args.out:
        D = train_seqs[0].D if train_seqs else config.toy_dim
        bank = init_filter_bank(config.encoder, config.n, config.k, D, config.seed)
        with open(args.out, "w", encoding="utf-8") as fh:
            for seq in train_seqs:
                fv = extract_features(bank, seq, config.max_len)
                fh.write(
                    json.dumps({"id": seq.id, "label": seq.label, "features": [float(v) for v in fv.values]})
                    + "\n"
                )
        print(f"wrote {len(train_seqs)} feature rows to {args.out}", file=sys.stderr)
    if not args.embeddings_out and not args.out:
        raise ConfigError("nothing to do: pass --out (JSONL features) and/or --embeddings-out (QTCE)")
    return 0


def _cmd_train(args) -> int:
    config = _experiment_config(args)
    train_seqs, dev_seqs, _, label_index = load_corpus(config)
    pool = train_seqs + dev_seqs
    D = pool[0].D
    bank = init_filter_bank(config.encoder, config.n, config.k, D, config.seed)
    X = features_matrix(bank, pool, config.max_len)
    y = labels_vector(pool, label_index)
    head = train(X, y, config.train_config, seed=derive_seed(config.seed, "train"), num_classes=len(label_index))
    labels = [lab for lab, _ in sorted(label_index.items(), key=lambda kv: kv[1])]
    save_head(
        args.model_out,
        head,
        extra={
            "labels": labels,
            "encoder": {
                "kind": config.encoder,
                "n": config.n,
                "k": config.k,
                "D": D,
                "seed": config.seed,
                "max_len": config.max_len,
            },
        },
    )
    print(f"trained on {len(pool)} utterances ({len(label_index)} intents); head -> {args.model_out}",
          file=sys.stderr)
    return 0


def _cmd_eval(args) -> int:
    config = _experiment_config(args)
    result = run_experiment(config)
    print(report_mod.render_runs_text(result))
    if args.out:
        report_mod.write_report_json(args.out, result)
        report_mod.write_runs_csv(report_mod.sibling(args.out, ".csv"), result)
        if not args.no_fig:
            report_mod.plot_runs(report_mod.sibling(args.out, ".png"), result)
    return 0


def _cmd_grid(args) -> int:
    config = _experiment_config(args, encoder="qtc", n=2, k=4)
    grid = run_grid(config)
    print(report_mod.render_grid_table(grid))
    if args.out:
        report_mod.write_grid_json(args.out, grid)
        report_mod.write_grid_csv(report_mod.sibling(args.out, ".csv"), grid)
        if not args.no_fig:
            report_mod.plot_grid(report_mod.sibling(args.out, ".png"), grid)
    return 0


def _cmd_predict(args) -> int:
    head, extra = load_head(args.model)
    enc = extra.get("encoder")
    if not enc:
        raise DataFormatError(f"{args.model}: missing encoder metadata; cannot rebuild the filter bank")
    labels = extra.get("labels")
    seqs = read_embedding_file(args.embeddings_file)
    bank = init_filter_bank(enc["kind"], enc["n"], enc["k"], enc["D"], enc["seed"])
    X = features_matrix(bank, seqs, enc.get("max_len", 50))
    picks = np.argmax((X @ head.W.T) + head.b, axis=1)
    lines = []
    for seq, c in zip(seqs, picks):
        name = labels[c] if labels and c < len(labels) else str(int(c))
        lines.append(f"{seq.id}\t{name}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if labels and all(s.label for s in seqs):
        known = [i for i, s in enumerate(seqs) if s.label in labels]
        if known:
            hits = sum(1 for i in known if labels[picks[i]] == seqs[i].label)
            print(f"accuracy on {len(known)} labeled records: {hits / len(known):.4f}", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="qtcintent", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("features", help="dump embeddings (QTCE) and/or encoded features (JSONL)")
    _add_data_flags(p, test=False)
    _add_encoder_flags(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", help="JSONL feature dump path")
    p.add_argument("--embeddings-out", help="QTCE dump path for the embeddings in use")
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("train", help="train a softmax head and save it as JSON")
    _add_data_flags(p, test=False)
    _add_encoder_flags(p)
    _add_train_flags(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--model-out", required=True, help="output head JSON path")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="seeded-runs / k-fold evaluation of one configuration")
    _add_data_flags(p)
    _add_encoder_flags(p)
    _add_train_flags(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--out", help="JSON report path (writes .csv and .png siblings)")
    p.add_argument("--no-fig", action="store_true", help="skip the PNG figure")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("grid", help="run the (n,k) grid for both encoders")
    _add_data_flags(p)
    _add_train_flags(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--out", help="JSON report path (writes .csv and .png siblings)")
    p.add_argument("--no-fig", action="store_true", help="skip the PNG figure")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("predict", help="label QTCE records with a trained head")
    p.add_argument("--model", required=True, help="head JSON from `train`")
    p.add_argument("--embeddings", dest="embeddings_file", required=True, metavar="QTCE")
    p.add_argument("--out", help="TSV output path (default stdout)")
    p.set_defaults(func=_cmd_predict)
    return parser


def cli(argv=None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # raised by -h (0) and usage errors (1)
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"qtcintent: configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (DataFormatError, OSError) as exc:
        print(f"qtcintent: data error: {exc}", file=sys.stderr)
        return DATA_ERROR
    except ValueError as exc:
        print(f"qtcintent: data error: {exc}", file=sys.stderr)
        return DATA_ERROR


def main() -> None:
    sys.exit(cli())


if __name__ == "__main__":
    main()

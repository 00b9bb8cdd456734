"""Experiment driver: seeded runs / k-fold cross-validation over the
(embedding x encoder x n x k) grid, with JSON/CSV/figure reports.

"folds" means 10 independently seeded runs (fresh filter bank + shuffle per
run) evaluated on the fixed test split when one is given; with no test split
it falls back to true k-fold cross-validation over pooled train+dev.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .data import (
    DatasetSplit,
    EmbeddingSequence,
    parse_intent_tsv,
    read_embedding_file,
    kfold_split,
    toy_embeddings,
)
from .encoder import DEFAULT_MAX_LEN, QTC, extract_features, init_filter_bank
from .errors import ConfigError, DataFormatError
from .model import TrainConfig, accuracy, train
from .rng import SplitMix64, derive_seed

GRID_CELLS = ((1, 4), (2, 2), (2, 3), (2, 4))
GRID_ENCODERS = ("tcn", "qtc")

SPLITS = ("train", "dev", "test")


@dataclass
class ExperimentConfig:
    encoder: str = QTC
    n: int = 2
    k: int = 4
    seed: int = 42
    folds: int = 10
    max_len: int = DEFAULT_MAX_LEN
    train_path: str | None = None
    dev_path: str | None = None
    test_path: str | None = None
    toy_dim: int | None = None
    embedding_paths: dict[str, str] = field(default_factory=dict)
    train_config: TrainConfig = field(default_factory=TrainConfig)

    def echo(self) -> dict:
        tc = self.train_config
        return {
            "encoder": self.encoder,
            "n": self.n,
            "k": self.k,
            "seed": self.seed,
            "folds": self.folds,
            "max_len": self.max_len,
            "train_path": self.train_path,
            "dev_path": self.dev_path,
            "test_path": self.test_path,
            "toy_dim": self.toy_dim,
            "embedding_paths": dict(self.embedding_paths) or None,
            "training": {
                "learning_rate": tc.learning_rate,
                "epochs": tc.epochs,
                "batch_size": tc.batch_size,
                "optimizer": tc.optimizer,
            },
        }


@dataclass
class RunResult:
    accuracy: float
    bank_seed: int
    train_seed: int
    bank: dict  # serialized bank summary (seeds only, never raw parameters)

    def to_json_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "bank_seed": self.bank_seed,
            "train_seed": self.train_seed,
            "bank": self.bank,
        }


@dataclass
class MetricsReport:
    runs: list[RunResult]
    mean: float
    std: float
    config: dict
    wall_time_s: float

    @property
    def accuracies(self) -> list[float]:
        return [r.accuracy for r in self.runs]

    @classmethod
    def from_runs(cls, runs: list[RunResult], config: dict, wall_time_s: float) -> "MetricsReport":
        accs = np.array([r.accuracy for r in runs])
        return cls(runs, float(accs.mean()), float(accs.std()), config, wall_time_s)

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "runs": [r.to_json_dict() for r in self.runs],
            "mean": self.mean,
            "std": self.std,
            "wall_time_s": self.wall_time_s,
        }


def _load_split(config: ExperimentConfig, split: str) -> list[EmbeddingSequence] | None:
    tsv_path = getattr(config, f"{split}_path")
    qtce_path = config.embedding_paths.get(split)
    if qtce_path is not None:
        seqs = read_embedding_file(qtce_path)
        if tsv_path is not None:
            utts = parse_intent_tsv(tsv_path)
            if len(utts) != len(seqs):
                raise DataFormatError(
                    f"{qtce_path}: {len(seqs)} records but {tsv_path} has {len(utts)} utterances"
                )
            for utt, seq in zip(utts, seqs):
                if utt.id != seq.id or utt.label != seq.label:
                    raise DataFormatError(
                        f"{qtce_path}: record {seq.id!r}/{seq.label!r} does not match "
                        f"{tsv_path} utterance {utt.id!r}/{utt.label!r}"
                    )
        return seqs
    if tsv_path is not None:
        if config.toy_dim is None:
            raise ConfigError("an embedding source is required: --embeddings <qtce> or --toy-dim <D>")
        utts = parse_intent_tsv(tsv_path)
        return [toy_embeddings(u, config.toy_dim, config.seed) for u in utts]
    return None


def load_corpus(config: ExperimentConfig):
    """Embedding sequences per split plus the label index over all splits."""
    parts = {split: _load_split(config, split) for split in SPLITS}
    if parts["train"] is None:
        raise ConfigError("a training split is required (--train and/or --embeddings)")
    labels = sorted({s.label for seqs in parts.values() if seqs for s in seqs})
    label_index = {lab: i for i, lab in enumerate(labels)}
    dims = {s.D for seqs in parts.values() if seqs for s in seqs}
    if len(dims) > 1:
        raise DataFormatError(f"splits mix embedding dims {sorted(dims)}")
    return parts["train"], parts["dev"] or [], parts["test"] or [], label_index


def features_matrix(bank, seqs, max_len: int) -> np.ndarray:
    return np.stack([extract_features(bank, s, max_len).values for s in seqs])


def labels_vector(seqs, label_index) -> np.ndarray:
    return np.array([label_index[s.label] for s in seqs], dtype=np.int64)


def _one_run(config, pool, pool_y, test, test_y, D, C, bank_seed, train_seed) -> RunResult:
    bank = init_filter_bank(config.encoder, config.n, config.k, D, bank_seed)
    X_pool = features_matrix(bank, pool, config.max_len)
    X_test = features_matrix(bank, test, config.max_len)
    head = train(X_pool, pool_y, config.train_config, seed=train_seed, num_classes=C)
    return RunResult(accuracy(head, X_test, test_y), bank_seed, train_seed, bank.to_json_dict())


def run_experiment(config: ExperimentConfig) -> MetricsReport:
    """Train/evaluate `config.folds` times and aggregate accuracies."""
    started = time.perf_counter()
    train_seqs, dev_seqs, test_seqs, label_index = load_corpus(config)
    pool = train_seqs + dev_seqs
    D = pool[0].D if pool else 0
    C = len(label_index)
    if C < 2:
        raise ConfigError(f"need at least 2 intent classes (got {C})")
    seed_stream = SplitMix64(derive_seed(config.seed, "runs"))
    runs = []
    if test_seqs:
        pool_y = labels_vector(pool, label_index)
        test_y = labels_vector(test_seqs, label_index)
        for _ in range(config.folds):
            bank_seed, train_seed = seed_stream.next_u64(), seed_stream.next_u64()
            runs.append(_one_run(config, pool, pool_y, test_seqs, test_y, D, C, bank_seed, train_seed))
    else:
        folds = kfold_split(pool, config.folds, seed=derive_seed(config.seed, "cv"))
        for train_idx, held_idx in folds:
            bank_seed, train_seed = seed_stream.next_u64(), seed_stream.next_u64()
            fold_train = [pool[i] for i in train_idx]
            fold_held = [pool[i] for i in held_idx]
            runs.append(
                _one_run(
                    config,
                    fold_train,
                    labels_vector(fold_train, label_index),
                    fold_held,
                    labels_vector(fold_held, label_index),
                    D,
                    C,
                    bank_seed,
                    train_seed,
                )
            )
    config_echo = config.echo()
    config_echo["cv_mode"] = "seeded-runs" if test_seqs else "kfold"
    return MetricsReport.from_runs(runs, config_echo, time.perf_counter() - started)


@dataclass
class GridCell:
    encoder: str
    n: int
    k: int
    report: MetricsReport


@dataclass
class GridResult:
    config: dict
    cells: list[GridCell]

    def cell(self, encoder: str, n: int, k: int) -> GridCell:
        for c in self.cells:
            if (c.encoder, c.n, c.k) == (encoder, n, k):
                return c
        raise KeyError(f"no grid cell ({encoder}, n={n}, k={k})")

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "cells": [
                {"encoder": c.encoder, "n": c.n, "k": c.k, "report": c.report.to_json_dict()}
                for c in self.cells
            ],
        }


def run_grid(base: ExperimentConfig, cells=GRID_CELLS, encoders=GRID_ENCODERS) -> GridResult:
    """Run the four (n,k) cells for each encoder; any cell failure names the cell."""
    load_corpus(base)  # surface corpus/config problems before any cell runs
    out = []
    for encoder in encoders:
        for n, k in cells:
            cell_config = replace(base, encoder=encoder, n=n, k=k)
            try:
                out.append(GridCell(encoder, n, k, run_experiment(cell_config)))
            except Exception as exc:
                raise RuntimeError(f"grid cell (encoder={encoder}, n={n}, k={k}) failed: {exc}") from exc
    return GridResult(base.echo(), out)

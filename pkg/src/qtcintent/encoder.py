"""Sliding-window feature extraction over token embeddings.

Two frozen-random encoders with matched shapes: the quantum temporal
convolution (each window angle-encoded into a k-qubit circuit, Pauli-Z
readout per qubit) and a classical baseline (random k x k mixing + tanh).
Both global-max-pool each of the n*k channels over window positions, so an
utterance of any length maps to an n*k feature vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .data import EmbeddingSequence
from .errors import ConfigError
from .rng import SplitMix64
from .vqc import CircuitSpec, init_circuit, run_circuit_batch

MIN_FILTERS, MAX_FILTERS = 1, 4
MIN_KERNEL, MAX_KERNEL = 2, 16
DEFAULT_MAX_LEN = 50

QTC = "qtc"
TCN = "tcn"


@dataclass(frozen=True)
class QtcFilter:
    """One quantum filter: D->scalar projection feeding a frozen circuit."""

    projection: np.ndarray  # (D,)
    circuit: CircuitSpec


@dataclass(frozen=True)
class TcnFilter:
    """One classical filter: the same projection, then a frozen k x k mixing."""

    projection: np.ndarray  # (D,)
    mixing: np.ndarray  # (k, k)


@dataclass(frozen=True)
class FilterBank:
    kind: str  # QTC or TCN
    filters: tuple
    n: int
    k: int
    D: int
    seed: int

    def to_json_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n, "k": self.k, "D": self.D, "seed": self.seed}
        if self.kind == QTC:
            out["circuits"] = [f.circuit.to_json_dict() for f in self.filters]
        return out


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray  # (n*k,)
    kind: str


def init_filter_bank(kind: str, n: int, k: int, D: int, seed: int) -> FilterBank:
    """Draw a frozen bank of n filters; fully reproducible from `seed`.

    Projections are N(0,1); quantum filters get a depth-1 circuit, classical
    filters a k x k mixing with N(0, 1/k) entries. Child seeds are split off
    the bank stream so filters stay independent.
    """
    if kind not in (QTC, TCN):
        raise ConfigError(f"unknown encoder kind {kind!r} (expected '{QTC}' or '{TCN}')")
    if not MIN_FILTERS <= n <= MAX_FILTERS:
        raise ConfigError(f"filter count must be in [{MIN_FILTERS}, {MAX_FILTERS}] (got {n})")
    if not MIN_KERNEL <= k <= MAX_KERNEL:
        raise ConfigError(f"kernel size must be in [{MIN_KERNEL}, {MAX_KERNEL}] (got {k})")
    if D < 1:
        raise ConfigError(f"embedding dim must be at least 1 (got {D})")
    rng = SplitMix64(seed)
    filters = []
    for _ in range(n):
        proj_seed = rng.next_u64()
        param_seed = rng.next_u64()
        projection = SplitMix64(proj_seed).normals(D)
        projection.flags.writeable = False
        if kind == QTC:
            filters.append(QtcFilter(projection, init_circuit(k, depth=1, seed=param_seed)))
        else:
            mixing = SplitMix64(param_seed).normals(k * k, std=1.0 / math.sqrt(k)).reshape(k, k)
            mixing.flags.writeable = False
            filters.append(TcnFilter(projection, mixing))
    return FilterBank(kind=kind, filters=tuple(filters), n=n, k=k, D=D, seed=seed)


def project_token(filt: QtcFilter | TcnFilter, h_t: np.ndarray) -> float:
    """Squash one token embedding to a rotation angle in (-pi, pi)."""
    h_t = np.asarray(h_t, dtype=np.float64)
    d = filt.projection.shape[0]
    if h_t.shape != (d,):
        raise ValueError(f"embedding has shape {h_t.shape}, filter expects ({d},)")
    return math.pi * math.tanh(float(filt.projection @ h_t) / math.sqrt(d))


def _windows(bank: FilterBank, seq: EmbeddingSequence, max_len: int) -> np.ndarray:
    """Truncate, zero-pad to >= k tokens, and return the (P, k, D) window view."""
    if seq.D != bank.D:
        raise ValueError(f"embedding dim {seq.D} does not match bank dim {bank.D}")
    mat = np.asarray(seq.matrix, dtype=np.float64)[:max_len]
    if mat.shape[0] < bank.k:
        pad = np.zeros((bank.k - mat.shape[0], bank.D))
        mat = np.vstack([mat, pad]) if mat.size else pad
    return mat


def _window_angles(filt, mat: np.ndarray, k: int) -> np.ndarray:
    """(P, k) rotation angles: per-token projection, then length-k windows."""
    d = mat.shape[1]
    scalars = np.pi * np.tanh((mat @ filt.projection) / math.sqrt(d))
    return sliding_window_view(scalars, k)


def qtc_features(bank: FilterBank, seq: EmbeddingSequence, max_len: int = DEFAULT_MAX_LEN) -> FeatureVector:
    """Quantum features: run every window through each filter's circuit and
    max-pool each of the k expectation channels over window positions."""
    if bank.kind != QTC:
        raise ValueError(f"qtc_features needs a {QTC!r} bank, got {bank.kind!r}")
    mat = _windows(bank, seq, max_len)
    channels = []
    for filt in bank.filters:
        expectations = run_circuit_batch(filt.circuit, _window_angles(filt, mat, bank.k))
        channels.append(expectations.max(axis=0))
    return FeatureVector(np.concatenate(channels), QTC)


def tcn_features(bank: FilterBank, seq: EmbeddingSequence, max_len: int = DEFAULT_MAX_LEN) -> FeatureVector:
    """Classical baseline: identical windowing/pooling, tanh(mixing @ s) per window."""
    if bank.kind != TCN:
        raise ValueError(f"tcn_features needs a {TCN!r} bank, got {bank.kind!r}")
    mat = _windows(bank, seq, max_len)
    channels = []
    for filt in bank.filters:
        per_window = np.tanh(_window_angles(filt, mat, bank.k) @ filt.mixing.T)
        channels.append(per_window.max(axis=0))
    return FeatureVector(np.concatenate(channels), TCN)


def extract_features(bank: FilterBank, seq: EmbeddingSequence, max_len: int = DEFAULT_MAX_LEN) -> FeatureVector:
    return (qtc_features if bank.kind == QTC else tcn_features)(bank, seq, max_len)

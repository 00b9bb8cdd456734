"""Corpus handling: TSV intent files, top-k label filtering, k-fold splits,
deterministic toy embeddings, and the QTCE embedding file format.

QTCE layout (little-endian):
    magic "QTCE" (4 bytes) | version u32 = 1 | record count u64
    per record: id_len u32 | id utf-8 | label_len u32 | label utf-8
                | T u32 | D u32 | T*D float32 row-major
"""
from __future__ import annotations

import struct
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataFormatError
from .rng import SplitMix64, fnv1a64, mix64

QTCE_MAGIC = b"QTCE"
QTCE_VERSION = 1


@dataclass
class LabeledUtterance:
    id: str
    tokens: list[str]
    label: str


@dataclass
class EmbeddingSequence:
    """Per-token embedding matrix for one utterance; float32, shape (T, D)."""

    id: str
    label: str
    matrix: np.ndarray

    @property
    def T(self) -> int:
        return self.matrix.shape[0]

    @property
    def D(self) -> int:
        return self.matrix.shape[1]


@dataclass
class DatasetSplit:
    train: list[LabeledUtterance]
    dev: list[LabeledUtterance]
    test: list[LabeledUtterance]
    label_index: dict[str, int] = field(default_factory=dict)


def make_split(train, dev=(), test=()) -> DatasetSplit:
    """Bundle the three lists with a stable label index (lexicographic)."""
    train, dev, test = list(train), list(dev), list(test)
    labels = sorted({u.label for part in (train, dev, test) for u in part})
    return DatasetSplit(train, dev, test, {lab: i for i, lab in enumerate(labels)})


def parse_intent_tsv(path) -> list[LabeledUtterance]:
    """Read "utterance-text<TAB>intent-label" lines.

    Tokens are the lowercased whitespace split of the text field; ids record
    the 1-based file line ("line-N"); blank lines are skipped.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            raw_lines = fh.read().split("\n")
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    utterances = []
    for lineno, line in enumerate(raw_lines, start=1):
        line = line.rstrip("\r")
        if not line.strip():
            continue
        if line.count("\t") != 1:
            raise DataFormatError(
                f"{path}: line {lineno}: expected exactly one tab, found {line.count(chr(9))}"
            )
        text, label = line.split("\t")
        label = label.strip()
        if not label:
            raise DataFormatError(f"{path}: line {lineno}: empty intent label")
        utterances.append(LabeledUtterance(f"line-{lineno}", text.lower().split(), label))
    return utterances


def filter_top_k_intents(train, dev, test, k: int = 7) -> DatasetSplit:
    """Keep only the k most frequent train-split intents (ties lexicographic)."""
    if k < 1:
        raise ConfigError(f"top-k filter needs k >= 1 (got {k})")
    counts = Counter(u.label for u in train)
    if len(counts) < k:
        raise ConfigError(f"asked for top {k} intents but train split has only {len(counts)}")
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    kept = {label for label, _ in ranked[:k]}
    keep = lambda part: [u for u in part if u.label in kept]
    return make_split(keep(train), keep(dev), keep(test))


def kfold_split(items, folds: int = 10, seed: int = 0) -> list[tuple[list[int], list[int]]]:
    """Deterministic k-fold partition of indices; fold sizes differ by <= 1."""
    if folds < 2:
        raise ConfigError(f"need at least 2 folds (got {folds})")
    n = len(items)
    if n < folds:
        raise ValueError(f"cannot make {folds} folds from {n} items")
    perm = list(range(n))
    SplitMix64(seed).shuffle(perm)
    base, extra = divmod(n, folds)
    out, start = [], 0
    for f in range(folds):
        size = base + (1 if f < extra else 0)
        heldout = sorted(perm[start : start + size])
        held_set = set(heldout)
        out.append((sorted(i for i in range(n) if i not in held_set), heldout))
        start += size
    return out


_token_vector_cache: dict[tuple[int, int, str], np.ndarray] = {}


def toy_token_vector(token: str, D: int, corpus_seed: int) -> np.ndarray:
    """Deterministic stand-in embedding: token hash -> N(0, 1/D) vector."""
    key = (corpus_seed, D, token)
    vec = _token_vector_cache.get(key)
    if vec is None:
        stream_seed = mix64(corpus_seed ^ fnv1a64(token))
        vec = SplitMix64(stream_seed).normals(D, std=1.0 / np.sqrt(D)).astype(np.float32)
        vec.flags.writeable = False
        _token_vector_cache[key] = vec
    return vec


def toy_embeddings(utt: LabeledUtterance, D: int, corpus_seed: int) -> EmbeddingSequence:
    """Embed an utterance with toy vectors; identical tokens map identically."""
    if D < 1:
        raise ConfigError(f"embedding dim must be at least 1 (got {D})")
    if utt.tokens:
        matrix = np.stack([toy_token_vector(t, D, corpus_seed) for t in utt.tokens])
    else:
        matrix = np.zeros((0, D), dtype=np.float32)
    return EmbeddingSequence(utt.id, utt.label, matrix)


def write_embedding_file(path, seqs) -> None:
    """Write sequences in QTCE format; all records must share one D."""
    seqs = list(seqs)
    dims = {s.D for s in seqs}
    if len(dims) > 1:
        raise ValueError(f"records mix embedding dims {sorted(dims)}")
    for s in seqs:
        if not np.all(np.isfinite(s.matrix)):
            raise ValueError(f"record {s.id!r} has non-finite embedding entries")
    with open(path, "wb") as fh:
        fh.write(QTCE_MAGIC)
        fh.write(struct.pack("<IQ", QTCE_VERSION, len(seqs)))
        for s in seqs:
            id_b = s.id.encode("utf-8")
            label_b = s.label.encode("utf-8")
            fh.write(struct.pack("<I", len(id_b)))
            fh.write(id_b)
            fh.write(struct.pack("<I", len(label_b)))
            fh.write(label_b)
            fh.write(struct.pack("<II", s.T, s.D))
            fh.write(np.ascontiguousarray(s.matrix, dtype="<f4").tobytes())


def read_embedding_file(path) -> list[EmbeddingSequence]:
    """Read a QTCE file back; exact inverse of write_embedding_file."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from exc
    offset = 0

    def take(n: int, what: str) -> bytes:
        nonlocal offset
        if offset + n > len(blob):
            raise DataFormatError(f"{path}: truncated file: need {n} bytes for {what} at byte {offset}")
        chunk = blob[offset : offset + n]
        offset += n
        return chunk

    if take(4, "magic") != QTCE_MAGIC:
        raise DataFormatError(f"{path}: bad magic (expected {QTCE_MAGIC!r})")
    (version,) = struct.unpack("<I", take(4, "version"))
    if version != QTCE_VERSION:
        raise DataFormatError(f"{path}: unsupported version {version} (expected {QTCE_VERSION})")
    (count,) = struct.unpack("<Q", take(8, "record count"))
    seqs = []
    for r in range(count):
        (id_len,) = struct.unpack("<I", take(4, f"record {r} id length"))
        rec_id = take(id_len, f"record {r} id").decode("utf-8")
        (label_len,) = struct.unpack("<I", take(4, f"record {r} label length"))
        label = take(label_len, f"record {r} label").decode("utf-8")
        t, d = struct.unpack("<II", take(8, f"record {r} dims"))
        raw = take(4 * t * d, f"record {r} matrix")
        matrix = np.frombuffer(raw, dtype="<f4").reshape(t, d).copy()
        seqs.append(EmbeddingSequence(rec_id, label, matrix))
    if offset != len(blob):
        raise DataFormatError(f"{path}: {len(blob) - offset} trailing bytes after last record")
    return seqs

"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with `pytest tests/test_acceptance.py -v -s`).

Every tolerance is pinned here; nothing is deferred to later calibration.
"""
import math
import time

import numpy as np

from qtcintent.data import EmbeddingSequence, parse_intent_tsv, toy_embeddings
from qtcintent.encoder import init_filter_bank, qtc_features, tcn_features, project_token
from qtcintent.harness import ExperimentConfig, run_experiment
from qtcintent.model import SoftmaxHead, TrainConfig, accuracy, gradients, mean_cross_entropy, predict, train
from qtcintent.qsim import apply_cnot, apply_rot, apply_rx, dense_unitary_of_circuit, z_expectations, zero_state
from qtcintent.rng import SplitMix64
from qtcintent.vqc import CircuitSpec, init_circuit, run_circuit


def report(name: str, ok: bool, detail: str = "") -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
    assert ok, f"{name}: {detail}"


def encoded_state_independent(angles: np.ndarray) -> np.ndarray:
    """Product state after Rx encoding, built by kron alone (no simulator)."""
    state = np.array([1.0 + 0.0j])
    for theta in angles:
        qubit = np.array([math.cos(theta / 2.0), -1j * math.sin(theta / 2.0)])
        state = np.kron(state, qubit)
    return state


def z_from_probs_independent(probs: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros(k)
    for x, p in enumerate(probs):
        for q in range(k):
            bit = (x >> (k - 1 - q)) & 1
            out[q] += p * (1.0 if bit == 0 else -1.0)
    return out


def test_oracle_equivalence_100_circuits():
    rng = SplitMix64(1001)
    started = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        circuit = init_circuit(4, 1, seed=rng.next_u64())
        angles = rng.angles(4)
        sim = run_circuit(circuit, angles)
        final = dense_unitary_of_circuit(circuit) @ encoded_state_independent(angles)
        oracle = z_from_probs_independent(np.abs(final) ** 2, 4)
        worst = max(worst, float(np.abs(sim - oracle).max()))
    elapsed = time.perf_counter() - started
    report(
        "oracle equivalence (100 random 4-qubit circuits)",
        worst < 1e-9 and elapsed < 5.0,
        f"max |delta| {worst:.2e}, {elapsed:.2f}s",
    )


def test_hand_traced_circuit():
    circuit = CircuitSpec(k=4, depth=1, rotations=np.zeros((1, 4, 3)), seed=0)
    out = run_circuit(circuit, [math.pi, 0.0, 0.0, 0.0])
    delta = float(np.abs(out - np.array([1.0, -1.0, -1.0, -1.0])).max())
    report("hand-traced ring circuit -> (+1,-1,-1,-1)", delta < 1e-12, f"max |delta| {delta:.2e}")


def test_norm_and_range_suite():
    rng = SplitMix64(1002)
    applications = 0
    worst_norm = 0.0
    ok_range = True
    state = zero_state(5)
    while applications < 10_000:
        which = rng.randbelow(3)
        q = rng.randbelow(5)
        if which == 0:
            apply_rx(state, q, rng.angles(1)[0])
        elif which == 1:
            apply_rot(state, q, *rng.angles(3))
        else:
            t = (q + 1 + rng.randbelow(4)) % 5
            apply_cnot(state, q, t)
        applications += 1
        if applications % 500 == 0:
            worst_norm = max(worst_norm, abs(state.norm_sq() - 1.0))
            z = z_expectations(state)
            ok_range = ok_range and bool(np.all((z >= -1 - 1e-12) & (z <= 1 + 1e-12)))
    worst_norm = max(worst_norm, abs(state.norm_sq() - 1.0))
    report(
        "norm and Z-range after 10^4 gate applications",
        worst_norm < 1e-9 and ok_range,
        f"max |norm^2 - 1| {worst_norm:.2e}",
    )


def test_gradient_check_50_draws():
    rng = SplitMix64(1003)
    worst = 0.0
    for _ in range(50):
        C, F, N = 2 + rng.randbelow(5), 1 + rng.randbelow(8), 1 + rng.randbelow(16)
        head = SoftmaxHead(rng.normals(C * F).reshape(C, F), rng.normals(C))
        X = rng.normals(N * F).reshape(N, F)
        y = np.array([rng.randbelow(C) for _ in range(N)])
        dW, db = gradients(head, X, y)
        step = 1e-5
        for grads_got, param in ((dW, head.W), (db, head.b)):
            fd = np.zeros_like(param)
            for idx in np.ndindex(param.shape):
                orig = param[idx]
                param[idx] = orig + step
                up = mean_cross_entropy(head, X, y)
                param[idx] = orig - step
                down = mean_cross_entropy(head, X, y)
                param[idx] = orig
                fd[idx] = (up - down) / (2 * step)
            denom = np.maximum(np.maximum(np.abs(grads_got), np.abs(fd)), 1e-4)
            worst = max(worst, float((np.abs(grads_got - fd) / denom).max()))
    report("gradients vs central finite differences (50 draws)", worst < 1e-4, f"max rel err {worst:.2e}")


def test_convex_training_checks():
    rng = SplitMix64(1004)
    X = np.empty((200, 4))
    y = np.empty(200, dtype=np.int64)
    for i in range(200):
        y[i] = i % 2
        X[i] = (2.0 if y[i] else -2.0) + 0.1 * rng.normals(4)
    head = train(X, y, TrainConfig(epochs=200), seed=11)
    separable_acc = accuracy(head, X, y)

    X0 = np.zeros((100, 4))
    y0 = np.array([0] * 60 + [1] * 40)
    head0 = train(X0, y0, TrainConfig(epochs=200), seed=12)
    probs = predict(head0, np.zeros(4))
    prior_gap = max(abs(probs[0] - 0.6), abs(probs[1] - 0.4))
    report(
        "convex training (separable -> 100%; constant -> prior)",
        separable_acc == 1.0 and prior_gap < 0.02,
        f"separable acc {separable_acc:.3f}, prior gap {prior_gap:.4f}",
    )


def test_encoder_laws_1000_cases_each():
    rng = SplitMix64(1005)

    # shape law
    shape_ok = True
    for _ in range(1000):
        n, k, D = 1 + rng.randbelow(2), 2 + rng.randbelow(3), 1 + rng.randbelow(8)
        T = rng.randbelow(14)
        seq = EmbeddingSequence("u", "l", rng.normals(T * D).reshape(T, D).astype(np.float32))
        kind = ("qtc", "tcn")[rng.randbelow(2)]
        bank = init_filter_bank(kind, n, k, D, seed=rng.next_u64())
        fv = (qtc_features if kind == "qtc" else tcn_features)(bank, seq)
        shape_ok = shape_ok and fv.values.shape == (n * k,)
    report("shape law |features| = n*k (1000 cases)", shape_ok)

    # max-pool law: pooled channel equals max over per-window circuit outputs
    pool_worst = 0.0
    for _ in range(1000):
        k = 2 + rng.randbelow(3)
        D = 1 + rng.randbelow(6)
        T = k + rng.randbelow(8)
        seq = EmbeddingSequence("u", "l", rng.normals(T * D).reshape(T, D).astype(np.float32))
        bank = init_filter_bank("qtc", 1, k, D, seed=rng.next_u64())
        fv = qtc_features(bank, seq)
        filt = bank.filters[0]
        mat = np.asarray(seq.matrix, dtype=np.float64)
        per_window = [
            run_circuit(filt.circuit, [project_token(filt, mat[p + j]) for j in range(k)])
            for p in range(T - k + 1)
        ]
        pool_worst = max(pool_worst, float(np.abs(fv.values - np.max(per_window, axis=0)).max()))
    report("max-pool law (1000 cases)", pool_worst < 1e-9, f"max |delta| {pool_worst:.2e}")

    # truncation law: tokens past max_len can never change the output
    trunc_ok = True
    for _ in range(1000):
        k = 2 + rng.randbelow(3)
        D = 1 + rng.randbelow(4)
        base = rng.normals(50 * D).reshape(50, D).astype(np.float32)
        extra = rng.normals(D * (1 + rng.randbelow(6))).reshape(-1, D).astype(np.float32)
        kind = ("qtc", "tcn")[rng.randbelow(2)]
        bank = init_filter_bank(kind, 1, k, D, seed=rng.next_u64())
        extract = qtc_features if kind == "qtc" else tcn_features
        a = extract(bank, EmbeddingSequence("u", "l", base), max_len=50)
        b = extract(bank, EmbeddingSequence("u", "l", np.vstack([base, extra])), max_len=50)
        trunc_ok = trunc_ok and np.array_equal(a.values, b.values)
    report("truncation law (1000 cases)", trunc_ok)


def test_determinism_bitwise(keyword_tsvs):
    train_path, test_path = keyword_tsvs

    banks = [init_filter_bank("qtc", 2, 4, 16, seed=99) for _ in range(2)]
    bank_ok = all(
        np.array_equal(a.projection, b.projection) and np.array_equal(a.circuit.rotations, b.circuit.rotations)
        for a, b in zip(banks[0].filters, banks[1].filters)
    )

    seq = toy_embeddings(parse_intent_tsv(train_path)[0], 16, corpus_seed=5)
    feats = [qtc_features(banks[i], seq).values for i in range(2)]
    feature_ok = np.array_equal(feats[0], feats[1])

    rng = SplitMix64(1006)
    X = rng.normals(60 * 8).reshape(60, 8)
    y = np.array([rng.randbelow(3) for _ in range(60)])
    heads = [train(X, y, TrainConfig(epochs=30), seed=4) for _ in range(2)]
    head_ok = np.array_equal(heads[0].W, heads[1].W) and np.array_equal(heads[0].b, heads[1].b)

    config = dict(
        encoder="qtc", n=1, k=2, seed=21, folds=2, toy_dim=8,
        train_path=train_path, test_path=test_path,
        train_config=TrainConfig(learning_rate=1e-2, epochs=10),
    )
    reports = [run_experiment(ExperimentConfig(**config)).to_json_dict() for _ in range(2)]
    for rep in reports:
        rep.pop("wall_time_s")  # timing is the one non-deterministic field
    report_ok = reports[0] == reports[1]

    report(
        "determinism: bank, features, head, metrics report",
        bank_ok and feature_ok and head_ok and report_ok,
    )


def test_end_to_end_desk_scale(keyword_tsvs):
    train_path, test_path = keyword_tsvs
    started = time.perf_counter()
    config = ExperimentConfig(
        encoder="qtc", n=2, k=4, seed=42, folds=10, toy_dim=64,
        train_path=train_path, test_path=test_path,
        train_config=TrainConfig(learning_rate=1e-2, epochs=500),
    )
    rep = run_experiment(config)
    elapsed = time.perf_counter() - started
    majority = 1.0 / 7.0  # balanced 7-class corpus
    report(
        "end-to-end desk-scale run (QTC (2,4), 10 runs)",
        rep.mean >= 0.95 and rep.mean >= majority + 0.60 and elapsed < 60.0,
        f"mean {rep.mean:.4f}, majority {majority:.3f}, {elapsed:.1f}s",
    )


def test_throughput_snips_scale():
    gen = np.random.default_rng(0)
    seqs = [
        EmbeddingSequence(f"u{i}", "x", gen.standard_normal((50, 64)).astype(np.float32) / 8.0)
        for i in range(13_084)
    ]
    bank = init_filter_bank("qtc", 2, 4, 64, seed=7)
    started = time.perf_counter()
    for seq in seqs:
        qtc_features(bank, seq, max_len=50)
    elapsed = time.perf_counter() - started
    report(
        "throughput: 13,084 utterances (T<=50, k=4, n=2) single-threaded",
        elapsed < 300.0,
        f"{elapsed:.1f}s",
    )

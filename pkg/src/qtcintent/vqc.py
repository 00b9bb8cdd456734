"""Frozen-random strongly-entangling circuit: angle encoding, per-qubit
rotations, a CNOT ring, Pauli-Z readout.

Circuit parameters are drawn once from a seed and never trained; only the
seed (not the raw angles) is written to experiment reports.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import qsim
from .errors import ConfigError
from .rng import TWO_PI, SplitMix64


class RotationTriple(NamedTuple):
    alpha: float
    beta: float
    gamma: float


@dataclass(frozen=True)
class CircuitSpec:
    """Frozen circuit: k qubits, `depth` rotation+ring layers, seeded angles.

    rotations has shape (depth, k, 3) with entries in [0, 2*pi); the array is
    marked read-only so the circuit cannot be mutated after creation.
    """

    k: int
    depth: int
    rotations: np.ndarray = field(repr=False)
    seed: int

    def triple(self, layer: int, qubit: int) -> RotationTriple:
        return RotationTriple(*self.rotations[layer, qubit])

    def to_json_dict(self) -> dict:
        """Report form: parameters are reproducible from the seed alone."""
        return {"k": self.k, "depth": self.depth, "seed": self.seed}


def init_circuit(k: int, depth: int = 1, seed: int = 0) -> CircuitSpec:
    """Draw a frozen circuit: depth*k rotation triples i.i.d. Uniform[0, 2*pi)."""
    if not 1 <= k <= qsim.MAX_QUBITS:
        raise ConfigError(f"qubit count must be in [1, {qsim.MAX_QUBITS}] (got {k})")
    if depth < 1:
        raise ConfigError(f"depth must be at least 1 (got {depth})")
    rng = SplitMix64(seed)
    rotations = rng.angles(depth * k * 3).reshape(depth, k, 3)
    rotations.flags.writeable = False
    return CircuitSpec(k=k, depth=depth, rotations=rotations, seed=seed)


def _check_angles(circuit: CircuitSpec, angles: np.ndarray) -> np.ndarray:
    angles = np.asarray(angles, dtype=np.float64)
    if angles.shape[-1] != circuit.k:
        raise ValueError(f"expected {circuit.k} encoding angles, got {angles.shape[-1]}")
    if not np.all(np.isfinite(angles)):
        raise ValueError("encoding angles must be finite")
    return angles


def run_circuit(circuit: CircuitSpec, angles) -> np.ndarray:
    """Execute the circuit on one window of encoding angles.

    |0...0> -> Rx(angles[i]) on each qubit -> per layer: rotation triples then
    the CNOT ring 0->1, ..., (k-2)->(k-1), (k-1)->0 (no ring for k=1) -> <Z>.
    """
    angles = _check_angles(circuit, angles)
    if angles.ndim != 1:
        raise ValueError("run_circuit takes a single angle vector; use run_circuit_batch")
    k = circuit.k
    state = qsim.zero_state(k)
    for q in range(k):
        qsim.apply_rx(state, q, angles[q])
    for layer in range(circuit.depth):
        for q in range(k):
            alpha, beta, gamma = circuit.rotations[layer, q]
            qsim.apply_rot(state, q, alpha, beta, gamma)
        if k >= 2:
            for c in range(k - 1):
                qsim.apply_cnot(state, c, c + 1)
            qsim.apply_cnot(state, k - 1, 0)
    return qsim.z_expectations(state)


def run_circuit_batch(circuit: CircuitSpec, angles) -> np.ndarray:
    """run_circuit vectorized over rows of an (B, k) angle matrix.

    Applies the same gate sequence to a batch of statevectors; row b of the
    result equals run_circuit(circuit, angles[b]) up to float round-off.
    """
    angles = _check_angles(circuit, angles)
    if angles.ndim != 2:
        raise ValueError("run_circuit_batch takes an (batch, k) angle matrix")
    batch, k = angles.shape
    if batch == 0:
        return np.empty((0, k))
    amps = qsim.zero_state_batch(batch, k)
    for q in range(k):
        amps = qsim.apply_1q_batch(amps, k, q, qsim.rx_matrices(angles[:, q]))
    for layer in range(circuit.depth):
        for q in range(k):
            alpha, beta, gamma = circuit.rotations[layer, q]
            amps = qsim.apply_1q_batch(amps, k, q, qsim.rot_matrix(alpha, beta, gamma))
        if k >= 2:
            for c in range(k - 1):
                amps = qsim.apply_cnot_batch(amps, k, c, c + 1)
            amps = qsim.apply_cnot_batch(amps, k, k - 1, 0)
    return qsim.z_expectations_batch(amps, k)

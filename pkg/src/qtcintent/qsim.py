"""Dense statevector simulator for 1-16 qubit registers.

Gate set is exactly what the temporal-convolution circuit needs: Rx, the
general single-qubit rotation Rz(gamma)Ry(beta)Rz(alpha), and CNOT, plus
Pauli-Z readout. A brute-force dense-unitary builder doubles as an
independent verification oracle for small registers.

Bit ordering convention: qubit i occupies bit (k-1-i) of the basis-state
index, i.e. qubit 0 is the most significant bit. Equivalently, after
reshaping the amplitude vector to shape (2,)*k, axis i belongs to qubit i.
Global phase is not tracked; Pauli-Z readout is phase-invariant.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import cos, sin
from typing import TYPE_CHECKING

import numpy as np

from .errors import ConfigError

if TYPE_CHECKING:
    from .vqc import CircuitSpec

MAX_QUBITS = 16
ORACLE_MAX_QUBITS = 4


@dataclass
class StateVector:
    """2^num_qubits complex amplitudes; mutated in place by gate application."""

    num_qubits: int
    amplitudes: np.ndarray  # complex128, shape (2**num_qubits,)

    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


def zero_state(k: int) -> StateVector:
    """The all-zeros register |0...0> on k qubits."""
    if k > MAX_QUBITS:
        raise ConfigError(f"qubit count exceeds {MAX_QUBITS} (got {k})")
    if k < 1:
        raise ConfigError(f"qubit count must be at least 1 (got {k})")
    amps = np.zeros(1 << k, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(k, amps)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = cos(theta / 2.0), sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = cos(theta / 2.0), sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz_matrix(theta: float) -> np.ndarray:
    p = np.exp(-0.5j * theta)
    return np.array([[p, 0.0], [0.0, np.conj(p)]], dtype=np.complex128)


def rot_matrix(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """General single-qubit rotation as the ZYZ product Rz(gamma)Ry(beta)Rz(alpha)."""
    return rz_matrix(gamma) @ ry_matrix(beta) @ rz_matrix(alpha)


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.num_qubits:
        raise IndexError(f"qubit {qubit} out of range for {state.num_qubits}-qubit state")


def _apply_1q(state: StateVector, qubit: int, gate: np.ndarray) -> StateVector:
    k = state.num_qubits
    psi = state.amplitudes.reshape((2,) * k)
    psi = np.moveaxis(psi, qubit, -1)
    out = psi @ gate.T  # out[..., i] = sum_j gate[i, j] * psi[..., j]
    out = np.moveaxis(out, -1, qubit)
    state.amplitudes = np.ascontiguousarray(out).reshape(-1)
    return state


def apply_rx(state: StateVector, qubit: int, theta: float) -> StateVector:
    """Rotate `qubit` about the x-axis by `theta` radians (in place)."""
    _check_qubit(state, qubit)
    return _apply_1q(state, qubit, rx_matrix(theta))


def apply_rot(state: StateVector, qubit: int, alpha: float, beta: float, gamma: float) -> StateVector:
    """Apply the general rotation Rz(gamma)Ry(beta)Rz(alpha) to `qubit` (in place)."""
    _check_qubit(state, qubit)
    return _apply_1q(state, qubit, rot_matrix(alpha, beta, gamma))


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    """Flip `target` where `control` is 1 (in place)."""
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ValueError("CNOT control and target must differ")
    k = state.num_qubits
    psi = state.amplitudes.reshape((2,) * k)
    lo = [slice(None)] * k
    hi = [slice(None)] * k
    lo[control], lo[target] = 1, 0
    hi[control], hi[target] = 1, 1
    lo, hi = tuple(lo), tuple(hi)
    psi[lo], psi[hi] = psi[hi].copy(), psi[lo].copy()
    return state


def z_expectations(state: StateVector) -> np.ndarray:
    """Per-qubit <Z>: sum of |amp|^2 signed by the qubit's bit value."""
    probs = np.abs(state.amplitudes) ** 2
    total = probs.sum()
    assert abs(total - 1.0) < 1e-9, f"state norm drifted: sum|amp|^2 = {total!r}"
    k = state.num_qubits
    cube = probs.reshape((2,) * k)
    out = np.empty(k)
    for q in range(k):
        marg = np.moveaxis(cube, q, 0).reshape(2, -1).sum(axis=1)
        out[q] = marg[0] - marg[1]
    return out


# -- batched kernels (shape (B, 2**k); same gate algebra, vectorized) --------


def zero_state_batch(batch: int, k: int) -> np.ndarray:
    amps = np.zeros((batch, 1 << k), dtype=np.complex128)
    amps[:, 0] = 1.0
    return amps


def apply_1q_batch(amps: np.ndarray, k: int, qubit: int, gate: np.ndarray) -> np.ndarray:
    """Apply one single-qubit gate per batch row; gate is (2,2) or (B,2,2)."""
    batch = amps.shape[0]
    psi = amps.reshape((batch,) + (2,) * k)
    psi = np.moveaxis(psi, 1 + qubit, -1)
    if gate.ndim == 2:
        out = psi @ gate.T
    else:
        flat = psi.reshape(batch, -1, 2)
        out = np.einsum("bij,bmj->bmi", gate, flat).reshape(psi.shape)
    out = np.moveaxis(out, -1, 1 + qubit)
    return np.ascontiguousarray(out).reshape(batch, -1)


def rx_matrices(thetas: np.ndarray) -> np.ndarray:
    """(B,2,2) Rx matrices for a vector of angles."""
    c, s = np.cos(thetas / 2.0), np.sin(thetas / 2.0)
    out = np.empty((len(thetas), 2, 2), dtype=np.complex128)
    out[:, 0, 0] = c
    out[:, 1, 1] = c
    out[:, 0, 1] = -1j * s
    out[:, 1, 0] = -1j * s
    return out


def apply_cnot_batch(amps: np.ndarray, k: int, control: int, target: int) -> np.ndarray:
    batch = amps.shape[0]
    psi = amps.reshape((batch,) + (2,) * k)
    lo = [slice(None)] * (k + 1)
    hi = [slice(None)] * (k + 1)
    lo[1 + control], lo[1 + target] = 1, 0
    hi[1 + control], hi[1 + target] = 1, 1
    lo, hi = tuple(lo), tuple(hi)
    psi[lo], psi[hi] = psi[hi].copy(), psi[lo].copy()
    return amps


@lru_cache(maxsize=None)
def _z_signs(k: int) -> np.ndarray:
    """(2^k, k) matrix of +-1: sign of qubit q's bit in basis state x."""
    x = np.arange(1 << k)
    signs = np.empty((1 << k, k))
    for q in range(k):
        signs[:, q] = 1.0 - 2.0 * ((x >> (k - 1 - q)) & 1)
    return signs


def z_expectations_batch(amps: np.ndarray, k: int) -> np.ndarray:
    probs = np.abs(amps) ** 2
    return probs @ _z_signs(k)


# -- dense-unitary verification oracle ---------------------------------------


def _lift_1q(gate: np.ndarray, qubit: int, k: int) -> np.ndarray:
    return np.kron(np.kron(np.eye(1 << qubit), gate), np.eye(1 << (k - 1 - qubit)))


def _cnot_dense(k: int, control: int, target: int) -> np.ndarray:
    dim = 1 << k
    pc, pt = k - 1 - control, k - 1 - target
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for x in range(dim):
        y = x ^ (1 << pt) if (x >> pc) & 1 else x
        mat[y, x] = 1.0
    return mat


def dense_unitary_of_circuit(circuit: "CircuitSpec", encoding_angles=None) -> np.ndarray:
    """Brute-force 2^k x 2^k unitary of the circuit, for verification only.

    Without `encoding_angles` the product covers the post-encoding gates
    (rotation layers and CNOT rings); apply it to an angle-encoded state to
    reproduce the simulator's final state. With `encoding_angles` the Rx
    encoding layer is included, so the product acts on |0...0>.
    """
    k = circuit.k
    if k > ORACLE_MAX_QUBITS:
        raise ConfigError(f"dense oracle supports at most {ORACLE_MAX_QUBITS} qubits (got {k})")
    dim = 1 << k
    unitary = np.eye(dim, dtype=np.complex128)
    if encoding_angles is not None:
        if len(encoding_angles) != k:
            raise ValueError(f"expected {k} encoding angles, got {len(encoding_angles)}")
        for q, theta in enumerate(encoding_angles):
            unitary = _lift_1q(rx_matrix(theta), q, k) @ unitary
    for layer in range(circuit.depth):
        for q in range(k):
            alpha, beta, gamma = circuit.rotations[layer, q]
            unitary = _lift_1q(rot_matrix(alpha, beta, gamma), q, k) @ unitary
        if k >= 2:
            for c in range(k - 1):
                unitary = _cnot_dense(k, c, c + 1) @ unitary
            unitary = _cnot_dense(k, k - 1, 0) @ unitary
    return unitary

"""Dense statevector simulator for small gate-model circuits.

State of n qubits = 2**n complex amplitudes. Basis index convention: qubit k
is bit k of the index, so qubit 0 is the least significant bit. All gates are
unitary, hence norm-preserving; a hard cap (default 20 qubits) keeps memory
bounded.

Supported gates: H, X, RX(theta), RY(theta), RZ(theta), CNOT. Rotation
convention R_A(theta) = exp(-i * theta/2 * A).

Diagonal observables are plain float arrays of length 2**n, entry per basis
state. `apply_diagonal_phase` multiplies amplitude z by exp(-i*gamma*diag[z]);
`expectation_diagonal` is sum(|amp[z]|^2 * diag[z]). `pauli_z_decompose`
writes a diagonal as a sum of Z-string characters:

    diag[z] = sum_s c[s] * prod_{k in s} (-1)^(bit k of z)

with the Z-string s encoded as a bitmask (bit k set = Z on qubit k). The
coefficients are the Walsh-Hadamard transform of the diagonal scaled by
2**-n, and `pauli_z_reconstruct` inverts it exactly.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, ValidationError

QUBIT_CAP = 20

GATES = ("h", "x", "rx", "ry", "rz", "cnot")
_ROTATIONS = ("rx", "ry", "rz")


@dataclass(eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray


@dataclass(eq=False)
class DiagonalObservable:
    """Observable diagonal in the computational basis."""

    n: int
    diagonal: np.ndarray

    def __post_init__(self):
        self.diagonal = np.asarray(self.diagonal, dtype=np.float64)
        if self.diagonal.shape != (2**self.n,):
            raise ValidationError(
                "diagonal length must be 2**n", n=self.n, length=self.diagonal.shape
            )
        if not np.all(np.isfinite(self.diagonal)):
            raise ValidationError("diagonal entries must be finite")


def new_state(n: int, cap: int = QUBIT_CAP) -> StateVector:
    """All-zeros basis state |0...0> on n qubits."""
    if n < 1:
        raise ValidationError("qubit count must be >= 1", n=n)
    if n > cap:
        raise CapacityError("qubit count exceeds cap", n=n, cap=cap)
    amplitudes = np.zeros(2**n, dtype=np.complex128)
    amplitudes[0] = 1.0
    return StateVector(n=n, amplitudes=amplitudes)


def _single_qubit_matrix(gate: str, angle: Optional[float]) -> np.ndarray:
    if gate in _ROTATIONS:
        if angle is None or not math.isfinite(angle):
            raise ValidationError("rotation gate needs a finite angle", gate=gate)
        half = angle / 2.0
    elif angle is not None:
        raise ValidationError("gate takes no angle", gate=gate)
    if gate == "h":
        s = 1.0 / math.sqrt(2.0)
        return np.array([[s, s], [s, -s]], dtype=np.complex128)
    if gate == "x":
        return np.array([[0, 1], [1, 0]], dtype=np.complex128)
    if gate == "rx":
        c, s = math.cos(half), math.sin(half)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if gate == "ry":
        c, s = math.cos(half), math.sin(half)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if gate == "rz":
        return np.array(
            [[cmath.exp(-1j * half), 0], [0, cmath.exp(1j * half)]],
            dtype=np.complex128,
        )
    raise ValidationError("unknown gate", gate=gate)


def apply_gate(
    state: StateVector,
    gate: str,
    targets: Sequence[int],
    angle: Optional[float] = None,
) -> StateVector:
    """Apply one gate in place and return the state.

    `targets` is one qubit for single-qubit gates and (control, target) for
    CNOT. Qubit indices must be distinct and in [0, n).
    """
    name = gate.lower()
    if name not in GATES:
        raise ValidationError("unknown gate", gate=gate)
    for q in targets:
        if not 0 <= q < state.n:
            raise ValidationError("qubit index out of range", qubit=q, n=state.n)

    if name == "cnot":
        if angle is not None:
            raise ValidationError("gate takes no angle", gate=gate)
        if len(targets) != 2 or targets[0] == targets[1]:
            raise ValidationError("cnot needs two distinct qubits", targets=list(targets))
        control, target = targets
        idx = np.arange(2**state.n)
        controlled = (idx >> control) & 1 == 1
        flipped = idx ^ (1 << target)
        out = state.amplitudes.copy()
        out[controlled] = state.amplitudes[flipped[controlled]]
        state.amplitudes = out
        return state

    if len(targets) != 1:
        raise ValidationError("single-qubit gate needs one target", gate=gate)
    matrix = _single_qubit_matrix(name, angle)
    qubit = targets[0]
    psi = state.amplitudes.reshape([2] * state.n)
    axis = state.n - 1 - qubit  # reshape puts qubit n-1 on axis 0
    psi = np.moveaxis(psi, axis, 0)
    psi = np.tensordot(matrix, psi, axes=(1, 0))
    psi = np.moveaxis(psi, 0, axis)
    state.amplitudes = np.ascontiguousarray(psi).reshape(-1)
    return state


def _check_diagonal(state: StateVector, diagonal: np.ndarray) -> np.ndarray:
    d = np.asarray(diagonal, dtype=np.float64)
    if d.shape != (2**state.n,):
        raise ValidationError(
            "diagonal length must match state", expected=2**state.n, got=d.shape
        )
    return d


def apply_diagonal_phase(state: StateVector, diagonal: np.ndarray, gamma: float) -> StateVector:
    if not math.isfinite(gamma):
        raise ValidationError("phase angle must be finite")
    d = _check_diagonal(state, diagonal)
    state.amplitudes = state.amplitudes * np.exp(-1j * gamma * d)
    return state


def expectation_diagonal(state: StateVector, diagonal: np.ndarray) -> float:
    d = _check_diagonal(state, diagonal)
    probabilities = np.abs(state.amplitudes) ** 2
    return float(probabilities @ d)


def _walsh_hadamard(vector: np.ndarray) -> np.ndarray:
    out = np.array(vector, dtype=np.float64)
    size = out.shape[0]
    h = 1
    while h < size:
        out = out.reshape(-1, 2 * h)
        left = out[:, :h].copy()
        right = out[:, h:].copy()
        out[:, :h] = left + right
        out[:, h:] = left - right
        out = out.reshape(-1)
        h *= 2
    return out


def pauli_z_decompose(diagonal: np.ndarray) -> np.ndarray:
    """Coefficients c indexed by Z-string bitmask; see module docstring."""
    d = np.asarray(diagonal, dtype=np.float64)
    size = d.shape[0]
    if size < 1 or size & (size - 1):
        raise ValidationError("diagonal length must be a power of two", length=size)
    return _walsh_hadamard(d) / size


def pauli_z_reconstruct(coefficients: np.ndarray) -> np.ndarray:
    """Inverse of pauli_z_decompose (the transform is self-inverse up to 2**n)."""
    c = np.asarray(coefficients, dtype=np.float64)
    size = c.shape[0]
    if size < 1 or size & (size - 1):
        raise ValidationError("coefficient length must be a power of two", length=size)
    return _walsh_hadamard(c)


def sample(state: StateVector, shots: int, seed: Optional[int] = None) -> dict[int, int]:
    """Seeded multinomial draw; returns nonzero counts per basis index."""
    if shots < 1:
        raise ValidationError("shots must be >= 1", shots=shots)
    probabilities = np.abs(state.amplitudes) ** 2
    total = probabilities.sum()
    if not np.isfinite(total) or total <= 0:
        raise ValidationError("state has no probability mass")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probabilities / total)
    nonzero = np.nonzero(counts)[0]
    return {int(z): int(counts[z]) for z in nonzero}


def norm(state: StateVector) -> float:
    return float(np.linalg.norm(state.amplitudes))


def most_probable_state(state: StateVector) -> int:
    """Basis index with the highest probability; ties go to the smallest index."""
    probabilities = np.abs(state.amplitudes) ** 2
    return int(np.argmax(probabilities))

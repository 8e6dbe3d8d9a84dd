"""Exact dense statevector simulation with seeded sampling.

Convention (fixed, and relied on by every bitstring consumer): qubit 0 is
the least significant bit of the basis index, and bitstrings are written
qubit-0-first, so basis index 6 on three qubits is the string "011".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..encodings import IsingModel
from ..errors import SizeMismatch, TooManyQubits, UnboundParameter
from .model import Circuit

DEFAULT_MAX_QUBITS = 16

_SQ2 = 1.0 / np.sqrt(2.0)
_H = np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_CX = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
               dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)


def _rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def _ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])


def _rzz(theta: float) -> np.ndarray:
    a, b = np.exp(-1j * theta / 2), np.exp(1j * theta / 2)
    return np.diag([a, b, b, a])


def _rxx_plus_ryy(beta: float) -> np.ndarray:
    """exp(-i beta (XX + YY) / 2): a hopping rotation on the 01/10 subspace."""
    c, s = np.cos(beta), -1j * np.sin(beta)
    out = np.eye(4, dtype=complex)
    out[1, 1] = out[2, 2] = c
    out[1, 2] = out[2, 1] = s
    return out


@dataclass
class Statevector:
    """2^n complex amplitudes, qubit 0 = least significant basis bit."""

    amplitudes: np.ndarray

    @property
    def num_qubits(self) -> int:
        return int(np.log2(len(self.amplitudes)))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.sum(self.probabilities()))


def basis_bits(index: int, num_qubits: int) -> list[int]:
    return [(index >> q) & 1 for q in range(num_qubits)]


def bits_to_string(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def _gate_matrix(gate, bindings):
    if gate.kind == "h":
        return _H
    if gate.kind == "x":
        return _X
    if gate.kind == "cx":
        return _CX
    if gate.kind == "cz":
        return _CZ
    angle = gate.angle.resolve(bindings)
    if gate.kind == "rx":
        return _rx(angle)
    if gate.kind == "ry":
        return _ry(angle)
    if gate.kind == "rz":
        return _rz(angle)
    if gate.kind == "rzz":
        return _rzz(angle)
    return _rxx_plus_ryy(angle)


def _apply(state: np.ndarray, matrix: np.ndarray, qubits: tuple[int, ...],
           num_qubits: int) -> np.ndarray:
    # tensor axis of qubit q is n-1-q (C order puts the last qubit first)
    axes = [num_qubits - 1 - q for q in qubits]
    if len(qubits) == 1:
        out = np.tensordot(matrix, state, axes=(1, axes[0]))
        return np.moveaxis(out, 0, axes[0])
    u = matrix.reshape(2, 2, 2, 2)
    out = np.tensordot(u, state, axes=([2, 3], axes))
    return np.moveaxis(out, [0, 1], axes)


def simulate(circuit: Circuit, bindings: dict[str, float] | None = None,
             max_qubits: int = DEFAULT_MAX_QUBITS) -> Statevector:
    """Run the circuit on |0...0> with all symbols bound to floats."""
    bindings = bindings or {}
    missing = [p for p in circuit.parameters if p not in bindings]
    if missing:
        raise UnboundParameter(f"unbound parameters: {', '.join(missing)}")
    if circuit.num_qubits > max_qubits:
        raise TooManyQubits(
            f"{circuit.num_qubits} qubits exceeds the cap of {max_qubits}")
    n = circuit.num_qubits
    state = np.zeros((2,) * n, dtype=complex)
    state[(0,) * n] = 1.0
    for gate in circuit.gates:
        state = _apply(state, _gate_matrix(gate, bindings), gate.qubits, n)
    return Statevector(amplitudes=state.reshape(-1))


def ising_energy_table(ising: IsingModel, num_qubits: int) -> np.ndarray:
    """Energy of every computational basis state, in basis-index order."""
    if ising.num_spins != num_qubits:
        raise SizeMismatch(
            f"{ising.num_spins} spins vs {num_qubits} qubits")
    idx = np.arange(1 << num_qubits)
    z = np.empty((1 << num_qubits, num_qubits))
    for q in range(num_qubits):
        z[:, q] = 1.0 - 2.0 * ((idx >> q) & 1)
    energies = z @ ising.h + ising.offset
    for (i, j), c in ising.couplings.items():
        energies += c * z[:, i] * z[:, j]
    return energies


def expectation(state: Statevector, ising: IsingModel) -> float:
    """<H> of a diagonal Hamiltonian: sum_x |a_x|^2 E(x), computed exactly."""
    energies = ising_energy_table(ising, state.num_qubits)
    return float(state.probabilities() @ energies)


def sample(state: Statevector, shots: int, seed: int | None = None) -> dict[str, int]:
    """Seeded multinomial draw; keys are qubit-0-first bitstrings."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, probs)
    n = state.num_qubits
    return {bits_to_string(basis_bits(i, n)): int(c)
            for i, c in enumerate(counts) if c > 0}

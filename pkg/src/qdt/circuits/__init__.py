"""Parameterized circuits, templates, QASM I/O and exact simulation."""

from .model import AngleExpr, Circuit, Gate
from .qasm3 import parse_qasm3_mixer, render_qasm3
from .simulator import (DEFAULT_MAX_QUBITS, Statevector, basis_bits,
                        bits_to_string, expectation, ising_energy_table,
                        sample, simulate)
from .templates import (MIXER_TEMPLATES, build_ansatz, build_mixer,
                        build_qaoa_circuit)

__all__ = [
    "AngleExpr",
    "Circuit",
    "DEFAULT_MAX_QUBITS",
    "Gate",
    "MIXER_TEMPLATES",
    "Statevector",
    "basis_bits",
    "bits_to_string",
    "build_ansatz",
    "build_mixer",
    "build_qaoa_circuit",
    "expectation",
    "ising_energy_table",
    "parse_qasm3_mixer",
    "render_qasm3",
    "sample",
    "simulate",
]

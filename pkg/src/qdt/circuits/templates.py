"""Circuit templates: mixers, a hardware-efficient ansatz, and the
alternating cost/mixer construction.

Mixer conventions (one shared symbol "beta"):

* X     rx(2*beta) on every qubit.
* Ring  rxx_plus_ryy(beta) on every nearest-neighbour pair (i, i+1 mod n).
* XY    rxx_plus_ryy(beta) on every pair.

On two qubits the ring closes onto itself, so the duplicate pair collapses
to a single gate and Ring == XY there.
"""

from __future__ import annotations

from ..builders import Builder, Hyperparameter, register_builder
from ..encodings import IsingModel
from ..errors import SizeMismatch, TooFewQubits
from .model import AngleExpr, Circuit, Gate

MIXER_TEMPLATES = ("X", "XY", "Ring")


def build_mixer(template: str, num_qubits: int) -> Circuit:
    if template not in MIXER_TEMPLATES:
        raise ValueError(f"unknown mixer template '{template}'")
    if template == "X":
        if num_qubits < 1:
            raise TooFewQubits("X mixer needs at least 1 qubit")
        gates = [Gate("rx", (q,), AngleExpr(2.0, "beta"))
                 for q in range(num_qubits)]
        return Circuit(num_qubits, gates)
    if num_qubits < 2:
        raise TooFewQubits(f"{template} mixer needs at least 2 qubits")
    if template == "Ring":
        pairs = {tuple(sorted((i, (i + 1) % num_qubits)))
                 for i in range(num_qubits)}
    else:  # XY: all pairs
        pairs = {(i, j) for i in range(num_qubits)
                 for j in range(i + 1, num_qubits)}
    gates = [Gate("rxx_plus_ryy", pair, AngleExpr(1.0, "beta"))
             for pair in sorted(pairs)]
    return Circuit(num_qubits, gates)


def build_ansatz(num_qubits: int, layers: int, entangler: str = "cz") -> Circuit:
    """ry rotations on every qubit, entanglers on the linear chain, repeated
    ``layers`` times, closed by a final ry layer: (layers+1)*n parameters."""
    if layers < 1:
        raise ValueError("layers must be at least 1")
    if entangler not in ("cz", "cx"):
        raise ValueError(f"entangler must be cz or cx, got '{entangler}'")
    gates: list[Gate] = []
    for layer in range(layers):
        for q in range(num_qubits):
            gates.append(Gate("ry", (q,), AngleExpr(1.0, f"theta_{layer}_{q}")))
        for q in range(num_qubits - 1):
            gates.append(Gate(entangler, (q, q + 1)))
    for q in range(num_qubits):
        gates.append(Gate("ry", (q,), AngleExpr(1.0, f"theta_{layers}_{q}")))
    return Circuit(num_qubits, gates)


def build_qaoa_circuit(ising: IsingModel, mixer: Circuit, p: int) -> Circuit:
    """Uniform superposition, then p alternations of phase-separation and
    mixer layers; parameters gamma_1..gamma_p and beta_1..beta_p."""
    n = ising.num_spins
    if mixer.num_qubits != n:
        raise SizeMismatch(
            f"mixer has {mixer.num_qubits} qubits, model has {n} spins")
    if p < 1:
        raise ValueError("p must be at least 1")
    mixer_params = mixer.parameters
    if len(mixer_params) != 1:
        raise SizeMismatch(
            f"mixer must expose exactly one symbol, found {mixer_params}")

    gates: list[Gate] = [Gate("h", (q,)) for q in range(n)]
    for k in range(1, p + 1):
        gamma = f"gamma_{k}"
        for i, hi in enumerate(ising.h):
            if hi != 0.0:
                gates.append(Gate("rz", (i,), AngleExpr(2.0 * float(hi), gamma)))
        for (i, j), c in sorted(ising.couplings.items()):
            gates.append(Gate("rzz", (i, j), AngleExpr(2.0 * float(c), gamma)))
        layer = mixer.renamed({mixer_params[0]: f"beta_{k}"})
        gates.extend(layer.gates)
    return Circuit(n, gates)


def _make_mixer_builder(template: str) -> Builder:
    return Builder(
        target_kind="mixer",
        display_name=template,
        hyperparameters=(),
        factory=lambda values, num_qubits: build_mixer(template, num_qubits),
    )


for _template in MIXER_TEMPLATES:
    register_builder(_make_mixer_builder(_template))

register_builder(Builder(
    target_kind="ansatz",
    display_name="HardwareEfficient",
    hyperparameters=(
        Hyperparameter("layers", "int", description="repetitions of the ry + entangler block",
                       default=1, test=lambda v: v >= 1,
                       test_message="must be at least 1"),
        Hyperparameter("entangler", "choice", options=("cz", "cx"), default="cz",
                       description="two-qubit gate on the linear chain"),
    ),
    factory=lambda values, num_qubits: build_ansatz(
        num_qubits, values["layers"], values["entangler"]),
))

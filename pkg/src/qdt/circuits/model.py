"""Parameterized circuit representation.

Angles are either literals or ``literal * symbol`` products, which is all
the alternating-layer algorithms need; symbols are bound to floats only at
simulation time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

SINGLE_QUBIT_KINDS = ("h", "x", "rx", "ry", "rz")
TWO_QUBIT_KINDS = ("cx", "cz", "rzz", "rxx_plus_ryy")
ROTATION_KINDS = ("rx", "ry", "rz", "rzz", "rxx_plus_ryy")


@dataclass(frozen=True)
class AngleExpr:
    """coeff (literal) or coeff * symbol when a symbol is present."""

    coeff: float
    symbol: str | None = None

    def resolve(self, bindings: dict[str, float]) -> float:
        if self.symbol is None:
            return self.coeff
        return self.coeff * bindings[self.symbol]

    def renamed(self, mapping: dict[str, str]) -> "AngleExpr":
        if self.symbol is None or self.symbol not in mapping:
            return self
        return AngleExpr(self.coeff, mapping[self.symbol])

    def __str__(self):
        if self.symbol is None:
            return repr(self.coeff)
        if self.coeff == 1.0:
            return self.symbol
        return f"{self.coeff!r}*{self.symbol}"


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: AngleExpr | None = None

    def __post_init__(self):
        if self.kind not in SINGLE_QUBIT_KINDS + TWO_QUBIT_KINDS:
            raise ValueError(f"unknown gate kind '{self.kind}'")
        arity = 1 if self.kind in SINGLE_QUBIT_KINDS else 2
        if len(self.qubits) != arity:
            raise ValueError(f"{self.kind} takes {arity} qubit(s)")
        if arity == 2 and self.qubits[0] == self.qubits[1]:
            raise ValueError(f"{self.kind} needs two distinct qubits")
        if self.kind in ROTATION_KINDS and self.angle is None:
            raise ValueError(f"{self.kind} requires an angle")
        if self.kind not in ROTATION_KINDS and self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")

    def __str__(self):
        target = ", ".join(f"q[{i}]" for i in self.qubits)
        if self.angle is None:
            return f"{self.kind} {target}"
        return f"{self.kind}({self.angle}) {target}"


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for gate in self.gates:
            for q in gate.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(
                        f"gate {gate} addresses qubit {q} of {self.num_qubits}")

    @property
    def parameters(self) -> list[str]:
        """Symbolic names in first-use order."""
        seen: list[str] = []
        for gate in self.gates:
            sym = gate.angle.symbol if gate.angle else None
            if sym is not None and sym not in seen:
                seen.append(sym)
        return seen

    @property
    def num_gates(self) -> int:
        return len(self.gates)

    def renamed(self, mapping: dict[str, str]) -> "Circuit":
        return Circuit(self.num_qubits,
                       tuple(Gate(g.kind, g.qubits,
                                  g.angle.renamed(mapping) if g.angle else None)
                             for g in self.gates))

    def bound(self, bindings: dict[str, float]) -> "Circuit":
        """Replace symbols with numeric angles (a fully concrete circuit)."""
        gates = []
        for g in self.gates:
            angle = g.angle
            if angle is not None and angle.symbol is not None:
                angle = AngleExpr(angle.resolve(bindings))
            gates.append(Gate(g.kind, g.qubits, angle))
        return Circuit(self.num_qubits, tuple(gates))

    def extended(self, gates) -> "Circuit":
        return Circuit(self.num_qubits, self.gates + tuple(gates))

    def describe(self) -> str:
        return f"circuit({self.num_qubits} qubits, {self.num_gates} gates)"

    def __str__(self):
        lines = [f"qubits: {self.num_qubits}"]
        lines += [str(g) for g in self.gates]
        return "\n".join(lines)

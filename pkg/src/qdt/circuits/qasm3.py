"""Restricted OpenQASM 3 reader/writer for user-supplied mixers.

Accepted input, and nothing else:

    OPENQASM 3;                 // optional header
    input float beta;           // zero or more; float[64] also accepted
    qubit[4] q;                 // exactly one register, named q
    h q[0];  x q[1];            // plain single-qubit gates
    rx(2.0*beta) q[2];          // rx/ry/rz with float | name | product angle
    cx q[0], q[1];              // cx/cz on two distinct qubits

Comments start with //; whitespace and newlines carry no meaning.  There is
no measurement, no classical control and no gate definition: a mixer is a
pure parameterized unitary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import (QasmSyntaxError, QubitIndexOutOfRange,
                      UnsupportedFeature)
from .model import AngleExpr, Circuit, Gate, ROTATION_KINDS

_TOKEN_RE = re.compile(r"""
    (?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<symbol>[\[\](),;*-])
  | (?P<space>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>//[^\n]*)
  | (?P<bad>.)
""", re.VERBOSE)

_GATE_NAMES = ("h", "x", "rx", "ry", "rz", "cx", "cz")


@dataclass
class _Token:
    kind: str
    text: str
    line: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line = 1
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        value = match.group()
        if kind == "newline":
            line += 1
            continue
        if kind in ("space", "comment"):
            continue
        if kind == "bad":
            raise QasmSyntaxError(line, f"unexpected character {value!r}")
        tokens.append(_Token(kind, value, line))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def _line(self) -> int:
        if self.pos < len(self.tokens):
            return self.tokens[self.pos].line
        return self.tokens[-1].line if self.tokens else 1

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            raise QasmSyntaxError(self._line, "unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text:
            raise QasmSyntaxError(tok.line, f"expected '{text}', got '{tok.text}'")
        return tok

    def expect_name(self) -> _Token:
        tok = self.take()
        if tok.kind != "name":
            raise QasmSyntaxError(tok.line, f"expected a name, got '{tok.text}'")
        return tok


def parse_qasm3_mixer(text: str) -> Circuit:
    """Parse the restricted grammar into a circuit with symbolic angles."""
    parser = _Parser(_tokenize(text))
    params: list[str] = []

    tok = parser.peek()
    if tok is not None and tok.text == "OPENQASM":
        parser.take()
        version = parser.take()
        if version.text not in ("3", "3.0"):
            raise UnsupportedFeature(f"OPENQASM {version.text}", version.line)
        parser.expect(";")

    while (tok := parser.peek()) is not None and tok.text == "input":
        parser.take()
        kind = parser.expect_name()
        if kind.text != "float":
            raise UnsupportedFeature(f"input {kind.text}", kind.line)
        if parser.peek() is not None and parser.peek().text == "[":
            parser.take()
            width = parser.take()
            if width.text != "64":
                raise QasmSyntaxError(width.line, "only float[64] is accepted")
            parser.expect("]")
        name = parser.expect_name()
        if name.text in params:
            raise QasmSyntaxError(name.line, f"parameter '{name.text}' declared twice")
        params.append(name.text)
        parser.expect(";")

    tok = parser.peek()
    if tok is None or tok.text != "qubit":
        line = tok.line if tok else parser._line
        raise QasmSyntaxError(line, "expected the qubit register declaration")
    parser.take()
    parser.expect("[")
    size_tok = parser.take()
    if size_tok.kind != "number" or not size_tok.text.isdigit() or int(size_tok.text) < 1:
        raise QasmSyntaxError(size_tok.line, "register size must be a positive integer")
    num_qubits = int(size_tok.text)
    parser.expect("]")
    reg = parser.expect_name()
    if reg.text != "q":
        raise QasmSyntaxError(reg.line, "the register must be named 'q'")
    parser.expect(";")

    gates: list[Gate] = []
    while (tok := parser.peek()) is not None:
        if tok.kind != "name":
            raise QasmSyntaxError(tok.line, f"expected a gate name, got '{tok.text}'")
        if tok.text == "qubit":
            raise QasmSyntaxError(tok.line, "only one qubit register is accepted")
        if tok.text not in _GATE_NAMES:
            raise UnsupportedFeature(tok.text, tok.line)
        gates.append(_parse_gate(parser, num_qubits, params))
    return Circuit(num_qubits, gates)


def _parse_gate(parser: _Parser, num_qubits: int, params: list[str]) -> Gate:
    name = parser.take()
    kind = name.text
    angle = None
    if kind in ("rx", "ry", "rz"):
        parser.expect("(")
        angle = _parse_angle(parser, params)
        parser.expect(")")
    qubits = [_parse_qubit_ref(parser, num_qubits)]
    if kind in ("cx", "cz"):
        parser.expect(",")
        qubits.append(_parse_qubit_ref(parser, num_qubits))
        if qubits[0] == qubits[1]:
            raise QasmSyntaxError(name.line, f"{kind} needs two distinct qubits")
    parser.expect(";")
    return Gate(kind, tuple(qubits), angle)


def _take_number(parser: _Parser) -> float:
    """Number with optional unary minus (negative rotation angles)."""
    tok = parser.take()
    sign = 1.0
    if tok.text == "-":
        sign = -1.0
        tok = parser.take()
    if tok.kind != "number":
        raise QasmSyntaxError(tok.line, f"expected a number, got '{tok.text}'")
    return sign * float(tok.text)


def _parse_angle(parser: _Parser, params: list[str]) -> AngleExpr:
    first = parser.peek()
    if first is None:
        raise QasmSyntaxError(parser._line, "expected an angle")
    if first.kind == "name":
        parser.take()
        if first.text not in params:
            raise QasmSyntaxError(first.line,
                                  f"parameter '{first.text}' was not declared")
        follow = parser.peek()
        if follow is not None and follow.text == "*":
            parser.take()
            return AngleExpr(_take_number(parser), first.text)
        return AngleExpr(1.0, first.text)
    if first.kind == "number" or first.text == "-":
        literal = _take_number(parser)
        follow = parser.peek()
        if follow is not None and follow.text == "*":
            parser.take()
            symbol = parser.take()
            if symbol.kind != "name":
                raise QasmSyntaxError(
                    symbol.line, "angle products must pair a float with a name")
            if symbol.text not in params:
                raise QasmSyntaxError(
                    symbol.line, f"parameter '{symbol.text}' was not declared")
            return AngleExpr(literal, symbol.text)
        return AngleExpr(literal)
    raise QasmSyntaxError(first.line, f"expected an angle, got '{first.text}'")


def _parse_qubit_ref(parser: _Parser, num_qubits: int) -> int:
    reg = parser.expect_name()
    if reg.text != "q":
        raise QasmSyntaxError(reg.line, f"unknown register '{reg.text}'")
    parser.expect("[")
    idx_tok = parser.take()
    if idx_tok.kind != "number" or not idx_tok.text.isdigit():
        raise QasmSyntaxError(idx_tok.line, "qubit index must be an integer")
    idx = int(idx_tok.text)
    parser.expect("]")
    if idx >= num_qubits:
        raise QubitIndexOutOfRange(
            f"line {idx_tok.line}: q[{idx}] exceeds qubit[{num_qubits}]")
    return idx


def render_qasm3(circuit: Circuit) -> str:
    """Inverse of the parser for circuits inside the accepted subset."""
    lines = ["OPENQASM 3;"]
    for name in circuit.parameters:
        lines.append(f"input float {name};")
    lines.append(f"qubit[{circuit.num_qubits}] q;")
    for gate in circuit.gates:
        if gate.kind not in _GATE_NAMES:
            raise UnsupportedFeature(gate.kind)
        target = ", ".join(f"q[{q}]" for q in gate.qubits)
        if gate.kind in ROTATION_KINDS:
            lines.append(f"{gate.kind}({gate.angle}) {target};")
        else:
            lines.append(f"{gate.kind} {target};")
    return "\n".join(lines) + "\n"

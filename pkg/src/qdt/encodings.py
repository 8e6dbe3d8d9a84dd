"""Quadratic binary models and generic discrete-to-binary encoders.

Two equivalent model forms are used throughout:

* QUBO:   E(x) = x^T Q x + offset           with x_i in {0, 1},
          Q upper triangular, diagonal entries holding the linear terms.
* Ising:  E(z) = sum_i h_i z_i + sum_{i<j} J_ij z_i z_j + offset
          with z_i in {-1, +1}.

The substitution x = (1 - z) / 2 converts between them and preserves the
energy of every assignment exactly, moving constant parts into the offset.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .errors import DegreeOverflow, LengthMismatch, UnsupportedConstraints

if TYPE_CHECKING:  # pragma: no cover
    from .problems.discrete import DiscreteProblem


@dataclass(frozen=True, eq=False)
class QuboModel:
    """Quadratic unconstrained binary objective with a constant offset."""

    num_vars: int
    q: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.shape != (self.num_vars, self.num_vars):
            raise LengthMismatch(
                f"Q must be {self.num_vars}x{self.num_vars}, got {q.shape}")
        if np.any(np.tril(q, -1) != 0.0):
            raise LengthMismatch("Q must be upper triangular")
        object.__setattr__(self, "q", q)
        q.setflags(write=False)

    @classmethod
    def from_terms(cls, num_vars: int,
                   linear: dict[int, float] | None = None,
                   quadratic: dict[tuple[int, int], float] | None = None,
                   offset: float = 0.0) -> "QuboModel":
        """Assemble a model from sparse coefficient maps (pairs in any order)."""
        q = np.zeros((num_vars, num_vars))
        for i, c in (linear or {}).items():
            q[i, i] += c
        for (i, j), c in (quadratic or {}).items():
            if i == j:
                q[i, i] += c
            else:
                a, b = min(i, j), max(i, j)
                q[a, b] += c
        return cls(num_vars, q, offset)

    def to_json_dict(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "matrix": self.q.tolist(),
            "offset": self.offset,
        }


@dataclass(frozen=True, eq=False)
class IsingModel:
    """Diagonal spin Hamiltonian: fields h, couplings J, constant offset."""

    h: np.ndarray
    couplings: dict[tuple[int, int], float]
    offset: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        object.__setattr__(self, "h", h)
        h.setflags(write=False)
        for (i, j) in self.couplings:
            if not 0 <= i < j < self.num_spins:
                raise LengthMismatch(f"coupling ({i},{j}) out of order or range")

    @property
    def num_spins(self) -> int:
        return len(self.h)

    def to_json_dict(self) -> dict:
        return {
            "h": self.h.tolist(),
            "couplings": [[i, j, c] for (i, j), c in sorted(self.couplings.items())],
            "offset": self.offset,
        }


@dataclass
class VariableRange:
    """Bit block assigned to one discrete variable."""

    name: str
    domain_size: int
    start: int
    width: int


@dataclass
class DecodingMap:
    """Everything needed to map solver bitstrings back to discrete values.

    ``offset_contributions`` records, by label, every constant folded into
    the model so the backward pass can report both the raw model energy and
    the application-level objective.
    """

    scheme: str  # "direct" | "one_hot" | "binary"
    variables: list[VariableRange]
    fixed: dict = field(default_factory=dict)
    offset_contributions: list[tuple[str, float]] = field(default_factory=list)

    @property
    def num_bits(self) -> int:
        return sum(v.width for v in self.variables)

    def decode_bits(self, bits: Sequence[int]) -> tuple[list[int | None], bool]:
        """Return per-variable values plus a flag for any repairs applied.

        one_hot blocks with several set bits keep the lowest-index one;
        all-zero blocks decode to ``None`` (the caller owns the fill-in rule).
        binary blocks clamp out-of-domain codes to the largest value, which
        is ordinary decoding and not flagged as a repair.
        """
        if len(bits) != self.num_bits:
            raise LengthMismatch(
                f"expected {self.num_bits} bits, got {len(bits)}")
        values: list[int | None] = []
        repaired = False
        for var in self.variables:
            block = list(bits[var.start:var.start + var.width])
            if self.scheme == "direct":
                values.append(int(block[0]))
            elif self.scheme == "one_hot":
                ones = [k for k, b in enumerate(block) if b]
                if len(ones) == 1:
                    values.append(ones[0])
                elif len(ones) > 1:
                    values.append(ones[0])
                    repaired = True
                else:
                    values.append(None)
                    repaired = True
            elif self.scheme == "binary":
                code = sum(b << k for k, b in enumerate(block))
                values.append(min(code, var.domain_size - 1))
            else:
                raise ValueError(f"unknown scheme '{self.scheme}'")
        return values, repaired

    def total_offset(self) -> float:
        return sum(v for _, v in self.offset_contributions)

    def to_json_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "variables": [
                {"name": v.name, "domain_size": v.domain_size,
                 "start": v.start, "width": v.width}
                for v in self.variables
            ],
            "fixed": dict(self.fixed),
            "offset_contributions": [[k, v] for k, v in self.offset_contributions],
        }


def evaluate_qubo(model: QuboModel, bits: Sequence[int]) -> float:
    """Exact energy x^T Q x + offset of one assignment."""
    x = np.asarray(bits, dtype=float)
    if x.shape != (model.num_vars,):
        raise LengthMismatch(
            f"expected {model.num_vars} bits, got {x.shape}")
    return float(x @ model.q @ x + model.offset)


def evaluate_ising(model: IsingModel, spins: Sequence[int]) -> float:
    """Exact energy of one spin assignment (entries must be +1 or -1)."""
    z = np.asarray(spins, dtype=float)
    if z.shape != (model.num_spins,):
        raise LengthMismatch(
            f"expected {model.num_spins} spins, got {z.shape}")
    energy = float(model.h @ z) + model.offset
    for (i, j), c in model.couplings.items():
        energy += c * z[i] * z[j]
    return float(energy)


def bits_to_spins(bits: Sequence[int]) -> list[int]:
    """x in {0,1} -> z in {+1,-1} via z = 1 - 2x (0 maps to +1)."""
    return [1 - 2 * int(b) for b in bits]


def spins_to_bits(spins: Sequence[int]) -> list[int]:
    return [(1 - int(z)) // 2 for z in spins]


def qubo_to_ising(model: QuboModel) -> IsingModel:
    """Convert via x = (1 - z) / 2; every assignment keeps its exact energy."""
    n = model.num_vars
    q = model.q
    h = -np.diag(q) / 2.0
    offset = model.offset + float(np.diag(q).sum()) / 2.0
    couplings: dict[tuple[int, int], float] = {}
    iu, ju = np.triu_indices(n, k=1)
    for i, j in zip(iu, ju):
        c = float(q[i, j])
        if c == 0.0:
            continue
        couplings[(int(i), int(j))] = c / 4.0
        h[i] -= c / 4.0
        h[j] -= c / 4.0
        offset += c / 4.0
    return IsingModel(h=h, couplings=couplings, offset=offset)


# --- generic encoders over discrete problems ---


def _bit_layout(dp: "DiscreteProblem", width_of) -> list[VariableRange]:
    ranges = []
    start = 0
    for name, domain in dp.variables:
        width = width_of(domain)
        ranges.append(VariableRange(name, domain, start, width))
        start += width
    return ranges


def one_hot_encode(dp: "DiscreteProblem", penalty: float) -> tuple[QuboModel, DecodingMap]:
    """One bit per (variable, value) pair with exactly-one penalties.

    Every variable's block, and every explicit constraint group, adds
    ``penalty * (sum of its bits - 1)^2``.  Expanded with x^2 = x this puts
    ``+penalty`` in the offset, ``-penalty`` on each diagonal and
    ``+2 * penalty`` on each in-group pair, so a block with exactly one set
    bit contributes nothing.
    """
    if penalty <= 0:
        raise ValueError("penalty must be positive")
    ranges = _bit_layout(dp, lambda d: d)
    index = {(v.name, val): v.start + val for v in ranges for val in range(v.domain_size)}
    num_bits = ranges[-1].start + ranges[-1].width if ranges else 0

    linear: dict[int, float] = defaultdict(float)
    quadratic: dict[tuple[int, int], float] = defaultdict(float)
    offset = 0.0

    for coeff, indicators in dp.objective_terms:
        if not indicators:
            offset += coeff
            continue
        bits = [index[(var, val)] for var, val in indicators]
        if len(bits) == 1:
            linear[bits[0]] += coeff
        else:
            i, j = bits
            if i == j:
                linear[i] += coeff
            elif indicators[0][0] == indicators[1][0]:
                # two different values of one variable never hold at once
                continue
            else:
                quadratic[(min(i, j), max(i, j))] += coeff

    groups = [list(range(v.start, v.start + v.width)) for v in ranges]
    groups += [[index[(var, val)] for var, val in g] for g in dp.constraint_groups]
    for g in groups:
        offset += penalty
        for b in g:
            linear[b] -= penalty
        for a_pos, a in enumerate(g):
            for b in g[a_pos + 1:]:
                quadratic[(min(a, b), max(a, b))] += 2.0 * penalty

    qubo = QuboModel.from_terms(num_bits, linear, quadratic, offset)
    decoding = DecodingMap(
        scheme="one_hot",
        variables=ranges,
        offset_contributions=[("exactly_one_penalty_constant", penalty * len(groups))],
    )
    return qubo, decoding


def _indicator_poly(var: VariableRange, value: int) -> dict[frozenset, float]:
    """Multilinear polynomial over the variable's bits equal to [var = value].

    Sums, over every code that decodes (after clamping) to ``value``, the
    product of b_k / (1 - b_k) factors matching the code's bits.
    """
    poly: dict[frozenset, float] = defaultdict(float)
    for code in range(1 << var.width):
        if min(code, var.domain_size - 1) != value:
            continue
        factors = [(var.start + k, (code >> k) & 1) for k in range(var.width)]
        partial: dict[frozenset, float] = {frozenset(): 1.0}
        for bit, want in factors:
            nxt: dict[frozenset, float] = defaultdict(float)
            for mono, c in partial.items():
                if want:
                    nxt[mono | {bit}] += c
                else:
                    nxt[mono] += c
                    nxt[mono | {bit}] -= c
            partial = nxt
        for mono, c in partial.items():
            poly[mono] += c
    return {m: c for m, c in poly.items() if c != 0.0}


def _poly_mul(a: dict[frozenset, float], b: dict[frozenset, float]) -> dict[frozenset, float]:
    out: dict[frozenset, float] = defaultdict(float)
    for ma, ca in a.items():
        for mb, cb in b.items():
            out[ma | mb] += ca * cb
    return {m: c for m, c in out.items() if c != 0.0}


def binary_encode(dp: "DiscreteProblem") -> tuple[QuboModel, DecodingMap]:
    """ceil(log2 d) bits per variable; codes beyond the domain clamp to d - 1.

    Constraint groups are not expressible in this code without extra
    penalties; groups covering a variable's full domain are trivially true
    and dropped, anything else is rejected.  Objective terms expand into
    bit polynomials, which must stay at degree two or below.
    """
    for g in dp.constraint_groups:
        touched = {var for var, _ in g}
        if len(touched) > 1:
            raise UnsupportedConstraints(
                "exactly-one groups across variables cannot be binary encoded")
        name = next(iter(touched))
        domain = dict(dp.variables)[name]
        if {val for _, val in g} != set(range(domain)):
            raise UnsupportedConstraints(
                f"partial-domain group on '{name}' cannot be binary encoded")

    ranges = _bit_layout(dp, lambda d: max(1, int(np.ceil(np.log2(d)))))
    by_name = {v.name: v for v in ranges}
    num_bits = ranges[-1].start + ranges[-1].width if ranges else 0

    total: dict[frozenset, float] = defaultdict(float)
    for coeff, indicators in dp.objective_terms:
        poly: dict[frozenset, float] = {frozenset(): coeff}
        for var, val in indicators:
            poly = _poly_mul(poly, _indicator_poly(by_name[var], val))
        for mono, c in poly.items():
            total[mono] += c

    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    offset = 0.0
    for mono, c in total.items():
        if c == 0.0:
            continue
        if len(mono) == 0:
            offset += c
        elif len(mono) == 1:
            (i,) = mono
            linear[i] = linear.get(i, 0.0) + c
        elif len(mono) == 2:
            i, j = sorted(mono)
            quadratic[(i, j)] = quadratic.get((i, j), 0.0) + c
        else:
            raise DegreeOverflow(
                f"term of degree {len(mono)} in bits; at most two is supported")

    qubo = QuboModel.from_terms(num_bits, linear, quadratic, offset)
    decoding = DecodingMap(scheme="binary", variables=ranges)
    return qubo, decoding

"""Shared fixtures and independent oracles.

The oracles below deliberately use plain-Python enumeration (itertools,
double loops) so they share no code path with the vectorized
implementations they check.
"""

from __future__ import annotations

import itertools
import json
from pathlib import Path

import numpy as np
import pytest


# --- independent oracles ---

def qubo_energy_slow(matrix, offset, bits):
    """Plain double-loop QUBO energy."""
    n = len(bits)
    total = offset
    for i in range(n):
        for j in range(n):
            total += matrix[i][j] * bits[i] * bits[j]
    return total


def ising_energy_slow(h, couplings, offset, spins):
    total = offset
    for i, hi in enumerate(h):
        total += hi * spins[i]
    for (i, j), c in couplings.items():
        total += c * spins[i] * spins[j]
    return total


def enumerate_bits(n):
    return itertools.product((0, 1), repeat=n)


def brute_minimum_slow(matrix, offset):
    """(energy, bits) of the global minimum, ties to the lexicographically
    smallest bit tuple; pure enumeration."""
    best = None
    for bits in enumerate_bits(len(matrix)):
        e = qubo_energy_slow(matrix, offset, bits)
        if best is None or e < best[0] or (e == best[0] and bits < best[1]):
            best = (e, bits)
    return best


def tour_length_slow(distances, tour):
    total = 0.0
    for a, b in zip(tour, list(tour[1:]) + [tour[0]]):
        total += distances[a][b]
    return total


def best_tour_slow(distances):
    """Optimal closed tour by permutation enumeration, city 0 first."""
    n = len(distances)
    best = None
    for perm in itertools.permutations(range(1, n)):
        tour = (0,) + perm
        length = tour_length_slow(distances, tour)
        if best is None or length < best[0]:
            best = (length, list(tour))
    return best


def cut_value_slow(edges, partition):
    return sum(w for u, v, w in edges if partition[u] != partition[v])


def best_cut_slow(num_nodes, edges):
    best = None
    for partition in enumerate_bits(num_nodes):
        value = cut_value_slow(edges, partition)
        if best is None or value > best[0]:
            best = (value, list(partition))
    return best


def random_qubo(num_vars, seed):
    from qdt.encodings import QuboModel
    rng = np.random.default_rng(seed)
    q = np.triu(rng.uniform(-2.0, 2.0, size=(num_vars, num_vars)))
    return QuboModel(num_vars, q, float(rng.uniform(-1.0, 1.0)))


# --- fixtures ---

K3_RECORD = {
    "problem_class": "maxcut",
    "num_nodes": 3,
    "edges": [[0, 1, 1.0], [0, 2, 1.0], [1, 2, 1.0]],
}

TSP3_RECORD = {
    "problem_class": "tsp",
    "distances": [[0, 1, 3], [1, 0, 2], [3, 2, 0]],
}


@pytest.fixture
def k3_file(tmp_path):
    path = tmp_path / "k3.json"
    path.write_text(json.dumps(K3_RECORD))
    return path


@pytest.fixture
def tsp3_file(tmp_path):
    path = tmp_path / "tsp3.json"
    path.write_text(json.dumps(TSP3_RECORD))
    return path


def load_result(run_dir: Path) -> dict:
    return json.loads((Path(run_dir) / "result.json").read_text())


def normalized_result(record: dict) -> dict:
    """Strip the time-derived fields (run id, timestamp, wall time)."""
    out = json.loads(json.dumps(record))
    out.pop("run_id", None)
    out.pop("timestamp", None)
    if "solver_stats" in out:
        out["solver_stats"].pop("wall_time_ms", None)
    return out

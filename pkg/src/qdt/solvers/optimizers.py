"""Derivative-free optimizers with full evaluation histories.

Both routines record every single objective call, so downstream resource
accounting (circuit_evaluations) is simply the history length.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..builders import Builder, Hyperparameter, register_builder
from .base import HistoryEntry


@dataclass
class OptimizeOutcome:
    x: np.ndarray
    fun: float
    history: list[HistoryEntry]
    iterations: int


class _Recorder:
    def __init__(self, objective: Callable[[np.ndarray], float]):
        self.objective = objective
        self.history: list[HistoryEntry] = []

    def __call__(self, x: np.ndarray) -> float:
        value = float(self.objective(np.asarray(x, dtype=float)))
        self.history.append(
            HistoryEntry(len(self.history), tuple(float(v) for v in x), value))
        return value


def nelder_mead(objective, x0: Sequence[float], maxiter: int = 0,
                initial_step: float = 0.5, xtol: float = 1e-6) -> OptimizeOutcome:
    """Downhill simplex with reflect 1.0 / expand 2.0 / contract 0.5 /
    shrink 0.5; stops when the simplex spread drops below xtol or the
    iteration cap is reached.  maxiter 0 selects 200 per dimension.
    """
    f = _Recorder(objective)
    x0 = np.asarray(x0, dtype=float)
    dim = len(x0)
    if maxiter <= 0:
        maxiter = 200 * dim

    simplex = [x0.copy()]
    for i in range(dim):
        vertex = x0.copy()
        vertex[i] += initial_step
        simplex.append(vertex)
    values = [f(v) for v in simplex]

    iterations = 0
    while iterations < maxiter:
        order = np.argsort(values, kind="stable")
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        spread = max(float(np.max(np.abs(v - simplex[0]))) for v in simplex[1:])
        if spread < xtol:
            break
        iterations += 1

        centroid = np.mean(simplex[:-1], axis=0)
        reflected = centroid + 1.0 * (centroid - simplex[-1])
        fr = f(reflected)
        if fr < values[0]:
            expanded = centroid + 2.0 * (reflected - centroid)
            fe = f(expanded)
            if fe < fr:
                simplex[-1], values[-1] = expanded, fe
            else:
                simplex[-1], values[-1] = reflected, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = reflected, fr
        else:
            if fr < values[-1]:
                contracted = centroid + 0.5 * (reflected - centroid)
            else:
                contracted = centroid + 0.5 * (simplex[-1] - centroid)
            fc = f(contracted)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = contracted, fc
            else:
                for i in range(1, len(simplex)):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    values[i] = f(simplex[i])

    best = int(np.argmin(values))
    return OptimizeOutcome(simplex[best], values[best], f.history, iterations)


def spsa(objective, x0: Sequence[float], maxiter: int = 200, a: float = 0.1,
         c: float = 0.1, alpha: float = 0.602, gamma: float = 0.101,
         seed: int | None = None) -> OptimizeOutcome:
    """Simultaneous-perturbation stochastic approximation.

    Gain sequences a_k = a / (k+1)^alpha and c_k = c / (k+1)^gamma; the
    gradient estimate uses one +/-1 Bernoulli perturbation per step (two
    objective calls).  Returns the best point ever evaluated.
    """
    f = _Recorder(objective)
    rng = np.random.default_rng(seed)
    x = np.asarray(x0, dtype=float).copy()
    dim = len(x)

    best_x, best_f = None, np.inf
    for k in range(maxiter):
        ak = a / (k + 1) ** alpha
        ck = c / (k + 1) ** gamma
        delta = rng.integers(0, 2, size=dim) * 2.0 - 1.0
        f_plus = f(x + ck * delta)
        f_minus = f(x - ck * delta)
        for candidate, value in ((x + ck * delta, f_plus), (x - ck * delta, f_minus)):
            if value < best_f:
                best_x, best_f = candidate, value
        grad = (f_plus - f_minus) / (2.0 * ck) * delta
        x = x - ak * grad

    f_final = f(x)
    if f_final < best_f:
        best_x, best_f = x, f_final
    return OptimizeOutcome(np.asarray(best_x), best_f, f.history, maxiter)


@dataclass(frozen=True)
class OptimizerSpec:
    """Named minimize routine plus its resolved hyperparameter values."""

    name: str
    options: dict = field(default_factory=dict)

    def minimize(self, objective, x0, seed: int | None = None) -> OptimizeOutcome:
        if self.name == "NelderMead":
            return nelder_mead(objective, x0,
                               maxiter=self.options.get("maxiter", 0),
                               initial_step=self.options.get("initial_step", 0.5),
                               xtol=self.options.get("xtol", 1e-6))
        if self.name == "SPSA":
            return spsa(objective, x0,
                        maxiter=self.options.get("maxiter", 200),
                        a=self.options.get("a", 0.1),
                        c=self.options.get("c", 0.1),
                        alpha=self.options.get("alpha", 0.602),
                        gamma=self.options.get("gamma", 0.101),
                        seed=seed)
        raise ValueError(f"unknown optimizer '{self.name}'")


register_builder(Builder(
    target_kind="optimizer",
    display_name="NelderMead",
    hyperparameters=(
        Hyperparameter("maxiter", "int", default=0,
                       description="iteration cap; 0 scales as 200 per parameter",
                       test=lambda v: v >= 0,
                       test_message="must not be negative"),
        Hyperparameter("initial_step", "float", default=0.5,
                       description="edge length of the start simplex",
                       test=lambda v: v > 0,
                       test_message="must be larger than zero"),
        Hyperparameter("xtol", "float", default=1e-6,
                       description="simplex spread stopping threshold",
                       test=lambda v: v > 0,
                       test_message="must be larger than zero"),
    ),
    factory=lambda values: OptimizerSpec("NelderMead", dict(values)),
))

register_builder(Builder(
    target_kind="optimizer",
    display_name="SPSA",
    hyperparameters=(
        Hyperparameter("maxiter", "int", default=200,
                       description="number of perturbation steps",
                       test=lambda v: v > 0,
                       test_message="must be larger than zero"),
        Hyperparameter("a", "float", default=0.1,
                       description="step-size gain",
                       test=lambda v: v > 0,
                       test_message="must be larger than zero"),
        Hyperparameter("c", "float", default=0.1,
                       description="perturbation gain",
                       test=lambda v: v > 0,
                       test_message="must be larger than zero"),
        Hyperparameter("alpha", "float", default=0.602,
                       test=lambda v: v > 0,
                       test_message="must be larger than zero"),
        Hyperparameter("gamma", "float", default=0.101,
                       test=lambda v: v > 0,
                       test_message="must be larger than zero"),
    ),
    factory=lambda values: OptimizerSpec("SPSA", dict(values)),
))

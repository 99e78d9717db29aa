"""Self-contained Nelder-Mead simplex maximizer.

Deterministic: no internal randomness, stable ordering, pure functions of
the inputs.  The best vertex value never decreases across iterations:
reflection / expansion / contraction replace only the worst vertex, and a
shrink keeps the best vertex fixed.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

REFLECT = 1.0
EXPAND = 2.0
CONTRACT = 0.5
SHRINK = 0.5


@dataclass
class SimplexState:
    """Vertices (rows), their objective values, and the evaluation count."""

    points: np.ndarray
    values: np.ndarray
    evaluations: int

    def best(self) -> tuple[np.ndarray, float]:
        i = int(np.argmax(self.values))
        return self.points[i].copy(), float(self.values[i])

    def spread(self) -> float:
        return float(np.max(self.values) - np.min(self.values))


class NMResult(NamedTuple):
    x: np.ndarray
    value: float
    iterations: int
    evaluations: int
    converged: bool


def init_simplex(f: Callable[[np.ndarray], float], x0, step: float) -> SimplexState:
    """Axis-aligned initial simplex: x0 plus one offset vertex per coordinate."""
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    p = x0.shape[0]
    points = np.tile(x0, (p + 1, 1))
    for k in range(p):
        points[k + 1, k] += step
    values = np.array([f(points[i]) for i in range(p + 1)], dtype=np.float64)
    return SimplexState(points, values, p + 1)


def step(f: Callable[[np.ndarray], float], state: SimplexState) -> SimplexState:
    """One Nelder-Mead iteration (maximization); returns the updated state."""
    order = np.argsort(-state.values, kind="stable")
    points = state.points[order].copy()
    values = state.values[order].copy()
    evals = state.evaluations
    p = points.shape[1]

    centroid = points[:-1].mean(axis=0)
    direction = centroid - points[-1]
    xr = centroid + REFLECT * direction
    fr = f(xr)
    evals += 1

    if fr > values[0]:
        xe = centroid + EXPAND * direction
        fe = f(xe)
        evals += 1
        if fe > fr:
            points[-1], values[-1] = xe, fe
        else:
            points[-1], values[-1] = xr, fr
    elif fr > values[-2]:
        points[-1], values[-1] = xr, fr
    else:
        if fr > values[-1]:
            xc = centroid + CONTRACT * direction
            fc = f(xc)
            evals += 1
            accept = fc >= fr
        else:
            xc = centroid - CONTRACT * direction
            fc = f(xc)
            evals += 1
            accept = fc > values[-1]
        if accept:
            points[-1], values[-1] = xc, fc
        else:
            for i in range(1, p + 1):
                points[i] = points[0] + SHRINK * (points[i] - points[0])
                values[i] = f(points[i])
            evals += p

    return SimplexState(points, values, evals)


def maximize(
    f: Callable[[np.ndarray], float],
    x0,
    step_size: float,
    max_iter: int,
    tol: float,
) -> NMResult:
    """Run Nelder-Mead from x0; stops when the value spread falls below tol.

    A zero iteration budget returns the start point unchanged (one
    evaluation, not converged).
    """
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    if max_iter <= 0 or x0.shape[0] == 0:
        return NMResult(x0.copy(), f(x0), 0, 1, False)
    state = init_simplex(f, x0, step_size)
    converged = state.spread() <= tol
    it = 0
    while not converged and it < max_iter:
        state = step(f, state)
        it += 1
        converged = state.spread() <= tol
    x, value = state.best()
    return NMResult(x, value, it, state.evaluations, converged)

"""Small reference functions used by the tests, the CLI demo and examples."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .domain import Shape
from .pencil import BessFunction, Evaluator, PsdPencil


def parallel_resistor() -> BessFunction:
    """``f(z1, z2) = z1 z2 / (z1 + z2)`` from ``G_1 = [1, 1]``, ``G_2 = [0, 1]``."""
    return BessFunction(PsdPencil.from_factors([np.array([[1.0, 1.0]]), np.array([[0.0, 1.0]])],
                                               (1, 1), 1))


def matrix_identity(n: int = 1) -> BessFunction:
    """``f(Z) = Z`` on ``n x n`` matrices (``G = I_n``, ``m = 1``, no ``h`` block)."""
    return BessFunction(PsdPencil(Shape((n,), (1,), n, 0), (np.eye(n),)))


def random_pencil(rng: np.random.Generator, n: Sequence[int], m: Sequence[int], u: int,
                  h: int, real: bool = False) -> BessFunction:
    """Pencil with Gaussian factors. The ``d`` block is invertible on the
    halfplane product whenever the stacked ``h`` columns have full rank, which
    holds almost surely once there are at least ``h`` factor rows."""
    factors = []
    for nk_, mk in zip(n, m):
        g = rng.standard_normal((nk_ * mk, u + h))
        if not real:
            g = (g + 1j * rng.standard_normal((nk_ * mk, u + h))) / np.sqrt(2.0)
        factors.append(g)
    if h and sum(nk_ * mk for nk_, mk in zip(n, m)) < h:
        raise ValueError("too few factor rows for an invertible d block")
    return BessFunction(PsdPencil(Shape(tuple(n), tuple(m), u, h), tuple(factors)))


def square() -> Evaluator:
    """``g(z) = z^2``: symmetric and accretive at some points but not homogeneous."""
    return Evaluator((1,), 1, lambda Z: Z[0] @ Z[0])


def rotated_identity() -> Evaluator:
    """``g(z) = i z``: homogeneous but neither symmetric nor accretive."""
    return Evaluator((1,), 1, lambda Z: 1j * Z[0],
                     operator_func=lambda R: 1j * R.R[0])

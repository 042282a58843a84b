"""Cayley transforms between matrix halfplanes and matrix disks.

Per variable: ``W = (Z - I)(Z + I)^{-1}`` and ``Z = (I + W)(I - W)^{-1}``. The
same formulas act on operator tuples (blocks of size ``n_k d``). The double
Cayley transform also maps values: ``F(W) = (f(Z(W)) - I)(f(Z(W)) + I)^{-1}``.
All inversions are linear solves guarded by a condition-number check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from . import numkit as nk
from .domain import MatrixPoint, OperatorTuple, Shape
from .errors import SingularBlock, SpectrumAtOne
from .pencil import BessFunction


def to_disk(z: np.ndarray) -> np.ndarray:
    eye = np.eye(z.shape[0])
    return nk.rsolve(z - eye, z + eye, "Z + I")


def to_halfplane(w: np.ndarray) -> np.ndarray:
    eye = np.eye(w.shape[0])
    return nk.rsolve(eye + w, eye - w, "I - W")


def point_to_disk(Z: MatrixPoint) -> MatrixPoint:
    return MatrixPoint(tuple(to_disk(z) for z in Z.Z))


def point_to_halfplane(W: MatrixPoint) -> MatrixPoint:
    return MatrixPoint(tuple(to_halfplane(w) for w in W.Z))


def tuple_cayley(T: OperatorTuple) -> OperatorTuple:
    """Contractive tuple ``T`` -> accretive tuple ``R = (I + T)(I - T)^{-1}``."""
    R = tuple(to_halfplane(t) for t in T.R)
    margin = min(nk.min_eig_herm(r) for r in R)
    return OperatorTuple(T.n, T.d, R, kind="accretive", margin=margin)


def inverse_tuple_cayley(R: OperatorTuple) -> OperatorTuple:
    """Accretive tuple ``R`` -> contractive tuple ``T = (R - I)(R + I)^{-1}``."""
    T = tuple(to_disk(r) for r in R.R)
    slack = 1.0 - max(nk.opnorm(t) for t in T)
    return OperatorTuple(R.n, R.d, T, kind="contractive", margin=slack)


def value_to_disk(f_val: np.ndarray) -> np.ndarray:
    """``(f - I)(f + I)^{-1}``."""
    eye = np.eye(f_val.shape[0])
    return nk.rsolve(f_val - eye, f_val + eye, "f + I")


def value_to_halfplane(F_val: np.ndarray) -> np.ndarray:
    """``(I + F)(I - F)^{-1}``; raises ``SpectrumAtOne`` when ``I - F`` is singular."""
    eye = np.eye(F_val.shape[0])
    try:
        return nk.rsolve(eye + F_val, eye - F_val, "I - F")
    except SingularBlock as exc:
        raise SpectrumAtOne(str(exc)) from exc


@dataclass(frozen=True)
class SchurAglerEvaluator:
    """A function on the product of matrix disks, backed by a pencil function
    (through the double Cayley transform) or by a colligation."""

    source: Union[BessFunction, "object"]
    shape: Shape

    def __call__(self, W: MatrixPoint) -> np.ndarray:
        W.check_shape(self.shape.n)
        if isinstance(self.source, BessFunction):
            return value_to_disk(self.source(point_to_halfplane(W)))
        from .colligation import transfer_eval
        return transfer_eval(self.source, W)

    def operator(self, T: OperatorTuple) -> np.ndarray:
        """Evaluate at a commuting contractive tuple."""
        if isinstance(self.source, BessFunction):
            return value_to_disk(self.source.operator(tuple_cayley(T)))
        from .colligation import transfer_eval_operator
        return transfer_eval_operator(self.source, T)


def double_cayley(f: BessFunction) -> SchurAglerEvaluator:
    return SchurAglerEvaluator(f, f.shape)


@dataclass(frozen=True)
class HalfplaneEvaluator:
    """``f(Z) = (I + F(W(Z)))(I - F(W(Z)))^{-1}`` for a disk function ``F``."""

    F: Callable[[MatrixPoint], np.ndarray]
    n: tuple[int, ...]

    def __call__(self, Z: MatrixPoint) -> np.ndarray:
        Z.check_shape(self.n)
        return value_to_halfplane(nk.as_cmatrix(self.F(point_to_disk(Z))))


def inverse_double_cayley(F, n=None) -> HalfplaneEvaluator:
    """Inverse of ``double_cayley``; ``F`` is any callable on disk points."""
    if n is None:
        n = F.shape.n
    return HalfplaneEvaluator(F, tuple(n))

"""Points, shapes and operator tuples on products of matrix halfplanes / disks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import numkit as nk
from .errors import NotCommuting, ShapeMismatch

OMEGA_GRID = 720
OMEGA_MARGIN = 1e-9


@dataclass(frozen=True)
class Shape:
    """Dimensions of a pencil: variable sizes ``n``, multiplicities ``m``,
    value space dimension ``u`` and auxiliary dimension ``h``."""

    n: tuple[int, ...]
    m: tuple[int, ...]
    u: int
    h: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        object.__setattr__(self, "m", tuple(int(v) for v in self.m))
        if len(self.n) < 1:
            raise ShapeMismatch("need at least one variable")
        if len(self.m) != len(self.n):
            raise ShapeMismatch(f"n has {len(self.n)} entries but m has {len(self.m)}")
        if any(v < 1 for v in self.n) or self.u < 1:
            raise ShapeMismatch("variable sizes and u must be positive")
        if any(v < 0 for v in self.m) or self.h < 0:
            raise ShapeMismatch("m and h must be non-negative")

    @property
    def N(self) -> int:
        return len(self.n)

    @property
    def total_n(self) -> int:
        return sum(self.n)


@dataclass(frozen=True)
class MatrixPoint:
    """A tuple ``(Z_1, ..., Z_N)`` of square complex matrices."""

    Z: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(nk.as_cmatrix(z, name=f"Z[{k}]") for k, z in enumerate(self.Z))
        for k, z in enumerate(mats):
            if z.shape[0] != z.shape[1]:
                raise ShapeMismatch(f"Z[{k}] is not square: {z.shape}")
            z.setflags(write=False)
        object.__setattr__(self, "Z", mats)

    @classmethod
    def of(cls, *mats) -> "MatrixPoint":
        return cls(tuple(mats))

    @classmethod
    def identity(cls, n: Sequence[int]) -> "MatrixPoint":
        return cls(tuple(np.eye(k, dtype=complex) for k in n))

    @classmethod
    def zero(cls, n: Sequence[int]) -> "MatrixPoint":
        return cls(tuple(np.zeros((k, k), dtype=complex) for k in n))

    @property
    def n(self) -> tuple[int, ...]:
        return tuple(z.shape[0] for z in self.Z)

    def __len__(self) -> int:
        return len(self.Z)

    def __iter__(self):
        return iter(self.Z)

    def __getitem__(self, k: int) -> np.ndarray:
        return self.Z[k]

    def scale(self, lam: complex) -> "MatrixPoint":
        return MatrixPoint(tuple(lam * z for z in self.Z))

    def adjoint(self) -> "MatrixPoint":
        return MatrixPoint(tuple(nk.adj(z) for z in self.Z))

    def conj(self) -> "MatrixPoint":
        """Entrywise complex conjugate of every component."""
        return MatrixPoint(tuple(z.conj() for z in self.Z))

    def block_diag(self) -> np.ndarray:
        """``diag(Z_1, ..., Z_N)``."""
        return nk.block_diag(*self.Z)

    def check_shape(self, n: Sequence[int]) -> None:
        if self.n != tuple(n):
            raise ShapeMismatch(f"point has sizes {self.n}, expected {tuple(n)}")

    def halfplane_margin(self) -> float:
        return min(nk.min_eig_herm(z) for z in self.Z)

    def in_halfplane(self, margin: float = 0.0) -> bool:
        return self.halfplane_margin() > margin

    def in_disk(self) -> bool:
        return all(nk.opnorm(z) < 1.0 for z in self.Z)

    def in_omega(self) -> bool:
        return locate_omega_lambda(self) is not None


def _rotated_margin(point: MatrixPoint, theta: float) -> float:
    rot = np.exp(1j * theta)
    return point.scale(rot).halfplane_margin()


def locate_omega_lambda(point: MatrixPoint) -> complex | None:
    """A unimodular ``lam`` with ``lam * Z`` in the halfplane product, or ``None``.

    The margin ``theta -> min_k lambda_min(Re(e^{i theta} Z_k))`` is maximised on
    a uniform grid and polished by golden-section search around the best node.
    """
    thetas = np.linspace(-np.pi, np.pi, OMEGA_GRID, endpoint=False)
    # Re(e^{it} Z) = cos(t) Re(Z) + sin(t) Re(iZ), evaluated for all t at once
    values = np.full(OMEGA_GRID, np.inf)
    c, s = np.cos(thetas)[:, None, None], np.sin(thetas)[:, None, None]
    for z in point.Z:
        re = 0.5 * (z + nk.adj(z))
        re_i = 0.5j * (z - nk.adj(z))
        low = np.linalg.eigvalsh(c * re + s * re_i)[:, 0]
        values = np.minimum(values, low)
    best = int(np.argmax(values))
    step = thetas[1] - thetas[0]
    t0 = thetas[best]
    bracket = (t0 - step, t0, t0 + step)
    left = _rotated_margin(point, bracket[0])
    right = _rotated_margin(point, bracket[2])
    theta, margin = t0, values[best]
    if values[best] >= left and values[best] >= right:
        res = minimize_scalar(lambda t: -_rotated_margin(point, t),
                              bracket=bracket, method="golden", tol=1e-12)
        if -res.fun > margin:
            theta, margin = float(res.x), float(-res.fun)
    if margin <= OMEGA_MARGIN:
        return None
    return complex(np.exp(1j * theta))


@dataclass(frozen=True)
class OperatorTuple:
    """``(R_1, ..., R_N)`` where ``R_k`` is an ``n_k x n_k`` array of ``d x d`` blocks.

    ``kind`` is ``"accretive"``, ``"contractive"`` or ``None``; ``margin`` stores
    the accretivity constant ``s`` (resp. contraction slack) when known.
    """

    n: tuple[int, ...]
    d: int
    R: tuple[np.ndarray, ...]
    kind: str | None = None
    margin: float = 0.0
    commute_tol: float = field(default=1e-9, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        mats = tuple(nk.as_cmatrix(r) for r in self.R)
        if len(mats) != len(self.n):
            raise ShapeMismatch(f"{len(mats)} operators for {len(self.n)} variables")
        for k, (nk_, r) in enumerate(zip(self.n, mats)):
            if r.shape != (nk_ * self.d, nk_ * self.d):
                raise ShapeMismatch(f"R[{k}] has shape {r.shape}, expected {(nk_ * self.d,) * 2}")
            r.setflags(write=False)
        object.__setattr__(self, "R", mats)
        if self.kind not in (None, "accretive", "contractive"):
            raise ValueError(f"unknown tuple kind {self.kind!r}")

    @classmethod
    def from_point(cls, point: MatrixPoint, d: int = 1, kind: str | None = None) -> "OperatorTuple":
        """Scalar-entry tuple ``R_k = Z_k (x) I_d``."""
        return cls(point.n, d, tuple(nk.kron(z, np.eye(d)) for z in point.Z), kind=kind)

    def entry(self, k: int, i: int, j: int) -> np.ndarray:
        d = self.d
        return self.R[k][i * d:(i + 1) * d, j * d:(j + 1) * d]

    def entries(self) -> list[np.ndarray]:
        return [self.entry(k, i, j) for k, nk_ in enumerate(self.n)
                for i in range(nk_) for j in range(nk_)]

    def max_commutator(self) -> float:
        """Largest ``||XY - YX|| / (||X|| ||Y||)`` over all pairs of entry blocks."""
        if self.d == 1:
            return 0.0
        blocks = np.array(self.entries())
        norms = np.linalg.norm(blocks, ord=2, axis=(1, 2))
        keep = norms > 0.0
        blocks, norms = blocks[keep], norms[keep]
        if len(blocks) < 2:
            return 0.0
        xy = np.einsum("aij,bjk->abik", blocks, blocks)
        comm = xy - np.swapaxes(xy, 0, 1)
        cn = np.linalg.norm(comm.reshape(-1, self.d, self.d), ord=2, axis=(1, 2))
        return float(np.max(cn.reshape(len(blocks), len(blocks)) / np.outer(norms, norms)))

    def check_commuting(self) -> None:
        err = self.max_commutator()
        if err > self.commute_tol:
            raise NotCommuting(f"entry blocks fail to commute (relative commutator {err:.3g})")

    def accretive_margin(self) -> float:
        return min(nk.min_eig_herm(r) for r in self.R)

    def max_norm(self) -> float:
        return max(nk.opnorm(r) for r in self.R)

    def adjoint(self) -> "OperatorTuple":
        return OperatorTuple(self.n, self.d, tuple(nk.adj(r) for r in self.R),
                             kind=self.kind, margin=self.margin)

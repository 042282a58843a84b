"""Positive pencils and the functions they define by a Schur complement.

A pencil is given by factors ``G_k`` of size ``(n_k m_k) x (u + h)`` and

    A(Z) = sum_k G_k^* (Z_k (x) I_{m_k}) G_k = [[a(Z), b(Z)], [c(Z), d(Z)]],

split after the first ``u`` rows/columns. The associated function is
``f(Z) = a(Z) - b(Z) d(Z)^{-1} c(Z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import numkit as nk
from .domain import MatrixPoint, OperatorTuple, Shape, locate_omega_lambda
from .errors import (InconsistentSamples, MissingBasePoint, NotPsd, OutOfDomain,
                     ShapeMismatch)

PSD_TOL = 1e-9


@dataclass(frozen=True)
class PsdPencil:
    shape: Shape
    G: tuple[np.ndarray, ...]

    def __post_init__(self):
        mats = tuple(nk.as_cmatrix(g, name=f"G[{k}]") if np.size(g) else
                     np.zeros((0, self.shape.u + self.shape.h), dtype=complex)
                     for k, g in enumerate(self.G))
        s = self.shape
        if len(mats) != s.N:
            raise ShapeMismatch(f"{len(mats)} factors for {s.N} variables")
        for k, g in enumerate(mats):
            want = (s.n[k] * s.m[k], s.u + s.h)
            if g.shape != want:
                raise ShapeMismatch(f"G[{k}] has shape {g.shape}, expected {want}")
            g.setflags(write=False)
        object.__setattr__(self, "G", mats)

    @classmethod
    def from_factors(cls, G: Sequence, n: Sequence[int], u: int) -> "PsdPencil":
        """Infer ``m`` and ``h`` from the factor sizes."""
        mats = [nk.as_cmatrix(g) for g in G]
        if any(g.shape[0] % k for g, k in zip(mats, n)):
            raise ShapeMismatch("factor row counts must be multiples of n_k")
        width = {g.shape[1] for g in mats}
        if len(width) != 1:
            raise ShapeMismatch(f"factors have different widths {sorted(width)}")
        total = width.pop()
        shape = Shape(tuple(n), tuple(g.shape[0] // k for g, k in zip(mats, n)), u, total - u)
        return cls(shape, tuple(mats))

    def coefficient_sum(self) -> np.ndarray:
        """``A(E) = sum_k G_k^* G_k``."""
        return sum((nk.adj(g) @ g for g in self.G),
                   np.zeros((self.shape.u + self.shape.h,) * 2, dtype=complex))

    def entry_coefficient(self, k: int, i: int, j: int) -> np.ndarray:
        """``G_k^* (e_i e_j^* (x) I_{m_k}) G_k``, the coefficient of ``(Z_k)_{ij}``."""
        m = self.shape.m[k]
        g = self.G[k]
        return nk.adj(g[i * m:(i + 1) * m]) @ g[j * m:(j + 1) * m]


def pencil_from_scalar_coefficients(A: Sequence, u: int) -> PsdPencil:
    """Pencil ``z_1 A_1 + ... + z_N A_N`` with scalar variables and PSD ``A_j``.

    Each ``A_j`` is factored as ``G_j^* G_j`` with ``G_j`` of full row rank.
    """
    factors = []
    size = None
    for j, a in enumerate(A):
        a = nk.as_cmatrix(a, name=f"A[{j}]")
        if size is None:
            size = a.shape[0]
        if a.shape != (size, size):
            raise ShapeMismatch(f"A[{j}] has shape {a.shape}, expected {(size, size)}")
        a = nk.hermitian_part(a)
        w, v = np.linalg.eigh(a)
        scale = max(nk.opnorm(a), 1e-300)
        if w[0] < -PSD_TOL * scale:
            raise NotPsd(f"A[{j}] has eigenvalue {w[0]:.3g} < 0")
        keep = w > PSD_TOL * scale
        factors.append((np.sqrt(w[keep])[:, None] * nk.adj(v[:, keep])))
    if size is None:
        raise ShapeMismatch("need at least one coefficient")
    if not 0 < u <= size:
        raise ShapeMismatch(f"u={u} outside (0, {size}]")
    shape = Shape((1,) * len(factors), tuple(g.shape[0] for g in factors), u, size - u)
    return PsdPencil(shape, tuple(factors))


def eval_pencil(p: PsdPencil, Z: MatrixPoint) -> np.ndarray:
    """``A(Z) = sum_k G_k^* (Z_k (x) I_{m_k}) G_k``."""
    Z.check_shape(p.shape.n)
    out = np.zeros((p.shape.u + p.shape.h,) * 2, dtype=complex)
    for z, g, m in zip(Z.Z, p.G, p.shape.m):
        if m:
            out += nk.adj(g) @ nk.kron(z, np.eye(m)) @ g
    return out


def _in_domain(Z: MatrixPoint) -> tuple[MatrixPoint, complex]:
    """Rotate ``Z`` into the halfplane product; returns the rotated point and ``lam``."""
    if Z.in_halfplane():
        return Z, 1.0
    lam = locate_omega_lambda(Z)
    if lam is None:
        raise OutOfDomain("point is not in any rotated halfplane product")
    return Z.scale(lam), lam


@dataclass(frozen=True)
class BessFunction:
    """The function ``f = a - b d^{-1} c`` defined by a positive pencil."""

    pencil: PsdPencil

    @property
    def shape(self) -> Shape:
        return self.pencil.shape

    def __call__(self, Z: MatrixPoint) -> np.ndarray:
        return eval_f(self, Z)

    def phi(self, Z: MatrixPoint) -> list[np.ndarray]:
        return phi(self, Z)

    def operator(self, R: OperatorTuple) -> np.ndarray:
        return eval_f_operator(self, R)


def _eval_in_halfplane(f: BessFunction, Z: MatrixPoint) -> np.ndarray:
    A = eval_pencil(f.pencil, Z)
    if f.shape.h == 0:
        return A
    return nk.schur_complement(A, f.shape.u)


def eval_f(f: BessFunction, Z: MatrixPoint) -> np.ndarray:
    """Evaluate ``f`` on the halfplane product, extended to its rotations by
    ``f(Z) = f(lam Z) / lam``."""
    Z.check_shape(f.shape.n)
    W, lam = _in_domain(Z)
    return _eval_in_halfplane(f, W) / lam


def psi(f: BessFunction, Z: MatrixPoint) -> np.ndarray:
    """``psi(Z) = [I; -d(Z)^{-1} c(Z)]``, of size ``(u + h) x u``."""
    u, h = f.shape.u, f.shape.h
    if h == 0:
        return np.eye(u, dtype=complex)
    W, _ = _in_domain(Z)
    A = eval_pencil(f.pencil, W)
    lower = -nk.solve(A[u:, u:], A[u:, :u], "d(Z)")
    return np.vstack([np.eye(u, dtype=complex), lower])


def phi(f: BessFunction, Z: MatrixPoint) -> list[np.ndarray]:
    """``phi_k(Z) = G_k psi(Z)``; homogeneous of degree zero."""
    Z.check_shape(f.shape.n)
    ps = psi(f, Z)
    return [g @ ps for g in f.pencil.G]


def eval_f_operator(f: BessFunction, R: OperatorTuple) -> np.ndarray:
    """``f(R)`` for a tuple whose ``d x d`` entry blocks commute.

    Substitutes the blocks ``(R_k)_{ij}`` for the scalar entries ``(Z_k)_{ij}``
    in the pencil and takes the Schur complement over the ``h*d`` block.
    """
    s = f.shape
    if R.n != s.n:
        raise ShapeMismatch(f"tuple sizes {R.n} do not match {s.n}")
    R.check_commuting()
    d = R.d
    big = np.zeros(((s.u + s.h) * d,) * 2, dtype=complex)
    for k, n in enumerate(s.n):
        if s.m[k] == 0:
            continue
        for i in range(n):
            for j in range(n):
                big += np.kron(f.pencil.entry_coefficient(k, i, j), R.entry(k, i, j))
    if s.h == 0:
        return big
    return nk.schur_complement(big, s.u * d)


def decomposition_value(phis_l: Sequence[np.ndarray], Z: MatrixPoint,
                        phis_z: Sequence[np.ndarray], m: Sequence[int]) -> np.ndarray:
    """``sum_k phi_k(Lambda)^* (Z_k (x) I_{m_k}) phi_k(Z)``."""
    u = phis_z[0].shape[1]
    out = np.zeros((u, u), dtype=complex)
    for pl, z, pz, mk in zip(phis_l, Z.Z, phis_z, m):
        if mk:
            out += nk.adj(pl) @ nk.kron(z, np.eye(mk)) @ pz
    return out


def _is_base_point(Z: MatrixPoint, tol: float = 1e-12) -> bool:
    return all(np.max(np.abs(z - np.eye(z.shape[0]))) <= tol for z in Z.Z)


def reconstruct_from_phi(samples: Sequence[tuple[MatrixPoint, Sequence[np.ndarray]]],
                         shape: Shape, tol: float = 1e-8, max_checks: int = 40) -> BessFunction:
    """Build a pencil from sampled ``phi_k`` values.

    ``samples`` is a list of ``(point, [phi_1, ..., phi_N])`` and must contain
    the base point ``E = (I, ..., I)``. The samples are first checked for
    consistency: ``sum_k phi_k(Lambda)^* (Z_k (x) I) phi_k(Z)`` may not depend
    on ``Lambda``. Then ``H`` is spanned by the columns of ``phi(Lambda) - phi(E)``
    and the factor is ``G = [phi(E), basis(H)]``, split by variable.
    """
    if not samples:
        raise MissingBasePoint("no samples given")
    n, m, u = shape.n, shape.m, shape.u
    stacked = []
    base = None
    for idx, (Z, phis) in enumerate(samples):
        Z.check_shape(n)
        phis = [nk.as_cmatrix(p) if np.size(p) else np.zeros((0, u), dtype=complex) for p in phis]
        if len(phis) != len(n):
            raise ShapeMismatch(f"sample {idx} has {len(phis)} blocks, expected {len(n)}")
        for k, p in enumerate(phis):
            if p.shape != (n[k] * m[k], u):
                raise ShapeMismatch(f"sample {idx}, block {k}: shape {p.shape}, "
                                    f"expected {(n[k] * m[k], u)}")
        stacked.append(phis)
        if base is None and _is_base_point(Z):
            base = idx
    if base is None:
        raise MissingBasePoint("samples must include the point E = (I, ..., I)")

    # consistency of the decomposition on the grid
    others = [i for i in range(len(samples)) if i != base]
    if len(others) > max_checks - 1:
        picks = np.linspace(0, len(others) - 1, max_checks - 1).round().astype(int)
        others = [others[i] for i in sorted(set(picks))]
    lambdas = [base] + others
    worst = 0.0
    for zi, (Z, _) in enumerate(samples):
        ref = decomposition_value(stacked[base], Z, stacked[zi], m)
        scale = 1.0 + nk.opnorm(ref)
        for li in lambdas:
            val = decomposition_value(stacked[li], Z, stacked[zi], m)
            worst = max(worst, nk.opnorm(val - ref) / scale)
    if worst > tol:
        raise InconsistentSamples(f"decomposition depends on the second point "
                                  f"(relative residual {worst:.3g} > {tol:g})")

    col = [np.vstack(p) if p else np.zeros((0, u)) for p in stacked]
    phi_e = col[base]
    diffs = [c - phi_e for i, c in enumerate(col) if i != base]
    height = phi_e.shape[0]
    # differences of a constant phi are pure roundoff; measure rank against phi itself
    ref = max(nk.opnorm(c) for c in col)
    hbasis = (nk.orthonormal_span(diffs, height=height, reference=ref) if diffs
              else np.zeros((height, 0)))
    G = np.hstack([phi_e, hbasis])
    factors = []
    row = 0
    for k in range(len(n)):
        rows = n[k] * m[k]
        factors.append(G[row:row + rows])
        row += rows
    new_shape = Shape(n, m, u, hbasis.shape[1])
    return BessFunction(PsdPencil(new_shape, tuple(factors)))


@dataclass(frozen=True)
class Evaluator:
    """An opaque ``L(U)``-valued function of a matrix point.

    ``phi`` and ``operator`` are optional; ``m`` lists the multiplicities of the
    ``phi`` blocks when ``phi`` is supplied.
    """

    n: tuple[int, ...]
    u: int
    func: Callable[[MatrixPoint], np.ndarray]
    phi_func: Callable[[MatrixPoint], list[np.ndarray]] | None = None
    m: tuple[int, ...] | None = None
    operator_func: Callable[[OperatorTuple], np.ndarray] | None = None

    def __call__(self, Z: MatrixPoint) -> np.ndarray:
        return nk.as_cmatrix(self.func(Z))


def as_evaluator(f) -> Evaluator:
    """Wrap a ``BessFunction`` (or pass through an ``Evaluator``)."""
    if isinstance(f, Evaluator):
        return f
    if isinstance(f, BessFunction):
        return Evaluator(f.shape.n, f.shape.u, f.__call__, f.phi, f.shape.m, f.operator)
    raise TypeError(f"cannot evaluate object of type {type(f).__name__}")

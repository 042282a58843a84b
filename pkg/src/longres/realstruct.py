"""Anti-unitary involutions and realness.

An involution is stored as a unitary ``J`` and acts by ``x -> J conj(x)``; it is
never materialised as a linear map. With this convention

* a matrix ``A`` is real for ``(dom, ran)`` iff ``J_ran conj(A) == A J_dom``;
* ``f`` is real iff ``J conj(f(conj Z)) conj(J) == f(Z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import numkit as nk
from .domain import MatrixPoint
from .errors import NotInvariant, NotRealFunction, ShapeMismatch
from .pencil import as_evaluator, decomposition_value

INVOLUTION_TOL = 1e-10


@dataclass(frozen=True)
class Involution:
    J: np.ndarray

    def __post_init__(self):
        J = nk.as_cmatrix(self.J, name="J") if np.size(self.J) else np.zeros((0, 0), dtype=complex)
        n = J.shape[0]
        if J.shape != (n, n):
            raise ShapeMismatch(f"J must be square, got {J.shape}")
        if np.linalg.norm(nk.adj(J) @ J - np.eye(n)) > INVOLUTION_TOL * max(1, n):
            raise ValueError("J is not unitary")
        if np.linalg.norm(J @ J.conj() - np.eye(n)) > INVOLUTION_TOL * max(1, n):
            raise ValueError("J conj(J) != I, so x -> J conj(x) is not an involution")
        J.setflags(write=False)
        object.__setattr__(self, "J", J)

    @property
    def dim(self) -> int:
        return self.J.shape[0]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.J @ np.conj(x)

    def conjugate_operator(self, A: np.ndarray, dom: "Involution | None" = None) -> np.ndarray:
        """Matrix of ``iota_ran A iota_dom`` (a linear map)."""
        dom = self if dom is None else dom
        return self.J @ A.conj() @ dom.J.conj()


def standard_involution(n: int) -> Involution:
    """Entrywise conjugation on ``C^n``."""
    return Involution(np.eye(n, dtype=complex))


def tensor_involution(a: Involution, b: Involution) -> Involution:
    return Involution(np.kron(a.J, b.J))


def direct_sum_involution(*parts: Involution) -> Involution:
    return Involution(nk.block_diag(*(p.J for p in parts)))


def swap_involution(inv: Involution) -> Involution:
    """``[[0, iota], [iota, 0]]`` on the doubled space."""
    n = inv.dim
    J = np.zeros((2 * n, 2 * n), dtype=complex)
    J[:n, n:] = inv.J
    J[n:, :n] = inv.J
    return Involution(J)


def realness_residual(A: np.ndarray, dom: Involution, ran: Involution) -> float:
    A = nk.as_cmatrix(A)
    if A.shape != (ran.dim, dom.dim):
        raise ShapeMismatch(f"operator {A.shape} vs involutions ({ran.dim}, {dom.dim})")
    return nk.opnorm(ran.J @ A.conj() - A @ dom.J) / (1.0 + nk.opnorm(A))


def is_real_operator(A, dom: Involution, ran: Involution, tol: float = 1e-9) -> bool:
    return realness_residual(A, dom, ran) <= tol


def function_realness_residual(f, inv: Involution, points: Sequence[MatrixPoint],
                               inv_out: Involution | None = None) -> float:
    inv_out = inv if inv_out is None else inv_out
    worst = 0.0
    for Z in points:
        val = nk.as_cmatrix(f(Z))
        sharp = inv_out.J @ nk.as_cmatrix(f(Z.conj())).conj() @ inv.J.conj()
        worst = max(worst, nk.opnorm(sharp - val))
    return worst


def is_real_function(f, inv: Involution, points: Sequence[MatrixPoint], tol: float = 1e-9,
                     inv_out: Involution | None = None) -> bool:
    return function_realness_residual(f, inv, points, inv_out) <= tol


def rearrangement(n: int, m: int) -> np.ndarray:
    """Permutation ``V`` taking ``C^n (x) (M + M)`` to ``(C^n (x) M) + (C^n (x) M)``."""
    size = 2 * n * m
    V = np.zeros((size, size))
    for i in range(n):
        for s in range(2):
            for a in range(m):
                V[s * n * m + i * m + a, i * 2 * m + s * m + a] = 1.0
    return V


@dataclass(frozen=True)
class DoubledDecomposition:
    """Realified decomposition functions ``phi~_k`` on ``C^{n_k} (x) (M_k + M_k)``."""

    base_phi: Callable[[MatrixPoint], list[np.ndarray]]
    n: tuple[int, ...]
    m: tuple[int, ...]
    inv_U: Involution
    inv_M: tuple[Involution, ...]

    @property
    def doubled_m(self) -> tuple[int, ...]:
        return tuple(2 * mk for mk in self.m)

    def output_involutions(self) -> list[Involution]:
        """``iota_{n_k} (x) iota_{M~_k}`` for each ``k``."""
        return [tensor_involution(standard_involution(nk_), swap_involution(im))
                for nk_, im in zip(self.n, self.inv_M)]

    def __call__(self, Z: MatrixPoint) -> list[np.ndarray]:
        direct = self.base_phi(Z)
        mirrored = self.base_phi(Z.conj())
        out = []
        for k, (nk_, mk) in enumerate(zip(self.n, self.m)):
            J_nm = np.kron(np.eye(nk_), self.inv_M[k].J)
            flipped = J_nm @ mirrored[k].conj() @ self.inv_U.J.conj()
            V = rearrangement(nk_, mk)
            out.append(V.T @ np.vstack([direct[k], flipped]) / np.sqrt(2.0))
        return out

    def realness_residual(self, points: Sequence[MatrixPoint]) -> float:
        invs = self.output_involutions()
        worst = 0.0
        for Z in points:
            now = self(Z)
            bar = self(Z.conj())
            for k, inv in enumerate(invs):
                sharp = inv.J @ bar[k].conj() @ self.inv_U.J.conj()
                worst = max(worst, nk.opnorm(sharp - now[k]))
        return worst

    def decomposition_residual(self, f, pairs: Sequence[tuple[MatrixPoint, MatrixPoint]]) -> float:
        worst = 0.0
        for Z, L in pairs:
            fz = nk.as_cmatrix(f(Z))
            val = decomposition_value(self(L), Z, self(Z), self.doubled_m)
            worst = max(worst, nk.opnorm(val - fz) / (1.0 + nk.opnorm(fz)))
        return worst


def realify_decomposition(f, inv_U: Involution, inv_M: Sequence[Involution],
                          points: Sequence[MatrixPoint], tol: float = 1e-9) -> DoubledDecomposition:
    """Double the decomposition of an ``iota``-real function so that every block
    becomes real. ``points`` is the grid on which realness of ``f`` is validated."""
    ev = as_evaluator(f)
    if ev.phi_func is None or ev.m is None:
        raise TypeError("function has no decomposition to double")
    if len(inv_M) != len(ev.n) or any(i.dim != mk for i, mk in zip(inv_M, ev.m)):
        raise ShapeMismatch("one involution per multiplicity space is required")
    residual = function_realness_residual(ev, inv_U, points)
    if residual > tol:
        raise NotRealFunction(f"function is not real (residual {residual:.3g})")
    return DoubledDecomposition(ev.phi_func, tuple(ev.n), tuple(ev.m), inv_U, tuple(inv_M))


def restrict_involution(inv: Involution, basis: np.ndarray, tol: float = 1e-9) -> Involution:
    """Coordinates of ``inv`` restricted to an invariant subspace with orthonormal ``basis``."""
    if basis.shape[1] == 0:
        return Involution(np.zeros((0, 0)))
    image = inv.J @ basis.conj()
    loss = nk.opnorm(image - basis @ (nk.adj(basis) @ image))
    if loss > tol:
        raise NotInvariant(f"subspace is not invariant (loss {loss:.3g})")
    return Involution(nk.nearest_isometry(nk.adj(basis) @ image))


def _fixed_basis(space: np.ndarray, inv: Involution, tol: float) -> np.ndarray:
    """Orthonormal basis of ``span(space)`` made of ``iota``-fixed vectors."""
    n, dim = space.shape
    out = np.zeros((n, dim), dtype=complex)
    k = 0
    candidates = [space[:, j] for j in range(dim)] + [1j * space[:, j] for j in range(dim)]
    for c in candidates:
        if k == dim:
            break
        v = 0.5 * (c + inv.apply(c))
        for _ in range(2):
            # coefficients between fixed vectors are real
            v = v - out[:, :k] @ np.real(nk.adj(out[:, :k]) @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-6:
            out[:, k] = v / nv
            k += 1
    if k != dim:
        raise NotInvariant(f"fixed subspace has real dimension {k}, need {dim}")
    return out


def _invariance_loss(basis: np.ndarray, inv: Involution) -> float:
    if basis.shape[1] == 0:
        return 0.0
    image = inv.J @ basis.conj()
    return nk.opnorm(image - basis @ (nk.adj(basis) @ image))


def real_unitary_completion(dom_basis, ran_basis, action, inv: Involution,
                            tol: float = 1e-9) -> np.ndarray:
    """Unitary ``U`` with ``U dom_basis = ran_basis action`` that also commutes
    with ``inv``; the complement of the domain is sent to the complement of the
    image by matching ``inv``-fixed orthonormal bases."""
    dom = np.asarray(dom_basis, dtype=complex)
    img = np.asarray(ran_basis, dtype=complex) @ np.asarray(action, dtype=complex).reshape(
        ran_basis.shape[1], dom.shape[1])
    if dom.shape[0] != inv.dim or img.shape[0] != inv.dim:
        raise ShapeMismatch("involution does not act on the ambient space")
    for name, b in (("domain", dom), ("image", img)):
        loss = _invariance_loss(b, inv)
        if loss > tol:
            raise NotInvariant(f"{name} span is not invariant (loss {loss:.3g})")
    dom_c = _fixed_basis(nk.complement_basis(dom), inv, tol)
    img_c = _fixed_basis(nk.complement_basis(img), inv, tol)
    return img @ nk.adj(dom) + img_c @ nk.adj(dom_c)


def check_real_colligation(c, inv_X: Involution, inv_U: Involution, tol: float = 1e-9) -> bool:
    """Realness of a colligation matrix for ``(iota_{n_1+...+n_N} (x) iota_X) + iota_U``."""
    big = colligation_involution(c.total_n, inv_X, inv_U)
    return is_real_operator(c.U, big, big, tol)


def colligation_involution(total_n: int, inv_X: Involution, inv_U: Involution) -> Involution:
    return direct_sum_involution(tensor_involution(standard_involution(total_n), inv_X), inv_U)

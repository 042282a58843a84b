"""Unitary colligations, their transfer functions and the lurking-isometry build.

A colligation on ``(C^S (x) C^x) + C^u`` with ``S = n_1 + ... + n_N`` is a
unitary ``U = [[A, B], [C, D]]``; its transfer function is

    F(W) = D + C (P(W) (x) I_x) (I - A (P(W) (x) I_x))^{-1} B,
    P(W) = diag(W_1, ..., W_N).

State coordinates are ordered ``s * x + c`` for row ``s`` of ``P`` and
internal index ``c``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numkit as nk
from .cayley import point_to_halfplane, value_to_disk
from .domain import MatrixPoint, OperatorTuple, Shape
from .errors import (IdentityViolated, InconsistentSamples, IsometryDefect, NotSelfAdjoint,
                     ShapeMismatch, SpectrumAtOne)
from .pencil import BessFunction, reconstruct_from_phi
from .realstruct import Involution, real_unitary_completion
from .report import Report

UNITARY_TOL = 1e-8
IDENTITY_TOL = 1e-8
ISOMETRY_TOL = 1e-7


@dataclass(frozen=True)
class Colligation:
    n: tuple[int, ...]
    x: int
    u: int
    U: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(int(v) for v in self.n))
        U = nk.as_cmatrix(self.U, name="U").copy()
        size = self.total_n * self.x + self.u
        if U.shape != (size, size):
            raise ShapeMismatch(f"U has shape {U.shape}, expected {(size, size)}")
        if self.unitarity_residual_of(U) > UNITARY_TOL:
            raise IsometryDefect(f"U is not unitary (residual {self.unitarity_residual_of(U):.3g})")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    @staticmethod
    def unitarity_residual_of(U: np.ndarray) -> float:
        return nk.opnorm(nk.adj(U) @ U - np.eye(U.shape[0]))

    @property
    def total_n(self) -> int:
        return sum(self.n)

    @property
    def state_dim(self) -> int:
        return self.total_n * self.x

    @property
    def shape(self) -> Shape:
        """Shape of the pencil recovered from this colligation (``m_k = x``)."""
        return Shape(self.n, (self.x,) * len(self.n), self.u, 0)

    @property
    def A(self) -> np.ndarray:
        return self.U[:self.state_dim, :self.state_dim]

    @property
    def B(self) -> np.ndarray:
        return self.U[:self.state_dim, self.state_dim:]

    @property
    def C(self) -> np.ndarray:
        return self.U[self.state_dim:, :self.state_dim]

    @property
    def D(self) -> np.ndarray:
        return self.U[self.state_dim:, self.state_dim:]

    def unitarity_residual(self) -> float:
        return self.unitarity_residual_of(self.U)

    def selfadjoint_residual(self) -> float:
        return nk.opnorm(self.U - nk.adj(self.U))

    @property
    def selfadjoint(self) -> bool:
        return self.selfadjoint_residual() <= UNITARY_TOL


def _state_operator(c: Colligation, W: MatrixPoint) -> np.ndarray:
    W.check_shape(c.n)
    return nk.kron(W.block_diag(), np.eye(c.x))


def transfer_eval(c: Colligation, W: MatrixPoint) -> np.ndarray:
    PW = _state_operator(c, W)
    inner = np.eye(c.state_dim) - c.A @ PW
    return c.D + c.C @ PW @ nk.solve(inner, c.B, "I - A P(W)")


def transfer_eval_operator(c: Colligation, T: OperatorTuple) -> np.ndarray:
    """``F(T)`` with every entry ``(W_k)_{ij}`` replaced by the ``d x d`` block ``(T_k)_{ij}``."""
    if T.n != c.n:
        raise ShapeMismatch(f"tuple sizes {T.n} do not match {c.n}")
    T.check_commuting()
    d, x, S = T.d, c.x, c.total_n
    PT = np.zeros((S * x * d,) * 2, dtype=complex)
    off = 0
    for k, nk_ in enumerate(c.n):
        for i in range(nk_):
            for j in range(nk_):
                unit = np.zeros((S, S))
                unit[off + i, off + j] = 1.0
                PT += np.kron(np.kron(unit, np.eye(x)), T.entry(k, i, j))
        off += nk_
    eye_d = np.eye(d)
    A, B = np.kron(c.A, eye_d), np.kron(c.B, eye_d)
    C, D = np.kron(c.C, eye_d), np.kron(c.D, eye_d)
    inner = np.eye(S * x * d) - A @ PT
    return D + C @ PT @ nk.solve(inner, B, "I - A P(T)")


def check_spectrum_condition(c: Colligation) -> bool:
    """True iff ``1`` is not in the spectrum of ``F(0) = D`` (with a relative margin)."""
    D = c.D
    smin = np.linalg.svd(np.eye(c.u) - D, compute_uv=False)[-1]
    return bool(smin > 1e-9 * (1.0 + nk.opnorm(D)))


# -- kernel samples ---------------------------------------------------------

@dataclass(frozen=True)
class KernelSamples:
    """Values ``F(W)`` with right (and optionally left) kernel factors.

    ``HR[i]`` has shape ``(S x) x u``; ``HL[i]`` has shape ``u x (S x)``.
    """

    points: tuple[MatrixPoint, ...]
    F: tuple[np.ndarray, ...]
    HR: tuple[np.ndarray, ...]
    n: tuple[int, ...]
    x: int
    u: int
    HL: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        cnt = len(self.points)
        if len(self.F) != cnt or len(self.HR) != cnt or (self.HL is not None and len(self.HL) != cnt):
            raise ShapeMismatch("sample lists have different lengths")
        sx = sum(self.n) * self.x
        for i, W in enumerate(self.points):
            W.check_shape(self.n)
            if self.F[i].shape != (self.u, self.u) or self.HR[i].shape != (sx, self.u):
                raise ShapeMismatch(f"sample {i} has inconsistent F/HR shapes")
            if self.HL is not None and self.HL[i].shape != (self.u, sx):
                raise ShapeMismatch(f"sample {i} has HL of shape {self.HL[i].shape}")

    def __len__(self) -> int:
        return len(self.points)


def _embed(blocks: Sequence[np.ndarray], n: Sequence[int], m: Sequence[int]) -> np.ndarray:
    """Place ``theta_k`` (rows ``i m_k + a``) into ``C^S (x) (M_1 + ... + M_N)``."""
    x = sum(m)
    u = blocks[0].shape[1]
    out = np.zeros((sum(n) * x, u), dtype=complex)
    row0, moff = 0, 0
    for blk, nk_, mk in zip(blocks, n, m):
        for i in range(nk_):
            start = (row0 + i) * x + moff
            out[start:start + mk] = blk[i * mk:(i + 1) * mk]
        row0 += nk_
        moff += mk
    return out


def theta_from_pencil(f: BessFunction, W: MatrixPoint) -> list[np.ndarray]:
    """``theta_k(W) = ((I - W_k)^{-1} (x) I_{m_k}) phi_k(Z(W)) (I - F(W))``."""
    W.check_shape(f.shape.n)
    Z = point_to_halfplane(W)
    Fw = value_to_disk(f(Z))
    right = np.eye(f.shape.u) - Fw
    out = []
    for w, ph, mk in zip(W.Z, f.phi(Z), f.shape.m):
        resolvent = nk.solve(np.eye(w.shape[0]) - w, np.eye(w.shape[0]), "I - W_k")
        out.append(nk.kron(resolvent, np.eye(mk)) @ ph @ right)
    return out


def _contains(points: Sequence[MatrixPoint], W: MatrixPoint, tol: float = 1e-12) -> bool:
    return any(all(np.max(np.abs(a - b), initial=0.0) <= tol for a, b in zip(P.Z, W.Z))
               for P in points)


def close_grid(points: Sequence[MatrixPoint], adjoint: bool = False,
               conjugate: bool = False) -> list[MatrixPoint]:
    """Add ``W*`` and/or ``conj(W)`` for every point, skipping duplicates."""
    out = list(points)
    maps = []
    if adjoint:
        maps.append(MatrixPoint.adjoint)
    if conjugate:
        maps.append(MatrixPoint.conj)
    changed = True
    while changed:
        changed = False
        for W in list(out):
            for op in maps:
                V = op(W)
                if not _contains(out, V):
                    out.append(V)
                    changed = True
    return out


def kernel_samples_from_pencil(f: BessFunction, points: Sequence[MatrixPoint],
                               symmetric: bool = False, real: bool = False) -> KernelSamples:
    """Samples of ``F = double_cayley(f)`` with ``H^R`` built from ``theta``.

    With ``symmetric`` the grid is closed under ``W -> W*`` and ``H^L(W) =
    H^R(W*)^*`` is attached; with ``real`` it is also closed under conjugation.
    """
    s = f.shape
    grid = close_grid(points, adjoint=symmetric, conjugate=real)
    F, HR, HL = [], [], []
    for W in grid:
        if not W.in_disk():
            raise ValueError("sample points must lie in the open disk product")
        F.append(value_to_disk(f(point_to_halfplane(W))))
        HR.append(_embed(theta_from_pencil(f, W), s.n, s.m))
        if symmetric:
            HL.append(nk.adj(_embed(theta_from_pencil(f, W.adjoint()), s.n, s.m)))
    return KernelSamples(tuple(grid), tuple(F), tuple(HR), s.n, sum(s.m), s.u,
                         tuple(HL) if symmetric else None)


def pick_samples(points: Sequence[complex], values: Sequence[complex]) -> KernelSamples:
    """Single-variable scalar samples with ``H^R`` from the Pick matrix
    ``P_ij = (1 - conj(F_i) F_j) / (1 - conj(w_i) w_j)``.

    Uses a Cholesky factor when ``P`` is positive definite and an eigenvalue
    factor otherwise; raises ``IdentityViolated`` if ``P`` is not PSD.
    """
    w = np.asarray(points, dtype=complex)
    F = np.asarray(values, dtype=complex)
    if w.shape != F.shape or w.ndim != 1:
        raise ShapeMismatch("points and values must be equal-length 1-D sequences")
    if np.any(np.abs(w) >= 1):
        raise ValueError("Pick points must lie in the open unit disk")
    P = (1 - np.conj(F)[:, None] * F[None, :]) / (1 - np.conj(w)[:, None] * w[None, :])
    P = nk.hermitian_part(P)
    try:
        H = nk.adj(np.linalg.cholesky(P))
    except np.linalg.LinAlgError:
        ev, vec = np.linalg.eigh(P)
        scale = max(abs(ev[-1]), 1.0)
        if ev[0] < -1e-9 * scale:
            raise IdentityViolated(f"Pick matrix is not PSD (eigenvalue {ev[0]:.3g})")
        keep = ev > 1e-12 * scale
        H = np.sqrt(ev[keep])[:, None] * nk.adj(vec[:, keep])
    x = H.shape[0]
    pts = tuple(MatrixPoint.of(np.array([[v]])) for v in w)
    return KernelSamples(pts, tuple(np.array([[v]]) for v in F),
                         tuple(H[:, j:j + 1] for j in range(len(w))), (1,), x, 1)


# -- generators of the isometry --------------------------------------------

def _generators(s: KernelSamples) -> tuple[np.ndarray, np.ndarray, int]:
    """Columns of the domain and range generators; also the count of right ones."""
    eye = np.eye(s.u)
    dom, ran = [], []
    for W, F, H in zip(s.points, s.F, s.HR):
        PW = nk.kron(W.block_diag(), np.eye(s.x))
        dom.append(np.vstack([PW @ H, eye]))
        ran.append(np.vstack([H, F]))
    right = len(dom) * s.u
    if s.HL is not None:
        for W, F, H in zip(s.points, s.F, s.HL):
            PWs = nk.kron(nk.adj(W.block_diag()), np.eye(s.x))
            dom.append(np.vstack([nk.adj(H), nk.adj(F)]))
            ran.append(np.vstack([PWs @ nk.adj(H), eye]))
    return np.hstack(dom), np.hstack(ran), right


def verify_agler_identity(s: KernelSamples, tol: float = 1e-9) -> Report:
    """Residuals of the kernel identities over all pairs of samples.

    The right identity is ``I - F(o)^* F(w) = H^R(o)^* ((I - P(o)^* P(w)) (x) I) H^R(w)``;
    with ``H^L`` the left and mixed identities are checked as well. All of them
    are entries of ``Dgen^* Dgen - Rgen^* Rgen``. Residuals are divided by
    ``1 + max ||H||^2``.
    """
    dom, ran, r = _generators(s)
    scale = 1.0 + max(nk.opnorm(h) for h in s.HR) ** 2
    if s.HL is not None:
        scale = max(scale, 1.0 + max(nk.opnorm(h) for h in s.HL) ** 2)
    diff = nk.gram(dom) - nk.gram(ran)
    rep = Report()
    rep.add("right_identity", nk.opnorm(diff[:r, :r]) / scale, tol)
    if s.HL is not None:
        rep.add("left_identity", nk.opnorm(diff[r:, r:]) / scale, tol)
        rep.add("mixed_identity", nk.opnorm(diff[:r, r:]) / scale, tol)
    return rep


def _check_symmetric_grid(s: KernelSamples, tol: float = 1e-8) -> None:
    if s.HL is None:
        raise InconsistentSamples("symmetric construction needs left factors H^L")
    for W, F in zip(s.points, s.F):
        hit = [j for j, V in enumerate(s.points)
               if all(np.max(np.abs(a - nk.adj(b)), initial=0.0) <= 1e-12 for a, b in zip(V.Z, W.Z))]
        if not hit:
            raise InconsistentSamples("sample grid is not closed under W -> W*")
        err = nk.opnorm(s.F[hit[0]] - nk.adj(F))
        if err > tol * (1.0 + nk.opnorm(F)):
            raise InconsistentSamples(f"F(W*) differs from F(W)* by {err:.3g}")


def lurking_isometry(s: KernelSamples, symmetric: bool = False,
                     involution: Involution | None = None) -> Colligation:
    """Unitary colligation whose transfer function interpolates the samples.

    The map ``[(P(w) (x) I) H^R(w); I] -> [H^R(w); F(w)]`` (and, when ``H^L`` is
    present, ``[H^L(o)^*; F(o)^*] -> [(P(o)^* (x) I) H^L(o)^*; I]``) is isometric
    by the kernel identities; it is extended to a unitary on the whole space.
    The spaces are finite, so domain and range defects always agree and no
    padding is needed.

    ``symmetric`` returns a self-adjoint unitary; it requires ``H^L`` and a grid
    closed under adjoints. ``involution`` (acting on the full space) requests a
    completion that commutes with it.
    """
    rep = verify_agler_identity(s, IDENTITY_TOL)
    if not rep.passed:
        worst = max(c.residual for c in rep.checks)
        raise IdentityViolated(f"kernel identity fails on the samples (residual {worst:.3g})")
    if symmetric:
        _check_symmetric_grid(s)
    dom, ran, _ = _generators(s)
    size = dom.shape[0]

    left, sv, vh = np.linalg.svd(dom, full_matrices=False)
    rank = int(np.sum(sv > nk.SPAN_TOL * sv[0])) if sv.size else 0
    q_dom = left[:, :rank]
    image = ran @ nk.adj(vh[:rank]) / sv[:rank]
    q_img = nk.nearest_isometry(image)

    if symmetric:
        Q = nk.orthonormal_span(np.hstack([q_dom, q_img]))
        if Q.shape[1] != rank:
            raise IsometryDefect(f"domain and range spans differ ({Q.shape[1]} vs {rank})")
        M = (nk.adj(Q) @ q_img) @ nk.adj(nk.adj(Q) @ q_dom)
        M = nk.nearest_isometry(nk.hermitian_part(M))
        dom_b, ran_b, action = Q, Q, M
    else:
        dom_b, ran_b, action = q_dom, q_img, np.eye(rank)

    if involution is not None:
        if involution.dim != size:
            raise ShapeMismatch(f"involution acts on dimension {involution.dim}, need {size}")
        U = real_unitary_completion(dom_b, ran_b, action, involution)
    else:
        U = nk.unitary_completion(dom_b, ran_b, action)
    if symmetric:
        U = 0.5 * (U + nk.adj(U))

    scale = 1.0 + nk.opnorm(ran)
    miss = nk.opnorm(U @ dom - ran) / scale
    if miss > ISOMETRY_TOL:
        raise IsometryDefect(f"completed unitary misses the generators by {miss:.3g}")
    return Colligation(s.n, s.x, s.u, U)


# -- back to the halfplane --------------------------------------------------

def _phi_from_colligation(c: Colligation, Z: MatrixPoint, W: MatrixPoint) -> tuple[list[np.ndarray], np.ndarray]:
    PW = _state_operator(c, W)
    K = nk.solve(np.eye(c.state_dim) - c.A @ PW, c.B, "I - A P(W)")
    Fw = c.D + c.C @ PW @ K
    xi = np.sqrt(2.0) * nk.rsolve(K, np.eye(c.u) - Fw, "I - F(W)")
    phis = []
    row = 0
    for z, nk_ in zip(Z.Z, c.n):
        block = xi[row * c.x:(row + nk_) * c.x]
        res = nk.solve(z + np.eye(nk_), np.eye(nk_), "Z_k + I")
        phis.append(np.sqrt(2.0) * nk.kron(res, np.eye(c.x)) @ block)
        row += nk_
    return phis, Fw


def bess_from_colligation(c: Colligation, seed: int = 0, tol: float = 1e-6) -> BessFunction:
    """Recover a pencil function ``f`` with ``double_cayley(f) = F_c`` from a
    self-adjoint unitary colligation with ``1`` outside the spectrum of ``D``.

    ``phi`` is sampled at ``W = 0`` and ``4 (u + S x)`` random disk points, fed
    to ``reconstruct_from_phi`` and validated at as many held-out points.
    """
    from .membership import random_disk_point, stream

    if c.selfadjoint_residual() > UNITARY_TOL:
        raise NotSelfAdjoint(f"U differs from U* by {c.selfadjoint_residual():.3g}")
    if not check_spectrum_condition(c):
        raise SpectrumAtOne("1 is in the spectrum of F(0) = D")
    count = 4 * (c.u + c.state_dim)
    grid = [MatrixPoint.zero(c.n)] + [random_disk_point(c.n, stream(seed, 11, i))
                                      for i in range(count)]
    samples = []
    for W in grid:
        Z = point_to_halfplane(W)
        phis, _ = _phi_from_colligation(c, Z, W)
        samples.append((Z, phis))
    f = reconstruct_from_phi(samples, c.shape)

    worst = 0.0
    for i in range(count):
        W = random_disk_point(c.n, stream(seed, 12, i))
        want = transfer_eval(c, W)
        got = value_to_disk(f(point_to_halfplane(W)))
        worst = max(worst, nk.opnorm(got - want) / (1.0 + nk.opnorm(want)))
    if worst > tol:
        raise InconsistentSamples(f"recovered function misses the transfer function by {worst:.3g}")
    return f

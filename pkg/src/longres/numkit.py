"""Dense complex linear algebra used throughout the package.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``.
Functions never mutate their inputs.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DefectMismatch, ShapeMismatch, SingularBlock

# Condition number above which a block is treated as singular.
SINGULAR_COND = 1e12
# Relative singular-value cutoff for numerical spans.
SPAN_TOL = 1e-9


def as_cmatrix(a, *, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a finite 2-D complex array (scalars become 1x1)."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ShapeMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def adj(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def opnorm(a: np.ndarray) -> float:
    """Spectral norm; 0 for empty matrices."""
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def kron(a, b) -> np.ndarray:
    """Kronecker product with ``kron(A, B)[i*p + k, j*q + l] = A[i, j] * B[k, l]``."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=complex)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def check_invertible(m: np.ndarray, what: str = "block") -> None:
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch(f"{what} is not square: {m.shape}")
    if m.size == 0:
        return
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise SingularBlock(f"{what} is numerically singular (cond={cond:.3g})")


def solve(m: np.ndarray, rhs: np.ndarray, what: str = "block") -> np.ndarray:
    """``m^{-1} rhs`` with a singularity guard."""
    check_invertible(m, what)
    return np.linalg.solve(m, rhs)


def rsolve(lhs: np.ndarray, m: np.ndarray, what: str = "block") -> np.ndarray:
    """``lhs m^{-1}`` with a singularity guard."""
    check_invertible(m, what)
    return np.linalg.solve(m.T, lhs.T).T


def schur_complement(m, top: int) -> np.ndarray:
    """Return ``M11 - M12 M22^{-1} M21`` for the split of ``m`` at index ``top``."""
    m = as_cmatrix(m)
    n = m.shape[0]
    if m.shape[1] != n:
        raise ShapeMismatch(f"matrix must be square, got {m.shape}")
    if not 0 < top < n:
        raise ShapeMismatch(f"split index {top} outside (0, {n})")
    m11, m12 = m[:top, :top], m[:top, top:]
    m21, m22 = m[top:, :top], m[top:, top:]
    return m11 - m12 @ solve(m22, m21, "bottom-right block")


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + adj(a))


def min_eig_herm(a) -> float:
    """Smallest eigenvalue of the Hermitian part ``(A + A*)/2``."""
    a = as_cmatrix(a)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"matrix must be square, got {a.shape}")
    return float(np.linalg.eigvalsh(hermitian_part(a))[0])


def orthonormal_span(vectors: Sequence[np.ndarray] | np.ndarray, tol: float = SPAN_TOL,
                     height: int | None = None, reference: float = 0.0) -> np.ndarray:
    """Orthonormal basis (as columns) for the span of the given columns.

    ``vectors`` is either a 2-D array whose columns are the vectors or a list
    of column blocks. Singular values below ``tol * max(sigma_max, reference)``
    are dropped; ``reference`` lets callers measure rank against the size of
    the data the vectors were computed from rather than the vectors themselves.
    """
    if isinstance(vectors, np.ndarray):
        mat = as_cmatrix(vectors)
    else:
        blocks = [as_cmatrix(v) for v in vectors]
        if not blocks:
            return np.zeros((height or 0, 0), dtype=complex)
        heights = {b.shape[0] for b in blocks}
        if len(heights) != 1:
            raise ShapeMismatch(f"vectors of unequal height: {sorted(heights)}")
        mat = np.hstack(blocks)
    if mat.shape[1] == 0:
        return np.zeros((mat.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(mat, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((mat.shape[0], 0), dtype=complex)
    rank = int(np.sum(s > tol * max(s[0], reference)))
    return u[:, :rank]


def complement_basis(basis: np.ndarray, tol: float = SPAN_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of ``span(basis)``.

    Deterministic: standard basis vectors are projected onto the complement in
    order and Gram-Schmidt'ed; vectors that vanish after projection are skipped.
    """
    n, r = basis.shape
    need = n - r
    out = np.zeros((n, need), dtype=complex)
    k = 0
    for j in range(n):
        if k == need:
            break
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        # twice is enough (Kahan); keeps the result orthogonal to 1e-15
        for _ in range(2):
            v = v - basis @ (adj(basis) @ v)
            v = v - out[:, :k] @ (adj(out[:, :k]) @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            out[:, k] = v / nv
            k += 1
    if k != need:
        raise DefectMismatch(f"could only build {k} of {need} complement vectors")
    return out


def nearest_isometry(a: np.ndarray) -> np.ndarray:
    """Polar factor of ``a``: the isometry closest to it in every unitarily invariant norm."""
    if a.size == 0:
        return a.copy()
    u, _, vh = np.linalg.svd(a, full_matrices=False)
    return u @ vh


def unitary_completion(dom_basis, ran_basis, action, pad: int = 0,
                       tol: float = SPAN_TOL) -> np.ndarray:
    """Extend a partial isometry to a unitary on the (padded) ambient space.

    Returns ``U`` with ``U @ dom_basis == ran_basis @ action``. ``dom_basis`` and
    ``ran_basis`` have orthonormal columns; ``action`` maps dom-coordinates to
    ran-coordinates isometrically. ``pad`` extra zero dimensions are appended to
    both ambient spaces before completing. On the orthogonal complement, the
    i-th deterministic complement vector of the domain is sent to the i-th
    complement vector of the image.
    """
    dom_basis = np.asarray(dom_basis, dtype=complex)
    ran_basis = np.asarray(ran_basis, dtype=complex)
    action = np.asarray(action, dtype=complex).reshape(ran_basis.shape[1], dom_basis.shape[1])
    if pad < 0:
        raise ValueError("pad must be non-negative")
    nd = dom_basis.shape[0] + pad
    nr = ran_basis.shape[0] + pad
    dom = np.vstack([dom_basis, np.zeros((pad, dom_basis.shape[1]), dtype=complex)])
    img = np.vstack([ran_basis @ action, np.zeros((pad, dom_basis.shape[1]), dtype=complex)])
    r = dom.shape[1]
    if nd - r != nr - r:
        raise DefectMismatch(
            f"defect dimensions differ: {nd - r} (domain) vs {nr - r} (range)")
    if r and np.linalg.norm(adj(img) @ img - np.eye(r)) > 1e-8:
        raise DefectMismatch("prescribed action is not isometric")
    dom_c = complement_basis(dom, tol)
    img_c = complement_basis(img, tol)
    return img @ adj(dom) + img_c @ adj(dom_c)


def defect_padding(p: int, q: int, x: int, e: int, e_star: int, r: int) -> int:
    """Smallest ``k >= 0`` making the complement dimensions of an ``r``-dimensional
    subspace of ``(C^p (x) C^{x+k}) + C^e`` and ``(C^q (x) C^{x+k}) + C^{e_star}``
    agree; raises when no finite padding works."""
    dom_def = p * x + e - r
    ran_def = q * x + e_star - r
    if dom_def == ran_def:
        return 0
    if p == q or (ran_def - dom_def) % (p - q) != 0 or (ran_def - dom_def) // (p - q) < 0:
        raise DefectMismatch(f"cannot balance defects {dom_def} and {ran_def}")
    return (ran_def - dom_def) // (p - q)


def gram(vectors: np.ndarray) -> np.ndarray:
    return adj(vectors) @ vectors


def stack_columns(blocks: Iterable[np.ndarray]) -> np.ndarray:
    return np.hstack(list(blocks))

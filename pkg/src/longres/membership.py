"""Randomised membership tests and generators of valid test tuples.

A function of the class is homogeneous of degree one, symmetric under
``Z -> Z*`` and has accretive values on every commuting accretive tuple. None
of this is finitely checkable, so the checks sample. Every random draw uses its
own generator derived from ``(seed, check, index)``; the report therefore does
not depend on the order in which samples are evaluated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import numkit as nk
from .cayley import inverse_tuple_cayley
from .domain import MatrixPoint, OperatorTuple, locate_omega_lambda
from .pencil import as_evaluator, decomposition_value
from .report import Report
from .serialize import encode_point

__all__ = [
    "SampleConfig", "stream", "random_halfplane_point", "random_disk_point",
    "random_commuting_accretive_tuple", "random_commuting_contraction_tuple",
    "check_membership", "locate_omega_lambda",
]

HALFPLANE_MARGIN = 0.1


@dataclass(frozen=True)
class SampleConfig:
    seed: int = 0
    num_points: int = 20
    num_tuples: int = 100
    carrier_dims: tuple[int, ...] = (1, 2, 4)
    margin: float = 0.1
    identity_tol: float = 1e-9
    positivity_tol: float = 1e-8

    def __post_init__(self):
        if any(d < 1 for d in self.carrier_dims) or not self.carrier_dims:
            raise ValueError("carrier dimensions must be >= 1")
        if self.margin <= 0:
            raise ValueError("margin must be positive")


def stream(seed: int, *keys: int) -> np.random.Generator:
    """Independent generator for the sample identified by ``keys``."""
    return np.random.default_rng([int(seed), *map(int, keys)])


def _cnormal(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_halfplane_point(n: Sequence[int], rng: np.random.Generator,
                           margin: float = HALFPLANE_MARGIN) -> MatrixPoint:
    """Random point with ``lambda_min(Re Z_k) >= margin`` for every ``k``."""
    mats = []
    for k in n:
        x = _cnormal(rng, k, k)
        shift = margin - nk.min_eig_herm(x) + rng.exponential(1.0)
        mats.append(x + shift * np.eye(k))
    return MatrixPoint(tuple(mats))


def random_disk_point(n: Sequence[int], rng: np.random.Generator,
                      radius: float = 0.9) -> MatrixPoint:
    """Random point with ``||W_k|| <= radius`` for every ``k``."""
    mats = []
    for k in n:
        x = _cnormal(rng, k, k)
        mats.append(x * (radius * rng.uniform(0.05, 1.0) / nk.opnorm(x)))
    return MatrixPoint(tuple(mats))


def random_commuting_accretive_tuple(n: Sequence[int], d: int, s: float,
                                     rng: np.random.Generator) -> OperatorTuple:
    """Every ``d x d`` entry block is a cubic polynomial in one shared, generally
    non-normal matrix, so all blocks commute; each ``R_k`` is then shifted by a
    multiple of the identity until ``lambda_min(Re R_k) >= s``."""
    gen = _cnormal(rng, d, d)
    gen = gen / max(nk.opnorm(gen), 1e-12)
    powers = [np.eye(d, dtype=complex)]
    for _ in range(3):
        powers.append(powers[-1] @ gen)
    mats = []
    for k in n:
        r = np.zeros((k * d, k * d), dtype=complex)
        for i in range(k):
            for j in range(k):
                coef = _cnormal(rng, 4)
                r[i * d:(i + 1) * d, j * d:(j + 1) * d] = sum(c * p for c, p in zip(coef, powers))
        low = nk.min_eig_herm(r)
        if low < s:
            r = r + (s - low) * np.eye(k * d)
        mats.append(r)
    return OperatorTuple(tuple(n), d, tuple(mats), kind="accretive", margin=s)


def random_commuting_contraction_tuple(n: Sequence[int], d: int, rng: np.random.Generator,
                                       s: float = 0.1) -> OperatorTuple:
    """Inverse Cayley image of a random accretive tuple; every ``||T_k|| < 1``."""
    return inverse_tuple_cayley(random_commuting_accretive_tuple(n, d, s, rng))


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    return nk.opnorm(a - b) / (1.0 + nk.opnorm(b))


def check_membership(f, cfg: SampleConfig = SampleConfig()) -> Report:
    """Sampled versions of: positive homogeneity, homogeneity under complex
    scalars, symmetry ``f(Z*) = f(Z)*``, accretivity of ``f(R)`` on commuting
    accretive tuples and, when ``phi`` is known, the two split decomposition
    identities."""
    ev = as_evaluator(f)
    n = ev.n
    rep = Report()

    worst, wit = 0.0, None
    for i in range(cfg.num_points):
        rng = stream(cfg.seed, 1, i)
        Z = random_halfplane_point(n, rng)
        t = float(np.exp(rng.uniform(-2.0, 2.0)))
        r = _rel(ev(Z.scale(t)), t * ev(Z))
        if r > worst:
            worst, wit = r, {"Z": encode_point(Z), "t": t}
    rep.add("homogeneity_positive", worst, cfg.identity_tol, witness=wit)

    worst, wit = 0.0, None
    for i in range(cfg.num_points):
        rng = stream(cfg.seed, 2, i)
        Z = random_halfplane_point(n, rng)
        lam = np.exp(rng.uniform(-1.0, 1.0) + 1j * rng.uniform(-np.pi, np.pi))
        r = _rel(ev(Z.scale(lam)), lam * ev(Z))
        if r > worst:
            worst, wit = r, {"Z": encode_point(Z), "lambda": [lam.real, lam.imag]}
    rep.add("homogeneity_complex", worst, cfg.identity_tol, witness=wit)

    worst, wit = 0.0, None
    for i in range(cfg.num_points):
        Z = random_halfplane_point(n, stream(cfg.seed, 3, i))
        r = _rel(ev(Z.adjoint()), nk.adj(ev(Z)))
        if r > worst:
            worst, wit = r, {"Z": encode_point(Z)}
    rep.add("symmetry", worst, cfg.identity_tol, witness=wit)

    # accretivity on tuples: residual is the worst normalised negative eigenvalue
    worst, wit = -np.inf, None
    note = ""
    for i in range(cfg.num_tuples):
        rng = stream(cfg.seed, 4, i)
        d = cfg.carrier_dims[i % len(cfg.carrier_dims)]
        if ev.operator_func is None:
            d = 1
            note = "no operator calculus available; sampled at carrier dimension 1"
        R = random_commuting_accretive_tuple(n, d, cfg.margin, rng)
        if ev.operator_func is None:
            val = ev(MatrixPoint(R.R))
        else:
            val = ev.operator_func(R)
        neg = -nk.min_eig_herm(val) / max(1.0, nk.opnorm(val))
        if neg > worst:
            worst = neg
            wit = {"R": [encode_point(MatrixPoint(R.R))], "d": d}
    rep.add("operator_positivity", worst, cfg.positivity_tol, witness=wit, note=note)

    if ev.phi_func is not None:
        worst_p = worst_m = 0.0
        wit_p = wit_m = None
        for i in range(cfg.num_points):
            rng = stream(cfg.seed, 5, i)
            Z = random_halfplane_point(n, rng)
            L = random_halfplane_point(n, rng)
            fz, fl = ev(Z), ev(L)
            pz, pl = ev.phi_func(Z), ev.phi_func(L)
            plus = decomposition_value(pl, MatrixPoint(tuple(z + nk.adj(l) for z, l in zip(Z, L))),
                                       pz, ev.m)
            minus = decomposition_value(pl, MatrixPoint(tuple(z - nk.adj(l) for z, l in zip(Z, L))),
                                        pz, ev.m)
            scale = 1.0 + nk.opnorm(fz) + nk.opnorm(fl)
            rp = nk.opnorm(fz + nk.adj(fl) - plus) / scale
            rm = nk.opnorm(fz - nk.adj(fl) - minus) / scale
            if rp > worst_p:
                worst_p, wit_p = rp, {"Z": encode_point(Z), "Lambda": encode_point(L)}
            if rm > worst_m:
                worst_m, wit_m = rm, {"Z": encode_point(Z), "Lambda": encode_point(L)}
        rep.add("decomposition_sum", worst_p, cfg.identity_tol, witness=wit_p)
        rep.add("decomposition_difference", worst_m, cfg.identity_tol, witness=wit_m)
    return rep

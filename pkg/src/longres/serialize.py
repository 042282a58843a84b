"""JSON encoding of complex matrices as nested ``[re, im]`` pairs."""

from __future__ import annotations

import numpy as np

from .domain import MatrixPoint
from .errors import ShapeMismatch


def encode_matrix(a) -> list:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def decode_matrix(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 2 and arr.shape[0] >= 1 and not isinstance(data[0][0], list):
        # a single row written as a list of pairs
        arr = arr[None, :, :]
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ShapeMismatch(f"expected rows of [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def encode_point(Z: MatrixPoint) -> list:
    return [encode_matrix(z) for z in Z.Z]


def decode_point(data) -> MatrixPoint:
    return MatrixPoint(tuple(decode_matrix(z) for z in data))

import numpy as np
import pytest

from longres.domain import MatrixPoint


def rel_err(a, b):
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return float(np.linalg.norm(a - b, 2) / (1.0 + np.linalg.norm(b, 2)))


def scalar_point(*vals):
    return MatrixPoint.of(*(np.array([[complex(v)]]) for v in vals))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)

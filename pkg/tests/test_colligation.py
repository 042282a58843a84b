import numpy as np
import pytest

from conftest import rel_err, scalar_point
from longres import numkit as nk
from longres.cayley import double_cayley
from longres.colligation import (Colligation, KernelSamples, bess_from_colligation,
                                 check_spectrum_condition, close_grid, kernel_samples_from_pencil,
                                 lurking_isometry, pick_samples, theta_from_pencil, transfer_eval,
                                 transfer_eval_operator, verify_agler_identity)
from longres.domain import MatrixPoint, OperatorTuple
from longres.errors import (IdentityViolated, InconsistentSamples, IsometryDefect,
                            NotSelfAdjoint, ShapeMismatch, SpectrumAtOne)
from longres.fixtures import matrix_identity, parallel_resistor, random_pencil
from longres.membership import (random_commuting_contraction_tuple, random_disk_point,
                                random_halfplane_point, stream)

SWAP = np.array([[0.0, 1.0], [1.0, 0.0]])


def disk_grid(n, count, seed=0):
    return [MatrixPoint.zero(n)] + [random_disk_point(n, stream(seed, 1, i)) for i in range(count)]


def test_colligation_validation():
    with pytest.raises(ShapeMismatch):
        Colligation((1,), 1, 1, np.eye(3))
    with pytest.raises(IsometryDefect):
        Colligation((1,), 1, 1, 2 * np.eye(2))
    c = Colligation((1,), 1, 1, SWAP)
    assert c.A.shape == (1, 1) and c.D[0, 0] == 0 and c.selfadjoint


def test_transfer_of_swap_is_identity(rng):
    c = Colligation((1,), 1, 1, SWAP)
    for w in (0.0, 0.3, -0.5 + 0.2j):
        assert transfer_eval(c, scalar_point(w))[0, 0] == pytest.approx(w)


def test_transfer_at_zero_is_d(rng):
    U = nk.nearest_isometry(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    c = Colligation((1, 1), 2, 1, U)
    assert np.allclose(transfer_eval(c, MatrixPoint.zero((1, 1))), c.D)
    T0 = OperatorTuple((1, 1), 3, (np.zeros((3, 3)), np.zeros((3, 3))))
    assert np.allclose(transfer_eval_operator(c, T0), np.kron(c.D, np.eye(3)))
    W = random_disk_point((1, 1), rng)
    assert np.allclose(transfer_eval_operator(c, OperatorTuple.from_point(W)), transfer_eval(c, W))


def test_transfer_contractive_for_random_unitary(rng):
    U = nk.nearest_isometry(rng.standard_normal((7, 7)) + 1j * rng.standard_normal((7, 7)))
    c = Colligation((2, 1), 2, 1, U)
    for i in range(200):
        assert nk.opnorm(transfer_eval(c, random_disk_point((2, 1), stream(4, 0, i)))) <= 1 + 1e-9


def test_theta_at_zero_parallel_resistor():
    th = theta_from_pencil(parallel_resistor(), MatrixPoint.zero((1, 1)))
    assert th[0][0, 0] == pytest.approx(2 / 3) and th[1][0, 0] == pytest.approx(-2 / 3)
    assert all(t.shape == (1, 1) for t in th)


def test_theta_identity_for_f_equals_z(rng):
    s = kernel_samples_from_pencil(matrix_identity(1), disk_grid((1,), 5))
    assert verify_agler_identity(s, 1e-10).passed


def test_agler_identity_one_point_and_corruption():
    s = KernelSamples((MatrixPoint.zero((1,)),), (np.zeros((1, 1)),), (np.ones((1, 1)),), (1,), 1, 1)
    assert verify_agler_identity(s, 1e-12).passed
    good = kernel_samples_from_pencil(parallel_resistor(), disk_grid((1, 1), 4))
    assert verify_agler_identity(good, 1e-9).passed
    bad = KernelSamples(good.points, tuple(F + 0.1 for F in good.F), good.HR, good.n, good.x, good.u)
    assert not verify_agler_identity(bad, 1e-9).passed
    with pytest.raises(IdentityViolated):
        lurking_isometry(bad)


def test_identity_pipeline_gives_swap_like_colligation(rng):
    s = kernel_samples_from_pencil(matrix_identity(1), disk_grid((1,), 4))
    c = lurking_isometry(s)
    assert c.U.shape == (2, 2)
    assert c.unitarity_residual() <= 1e-9
    for _ in range(5):
        W = random_disk_point((1,), rng)
        assert abs(transfer_eval(c, W)[0, 0] - W[0][0, 0]) < 1e-9


def test_pick_zero_function_gives_zero_d():
    s = pick_samples([0.0, 0.5, -0.3j, 0.2 + 0.4j], [0, 0, 0, 0])
    c = lurking_isometry(s)
    assert np.allclose(c.D, 0, atol=1e-12)


def test_pick_interpolates_schur_function():
    w = np.array([0.0, 0.4, -0.5j, 0.3 + 0.3j, -0.6])
    s = pick_samples(w, w ** 2)
    c = lurking_isometry(s)
    for wi in w:
        assert abs(transfer_eval(c, scalar_point(wi))[0, 0] - wi ** 2) < 1e-8


def test_pick_rejects_non_schur_data():
    with pytest.raises(IdentityViolated):
        pick_samples([0.0, 0.5], [0.0, 0.9])


def test_parallel_resistor_symmetric_colligation(rng):
    s = kernel_samples_from_pencil(parallel_resistor(), disk_grid((1, 1), 6), symmetric=True)
    c = lurking_isometry(s, symmetric=True)
    assert c.selfadjoint_residual() <= 1e-8
    assert abs(transfer_eval(c, MatrixPoint.zero((1, 1)))[0, 0] + 1 / 3) < 1e-12
    assert check_spectrum_condition(c)


def test_symmetric_requires_closed_grid():
    f = parallel_resistor()
    s = kernel_samples_from_pencil(f, disk_grid((1, 1), 3), symmetric=True)
    W = random_disk_point((1, 1), stream(9, 9))
    broken = KernelSamples(s.points + (W,), s.F + (double_cayley(f)(W),),
                           s.HR + (s.HR[0],), s.n, s.x, s.u, s.HL + (s.HL[0],))
    with pytest.raises((InconsistentSamples, IdentityViolated)):
        lurking_isometry(broken, symmetric=True)
    no_left = KernelSamples(s.points, s.F, s.HR, s.n, s.x, s.u)
    with pytest.raises(InconsistentSamples):
        lurking_isometry(no_left, symmetric=True)


def test_close_grid():
    W = MatrixPoint.of(np.array([[0.1, 0.2j], [0.0, 0.3]]))
    grid = close_grid([W], adjoint=True, conjugate=True)
    assert len(grid) == 4


def test_spectrum_condition_examples():
    def with_d(d):
        return Colligation((1,), 1, 1, np.array([[np.sqrt(1 - d * d), d], [d, -np.sqrt(1 - d * d)]]))
    assert check_spectrum_condition(with_d(0.0))
    assert check_spectrum_condition(with_d(-1 / 3))
    assert not check_spectrum_condition(Colligation((1,), 1, 1, np.eye(2)))


def test_bess_from_swap():
    f = bess_from_colligation(Colligation((1,), 1, 1, SWAP))
    assert abs(f(scalar_point(3.0))[0, 0] - 3.0) < 1e-8


def test_bess_errors(rng):
    with pytest.raises(SpectrumAtOne):
        bess_from_colligation(Colligation((1,), 1, 1, np.eye(2)))
    U = nk.nearest_isometry(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    with pytest.raises(NotSelfAdjoint):
        bess_from_colligation(Colligation((1,), 1, 1, U))


def test_round_trip_random_pencil(rng):
    f = random_pencil(rng, (2, 1), (1, 1), 1, 1)
    s = kernel_samples_from_pencil(f, disk_grid((2, 1), 12), symmetric=True)
    g = bess_from_colligation(lurking_isometry(s, symmetric=True))
    for i in range(5):
        Z = random_halfplane_point((2, 1), stream(3, 3, i))
        assert rel_err(g(Z), f(Z)) < 1e-7


def test_operator_transfer_contractive_on_parallel_resistor():
    s = kernel_samples_from_pencil(parallel_resistor(), disk_grid((1, 1), 6), symmetric=True)
    c = lurking_isometry(s, symmetric=True)
    for i in range(30):
        T = random_commuting_contraction_tuple((1, 1), 1 + i % 4, stream(0, 5, i))
        assert nk.opnorm(transfer_eval_operator(c, T)) <= 1 + 1e-8

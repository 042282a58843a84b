"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

import time

import numpy as np

from longres import numkit as nk
from longres.cayley import double_cayley, inverse_double_cayley
from longres.colligation import (bess_from_colligation, check_spectrum_condition,
                                 kernel_samples_from_pencil, lurking_isometry, transfer_eval,
                                 transfer_eval_operator)
from longres.domain import MatrixPoint
from longres.fixtures import (matrix_identity, parallel_resistor, random_pencil,
                              rotated_identity, square)
from longres.membership import (SampleConfig, check_membership,
                                random_commuting_contraction_tuple, random_disk_point,
                                random_halfplane_point, stream)
from longres.pencil import decomposition_value, reconstruct_from_phi
from longres.realstruct import (check_real_colligation, colligation_involution,
                                is_real_function, realify_decomposition, standard_involution)


def verdict(number, ok, detail, started):
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} ({detail}; {time.time() - started:.2f}s)"
    print(line)
    assert ok, line


def fixture_pencils():
    return {
        "parallel_resistor": parallel_resistor(),
        "identity_1": matrix_identity(1),
        "identity_2": matrix_identity(2),
        "random_a": random_pencil(np.random.default_rng(101), (2, 1), (1, 1), 1, 1),
        "random_b": random_pencil(np.random.default_rng(102), (1, 2), (2, 1), 2, 1),
    }


def random_pencils(count=20):
    rng = np.random.default_rng(2026)
    out = []
    while len(out) < count:
        N = int(rng.integers(1, 4))
        n = tuple(int(v) for v in rng.integers(1, 4, N))
        m = tuple(int(v) for v in rng.integers(1, 3, N))
        u, h = int(rng.integers(1, 3)), int(rng.integers(0, 3))
        if sum(a * b for a, b in zip(n, m)) < h:
            continue
        out.append(random_pencil(rng, n, m, u, h))
    return out


def training_grid(f, seed):
    n = f.shape.n
    count = 2 * (sum(n) * sum(f.shape.m) + f.shape.u)
    return [MatrixPoint.zero(n)] + [random_disk_point(n, stream(seed, 1, i)) for i in range(count)]


def build(f, symmetric, seed=0):
    s = kernel_samples_from_pencil(f, training_grid(f, seed), symmetric=symmetric)
    return s, lurking_isometry(s, symmetric=symmetric)


def rel(a, b):
    return nk.opnorm(a - b) / (1.0 + nk.opnorm(b))


def test_1_pencil_correctness():
    t0 = time.time()
    f = parallel_resistor()
    worst = 0.0
    for i in range(50):
        Z = random_halfplane_point((1, 1), stream(1, 0, i))
        z1, z2 = Z[0][0, 0], Z[1][0, 0]
        exact = z1 * z2 / (z1 + z2)
        worst = max(worst, abs(f(Z)[0, 0] - exact) / abs(exact))
    e1 = abs(f(MatrixPoint.of(1.0, 1.0))[0, 0] - 0.5)
    e2 = abs(f(MatrixPoint.of(2.0, 2.0))[0, 0] - 1.0)
    ok = worst <= 1e-10 and e1 <= 1e-12 and e2 <= 1e-12
    verdict(1, ok, f"max rel err {worst:.1e}, f(1,1) err {e1:.1e}, f(2,2) err {e2:.1e}", t0)


def test_2_decomposition_identities():
    t0 = time.time()
    worst = 0.0
    for p, f in enumerate(random_pencils()):
        n, m = f.shape.n, f.shape.m
        for i in range(20):
            rng = stream(2, p, i)
            Z, L = random_halfplane_point(n, rng), random_halfplane_point(n, rng)
            fz, fl, pz, pl = f(Z), f(L), f.phi(Z), f.phi(L)
            scale = 1.0 + max(nk.opnorm(fz), nk.opnorm(fl))
            plus = MatrixPoint(tuple(a + nk.adj(b) for a, b in zip(Z, L)))
            minus = MatrixPoint(tuple(a - nk.adj(b) for a, b in zip(Z, L)))
            worst = max(worst,
                        nk.opnorm(decomposition_value(pl, Z, pz, m) - fz) / scale,
                        nk.opnorm(decomposition_value(pl, plus, pz, m) - fz - nk.adj(fl)) / scale,
                        nk.opnorm(decomposition_value(pl, minus, pz, m) - fz + nk.adj(fl)) / scale)
    verdict(2, worst <= 1e-9, f"max scaled residual {worst:.1e} over 20 pencils x 20 pairs", t0)


def test_3_membership_checks():
    t0 = time.time()
    cfg = SampleConfig(num_tuples=100, carrier_dims=(1, 2, 4))
    failures = [i for i, f in enumerate(random_pencils()) if not check_membership(f, cfg).passed]
    sq = check_membership(square(), cfg)
    rot = check_membership(rotated_identity(), cfg)
    rejects = (not sq["homogeneity_positive"].passed) and (not rot["symmetry"].passed)
    ok = not failures and rejects
    verdict(3, ok, f"{20 - len(failures)}/20 pencils pass, z^2 and i*z rejected: {rejects}", t0)


def test_4_double_cayley():
    t0 = time.time()
    e0 = abs(double_cayley(parallel_resistor())(MatrixPoint.zero((1, 1)))[0, 0] + 1 / 3)
    F = double_cayley(matrix_identity(2))
    eid = max(nk.opnorm(F(W) - W[0]) for W in
              (random_disk_point((2,), stream(4, 0, i)) for i in range(20)))
    f = random_pencil(np.random.default_rng(4), (2, 1), (1, 2), 2, 1)
    g = inverse_double_cayley(double_cayley(f))
    ert = max(rel(g(Z), f(Z)) for Z in
              (random_halfplane_point((2, 1), stream(4, 1, i)) for i in range(20)))
    ok = e0 <= 1e-12 and eid <= 1e-10 and ert <= 1e-8
    verdict(4, ok, f"F(0)+1/3 = {e0:.1e}, identity {eid:.1e}, round trip {ert:.1e}", t0)


def test_5_lurking_isometry():
    t0 = time.time()
    worst = {"unitary": 0.0, "train": 0.0, "held": 0.0, "selfadj": 0.0}
    spectrum = True
    for name, f in fixture_pencils().items():
        F = double_cayley(f)
        n = f.shape.n
        for symmetric in (False, True):
            s, c = build(f, symmetric)
            worst["unitary"] = max(worst["unitary"], c.unitarity_residual())
            worst["train"] = max(worst["train"], max(nk.opnorm(transfer_eval(c, W) - Fw)
                                                     for W, Fw in zip(s.points, s.F)))
            worst["held"] = max(worst["held"], max(
                nk.opnorm(transfer_eval(c, W) - F(W))
                for W in (random_disk_point(n, stream(5, 9, i)) for i in range(10))))
            if symmetric:
                worst["selfadj"] = max(worst["selfadj"], c.selfadjoint_residual())
                spectrum = spectrum and check_spectrum_condition(c)
    ok = (worst["unitary"] <= 1e-8 and worst["train"] <= 1e-8 and worst["held"] <= 1e-6
          and worst["selfadj"] <= 1e-8 and spectrum)
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", spectrum ok {spectrum}"
    verdict(5, ok, detail, t0)


def test_6_full_round_trip():
    t0 = time.time()
    worst = 0.0
    for name, f in fixture_pencils().items():
        _, c = build(f, symmetric=True)
        g = bess_from_colligation(c)
        for i in range(10):
            Z = random_halfplane_point(f.shape.n, stream(6, 0, i))
            worst = max(worst, nk.opnorm(g(Z) - f(Z)) / nk.opnorm(f(Z)))
    verdict(6, worst <= 1e-6, f"max relative error {worst:.1e} over 5 fixtures x 10 points", t0)


def test_7_operator_contractivity():
    t0 = time.time()
    worst = 0.0
    count = 0
    for name, f in fixture_pencils().items():
        for symmetric in (False, True):
            _, c = build(f, symmetric)
            count += 1
            for i in range(100):
                T = random_commuting_contraction_tuple(c.n, (1, 2, 4)[i % 3], stream(7, count, i))
                worst = max(worst, nk.opnorm(transfer_eval_operator(c, T)))
    verdict(7, worst <= 1 + 1e-8, f"max norm {worst:.10f} over {count} colligations x 100 tuples", t0)


def test_8_real_structure():
    t0 = time.time()
    f = parallel_resistor()
    std1 = standard_involution(1)
    pts = [random_halfplane_point((1, 1), stream(8, 0, i)) for i in range(10)]
    real_f = is_real_function(f, std1, pts)
    dd = realify_decomposition(f, std1, [std1, std1], pts)
    r_real = dd.realness_residual(pts)
    r_dec = dd.decomposition_residual(f, list(zip(pts, pts[::-1])))
    s = kernel_samples_from_pencil(f, training_grid(f, 8), symmetric=True, real=True)
    inv_X = standard_involution(s.x)
    c = lurking_isometry(s, symmetric=True,
                         involution=colligation_involution(sum(s.n), inv_X, std1))
    real_c = check_real_colligation(c, inv_X, std1)
    rejected = not is_real_function(rotated_identity(), std1,
                                    [random_halfplane_point((1,), stream(8, 1, i)) for i in range(5)])
    ok = real_f and r_real <= 1e-9 and r_dec <= 1e-9 and real_c and rejected
    verdict(8, ok, f"f real {real_f}, doubled realness {r_real:.1e}, doubled decomposition "
                   f"{r_dec:.1e}, real colligation {real_c}, i*z rejected {rejected}", t0)


def test_9_reconstruction():
    t0 = time.time()
    worst = 0.0
    for name, f in fixture_pencils().items():
        n = f.shape.n
        pts = [MatrixPoint.identity(n)] + [random_halfplane_point(n, stream(9, 0, i))
                                           for i in range(15)]
        g = reconstruct_from_phi([(P, f.phi(P)) for P in pts], f.shape)
        for i in range(5):
            Z = random_halfplane_point(n, stream(9, 1, i))
            worst = max(worst, rel(g(Z), f(Z)))
    verdict(9, worst <= 1e-7, f"max held-out error {worst:.1e} over 5 fixtures", t0)

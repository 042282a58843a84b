import numpy as np
import pytest

from longres.fixtures import parallel_resistor, random_pencil, rotated_identity, square
from longres.membership import (SampleConfig, check_membership, random_commuting_accretive_tuple,
                                random_commuting_contraction_tuple, random_disk_point,
                                random_halfplane_point, stream)
from longres.pencil import Evaluator


def test_generators_meet_their_contracts(rng):
    Z = random_halfplane_point((3, 2), rng)
    assert Z.halfplane_margin() >= 0.1
    assert random_disk_point((3, 2), rng).in_disk()
    for d in (1, 2, 4):
        R = random_commuting_accretive_tuple((2, 3), d, 0.2, rng)
        assert R.accretive_margin() >= 0.2 - 1e-12
        assert R.max_commutator() < 1e-12
        T = random_commuting_contraction_tuple((2, 3), d, rng)
        assert T.max_norm() < 1


def test_streams_are_order_independent():
    a = stream(7, 1, 3).standard_normal(4)
    stream(7, 1, 2).standard_normal(4)
    assert np.array_equal(a, stream(7, 1, 3).standard_normal(4))
    assert not np.array_equal(a, stream(8, 1, 3).standard_normal(4))


def test_parallel_resistor_passes():
    rep = check_membership(parallel_resistor(), SampleConfig(num_tuples=30))
    assert rep.passed, rep.summary()
    assert {c.name for c in rep.checks} >= {"homogeneity_positive", "homogeneity_complex",
                                            "symmetry", "operator_positivity"}


def test_report_is_deterministic(rng):
    f = random_pencil(rng, (2,), (1,), 1, 1)
    a = check_membership(f, SampleConfig(seed=3, num_tuples=10)).to_dict()
    b = check_membership(f, SampleConfig(seed=3, num_tuples=10)).to_dict()
    assert a == b


def test_square_fails_homogeneity():
    rep = check_membership(square(), SampleConfig(num_tuples=10))
    assert not rep["homogeneity_positive"].passed
    assert rep["homogeneity_positive"].witness is not None
    assert rep["symmetry"].passed


def test_rotation_fails_symmetry_and_positivity():
    rep = check_membership(rotated_identity(), SampleConfig(num_tuples=10))
    assert rep["homogeneity_positive"].passed
    assert not rep["symmetry"].passed
    assert not rep["operator_positivity"].passed


def test_opaque_evaluator_without_operator_uses_points():
    g = Evaluator((1, 1), 1, parallel_resistor())
    rep = check_membership(g, SampleConfig(num_tuples=5))
    assert rep.passed
    assert "dimension 1" in rep["operator_positivity"].note


def test_bad_config():
    with pytest.raises(ValueError):
        SampleConfig(carrier_dims=(0,))

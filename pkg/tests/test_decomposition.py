from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxlab.boxes import LroRelabeling, SingleTable, bb84_box, deterministic_box, example2_box, lro_apply, maximally_mixed_box, pr_box
from boxlab.decomposition import (
    ALPHA,
    AliceAssignment,
    Grouping,
    LhvLhsModel,
    bb84_four_model,
    box_matrix,
    dlhv_feasible,
    dlhvlhs_feasible,
    enumerate_instances,
    example2_three_model,
    example2_two_model,
    is_super_unsteerable,
    is_superlocal,
    merge_equal_bob_tables,
    min_dim_lhv,
    min_dim_lhvlhs,
    model_from_alice_points,
    model_violation,
    verify_model,
)
from boxlab.errors import DegenerateError, DomainError
from boxlab.solver import rank

from oracles import (
    EXAMPLE2,
    bb84_rows,
    best_triangle_slack,
    bounded_triangle_slack,
    corner_socp_max_min_weight,
    random_model_parts,
    triangle_threshold,
)

Q = F(1, 4)
bits = st.integers(0, 1)


def model_of(weights, alice, bob):
    return LhvLhsModel(
        tuple(weights),
        tuple(SingleTable.from_p0(*a) for a in alice),
        tuple(SingleTable.from_p0(*b) for b in bob),
    )


# models and instances ---------------------------------------------------------


def test_reference_models_verify():
    for V in (Q, F(1, 2), F(7, 10)):
        assert verify_model(bb84_four_model(V), bb84_box(V))
    assert verify_model(example2_three_model(), example2_box())
    assert verify_model(example2_two_model(), example2_box())


def test_model_violation_messages():
    m = bb84_four_model(F(1, 2))
    assert "target" in model_violation(m, bb84_box(F(3, 5)))
    bad = model_of([F(1, 2), F(1, 2)], [(1, 1), (0, 0)], [(1, 1), (0, 0)])
    assert "MUB disc" in model_violation(bad, bad.recompose())
    assert verify_model(bad, bad.recompose(), mub=False)
    zero = model_of([F(1), F(0)], [(1, 1), (0, 0)], [(F(1, 2), F(1, 2))] * 2)
    assert "not positive" in model_violation(zero, zero.recompose())


def test_bb84_four_corner_instance():
    V = F(1, 2)
    cert = dlhvlhs_feasible(bb84_box(V), AliceAssignment(("00", "01", "10", "11")))
    assert cert.feasible
    m = cert.witness
    assert m.weights == (Q,) * 4
    assert [t.p0 for t in m.bob_tables] == [(F(3, 4), F(1, 4)), (F(1, 4), F(3, 4)), (F(3, 4), F(3, 4)), (F(1, 4), F(1, 4))]
    assert verify_model(m, bb84_box(V))


def test_four_corner_weight_matches_socp():
    # the corner model of noisy BB84 is unique: all four weights are 1/4
    val, _ = corner_socp_max_min_weight(bb84_rows(F(7, 10)))
    assert abs(val - 0.25) < 1e-6
    val, _ = corner_socp_max_min_weight(EXAMPLE2)
    assert abs(val) < 1e-6


def test_example2_instances():
    box = example2_box()
    cert = dlhvlhs_feasible(box, AliceAssignment(("00", "10", "11")))
    assert cert.feasible
    ref = example2_three_model()
    assert cert.witness.weights == ref.weights and cert.witness.bob_tables == ref.bob_tables
    cert = dlhvlhs_feasible(box, AliceAssignment(("00", "01", "10", "11")))
    assert cert.infeasible and cert.kind == "forced-zero"
    with pytest.raises(DegenerateError):
        dlhvlhs_feasible(box, AliceAssignment(("00", "01", "10", "11")), raise_degenerate=True)


def test_grouping_validation():
    with pytest.raises(ValueError):
        Grouping(((0,), (2,)))
    with pytest.raises(ValueError):
        dlhvlhs_feasible(example2_box(), AliceAssignment(("00", "10")), Grouping.singletons(3))
    assert Grouping(((1, 0), (2,))).groups == ((0, 1), (2,))
    assert AliceAssignment(("11", (0, 1), 0)).indices == (3, 1, 0)


def test_grouped_instance_merges_tables():
    # two strategies sharing one Bob table on the maximally mixed box
    cert = dlhvlhs_feasible(maximally_mixed_box(), AliceAssignment(("00", "01")), Grouping(((0, 1),)))
    assert cert.feasible
    assert cert.evidence["merged"].dim == 1


def test_merge_equal_bob_tables():
    m = model_of([F(1, 4), F(1, 4), F(1, 2)], [(1, 1), (0, 0), (1, 0)], [(F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)), (1, F(1, 2))])
    merged = merge_equal_bob_tables(m)
    assert merged.dim == 2
    assert merged.weights == (F(1, 2), F(1, 2))
    assert merged.alice_tables[0].p0 == (F(1, 2), F(1, 2))
    assert merged.recompose() == m.recompose()


def test_model_from_alice_points():
    box = bb84_box(Q)
    rep = min_dim_lhvlhs(box)
    m = model_from_alice_points(box, [t.p0 for t in rep.model.alice_tables])
    assert m.weights == rep.model.weights and verify_model(m, box)
    # three corners leave one weight at zero
    with pytest.raises(DomainError):
        model_from_alice_points(box, [ALPHA[0], ALPHA[1], ALPHA[2]], mub=False)
    with pytest.raises(ValueError):
        model_from_alice_points(box, [ALPHA[0], ALPHA[1]])
    # rank-2 box matrix
    with pytest.raises(ValueError):
        model_from_alice_points(example2_box(), [ALPHA[0], ALPHA[2], ALPHA[3]])


def test_enumerate_instances_counts():
    assert len(list(enumerate_instances(1, "distinct"))) == 15
    assert len(list(enumerate_instances(4, "distinct"))) == 1
    assert all(len({s for g in key for s in g}) == sum(map(len, key)) for key in enumerate_instances(2, "distinct"))
    assert len(list(enumerate_instances(4, "bounded"))) == 35


# minimal dimension --------------------------------------------------------------


def test_trivial_dimensions():
    assert min_dim_lhvlhs(maximally_mixed_box()).min_dim == 1
    assert min_dim_lhv(maximally_mixed_box()).min_dim == 1
    assert min_dim_lhv(deterministic_box(0, 1, 1, 0)).min_dim == 1


def test_nonlocal_and_steerable():
    assert min_dim_lhv(pr_box(0, 0, 0)).verdict == "nonlocal"
    assert min_dim_lhvlhs(bb84_box(F(9, 10))).verdict == "steerable"
    # a deterministic Bob table (1, 1) is outside the MUB disc, so no qubit model exists
    assert min_dim_lhvlhs(deterministic_box(0, 0, 0, 0)).verdict == "steerable"


def test_example2_dimensions():
    rep = min_dim_lhvlhs(example2_box())
    assert (rep.rank, rep.min_dim) == (2, 2)
    assert verify_model(rep.model, example2_box())
    assert min_dim_lhv(example2_box()).min_dim == 2
    rep = min_dim_lhvlhs(example2_box(), "distinct")
    assert rep.min_dim == 3 and verify_model(rep.model, example2_box())


def test_triangle_oracle_threshold():
    t = triangle_threshold()
    assert 0.56 < t < 0.561
    assert best_triangle_slack(bb84_rows(F(11, 20))) > 1e-3
    assert best_triangle_slack(bb84_rows(F(57, 100))) < -1e-3


@pytest.mark.parametrize("V,dim", [(Q, 3), (F(1, 2), 3), (F(11, 20), 3), (F(57, 100), 4), (F(7, 10), 4)])
def test_bb84_general_dimension(V, dim):
    # frozen from the boundary-triangle oracle: three values fit below ~0.5609
    assert (best_triangle_slack(bb84_rows(V)) > 0) == (dim == 3)
    rep = min_dim_lhvlhs(bb84_box(V))
    assert rep.min_dim == dim
    assert verify_model(rep.model, bb84_box(V))
    assert all(c["verdict"] == "infeasible" for c in rep.certificates if c["dim"] < dim)


@pytest.mark.parametrize("V,dim", [(F(11, 25), 3), (F(9, 20), 4), (F(1, 2), 4)])
def test_bb84_bounded_dimension(V, dim):
    # frozen from the corner-and-segment oracle; threshold 1/√5
    assert (bounded_triangle_slack(bb84_rows(V), steps=1001) > 0) == (dim == 3)
    rep = min_dim_lhvlhs(bb84_box(V), "bounded")
    assert rep.min_dim == dim and verify_model(rep.model, bb84_box(V))


@pytest.mark.parametrize("V,dim", [(Q, 3), (F(7, 10), 4), (F(9, 10), 4), (F(1), 4)])
def test_bb84_lhv_dimension(V, dim):
    rep = min_dim_lhv(bb84_box(V))
    assert rep.min_dim == dim
    assert verify_model(rep.model, bb84_box(V), mub=False)


def test_verdict_helpers():
    ok, rep = is_super_unsteerable(bb84_box(F(7, 10)), 3)
    assert ok and rep.min_dim == 4
    assert is_super_unsteerable(bb84_box(F(9, 10)), 2)[0] is False
    assert is_superlocal(bb84_box(F(9, 10)), 2, 2)[0]
    assert not is_superlocal(maximally_mixed_box(), 2, 2)[0]
    assert is_superlocal(pr_box(0, 0, 0), 2, 2)[0] is False
    with pytest.raises(DomainError):
        is_super_unsteerable(example2_box(), 1)


# properties -----------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_random_models_bound_dimension(seed):
    w, a, b = random_model_parts(np.random.default_rng(seed))
    m = model_of(w, a, b)
    box = m.recompose()
    assert verify_model(m, box)
    rep = min_dim_lhvlhs(box)
    assert rep.min_dim is not None and rep.min_dim <= len(set(b))
    assert rep.min_dim >= rank(box_matrix(box))
    assert verify_model(rep.model, box)
    # every LHV-LHS model is an LHV model
    lhv = min_dim_lhv(box)
    assert lhv.min_dim <= rep.min_dim


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.lists(st.integers(0, 3), min_size=1, max_size=4))
def test_dlhvlhs_implies_dlhv(seed, strats):
    w, a, b = random_model_parts(np.random.default_rng(seed))
    box = model_of(w, a, b).recompose()
    if dlhvlhs_feasible(box, AliceAssignment(tuple(strats))).feasible:
        assert dlhv_feasible(box, AliceAssignment(tuple(strats))).feasible


@settings(max_examples=6, deadline=None)
@given(st.builds(LroRelabeling, bits, bits, bits, bits, bits, bits))
def test_min_dim_lro_covariant(r):
    assert min_dim_lhvlhs(lro_apply(bb84_box(F(1, 2)), r)).min_dim == 3


@settings(max_examples=6, deadline=None)
@given(st.builds(LroRelabeling, bits, bits, bits, bits, bits, bits))
def test_example2_lro_covariant(r):
    assert min_dim_lhvlhs(lro_apply(example2_box(), r)).min_dim == 2


def test_super_unsteerable_implies_superlocal():
    for box in (bb84_box(Q), bb84_box(F(7, 10)), example2_box(), maximally_mixed_box()):
        if is_super_unsteerable(box, 2)[0]:
            assert is_superlocal(box, 2, 2)[0]

import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxlab.boxes import SingleTable
from boxlab.errors import DegeneracyError, NotRealizable
from boxlab.realizability import is_mub_realizable, mub_disc, reconstruct_pure_state

from oracles import bloch_grid_realizable

T = SingleTable.from_p0
probs = st.fractions(0, 1, max_denominator=40)


def test_realizable_examples():
    for t in (T(F(1, 2), F(1, 2)), T(1, F(1, 2)), T(F(3, 4), F(3, 4)), T(F(1, 2), 0)):
        assert is_mub_realizable(t)
    for t in (T(1, 1), T(0, 0), T(F(9, 10), F(9, 10))):
        assert not is_mub_realizable(t)
    assert mub_disc(T(F(3, 4), F(3, 4))) == F(-1, 2)


def test_boundary_is_realizable():
    # (2t0-1)² + (2t1-1)² = 1 with t0 = 4/5, t1 = 1/10
    assert mub_disc(T(F(4, 5), F(1, 10))) == 0
    assert is_mub_realizable(T(F(4, 5), F(1, 10)))


def test_reconstruct_examples():
    s = reconstruct_pure_state(T(F(1, 2), F(1, 2)))
    assert s.phase_cos == 0
    assert abs(s.amp0 - 1 / math.sqrt(2)) < 1e-15
    s = reconstruct_pure_state(T(1, F(1, 2)))
    assert (s.amp0, s.amp1) == (1.0, 0.0)
    s = reconstruct_pure_state(T(F(1, 2), 1))
    assert s.phase_cos == 1 and np.allclose(s.table_floats(), (0.5, 1.0))


def test_reconstruct_errors():
    with pytest.raises(DegeneracyError):
        reconstruct_pure_state(T(1, F(3, 4)))
    with pytest.raises(NotRealizable):
        reconstruct_pure_state(T(F(9, 10), F(9, 10)))
    # a degeneracy is also a failure to realise
    with pytest.raises(NotRealizable):
        reconstruct_pure_state(T(0, 0))


def test_random_round_trips():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        r = math.sqrt(rng.uniform())
        phi = rng.uniform(0, 2 * math.pi)
        t0 = F(round((1 + r * math.cos(phi)) / 2 * 10**6), 10**6)
        t1 = F(round((1 + r * math.sin(phi)) / 2 * 10**6), 10**6)
        t = T(t0, t1)
        if not is_mub_realizable(t) or t0 in (0, 1):
            continue
        got = reconstruct_pure_state(t).table_floats()
        worst = max(worst, abs(got[0] - float(t0)), abs(got[1] - float(t1)))
    assert worst < 1e-12


@settings(max_examples=200)
@given(st.floats(0, 1), st.floats(0, 1))
def test_matches_bloch_grid(t0, t1):
    t = T(F(t0), F(t1))
    if abs(float(mub_disc(t))) > 1e-3:
        assert is_mub_realizable(t) == bloch_grid_realizable(t0, t1)


@given(probs, probs)
def test_flip_invariance(t0, t1):
    t = T(t0, t1)
    for u in (T(1 - t0, t1), T(t0, 1 - t1), T(t1, t0)):
        assert is_mub_realizable(u) == is_mub_realizable(t)


@given(probs, probs, st.sampled_from([1, -1]))
def test_reconstruction_reproduces_table(t0, t1, sign):
    t = T(t0, t1)
    if not is_mub_realizable(t) or t0 in (0, 1):
        return
    s = reconstruct_pure_state(t, sign)
    assert np.allclose(s.table_floats(), (float(t0), float(t1)), atol=1e-12)
    assert abs(np.linalg.norm(s.ket()) - 1) < 1e-12

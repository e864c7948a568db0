import math

import numpy as np
import pytest
from hypothesis import given, settings

from xsep.core import (
    ProductVector,
    SymmetryOp,
    System,
    apply_op_dense,
    embed,
    invariants,
    is_positive,
    is_ppt,
    local_symmetry,
    partial_transpose,
    phase_difference,
    phase_identity_holds,
    rank,
    xpart,
)
from xsep.errors import NegativeDiagonal, NotAState, NotHermitian, PhaseUndefined
from xsep.oracle import RandomProfile, dense_is_psd, dense_partial_transpose, random_states

from conftest import ONES, ones_state, positive_states, xs


def test_new_xstate_valid_examples():
    s = xs(ONES, ONES, ONES)
    np.testing.assert_array_equal(s.c, np.ones(4))
    s = xs([1, 0, 0, 0], [1, 0, 0, 0], [0.5, 0, 0, 0])
    assert is_positive(s)


def test_new_xstate_negative_diagonal():
    with pytest.raises(NegativeDiagonal) as exc:
        xs([-1, 1, 1, 1], ONES, np.zeros(4))
    assert exc.value.index == 1


def test_new_xstate_clamps_rounding_negatives():
    s = xs([-1e-12, 1, 1, 1], ONES, np.zeros(4))
    assert s.a[0] == 0.0


def test_state_arrays_are_read_only():
    s = xs(ONES, ONES, ONES)
    with pytest.raises(ValueError):
        s.a[0] = 2.0


def test_embed_identity_and_layout():
    np.testing.assert_array_equal(embed(xs(ONES, ONES, np.zeros(4))), np.eye(8))
    c1 = 0.3 - 0.4j
    m = embed(xs(ONES, ONES, [c1, 0, 0, 0]))
    assert m[0, 7] == c1 and m[7, 0] == np.conj(c1)


def test_embed_b_order():
    m = embed(xs(np.zeros(4), [1, 2, 3, 4], np.zeros(4)))
    np.testing.assert_array_equal(np.diag(m).real, [0, 0, 0, 0, 4, 3, 2, 1])


@settings(max_examples=50, deadline=None)
@given(positive_states())
def test_xpart_embed_round_trip(s):
    assert xpart(embed(s)).allclose(s, atol=0)


def test_xpart_of_all_ones_product():
    k = np.ones(8)
    s = xpart(np.outer(k, k))
    assert s.allclose(xs(ONES, ONES, ONES))


def test_xpart_identity_over_eight():
    s = xpart(np.eye(8) / 8)
    np.testing.assert_allclose(s.a, 1 / 8)
    np.testing.assert_allclose(s.c, 0)


def test_xpart_rejects_non_hermitian():
    m = np.eye(8, dtype=complex)
    m[0, 7] = 1j
    with pytest.raises(NotHermitian):
        xpart(m)


def test_partial_transpose_closed_forms():
    s = xs(ONES, ONES, [1, 2, 3, 4])
    np.testing.assert_array_equal(partial_transpose(s, "B").c, [3, 4, 1, 2])
    np.testing.assert_array_equal(partial_transpose(s, "A").c, [4, 3, 2, 1])
    np.testing.assert_array_equal(partial_transpose(s, "C").c, [2, 1, 4, 3])


@settings(max_examples=50, deadline=None)
@given(positive_states())
def test_partial_transpose_matches_dense(s):
    for sys in System:
        np.testing.assert_allclose(embed(partial_transpose(s, sys)), dense_partial_transpose(embed(s), sys))


@settings(max_examples=30, deadline=None)
@given(positive_states())
def test_full_partial_transpose_conjugates(s):
    t = s
    for sys in System:
        t = partial_transpose(t, sys)
    np.testing.assert_allclose(t.c, np.conj(s.c))


def test_is_positive_examples():
    assert is_positive(ones_state(ONES))
    assert not is_positive(ones_state([1.1, 1, 1, 1]))


def test_is_positive_agrees_with_dense(rng):
    for _ in range(1000):
        a, b = rng.uniform(0, 1, 4), rng.uniform(0, 1, 4)
        c = rng.uniform(0, 1.3, 4) * np.sqrt(a * b) * np.exp(1j * rng.uniform(0, 2 * math.pi, 4))
        s = xs(a, b, c)
        slack = a * b - np.abs(c) ** 2
        if np.min(np.abs(slack)) < 1e-6:
            continue
        assert is_positive(s) == dense_is_psd(embed(s))


@pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 7))
def test_is_ppt_example1(theta):
    def state(r):
        return ones_state([r, r, r * np.exp(1j * theta), r])

    assert is_ppt(state(1.0)) and is_ppt(state(0.6))
    assert not is_positive(state(1.01)) or not is_ppt(state(1.01))


def test_is_ppt_needs_state():
    with pytest.raises(NotAState):
        is_ppt(ones_state([1.2, 0, 0, 0]))


def test_is_ppt_matches_three_partial_transposes():
    for s in random_states(RandomProfile.parse("near_boundary", seed=5, count=300)):
        expected = all(is_positive(partial_transpose(s, sys)) for sys in System)
        assert is_ppt(s) == expected


def test_rank_examples():
    assert rank(ones_state(ONES)) == 4
    assert rank(ones_state([1, 1, 0.5, 0.5])) == 6
    assert rank(ones_state(np.zeros(4))) == 8


def test_invariants_delta():
    inv = invariants(xs([1, 2, 3, 4], [4, 3, 2, 1], np.zeros(4)))
    assert inv.delta == pytest.approx(2.0)
    assert inv.phi is None and inv.small_r == 0


@pytest.mark.parametrize("theta", [0.3, 1.0, math.pi, 5.0])
def test_invariants_example1_phase(theta):
    inv = invariants(ones_state([0.5, 0.5, 0.5 * np.exp(1j * theta), 0.5]))
    assert inv.phi == pytest.approx((2 * math.pi - theta) % (2 * math.pi))
    assert inv.big_r == pytest.approx(0.5) and inv.small_r == pytest.approx(0.5)


def test_phase_difference_absent_with_zero_entry():
    assert phase_difference(ones_state([1, 1, 0, 1])) is None


def test_phase_identity_examples():
    assert phase_identity_holds(ones_state([1, 1, 1, 1]))
    assert phase_identity_holds(ones_state([1, 1, 1j, 1j]))
    assert not phase_identity_holds(ones_state([1, 1 / 3, 1j / 3, (2 - 1j) / 3]))
    with pytest.raises(PhaseUndefined):
        phase_identity_holds(ones_state([1, 1, 0, 1]))


def test_swap_bc_closed_form():
    s = xs([1, 2, 3, 4], [5, 6, 7, 8], [1, 2j, 3, 4j])
    t = local_symmetry(s, SymmetryOp.SWAP_BC)
    np.testing.assert_array_equal(t.c, [1, 3, 2j, 4j])


def test_swap_ac_closed_form():
    c = np.array([1 + 1j, 2 - 1j, 3 + 2j, -4j])
    s = xs([1, 2, 3, 4], [5, 6, 7, 8], c)
    t = local_symmetry(s, SymmetryOp.SWAP_AC)
    np.testing.assert_array_equal(t.a, [1, 8, 3, 6])
    np.testing.assert_array_equal(t.b, [5, 4, 7, 2])
    np.testing.assert_array_equal(t.c, [c[0], np.conj(c[3]), c[2], np.conj(c[1])])


@settings(max_examples=30, deadline=None)
@given(positive_states())
def test_ops_are_involutions(s):
    for op in SymmetryOp:
        assert local_symmetry(local_symmetry(s, op), op).allclose(s, atol=0)


def test_product_vector_apply_matches_dense(rng):
    for op in SymmetryOp:
        v = ProductVector(*(rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))))
        k = v.ket()
        np.testing.assert_allclose(
            np.outer(v.apply(op).ket(), v.apply(op).ket().conj()),
            apply_op_dense(np.outer(k, k.conj()), op),
            atol=1e-12,
        )


def test_product_vector_rejects_zero_factor():
    with pytest.raises(ValueError):
        ProductVector([0, 0], [1, 0], [1, 0])

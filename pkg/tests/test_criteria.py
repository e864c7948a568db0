import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xsep.core import delta, is_positive
from xsep.criteria import (
    INCONCLUSIVE,
    NOT_A_STATE,
    NPT_ENTANGLED,
    PPT_ENTANGLED,
    SEPARABLE,
    a_rho,
    classify,
    criterion_A,
    criterion_diag,
    criterion_phase,
    criterion_sufficient_eps,
    decide_common_magnitude,
    evaluate_witness,
    matched_witness,
)
from xsep.errors import NotAState, NotCommonMagnitude
from xsep.oracle import RandomProfile, random_states, verify_decomposition

from conftest import ONES, ones_state, xs

SQRT2 = math.sqrt(2)


def example1(r, theta):
    return ones_state([r, r, r * np.exp(1j * theta), r])


def example2(p, q):
    return ones_state([p, p, q, -q])


def test_diag_examples():
    assert criterion_diag(ones_state(ONES)).passed
    # blocks are positive but the fourth root of a1 b2 b3 a4 = 0.9 falls below |c4|
    assert not criterion_diag(xs([1, 1, 1, 0.9], [1, 1, 1, 1.2], [0, 0, 0, 0.99])).passed
    assert criterion_diag(xs([1, 2, 3, 4], [4, 3, 2, 1], np.zeros(4))).passed


def test_criteria_require_state():
    with pytest.raises(NotAState):
        criterion_diag(ones_state([1.5, 0, 0, 0]))


@pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 9))
@pytest.mark.parametrize("r", [0.5, 0.7, 0.75, 0.9, 1.0])
def test_phase_example1(r, theta):
    expected = r * math.sqrt(1 + abs(math.sin(theta / 2))) <= 1 + 1e-12
    assert criterion_phase(example1(r, theta)).passed == expected


def test_phase_ppt_entangled_point():
    s = example1(0.75, math.pi)
    res = criterion_phase(s)
    assert not res.passed
    assert res.lhs == pytest.approx(0.75 * SQRT2)


def test_phase_vacuous_with_zero_entry():
    assert criterion_phase(ones_state([1, 1, 0, 1])).passed


@pytest.mark.parametrize("p", np.linspace(-1, 1, 9))
@pytest.mark.parametrize("q", np.linspace(-1, 1, 9))
def test_a_rho_example2(p, q):
    assert a_rho(example2(p, q)) == pytest.approx((abs(p) + abs(q)) / SQRT2, abs=1e-12)


def test_a_rho_common_magnitude(rng):
    for _ in range(50):
        big_r = rng.uniform(0.1, 1)
        c = big_r * np.exp(1j * rng.uniform(0, 2 * math.pi, 4))
        phi = np.angle(c[0] * c[3] * np.conj(c[1] * c[2]))
        assert a_rho(ones_state(c)) == pytest.approx(big_r * math.sqrt(1 + abs(math.sin(phi / 2))), abs=1e-12)


def test_a_rho_all_ones():
    assert a_rho(ones_state(ONES)) == pytest.approx(1.0, abs=1e-12)


def test_criterion_a_example2_fail():
    res = criterion_A(example2(0.8, 0.8))
    assert not res.passed
    assert res.lhs == pytest.approx(1.6 / SQRT2)
    assert criterion_A(ones_state(np.zeros(4))).passed


def test_criterion_a_matches_phase_on_common_magnitude(rng):
    for _ in range(200):
        big_r = rng.uniform(0.5, 1)
        s = ones_state(big_r * np.exp(1j * rng.uniform(0, 2 * math.pi, 4)))
        res_a, res_p = criterion_A(s), criterion_phase(s)
        if abs(res_p.lhs - res_p.rhs) < 1e-8:
            continue
        assert res_a.passed == res_p.passed


def test_a_never_weaker_than_phase(rng):
    # (|p|+|q|)-type functional dominates r sqrt(1 + |sin φ/2|)
    for _ in range(300):
        c = rng.uniform(0, 1, 4) * np.exp(1j * rng.uniform(0, 2 * math.pi, 4))
        s = ones_state(c)
        assert a_rho(s) >= criterion_phase(s).lhs - 1e-12


def test_witness_all_ones():
    w = evaluate_witness(ones_state(ONES), [1, 1, 1, 1])
    assert w.lhs == pytest.approx(4.0)
    assert w.rhs == pytest.approx(4.0)
    assert not w.violation


def test_witness_zero():
    w = evaluate_witness(example1(0.9, math.pi), [0, 0, 0, 0])
    assert w.lhs == 0 and w.rhs == 0 and not w.violation


def test_matched_witness_reproduces_a(rng):
    for s in random_states(RandomProfile.parse("near_boundary", seed=3, count=100)):
        w = evaluate_witness(s, matched_witness(s))
        assert w.lhs == pytest.approx(2 * SQRT2 * a_rho(s), rel=1e-9, abs=1e-12)
        assert w.rhs == pytest.approx(2 * SQRT2 * delta(s), rel=1e-9)
        res = criterion_A(s)
        if abs(res.lhs - res.rhs) > 1e-8:
            assert w.violation == (not res.passed)


def test_matched_witness_detects_example1():
    assert evaluate_witness(example1(0.9, math.pi), matched_witness(example1(0.9, math.pi))).violation


def test_witness_sound_on_product_mixtures(rng):
    for s in random_states(RandomProfile.parse("product_mixture", seed=4, count=100)):
        for _ in range(5):
            z = rng.normal(size=4) + 1j * rng.normal(size=4)
            assert not evaluate_witness(s, z).violation


def test_suff_eps_examples():
    assert criterion_sufficient_eps(ones_state(0.7 * ONES)).passed
    assert not criterion_sufficient_eps(xs([1, 1, 1, 0.5], ONES, [0.9, 0, 0, 0])).passed


@pytest.mark.parametrize("psi", np.linspace(0, 2 * math.pi, 17))
def test_suff_eps_inscribed_square_example2(psi):
    # on the unit circle of the (p, q) plane only the square's corners pass
    p, q = math.cos(psi), math.sin(psi)
    corner = abs(abs(p) - abs(q)) < 1e-9
    assert criterion_sufficient_eps(example2(p, q)).passed == corner
    assert criterion_sufficient_eps(example2(0.99 * p, 0.99 * q)).passed == (max(abs(p), abs(q)) * 0.99 <= 1 / SQRT2)


@pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 13))
def test_decide_common_magnitude_boundary(theta):
    edge = 1 / math.sqrt(1 + abs(math.sin(theta / 2)))
    assert decide_common_magnitude(example1(edge * (1 - 1e-6), theta))
    outside = example1(edge * (1 + 1e-6), theta)
    assert not (is_positive(outside) and decide_common_magnitude(outside))


def test_decide_common_magnitude_rejects_mixed_magnitudes():
    with pytest.raises(NotCommonMagnitude):
        decide_common_magnitude(ones_state([1, 0.5, 0.5, 0.5]))


def test_classify_counterexample_inconclusive():
    assert classify(ones_state([1, 1 / 3, 1j / 3, (2 - 1j) / 3])).tag == INCONCLUSIVE


def test_classify_example1_entangled():
    v = classify(example1(0.9, math.pi))
    assert v.tag == PPT_ENTANGLED and v.criterion == "phase"
    assert v.is_entangled


def test_classify_not_a_state():
    assert classify(ones_state([1.1, 0, 0, 0])).tag == NOT_A_STATE


def test_classify_npt():
    v = classify(xs(ONES, [1, 1, 1, 0.25], [1, 0, 0, 0]))
    assert v.tag == NPT_ENTANGLED and v.system in "ABC"


def test_classify_identity_separable():
    v = classify(ones_state(np.zeros(4)).scaled(1 / 8))
    assert v.tag == SEPARABLE and v.criterion == "diagonal"
    assert len(v.certificate) == 8


@pytest.mark.parametrize(
    "c, via",
    [
        (ONES, "rank<=6"),
        ([1, 1, 0.5, 0.5], "rank<=6"),
        (0.6 * np.exp(1j * np.array([0.1, 0.7, 2.0, 1.3])), "common_magnitude"),
        ([0.5, 0.3, 0.1, 0.2j], "suff_eps"),
    ],
)
def test_classify_separable_certificates(c, via):
    s = ones_state(c)
    v = classify(s)
    assert v.tag == SEPARABLE and v.criterion == via
    assert verify_decomposition(s, v.certificate)


def test_classify_never_entangled_on_product_mixtures():
    for s in random_states(RandomProfile.parse("product_mixture", seed=9, count=200)):
        assert not classify(s).is_entangled


@settings(max_examples=60, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.floats(0.05, 1.0))
def test_separable_verdicts_always_verify(theta, r):
    s = example1(r, theta)
    v = classify(s)
    if v.tag == SEPARABLE:
        assert verify_decomposition(s, v.certificate)

import math

import numpy as np
import pytest
from hypothesis import strategies as st

from xsep.core import SymmetryOp, delta, local_symmetry, new_xstate, rank

ONES = np.ones(4)


def xs(a, b, c, tol=1e-9):
    return new_xstate(np.asarray(a, float), np.asarray(b, float), np.asarray(c, complex), tol)


def ones_state(c):
    return xs(ONES, ONES, c)


def random_separable_rank6(rng, shuffle=True):
    """Random state meeting the rank-six separability conditions, in a random slot layout."""
    ops = list(SymmetryOp)
    while True:
        big_r = rng.uniform(0.2, 1.5)
        small_r = rng.choice([rng.uniform(0, big_r), 0.0, big_r], p=[0.8, 0.1, 0.1])
        a1, a2 = rng.uniform(0.2, 2, 2)
        a3, a4 = rng.uniform(0.2, 3, 2)
        b3 = big_r**2 / a3 * (1.0 if rng.random() < 0.3 else rng.uniform(1, 3))
        if rng.random() < 0.2:
            a4 = a2 * a3 / a1
        b4 = big_r**2 / a4 * (1.0 if rng.random() < 0.3 else rng.uniform(1, 3))
        th = rng.uniform(0, 2 * math.pi, 3)
        c = [
            big_r * np.exp(1j * th[0]),
            big_r * np.exp(1j * th[1]),
            small_r * np.exp(1j * th[2]),
            small_r * np.exp(1j * (th[1] + th[2] - th[0])),
        ]
        s = xs([a1, a2, a3, a4], [big_r**2 / a1, big_r**2 / a2, b3, b4], c)
        if delta(s) < big_r * (1 - 1e-12) or rank(s) != 6:
            continue
        if shuffle:
            for _ in range(int(rng.integers(0, 4))):
                s = local_symmetry(s, ops[int(rng.integers(6))])
        return s


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


finite = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False)
positive = st.floats(min_value=0.05, max_value=3.0, allow_nan=False)
complexes = st.builds(complex, finite, finite)


@st.composite
def positive_states(draw):
    """Positive X-states: every block satisfies |c_i|^2 <= a_i b_i."""
    a = np.array(draw(st.lists(positive, min_size=4, max_size=4)))
    b = np.array(draw(st.lists(positive, min_size=4, max_size=4)))
    frac = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4)))
    ph = np.array(draw(st.lists(st.floats(0.0, 2 * math.pi), min_size=4, max_size=4)))
    return xs(a, b, frac * np.sqrt(a * b) * np.exp(1j * ph))

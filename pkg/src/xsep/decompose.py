"""Explicit separable decompositions of X-states into pure product states."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import core
from .core import (
    ProductVector,
    SymmetryOp,
    WeightedDecomposition,
    XState,
    delta,
    diagonal_decomposition,
    is_positive,
    local_symmetry,
)
from .criteria import (
    criterion_phase,
    criterion_sufficient_eps,
    decide_common_magnitude,
    is_common_magnitude,
)
from .errors import (
    ConditionsFail,
    NotApplicable,
    NotAState,
    NotSeparable,
    PreconditionFail,
    WrongRank,
)

# sign patterns (y, z factors flipped jointly with x) of the four family members
_FAMILY_SIGNS = ((1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1))


def _close(x: float, y: float, tol: float, scale: float = 1.0) -> bool:
    return abs(x - y) <= tol * max(1.0, scale)


def _require_state(s: XState) -> None:
    if not is_positive(s):
        raise NotAState("X-shaped matrix is not positive semidefinite")


def _flip(v: np.ndarray, sign: int) -> np.ndarray:
    return np.array([v[0], sign * v[1]])


def sign_family(xi: ProductVector) -> List[ProductVector]:
    """The four vectors ``|x±> ⊗ |y±> ⊗ |z±>`` sharing the X-part of ``xi``."""
    return [
        ProductVector(_flip(xi.x, sx), _flip(xi.y, sy), _flip(xi.z, sz))
        for sx, sy, sz in _FAMILY_SIGNS
    ]


def product_xpart_family(xi: ProductVector, tol: float = core.DEFAULT_TOL) -> Tuple[XState, List[ProductVector]]:
    k = xi.ket()
    s = core.xpart(np.outer(k, k.conj()), tol)
    return s, sign_family(xi)


# Rank four ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Rank4Data:
    xi: ProductVector
    family: Tuple[ProductVector, ...]
    alpha: float
    beta: float
    gamma: float
    scale: float

    def decomposition(self) -> WeightedDecomposition:
        return WeightedDecomposition.from_vectors((self.scale / 4.0, v) for v in self.family)


def rank4_conditions(s: XState) -> bool:
    """Product relations ``a1 a4 = a2 a3``, ``sqrt(a_i b_i) = |c_j|``, ``c1 c4 = c2 c3``."""
    _require_state(s)
    a, b, c = s.a, s.b, s.c
    big_r = float(np.abs(c).max())
    if big_r <= s.tol:
        return False
    sc = max(1.0, big_r**2)
    if not _close(a[0] * a[3], a[1] * a[2], s.tol, max(a[0] * a[3], a[1] * a[2])):
        return False
    roots = np.sqrt(a * b)
    mags = np.abs(c)
    if np.max(np.abs(roots[:, None] - mags[None, :])) > s.tol * max(1.0, big_r):
        return False
    return _close(0.0, abs(c[0] * c[3] - c[1] * c[2]), s.tol, sc)


def rank4_data(s: XState, check: bool = True) -> Rank4Data:
    if check and not rank4_conditions(s):
        raise ConditionsFail("state does not satisfy the rank-four relations")
    big_r = float(np.abs(s.c).max())
    a, b = s.a / big_r, s.b / big_r
    th = np.angle(s.c)
    alpha = (-th[1] - th[2]) / 2.0
    beta = (-th[1] + th[3]) / 2.0
    gamma = (-th[2] + th[3]) / 2.0
    ra1 = math.sqrt(a[0])
    xi = ProductVector(
        np.array([ra1, math.sqrt(b[3]) * np.exp(1j * alpha)]) / a[0],
        np.array([ra1, math.sqrt(a[2]) * np.exp(1j * beta)]),
        np.array([ra1, math.sqrt(a[1]) * np.exp(1j * gamma)]),
    )
    return Rank4Data(xi, tuple(sign_family(xi)), float(alpha), float(beta), float(gamma), big_r)


def decompose_rank4(s: XState) -> WeightedDecomposition:
    """Four-term decomposition of a separable non-diagonal rank-four X-state."""
    return rank4_data(s).decomposition()


def _diag_remainder(s: XState, a_used: np.ndarray, b_used: np.ndarray) -> WeightedDecomposition:
    ra = s.a - a_used
    rb = s.b - b_used
    floor = s.tol * s.scale
    # constructions run on states that pass their test only within tolerance
    # can overshoot by a few tol; the verifier decides whether that is acceptable
    if np.min(ra) < -100 * floor or np.min(rb) < -100 * floor:
        raise PreconditionFail("diagonal remainder is negative")
    rest = XState(np.where(ra > floor, ra, 0.0), np.where(rb > floor, rb, 0.0), np.zeros(4), s.tol)
    return diagonal_decomposition(rest)


def decompose_suff4(s: XState) -> WeightedDecomposition:
    """Rank-four part plus diagonal remainder for ``Δ ≥ R = r`` and ``c1 c4 = c2 c3``."""
    mags = np.abs(s.c)
    big_r = float(mags.max())
    if big_r <= s.tol * s.scale:
        return diagonal_decomposition(s)
    if not is_common_magnitude(s):
        raise PreconditionFail("anti-diagonal entries must share one magnitude")
    c = s.c
    if not _close(0.0, abs(c[0] * c[3] - c[1] * c[2]), s.tol, big_r**2):
        raise PreconditionFail("c1 c4 != c2 c3")
    if delta(s) < big_r - s.tol * max(1.0, big_r):
        raise PreconditionFail("Δ < R")

    a, b = s.a / big_r, s.b / big_r
    lo = np.log([1.0 / a[0], 1.0 / b[1], 1.0 / b[2]])
    hi = np.log([b[0], a[1], a[2]])
    hi = np.maximum(hi, lo)  # rounding at the boundary
    # product target inside [1/b4, a4] ∩ [Π lo, Π hi], chosen at its centre
    t_lo = max(-math.log(b[3]), lo.sum())
    t_hi = min(math.log(a[3]), hi.sum())
    target = 0.5 * (t_lo + t_hi)
    span = hi.sum() - lo.sum()
    frac = 0.5 if span <= 0 else min(max((target - lo.sum()) / span, 0.0), 1.0)
    x = np.exp(lo + frac * (hi - lo))
    a_p = np.array([1.0 / x[0], x[1], x[2], x[0] * x[1] * x[2]])
    b_p = 1.0 / a_p
    rank4 = rank4_data(XState(a_p * big_r, b_p * big_r, c, s.tol), check=False).decomposition()
    return rank4 + _diag_remainder(s, a_p * big_r, b_p * big_r)


def common_magnitude_split(s: XState) -> Tuple[float, XState, float, XState]:
    """Write ``s = p ρ1 + q ρ2`` with both ``ρi`` obeying ``c1 c4 = c2 c3``."""
    phi = core.phase_difference(s)
    if phi is None:
        raise PreconditionFail("phase difference undefined")
    half = phi / 2.0
    rr = math.sqrt(1.0 + math.sin(half))
    u = rr * np.exp(1j * half / 2.0)
    v = rr * np.exp(1j * (half / 2.0 - math.pi / 2.0))
    p = float(((1.0 - v) / (u - v)).real)
    p = min(max(p, 0.0), 1.0)
    q = 1.0 - p
    mult_u = np.array([np.conj(u), u, u, np.conj(u)])
    mult_v = np.array([np.conj(v), v, v, np.conj(v)])
    return p, XState(s.a, s.b, s.c * mult_u, s.tol), q, XState(s.a, s.b, s.c * mult_v, s.tol)


def decompose_common_magnitude(s: XState) -> WeightedDecomposition:
    if s.is_diagonal():
        return diagonal_decomposition(s)
    if not decide_common_magnitude(s):
        raise NotSeparable("common-magnitude state violates the phase criterion")
    p, rho1, q, rho2 = common_magnitude_split(s)
    out = WeightedDecomposition(())
    for w, rho in ((p, rho1), (q, rho2)):
        if w > 0:
            out = out + decompose_suff4(rho).scaled(w)
    return out.merged_basis_terms()


def eps_mixture(s: XState) -> List[Tuple[float, XState]]:
    """Sign-string mixture of common-magnitude states equal to ``s``."""
    mags = np.abs(s.c)
    big_r = float(mags.max())
    phase = np.exp(1j * np.where(mags > s.tol, np.angle(s.c), 0.0))
    lam = 0.5 * (1.0 + mags / big_r)
    out = []
    for eps in itertools.product((1, -1), repeat=4):
        eps = np.array(eps)
        w = float(np.prod(np.where(eps > 0, lam, 1.0 - lam)))
        if w > 0:
            out.append((w, XState(s.a, s.b, big_r * eps * phase, s.tol)))
    return out


def decompose_eps_mixture(s: XState) -> WeightedDecomposition:
    if s.is_diagonal():
        return diagonal_decomposition(s)
    if not criterion_sufficient_eps(s).passed:
        raise PreconditionFail("sufficient criterion does not hold")
    terms = []
    for w, rho in eps_mixture(s):
        terms += decompose_common_magnitude(rho).scaled(w).terms
    return WeightedDecomposition(tuple(terms)).merged_basis_terms()


# Rank five and six -------------------------------------------------------------------

PARTITIONS = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))

# op sequences (applied left to right) moving each partition to {1, 2}
CANONICAL_OPS: Dict[Tuple[int, int], Tuple[SymmetryOp, ...]] = {
    (1, 2): (),
    (1, 3): (SymmetryOp.SWAP_BC,),
    (1, 4): (SymmetryOp.SWAP_AC,),
    (2, 3): (SymmetryOp.FLIP_C, SymmetryOp.SWAP_AC),
    (2, 4): (SymmetryOp.FLIP_C, SymmetryOp.SWAP_BC),
    (3, 4): (SymmetryOp.FLIP_B,),
}


def canonicalize(s: XState, partition: Tuple[int, int]) -> Tuple[XState, Tuple[SymmetryOp, ...]]:
    ops = CANONICAL_OPS[tuple(partition)]
    for op in ops:
        s = local_symmetry(s, op)
    return s, ops


def decanonicalize(d: WeightedDecomposition, ops: Sequence[SymmetryOp]) -> WeightedDecomposition:
    for op in reversed(ops):
        d = d.mapped(op)
    return d


@dataclass(frozen=True)
class Rank6Check:
    separable: bool
    partition: Optional[Tuple[int, int]] = None
    reason: str = ""


def check_rank6_separability(s: XState) -> Rank6Check:
    """Exact separability test for non-diagonal X-states of rank at most six."""
    _require_state(s)
    if s.is_diagonal():
        raise NotApplicable("state is diagonal")
    if core.rank(s) > 6:
        raise NotApplicable("rank exceeds six")
    mags = np.abs(s.c)
    big_r, small_r = float(mags.max()), float(mags.min())
    tol = s.tol * max(1.0, big_r)
    if delta(s) < big_r - tol:
        return Rank6Check(False, reason="Δ < R")
    roots = np.sqrt(s.a * s.b)
    found = None
    for part in PARTITIONS:
        inside = [i - 1 for i in part]
        rest = [j for j in range(4) if j not in inside]
        ok = all(abs(roots[i] - big_r) <= tol and abs(mags[i] - big_r) <= tol for i in inside)
        ok = ok and all(roots[j] >= big_r - tol and abs(mags[j] - small_r) <= tol for j in rest)
        if ok:
            found = part
            break
    if found is None:
        return Rank6Check(False, reason="no admissible partition")
    if small_r > s.tol and not core.phase_identity_holds(s):
        return Rank6Check(False, found, reason="phase identity fails")
    return Rank6Check(True, found)


def _require_low_rank_separable(s: XState) -> Rank6Check:
    check = check_rank6_separability(s)
    if not check.separable:
        raise NotSeparable(f"rank<=6 characterization fails: {check.reason}")
    return check


def decompose_rank6(s: XState) -> WeightedDecomposition:
    """Two rank-four X-states at the midpoint-chord phases plus a diagonal state."""
    check = _require_low_rank_separable(s)
    t, ops = canonicalize(s, check.partition)
    a, b, c = t.a, t.b, t.c
    mags = np.abs(c)
    big_r, small_r = float(mags.max()), float(mags.min())
    phi = math.acos(min(small_r / big_r, 1.0))
    th = np.angle(c)
    if small_r > t.tol:
        th3, th4 = th[2], th[3]
    else:
        # any pair obeying the phase identity; this one puts the first chord at phase 0
        th3 = -phi
        th4 = th[1] - th[0] + th3
    lo = max(a[0] / a[2], a[1] / a[3])
    hi = min(b[3] / b[1], b[2] / b[0])
    lam = 0.5 * (lo + hi)
    a_p = np.array([a[0], a[1], a[0] / lam, a[1] / lam])
    b_p = np.array([b[0], b[1], lam * b[0], lam * b[1]])
    c1 = np.array([c[0], c[1], big_r * np.exp(1j * (phi + th3)), big_r * np.exp(1j * (phi + th4))])
    c2 = np.array([c[0], c[1], big_r * np.exp(1j * (th3 - phi)), big_r * np.exp(1j * (th4 - phi))])
    out = WeightedDecomposition(())
    for cc in (c1, c2):
        out = out + rank4_data(XState(a_p, b_p, cc, t.tol), check=False).decomposition().scaled(0.5)
    out = out + _diag_remainder(t, a_p, b_p)
    return decanonicalize(out, ops)


_RANK4_FILL = {
    0: lambda a: a[1] * a[2] / a[3],
    1: lambda a: a[0] * a[3] / a[2],
    2: lambda a: a[0] * a[3] / a[1],
    3: lambda a: a[1] * a[2] / a[0],
}


def decompose_rank5(s: XState) -> WeightedDecomposition:
    """Unique rank-four part plus a one- or two-term diagonal remainder."""
    _require_state(s)
    if s.is_diagonal() or core.rank(s) != 5:
        raise WrongRank("expected a non-diagonal rank-five state")
    _require_low_rank_separable(s)
    big_r = float(np.abs(s.c).max())
    i4 = int(np.argmax(core._block_ranks(s)))
    d, e = s.a.copy(), s.b.copy()
    d[i4] = _RANK4_FILL[i4](s.a)
    e[i4] = big_r**2 / d[i4]
    rank4 = rank4_data(XState(d, e, s.c, s.tol), check=False).decomposition()
    return rank4 + _diag_remainder(s, d, e)


def gamma(s: XState) -> int:
    """Largest rank among the state and its three partial transposes."""
    _require_state(s)
    inv = core.invariants(s)
    return max(inv.rank, *inv.pt_ranks)


def certificate_low_rank(s: XState) -> WeightedDecomposition:
    """Shortest available certificate for a separable state of rank 4, 5 or 6."""
    from .length import optimal_decompose_rank6

    rk = core.rank(s)
    if rk == 4:
        return decompose_rank4(s)
    if rk == 5:
        return decompose_rank5(s)
    if rk == 6:
        return optimal_decompose_rank6(s)[0]
    raise WrongRank(f"no low-rank certificate for rank {rk}")


def is_extreme_in_SX(s: XState) -> bool:
    """Extreme point of the separable X-states: non-diagonal rank 4 or diagonal rank 1."""
    from .criteria import SEPARABLE, classify

    if classify(s).tag != SEPARABLE:
        raise NotSeparable("state is not certified separable")
    rk = core.rank(s)
    return (not s.is_diagonal() and rk == 4) or (s.is_diagonal() and rk == 1)

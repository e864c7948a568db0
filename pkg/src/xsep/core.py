"""X-shaped three-qubit states, product vectors and their basic invariants.

Basis order is lexicographic in ``A ⊗ B ⊗ C``: index ``4*i + 2*j + k`` for
``|ijk>``. The X-part of an 8x8 matrix is stored as three length-4 arrays:
``a[i]`` sits at diagonal position ``i``, ``b[i]`` at position ``7 - i`` and
``c[i]`` at ``(i, 7 - i)`` (0-based), so ``b`` is kept in the order
``b1..b4`` even though it appears reversed on the diagonal.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import NegativeDiagonal, NotAState, NotHermitian, PhaseUndefined

DEFAULT_TOL = 1e-9
RANK_TOL = 1e-7

_IDX = np.arange(4)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class XState:
    """The X-part ``X(a, b, c)`` of a three-qubit Hermitian matrix.

    States need not have unit trace; every criterion here is homogeneous.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        object.__setattr__(self, "a", _frozen(np.asarray(self.a, dtype=float).reshape(4)))
        object.__setattr__(self, "b", _frozen(np.asarray(self.b, dtype=float).reshape(4)))
        object.__setattr__(self, "c", _frozen(np.asarray(self.c, dtype=complex).reshape(4)))

    # convenience views
    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.c)

    @property
    def scale(self) -> float:
        """Largest entry magnitude, floored at 1; used to scale tolerances."""
        return max(1.0, float(np.max(self.a)), float(np.max(self.b)), float(np.max(np.abs(self.c))))

    def is_diagonal(self) -> bool:
        return bool(np.all(np.abs(self.c) <= self.tol * self.scale))

    def scaled(self, k: float) -> "XState":
        return XState(self.a * k, self.b * k, self.c * k, self.tol)

    def with_tol(self, tol: float) -> "XState":
        return XState(self.a, self.b, self.c, tol)

    def allclose(self, other: "XState", atol: float = 1e-12) -> bool:
        return (
            np.allclose(self.a, other.a, rtol=0, atol=atol)
            and np.allclose(self.b, other.b, rtol=0, atol=atol)
            and np.allclose(self.c, other.c, rtol=0, atol=atol)
        )

    def __repr__(self) -> str:
        return f"XState(a={self.a.tolist()}, b={self.b.tolist()}, c={self.c.tolist()})"


def new_xstate(a: Sequence[float], b: Sequence[float], c: Sequence[complex], tol: float = DEFAULT_TOL) -> XState:
    """Validate and build an :class:`XState`.

    Diagonal entries in ``[-tol, 0)`` are clamped to zero; anything more
    negative raises :class:`NegativeDiagonal` with a 1-based index.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=complex)
    if a.shape != (4,) or b.shape != (4,) or c.shape != (4,):
        raise ValueError("a, b and c must each have exactly 4 entries")
    for name, arr in (("a", a), ("b", b)):
        for i, v in enumerate(arr):
            if not np.isfinite(v):
                raise ValueError(f"{name}[{i + 1}] is not finite")
            if v < -tol:
                raise NegativeDiagonal(i + 1, float(v))
    if not np.all(np.isfinite(c)):
        raise ValueError("c has non-finite entries")
    return XState(np.maximum(a, 0.0), np.maximum(b, 0.0), c, tol)


def embed(s: XState) -> np.ndarray:
    m = np.zeros((8, 8), dtype=complex)
    m[_IDX, _IDX] = s.a
    m[7 - _IDX, 7 - _IDX] = s.b
    m[_IDX, 7 - _IDX] = s.c
    m[7 - _IDX, _IDX] = np.conj(s.c)
    return m


def xpart(m: np.ndarray, tol: float = DEFAULT_TOL) -> XState:
    """Copy the diagonal and anti-diagonal of a Hermitian 8x8 matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (8, 8):
        raise ValueError("expected an 8x8 matrix")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    a = m[_IDX, _IDX].real
    b = m[7 - _IDX, 7 - _IDX].real
    c = m[_IDX, 7 - _IDX]
    # tiny negative diagonals from rounding are clamped by new_xstate
    return new_xstate(a, b, c, tol)


class System(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"


def partial_transpose(s: XState, sys: System | str) -> XState:
    sys = System(sys)
    c = s.c
    if sys is System.A:
        nc = np.conj(c[::-1])
    elif sys is System.B:
        nc = c[[2, 3, 0, 1]]
    else:
        nc = c[[1, 0, 3, 2]]
    return XState(s.a, s.b, nc, s.tol)


def _block_slack(s: XState) -> np.ndarray:
    """Per-block determinant ``a_i b_i - |c_i|^2`` and its tolerance scale."""
    ab = s.a * s.b
    c2 = np.abs(s.c) ** 2
    return ab - c2, np.maximum(np.maximum(ab, c2), 1.0)


def is_positive(s: XState) -> bool:
    det, scale = _block_slack(s)
    return bool(np.all(s.a >= 0) and np.all(s.b >= 0) and np.all(det >= -s.tol * scale))


def _require_state(s: XState) -> None:
    if not is_positive(s):
        raise NotAState("X-shaped matrix is not positive semidefinite")


def is_ppt(s: XState) -> bool:
    """All three partial transposes are positive.

    Since the partial transposes move each ``|c_j|`` into every block, this is
    ``a_i b_i >= |c_j|^2`` for all ``i, j``.
    """
    _require_state(s)
    ab = s.a * s.b
    c2 = np.abs(s.c) ** 2
    scale = np.maximum(np.maximum.outer(ab, c2), 1.0)
    return bool(np.all(ab[:, None] - c2[None, :] >= -s.tol * scale))


def _block_ranks(s: XState) -> np.ndarray:
    det, scale = _block_slack(s)
    ranks = np.full(4, 2)
    zero = (np.abs(s.a) <= s.tol) & (np.abs(s.b) <= s.tol) & (np.abs(s.c) <= s.tol)
    ranks[np.abs(det) <= s.tol * scale] = 1
    ranks[zero] = 0
    return ranks


def rank(s: XState) -> int:
    _require_state(s)
    return int(_block_ranks(s).sum())


def _pt_ranks(s: XState) -> Tuple[int, int, int]:
    return tuple(int(_block_ranks(partial_transpose(s, k)).sum()) for k in System)  # type: ignore[return-value]


def delta(s: XState) -> float:
    """Minimum of the six diagonal geometric means bounding the anti-diagonal."""
    a, b = s.a, s.b
    vals = [math.sqrt(a[i] * b[i]) for i in range(4)]
    vals.append((a[0] * b[1] * b[2] * a[3]) ** 0.25)
    vals.append((b[0] * a[1] * a[2] * b[3]) ** 0.25)
    return float(min(vals))


def phases(s: XState) -> Tuple[Optional[float], ...]:
    return tuple(
        float(np.angle(ci)) if abs(ci) > s.tol else None for ci in s.c
    )


def phase_difference(s: XState) -> Optional[float]:
    """``(θ1 + θ4) - (θ2 + θ3)`` reduced to ``[0, 2π)``, or None if undefined."""
    if np.any(np.abs(s.c) <= s.tol):
        return None
    w = s.c[0] * s.c[3] * np.conj(s.c[1] * s.c[2])
    phi = float(np.angle(w)) % (2 * math.pi)
    if phi >= 2 * math.pi:
        phi = 0.0
    return phi


@dataclass(frozen=True)
class InvariantSummary:
    delta: float
    big_r: float
    small_r: float
    phi: Optional[float]
    thetas: Tuple[Optional[float], ...]
    rank: int
    pt_ranks: Tuple[int, int, int]

    @property
    def p_score(self) -> int:
        return self.rank + sum(self.pt_ranks)

    def to_json(self) -> dict:
        return {
            "delta": self.delta,
            "R": self.big_r,
            "r": self.small_r,
            "phi": self.phi,
            "thetas": list(self.thetas),
            "rank": self.rank,
            "pt_ranks": list(self.pt_ranks),
            "p_score": self.p_score,
        }


def invariants(s: XState) -> InvariantSummary:
    mags = np.abs(s.c)
    return InvariantSummary(
        delta=delta(s),
        big_r=float(mags.max()),
        small_r=float(mags.min()),
        phi=phase_difference(s),
        thetas=phases(s),
        rank=int(_block_ranks(s).sum()),
        pt_ranks=_pt_ranks(s),
    )


def phase_identity_holds(s: XState) -> bool:
    """θ1 + θ4 = θ2 + θ3 (mod 2π), tested on ``c1 c4 conj(c2 c3)``."""
    if np.any(np.abs(s.c) <= s.tol):
        raise PhaseUndefined("phase identity needs every anti-diagonal entry nonzero")
    w = s.c[0] * s.c[3] * np.conj(s.c[1] * s.c[2])
    return bool(abs(w.imag) <= s.tol * abs(w) and w.real > 0)


class SymmetryOp(str, enum.Enum):
    """Local operations that map X-states to X-states."""

    SWAP_BC = "SwapBC"
    SWAP_AC = "SwapAC"
    SWAP_AB = "SwapAB"
    FLIP_A = "FlipA"
    FLIP_B = "FlipB"
    FLIP_C = "FlipC"


_SWAP_AXES = {
    SymmetryOp.SWAP_BC: (0, 2, 1),
    SymmetryOp.SWAP_AC: (2, 1, 0),
    SymmetryOp.SWAP_AB: (1, 0, 2),
}
_FLIP_AXIS = {SymmetryOp.FLIP_A: 0, SymmetryOp.FLIP_B: 1, SymmetryOp.FLIP_C: 2}


def apply_op_dense(m: np.ndarray, op: SymmetryOp) -> np.ndarray:
    """Conjugate an 8x8 matrix by the permutation unitary of ``op``."""
    op = SymmetryOp(op)
    t = np.asarray(m).reshape((2,) * 6)
    if op in _SWAP_AXES:
        p = _SWAP_AXES[op]
        t = t.transpose(p + tuple(3 + q for q in p))
    else:
        ax = _FLIP_AXIS[op]
        t = np.flip(t, axis=(ax, ax + 3))
    return t.reshape(8, 8)


def local_symmetry(s: XState, op: SymmetryOp | str) -> XState:
    return xpart(apply_op_dense(embed(s), SymmetryOp(op)), s.tol)


@dataclass(frozen=True, eq=False)
class ProductVector:
    """``|x> ⊗ |y> ⊗ |z>`` with one 2-component factor per qubit."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = np.array(getattr(self, name), dtype=complex).reshape(2)
            if not v.any():
                raise ValueError(f"factor {name} is the zero vector")
            v.setflags(write=False)
            object.__setattr__(self, name, v)

    def ket(self) -> np.ndarray:
        return (self.x[:, None, None] * self.y[None, :, None] * self.z[None, None, :]).reshape(8)

    def basis_index(self) -> Optional[int]:
        """Index of the computational basis state this vector is proportional to, if any."""
        index = 0
        for f in (self.x, self.y, self.z):
            if f[0] != 0 and f[1] != 0:
                return None
            index = 2 * index + (f[0] == 0)
        return index

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.x) * np.linalg.norm(self.y) * np.linalg.norm(self.z))

    def normalized(self) -> "ProductVector":
        return ProductVector(
            self.x / np.linalg.norm(self.x),
            self.y / np.linalg.norm(self.y),
            self.z / np.linalg.norm(self.z),
        )

    def apply(self, op: SymmetryOp) -> "ProductVector":
        """Image of the vector under the permutation unitary of ``op``."""
        op = SymmetryOp(op)
        f = [self.x, self.y, self.z]
        if op in _SWAP_AXES:
            f = [f[i] for i in _SWAP_AXES[op]]
        else:
            ax = _FLIP_AXIS[op]
            f[ax] = f[ax][::-1]
        return ProductVector(*f)

    def __repr__(self) -> str:
        return f"ProductVector(x={self.x.tolist()}, y={self.y.tolist()}, z={self.z.tolist()})"


def _make_basis_vector(index: int) -> ProductVector:
    bits = [(index >> 2) & 1, (index >> 1) & 1, index & 1]
    return ProductVector(*(np.eye(2, dtype=complex)[bit] for bit in bits))


# product vectors are immutable, so the eight basis states can be shared
_BASIS = tuple(_make_basis_vector(i) for i in range(8))


def basis_vector(index: int) -> ProductVector:
    """Computational basis product vector ``|ijk>`` for ``index = 4i+2j+k``."""
    return _BASIS[index]


@dataclass(frozen=True)
class WeightedDecomposition:
    """A positive combination ``Σ w_k |ξ_k><ξ_k|`` of normalized product states."""

    terms: Tuple[Tuple[float, ProductVector], ...] = field(default_factory=tuple)

    def __post_init__(self):
        terms = tuple((float(w), v) for w, v in self.terms)
        for w, _ in terms:
            if not w > 0:
                raise ValueError(f"non-positive weight {w!r}")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_vectors(cls, items: Iterable[Tuple[float, ProductVector]]) -> "WeightedDecomposition":
        """Absorb vector norms into the weights; drop zero-weight terms."""
        terms = []
        for w, v in items:
            n2 = v.norm**2
            if w * n2 > 0:
                terms.append((w * n2, v.normalized()))
        return cls(tuple(terms))

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __add__(self, other: "WeightedDecomposition") -> "WeightedDecomposition":
        return WeightedDecomposition(self.terms + other.terms)

    def scaled(self, k: float) -> "WeightedDecomposition":
        if k == 0:
            return WeightedDecomposition(())
        return WeightedDecomposition(tuple((w * k, v) for w, v in self.terms))

    def mapped(self, op: SymmetryOp) -> "WeightedDecomposition":
        return WeightedDecomposition(tuple((w, v.apply(op)) for w, v in self.terms))

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    def merged_basis_terms(self) -> "WeightedDecomposition":
        """Combine terms that are the same computational basis state."""
        keep, pooled = [], {}
        for w, v in self.terms:
            i = v.basis_index()
            if i is None:
                keep.append((w, v))
            else:
                pooled[i] = pooled.get(i, 0.0) + w
        keep += [(w, basis_vector(i)) for i, w in sorted(pooled.items())]
        return WeightedDecomposition(tuple(keep))


def diagonal_decomposition(s: XState, min_weight: float = 0.0) -> WeightedDecomposition:
    """Basis-state certificate for the diagonal of ``s`` (anti-diagonal ignored)."""
    diag = np.concatenate([s.a, s.b[::-1]])
    return WeightedDecomposition(
        tuple((float(w), basis_vector(i)) for i, w in enumerate(diag) if w > min_weight)
    )

"""Independent checking machinery.

Everything here works on dense 8x8 matrices or plain callables and does not
reuse the closed-form block logic of :mod:`xsep.core`, so it can serve as an
oracle for it.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .core import (
    ProductVector,
    WeightedDecomposition,
    XState,
    embed,
    new_xstate,
    xpart,
)
from .errors import InvalidProfile, NotHermitian

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
TWO_PI = 2.0 * math.pi


def recompose(d: WeightedDecomposition) -> np.ndarray:
    """``Σ w |ξ><ξ|`` over the normalized vectors of ``d``."""
    if not d.terms:
        return np.zeros((8, 8), dtype=complex)
    xs_, ys_, zs_ = (np.array([getattr(v, f) for _, v in d.terms]) for f in "xyz")
    kets = np.einsum("ni,nj,nk->nijk", xs_, ys_, zs_).reshape(-1, 8)
    kets /= np.linalg.norm(kets, axis=1, keepdims=True)
    w = np.array([w for w, _ in d.terms])
    return (kets.T * w) @ kets.conj()


def decomposition_error(s: XState, d: WeightedDecomposition) -> float:
    target = embed(s)
    return float(np.max(np.abs(recompose(d) - target)))


def verify_decomposition(s: XState, d: WeightedDecomposition, tol: float = 1e-9) -> bool:
    if any(not w > 0 for w in d.weights):
        return False
    target = embed(s)
    return decomposition_error(s, d) <= tol * (1.0 + float(np.max(np.abs(target))))


def _golden_max(f: Callable[[float], float], lo: float, hi: float, width: float) -> Tuple[float, float]:
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > width:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def max_on_circle(
    f: Callable[[np.ndarray], np.ndarray],
    grid_n: int = 4096,
    width: float = 1e-12,
) -> Tuple[float, float]:
    """Global maximum of a 2π-periodic function.

    ``f`` must accept an array of angles. The grid locates every discrete
    local maximum; each is refined by golden-section search on its two
    neighbouring grid cells.

    Returns
    -------
    (arg, value) with ``arg`` in ``[0, 2π)``.
    """
    if grid_n < 64:
        raise ValueError("grid_n must be at least 64")
    h = TWO_PI / grid_n
    grid = np.arange(grid_n) * h
    vals = np.asarray(f(grid), dtype=float)
    best_i = int(np.argmax(vals))
    best = (float(grid[best_i]), float(vals[best_i]))
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    # plateaus can flag many points; only the top few can win
    if peaks.size > 16:
        peaks = peaks[np.argsort(vals[peaks])[-16:]]
    g = lambda t: float(f(np.array([t]))[0])
    for i in peaks:
        t, v = _golden_max(g, grid[i] - h, grid[i] + h, width)
        if v > best[1]:
            best = (t % TWO_PI, v)
    return best


# Hermitian eigensolver --------------------------------------------------------------


def jacobi_eigvalsh(m: np.ndarray, threshold: float = 1e-13, max_sweeps: int = 50) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations.

    Each rotation first removes the phase of the pivot ``m[p, q]`` and then
    applies a real Givens rotation that diagonalizes the 2x2 block.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    norm = max(float(np.linalg.norm(a)), 1e-300)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2)))
        if off <= threshold * norm:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                e = apq / mag
                theta = 0.5 * math.atan2(2.0 * mag, (a[p, p] - a[q, q]).real)
                cs, sn = math.cos(theta), math.sin(theta)
                # columns of g are eigenvectors of the 2x2 block
                g = np.array([[cs, -sn], [sn * e.conjugate(), cs * e.conjugate()]], dtype=complex)
                cols = a[:, [p, q]] @ g
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[q, p] = 0.0
                a[p, q] = 0.0
    return np.sort(np.diag(a).real)


def dense_rank(m: np.ndarray, tol: float = 1e-7) -> int:
    m = np.asarray(m, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.conj().T)) > 1e-9 * scale:
        raise NotHermitian("dense_rank needs a Hermitian matrix")
    ev = jacobi_eigvalsh(m)
    top = float(np.max(np.abs(ev)))
    if top == 0.0:
        return 0
    return int(np.sum(np.abs(ev) > tol * top))


def dense_is_psd(m: np.ndarray, tol: float = 1e-7) -> bool:
    ev = jacobi_eigvalsh(m)
    top = max(float(np.max(np.abs(ev))), 1.0)
    return bool(ev[0] >= -tol * top)


def dense_partial_transpose(m: np.ndarray, sys: str) -> np.ndarray:
    axis = "ABC".index(str(getattr(sys, "value", sys)))
    t = np.asarray(m).reshape((2,) * 6)
    perm = list(range(6))
    perm[axis], perm[axis + 3] = perm[axis + 3], perm[axis]
    return t.transpose(perm).reshape(8, 8)


# Random generators ------------------------------------------------------------------


class ProfileKind(str, enum.Enum):
    PRODUCT_MIXTURE = "product_mixture"
    RANDOM_PPT = "random_ppt"
    NEAR_BOUNDARY = "near_boundary"
    RANDOM_RANK = "random_rank"


# fixed per-kind spawn keys so each profile draws from its own stream
_STREAM_KEY = {
    ProfileKind.PRODUCT_MIXTURE: 1,
    ProfileKind.RANDOM_PPT: 2,
    ProfileKind.NEAR_BOUNDARY: 3,
    ProfileKind.RANDOM_RANK: 4,
}


@dataclass(frozen=True)
class RandomProfile:
    """Recipe for a reproducible batch of random X-states.

    The generator is ``numpy.random.PCG64`` seeded with
    ``SeedSequence(seed, spawn_key=(stream_key, rank))`` where ``stream_key``
    is 1..4 in the order of :class:`ProfileKind`, and ``rank`` is the target
    rank (0 for the other kinds).
    """

    kind: ProfileKind
    seed: int = 0
    count: int = 1
    rank: Optional[int] = None

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ProfileKind(self.kind))
        except ValueError:
            raise InvalidProfile(f"unknown profile kind {self.kind!r}") from None
        if self.count < 0:
            raise InvalidProfile("count must be nonnegative")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidProfile("seed must be an unsigned 64-bit integer")
        if self.kind is ProfileKind.RANDOM_RANK:
            if self.rank is None or not 0 <= self.rank <= 8:
                raise InvalidProfile("random_rank needs a target rank in 0..8")

    @classmethod
    def parse(cls, text: str, seed: int = 0, count: int = 1) -> "RandomProfile":
        """Parse ``product_mixture`` or ``random_rank(6)`` style names."""
        m = re.fullmatch(r"\s*([a-z_]+)\s*(?:\(\s*(\d+)\s*\)|:(\d+))?\s*", text)
        if not m:
            raise InvalidProfile(f"cannot parse profile {text!r}")
        k = m.group(2) or m.group(3)
        return cls(m.group(1), seed, count, int(k) if k is not None else None)

    def rng(self) -> np.random.Generator:
        ss = np.random.SeedSequence(int(self.seed), spawn_key=(_STREAM_KEY[self.kind], self.rank or 0))
        return np.random.Generator(np.random.PCG64(ss))


def _random_qubit(rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=2) + 1j * rng.normal(size=2)


def random_product_vector(rng: np.random.Generator) -> ProductVector:
    return ProductVector(_random_qubit(rng), _random_qubit(rng), _random_qubit(rng))


def _product_mixture(rng: np.random.Generator) -> XState:
    k = int(rng.integers(1, 17))
    w = rng.dirichlet(np.ones(k))
    d = WeightedDecomposition.from_vectors(
        (wi, random_product_vector(rng).normalized()) for wi in w
    )
    return xpart(recompose(d))


def _random_ppt(rng: np.random.Generator) -> XState:
    while True:
        a = rng.uniform(0.05, 1.0, size=4)
        b = rng.uniform(0.05, 1.0, size=4)
        bound = float(np.sqrt(a * b).min())
        mags = rng.uniform(0.0, 1.25 * bound, size=4)
        if mags.max() > bound:
            continue
        c = mags * np.exp(1j * rng.uniform(0, TWO_PI, size=4))
        return new_xstate(a, b, c)


def _near_boundary(rng: np.random.Generator) -> XState:
    from .core import delta

    a = rng.uniform(0.2, 1.0, size=4)
    b = rng.uniform(0.2, 1.0, size=4)
    shape = rng.uniform(0.5, 1.0, size=4) * np.exp(1j * rng.uniform(0, TWO_PI, size=4))
    shape = shape / np.abs(shape).max()
    ratio = rng.uniform(0.9, 1.0)
    d = delta(new_xstate(a, b, np.zeros(4)))
    return new_xstate(a, b, shape * ratio * d)


def _random_rank(rng: np.random.Generator, k: int) -> XState:
    if k >= 4:
        n2, n1, n0 = k - 4, 8 - k, 0
    else:
        n2, n1, n0 = 0, k, 4 - k
    kinds = np.array([2] * n2 + [1] * n1 + [0] * n0)
    rng.shuffle(kinds)
    a, b, c = np.zeros(4), np.zeros(4), np.zeros(4, dtype=complex)
    for i, kind in enumerate(kinds):
        if kind == 0:
            continue
        a[i] = rng.uniform(0.1, 1.0)
        b[i] = rng.uniform(0.1, 1.0)
        ph = np.exp(1j * rng.uniform(0, TWO_PI))
        if kind == 1:
            c[i] = math.sqrt(a[i] * b[i]) * ph
        else:
            c[i] = rng.uniform(0.0, 0.9) * math.sqrt(a[i] * b[i]) * ph
    return new_xstate(a, b, c)


def random_states(profile: RandomProfile) -> List[XState]:
    rng = profile.rng()
    kind = profile.kind
    out = []
    for _ in range(profile.count):
        if kind is ProfileKind.PRODUCT_MIXTURE:
            out.append(_product_mixture(rng))
        elif kind is ProfileKind.RANDOM_PPT:
            out.append(_random_ppt(rng))
        elif kind is ProfileKind.NEAR_BOUNDARY:
            out.append(_near_boundary(rng))
        else:
            out.append(_random_rank(rng, int(profile.rank)))
    return out

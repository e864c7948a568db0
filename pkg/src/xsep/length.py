"""Shortest product-state decompositions of separable rank-six X-states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import core
from .core import ProductVector, SymmetryOp, WeightedDecomposition, XState, basis_vector, embed
from .decompose import (
    _require_low_rank_separable,
    _require_state,
    canonicalize,
    decanonicalize,
    gamma,
)
from .errors import WrongRank
from .oracle import recompose


@dataclass(frozen=True)
class Rank6Plan:
    """Parameters of the optimal construction, in canonical normalized form."""

    partition: Tuple[int, int]
    canonical_ops: Tuple[SymmetryOp, ...]
    scale: float
    t: float
    theta: float
    x: float
    y: float
    r: float
    s: float
    alphas: Tuple[complex, ...]
    betas: Tuple[complex, ...]
    p: Tuple[float, ...]
    q: Tuple[float, ...]
    z: Optional[Tuple[complex, complex]]
    zprime: Optional[Tuple[complex, complex]]
    lam: Optional[float]
    mu: Optional[float]
    gamma_rho: int
    ell_rho: int

    @property
    def A_plus(self) -> float:
        return float(np.dot(self.p, np.abs(self.alphas) ** 2) + np.dot(self.q, np.abs(self.betas) ** 2))

    @property
    def A_minus(self) -> float:
        return float(np.dot(self.p, np.abs(self.alphas) ** 2) - np.dot(self.q, np.abs(self.betas) ** 2))

    @property
    def B_plus(self) -> float:
        return float(np.dot(self.p, np.abs(self.alphas) ** -2) + np.dot(self.q, np.abs(self.betas) ** -2))

    @property
    def B_minus(self) -> float:
        return float(np.dot(self.p, np.abs(self.alphas) ** -2) - np.dot(self.q, np.abs(self.betas) ** -2))

    def to_json(self) -> dict:
        cj = lambda v: [float(np.real(v)), float(np.imag(v))]
        return {
            "partition": list(self.partition),
            "canonical_ops": [op.value for op in self.canonical_ops],
            "scale": self.scale,
            "t": self.t,
            "theta": self.theta,
            "x": self.x,
            "y": self.y,
            "r": self.r,
            "s": self.s,
            "alphas": [cj(v) for v in self.alphas],
            "betas": [cj(v) for v in self.betas],
            "p": list(self.p),
            "q": list(self.q),
            "z": None if self.z is None else [cj(v) for v in self.z],
            "zprime": None if self.zprime is None else [cj(v) for v in self.zprime],
            "lambda": self.lam,
            "mu": self.mu,
            "A_plus": self.A_plus,
            "A_minus": self.A_minus,
            "B_plus": self.B_plus,
            "B_minus": self.B_minus,
            "gamma": self.gamma_rho,
            "length": self.ell_rho,
        }


def _require_rank6(s: XState) -> None:
    _require_state(s)
    if s.is_diagonal() or core.rank(s) != 6:
        raise WrongRank("expected a non-diagonal rank-six state")


def _is_exceptional(t: XState) -> bool:
    """Both product relations ``a1 a4 = a2 a3`` and ``b1 b4 = b2 b3`` fail (canonical form)."""
    a, b = t.a, t.b
    fa = abs(a[0] * a[3] - a[1] * a[2]) > t.tol * max(1.0, a[0] * a[3], a[1] * a[2])
    fb = abs(b[0] * b[3] - b[1] * b[2]) > t.tol * max(1.0, b[0] * b[3], b[1] * b[2])
    return bool(fa and fb)


def length_rank6(s: XState) -> int:
    """Minimal number of product states in a decomposition of ``s``."""
    _require_rank6(s)
    check = _require_low_rank_separable(s)
    t, _ = canonicalize(s, check.partition)
    g = gamma(s)
    if g == 7 and _is_exceptional(t):
        return 8
    return g


def _unit_family(t: float) -> Tuple[Tuple[complex, ...], Tuple[float, ...]]:
    """Unit multipliers and weights with ``Σw = 1/2``, ``Σw u = 0``, ``Σw u^2 = t - 1/2``."""
    if t >= 1.0 - 1e-12:
        return (1.0 + 0j, -1.0 + 0j), (0.25, 0.25)
    w = complex(-t, math.sqrt(max(1.0 - t * t, 0.0)))
    return (1.0 + 0j, w, w.conjugate()), (t / (2 * (1 + t)), 1 / (4 * (1 + t)), 1 / (4 * (1 + t)))


def _ket(mult: complex, sign: int, a, b, h1: complex, h2: complex) -> ProductVector:
    return ProductVector(
        np.array([mult * h1, math.sqrt(b[0])]),
        np.array([h2 / mult, sign * math.sqrt(b[1])]),
        np.array([math.sqrt(a[0]) * h1, sign * math.sqrt(a[1]) * h2]),
    )


def _solve_xy(a, b, tol: float) -> Tuple[float, float, bool]:
    """Sum and product of the two roots, and whether they coincide.

    The roots coincide exactly when ``a3 b3 = 1`` or ``a4 b4 = 1``; testing
    that directly avoids a square root of a rounding-level discriminant.
    """
    u3 = a[2] * b[2] - 1.0
    u4 = a[3] * b[3] - 1.0
    if u3 <= tol and u4 <= tol:
        return 2.0 * a[3], a[3] ** 2, True
    den = b[3] * u3 + a[0] * b[1] * b[2] * u4
    x = 2.0 * (a[2] * b[2] * a[3] * b[3] - 1.0) / den
    y = (a[3] * u3 + b[0] * a[1] * a[2] * u4) / den
    return x, y, u3 <= tol or u4 <= tol


def optimal_decompose_rank6(s: XState) -> Tuple[WeightedDecomposition, Rank6Plan]:
    """Decomposition of a separable rank-six state with the minimal number of terms."""
    _require_rank6(s)
    check = _require_low_rank_separable(s)
    ell = length_rank6(s)
    canon, ops = canonicalize(s, check.partition)
    big_r = float(np.abs(canon.c).max())
    n = canon.scaled(1.0 / big_r)
    a, b, c = n.a, n.b, n.c
    tol = n.tol

    c4 = complex(c[3])
    t = 0.5 * (1.0 + abs(c4))
    theta = 0.5 * float(np.angle(c4)) if abs(c4) > tol else 0.0
    x, y, equal_roots = _solve_xy(a, b, tol * n.scale)
    if equal_roots:
        r = s_root = 0.5 * x
    else:
        r = 0.5 * (x + math.sqrt(max(x * x - 4.0 * y, 0.0)))
        s_root = y / r

    units, weights = _unit_family(t)
    rot = complex(np.exp(1j * theta))
    alphas = tuple(math.sqrt(r) * rot * u for u in units)
    betas = tuple(math.sqrt(s_root) * rot * u for u in units)
    h1, h2 = np.sqrt(complex(c[0])), np.sqrt(complex(c[1]))

    items = [(w, _ket(al, 1, a, b, h1, h2)) for w, al in zip(weights, alphas)]
    items += [(w, _ket(be, -1, a, b, h1, h2)) for w, be in zip(weights, betas)]

    z = zp = lam = mu = None
    gap = abs(r - s_root)
    if gap > 0:
        inv_gap = abs(1.0 / r - 1.0 / s_root)
        lam = (2.0 * a[2] - a[0] * b[1] * x) / (a[0] * b[1] * gap)
        mu = inv_gap / (2.0 * b[3] - (1.0 / r + 1.0 / s_root))
        sgn = 1.0 if s_root > r else -1.0
        k = 1.0 / math.sqrt(2.0)
        z = (
            k * math.sqrt(lam * a[0] * b[1] * gap) * h1,
            sgn * k * math.sqrt(gap / lam) * h2,
        )
        zp = (
            k * math.sqrt(inv_gap / mu) * h1,
            -sgn * k * math.sqrt(mu * a[1] * b[0] * inv_gap) * h2,
        )
        e0, e1 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        items.append((1.0, ProductVector(e0, e1, np.array(z))))
        items.append((1.0, ProductVector(e1, e0, np.array(zp))))

    d = WeightedDecomposition.from_vectors(items)
    # whatever diagonal weight is left is covered by basis states
    resid = np.real(np.diag(embed(n) - recompose(d)))
    floor = tol * n.scale
    d = d + WeightedDecomposition(
        tuple((float(w), basis_vector(i)) for i, w in enumerate(resid) if w > floor)
    )

    plan = Rank6Plan(
        partition=check.partition,
        canonical_ops=ops,
        scale=big_r,
        t=t,
        theta=theta,
        x=x,
        y=y,
        r=r,
        s=s_root,
        alphas=alphas,
        betas=betas,
        p=weights,
        q=weights,
        z=z,
        zprime=zp,
        lam=lam,
        mu=mu,
        gamma_rho=gamma(s),
        ell_rho=ell,
    )
    return decanonicalize(d.scaled(big_r), ops), plan

"""Boundary sweeps over one-parameter families of X-states, located by bisection."""

from __future__ import annotations

import math
from typing import Callable, List, Tuple

import numpy as np

from .core import XState, is_positive, is_ppt, new_xstate
from .criteria import (
    SEPARABLE,
    classify,
    criterion_A,
    criterion_diag,
    criterion_phase,
    criterion_sufficient_eps,
)

FAMILIES = ("example1", "example2", "suffPhi")


def bisect_boundary(pred: Callable[[float], bool], lo: float, hi: float, width: float = 1e-10) -> float:
    """Largest ``t`` in ``[lo, hi]`` with ``pred(t)``, assuming ``pred`` holds on an initial segment."""
    if pred(hi):
        return hi
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def example1_state(r: float, theta: float, tol: float = 1e-9) -> XState:
    """``X(1, 1, (r, r, r e^{iθ}, r))``."""
    return new_xstate(np.ones(4), np.ones(4), [r, r, r * np.exp(1j * theta), r], tol)


def example2_state(p: float, q: float, tol: float = 1e-9) -> XState:
    """``X(1, 1, (p, p, q, -q))``."""
    return new_xstate(np.ones(4), np.ones(4), [p, p, q, -q], tol)


def _is_ppt_state(s: XState) -> bool:
    return is_positive(s) and is_ppt(s)


def example1_rows(samples: int, tol: float = 1e-9) -> List[Tuple[float, ...]]:
    """``(θ, separability edge, PPT edge)`` with the separability edge taken from classify."""
    rows = []
    for theta in np.linspace(0.0, 2.0 * math.pi, samples):
        sep = bisect_boundary(lambda r: classify(example1_state(r, theta, tol)).tag == SEPARABLE, 0.0, 1.5)
        ppt = bisect_boundary(lambda r: _is_ppt_state(example1_state(r, theta, tol)), 0.0, 1.5)
        rows.append((float(theta), sep, ppt))
    return rows


_EXAMPLE2_TESTS = (criterion_diag, criterion_A, criterion_phase, criterion_sufficient_eps)


def example2_rows(samples: int, tol: float = 1e-9) -> List[Tuple[float, ...]]:
    """Edges of each criterion along rays ``ρ (cos ψ, sin ψ)`` of the ``(p, q)`` plane.

    Columns are ``ψ, p, q`` (unit direction), the positivity edge, and the
    largest radius passing the diagonal, ``A``, phase and sufficient tests.
    """
    rows = []
    for psi in np.linspace(0.0, 2.0 * math.pi, samples):
        p, q = math.cos(psi), math.sin(psi)
        p = 0.0 if abs(p) < 1e-15 else p
        q = 0.0 if abs(q) < 1e-15 else q
        cap = 1.0 / max(abs(p), abs(q))
        edges = [
            bisect_boundary(lambda t: test(example2_state(t * p, t * q, tol)).passed, 0.0, cap)
            for test in _EXAMPLE2_TESTS
        ]
        rows.append((float(psi), p, q, cap, *edges))
    return rows


def suff_phi_rows(samples: int, tol: float = 1e-9) -> List[Tuple[float, ...]]:
    """``(φ, inscribed, corner, circumscribed)`` along ``X(1, 1, (R, R, R e^{iφ}, R))``.

    The inscribed edge comes from the sufficient test, the corner from the
    phase test (exact here since the magnitudes agree) and the circumscribed
    edge from the diagonal test.
    """
    rows = []
    for phi in np.linspace(0.0, 2.0 * math.pi, samples):
        edges = [
            bisect_boundary(lambda t: test(example1_state(t, phi, tol)).passed, 0.0, 1.0)
            for test in (criterion_sufficient_eps, criterion_phase, criterion_diag)
        ]
        rows.append((float(phi), *edges))
    return rows


CURVE_HEADERS = {
    "example1": ("theta", "r_separable", "r_ppt"),
    "example2": ("psi", "p", "q", "r_psd", "r_diag", "r_A", "r_phase", "r_suff"),
    "suffPhi": ("phi", "inscribed", "corner", "circumscribed"),
}

CURVE_ROWS = {
    "example1": example1_rows,
    "example2": example2_rows,
    "suffPhi": suff_phi_rows,
}

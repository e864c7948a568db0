"""Separability criteria for X-states and the top-level classifier."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import core
from .core import System, WeightedDecomposition, XState, delta, is_positive, phase_difference
from .errors import NotAState, NotCommonMagnitude
from .oracle import max_on_circle

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one inequality ``lhs <= rhs``; failure certifies entanglement
    for the necessary criteria."""

    name: str
    passed: bool
    lhs: float
    rhs: float
    extra: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed


def _le(lhs: float, rhs: float, tol: float) -> bool:
    return lhs <= rhs + tol * max(1.0, abs(rhs), abs(lhs))


def _require_state(s: XState) -> None:
    if not is_positive(s):
        raise NotAState("X-shaped matrix is not positive semidefinite")


def criterion_diag(s: XState) -> CriterionResult:
    _require_state(s)
    d = delta(s)
    big_r = float(np.abs(s.c).max())
    return CriterionResult("diag", _le(big_r, d, s.tol), big_r, d)


def phase_factor(s: XState) -> float:
    """``sqrt(1 + |sin(φ/2)|)``; 1 when the phase difference is undefined."""
    phi = phase_difference(s)
    if phi is None:
        return 1.0
    return math.sqrt(1.0 + abs(math.sin(phi / 2.0)))


def criterion_phase(s: XState) -> CriterionResult:
    _require_state(s)
    d = delta(s)
    small_r = float(np.abs(s.c).min())
    phi = phase_difference(s)
    if phi is None:
        return CriterionResult("phase", True, 0.0, d, {"phi": None, "r": small_r})
    lhs = small_r * phase_factor(s)
    return CriterionResult("phase", _le(lhs, d, s.tol), lhs, d, {"phi": phi, "r": small_r})


def _anti_diag_objective(c: np.ndarray):
    c1, c2, c3, c4 = (complex(v) for v in c)

    def f(theta):
        e = np.exp(1j * theta)
        return np.abs(c1 * e + c2) + np.abs(c3 * e - c4)

    return f


def a_rho_with_arg(s: XState, grid_n: int = 4096) -> tuple:
    theta, value = max_on_circle(_anti_diag_objective(s.c), grid_n)
    return value / (2.0 * SQRT2), theta


def a_rho(s: XState, grid_n: int = 4096) -> float:
    """``max_θ (|c1 e^{iθ} + c2| + |c3 e^{iθ} - c4|) / (2√2)``."""
    return a_rho_with_arg(s, grid_n)[0]


def criterion_A(s: XState) -> CriterionResult:
    _require_state(s)
    d = delta(s)
    a, theta = a_rho_with_arg(s)
    return CriterionResult("A", _le(a, d, s.tol), a, d, {"theta": theta})


@dataclass(frozen=True)
class WitnessEval:
    z: tuple
    lhs: float
    rhs: float
    tau_star: float
    tol: float = core.DEFAULT_TOL

    @property
    def violation(self) -> bool:
        return not _le(self.lhs, self.rhs, self.tol)

    def to_json(self) -> dict:
        return {
            "z": [[v.real, v.imag] for v in self.z],
            "lhs": self.lhs,
            "rhs": self.rhs,
            "tau_star": self.tau_star,
            "violation": self.violation,
        }


def evaluate_witness(s: XState, z: Sequence[complex]) -> WitnessEval:
    """Evaluate the diagonal/anti-diagonal witness inequality at ``z``.

    ``lhs = |Re(z1 c1 + z2 c2 + z3 c3 + z4 conj(c4))|`` and
    ``rhs = Δ · max_τ (|z1 e^{iτ} + z4| + |z2 e^{iτ} + conj(z3)|)``.
    """
    z = tuple(complex(v) for v in z)
    if len(z) != 4:
        raise ValueError("z must have 4 entries")
    c = s.c
    lhs = abs((z[0] * c[0] + z[1] * c[1] + z[2] * c[2] + z[3] * np.conj(c[3])).real)
    z1, z2, z3, z4 = z

    def g(tau):
        e = np.exp(1j * tau)
        return np.abs(z1 * e + z4) + np.abs(z2 * e + np.conj(z3))

    if all(v == 0 for v in z):
        tau, m = 0.0, 0.0
    else:
        tau, m = max_on_circle(g)
    return WitnessEval(z, float(lhs), float(delta(s) * m), float(tau), s.tol)


def matched_witness(s: XState) -> tuple:
    """The witness ``z`` whose value reproduces the ``Δ ≥ A_ρ`` test.

    With ``θ`` the maximizer of the anti-diagonal objective, ``φ = -arg(c1 e^{iθ} + c2)``
    and ``ψ = -arg(c3 e^{iθ} - c4)``, ``z = (e^{i(θ+φ)}, e^{iφ}, e^{i(θ+ψ)}, -e^{-iψ})``.
    """
    _, theta = a_rho_with_arg(s)
    c1, c2, c3, c4 = (complex(v) for v in s.c)
    e = complex(np.exp(1j * theta))
    phi = -np.angle(c1 * e + c2)
    psi = -np.angle(c3 * e - c4)
    return (
        complex(np.exp(1j * (theta + phi))),
        complex(np.exp(1j * phi)),
        complex(np.exp(1j * (theta + psi))),
        complex(-np.exp(-1j * psi)),
    )


def eps_factor(s: XState) -> float:
    """``sqrt(1 + max(|sin φ/2|, |cos φ/2|))``, or √2 when φ is undefined."""
    phi = phase_difference(s)
    if phi is None:
        return SQRT2
    return math.sqrt(1.0 + max(abs(math.sin(phi / 2.0)), abs(math.cos(phi / 2.0))))


def criterion_sufficient_eps(s: XState) -> CriterionResult:
    """Sufficient condition; passing means a sign-string mixture certificate exists."""
    _require_state(s)
    d = delta(s)
    big_r = float(np.abs(s.c).max())
    lhs = big_r * eps_factor(s)
    return CriterionResult("suff_eps", _le(lhs, d, s.tol), lhs, d)


def is_common_magnitude(s: XState) -> bool:
    m = np.abs(s.c)
    return bool(m.max() - m.min() <= s.tol * max(1.0, float(m.max())))


def decide_common_magnitude(s: XState) -> bool:
    """Exact test for states whose anti-diagonal entries share one magnitude."""
    _require_state(s)
    if not is_common_magnitude(s):
        raise NotCommonMagnitude("anti-diagonal magnitudes differ")
    return criterion_phase(s).passed


# Classification ---------------------------------------------------------------------

NOT_A_STATE = "NotAState"
NPT_ENTANGLED = "NptEntangled"
PPT_ENTANGLED = "PptEntangled"
SEPARABLE = "Separable"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    tag: str
    criterion: Optional[str] = None
    system: Optional[str] = None
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    certificate: Optional[WeightedDecomposition] = None
    detail: dict = field(default_factory=dict)

    @property
    def is_entangled(self) -> bool:
        return self.tag in (NPT_ENTANGLED, PPT_ENTANGLED)

    def to_json(self) -> dict:
        from .serialization import decomposition_to_json

        out: dict = {"tag": self.tag}
        for key in ("criterion", "system", "lhs", "rhs"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.certificate is not None:
            out["certificate"] = decomposition_to_json(self.certificate)
        if self.detail:
            out["detail"] = self.detail
        return out


def _entangled(res: CriterionResult) -> Verdict:
    return Verdict(PPT_ENTANGLED, criterion=res.name, lhs=res.lhs, rhs=res.rhs)


def _certified(s: XState, build, via: str) -> Optional[Verdict]:
    """Run a certificate construction and keep it only if it verifies.

    States passing a test only within tolerance can make a construction fail
    or drift; those fall through to the remaining branches.
    """
    from .errors import XSepError
    from .oracle import decomposition_error, verify_decomposition

    try:
        d = build(s)
    except XSepError as exc:
        log.info("certificate from %s could not be built: %s", via, exc)
        return None
    if verify_decomposition(s, d):
        return Verdict(SEPARABLE, criterion=via, certificate=d)
    log.info("certificate from %s failed verification (err=%.3g)", via, decomposition_error(s, d))
    return None


def classify(s: XState) -> Verdict:
    """Run the decision pipeline: exact branches first, then the necessary
    criteria, then the sufficient one."""
    from . import decompose as dec

    if not is_positive(s):
        return Verdict(NOT_A_STATE)
    for sys in System:
        if not is_positive(core.partial_transpose(s, sys)):
            return Verdict(NPT_ENTANGLED, system=sys.value)

    diagonal = s.is_diagonal()
    if not diagonal and core.rank(s) <= 6:
        check = dec.check_rank6_separability(s)
        if not check.separable:
            return Verdict(
                PPT_ENTANGLED,
                criterion="rank<=6",
                detail={"reason": check.reason},
            )
        v = _certified(s, dec.certificate_low_rank, "rank<=6")
        if v is not None:
            return v

    if diagonal:
        return Verdict(SEPARABLE, criterion="diagonal", certificate=core.diagonal_decomposition(s))

    if is_common_magnitude(s):
        res = criterion_phase(s)
        if not res.passed:
            return _entangled(res)
        v = _certified(s, dec.decompose_common_magnitude, "common_magnitude")
        if v is not None:
            return v

    for test in (criterion_diag, criterion_phase, criterion_A):
        res = test(s)
        if not res.passed:
            return _entangled(res)

    if criterion_sufficient_eps(s).passed:
        v = _certified(s, dec.decompose_eps_mixture, "suff_eps")
        if v is not None:
            return v
    return Verdict(INCONCLUSIVE)

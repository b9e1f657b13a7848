"""Breaking criterion, life-span bounds, and the comparison Riccati system.

Everything here is closed-form arithmetic on the triple (m0, M0, c0): the
initial extremal slopes and the constant bounding the differentiated
nonlocal bracket.  The criterion says breaking is guaranteed when the
initial minimum slope lies below both of

    threshold_from_c0        = -(1/6) (1 + sqrt(1 + 24 c0)),
    threshold_from_max_slope = -(1/12)(1 + sqrt(1 + 24 (M0 + 4 c0))),

in which case two upper bounds on the breaking time are available: a main
bound in closed algebraic form and a refined logarithmic bound that is
never larger.  Domain guards raise DomainError naming the offending
bracket instead of returning NaN, so parameter sweeps stay auditable.

The exploratory riccati_compare integrates the equality version of the
two-slope inequality system; its off-diagonal coupling breaks
quasi-monotonicity, so no trajectory-dominance claim is made and its
blow-up time is reported side by side only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .models import commutator_derivative_supnorm
from .spectral import RealField

__all__ = [
    "RiccatiParams",
    "CriterionVerdict",
    "RiccatiComparison",
    "c0_from_constant",
    "c0_empirical",
    "breaking_condition",
    "lifespan_main",
    "lifespan_refined",
    "riccati_rhs",
    "lifespan_coefficient",
    "riccati_compare",
]


@dataclass(frozen=True)
class RiccatiParams:
    """Initial extremal slopes and bracket constant feeding the criterion."""

    m0: float
    M0: float
    c0: float

    def __post_init__(self) -> None:
        if self.m0 > self.M0:
            raise ValueError(f"m0 ({self.m0}) must not exceed M0 ({self.M0})")
        if self.c0 < 0:
            raise ValueError(f"c0 must be nonnegative, got {self.c0}")


@dataclass(frozen=True)
class CriterionVerdict:
    condition_holds: bool
    threshold_from_c0: float
    threshold_from_max_slope: float
    lifespan_main: float | None = None
    lifespan_refined: float | None = None
    validity_notes: tuple[str, ...] = ()

    @property
    def threshold(self) -> float:
        """The binding threshold: breaking requires m0 strictly below it."""
        return min(self.threshold_from_c0, self.threshold_from_max_slope)


def c0_from_constant(C: float, l2_norm_h0: float) -> float:
    """Bracket constant from a user-supplied embedding constant: C*norm^2."""
    if not C > 0:
        raise ValueError(f"embedding constant must be positive, got {C}")
    if l2_norm_h0 < 0:
        raise ValueError("l2_norm_h0 must be nonnegative")
    return C * l2_norm_h0**2


def c0_empirical(h0: RealField, safety: float = 2.0) -> float:
    """Concrete bracket constant measured on the initial state.

    Returns safety * sup |d/dx of the bracket| at t=0.  The bound monitor in
    the diagnostics validates the choice a posteriori: along breaking runs
    the bracket derivative stays within a small multiple of its initial
    value while the slope diverges.
    """
    if safety < 1.0:
        raise ValueError(f"safety factor must be >= 1, got {safety}")
    return safety * commutator_derivative_supnorm(h0)


def _thresholds(p: RiccatiParams) -> tuple[float, float]:
    th_c0 = -(1.0 + math.sqrt(1.0 + 24.0 * p.c0)) / 6.0
    th_slope = -(1.0 + math.sqrt(1.0 + 24.0 * (p.M0 + 4.0 * p.c0))) / 12.0
    return th_c0, th_slope


def riccati_rhs(m: float, M: float, c0: float) -> float:
    """Right side of the slope inequality: -(3/2)m^2 + (1/4)(M-m) + c0."""
    return -1.5 * m * m + 0.25 * (M - m) + c0


def lifespan_coefficient(p: RiccatiParams) -> float:
    """Decay coefficient of the comparison argument.

    The main life-span bound factors as 2 / (coefficient *
    sqrt(-riccati_rhs(m0, M0, c0))); this returns the coefficient,
    sqrt(6) (3 m0^2 + m0 - 2 c0) / (3 m0^2 + m0/2 - 2 c0).
    """
    den = 3.0 * p.m0**2 + 0.5 * p.m0 - 2.0 * p.c0
    if den == 0.0:
        raise DomainError("lifespan_coefficient: denominator 3 m0^2 + m0/2 - 2 c0 is zero")
    return math.sqrt(6.0) * (3.0 * p.m0**2 + p.m0 - 2.0 * p.c0) / den


def lifespan_main(p: RiccatiParams) -> float:
    """Main upper bound on the breaking time.

    t* = 2 sqrt(3) (3 m0^2 + m0/2 - 2 c0)
         / (3 (3 m0^2 + m0 - 2 c0) sqrt(3 m0^2 - M0/2 + m0/2 - 2 c0)).

    Raises DomainError naming the offending bracket when evaluated outside
    the validity region (all three brackets must be positive).
    """
    num_factor = 3.0 * p.m0**2 + 0.5 * p.m0 - 2.0 * p.c0
    den_factor = 3.0 * p.m0**2 + p.m0 - 2.0 * p.c0
    radicand = 3.0 * p.m0**2 - 0.5 * p.M0 + 0.5 * p.m0 - 2.0 * p.c0
    if num_factor <= 0:
        raise DomainError(f"lifespan_main: numerator factor nonpositive ({num_factor:.6g})")
    if den_factor <= 0:
        raise DomainError(f"lifespan_main: denominator factor nonpositive ({den_factor:.6g})")
    if radicand <= 0:
        raise DomainError(f"lifespan_main: radicand nonpositive ({radicand:.6g})")
    return 2.0 * math.sqrt(3.0) * num_factor / (3.0 * den_factor * math.sqrt(radicand))


def lifespan_refined(p: RiccatiParams) -> float:
    """Refined (logarithmic) upper bound; never exceeds lifespan_main.

    t* = sqrt(3) (3 m0^2 + m0/2 - 2 c0)
         / (3 sqrt(2 c0 - m0/2) (3 m0^2 + m0 - 2 c0))
         * ln[(sqrt(6 m0^2 - M0) + sqrt(4 c0 - m0))
              / (sqrt(6 m0^2 - M0) - sqrt(4 c0 - m0))].
    """
    num_factor = 3.0 * p.m0**2 + 0.5 * p.m0 - 2.0 * p.c0
    den_factor = 3.0 * p.m0**2 + p.m0 - 2.0 * p.c0
    if num_factor <= 0:
        raise DomainError(f"lifespan_refined: numerator factor nonpositive ({num_factor:.6g})")
    if den_factor <= 0:
        raise DomainError(f"lifespan_refined: denominator factor nonpositive ({den_factor:.6g})")
    u_sq = 6.0 * p.m0**2 - p.M0
    v_sq = 4.0 * p.c0 - p.m0
    w_sq = 2.0 * p.c0 - 0.5 * p.m0
    if u_sq <= 0:
        raise DomainError(f"lifespan_refined: 6 m0^2 - M0 nonpositive ({u_sq:.6g})")
    if v_sq <= 0:
        raise DomainError(f"lifespan_refined: 4 c0 - m0 nonpositive ({v_sq:.6g})")
    if w_sq <= 0:
        raise DomainError(f"lifespan_refined: 2 c0 - m0/2 nonpositive ({w_sq:.6g})")
    u, v = math.sqrt(u_sq), math.sqrt(v_sq)
    if not u > v:
        raise DomainError(
            f"lifespan_refined: log argument requires sqrt(6 m0^2 - M0) > "
            f"sqrt(4 c0 - m0) (got {u:.6g} <= {v:.6g})"
        )
    prefactor = math.sqrt(3.0) * num_factor / (3.0 * math.sqrt(w_sq) * den_factor)
    return prefactor * math.log((u + v) / (u - v))


def breaking_condition(p: RiccatiParams) -> CriterionVerdict:
    """Evaluate the breaking criterion and, when it holds, both life spans."""
    th_c0, th_slope = _thresholds(p)
    holds = p.m0 < min(th_c0, th_slope)
    notes: list[str] = []
    t_main = t_refined = None
    if holds:
        t_main = lifespan_main(p)
        t_refined = lifespan_refined(p)
        if p.c0 == 0.0:
            notes.append("c0 = 0: bracket assumed exactly bounded by zero")
    else:
        notes.append(
            f"m0 = {p.m0:.6g} not below threshold {min(th_c0, th_slope):.6g}; "
            "no breaking guarantee"
        )
    return CriterionVerdict(
        condition_holds=holds,
        threshold_from_c0=th_c0,
        threshold_from_max_slope=th_slope,
        lifespan_main=t_main,
        lifespan_refined=t_refined,
        validity_notes=tuple(notes),
    )


@dataclass
class RiccatiComparison:
    """Trajectories of the equality system and its numerical blow-up time.

    Exploratory: the coupled system is not quasi-monotone, so these curves
    are a companion diagnostic, not a proven bound on the true slopes.
    """

    t: np.ndarray
    M: np.ndarray
    m: np.ndarray
    blowup_time: float | None
    blew_up: bool


def riccati_compare(
    p: RiccatiParams,
    dt: float,
    t_end: float,
    blowup_magnitude: float = 1e6,
) -> RiccatiComparison:
    """Integrate M' = riccati_rhs(M, .), m' = riccati_rhs(m, .) with RK4.

    Marches the equality version of the two-slope system from (M0, m0)
    until t_end or until |m| or |M| exceeds blowup_magnitude, whichever
    comes first.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")

    def f(y: np.ndarray) -> np.ndarray:
        M, m = y
        coupling = 0.25 * (M - m) + p.c0
        return np.array([-1.5 * M * M + coupling, -1.5 * m * m + coupling])

    y = np.array([p.M0, p.m0], dtype=float)
    t = 0.0
    ts, Ms, ms = [t], [y[0]], [y[1]]
    blowup_time = None
    while t < t_end - 1e-15:
        k1 = f(y)
        k2 = f(y + 0.5 * dt * k1)
        k3 = f(y + 0.5 * dt * k2)
        k4 = f(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += dt
        if not np.isfinite(y).all() or np.max(np.abs(y)) >= blowup_magnitude:
            blowup_time = t
            break
        ts.append(t)
        Ms.append(y[0])
        ms.append(y[1])
    return RiccatiComparison(
        t=np.array(ts),
        M=np.array(Ms),
        m=np.array(ms),
        blowup_time=blowup_time,
        blew_up=blowup_time is not None,
    )

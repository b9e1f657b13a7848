"""Per-step measurement and post-run analysis of trajectories.

measure() samples everything tracked along a run: conserved integrals,
extremal slopes with their locations, bound monitors, and the spectral
tail fraction used as the resolution guard.  The series operations consume
sequences of records: Riccati-inequality residuals, blow-up-time
extrapolation from the reciprocal slope, and bound checks.

Extrema are grid extrema (no sub-grid interpolation; ties broken leftmost).
The tail fraction is the modal energy in the top sixth of the
dealias-retained band over the energy in all nonzero modes, so it measures
how much of the actively evolving spectrum has reached the resolution
ceiling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.fft as _fft

from .errors import FitError, NumericalFailureError
from .models import _commutator_dx_spectrum
from .spectral import Grid, RealField

__all__ = [
    "DiagnosticsRecord",
    "RateFit",
    "BoundViolation",
    "RiccatiResiduals",
    "measure",
    "riccati_residuals",
    "extrapolate_blowup_time",
    "bound_monitors",
    "subsample_uniform",
]

SERIES_COLUMNS = (
    "t",
    "mass",
    "energy",
    "m",
    "M",
    "x_at_m",
    "x_at_M",
    "h_inf",
    "comm_dx_sup",
    "lx_hx_sup",
    "tail_fraction",
    "dt_used",
)


@dataclass(slots=True)
class DiagnosticsRecord:
    """One time sample of every tracked scalar."""

    t: float
    mass: float
    energy: float
    m: float
    M: float
    x_at_m: float
    x_at_M: float
    h_inf: float
    comm_dx_sup: float
    lx_hx_sup: float
    tail_fraction: float
    dt_used: float

    def as_row(self) -> tuple[float, ...]:
        return tuple(getattr(self, c) for c in SERIES_COLUMNS)


@dataclass(slots=True)
class RateFit:
    """Least-squares line through (t, 1/m): root and slope of the fit."""

    T_est: float
    slope: float
    r_squared: float
    window: tuple[float, float]


@dataclass(slots=True)
class BoundViolation:
    name: str
    value: float
    bound: float

    @property
    def excess(self) -> float:
        return self.value - self.bound


@dataclass(slots=True)
class RiccatiResiduals:
    """Residuals of the extremal-slope differential inequalities.

    r_m and r_M are (finite-difference derivative) minus (inequality
    right-hand side); nonpositive values mean the inequality is satisfied.
    Interior samples only.
    """

    t: np.ndarray
    r_m: np.ndarray
    r_M: np.ndarray


def _tail_fraction(H: np.ndarray, grid: Grid) -> float:
    J = grid.dealias_limit
    lo = int(np.ceil(5 * J / 6))
    power = np.abs(H[1:]) ** 2  # mean mode excluded
    total = float(power.sum())
    if total == 0.0:
        return 0.0
    return float(power[lo - 1 : J].sum() / total)


def measure(
    h: RealField, t: float, dt: float, H: np.ndarray | None = None
) -> DiagnosticsRecord:
    """Compute a full DiagnosticsRecord for the state h at time t.

    dt is recorded verbatim as dt_used (the step that produced this state;
    0.0 for the initial record).  H may carry a precomputed half-spectrum
    of h.values to share work with a caller that already transformed it.
    """
    h.require_finite(f"measure at t={t}")
    g = h.grid
    n, dx, x = g.n_points, g.dx, g.x
    v = h.values

    if H is None:
        H = _fft.rfft(v)
    hx = _fft.irfft(g._mult_ddx * H, n)
    i_min = int(np.argmin(hx))
    i_max = int(np.argmax(hx))
    lxhx = _fft.irfft(g._mult_smoothed_dx * (g._mult_ddx * H), n)
    comm_dx = _fft.irfft(_commutator_dx_spectrum(v, g, H), n)

    rec = DiagnosticsRecord(
        t=float(t),
        mass=float(dx * v.sum()),
        energy=float(dx * (v * v).sum()),
        m=float(hx[i_min]),
        M=float(hx[i_max]),
        x_at_m=float(x[i_min]),
        x_at_M=float(x[i_max]),
        h_inf=float(np.max(np.abs(v))),
        comm_dx_sup=float(np.max(np.abs(comm_dx))),
        lx_hx_sup=float(np.max(np.abs(lxhx))),
        tail_fraction=_tail_fraction(H, g),
        dt_used=float(dt),
    )
    if not np.isfinite(rec.as_row()).all():
        raise NumericalFailureError(f"non-finite diagnostics at t={t}")
    return rec


def riccati_residuals(
    series: Sequence[DiagnosticsRecord], c0: float
) -> RiccatiResiduals:
    """Residuals of M' <= -(3/2)M^2 + (1/4)(M-m) + c0 and its m twin.

    Derivatives are centered finite differences on the (possibly nonuniform)
    sample times; residuals are returned for interior samples.  Grid-sampled
    extrema carry O(dx^2) jitter, so differentiate over a cadence matched to
    the dynamics (see subsample_uniform), and judge violations against a
    slack budget rather than pointwise.
    """
    if len(series) < 3:
        raise ValueError(f"need at least 3 records, got {len(series)}")
    if c0 < 0:
        raise ValueError(f"c0 must be nonnegative, got {c0}")
    t = np.array([r.t for r in series])
    m = np.array([r.m for r in series])
    M = np.array([r.M for r in series])
    dm = np.gradient(m, t, edge_order=2)
    dM = np.gradient(M, t, edge_order=2)
    phi_m = -1.5 * m**2 + 0.25 * (M - m) + c0
    phi_M = -1.5 * M**2 + 0.25 * (M - m) + c0
    sl = slice(1, -1)
    return RiccatiResiduals(t=t[sl], r_m=(dm - phi_m)[sl], r_M=(dM - phi_M)[sl])


def subsample_uniform(
    series: Sequence[DiagnosticsRecord], n_samples: int
) -> list[DiagnosticsRecord]:
    """Pick records closest to n_samples uniformly spaced times.

    Adaptive runs concentrate records where dt is tiny; differentiating the
    extremal slopes there amplifies grid-sampling jitter.  Resampling to the
    run's own timescale keeps finite differences meaningful.
    """
    if n_samples < 3:
        raise ValueError("n_samples must be >= 3")
    t = np.array([r.t for r in series])
    targets = np.linspace(t[0], t[-1], n_samples)
    idx = np.unique(np.searchsorted(t, targets).clip(0, len(t) - 1))
    return [series[i] for i in idx]


def extrapolate_blowup_time(
    series: Sequence[DiagnosticsRecord],
    tail_fraction_max: float = 1e-6,
) -> RateFit:
    """Fit 1/m against t over the last decade of slope growth.

    The reciprocal of a slope blowing up like -c/(T-t) is a line hitting
    zero at T; the fitted slope is the rate constant (3/2 for this model)
    and the root is the blow-up time estimate.  Samples recorded after the
    spectral tail exceeded tail_fraction_max are excluded, the fit window is
    |m| in [0.1*|m_final|, |m_final|], and the series must exhibit at least
    a tenfold slope growth.
    """
    t = np.array([r.t for r in series])
    m = np.array([r.m for r in series])
    tail = np.array([r.tail_fraction for r in series])

    bad = np.nonzero(tail > tail_fraction_max)[0]
    if bad.size:
        t, m = t[: bad[0]], m[: bad[0]]
    if t.size < 5:
        raise FitError("insufficient window: fewer than 5 usable samples")

    m_final = np.abs(m).max()
    if m_final < 10.0 * abs(m[0]) * (1.0 - 1e-12):
        raise FitError(
            f"insufficient window: |m| grew only {m_final / abs(m[0]):.2f}x "
            "(need 10x)"
        )
    sel = np.abs(m) >= 0.1 * m_final
    t_w, m_w = t[sel], m[sel]
    if t_w.size < 5:
        raise FitError("insufficient window: fewer than 5 samples in last decade")

    inv = 1.0 / m_w
    if inv[-1] <= inv[0]:
        raise FitError("1/m not increasing across the fit window")

    A = np.column_stack([t_w, np.ones_like(t_w)])
    (slope, intercept), *_ = np.linalg.lstsq(A, inv, rcond=None)
    if slope <= 0:
        raise FitError(f"nonpositive fitted rate {slope:.3e}")
    pred = A @ (slope, intercept)
    ss_res = float(np.sum((inv - pred) ** 2))
    ss_tot = float(np.sum((inv - inv.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return RateFit(
        T_est=float(-intercept / slope),
        slope=float(slope),
        r_squared=float(r2),
        window=(float(t_w[0]), float(t_w[-1])),
    )


def bound_monitors(
    h: RealField,
    record: DiagnosticsRecord,
    energy0: float | None = None,
    slack: float = 1e-9,
) -> list[BoundViolation]:
    """Check the analytic bounds on the smoothed slope, returning breaches.

    Two bounds are checked (violations are data, not exceptions):

    * kernel-split bound: lx_hx_sup <= (M - m)/2, from splitting the
      derivative kernel into its one-sided exponential halves;
    * smoothing bound: lx_hx_sup <= 0.5*sqrt(energy0) + h_inf, since the
      smoothed slope equals (smoothed field) - field pointwise and the
      kernel has unit-half L2 norm.

    energy0 defaults to the record's own energy (energy is conserved along
    runs, so the initial value may be substituted).
    """
    h.require_finite("bound_monitors input")
    e0 = record.energy if energy0 is None else energy0
    out = []
    split_bound = 0.5 * (record.M - record.m) + slack
    if record.lx_hx_sup > split_bound:
        out.append(BoundViolation("kernel_split", record.lx_hx_sup, split_bound))
    smooth_bound = 0.5 * np.sqrt(max(e0, 0.0)) + record.h_inf + slack
    if record.lx_hx_sup > smooth_bound:
        out.append(BoundViolation("smoothing", record.lx_hx_sup, smooth_bound))
    return out

"""Time integration: classical RK4 with a blow-up-aware step controller.

A run marches the semi-discrete system h' = rhs(h, kind) and measures a
DiagnosticsRecord at every step.  In adaptive mode the step size follows
the known blow-up structure,

    dt = min(dt0, c / (1 + max(|m|, M))),   c = dt0 * (1 + |m(0)|),

so dt * |m| stays bounded as the slope diverges; a ratchet keeps dt from
growing while |m| is still growing.  Stopping conditions, checked on each
fresh record:

* BREAKING_DETECTED   |m| >= slope_blowup_threshold, or the controller
                      asks for dt < dt_min (floor backstop);
* RESOLUTION_LOST     spectral tail fraction above its ceiling;
* HORIZON_REACHED     t reached t_max (the final step is clipped to land
                      exactly on the horizon);
* NUMERICAL_FAILURE   NaN/Inf anywhere.

Runs are strictly sequential and deterministic; concurrent runs share
nothing mutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.fft as _fft

from .diagnostics import DiagnosticsRecord, measure
from .errors import NumericalFailureError
from .models import ModelKind, _rhs_values
from .spectral import RealField

__all__ = [
    "StepperConfig",
    "StopReason",
    "RunTrajectory",
    "step_rk4",
    "run",
    "richardson_order_estimate",
]


@dataclass(frozen=True)
class StepperConfig:
    dt0: float
    t_max: float
    adaptive: bool = False
    dt_min: float = 1e-12
    slope_blowup_threshold: float = 1e4
    spectral_tail_fraction_max: float = 1e-6
    record_every: int = 50

    def __post_init__(self) -> None:
        if not (self.dt0 > 0 and self.t_max > 0):
            raise ValueError("dt0 and t_max must be positive")
        if not self.dt_min < self.dt0:
            raise ValueError(f"dt_min ({self.dt_min}) must be below dt0 ({self.dt0})")
        if not (self.slope_blowup_threshold > 0 and self.spectral_tail_fraction_max > 0):
            raise ValueError("thresholds must be positive")
        if not 0 < self.spectral_tail_fraction_max < 1:
            raise ValueError("spectral_tail_fraction_max must lie in (0, 1)")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")


class StopReason(Enum):
    HORIZON_REACHED = "horizon-reached"
    BREAKING_DETECTED = "breaking-detected"
    RESOLUTION_LOST = "resolution-lost"
    NUMERICAL_FAILURE = "numerical-failure"


@dataclass
class RunTrajectory:
    """Everything a run produces: dense records, sparse snapshots, verdict."""

    records: list[DiagnosticsRecord]
    snapshots: list[tuple[float, RealField]]
    stop: StopReason
    t_final: float
    steps_taken: int
    h_final: RealField

    @property
    def series(self) -> np.ndarray:
        """Records as a (n_records, 12) float array in schema order."""
        return np.array([r.as_row() for r in self.records])


def _step_rk4_values(h, dt, grid, kind, H=None):
    k1 = _rhs_values(h, grid, kind, H)
    k2 = _rhs_values(h + 0.5 * dt * k1, grid, kind)
    k3 = _rhs_values(h + 0.5 * dt * k2, grid, kind)
    k4 = _rhs_values(h + dt * k3, grid, kind)
    return h + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_rk4(h: RealField, dt: float, kind: ModelKind) -> RealField:
    """One classical four-stage Runge-Kutta step of size dt."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    h.require_finite("step_rk4 input")
    out = _step_rk4_values(h.values, dt, h.grid, kind)
    if not np.isfinite(out).all():
        raise NumericalFailureError(f"non-finite state after step of dt={dt}")
    return RealField(h.grid, out)


def run(h0: RealField, kind: ModelKind, cfg: StepperConfig) -> RunTrajectory:
    """March h0 until a stopping condition fires; diagnostics every step."""
    h0.require_finite("run initial data")
    grid = h0.grid
    h = h0.values.copy()
    t = 0.0
    dt_prev_used = 0.0
    dt_ctrl_prev = math.inf
    abs_m_prev = math.inf
    c_adapt = None
    records: list[DiagnosticsRecord] = []
    snapshots: list[tuple[float, RealField]] = [(0.0, RealField(grid, h.copy()))]
    steps = 0
    stop = None

    while True:
        if not np.isfinite(h).all():
            stop = StopReason.NUMERICAL_FAILURE
            break
        H = _fft.rfft(h)
        try:
            rec = measure(RealField(grid, h), t, dt_prev_used, H=H)
        except NumericalFailureError:
            stop = StopReason.NUMERICAL_FAILURE
            break
        records.append(rec)
        if c_adapt is None:
            c_adapt = cfg.dt0 * (1.0 + abs(rec.m))

        if abs(rec.m) >= cfg.slope_blowup_threshold:
            stop = StopReason.BREAKING_DETECTED
            break
        if rec.tail_fraction > cfg.spectral_tail_fraction_max:
            stop = StopReason.RESOLUTION_LOST
            break
        if t >= cfg.t_max * (1.0 - 1e-14):
            stop = StopReason.HORIZON_REACHED
            break

        if cfg.adaptive:
            dt = min(cfg.dt0, c_adapt / (1.0 + max(abs(rec.m), rec.M)))
            if abs(rec.m) > abs_m_prev:
                dt = min(dt, dt_ctrl_prev)  # never grow dt while |m| grows
            if dt < cfg.dt_min:
                stop = StopReason.BREAKING_DETECTED
                break
            dt_ctrl_prev = dt
            abs_m_prev = abs(rec.m)
        else:
            dt = cfg.dt0

        landing = t + dt >= cfg.t_max * (1.0 - 1e-14)
        if landing:
            dt = cfg.t_max - t

        # a non-finite step result is caught by the check at the loop top
        h = _step_rk4_values(h, dt, grid, kind, H)
        t = cfg.t_max if landing else t + dt
        steps += 1
        dt_prev_used = dt
        if steps % cfg.record_every == 0:
            snapshots.append((t, RealField(grid, h.copy())))

    h_final = RealField(grid, h.copy())
    if np.isfinite(h).all() and snapshots[-1][0] < t:
        snapshots.append((t, RealField(grid, h.copy())))
    return RunTrajectory(
        records=records,
        snapshots=snapshots,
        stop=stop,
        t_final=records[-1].t if records else t,
        steps_taken=steps,
        h_final=h_final,
    )


def richardson_order_estimate(
    h0: RealField,
    kind: ModelKind,
    dt: float,
    n_halvings: int = 2,
    window_steps: int = 8,
) -> float:
    """Empirical convergence order from successive step halvings.

    Integrates to t_end = window_steps*dt with steps dt, dt/2, ...,
    dt/2**n_halvings, compares against a dt/2**(n_halvings+2) reference, and
    returns the mean log2 error ratio.  Returns NaN (indeterminate) when the
    errors sit at rounding level, e.g. for steady states.
    """
    if n_halvings < 1:
        raise ValueError("n_halvings must be >= 1")
    h0.require_finite("richardson_order_estimate input")
    grid = h0.grid
    t_end = window_steps * dt

    def integrate(step: float) -> np.ndarray:
        n_steps = round(t_end / step)
        h = h0.values.copy()
        for _ in range(n_steps):
            h = _step_rk4_values(h, step, grid, kind)
        return h

    reference = integrate(dt / 2 ** (n_halvings + 2))
    scale = float(np.max(np.abs(reference)))
    errors = []
    for p in range(n_halvings + 1):
        sol = integrate(dt / 2**p)
        errors.append(float(np.max(np.abs(sol - reference))))
    if scale == 0.0 or any(e < 1e-14 * scale for e in errors):
        return math.nan
    ratios = [math.log2(errors[i] / errors[i + 1]) for i in range(n_halvings)]
    return float(np.mean(ratios))

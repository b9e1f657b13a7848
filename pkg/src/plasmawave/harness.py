"""Experiment harness: configuration, initial data, runs, sweeps, reports.

A RunConfig fully describes one experiment (grid, stepper, model, initial
datum, bracket-constant policy, output directory) and round-trips through
JSON, so every result carries an exact echo of what produced it.
run_single executes the whole workflow: build the datum, evaluate the
breaking criterion, march the PDE, fit the blow-up rate, and persist

* ``series.csv``     one row per step, fixed column schema,
* ``snapshots.csv``  (t, x, h) at the snapshot cadence,
* ``result.json``    verdict, stop reason, fit, config echo.

run_sweep repeats a base config along one scalar axis (optionally in a
process pool; runs are independent) and writes a one-row-per-run summary
CSV.  emit_report turns results into plot-ready data files.
"""

from __future__ import annotations

import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .criteria import (
    CriterionVerdict,
    RiccatiParams,
    breaking_condition,
    c0_empirical,
    c0_from_constant,
)
from .diagnostics import SERIES_COLUMNS, RateFit, extrapolate_blowup_time
from .errors import ConfigError, FitError, NumericalFailureError
from .models import ModelKind
from .spectral import Grid, RealField, ddx
from .stepping import RunTrajectory, StepperConfig, StopReason, run

__all__ = [
    "InitialFamily",
    "InitialDataSpec",
    "RunConfig",
    "RunResult",
    "build_initial_data",
    "run_single",
    "run_sweep",
    "emit_report",
    "load_config",
    "save_config",
    "SWEEP_SUMMARY_COLUMNS",
]

SWEEP_SUMMARY_COLUMNS = (
    "value",
    "condition_holds",
    "t_star_main",
    "t_star_refined",
    "T_sim",
    "rate_slope",
    "stop_reason",
)


class InitialFamily(Enum):
    GAUSSIAN = "gaussian"
    DGAUSSIAN = "dgaussian"
    SECH_SQUARED = "sech-squared"
    CUSTOM = "custom"


@dataclass(frozen=True)
class InitialDataSpec:
    """Initial datum description.

    The dgaussian family -a*(x-c)*exp(-(x-c)^2/(2 w^2)) has its minimum
    slope exactly -a at the center for every width, which gives direct
    slope control.  When target_m0 is set the amplitude is rescaled so the
    realized minimum grid slope equals it exactly (slope is linear in
    amplitude).  The custom family takes a callable of x and is usable from
    the API only, not from JSON configs.
    """

    family: InitialFamily
    amplitude: float = 1.0
    width: float = 1.0
    center: float = 0.0
    target_m0: float | None = None
    custom_fn: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise ConfigError(f"width must be positive, got {self.width}")
        if self.family is InitialFamily.CUSTOM and self.custom_fn is None:
            raise ConfigError("custom family requires custom_fn")


@dataclass(frozen=True)
class RunConfig:
    grid: Grid
    stepper: StepperConfig
    model: ModelKind
    initial: InitialDataSpec
    c0_mode: str = "empirical"
    c0_safety: float = 2.0
    c0_constant: float | None = None
    output_dir: str = "out"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.c0_mode not in ("empirical", "explicit"):
            raise ConfigError(f"c0_mode must be 'empirical' or 'explicit', got {self.c0_mode!r}")
        if self.c0_mode == "explicit" and self.c0_constant is None:
            raise ConfigError("explicit c0_mode requires c0_constant")

    def to_dict(self) -> dict:
        d = {
            "grid": {"n_points": self.grid.n_points, "half_length": self.grid.half_length},
            "stepper": dataclasses.asdict(self.stepper),
            "model": self.model.value,
            "initial": {
                "family": self.initial.family.value,
                "amplitude": self.initial.amplitude,
                "width": self.initial.width,
                "center": self.initial.center,
                "target_m0": self.initial.target_m0,
            },
            "c0_mode": self.c0_mode,
            "c0_safety": self.c0_safety,
            "c0_constant": self.c0_constant,
            "output_dir": str(self.output_dir),
            "seed": self.seed,
        }
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        try:
            known = {
                "grid",
                "stepper",
                "model",
                "initial",
                "c0_mode",
                "c0_safety",
                "c0_constant",
                "output_dir",
                "seed",
            }
            unknown = set(d) - known
            if unknown:
                raise ConfigError(f"unknown config keys: {sorted(unknown)}")
            init = dict(d["initial"])
            fam = InitialFamily(init.pop("family"))
            return cls(
                grid=Grid(**d["grid"]),
                stepper=StepperConfig(**d["stepper"]),
                model=ModelKind(d["model"]),
                initial=InitialDataSpec(family=fam, **init),
                c0_mode=d.get("c0_mode", "empirical"),
                c0_safety=d.get("c0_safety", 2.0),
                c0_constant=d.get("c0_constant"),
                output_dir=d.get("output_dir", "out"),
                seed=d.get("seed", 0),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"invalid configuration: {exc}") from exc


def load_config(path: str | Path) -> RunConfig:
    with open(path) as fh:
        return RunConfig.from_dict(json.load(fh))


def save_config(cfg: RunConfig, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


@dataclass
class RunResult:
    """Everything run_single produces, plus paths to the persisted files."""

    config: RunConfig
    verdict: CriterionVerdict
    stop: StopReason
    c0: float
    m0: float
    M0: float
    T_sim: float | None
    rate_fit: RateFit | None
    theorem_consistent: bool
    consistency_note: str
    series_path: Path | None
    snapshots_path: Path | None
    result_path: Path | None
    trajectory: RunTrajectory | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "stop": self.stop.value,
            "c0": self.c0,
            "m0": self.m0,
            "M0": self.M0,
            "T_sim": self.T_sim,
            "verdict": {
                "condition_holds": self.verdict.condition_holds,
                "threshold_from_c0": self.verdict.threshold_from_c0,
                "threshold_from_max_slope": self.verdict.threshold_from_max_slope,
                "t_star_main": self.verdict.lifespan_main,
                "t_star_refined": self.verdict.lifespan_refined,
                "validity_notes": list(self.verdict.validity_notes),
            },
            "rate_fit": None
            if self.rate_fit is None
            else {
                "T_est": self.rate_fit.T_est,
                "slope": self.rate_fit.slope,
                "r_squared": self.rate_fit.r_squared,
                "window": list(self.rate_fit.window),
            },
            "theorem_consistent": self.theorem_consistent,
            "consistency_note": self.consistency_note,
            "series_path": None if self.series_path is None else str(self.series_path),
            "snapshots_path": None
            if self.snapshots_path is None
            else str(self.snapshots_path),
        }


# --------------------------------------------------------------------------
# initial data


def build_initial_data(spec: InitialDataSpec, grid: Grid) -> RealField:
    """Sample the requested family; rescale exactly when target_m0 is set."""
    u = (grid.x - spec.center) / spec.width
    a = spec.amplitude
    if spec.family is InitialFamily.GAUSSIAN:
        values = a * np.exp(-0.5 * u**2)
    elif spec.family is InitialFamily.DGAUSSIAN:
        values = -a * (grid.x - spec.center) * np.exp(-0.5 * u**2)
    elif spec.family is InitialFamily.SECH_SQUARED:
        values = a / np.cosh(u) ** 2
    elif spec.family is InitialFamily.CUSTOM:
        values = np.asarray(spec.custom_fn(grid.x), dtype=float)
        if values.shape != grid.x.shape:
            raise ConfigError("custom_fn must return one value per grid node")
    else:
        raise ConfigError(f"unsupported family: {spec.family!r}")

    h = RealField(grid, values)
    if spec.target_m0 is not None:
        realized = float(np.min(ddx(h).values))
        if realized == 0.0:
            raise ConfigError("cannot rescale a slope-free datum to target_m0")
        scale = spec.target_m0 / realized
        if scale <= 0:
            raise ConfigError(
                f"target_m0 = {spec.target_m0} has the wrong sign for this "
                f"family (realized minimum slope {realized:.6g})"
            )
        h = RealField(grid, values * scale)
    return h


# --------------------------------------------------------------------------
# persistence helpers


def _fmt(v: float) -> str:
    return repr(float(v))


def _write_series_csv(path: Path, trajectory: RunTrajectory) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(SERIES_COLUMNS) + "\n")
        for rec in trajectory.records:
            fh.write(",".join(_fmt(v) for v in rec.as_row()) + "\n")


def _write_snapshots_csv(path: Path, trajectory: RunTrajectory) -> None:
    with open(path, "w") as fh:
        fh.write("t,x,h\n")
        for t, snap in trajectory.snapshots:
            ts = _fmt(t)
            for xv, hv in zip(snap.grid.x, snap.values):
                fh.write(f"{ts},{_fmt(xv)},{_fmt(hv)}\n")


# --------------------------------------------------------------------------
# single run


def _theorem_consistency(
    verdict: CriterionVerdict, stop: StopReason, t_final: float
) -> tuple[bool, str]:
    if not verdict.condition_holds:
        return True, "breaking condition not met; criterion makes no claim"
    t_star = verdict.lifespan_main
    if stop is StopReason.BREAKING_DETECTED:
        if t_final <= t_star:
            return True, f"breaking detected at {t_final:.6g} <= t* = {t_star:.6g}"
        return False, f"breaking detected at {t_final:.6g} AFTER t* = {t_star:.6g}"
    if t_final <= t_star:
        return True, (
            f"run ended ({stop.value}) at {t_final:.6g} <= t* = {t_star:.6g}; "
            "no contradiction"
        )
    return False, (
        f"solution survived to {t_final:.6g} past t* = {t_star:.6g} without breaking"
    )


def run_single(
    cfg: RunConfig, write: bool = True, keep_trajectory: bool = True
) -> RunResult:
    """Criterion evaluation, simulation, diagnostics, fits, persistence."""
    h0 = build_initial_data(cfg.initial, cfg.grid)

    if cfg.c0_mode == "empirical":
        c0 = c0_empirical(h0, cfg.c0_safety)
    else:
        energy0 = float(cfg.grid.dx * np.sum(h0.values**2))
        c0 = c0_from_constant(cfg.c0_constant, math.sqrt(energy0))

    hx0 = ddx(h0).values
    m0, M0 = float(hx0.min()), float(hx0.max())
    verdict = breaking_condition(RiccatiParams(m0=m0, M0=M0, c0=c0))

    out_dir = Path(cfg.output_dir)
    series_path = snapshots_path = result_path = None
    trajectory = None
    try:
        trajectory = run(h0, cfg.model, cfg.stepper)
    except NumericalFailureError as exc:
        # partial outputs with an error marker, then re-raise
        if write:
            out_dir.mkdir(parents=True, exist_ok=True)
            result_path = out_dir / "result.json"
            with open(result_path, "w") as fh:
                json.dump(
                    {"error": str(exc), "config": cfg.to_dict()},
                    fh,
                    indent=2,
                    sort_keys=True,
                )
        raise

    stop = trajectory.stop
    T_sim = trajectory.t_final if stop is StopReason.BREAKING_DETECTED else None

    rate_fit = None
    fit_note = ""
    if stop is StopReason.BREAKING_DETECTED:
        try:
            rate_fit = extrapolate_blowup_time(
                trajectory.records, cfg.stepper.spectral_tail_fraction_max
            )
        except FitError as exc:
            fit_note = f"; rate fit unavailable ({exc})"

    consistent, note = _theorem_consistency(verdict, stop, trajectory.t_final)

    result = RunResult(
        config=cfg,
        verdict=verdict,
        stop=stop,
        c0=c0,
        m0=m0,
        M0=M0,
        T_sim=T_sim,
        rate_fit=rate_fit,
        theorem_consistent=consistent,
        consistency_note=note + fit_note,
        series_path=None,
        snapshots_path=None,
        result_path=None,
        trajectory=trajectory if keep_trajectory else None,
    )

    if write:
        out_dir.mkdir(parents=True, exist_ok=True)
        result.series_path = out_dir / "series.csv"
        result.snapshots_path = out_dir / "snapshots.csv"
        result.result_path = out_dir / "result.json"
        _write_series_csv(result.series_path, trajectory)
        _write_snapshots_csv(result.snapshots_path, trajectory)
        with open(result.result_path, "w") as fh:
            json.dump(result.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result


# --------------------------------------------------------------------------
# sweeps


def _set_axis(cfg: RunConfig, axis: str, value) -> RunConfig:
    parts = axis.split(".")
    if len(parts) == 1:
        if not hasattr(cfg, parts[0]):
            raise ConfigError(f"unknown sweep axis: {axis!r}")
        return replace(cfg, **{parts[0]: value})
    if len(parts) == 2:
        head, leaf = parts
        if not hasattr(cfg, head):
            raise ConfigError(f"unknown sweep axis: {axis!r}")
        sub = getattr(cfg, head)
        if not dataclasses.is_dataclass(sub) or not hasattr(sub, leaf):
            raise ConfigError(f"unknown sweep axis: {axis!r}")
        if head == "grid":
            # Grid caches derived tables; rebuild instead of replace
            kwargs = {"n_points": sub.n_points, "half_length": sub.half_length}
            kwargs[leaf] = value
            return replace(cfg, grid=Grid(**kwargs))
        return replace(cfg, **{head: replace(sub, **{leaf: value})})
    raise ConfigError(f"sweep axis must have at most one dot: {axis!r}")


def _sweep_child(cfg: RunConfig) -> RunResult:
    return run_single(cfg, write=True, keep_trajectory=False)


def run_sweep(
    base: RunConfig,
    axis: str,
    values: Sequence,
    workers: int = 1,
    out_dir: str | Path | None = None,
) -> tuple[list[RunResult], Path]:
    """Independent runs along one scalar config axis, plus a summary CSV."""
    root = Path(out_dir) if out_dir is not None else Path(base.output_dir)
    root.mkdir(parents=True, exist_ok=True)

    configs = []
    for i, v in enumerate(values):
        sub = _set_axis(base, axis, v)
        sub = replace(sub, output_dir=str(root / f"{i:03d}_{axis.replace('.', '_')}={v}"))
        configs.append(sub)

    if workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_child, configs))
    else:
        results = [_sweep_child(c) for c in configs]

    summary_path = root / "sweep_summary.csv"
    with open(summary_path, "w") as fh:
        fh.write(",".join(SWEEP_SUMMARY_COLUMNS) + "\n")
        for v, r in zip(values, results):
            row = [
                str(v),
                str(r.verdict.condition_holds).lower(),
                "" if r.verdict.lifespan_main is None else _fmt(r.verdict.lifespan_main),
                ""
                if r.verdict.lifespan_refined is None
                else _fmt(r.verdict.lifespan_refined),
                "" if r.T_sim is None else _fmt(r.T_sim),
                "" if r.rate_fit is None else _fmt(r.rate_fit.slope),
                r.stop.value,
            ]
            fh.write(",".join(row) + "\n")
    return results, summary_path


# --------------------------------------------------------------------------
# reports


def _common_snapshot_times(a: RunTrajectory, b: RunTrajectory) -> list[tuple[int, int]]:
    pairs = []
    tb = {round(t, 12): j for j, (t, _) in enumerate(b.snapshots)}
    for i, (t, _) in enumerate(a.snapshots):
        j = tb.get(round(t, 12))
        if j is not None:
            pairs.append((i, j))
    return pairs


def emit_report(results: Sequence[RunResult], out_dir: str | Path) -> list[Path]:
    """Write plot-ready data files and a human-readable summary.

    Per result: slope series (t, m, M), reciprocal slope with fit columns
    when a rate fit exists, conserved quantities, and field snapshots.  When
    two results with different models share a grid, a difference-norm time
    series over matching snapshot times is added.
    """
    if not results:
        raise ConfigError("emit_report needs at least one result")
    for r in results:
        if r.trajectory is None:
            raise ConfigError("emit_report needs results with kept trajectories")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    summary_lines: list[str] = []

    for idx, r in enumerate(results):
        tag = f"run{idx}_{r.config.model.value}"
        traj = r.trajectory
        series = traj.series

        p = out / f"{tag}_slope_series.csv"
        with open(p, "w") as fh:
            fh.write("t,m,M\n")
            for row in series:
                fh.write(f"{_fmt(row[0])},{_fmt(row[3])},{_fmt(row[4])}\n")
        written.append(p)

        p = out / f"{tag}_inverse_slope.csv"
        with open(p, "w") as fh:
            if r.rate_fit is not None:
                fh.write("t,inv_m,fit\n")
                for row in series:
                    if row[3] == 0.0:
                        continue
                    fit_v = r.rate_fit.slope * (row[0] - r.rate_fit.T_est)
                    fh.write(f"{_fmt(row[0])},{_fmt(1.0 / row[3])},{_fmt(fit_v)}\n")
            else:
                fh.write("t,inv_m\n")
                for row in series:
                    if row[3] == 0.0:
                        continue
                    fh.write(f"{_fmt(row[0])},{_fmt(1.0 / row[3])}\n")
        written.append(p)

        p = out / f"{tag}_conserved.csv"
        with open(p, "w") as fh:
            fh.write("t,mass,energy\n")
            for row in series:
                fh.write(f"{_fmt(row[0])},{_fmt(row[1])},{_fmt(row[2])}\n")
        written.append(p)

        p = out / f"{tag}_snapshots.csv"
        _write_snapshots_csv(p, traj)
        written.append(p)

        summary_lines.append(
            f"[{tag}] stop={r.stop.value} t_final={traj.t_final:.6g} "
            f"m0={r.m0:.6g} M0={r.M0:.6g} c0={r.c0:.6g} "
            f"condition_holds={r.verdict.condition_holds} "
            f"t_star_main={r.verdict.lifespan_main} "
            f"t_star_refined={r.verdict.lifespan_refined} "
            f"T_sim={r.T_sim} "
            + (
                f"rate_slope={r.rate_fit.slope:.4f} r2={r.rate_fit.r_squared:.5f} "
                f"T_est={r.rate_fit.T_est:.6g} "
                if r.rate_fit
                else "rate_fit=none "
            )
            + f"theorem_consistent={r.theorem_consistent}"
        )

    # pairwise model-difference series over matching snapshot times
    for i in range(len(results)):
        for j in range(i + 1, len(results)):
            a, b = results[i], results[j]
            if a.config.model is b.config.model:
                continue
            if a.config.grid != b.config.grid:
                continue
            pairs = _common_snapshot_times(a.trajectory, b.trajectory)
            if not pairs:
                summary_lines.append(
                    f"[diff run{i}/run{j}] no matching snapshot times"
                )
                continue
            p = out / f"difference_run{i}_run{j}.csv"
            with open(p, "w") as fh:
                fh.write("t,max_abs_diff,l2_diff\n")
                dx = a.config.grid.dx
                for ia, ib in pairs:
                    t, fa = a.trajectory.snapshots[ia]
                    _, fb = b.trajectory.snapshots[ib]
                    d = fa.values - fb.values
                    fh.write(
                        f"{_fmt(t)},{_fmt(np.max(np.abs(d)))},"
                        f"{_fmt(math.sqrt(dx * float(np.sum(d * d))))}\n"
                    )
            written.append(p)

    p = out / "summary.txt"
    with open(p, "w") as fh:
        fh.write("\n".join(summary_lines) + "\n")
    written.append(p)
    return written

"""Acceptance suite: one test per criterion, each printing a verdict line.

Criteria 6-9 share one expensive study (three standard breaking configs,
each at two grid resolutions), provided by a module-scoped fixture.  Run
with ``pytest -s tests/test_acceptance.py`` to see the verdict lines.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

import plasmawave as pw
from plasmawave import Grid, ModelKind, RealField, RiccatiParams

from conftest import CONFIG_DIR, smooth_random_field

BREAKING_CONFIGS = ("breaking_a", "breaking_b", "breaking_c")
RESOLUTIONS = (12288, 16384)


def _verdict(num: int, ok: bool, detail: str) -> None:
    print(f"ACCEPTANCE {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def test_criterion_01_operator_identities(rng):
    t0 = time.perf_counter()
    g = Grid(512, 12.0)
    worst_second, worst_highpass = 0.0, 0.0
    for _ in range(100):
        f = smooth_random_field(g, rng)
        lf = pw.helmholtz_inverse(f)
        second = pw.ddx(pw.helmholtz_inverse(pw.ddx(f))).values - (lf.values - f.values)
        hp = pw.highpass(f).values - (f.values - lf.values)
        worst_second = max(worst_second, float(np.max(np.abs(second))))
        worst_highpass = max(worst_highpass, float(np.max(np.abs(hp))))
    wall = time.perf_counter() - t0
    ok = worst_second < 1e-12 and worst_highpass < 1e-12 and wall < 1.0
    _verdict(
        1,
        ok,
        f"operator identities on 100 fields: second-derivative err "
        f"{worst_second:.2e}, highpass err {worst_highpass:.2e} "
        f"(tol 1e-12), {wall:.2f}s (budget 1s)",
    )


def test_criterion_02_quadrature_oracle(rng):
    t0 = time.perf_counter()
    g = Grid(2048, 40.0)
    worst = 0.0
    for _ in range(20):
        width = rng.uniform(0.5, 2.0)
        center = rng.uniform(-10.0, 10.0)
        amp = rng.uniform(0.2, 2.0)
        f = RealField(g, amp * np.exp(-(((g.x - center) / width) ** 2) / 2))
        ref = pw.convolve_direct(f).values
        num = pw.helmholtz_inverse(f).values
        worst = max(worst, float(np.max(np.abs(num - ref)) / np.max(np.abs(ref))))
    conv = pw.convolve_direct(RealField(g, pw.exp_kernel(g.x)), kinks=[(0.0, -1.0)])
    target = 0.25 * (1 + np.abs(g.x)) * np.exp(-np.abs(g.x))
    self_err = float(np.max(np.abs(conv.values - target)) / np.max(np.abs(target)))
    wall = time.perf_counter() - t0
    ok = worst < 1e-6 and self_err < 1e-6 and wall < 5.0
    _verdict(
        2,
        ok,
        f"smoothing vs quadrature on 20 fields: err {worst:.2e}; kernel "
        f"self-convolution err {self_err:.2e} (tol 1e-6), {wall:.1f}s (budget 5s)",
    )


def test_criterion_03_form_equivalence(rng):
    t0 = time.perf_counter()
    g = Grid(512, 12.0)
    worst = 0.0
    for _ in range(100):
        h = smooth_random_field(g, rng)
        a = pw.rhs(h, ModelKind.NONLOCAL).values
        b = pw.rhs(h, ModelKind.NONLOCAL_HIGHPASS).values
        worst = max(worst, float(np.max(np.abs(a - b))))
    wall = time.perf_counter() - t0
    ok = worst < 1e-11 and wall < 5.0
    _verdict(
        3,
        ok,
        f"commutator-form vs highpass-form on 100 fields: max diff "
        f"{worst:.2e} (tol 1e-11), {wall:.1f}s (budget 5s)",
    )


def test_criterion_04_conservation():
    t0 = time.perf_counter()
    cfg = pw.load_config(CONFIG_DIR / "smooth.json")
    h0 = pw.build_initial_data(cfg.initial, cfg.grid)
    traj = pw.run(h0, cfg.model, cfg.stepper)
    wall = time.perf_counter() - t0
    assert traj.stop is pw.StopReason.HORIZON_REACHED
    r0 = traj.records[0]
    mass_drift = max(abs(r.mass - r0.mass) for r in traj.records) / (1 + abs(r0.mass))
    energy_drift = max(abs(r.energy - r0.energy) for r in traj.records) / r0.energy
    ok = mass_drift < 1e-10 and energy_drift < 1e-6 and wall < 30.0
    _verdict(
        4,
        ok,
        f"run to t=5 (n=2048, dt=1e-3): mass drift {mass_drift:.2e} "
        f"(tol 1e-10), energy drift {energy_drift:.2e} (tol 1e-6), "
        f"{wall:.0f}s (budget 30s)",
    )


def test_criterion_05_integrator_order():
    t0 = time.perf_counter()
    g = Grid(512, 10.0)
    h0 = RealField(g, 0.8 * np.exp(-g.x**2))
    order = pw.richardson_order_estimate(h0, ModelKind.NONLOCAL, dt=5e-3)
    wall = time.perf_counter() - t0
    ok = 3.5 <= order <= 4.5 and wall < 30.0
    _verdict(
        5,
        ok,
        f"step-halving order on a nonlinear window: {order:.3f} "
        f"(band [3.5, 4.5]), {wall:.0f}s (budget 30s)",
    )


@pytest.fixture(scope="module")
def breaking_study(tmp_path_factory):
    """The three standard breaking experiments, each at two resolutions."""
    root = tmp_path_factory.mktemp("breaking_study")
    t0 = time.perf_counter()
    study = {}
    for name in BREAKING_CONFIGS:
        cfg = pw.load_config(CONFIG_DIR / f"{name}.json")
        per_res = {}
        for n in RESOLUTIONS:
            c = replace(
                cfg,
                grid=Grid(n, cfg.grid.half_length),
                output_dir=str(root / f"{name}_{n}"),
            )
            per_res[n] = pw.run_single(c)
        study[name] = per_res
    study["wall"] = time.perf_counter() - t0
    return study


def test_criterion_06_breaking_within_lifespan(breaking_study):
    details = []
    ok = True
    for name in BREAKING_CONFIGS:
        t_sims = {}
        for n in RESOLUTIONS:
            r = breaking_study[name][n]
            assert r.verdict.condition_holds
            broke = r.stop is pw.StopReason.BREAKING_DETECTED
            within_main = broke and r.T_sim <= r.verdict.lifespan_main
            within_refined = broke and r.T_sim <= r.verdict.lifespan_refined
            ok = ok and broke and within_main and within_refined
            t_sims[n] = r.T_sim
        agreement = abs(t_sims[12288] - t_sims[16384]) / t_sims[16384]
        ok = ok and agreement < 0.01
        r = breaking_study[name][16384]
        details.append(
            f"{name}: T_sim={t_sims[16384]:.4f} <= t*_ref="
            f"{r.verdict.lifespan_refined:.4f} <= t*_main="
            f"{r.verdict.lifespan_main:.4f}, grids agree to {agreement * 100:.2f}%"
        )
    wall = breaking_study["wall"]
    ok = ok and wall < 300.0
    _verdict(6, ok, "; ".join(details) + f"; {wall:.0f}s (budget 300s)")


def test_criterion_07_blowup_rate(breaking_study):
    details = []
    ok = True
    for name in BREAKING_CONFIGS:
        for n in RESOLUTIONS:
            fit = breaking_study[name][n].rate_fit
            in_band = fit is not None and 1.35 <= fit.slope <= 1.65
            good_fit = fit is not None and fit.r_squared > 0.99
            ok = ok and in_band and good_fit
            details.append(f"{name}@{n}: slope={fit.slope:.3f} r2={fit.r_squared:.4f}")
    _verdict(7, ok, "reciprocal-slope rate fits (band [1.35,1.65], r2>0.99): " + "; ".join(details))


def test_criterion_08_riccati_residuals(breaking_study):
    details = []
    ok = True
    for name in BREAKING_CONFIGS:
        for n in RESOLUTIONS:
            r = breaking_study[name][n]
            sub = pw.subsample_uniform(r.trajectory.records, 80)
            res = pw.riccati_residuals(sub, r.c0)
            m_interior = np.array([rec.m for rec in sub])[1 : len(sub) - 1]
            slack = 1e-3 * (1.0 + m_interior**2)
            violations = np.concatenate([res.r_m > slack, res.r_M > slack])
            frac = float(violations.mean())
            ok = ok and frac < 0.01
            details.append(f"{name}@{n}: {frac * 100:.2f}%")
    _verdict(
        8,
        ok,
        "slope-inequality residual violations beyond slack 1e-3(1+m^2) "
        "(budget 1%): " + "; ".join(details),
    )


def test_criterion_09_bracket_boundedness(breaking_study):
    details = []
    ok = True
    for name in BREAKING_CONFIGS:
        for n in RESOLUTIONS:
            r = breaking_study[name][n]
            recs = r.trajectory.records
            growth_m = abs(recs[-1].m / recs[0].m)
            growth_comm = recs[-1].comm_dx_sup / recs[0].comm_dx_sup
            bounded = growth_comm <= 10.0 and growth_m >= 100.0
            e0 = recs[0].energy
            split_ok = all(
                rec.lx_hx_sup <= 0.5 * (rec.M - rec.m) + 1e-9 for rec in recs
            )
            smooth_ok = all(
                rec.lx_hx_sup <= 0.5 * np.sqrt(e0) + rec.h_inf + 1e-9 for rec in recs
            )
            ok = ok and bounded and split_ok and smooth_ok
            details.append(
                f"{name}@{n}: |m| x{growth_m:.0f}, bracket x{growth_comm:.2f}, "
                f"split/smooth bounds {'ok' if split_ok and smooth_ok else 'VIOLATED'}"
            )
    _verdict(9, ok, "bracket stays bounded while slopes blow up: " + "; ".join(details))


def test_criterion_10_formula_identities():
    t0 = time.perf_counter()
    rng = np.random.default_rng(42)
    worst_identity = 0.0
    improvement_ok = True
    for _ in range(1000):
        c0 = float(rng.uniform(0.0, 3.0))
        M0 = float(rng.uniform(0.0, 4.0))
        th = pw.breaking_condition(RiccatiParams(-1e9, M0, c0)).threshold
        p = RiccatiParams(th * float(rng.uniform(1.05, 6.0)), M0, c0)
        t_main = pw.lifespan_main(p)
        via_proof = 2.0 / (
            pw.lifespan_coefficient(p) * np.sqrt(-pw.riccati_rhs(p.m0, p.M0, p.c0))
        )
        worst_identity = max(worst_identity, abs(via_proof - t_main) / t_main)
        improvement_ok = improvement_ok and pw.lifespan_refined(p) <= t_main * (1 + 1e-12)
    cmp = pw.riccati_compare(RiccatiParams(-1.0, -1.0, 0.0), dt=1e-5, t_end=1.0)
    closed_form_err = abs(cmp.blowup_time - 2.0 / 3.0)
    wall = time.perf_counter() - t0
    ok = (
        worst_identity < 1e-12
        and closed_form_err < 1e-3
        and improvement_ok
        and wall < 10.0
    )
    _verdict(
        10,
        ok,
        f"proof identity err {worst_identity:.2e} (tol 1e-12); comparison-ODE "
        f"blow-up at 2/3 err {closed_form_err:.2e} (tol 1e-3); refined <= main "
        f"on 1000 draws: {improvement_ok}; {wall:.1f}s (budget 10s)",
    )


def test_criterion_11_rate_fitter_isolation():
    t0 = time.perf_counter()
    from test_diagnostics import _synthetic_record

    t = np.linspace(0.9, 0.99, 91)
    exact = [_synthetic_record(ti, -2.0 / (3.0 * (1.0 - ti))) for ti in t]
    fit = pw.extrapolate_blowup_time(exact)
    exact_ok = abs(fit.T_est - 1.0) < 1e-9 and abs(fit.slope - 1.5) < 1e-9

    rng = np.random.default_rng(99)
    t_noise = np.linspace(0.85, 0.99, 141)
    noise_ok = True
    worst_T, worst_slope = 0.0, 0.0
    for _ in range(100):
        m = -2.0 / (3.0 * (1.0 - t_noise))
        m = m * (1.0 + 0.01 * rng.standard_normal(t_noise.size))
        f = pw.extrapolate_blowup_time(
            [_synthetic_record(ti, mi) for ti, mi in zip(t_noise, m)]
        )
        worst_T = max(worst_T, abs(f.T_est - 1.0))
        worst_slope = max(worst_slope, abs(f.slope - 1.5) / 1.5)
        noise_ok = noise_ok and worst_T < 5e-3 and worst_slope < 0.05
    wall = time.perf_counter() - t0
    ok = exact_ok and noise_ok and wall < 5.0
    _verdict(
        11,
        ok,
        f"exact series: T err {abs(fit.T_est - 1.0):.1e}, slope err "
        f"{abs(fit.slope - 1.5):.1e} (tol 1e-9); 100 noisy draws: worst T err "
        f"{worst_T:.1e} (tol 5e-3), worst slope err {worst_slope * 100:.2f}% "
        f"(tol 5%); {wall:.1f}s (budget 5s)",
    )

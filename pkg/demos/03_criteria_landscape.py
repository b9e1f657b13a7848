"""The closed-form side on its own: thresholds, life spans, comparison ODE.

No PDE is solved here; everything is arithmetic on (m0, M0, c0).

Run:  python demos/03_criteria_landscape.py
"""

import numpy as np

import plasmawave as pw
from plasmawave import RiccatiParams

# --- where does breaking become guaranteed? --------------------------------
print("threshold vs bracket constant (M0 = 0):")
for c0 in (0.0, 0.25, 1.0, 4.0):
    v = pw.breaking_condition(RiccatiParams(-10.0, 0.0, c0))
    print(f"  c0={c0:5.2f}: m0 must lie below {v.threshold:+.4f} "
          f"(c0 branch {v.threshold_from_c0:+.4f}, slope branch {v.threshold_from_max_slope:+.4f})")

# --- life spans shrink as the initial slope steepens ------------------------
print("life spans along m0 (M0 = 0, c0 = 0.5):")
for m0 in (-1.5, -2.0, -3.0, -5.0, -10.0):
    p = RiccatiParams(m0, 0.0, 0.5)
    v = pw.breaking_condition(p)
    if v.condition_holds:
        print(f"  m0={m0:6.2f}: main={v.lifespan_main:.4f} refined={v.lifespan_refined:.4f} "
              f"(refined/main = {v.lifespan_refined / v.lifespan_main:.3f})")
    else:
        print(f"  m0={m0:6.2f}: condition not met")

# --- the proof identity -----------------------------------------------------
p = RiccatiParams(-2.0, 0.5, 0.3)
phi0 = pw.riccati_rhs(p.m0, p.M0, p.c0)
delta = pw.lifespan_coefficient(p)
print(f"proof identity at {p}:")
print(f"  2/(delta*sqrt(-phi0)) = {2 / (delta * np.sqrt(-phi0)):.12f}")
print(f"  lifespan_main         = {pw.lifespan_main(p):.12f}")

# --- the comparison ODE system ----------------------------------------------
# equality version of the two-slope inequalities; for symmetric data it
# collapses to one Riccati equation with a known blow-up time
sym = pw.riccati_compare(RiccatiParams(-1.0, -1.0, 0.0), dt=1e-5, t_end=1.0)
print(f"symmetric comparison system: blow-up at {sym.blowup_time:.5f} (closed form 2/3)")

# for generic parameters the system is reported side by side with the bound;
# no dominance claim is made (the coupling has the wrong sign for that)
gen = pw.riccati_compare(p, dt=1e-5, t_end=2.0)
print(f"generic comparison system: blow-up at {gen.blowup_time:.5f} "
      f"vs life-span bound {pw.lifespan_main(p):.5f} (report only)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 3.5))
    m0s = np.linspace(-6, -0.9, 300)
    for c0 in (0.0, 0.5, 2.0):
        mains = []
        for m0 in m0s:
            v = pw.breaking_condition(RiccatiParams(float(m0), 0.0, c0))
            mains.append(v.lifespan_main if v.condition_holds else np.nan)
        ax1.plot(m0s, mains, label=f"c0={c0}")
    ax1.set_xlabel("m0")
    ax1.set_ylabel("life-span bound")
    ax1.legend()
    ax2.plot(gen.t, gen.m, label="m(t)")
    ax2.plot(gen.t, gen.M, label="M(t)")
    ax2.axvline(pw.lifespan_main(p), color="k", ls=":", label="bound")
    ax2.set_ylim(-30, 5)
    ax2.legend()
    ax2.set_title("comparison ODE")
    fig.tight_layout()
    fig.savefig("demo03_criteria.png", dpi=120)
    print("wrote demo03_criteria.png")
except ImportError:
    print("matplotlib not available; skipping figure")

"""plasmawave: a pseudo-spectral laboratory for wave breaking in a
unidirectional nonlocal plasma wave model.

The package solves the model on a large periodic box, monitors the
quantities its breaking theory is built from (conserved integrals,
extremal slopes, bracket bounds), evaluates the closed-form breaking
criterion with its life-span bounds, and fits the blow-up rate of the
minimum slope.
"""

from .criteria import (
    CriterionVerdict,
    RiccatiComparison,
    RiccatiParams,
    breaking_condition,
    c0_empirical,
    c0_from_constant,
    lifespan_coefficient,
    lifespan_main,
    lifespan_refined,
    riccati_compare,
    riccati_rhs,
)
from .diagnostics import (
    BoundViolation,
    DiagnosticsRecord,
    RateFit,
    RiccatiResiduals,
    bound_monitors,
    extrapolate_blowup_time,
    measure,
    riccati_residuals,
    subsample_uniform,
)
from .errors import (
    ConfigError,
    DomainError,
    FitError,
    NumericalFailureError,
    SupportWarning,
)
from .harness import (
    InitialDataSpec,
    InitialFamily,
    RunConfig,
    RunResult,
    build_initial_data,
    emit_report,
    load_config,
    run_single,
    run_sweep,
    save_config,
)
from .models import (
    ModelKind,
    commutator_derivative_supnorm,
    commutator_term,
    rhs,
    slope_rhs,
)
from .spectral import (
    Grid,
    RealField,
    SpectralField,
    convolve_direct,
    ddx,
    dealias,
    exp_kernel,
    helmholtz_inverse,
    highpass,
    smoothed_dx,
    to_real,
    to_spectral,
)
from .stepping import (
    RunTrajectory,
    StepperConfig,
    StopReason,
    richardson_order_estimate,
    run,
    step_rk4,
)

__version__ = "0.1.0"

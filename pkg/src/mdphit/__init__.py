"""Moderate deviations of hitting times for interpolated random walks."""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    ConvergenceFailure,
    Exponential,
    Normal,
    Poisson,
    ShiftedBernoulli,
    TableDiscrete,
    cgf,
    check_assumptions,
    legendre,
    make_distribution,
    random_stream,
    sample,
)
from .montecarlo import (  # noqa: E402
    ExperimentConfig,
    RateCurve,
    Tail,
    clt_check,
    lln_check,
    run_experiment,
    scaled_deviations,
)
from .rate_functions import (  # noqa: E402
    PiecewisePath,
    endpoint_infimum,
    eval_I,
    eval_J,
    theorem_rate,
    verify_endpoint_infimum,
)
from .trajectory import Trajectory, build_trajectory, evaluate, hitting_time, limit_hitting_time  # noqa: E402

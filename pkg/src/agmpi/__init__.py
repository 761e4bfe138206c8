"""Arbitrary-precision pi via AGM-family iterations, with cross-verification.

The package splits into five modules:

``precision``
    Fixed-precision real arithmetic (MPFR-backed), precision contexts,
    radicals with domain checking, decimal rendering.
``agm``
    The arithmetic-geometric mean, its weighted gap sum, the quadratically
    convergent pi estimator, and the series form of the tail sequence r_n.
``borwein``
    The quadratic, quartic, cubic, and quartic-analog iterations for 1/pi,
    plus the cubic and quartic mean iterations they shadow.
``verify``
    The Machin-formula oracle, digit agreement and convergence-order
    metrics, and the cross-algorithm identity checker.
``cli``
    The ``pi`` command line tool.
"""

from . import agm, borwein, cli, precision, verify
from .agm import AgmState, agm_limit, agm_step, canonical_start, gauss_r, gauss_sum, salamin_brent_pi
from .borwein import (
    AlgorithmId,
    IterationState,
    MeanState,
    MeanVariant,
    init,
    mean_limit,
    mean_start,
    mean_step,
    run,
    step,
)
from .precision import (
    DomainError,
    PrecisionCeilingError,
    PrecisionContext,
    Real,
    count_radicals,
    make_context,
    root,
    sqrt,
    to_decimal,
    workspace,
)
from .verify import (
    ConvergenceRecord,
    IdentityReport,
    check_identities,
    convergence_orders,
    correct_digits,
    machin_pi,
)

__version__ = "0.1.0"

__all__ = [
    "AgmState",
    "AlgorithmId",
    "ConvergenceRecord",
    "DomainError",
    "IdentityReport",
    "IterationState",
    "MeanState",
    "MeanVariant",
    "PrecisionCeilingError",
    "PrecisionContext",
    "Real",
    "agm",
    "agm_limit",
    "agm_step",
    "borwein",
    "canonical_start",
    "check_identities",
    "cli",
    "convergence_orders",
    "correct_digits",
    "count_radicals",
    "gauss_r",
    "gauss_sum",
    "init",
    "machin_pi",
    "make_context",
    "mean_limit",
    "mean_start",
    "mean_step",
    "precision",
    "root",
    "run",
    "salamin_brent_pi",
    "sqrt",
    "step",
    "to_decimal",
    "verify",
    "workspace",
]

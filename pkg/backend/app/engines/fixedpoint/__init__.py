"""
Regularized fixed-point construction of the singular system.

Envelopes, truncation, the Schauder map, damped Picard iteration, eps
continuation and the certification diagnostics.
"""

from app.engines.fixedpoint.certify import (
    bracketing_check,
    certify,
    singular_residuals,
    truncated_inequality_check,
)
from app.engines.fixedpoint.context import SolverContext, build_context
from app.engines.fixedpoint.continuation import (
    ContinuationError,
    ContinuationResult,
    ScheduleError,
    check_schedule,
    continuation,
    default_schedule,
    stage_report,
)
from app.engines.fixedpoint.envelopes import (
    EnvelopeError,
    EnvelopeFactors,
    EnvelopeSet,
    envelope_factors,
    envelopes,
    truncate,
)
from app.engines.fixedpoint.nonlinearity import (
    Nonlinearity,
    NonlinearityError,
    NonlinearityKind,
    eval_f,
    eval_g,
)
from app.engines.fixedpoint.picard import (
    PicardError,
    SolverState,
    frozen_rhs,
    lpstar_distance,
    picard_solve,
    schauder_map,
)

__all__ = [
    "ContinuationError",
    "ContinuationResult",
    "EnvelopeError",
    "EnvelopeFactors",
    "EnvelopeSet",
    "Nonlinearity",
    "NonlinearityError",
    "NonlinearityKind",
    "PicardError",
    "ScheduleError",
    "SolverContext",
    "SolverState",
    "bracketing_check",
    "build_context",
    "certify",
    "check_schedule",
    "continuation",
    "default_schedule",
    "envelope_factors",
    "envelopes",
    "eval_f",
    "eval_g",
    "frozen_rhs",
    "lpstar_distance",
    "picard_solve",
    "schauder_map",
    "singular_residuals",
    "stage_report",
    "truncate",
    "truncated_inequality_check",
]

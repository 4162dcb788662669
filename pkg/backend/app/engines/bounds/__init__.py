from app.engines.bounds.apriori import (
    energy_gradient_bounds,
    lpstar_apriori,
    schauder_gradient_bounds,
    working_constants,
)
from app.engines.bounds.constants import (
    CONVENTION_TALENTI,
    CONVENTION_UNIT,
    SimonCheck,
    simon_check,
    simon_check_batch,
    simon_constant,
    sobolev_constants,
    talenti_constant,
)
from app.engines.bounds.errors import BoundsError
from app.engines.bounds.moser import (
    MoserBound,
    c4_constant,
    compute_bounds,
    kappa_sequence,
    moser_linf_bound,
)

__all__ = [
    "BoundsError",
    "CONVENTION_TALENTI",
    "CONVENTION_UNIT",
    "MoserBound",
    "SimonCheck",
    "c4_constant",
    "compute_bounds",
    "energy_gradient_bounds",
    "kappa_sequence",
    "lpstar_apriori",
    "moser_linf_bound",
    "schauder_gradient_bounds",
    "simon_check",
    "simon_check_batch",
    "simon_constant",
    "sobolev_constants",
    "talenti_constant",
]

"""Pydantic schemas for the machine-readable reports (check, bounds, solve, sweep)."""

from pydantic import BaseModel, ConfigDict, Field, computed_field

# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


class CheckResult(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    name: str
    satisfied: bool
    margin: float | None = None  # RHS - LHS; None when undefined
    detail: str | None = None


class NormEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    exponent: float
    analytic: float  # whole-space closed form (inf when divergent)
    quadrature: float  # trapezoid on [0, R_max]
    tail: float  # analytic mass beyond R_max, in the q-th power
    rel_gap: float  # |analytic - quadrature| / analytic


class ValidationReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config_hash: str | None = None
    checks: list[CheckResult] = Field(default_factory=list)
    norms: dict[str, NormEntry] = Field(default_factory=dict)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def overall(self) -> bool:
        return all(c.satisfied for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.satisfied]

    def get(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


# ---------------------------------------------------------------------------
# A priori bounds
# ---------------------------------------------------------------------------


class SobolevConstants(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    S1: float
    S2: float
    C_simon_1: float  # strong-monotonicity constant for p1
    C_simon_2: float  # ... and for p2
    convention: str = "talenti"


class BoundCase(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    name: str
    grad_u: float
    grad_v: float


class LpStarBound(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    rho: float
    C1: float
    C2: float
    e1: float  # p1 - 1 - alpha1 - alpha2
    e2: float  # p2 - 1 - beta1 - beta2
    cases: list[BoundCase]
    grad_u_max: float
    grad_v_max: float
    case_taken: str = "max over cases"
    binding_case: str


class MoserTrace(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    side: str  # "u" or "v"
    xi: float
    xi_conj: float
    ratio: float  # p*/(p xi')
    kappa: list[float]
    eta_sum: float
    sqrt_sum: float
    tail_bound: float
    n_terms: int
    cond_k_min_margin: float
    ratio_last: float
    C3: float | None = None
    C4: float | None = None
    C4_argmax: float | None = None
    C5: float | None = None


class EnergyBounds(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    grad_u: float
    grad_v: float


class BoundsReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    rho: float
    R_inf: float
    C1: float
    C2: float
    case_taken: str
    moser: MoserTrace
    moser_v: MoserTrace
    lpstar: LpStarBound
    sobolev: SobolevConstants
    energy: EnergyBounds
    constant_convention: str
    config_hash: str | None = None


# ---------------------------------------------------------------------------
# Fixed-point runs
# ---------------------------------------------------------------------------


class HistoryEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    iteration: int
    moved: float
    max_norm: float
    theta: float


class BracketingReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    violations: dict[str, float]
    max_violation: float
    tol: float
    passed: bool


class TruncationReport(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    lhs_u: list[float]
    rhs_u: list[float]
    lhs_v: list[float]
    rhs_v: list[float]
    max_excess: float
    tol: float
    passed: bool
    omega1_sup_u: float | None = None  # sup of u over the nodes where u > 1
    omega1_sup_v: float | None = None


class StageReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    index: int
    eps: float
    converged: bool
    iterations: int
    final_moved: float
    theta: float
    clamp_events: int
    max_bracket_violation: float
    residual_u_max: float
    residual_v_max: float
    u0: float
    v0: float
    grad_u: float
    grad_v: float
    schauder_grad_bound_u: float
    schauder_grad_bound_v: float
    distance_u_prev: float | None = None  # D^{1,p1} distance to previous stage
    distance_v_prev: float | None = None
    dual_start_gap: float | None = None
    history: list[HistoryEntry] = Field(default_factory=list)


class CertificationReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    bracketing: BracketingReport
    truncation: TruncationReport
    checks: list[CheckResult]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return (
            self.bracketing.passed
            and self.truncation.passed
            and all(c.satisfied for c in self.checks)
        )


class TruncationSensitivity(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)
    r_max: float
    w_origin: float
    w_origin_doubled: float
    rel_change: float


class SolveReport(BaseModel):
    model_config = ConfigDict(extra="forbid")
    config_hash: str
    bounds: BoundsReport
    stages: list[StageReport]
    certification: CertificationReport | None = None
    truncation_sensitivity: list[TruncationSensitivity] = Field(default_factory=list)
    converged: bool
    error: str | None = None


class SweepRow(BaseModel):
    model_config = ConfigDict(extra="forbid")
    parameter: str
    value: float
    converged: bool
    certified: bool
    u0: float | None = None
    v0: float | None = None
    residual_max: float | None = None
    R_inf: float | None = None
    rho: float | None = None
    u0_rel_change: float | None = None
    error: str | None = None

"""Documents and report models exchanged by the fockport toolkit."""

from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from fockport.validators import validate_accept_pattern

ComplexPair = Tuple[float, float]
AmplitudeValue = Union[float, ComplexPair]


def to_pair(value: complex) -> ComplexPair:
    """Split a complex number into a JSON-friendly [re, im] pair."""
    value = complex(value)
    return (value.real, value.imag)


def from_pair(value: AmplitudeValue) -> complex:
    """Join a real number or an [re, im] pair into a complex number."""
    if isinstance(value, (tuple, list)):
        return complex(value[0], value[1])
    return complex(value)


class ErrorResponse(BaseModel):
    """Error body printed by the command-line interface."""
    status: int
    code: str
    message: str
    details: Optional[dict] = None

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "status": 2,
                "code": "PARSE_ERROR",
                "message": "steps.0.lam: Input should be less than 1",
                "details": {"field": "steps.0.lam"},
            }
        }
    )


class StageProbability(BaseModel):
    """One labelled factor of a pipeline success probability."""
    label: str
    probability: float = Field(..., ge=0.0)

    model_config = ConfigDict(frozen=True)


class BeamSplitterDocument(BaseModel):
    """Serialized beam splitter."""
    c: float
    s: float
    eta: ComplexPair = (1.0, 0.0)
    xi: ComplexPair = (1.0, 0.0)
    modes: Tuple[int, int]


class DetectorDesignDocument(BaseModel):
    """Serialized linear-optical Bell detector."""
    n_tilde: int = Field(..., ge=0)
    ancilla_count: int = Field(0, ge=0)
    accept_pattern: List[int]
    input_phases: List[float] = Field(default_factory=list)
    elements: List[BeamSplitterDocument] = Field(default_factory=list)
    unitary: Optional[List[List[ComplexPair]]] = None
    amplitudes: Optional[List[ComplexPair]] = None
    success_probability: Optional[float] = None
    note: str = ""

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "n_tilde": 1,
                "ancilla_count": 0,
                "accept_pattern": [1, 0],
                "elements": [{"c": 0.7071067811865476, "s": 0.7071067811865476, "modes": [0, 1]}],
            }
        }
    )


class StepDescriptor(BaseModel):
    """One teleportation stage of a pipeline document."""
    kind: Literal["reversal_scaling", "reversal_derivative", "number_shift", "scaling", "custom_epr"]
    lam: Optional[float] = Field(None, ge=0.0, lt=1.0)
    lam_prime: Optional[float] = Field(None, ge=0.0, lt=1.0)
    n_tilde: Optional[int] = Field(None, ge=0)
    n: Optional[int] = Field(None, ge=0)
    r: Optional[float] = Field(None, ge=0.0)
    profile: Optional[List[AmplitudeValue]] = None
    epr_kind: Literal["sum", "difference"] = "sum"
    mode: int = Field(0, ge=0)


class CompositeDescriptor(BaseModel):
    """A named composite manipulation and its parameters."""
    name: Literal[
        "reversal",
        "scissors",
        "two_sided_scissors",
        "extractor",
        "n_photon_source",
        "differentiate",
        "truncated_maximal_epr",
        "filter",
        "number_pair_source",
    ]
    lam: Optional[float] = Field(None, ge=0.0, lt=1.0)
    lam_prime: Optional[float] = Field(None, ge=0.0, lt=1.0)
    lam_second: Optional[float] = Field(None, ge=0.0, lt=1.0)
    n: Optional[int] = Field(None, ge=0)
    n_low: Optional[int] = Field(None, ge=0)
    n_tilde: Optional[int] = Field(None, ge=0)
    shift: Optional[int] = None


class InputDescriptor(BaseModel):
    """Pipeline input: an amplitude list or a named resource."""
    amplitudes: Optional[List[AmplitudeValue]] = None
    resource: Optional[Literal["vacuum", "number", "squeezed_vacuum", "photon_subtracted", "number_phase_bell"]] = None
    lam: Optional[float] = Field(None, ge=0.0, lt=1.0)
    n: Optional[int] = Field(None, ge=0)
    m: Optional[int] = None

    @model_validator(mode="after")
    def check_one_source(self) -> "InputDescriptor":
        if (self.amplitudes is None) == (self.resource is None):
            raise ValueError("input needs exactly one of 'amplitudes' or 'resource'")
        return self


class PipelineOptions(BaseModel):
    """Per-document overrides of the numerical settings."""
    tail_epsilon: Optional[float] = Field(None, gt=0.0, lt=1.0)
    tolerance: Optional[float] = Field(None, gt=0.0)
    detector: str = "ideal"
    seed: Optional[int] = None


class PipelineDocument(BaseModel):
    """Input state plus an ordered list of stages or a named composite."""
    name: str = "pipeline"
    input: Optional[InputDescriptor] = None
    steps: List[StepDescriptor] = Field(default_factory=list)
    composite: Optional[CompositeDescriptor] = None
    options: PipelineOptions = Field(default_factory=PipelineOptions)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "name": "reversal-qubit",
                "input": {"amplitudes": [1.0, 0.5]},
                "composite": {"name": "reversal", "n_tilde": 1, "lam": 0.49, "lam_prime": 0.7, "lam_second": 0.7},
                "options": {"detector": "quoted"},
            }
        }
    )

    @model_validator(mode="after")
    def check_input(self) -> "PipelineDocument":
        if self.steps and self.composite is not None:
            raise ValueError("give either 'steps' or 'composite', not both")
        if self.input is None and self.composite is None:
            raise ValueError("'input' is required unless a composite supplies one")
        return self


class AmplitudeEntry(BaseModel):
    """One amplitude of a reported state."""
    pattern: List[int]
    re: float
    im: float


class RunReport(BaseModel):
    """Result of running a pipeline document."""
    name: str
    success_model: str
    output: List[AmplitudeEntry]
    stages: List[StageProbability]
    net_probability: float


class ReproductionRow(BaseModel):
    """One row of the reproduction table."""
    name: str
    expected: Optional[float] = None
    computed: float
    criterion: str
    status: Literal["pass", "fail", "deviation"]
    note: str = ""


class DesignProblem(BaseModel):
    """Search problem for a linear-optical Bell detector."""
    n_tilde: int = Field(..., ge=0)
    ancilla_count: int = Field(0, ge=0)
    accept_pattern: List[int]
    cross_talk_tolerance: Optional[float] = Field(None, gt=0.0)
    restarts: Optional[int] = Field(None, ge=1)
    max_iterations: Optional[int] = Field(None, ge=1)
    penalty_start: Optional[float] = Field(None, gt=0.0)
    penalty_rounds: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = None
    workers: Optional[int] = Field(None, ge=1)

    model_config = ConfigDict(
        json_schema_extra={
            "example": {"n_tilde": 2, "ancilla_count": 1, "accept_pattern": [0, 1, 1], "seed": 2003}
        }
    )

    @model_validator(mode="after")
    def check_accept_pattern(self) -> "DesignProblem":
        is_valid, error = validate_accept_pattern(self.accept_pattern, self.n_tilde, 2 + self.ancilla_count)
        if not is_valid:
            raise ValueError(error)
        return self


class DesignReport(BaseModel):
    """Outcome of a detector-design search."""
    problem: DesignProblem
    feasible: bool
    success_probability: float
    max_cross_talk: float
    restarts: int
    best_restart: int
    evaluations: int
    history: List[float] = Field(default_factory=list)
    design: Optional[DetectorDesignDocument] = None


class DesignSweep(BaseModel):
    """Reports for a range of ancilla counts."""
    reports: List[DesignReport]


class VerificationReport(BaseModel):
    """Equivalence check of a detector design against the ideal projector."""
    n_tilde: int
    trials: int
    success_probability: float
    max_state_deviation: float
    max_probability_deviation: float

    @property
    def max_deviation(self) -> float:
        return max(self.max_state_deviation, self.max_probability_deviation)

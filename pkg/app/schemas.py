# app/schemas.py
from enum import Enum
from fractions import Fraction
from typing import Annotated, List, Optional

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, field_validator, model_validator

from app.config import LOG_BASES, get_settings
from app.exact import HalfInt, fraction_str, parse_half_int, parse_spins


def round_float(value: float) -> float:
    """Round to the configured number of significant digits"""
    return float(f"{value:.{get_settings().float_digits}g}")


# Exact values serialize as strings ("5/2", "20/63"), floats at fixed precision
HalfIntField = Annotated[HalfInt, PlainSerializer(str, return_type=str)]
FractionField = Annotated[Fraction, PlainSerializer(fraction_str, return_type=str)]
FloatField = Annotated[float, PlainSerializer(round_float, return_type=float)]


class ExactModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


# =============================================================================
# Coefficients
# =============================================================================

class CoefficientRecord(ExactModel):
    """One coefficient in exact and float form"""
    kind: str                       # "cg" or "threej"
    label: str                      # "<1/2 1/2 1/2 -1/2|1 0>"
    sign: int
    radicand: FractionField
    exact: str                      # "sqrt(1/2)", "-sqrt(3/10)", "0"
    value: FloatField


# =============================================================================
# Orthogonality
# =============================================================================

class OrthogonalityViolation(ExactModel):
    relation: str                   # "columns" or "rows"
    left: str
    right: str
    residual_sq: FractionField


class OrthogonalityReport(ExactModel):
    j1: HalfIntField
    j2: HalfIntField
    passed: bool
    checked: int
    worst_residual: FractionField   # exact squared residual, zero when passed
    violations: List[OrthogonalityViolation] = Field(default_factory=list)


# =============================================================================
# Hahn backend equivalence
# =============================================================================

class EquivalenceMismatch(ExactModel):
    label: str
    direct: str
    via_hahn: str


class EquivalenceReport(ExactModel):
    j1: HalfIntField
    j2: HalfIntField
    checked: int
    matched: int
    flipped: int                    # labels evaluated through the m -> -m symmetry
    mismatches: List[EquivalenceMismatch] = Field(default_factory=list)
    skipped: List[str] = Field(default_factory=list)
    hahn_orthogonality: bool = True
    passed: bool


# =============================================================================
# Entropic inequalities
# =============================================================================

class ProbabilityEntry(ExactModel):
    m1: HalfIntField
    m2: HalfIntField
    p: FractionField


class TsallisMargin(ExactModel):
    q: FloatField
    margin: FloatField


class ColumnRecord(ExactModel):
    j: HalfIntField
    m: HalfIntField
    probabilities: List[ProbabilityEntry]
    entropy_joint: FloatField
    entropy_first: FloatField
    entropy_second: FloatField
    mutual_information: FloatField
    subadditivity_margin: FloatField
    araki_lieb_margin: FloatField
    tsallis_margins: List[TsallisMargin]


class InequalityReport(ExactModel):
    j1: HalfIntField
    j2: HalfIntField
    log_base: str
    tolerance: float
    q_grid: List[float]
    columns: List[ColumnRecord]
    passed: bool


class SweepRow(ExactModel):
    q: FloatField
    tsallis_information: FloatField


class SweepReport(ExactModel):
    j1: HalfIntField
    j2: HalfIntField
    j: HalfIntField
    m: HalfIntField
    rows: List[SweepRow]


# =============================================================================
# Command configuration
# =============================================================================

class Command(str, Enum):
    cg = "cg"
    threej = "threej"
    table = "table"
    verify = "verify"
    sweep_tsallis = "sweep-tsallis"
    hahn_check = "hahn-check"
    orthogonality = "orthogonality"


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"


class QRange(BaseModel):
    q_min: float
    q_max: float
    q_step: float

    @model_validator(mode="after")
    def check_range(self):
        if not self.q_min > 0:
            raise ValueError(f"q min must be > 0, got {self.q_min}")
        if not self.q_step > 0:
            raise ValueError(f"q step must be > 0, got {self.q_step}")
        if self.q_min > self.q_max:
            raise ValueError(f"q min {self.q_min} exceeds q max {self.q_max}")
        return self

    @classmethod
    def parse(cls, text: str) -> "QRange":
        """"min:max:step", or a single value "q" """
        parts = text.split(":")
        if len(parts) == 1:
            return cls(q_min=parts[0], q_max=parts[0], q_step=1.0)
        if len(parts) != 3:
            raise ValueError(f"q range must look like min:max:step, got {text!r}")
        return cls(q_min=parts[0], q_max=parts[1], q_step=parts[2])


class CliConfig(BaseModel):
    """Validated options of one CLI invocation"""
    command: Command
    spins: List[str] = Field(default_factory=list)
    q_range: Optional[QRange] = None
    q_values: List[float] = Field(default_factory=list)
    log_base: str = "e"
    output_format: OutputFormat = OutputFormat.json
    out: Optional[str] = None       # None means standard output

    @field_validator("spins")
    @classmethod
    def check_spins(cls, spins: List[str]) -> List[str]:
        for text in spins:
            parse_half_int(text)
        return spins

    @field_validator("log_base")
    @classmethod
    def check_log_base(cls, log_base: str) -> str:
        if log_base not in LOG_BASES:
            raise ValueError(f"log base must be one of {LOG_BASES}, got {log_base!r}")
        return log_base

    @field_validator("q_values")
    @classmethod
    def check_q_values(cls, q_values: List[float]) -> List[float]:
        for q in q_values:
            if not q > 0:
                raise ValueError(f"entropic index must be > 0, got {q}")
        return q_values

    def half_ints(self) -> List[HalfInt]:
        return list(parse_spins(self.spins))


# =============================================================================
# HTTP request bodies
# =============================================================================

class CoefficientRequest(BaseModel):
    j1: str
    m1: str
    j2: str
    m2: str
    j: str
    m: str


class ThreeJRequest(BaseModel):
    j1: str
    j2: str
    j3: str
    m1: str
    m2: str
    m3: str


class BlockRequest(BaseModel):
    j1: str
    j2: str


class VerifyRequest(BlockRequest):
    q: List[float] = Field(default_factory=lambda: [0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 3.0])
    log_base: Optional[str] = None


class SweepRequest(BaseModel):
    j1: str = "5/2"
    j2: str = "2"
    j: str = "9/2"
    m: str = "1/2"
    q_min: float = 0.05
    q_max: float = 3.0
    q_step: float = 0.05

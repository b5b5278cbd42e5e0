"""Data models for succinctness-workbench."""

from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from succinctness_workbench.devices import Cfg, Csg, Dfa, Dpda, Nfa, Pda, PredicateOracle

DeviceRecord = Annotated[Union[Dfa, Nfa, Cfg, Csg, Pda, Dpda], Field(discriminator="kind")]
Flag = Literal["exact", "horizon-bounded", "upper-bound"]
LogLevel = Literal["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"]
Lookback = Literal["full", "short"]

# other spellings of the lookback windows accepted in config files
LOOKBACK_ALIASES = {"paper-lg*": "short", "lg*": "short", "full(s-1)": "full", "full(s−1)": "full"}


class WorkbenchConfig(BaseModel):
    """Defaults shared by every command."""

    horizon: int = Field(8, ge=1, description="Default word-length horizon for sweeps")
    budget: int = Field(200_000, ge=1, description="Word/candidate budget for searches")
    csg_node_budget: int = Field(500_000, ge=1)
    probe_samples: int = Field(400, ge=0)
    probe_seed: int = 7
    exhaustive_limit: int = Field(20_000, ge=1)
    step_bound: int = Field(64, ge=1)
    space_bound: int = Field(16, ge=1)
    output_dir: str = "./out"
    log_level: LogLevel = "INFO"

    @classmethod
    def from_yaml(cls, yaml_path: str) -> "WorkbenchConfig":
        """Create an instance from a YAML configuration file.

        Args:
            yaml_path: Path to the YAML configuration file

        Returns:
            WorkbenchConfig instance
        """
        with open(yaml_path, "r", encoding="utf-8") as f:
            config_dict = yaml.safe_load(f) or {}
        return cls(**config_dict)


class Horizon(BaseModel):
    """All words up to ``max_length`` over ``alphabet``."""

    model_config = ConfigDict(frozen=True)

    max_length: int = Field(ge=1)
    alphabet: Optional[Tuple[str, ...]] = None


class ConversionReceipt(BaseModel):
    """Size accounting for one conversion."""

    conversion: str
    input_size: int
    output_size: int
    bound: str
    bound_value: int
    bound_satisfied: bool
    notes: List[str] = Field(default_factory=list)


class EquivalenceResult(BaseModel):
    """Outcome of a bounded comparison of two languages."""

    equal: bool
    counterexample: Optional[Tuple[str, ...]] = None
    horizon: int
    words_checked: int
    mode: Literal["exact", "exhaustive", "sampled"] = "exhaustive"


class GapWitness(BaseModel):
    """A succinct grammar together with the predicate it is checked against."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    label: str
    grammar: Union[Cfg, Csg]
    reference: PredicateOracle
    size: int
    bound: str
    bound_value: int

    @property
    def bound_satisfied(self) -> bool:
        return self.size <= self.bound_value


class SizeEnumeration(BaseModel):
    """A canonical enumeration of one device class in nondecreasing size."""

    model_config = ConfigDict(frozen=True)

    device_class: Literal["dfa", "nfa", "cnf-cfg"]
    alphabet: Tuple[str, ...]

    @field_validator("alphabet")
    @classmethod
    def _nonempty(cls, value: Tuple[str, ...]) -> Tuple[str, ...]:
        if not value:
            raise ValueError("alphabet must not be empty")
        return value


class MinimalDevice(BaseModel):
    """Result of a minimal-device search."""

    size: int
    witness: DeviceRecord
    flag: Flag
    horizon: Optional[int] = None
    candidates_examined: int = 0


class EstimateRow(BaseModel):
    index: int
    device_size: int
    device: DeviceRecord
    minimal_size: Optional[int] = None
    flag: Optional[Flag] = None
    error: Optional[str] = None


class BoundingEstimate(BaseModel):
    """Finite-horizon estimate of a bounding function at one size."""

    pair: Tuple[str, str]
    n: int
    horizon: int
    rows: List[EstimateRow] = Field(default_factory=list)
    max: int = 0
    complete: bool = True

    @model_validator(mode="after")
    def _max_is_row_maximum(self) -> "BoundingEstimate":
        sizes = [row.minimal_size for row in self.rows if row.minimal_size is not None]
        if sizes and self.max != max(sizes):
            raise ValueError("max must equal the largest recorded minimal size")
        return self


class GapReport(BaseModel):
    """One succinctness experiment: a target language in two device classes."""

    language: str
    witness_class: str
    witness_size: int
    target_class: str
    minimal: MinimalDevice
    horizon: int
    wall_time_seconds: float = 0.0


class LimitApproximation(BaseModel):
    """A schedule g(n, s) given by breakpoints ``(s_start, value)``.

    g(n, s) is the value of the last breakpoint whose start is ≤ s (0 before
    the first one).  ``overrides`` replaces the table for particular n.  The
    last breakpoint is where the schedule becomes constant.
    """

    model_config = ConfigDict(frozen=True)

    breakpoints: Tuple[Tuple[int, int], ...] = ((0, 0),)
    overrides: Dict[int, Tuple[Tuple[int, int], ...]] = Field(default_factory=dict)

    @field_validator("breakpoints")
    @classmethod
    def _sorted(cls, value: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[int, int], ...]:
        starts = [start for start, _ in value]
        if starts != sorted(set(starts)) or any(start < 0 for start in starts):
            raise ValueError("breakpoint starts must be distinct, nonnegative and increasing")
        return value

    def table(self, n: int) -> Tuple[Tuple[int, int], ...]:
        return self.overrides.get(n, self.breakpoints)

    def value(self, n: int, s: int) -> int:
        result = 0
        for start, value in self.table(n):
            if start > s:
                break
            result = value
        return result

    def stabilization(self, n: int) -> int:
        table = self.table(n)
        return table[-1][0] if table else 0

    def limit(self, n: int) -> int:
        return self.value(n, self.stabilization(n))


class DiagConfig(BaseModel):
    """Parameters of one diagonal language."""

    n: int = 1
    enumeration: SizeEnumeration = SizeEnumeration(device_class="cnf-cfg", alphabet=("a",))
    schedule: LimitApproximation = LimitApproximation()
    lookback: Lookback = "full"
    space_cap: bool = False
    max_s: int = Field(64, ge=0)
    budget: int = Field(200_000, ge=1)

    @field_validator("lookback", mode="before")
    @classmethod
    def _lookback_spelling(cls, value: Any) -> Any:
        return LOOKBACK_ALIASES.get(value, value) if isinstance(value, str) else value

    @field_validator("enumeration")
    @classmethod
    def _unary_grammars(cls, value: SizeEnumeration) -> SizeEnumeration:
        if value.device_class != "cnf-cfg" or value.alphabet != ("a",):
            raise ValueError("the diagonal language is built against unary CNF grammars")
        return value


class RequirementStatus(BaseModel):
    index: int
    grammar: str
    satisfied: bool
    witness: Optional[int] = None
    reason: Optional[Literal["max_s", "space_cap"]] = None


class DiagProfile(BaseModel):
    """Membership bits of the diagonal language and the requirement outcomes."""

    config: DiagConfig
    bits: List[bool]
    limit: int
    requirements: List[RequirementStatus] = Field(default_factory=list)

    @property
    def members(self) -> List[int]:
        return [s for s, bit in enumerate(self.bits) if bit]

    @property
    def unsatisfied(self) -> List[RequirementStatus]:
        return [r for r in self.requirements if not r.satisfied]


class VerificationCheck(BaseModel):
    name: str
    horizon: int
    words_checked: int
    passed: bool
    counterexample: Optional[str] = None
    mode: Literal["exact", "exhaustive", "sampled"] = "exhaustive"


class VerificationSummary(BaseModel):
    checks: List[VerificationCheck] = Field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for check in self.checks if check.passed)

    @property
    def failed(self) -> int:
        return sum(1 for check in self.checks if not check.passed)


class InputRecord(BaseModel):
    path: str
    sha256: str


class RunReport(BaseModel):
    """Everything a command produced, in a reproducible JSON shape."""

    command: List[str]
    version: str
    inputs: List[InputRecord] = Field(default_factory=list)
    outputs: Dict[str, Any] = Field(default_factory=dict)
    verification: VerificationSummary = Field(default_factory=VerificationSummary)
    wall_time_seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = self.model_dump(mode="json")
        data["verification"]["passed"] = self.verification.passed
        data["verification"]["failed"] = self.verification.failed
        return data

from enum import Enum
from typing import Annotated, Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

NumberLike = Union[int, float, str]


# Документы файла спецификации
class ConstantRuleDoc(BaseModel):
	kind: Literal["constant"]
	value: NumberLike


class PeriodicRuleDoc(BaseModel):
	kind: Literal["periodic"]
	values: list[NumberLike] = Field(min_length=1)


class PrefixRuleDoc(BaseModel):
	kind: Literal["prefix"]
	values: list[NumberLike] = Field(min_length=1)
	tail: 'RuleDoc'


class FormulaRuleDoc(BaseModel):
	kind: Literal["formula"]
	expr: str


class BlockRuleDoc(BaseModel):
	kind: Literal["block"]
	k_m: Union[int, str]
	t_m: Union[int, str]
	in_block: NumberLike
	off_block: NumberLike


RuleDoc = Annotated[
	Union[ConstantRuleDoc, PeriodicRuleDoc, PrefixRuleDoc, FormulaRuleDoc, BlockRuleDoc],
	Field(discriminator="kind"),
]
PrefixRuleDoc.model_rebuild()


class PlacementDoc(BaseModel):
	kind: Literal["uniform", "endpoints", "offsets"] = "uniform"
	per_level: list[list[NumberLike]] = []

	@field_validator('kind', mode='before')
	def normalize_kind(cls, v):
		return v.strip().lower() if isinstance(v, str) else v


class SpecDocument(BaseModel):
	"""Один документ спецификации конструкции Морана"""
	model_config = ConfigDict(extra='forbid')

	name: str = "spec"
	dimension: int
	diameter: NumberLike = 1
	branching: RuleDoc
	ratios: RuleDoc
	placement: PlacementDoc = PlacementDoc()

	@field_validator('placement', mode='before')
	def expand_placement(cls, v):
		"""Строка 'uniform' / 'endpoints' раскрывается в объект"""
		if isinstance(v, str):
			return {"kind": v}
		return v


# Результаты вычислений
class Verdict(str, Enum):
	HOLDS = "holds_at_depth"
	FAILS = "fails_at_depth"
	INCONCLUSIVE = "inconclusive"


class CriterionKind(str, Enum):
	UD_SUFFICIENT = "UD_sufficient"
	UD_DIRECT = "UD_direct"
	EMBEDDABLE = "Embeddable"
	QL_EQUIVALENT = "QLEquivalent"
	NOT_EMBEDDABLE = "NotEmbeddableCertificate"


class CriterionVerdict(BaseModel):
	kind: CriterionKind
	value: Optional[float] = None
	threshold: float
	window: tuple[int, int]
	verdict: Verdict
	details: dict[str, Any] = {}
	trace: list[dict[str, Any]] = []

	@property
	def holds(self) -> bool:
		return self.verdict == Verdict.HOLDS


class HomogeneityReport(BaseModel):
	lambda_est: float
	kappa: float
	delta_est: float
	Delta_est: float
	probes: int
	depth: int
	aligned: bool
	consistent: bool
	covering_constant: float
	observed_ratio: float


class DimensionEstimate(BaseModel):
	spec: str
	dim_h_window: float
	dim_p_window: float
	window: tuple[int, int]
	exact_limit: Optional[float] = None


class CountResult(BaseModel):
	scale: float
	covering: int
	packing: int
	depth: int
	method: Literal["greedy_exact", "oracle_bruteforce"] = "greedy_exact"
	agrees: Optional[bool] = None


class BoxDimension(BaseModel):
	slope: float
	intercept: float
	rvalue: float
	scales: int


class DecadeSup(BaseModel):
	decade: int
	sup: float
	points: int


class ChiEstimate(BaseModel):
	estimate: float
	# Окно хвоста в терминах |ln r|
	window: tuple[float, float]
	trace: list[DecadeSup] = []


class ProfileComparison(BaseModel):
	bounded: bool
	bound: float
	growth: float
	bin_sups: list[tuple[int, float]] = []
	tail_sups: list[tuple[int, float]] = []


class DistortionStats(BaseModel):
	pairs: int
	exhaustive: bool
	lipschitz: float
	max_ratio_up: float
	max_ratio_down: float
	sandwich_checked: bool
	sandwich_violations: int = 0
	deviation_bins: list[float] = []
	excluded_collisions: int = 0


class AcceptanceCheck(BaseModel):
	name: str
	value: Any = None
	expected: str
	passed: bool


# Запуск и отчёт
class RunConfig(BaseModel):
	command: str
	spec_paths: list[str] = []
	depth: int
	seed: int
	out_dir: str
	options: dict[str, Any] = {}
	tolerances: dict[str, float] = {}


class Report(BaseModel):
	command: str
	config: RunConfig
	digests: dict[str, str] = {}
	results: dict[str, Any] = {}
	verdicts: list[CriterionVerdict] = []
	checks: list[AcceptanceCheck] = []
	artifacts: list[str] = []
	status: str = "success"
	exit_code: int = 0

"""
Реестр воспроизводимых примеров: документы спецификаций и проверки,
которые прогоняются командой reproduce.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from app.config import settings
from app.core.criteria import (
	block_exponents,
	embed_condition,
	non_embeddability_certificate,
	ql_equivalent,
	ud_direct,
	ud_sufficient,
)
from app.core.embedding import build_embedding, ql_bijection
from app.core.errors import CapacityExhausted, UnknownExample
from app.core.profiles import chi, dims
from app.core.realization import realize
from app.models import AcceptanceCheck, CriterionVerdict
from app.services.spec_loader import LoadedSpec, spec_from_dict

# Глубины проверок
EX_LENGTH_DEPTH = 98
WINDOW_DEPTH = 1_000
EXUD_DEPTH = 125_060
QL_TRACE_DEPTH = 10_000
QL_MAP_DEPTH = 12
EMBED_DEPTHS = (6, 7, 8)
CERTIFICATE_BLOCKS = 4

DOCUMENTS: dict[str, dict[str, Any]] = {
	"cantor": {
		"name": "cantor",
		"dimension": 1,
		"branching": {"kind": "constant", "value": 2},
		"ratios": {"kind": "constant", "value": "1/3"},
		"placement": "endpoints",
	},
	"falconer_marsh": {
		"name": "falconer-marsh",
		"dimension": 1,
		"branching": {"kind": "constant", "value": 3},
		"ratios": {"kind": "constant", "value": "3**(-log(3)/log(2))"},
	},
	"example2_a": {
		"name": "example2-a",
		"dimension": 1,
		"branching": {"kind": "block", "k_m": "m**2-1", "t_m": "m**2", "in_block": 3, "off_block": 2},
		"ratios": {"kind": "constant", "value": "1/5"},
	},
	"example2_b": {
		"name": "example2-b",
		"dimension": 1,
		"branching": {"kind": "constant", "value": 2},
		"ratios": {"kind": "constant", "value": "1/5"},
	},
	"example2_target": {
		"name": "example2-target",
		"dimension": 1,
		"branching": {"kind": "constant", "value": 3},
		"ratios": {"kind": "constant", "value": "1/5"},
	},
	"ex": {
		"name": "EX",
		"dimension": 1,
		"branching": {"kind": "constant", "value": 2},
		"ratios": {"kind": "formula", "expr": "(k+1)/(2*(k+2))"},
		"placement": "endpoints",
	},
	"pab": {
		"name": "P:A<B",
		"dimension": 1,
		"branching": {"kind": "block", "k_m": "m**3", "t_m": "k_m+m", "in_block": 3, "off_block": 5},
		"ratios": {"kind": "constant", "value": "1/6"},
	},
	"exud": {
		"name": "Ex:ud",
		"dimension": 1,
		"branching": {"kind": "constant", "value": 3},
		"ratios": {"kind": "block", "k_m": "m**3", "t_m": "k_m+m", "in_block": "1/3 - 1/(6*m)", "off_block": "1/6"},
	},
}


@dataclass
class ExampleRun:
	example: str
	specs: list[LoadedSpec] = field(default_factory=list)
	results: dict[str, Any] = field(default_factory=dict)
	verdicts: list[CriterionVerdict] = field(default_factory=list)
	checks: list[AcceptanceCheck] = field(default_factory=list)
	tables: dict[str, list[dict]] = field(default_factory=dict)

	@property
	def passed(self) -> bool:
		return all(check.passed for check in self.checks)

	def check(self, name: str, value: Any, expected: str, passed: bool) -> None:
		if isinstance(value, Fraction):
			value = str(value)
		self.checks.append(AcceptanceCheck(name=name, value=value, expected=expected, passed=bool(passed)))


def example_spec(key: str) -> LoadedSpec:
	return spec_from_dict(DOCUMENTS[key])


def _close(value: float, expected: float, tolerance: float) -> bool:
	return value is not None and abs(value - expected) <= tolerance


def reproduce_example1() -> ExampleRun:
	"""Множество Кантора и самоподобное множество с n = 3, r = 3^{−log3/log2}: χ = 0"""
	run = ExampleRun("Example1")
	cantor, other = example_spec("cantor"), example_spec("falconer_marsh")
	run.specs = [cantor, other]

	estimate = chi(cantor.spec, other.spec, WINDOW_DEPTH)
	run.results["chi"] = estimate.estimate
	run.tables["chi_trace"] = [row.model_dump() for row in estimate.trace]
	run.verdicts.extend([
		ud_sufficient(cantor.spec, depth=WINDOW_DEPTH),
		ud_sufficient(other.spec, depth=WINDOW_DEPTH),
		ql_equivalent(cantor.spec, other.spec, depth=WINDOW_DEPTH),
	])
	run.check("chi", estimate.estimate, "0", estimate.estimate <= settings.EQUAL_TOLERANCE)
	for loaded in run.specs:
		limit = dims(loaded.spec, WINDOW_DEPTH).exact_limit
		run.check(f"exact_limit {loaded.spec.name}", limit, "log2/log3", _close(limit, math.log(2) / math.log(3), 1e-9))
	return run


def reproduce_example2() -> ExampleRun:
	"""Вложение n≡2 в m≡3 при c ≡ 1/5 и квазилипшицева биекция для пары с редкими тройками"""
	run = ExampleRun("Example2")
	a, b, target = example_spec("example2_a"), example_spec("example2_b"), example_spec("example2_target")
	run.specs = [a, b, target]
	eta = Fraction(1, 5)

	condition = embed_condition(b.spec, target.spec)
	run.verdicts.append(condition)
	run.check("embed sup", condition.value, "log2/log3", _close(condition.value, math.log(2) / math.log(3), 1e-9))

	lipschitz = []
	rows = []
	for depth in EMBED_DEPTHS:
		source = realize(b.spec, b.placement, depth)
		image = realize(target.spec, target.placement, target.spec.scale_index(eta ** depth) + settings.COUNT_REFINEMENT_MARGIN)
		stats = build_embedding(source, image, eta, depth).stats
		lipschitz.append(stats.lipschitz)
		rows.append({"depth": depth, **stats.model_dump(exclude={"deviation_bins"})})
		run.check(f"sandwich K={depth}", stats.sandwich_violations, "0", stats.sandwich_violations == 0)
	run.tables["embedding"] = rows
	spread = max(lipschitz) / min(lipschitz) - 1
	run.check("L spread", spread, "< 0.25", spread < 0.25)

	try:
		build_embedding(realize(target.spec, target.placement, 2), realize(b.spec, b.placement, 8), eta, 2)
		run.check("negative control", "embedded", "CapacityExhausted", False)
	except CapacityExhausted as e:
		run.check("negative control", e.name, "CapacityExhausted", True)

	for loaded in (a, b):
		verdict = ud_sufficient(loaded.spec, depth=WINDOW_DEPTH)
		run.verdicts.append(verdict)
		run.check(f"ud_sufficient {loaded.spec.name}", verdict.value, "holds", verdict.holds)

	trace = ql_equivalent(a.spec, b.spec, depth=QL_TRACE_DEPTH)
	run.verdicts.append(trace)
	run.check("ql trace", trace.value, f"< {settings.TRACE_SLACK}", trace.holds)

	bijection = ql_bijection(a.spec, b.spec, Fraction(1, 6), QL_MAP_DEPTH, a.placement, b.placement)
	bins = bijection.stats.deviation_bins
	run.results["ql_deviation_bins"] = bins
	tail = bins[-3:]
	run.check("ql deviation", tail, "убывают", all(x > y for x, y in zip(tail, tail[1:])))
	return run


def reproduce_ex() -> ExampleRun:
	"""c_k = (k+1)/(2(k+2)): размерность 1, суммарная длина 2/(K+2) → 0"""
	run = ExampleRun("EX")
	ex = example_spec("ex")
	run.specs = [ex]

	length = ex.spec.total_length(EX_LENGTH_DEPTH)
	run.results["total_length"] = str(length)
	run.check("total length", length, f"2/{EX_LENGTH_DEPTH + 2}", length == Fraction(2, EX_LENGTH_DEPTH + 2) and length <= Fraction(1, 50))

	estimate = dims(ex.spec, WINDOW_DEPTH)
	run.results["dims"] = estimate.model_dump()
	run.check("exact_limit", estimate.exact_limit, "1", _close(estimate.exact_limit, 1.0, 1e-9))
	run.check("window alpha", estimate.dim_h_window, "≥ 0.98", estimate.dim_h_window >= 0.98)
	run.tables["total_length"] = [
		{"k": k, "total_length": float(ex.spec.total_length(k)), "expected": 2 / (k + 2)}
		for k in range(1, EX_LENGTH_DEPTH + 1)
	]
	return run


def reproduce_pab() -> ExampleRun:
	"""Блоки троек при c ≡ 1/6: ν-отношения 3^m и сертификат невложимости"""
	run = ExampleRun("PAB")
	pab = example_spec("pab")
	run.specs = [pab]

	estimate = dims(pab.spec, WINDOW_DEPTH)
	run.results["dims"] = estimate.model_dump()
	target = math.log(5) / math.log(6)
	run.check("exact_limit", estimate.exact_limit, "log5/log6", _close(estimate.exact_limit, target, 1e-9))
	run.check("window estimate", estimate.dim_p_window, "log5/log6 ± 0.02", _close(estimate.dim_p_window, target, 0.02))

	lower, _ = sorted(block_exponents(pab.spec))
	certificate = non_embeddability_certificate(math.log(4) / math.log(6), pab.spec, CERTIFICATE_BLOCKS)
	boundary = non_embeddability_certificate(lower, pab.spec, CERTIFICATE_BLOCKS)
	run.verdicts.extend([certificate, boundary])
	run.tables["nu_ratio"] = certificate.trace

	for row in certificate.trace[:3]:
		expected = 3 ** row["m"]
		run.check(f"nu ratio m={row['m']}", row["nu_ratio"], str(expected), row["nu_ratio"] == str(expected) and row["exact"])
	slope = math.log(4 / 3)
	run.check("slope s=log4/log6", certificate.value, "log(4/3) ± 5%", _close(certificate.value, slope, 0.05 * slope))
	run.check("slope s=log3/log6", boundary.value, "0 ± 1e-6", _close(boundary.value, 0.0, 1e-6))
	return run


def reproduce_exud() -> ExampleRun:
	"""Зазоры 1/(4m) внутри блоков: равномерная несвязность нарушается"""
	run = ExampleRun("EXUD")
	exud = example_spec("exud")
	run.specs = [exud]

	estimate = dims(exud.spec, WINDOW_DEPTH)
	run.results["dims"] = estimate.model_dump()
	run.check("window estimate", estimate.dim_h_window, "log3/log6 ± 0.02", _close(estimate.dim_h_window, math.log(3) / math.log(6), 0.02))

	sufficient = ud_sufficient(exud.spec, depth=EXUD_DEPTH)
	direct = ud_direct(realize(exud.spec, exud.placement, EXUD_DEPTH))
	run.verdicts.extend([sufficient, direct])
	run.tables["gap_trace"] = direct.trace
	run.check("ud_sufficient", sufficient.value, "≥ 0.99, fails", sufficient.value >= 0.99 and not sufficient.holds)
	run.check("ud_direct", direct.verdict.value, "fails_at_depth", direct.verdict.value == "fails_at_depth")

	gaps = {row["level"]: row["value"] for row in direct.trace}
	rule = exud.spec.ratios
	for m in (5, 10, 50):
		level = rule.k_m(m) + 1
		value = gaps.get(level)
		run.check(f"gap m={m}", value, f"1/{4 * m}", _close(value, 1 / (4 * m), 1e-12))
	return run


REGISTRY: dict[str, Callable[[], ExampleRun]] = {
	"Example1": reproduce_example1,
	"Example2": reproduce_example2,
	"EX": reproduce_ex,
	"PAB": reproduce_pab,
	"EXUD": reproduce_exud,
}
ALIASES = {"P:A<B": "PAB", "Ex:ud": "EXUD", "EX:k+1/k+2": "EX"}


def resolve_example(example_id: str) -> str:
	name = ALIASES.get(example_id, example_id)
	if name not in REGISTRY:
		known = ", ".join([*REGISTRY, *ALIASES])
		raise UnknownExample(f"Неизвестный пример '{example_id}'. Доступны: {known}", key=example_id)
	return name


def run_example(example_id: str) -> ExampleRun:
	return REGISTRY[resolve_example(example_id)]()

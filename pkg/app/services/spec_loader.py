import json
from pathlib import Path
from typing import Any, NamedTuple

from pydantic import ValidationError

from app.core.errors import MoranError, ParseError
from app.core.expressions import Expression, Number
from app.core.moran_spec import MoranSpec, RawSpec, validate
from app.core.realization import Placement, PlacementKind
from app.core.sequences import BlockRule, ConstantRule, FormulaRule, PeriodicRule, PrefixRule, SequenceRule
from app.models import PlacementDoc, RuleDoc, SpecDocument
from app.utils.base import sha256_text, slugify_name


class LoadedSpec(NamedTuple):
	spec: MoranSpec
	placement: Placement
	document: SpecDocument
	digest: str
	source: str


def to_number(value: int | float | str) -> Number:
	"""Число из документа: целые и дроби точно, иррациональные константы во float"""
	expression = Expression(value)
	if not expression.is_constant:
		raise ParseError(f"Ожидалась константа, получено '{value}'")
	return expression(1)


def build_rule(doc: RuleDoc) -> SequenceRule:
	"""Правило последовательности по разобранному документу"""
	if doc.kind == "constant":
		return ConstantRule(to_number(doc.value))
	if doc.kind == "periodic":
		return PeriodicRule(tuple(to_number(v) for v in doc.values))
	if doc.kind == "prefix":
		return PrefixRule(tuple(to_number(v) for v in doc.values), build_rule(doc.tail))
	if doc.kind == "formula":
		return FormulaRule(Expression(doc.expr, "k"))

	# Блочное правило: t_m может ссылаться на k_m
	k_m = Expression(doc.k_m, "m")
	return BlockRule(
		k_m=k_m,
		t_m=Expression(doc.t_m, "m", bindings={"k_m": k_m}),
		in_block=Expression(doc.in_block, "m"),
		off_block=to_number(doc.off_block),
	)


def build_placement(doc: PlacementDoc) -> Placement:
	return Placement(
		kind=PlacementKind(doc.kind),
		per_level=tuple(tuple(to_number(v) for v in level) for level in doc.per_level),
	)


def _with_key(key: str, func, *args):
	"""Ошибки разбора выражений дополняются ключом документа"""
	try:
		return func(*args)
	except ParseError as e:
		raise ParseError(e.message, **{"key": key, **e.details}) from e


def parse_spec_text(text: str, source: str = "<string>") -> SpecDocument:
	try:
		data = json.loads(text)
	except json.JSONDecodeError as e:
		raise ParseError(f"{source}: некорректный JSON: {e.msg}", line=e.lineno, column=e.colno) from e
	return parse_spec_data(data, source)


def parse_spec_data(data: Any, source: str = "<string>") -> SpecDocument:
	try:
		return SpecDocument.model_validate(data)
	except ValidationError as e:
		error = e.errors()[0]
		key = ".".join(str(part) for part in error["loc"])
		raise ParseError(f"{source}: {error['msg']}", key=key) from e


def build_spec(document: SpecDocument, source: str = "<string>", digest: str = "") -> LoadedSpec:
	raw = RawSpec(
		dimension=document.dimension,
		diameter=_with_key("diameter", to_number, document.diameter),
		branching=_with_key("branching", build_rule, document.branching),
		ratios=_with_key("ratios", build_rule, document.ratios),
		name=document.name,
	)
	placement = _with_key("placement", build_placement, document.placement)
	canonical = document.model_dump_json()
	return LoadedSpec(validate(raw), placement, document, digest or sha256_text(canonical), source)


def load_spec(path: Path) -> LoadedSpec:
	"""Читает и проверяет файл спецификации"""
	if not path.exists():
		raise ParseError(f"Файл не найден: {path}", key=str(path))
	text = path.read_text(encoding="utf-8")
	document = parse_spec_text(text, source=path.name)
	return build_spec(document, source=str(path), digest=sha256_text(text))


def load_specs(paths: list[Path]) -> list[LoadedSpec]:
	loaded = []
	for path in paths:
		try:
			loaded.append(load_spec(path))
		except MoranError as e:
			e.details.setdefault("file", path.name)
			raise
	return loaded


def spec_from_dict(data: dict[str, Any]) -> LoadedSpec:
	return build_spec(parse_spec_data(data, source=data.get("name", "<dict>")))


def spec_schema() -> dict[str, Any]:
	return SpecDocument.model_json_schema()


def spec_file_name(document: SpecDocument) -> str:
	return f"{slugify_name(document.name)}.json"

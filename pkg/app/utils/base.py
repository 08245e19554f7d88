import hashlib
import json
import re
from fractions import Fraction
from typing import Any

from slugify import slugify


RANGE_PATTERN = re.compile(r'^(\d*)-(\d*)$')


def parse_range_string(range_str: str | None, total: int | None = None) -> tuple[int | None, int | None]:
	"""
	Строка диапазона уровней в (offset, limit): '1-10', '3:9', '5-', ':8', '7' или 'all'.
	Уровни считаются с 1, конец включается и обрезается по total.
	"""
	text = (range_str or "").replace(" ", "").lower()
	if text in ("", "all"):
		return None, None

	if text.isdigit():
		start, end = 0, int(text)
		if end == 0:
			raise ValueError("Число уровней должно быть положительным")
	else:
		match = RANGE_PATTERN.match(text.replace(":", "-"))
		if not match:
			raise ValueError(f"Некорректный диапазон '{range_str}'. Используйте: '1-10', ':10', '5-', 'all'")
		first, last = match.groups()
		start = int(first) - 1 if first else 0
		end = int(last) if last else total
		if start < 0:
			raise ValueError(f"Уровни нумеруются с 1: '{range_str}'")

	if total is not None:
		if start >= total:
			raise ValueError(f"Начало диапазона ({start + 1}) больше глубины ({total})")
		end = min(end, total)
	if end is None:
		return start, None
	if end <= start:
		raise ValueError(f"Конец диапазона должен быть больше начала: '{range_str}'")
	return start, end - start


def levels_from_range(range_str: str | None, depth: int) -> list[int]:
	"""Уровни 1..depth, выбранные строкой диапазона"""
	offset, limit = parse_range_string(range_str, total=depth)
	offset = offset or 0
	limit = depth - offset if limit is None else limit
	return list(range(offset + 1, offset + limit + 1))


def format_number(value: Any, digits: int = 6) -> str:
	"""Короткая запись для консоли: дроби как есть, float с заданной точностью"""
	if isinstance(value, bool) or value is None:
		return str(value)
	if isinstance(value, (int, Fraction)):
		text = str(value)
		return text if len(text) <= 24 else f"{float(value):.{digits}g}"
	if isinstance(value, float):
		return f"{value:.{digits}g}"
	return str(value)


def slugify_name(name: str) -> str:
	"""
	Преобразует имя конструкции в slug для имён файлов.
	Пример: 'P:A<B' -> 'p-a-b'
	"""
	return slugify(
		name,
		lowercase=True,
		separator='-',
		regex_pattern=r'[^-a-z0-9]+'
	) or "spec"


def sha256_text(text: str) -> str:
	return hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_json(data: Any) -> str:
	"""JSON с сортированными ключами для дайджестов"""
	return json.dumps(data, sort_keys=True, ensure_ascii=False, default=str)

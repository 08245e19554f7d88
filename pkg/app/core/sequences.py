"""
Правила последовательностей n_k и c_k.

Каждое правило вычисляется в любом индексе k ≥ 1 (точное значение), умеет
векторно отдавать первые K значений в float и сообщает inf/sup и асимптотическое
среднее по Чезаро, из которого строится предельная размерность.
"""
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, ClassVar

import numpy as np
import sympy

from app.core.errors import DepthExhausted, InvalidSpec, WordOutOfRange
from app.core.expressions import Expression, Number

# Сколько значений m/k перебирается при оценке inf/sup формул
SAMPLE_POINTS = 64
# Сколько блоков проверяется на условие k_m < t_m < k_{m+1}
SCHEDULE_PROBE = 10_000


def _check_index(k: int) -> None:
	if k < 1:
		raise WordOutOfRange(f"Индекс уровня должен быть ≥ 1, получено {k}", level=k)


def _is_exact(value: Number) -> bool:
	return not isinstance(value, float)


def _safe_mean(transform: Callable[[float], float], value: Number) -> float | None:
	try:
		result = transform(float(value))
	except (ValueError, OverflowError):
		return None
	return result if math.isfinite(result) else None


class SequenceRule(ABC):
	kind: ClassVar[str]

	@abstractmethod
	def value(self, k: int) -> Number:
		"""Точное значение в индексе k"""

	@abstractmethod
	def float_values(self, count: int) -> np.ndarray:
		"""Значения для k = 1..count (элемент 0 соответствует k=1)"""

	@abstractmethod
	def infimum(self) -> Number:
		pass

	@abstractmethod
	def supremum(self) -> Number:
		pass

	@abstractmethod
	def asymptotic_mean(self, transform: Callable[[float], float]) -> float | None:
		"""lim (1/K) Σ transform(v_k), если правило допускает замкнутую форму"""

	@property
	@abstractmethod
	def is_exact(self) -> bool:
		pass

	@abstractmethod
	def describe(self) -> dict[str, Any]:
		pass

	def values(self, count: int) -> list[Number]:
		return [self.value(k) for k in range(1, count + 1)]


@dataclass(frozen=True)
class ConstantRule(SequenceRule):
	constant: Number
	kind: ClassVar[str] = "constant"

	def value(self, k: int) -> Number:
		_check_index(k)
		return self.constant

	def float_values(self, count: int) -> np.ndarray:
		return np.full(count, float(self.constant))

	def infimum(self) -> Number:
		return self.constant

	def supremum(self) -> Number:
		return self.constant

	def asymptotic_mean(self, transform: Callable[[float], float]) -> float | None:
		return _safe_mean(transform, self.constant)

	@property
	def is_exact(self) -> bool:
		return _is_exact(self.constant)

	def describe(self) -> dict[str, Any]:
		return {"kind": self.kind, "value": str(self.constant)}


@dataclass(frozen=True)
class PeriodicRule(SequenceRule):
	period: tuple[Number, ...]
	kind: ClassVar[str] = "periodic"

	def __post_init__(self):
		if not self.period:
			raise InvalidSpec("Периодическое правило требует хотя бы одно значение")

	def value(self, k: int) -> Number:
		_check_index(k)
		return self.period[(k - 1) % len(self.period)]

	def float_values(self, count: int) -> np.ndarray:
		return np.resize(np.array([float(v) for v in self.period]), count)

	def infimum(self) -> Number:
		return min(self.period)

	def supremum(self) -> Number:
		return max(self.period)

	def asymptotic_mean(self, transform: Callable[[float], float]) -> float | None:
		means = [_safe_mean(transform, v) for v in self.period]
		if any(m is None for m in means):
			return None
		return sum(means) / len(means)

	@property
	def is_exact(self) -> bool:
		return all(_is_exact(v) for v in self.period)

	def describe(self) -> dict[str, Any]:
		return {"kind": self.kind, "values": [str(v) for v in self.period]}


@dataclass(frozen=True)
class PrefixRule(SequenceRule):
	"""Явный префикс, затем правило-хвост (хвост вычисляется в глобальном индексе k)"""
	prefix: tuple[Number, ...]
	tail: SequenceRule
	kind: ClassVar[str] = "prefix"

	def value(self, k: int) -> Number:
		_check_index(k)
		if k <= len(self.prefix):
			return self.prefix[k - 1]
		return self.tail.value(k)

	def float_values(self, count: int) -> np.ndarray:
		result = self.tail.float_values(count)
		head = min(count, len(self.prefix))
		result[:head] = [float(v) for v in self.prefix[:head]]
		return result

	def infimum(self) -> Number:
		return min([*self.prefix, self.tail.infimum()])

	def supremum(self) -> Number:
		return max([*self.prefix, self.tail.supremum()])

	def asymptotic_mean(self, transform: Callable[[float], float]) -> float | None:
		return self.tail.asymptotic_mean(transform)

	@property
	def is_exact(self) -> bool:
		return all(_is_exact(v) for v in self.prefix) and self.tail.is_exact

	def describe(self) -> dict[str, Any]:
		return {"kind": self.kind, "values": [str(v) for v in self.prefix], "tail": self.tail.describe()}


@dataclass(frozen=True)
class FiniteRule(SequenceRule):
	"""Конечная последовательность: за последним значением уровни не определены"""
	finite_values: tuple[Number, ...]
	kind: ClassVar[str] = "finite"

	def __post_init__(self):
		if not self.finite_values:
			raise InvalidSpec("Конечное правило требует хотя бы одно значение")

	def _check_length(self, k: int) -> None:
		if k > len(self.finite_values):
			raise DepthExhausted(
				f"Последовательность задана только до уровня {len(self.finite_values)}, запрошен {k}",
				level=k,
			)

	def value(self, k: int) -> Number:
		_check_index(k)
		self._check_length(k)
		return self.finite_values[k - 1]

	def float_values(self, count: int) -> np.ndarray:
		self._check_length(count)
		return np.array([float(v) for v in self.finite_values[:count]])

	def infimum(self) -> Number:
		return min(self.finite_values)

	def supremum(self) -> Number:
		return max(self.finite_values)

	def asymptotic_mean(self, transform: Callable[[float], float]) -> float | None:
		return None

	@property
	def is_exact(self) -> bool:
		return all(_is_exact(v) for v in self.finite_values)

	def describe(self) -> dict[str, Any]:
		return {"kind": self.kind, "values": [str(v) for v in self.finite_values]}


@dataclass(frozen=True)
class FormulaRule(SequenceRule):
	"""Рациональная функция от k, например (k+1)/(2*(k+2))"""
	expression: Expression
	kind: ClassVar[str] = "formula"

	def value(self, k: int) -> Number:
		_check_index(k)
		return self.expression(k)

	def float_values(self, count: int) -> np.ndarray:
		return self.expression.float_values(np.arange(1, count + 1))

	@cached_property
	def _extremes(self) -> tuple[Number, Number]:
		candidates = [self.expression(k) for k in range(1, SAMPLE_POINTS + 1)]
		limit = self.expression.limit()
		if math.isfinite(limit):
			candidates.append(limit)
		return min(candidates), max(candidates)

	def infimum(self) -> Number:
		return self._extremes[0]

	def supremum(self) -> Number:
		return self._extremes[1]

	def asymptotic_mean(self, transform: Callable[[float], float]) -> float | None:
		limit = self.expression.limit()
		if not math.isfinite(limit):
			return None
		return _safe_mean(transform, limit)

	@property
	def is_exact(self) -> bool:
		return self.expression.is_exact

	def describe(self) -> dict[str, Any]:
		return {"kind": self.kind, "expr": str(self.expression)}


@dataclass(frozen=True)
class BlockRule(SequenceRule):
	"""
	Блочное правило: на уровнях k ∈ [k_m + 1, t_m] значение in_block(m),
	на остальных уровнях off_block. Требуется k_m < t_m < k_{m+1}.
	"""
	k_m: Expression
	t_m: Expression
	in_block: Expression
	off_block: Number
	kind: ClassVar[str] = "block"

	def __post_init__(self):
		previous_end = None
		for m in range(1, SCHEDULE_PROBE + 1):
			start, end = self.k_m(m), self.t_m(m)
			if not isinstance(start, int) or not isinstance(end, int):
				raise InvalidSpec(f"k_m и t_m должны быть целыми (m={m})", level=m)
			if start < 0 or start >= end:
				raise InvalidSpec(f"Нарушено k_m < t_m при m={m}: k_m={start}, t_m={end}", level=m)
			if previous_end is not None and start <= previous_end:
				raise InvalidSpec(f"Нарушено t_m < k_(m+1) при m={m - 1}", level=m - 1)
			previous_end = end

	def block_of(self, k: int) -> int | None:
		"""Номер блока m, содержащего уровень k, или None (поиск за O(log k))"""
		_check_index(k)
		if self.k_m(1) >= k:
			return None

		high = 1
		while self.k_m(high) < k:
			high *= 2
		low = high // 2 if high > 1 else 1

		# Последний m с k_m < k лежит в [low, high)
		while high - low > 1:
			middle = (low + high) // 2
			if self.k_m(middle) < k:
				low = middle
			else:
				high = middle

		return low if k <= self.t_m(low) else None

	def value(self, k: int) -> Number:
		m = self.block_of(k)
		return self.off_block if m is None else self.in_block(m)

	def blocks(self, count: int) -> list[tuple[int, int, int]]:
		"""Блоки (m, первый уровень, последний уровень), пересекающие уровни 1..count"""
		result = []
		m = 1
		while (start := self.k_m(m)) < count:
			result.append((m, start + 1, min(self.t_m(m), count)))
			m += 1
		return result

	def float_values(self, count: int) -> np.ndarray:
		result = np.full(count, float(self.off_block))
		for m, first, last in self.blocks(count):
			result[first - 1:last] = float(self.in_block(m))
		return result

	@cached_property
	def _extremes(self) -> tuple[Number, Number]:
		candidates = [self.off_block, *(self.in_block(m) for m in range(1, SAMPLE_POINTS + 1))]
		limit = self.in_block.limit()
		if math.isfinite(limit):
			candidates.append(limit)
		return min(candidates), max(candidates)

	def infimum(self) -> Number:
		return self._extremes[0]

	def supremum(self) -> Number:
		return self._extremes[1]

	@cached_property
	def density_vanishes(self) -> bool:
		"""Доля блочных уровней стремится к нулю: (t_m − k_m)/(k_{m+1} − k_m) → 0"""
		m = self.k_m.symbol
		start = self.k_m.expr
		ratio = (self.t_m.expr - start) / (start.subs(m, m + 1) - start)
		return sympy.limit(ratio, m, sympy.oo) == 0

	def asymptotic_mean(self, transform: Callable[[float], float]) -> float | None:
		if not self.density_vanishes:
			return None
		# Блочные значения должны оставаться в области transform
		if _safe_mean(transform, self.infimum()) is None or _safe_mean(transform, self.supremum()) is None:
			return None
		return _safe_mean(transform, self.off_block)

	@property
	def is_exact(self) -> bool:
		return self.in_block.is_exact and _is_exact(self.off_block)

	def describe(self) -> dict[str, Any]:
		return {
			"kind": self.kind,
			"k_m": str(self.k_m),
			"t_m": str(self.t_m),
			"in_block": str(self.in_block),
			"off_block": str(self.off_block),
		}

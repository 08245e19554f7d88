"""
Геометрическая реализация конструкции Морана: дерево базовых элементов J_σ
в ℝ¹ (отрезки) или ℝ² (квадраты).

Дерево не хранится: элемент вычисляется по слову как сумма абсолютных сдвигов
детей на каждом уровне, сдвиги уровня считаются один раз и кэшируются.
"""
import bisect
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from app.core.errors import DimensionMismatch, NotOneDimensional, PlacementInfeasible, WordOutOfRange
from app.core.expressions import Number
from app.core.moran_spec import MoranSpec

Word = tuple[int, ...]


class PlacementKind(str, Enum):
	UNIFORM = "uniform"
	ENDPOINTS = "endpoints"
	OFFSETS = "offsets"


class Tail(str, Enum):
	ONES = "ones"
	MIDDLE = "middle"


@dataclass(frozen=True)
class Placement:
	kind: PlacementKind = PlacementKind.UNIFORM
	# Нормированные левые концы детей по уровням; последний набор повторяется
	per_level: tuple[tuple[Number, ...], ...] = ()

	def normalized_offsets(self, level: int, n: int, c: Number) -> list[Number]:
		"""Левые концы детей в долях длины родителя (одномерный случай)"""
		if self.kind == PlacementKind.ENDPOINTS:
			if n != 2:
				raise PlacementInfeasible(f"Размещение по концам требует n_k = 2, на уровне {level} n = {n}", level=level)
			return [0, 1 - c]

		if self.kind == PlacementKind.OFFSETS:
			if not self.per_level:
				raise PlacementInfeasible("Не заданы сдвиги для размещения offsets", level=level)
			offsets = list(self.per_level[min(level, len(self.per_level)) - 1])
			if len(offsets) != n:
				raise PlacementInfeasible(
					f"На уровне {level} задано {len(offsets)} сдвигов, а n = {n}", level=level
				)
			for left, right in zip(offsets, offsets[1:]):
				if right - left < c:
					raise PlacementInfeasible(f"Дети пересекаются на уровне {level}", level=level)
			if offsets[0] < 0 or offsets[-1] > 1 - c:
				raise PlacementInfeasible(f"Сдвиги выходят за пределы [0, 1 − c] на уровне {level}", level=level)
			return offsets

		step = c + (1 - n * c) / (n - 1)
		return [i * step for i in range(n)]

	def describe(self) -> dict:
		if self.kind == PlacementKind.OFFSETS:
			return {"kind": self.kind.value, "per_level": [[str(v) for v in row] for row in self.per_level]}
		return {"kind": self.kind.value}


def grid_size(n: int) -> int:
	return math.isqrt(n - 1) + 1


class Element(NamedTuple):
	word: Word
	origin: tuple[Number, ...]
	extent: Number

	@property
	def level(self) -> int:
		return len(self.word)

	@property
	def left(self) -> Number:
		return self.origin[0]

	@property
	def right(self) -> Number:
		return self.origin[0] + self.extent

	@property
	def center(self) -> tuple[Number, ...]:
		return tuple(coordinate + self.extent / 2 for coordinate in self.origin)


class PointAddress(NamedTuple):
	word: Word
	coordinates: tuple[Number, ...]
	resolution: Number

	@property
	def x(self) -> Number:
		return self.coordinates[0]


class Realization:
	"""Дерево элементов глубины depth с заданным размещением детей"""

	def __init__(self, spec: MoranSpec, placement: Placement | None = None, depth: int = 12):
		if depth < 1:
			raise WordOutOfRange(f"Глубина должна быть ≥ 1, получено {depth}", level=depth)
		self.spec = spec
		self.placement = placement or Placement()
		self.depth = depth
		self._offsets: dict[int, list[tuple[Number, ...]]] = {}
		self._normalized: dict[int, list] = {}

		self._check_placement()

	def _check_placement(self) -> None:
		"""Проверка совместимости размещения со всеми уровнями 1..depth"""
		if self.dimension == 2:
			if self.placement.kind != PlacementKind.UNIFORM:
				raise PlacementInfeasible("В ℝ² поддерживается только равномерная сетка")
			g = np.floor(np.sqrt(self.spec.branching.float_values(self.depth) - 1)) + 1
			overflow = np.flatnonzero(g * self.spec.ratios.float_values(self.depth) > 1 + 1e-12)
			if overflow.size:
				level = int(overflow[0]) + 1
				raise PlacementInfeasible(f"Сетка {int(g[level - 1])}×{int(g[level - 1])} не помещается на уровне {level}", level=level)
			return

		if self.placement.kind == PlacementKind.ENDPOINTS:
			wrong = np.flatnonzero(self.spec.branching.float_values(self.depth) != 2)
			if wrong.size:
				level = int(wrong[0]) + 1
				raise PlacementInfeasible(
					f"Размещение по концам требует n_k = 2, на уровне {level} n = {self.spec.n(level)}", level=level
				)
		elif self.placement.kind == PlacementKind.OFFSETS:
			for level in range(1, self.depth + 1):
				self._normalized_offsets(level)

	@property
	def dimension(self) -> int:
		return self.spec.dimension

	def require_1d(self) -> None:
		if self.dimension != 1:
			raise NotOneDimensional("Операция определена только для реализаций в ℝ¹")

	def _normalized_offsets(self, level: int) -> list:
		if level not in self._normalized:
			n, c = self.spec.n(level), self.spec.c(level)
			if self.dimension == 1:
				self._normalized[level] = [(o,) for o in self.placement.normalized_offsets(level, n, c)]
			else:
				g = grid_size(n)
				if g * c > 1:
					raise PlacementInfeasible(
						f"Сетка {g}×{g} не помещается на уровне {level}: g·c = {g * c}", level=level
					)
				step = c + (1 - g * c) / (g - 1)
				self._normalized[level] = [((i % g) * step, (i // g) * step) for i in range(n)]
		return self._normalized[level]

	def level_offsets(self, level: int) -> list[tuple[Number, ...]]:
		"""Абсолютные сдвиги детей уровня level относительно начала родителя"""
		if level not in self._offsets:
			parent_extent = self.spec.level_radius(level - 1)
			self._offsets[level] = [
				tuple(value * parent_extent for value in offset) for offset in self._normalized_offsets(level)
			]
		return self._offsets[level]

	def _check(self, word: Sequence[int], limit: int | None = None) -> Word:
		limit = self.depth if limit is None else limit
		if len(word) > limit:
			raise WordOutOfRange(f"Длина слова {len(word)} больше допустимой {limit}", level=len(word))
		self.spec.check_word(word)
		return tuple(word)

	def root(self) -> Element:
		return Element((), (0,) * self.dimension, self.spec.diameter)

	def locate(self, word: Sequence[int]) -> Element:
		"""Элемент J_σ: начало и длина r_k·|J|"""
		word = self._check(word)
		origin = [0] * self.dimension
		for level, letter in enumerate(word, 1):
			shift = self.level_offsets(level)[letter - 1]
			for axis in range(self.dimension):
				origin[axis] += shift[axis]
		return Element(word, tuple(origin), self.spec.level_radius(len(word)))

	def children(self, element: Element) -> list[Element]:
		level = element.level + 1
		if level > self.depth:
			return []
		extent = self.spec.level_radius(level)
		return [
			Element(
				element.word + (i,),
				tuple(o + s for o, s in zip(element.origin, shift)),
				extent,
			)
			for i, shift in enumerate(self.level_offsets(level), 1)
		]

	def normalized_gap(self, level: int) -> Number:
		"""Минимальный зазор между детьми уровня level в долях длины родителя"""
		c = self.spec.c(level)
		offsets = self._normalized_offsets(level)
		if self.dimension == 2:
			g = grid_size(self.spec.n(level))
			return (1 - g * c) / (g - 1)
		lefts = [o[0] for o in offsets]
		return min(right - left for left, right in zip(lefts, lefts[1:])) - c

	def normalized_gap_array(self, depth: int) -> np.ndarray:
		"""Нормированные зазоры для уровней 1..depth (float)"""
		if self.placement.kind == PlacementKind.OFFSETS:
			return np.array([float(self.normalized_gap(level)) for level in range(1, depth + 1)])
		n = self.spec.branching.float_values(depth)
		c = self.spec.ratios.float_values(depth)
		if self.dimension == 2:
			n = np.floor(np.sqrt(n - 1)) + 1
		return (1 - n * c) / (n - 1)

	def min_gap(self, word: Sequence[int]) -> Number:
		"""Минимальное расстояние между различными детьми J_word"""
		word = self._check(word, self.depth - 1)
		level = len(word) + 1
		return self.normalized_gap(level) * self.spec.level_radius(len(word))

	def tail_letter(self, level: int, tail: Tail) -> int:
		if tail == Tail.ONES:
			return 1
		n = self.spec.n(level)
		return (n + 1) // 2 if n % 2 else n // 2

	def point_at(self, word: Sequence[int], tail: Tail = Tail.ONES) -> PointAddress:
		"""
		Представитель точки x_w: слово продолжается каноническим хвостом до глубины depth.
		Хвост ONES даёт левый угол, хвост MIDDLE спуск в средних детей и центр листа.
		"""
		word = self._check(word)
		extended = word + tuple(self.tail_letter(level, tail) for level in range(len(word) + 1, self.depth + 1))
		leaf = self.locate(extended)
		coordinates = leaf.origin if tail == Tail.ONES else leaf.center
		return PointAddress(extended, coordinates, self.spec.level_radius(self.depth))

	def leaves(self, depth: int | None = None, start: Element | None = None) -> Iterator[Element]:
		"""Элементы заданной глубины слева направо (обход в глубину)"""
		depth = self.depth if depth is None else min(depth, self.depth)
		stack = [start or self.root()]
		while stack:
			element = stack.pop()
			if element.level >= depth:
				yield element
				continue
			stack.extend(reversed(self.children(element)))

	def first_after(self, value: Number | None, depth: int) -> tuple[Number, bool] | None:
		"""
		inf{x ∈ U : x > value} для объединения U элементов глубины depth.
		Возвращает (инфимум, достигается ли он); None, если точек правее нет.
		При value=None возвращается min U.
		"""
		self.require_1d()
		depth = min(depth, self.depth)

		def descend(element: Element) -> tuple[Number, bool] | None:
			if value is not None and element.right <= value:
				return None
			if element.level == depth:
				if value is None or element.left > value:
					return element.left, True
				return value, False
			for child in self.children(element):
				found = descend(child)
				if found is not None:
					return found
			return None

		return descend(self.root())

	def interval_union(self, depth: int | None = None) -> 'IntervalUnion':
		self.require_1d()
		return IntervalUnion.from_intervals((e.left, e.right) for e in self.leaves(depth))

	def describe(self) -> dict:
		return {"spec": self.spec.name, "placement": self.placement.describe(), "depth": self.depth}


def realize(spec: MoranSpec, placement: Placement | None = None, depth: int = 12) -> Realization:
	return Realization(spec, placement, depth)


class IntervalUnion:
	"""Упорядоченное объединение замкнутых отрезков (вырожденные отрезки это точки)"""

	def __init__(self, intervals: list[tuple[Number, Number]]):
		self.intervals = intervals
		self.lefts = [lo for lo, _ in intervals]

	@classmethod
	def from_intervals(cls, intervals: Iterable[tuple[Number, Number]]) -> 'IntervalUnion':
		merged: list[tuple[Number, Number]] = []
		for lo, hi in sorted(intervals):
			if merged and lo <= merged[-1][1]:
				merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
			else:
				merged.append((lo, hi))
		return cls(merged)

	@classmethod
	def from_points(cls, points: Iterable[Number]) -> 'IntervalUnion':
		return cls.from_intervals((p, p) for p in points)

	def distance_to(self, x: Number) -> Number:
		index = bisect.bisect_right(self.lefts, x) - 1
		best = None
		if index >= 0:
			lo, hi = self.intervals[index]
			if x <= hi:
				return 0
			best = x - hi
		if index + 1 < len(self.intervals):
			gap = self.intervals[index + 1][0] - x
			best = gap if best is None else min(best, gap)
		return best

	def gap_midpoints(self) -> list[Number]:
		return [(left[1] + right[0]) / 2 for left, right in zip(self.intervals, self.intervals[1:])]

	def contains(self, x: Number) -> bool:
		return self.distance_to(x) == 0

	def one_sided(self, other: 'IntervalUnion') -> Number:
		"""sup_{x ∈ self} d(x, other): максимум на концах отрезков или в серединах лакун other"""
		candidates = [v for interval in self.intervals for v in interval]
		candidates += [m for m in other.gap_midpoints() if self.contains(m)]
		return max(other.distance_to(x) for x in candidates)


def as_union(item: 'Realization | IntervalUnion | Iterable[Number]', depth: int | None = None) -> tuple[IntervalUnion, Number, int]:
	"""Приводит реализацию или набор точек к объединению отрезков; возвращает (union, погрешность, размерность)"""
	if isinstance(item, Realization):
		item.require_1d()
		depth = item.depth if depth is None else depth
		return item.interval_union(depth), item.spec.level_radius(depth), item.dimension
	if isinstance(item, IntervalUnion):
		return item, 0, 1
	return IntervalUnion.from_points(item), 0, 1


def hausdorff_distance(
		first: 'Realization | IntervalUnion | Iterable[Number]',
		second: 'Realization | IntervalUnion | Iterable[Number]',
) -> tuple[Number, Number]:
	"""
	Точное расстояние Хаусдорфа между объединениями элементов (или наборами точек) в ℝ¹.
	Второе значение: поправка r_{K_A}|J_A| + r_{K_B}|J_B| до предельных множеств.
	"""
	if isinstance(first, Realization) and isinstance(second, Realization):
		if first.dimension != second.dimension:
			raise DimensionMismatch(
				f"Разные размерности: {first.dimension} и {second.dimension}"
			)
	a, slack_a, dim_a = as_union(first)
	b, slack_b, dim_b = as_union(second)
	if dim_a != dim_b:
		raise DimensionMismatch(f"Разные размерности: {dim_a} и {dim_b}")
	distance = max(a.one_sided(b), b.one_sided(a))
	return distance, slack_a + slack_b


def word_to_str(word: Sequence[int]) -> str:
	return ".".join(map(str, word)) if any(letter > 9 for letter in word) else "".join(map(str, word))

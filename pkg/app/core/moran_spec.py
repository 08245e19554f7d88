"""
Рецепт конструкции Морана: последовательности n_k, c_k, размерность и диаметр
исходного элемента J. Здесь же считающая функция Φ и индекс масштаба.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from app.config import settings
from app.core.errors import (
	BranchingTooSmall,
	InvalidScale,
	InvalidSpec,
	Overpacked,
	RatioInfimumZero,
	ScaleOrder,
	ScaleTooLarge,
	WordOutOfRange,
)
from app.core.expressions import Number
from app.core.sequences import SequenceRule
from app.utils.console import print_warning

# Относительный допуск сравнения с иррациональными узлами сетки
FLOAT_BOUNDARY_TOLERANCE = 1e-12
OVERPACK_TOLERANCE = 1e-12


def log_number(value: Number) -> float:
	"""Натуральный логарифм без переполнения для больших рациональных чисел"""
	if isinstance(value, Fraction):
		return math.log(value.numerator) - math.log(value.denominator)
	return math.log(value)


@dataclass(frozen=True)
class RawSpec:
	"""Непроверенный рецепт, как он прочитан из файла"""
	dimension: int
	diameter: Number
	branching: SequenceRule
	ratios: SequenceRule
	name: str = "spec"


@dataclass(frozen=True)
class MoranSpec:
	dimension: int
	diameter: Number
	branching: SequenceRule
	ratios: SequenceRule
	c_star: Number
	c_upper: Number
	name: str = "spec"
	touching_levels: tuple[int, ...] = ()
	_cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

	@property
	def is_exact(self) -> bool:
		return self.branching.is_exact and self.ratios.is_exact and not isinstance(self.diameter, float)

	def n(self, k: int) -> int:
		return int(self.branching.value(k))

	def c(self, k: int) -> Number:
		return self.ratios.value(k)

	def check_word(self, word: Sequence[int]) -> None:
		"""Буквы слова i_1⋯i_k должны удовлетворять 1 ≤ i_t ≤ n_t"""
		for level, letter in enumerate(word, 1):
			if not 1 <= letter <= self.n(level):
				raise WordOutOfRange(
					f"Буква {letter} вне диапазона 1..{self.n(level)}", level=level, word="".join(map(str, word))
				)

	def _extend(self, key: str, k: int, step) -> list:
		values = self._cache.setdefault(key, [])
		while len(values) <= k:
			values.append(step(len(values), values[-1] if values else None))
		return values

	def level_radius(self, k: int) -> Number:
		"""Точное r_k·|J| (r_0 = 1)"""
		if k < 0:
			raise WordOutOfRange(f"Уровень должен быть ≥ 0, получено {k}", level=k)
		radii = self._extend(
			"radius", k,
			lambda level, previous: self.diameter if level == 0 else previous * self.c(level),
		)
		return radii[k]

	def phi_level(self, k: int) -> int:
		"""Точное n_1⋯n_k"""
		if k < 0:
			raise WordOutOfRange(f"Уровень должен быть ≥ 0, получено {k}", level=k)
		products = self._extend(
			"phi", k,
			lambda level, previous: 1 if level == 0 else previous * self.n(level),
		)
		return products[k]

	def product_between(self, k: int, k_prime: int) -> int:
		"""n_{k+1}⋯n_{k'}"""
		return math.prod(self.n(level) for level in range(k + 1, k_prime + 1))

	def log_phi_array(self, depth: int) -> np.ndarray:
		"""log(n_1⋯n_k) для k = 0..depth"""
		key = ("log_phi", depth)
		if key not in self._cache:
			self._cache[key] = np.concatenate(([0.0], np.cumsum(np.log(self.branching.float_values(depth)))))
		return self._cache[key]

	def log_radius_array(self, depth: int) -> np.ndarray:
		"""log(r_k·|J|) для k = 0..depth"""
		key = ("log_radius", depth)
		if key not in self._cache:
			increments = np.log(self.ratios.float_values(depth))
			self._cache[key] = log_number(self.diameter) + np.concatenate(([0.0], np.cumsum(increments)))
		return self._cache[key]

	def covering_constant(self) -> Number:
		"""C_E = 2^d·vol(B(0,1))/vol(J) для нормированного J"""
		if self.dimension == 1:
			return 4
		return 4 * math.pi

	def _below_or_at(self, k: int, r: Number) -> bool:
		radius = self.level_radius(k)
		if isinstance(radius, float) or isinstance(r, float):
			if abs(float(radius) - float(r)) <= FLOAT_BOUNDARY_TOLERANCE * float(r) and radius != r:
				if not self._cache.get("ambiguity_warned"):
					self._cache["ambiguity_warned"] = True
					print_warning(
						f"Масштаб {float(r):.6g} неотличим от узла r_{k}|J| в пределах точности, "
						f"отнесён к уровню {k} ({self.name})"
					)
				return True
		return radius <= r

	def scale_index(self, r: Number) -> int:
		"""
		Уровень k ≥ 1 с r_k|J| ≤ r < r_{k−1}|J| (верхний интервал замкнут в |J|).
		Граница r = r_k|J| относится к уровню k.
		"""
		if r <= 0:
			raise InvalidScale(f"Масштаб должен быть положительным, получено {r}", scale=r)
		if r > self.diameter:
			raise ScaleTooLarge(f"Масштаб {r} больше диаметра |J|={self.diameter}", scale=r)

		# Кандидат по лог-массиву, затем точное уточнение на соседних уровнях
		log_r = log_number(r)
		depth = 16
		while self.log_radius_array(depth)[-1] > log_r - 1.0:
			depth *= 2
		candidate = int(np.searchsorted(-self.log_radius_array(depth), -log_r, side="left"))
		k = max(candidate, 1)

		while k > 1 and self._below_or_at(k - 1, r):
			k -= 1
		while not self._below_or_at(k, r):
			k += 1
		return k

	def phi(self, r: Number) -> int:
		"""Φ(r) = n_1⋯n_k для k = scale_index(r)"""
		return self.phi_level(self.scale_index(r))

	def phi_between(self, r: Number, r_prime: Number) -> int:
		"""Φ(r, r') = n_{k+1}⋯n_{k'}"""
		if r_prime >= r:
			raise ScaleOrder(f"Требуется r' < r, получено r={r}, r'={r_prime}", scale=r)
		return self.product_between(self.scale_index(r), self.scale_index(r_prime))

	def total_length(self, k: int) -> Number:
		"""Суммарная длина элементов уровня k: n_1⋯n_k·r_k|J|"""
		return self.phi_level(k) * self.level_radius(k)

	def describe(self) -> dict[str, Any]:
		return {
			"name": self.name,
			"dimension": self.dimension,
			"diameter": str(self.diameter),
			"branching": self.branching.describe(),
			"ratios": self.ratios.describe(),
			"c_star": str(self.c_star),
			"c_upper": str(self.c_upper),
			"touching_levels": list(self.touching_levels),
		}


def validate(raw: RawSpec, depth: int | None = None) -> MoranSpec:
	"""
	Проверяет рецепт: n_k ≥ 2, c_* > 0, n_k·c_k^d ≤ 1.
	Поуровневые условия проверяются на первых depth уровнях (по умолчанию VALIDATION_DEPTH),
	околограничные случаи на первых EXACT_CHECK_LIMIT уровнях сверяются точно.
	"""
	depth = depth or settings.VALIDATION_DEPTH

	if raw.dimension not in (1, 2):
		raise InvalidSpec(f"Размерность должна быть 1 или 2, получено {raw.dimension}", key="dimension")
	if raw.diameter <= 0:
		raise InvalidSpec(f"Диаметр должен быть положительным, получено {raw.diameter}", key="diameter")

	branching = raw.branching.float_values(depth)
	not_integral = np.flatnonzero(branching != np.round(branching))
	if not_integral.size:
		level = int(not_integral[0]) + 1
		raise InvalidSpec(f"n_{level} не целое: {raw.branching.value(level)}", level=level, key="branching")

	too_small = np.flatnonzero(branching < 2)
	if too_small.size:
		level = int(too_small[0]) + 1
		raise BranchingTooSmall(f"n_{level} = {raw.branching.value(level)} < 2", level=level)

	c_star = raw.ratios.infimum()
	ratios = raw.ratios.float_values(depth)
	non_positive = np.flatnonzero(ratios <= 0)
	if c_star <= 0 or non_positive.size:
		level = int(non_positive[0]) + 1 if non_positive.size else None
		raise RatioInfimumZero(f"c_* = inf c_k должно быть положительным, получено {c_star}", level=level)

	packing = branching * ratios ** raw.dimension
	overpacked = np.flatnonzero(packing > 1 + OVERPACK_TOLERANCE)
	if overpacked.size:
		level = int(overpacked[0]) + 1
		raise Overpacked(f"n_{level}·c_{level}^d = {packing[level - 1]:.6g} > 1", level=level)

	exact = raw.branching.is_exact and raw.ratios.is_exact
	touching = []
	for index in np.flatnonzero(np.abs(packing - 1) <= 1e-9):
		level = int(index) + 1
		if not exact or level > settings.EXACT_CHECK_LIMIT:
			if abs(packing[index] - 1) <= OVERPACK_TOLERANCE:
				touching.append(level)
			continue
		value = raw.branching.value(level) * Fraction(raw.ratios.value(level)) ** raw.dimension
		if value > 1:
			raise Overpacked(f"n_{level}·c_{level}^d = {value} > 1", level=level)
		if value == 1:
			touching.append(level)

	if touching:
		print_warning(f"Соседние элементы касаются на уровнях {touching[:5]} ({raw.name})")

	return MoranSpec(
		dimension=raw.dimension,
		diameter=raw.diameter,
		branching=raw.branching,
		ratios=raw.ratios,
		c_star=c_star,
		c_upper=raw.ratios.supremum(),
		name=raw.name,
		touching_levels=tuple(touching),
	)

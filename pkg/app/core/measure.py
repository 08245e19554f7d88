"""
Мера Морана: точная масса цилиндров и сертифицированные интервалы [lo, hi]
для меры замкнутых шаров в ℝ¹.
"""
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from app.config import settings
from app.core.errors import InvalidScale
from app.core.expressions import Number
from app.core.moran_spec import MoranSpec
from app.core.realization import PointAddress, Realization, Tail


class CylinderMeasure(NamedTuple):
	word: tuple[int, ...]
	mass: Fraction


class BallMeasure(NamedTuple):
	center: Number
	radius: Number
	lo: Fraction
	hi: Fraction
	level: int
	depth_used: int

	@property
	def width(self) -> Fraction:
		return self.hi - self.lo


class ScaleExtremes(NamedTuple):
	level: int
	radius: Number
	mu_lower: Fraction
	mu_upper: Fraction
	method: str
	certified: bool


def cylinder_measure(spec: MoranSpec, word: Sequence[int]) -> CylinderMeasure:
	"""ν(C_σ) = (n_1⋯n_k)^{-1}"""
	spec.check_word(word)
	return CylinderMeasure(tuple(word), Fraction(1, spec.phi_level(len(word))))


def refinement_depth(real: Realization, r: Number, refinement: int | None = None) -> int:
	"""K' = scale_index(r) + REFINEMENT_MARGIN, не глубже самой реализации"""
	if refinement is None:
		refinement = real.spec.scale_index(r) + settings.REFINEMENT_MARGIN
	return max(1, min(refinement, real.depth))


def ball_measure(
		real: Realization,
		x: PointAddress | Number,
		r: Number,
		refinement: int | None = None,
) -> BallMeasure:
	"""
	Интервал [lo, hi] для μ(B(x, r)) по дереву глубины K'.
	lo: массы максимальных цилиндров внутри шара; hi: плюс массы цилиндров глубины K',
	пересекающих границу шара. Касание в одной точке массы не несёт.
	"""
	real.require_1d()
	if r <= 0:
		raise InvalidScale(f"Радиус должен быть положительным, получено {r}", scale=r)
	level = real.spec.scale_index(r)
	depth = refinement_depth(real, r, refinement)
	center = x.x if isinstance(x, PointAddress) else x
	low, high = center - r, center + r

	lo = Fraction(0)
	boundary = Fraction(0)
	stack = [real.root()]
	while stack:
		element = stack.pop()
		left, right = element.left, element.right
		if right < low or left > high or right == low or left == high:
			continue
		mass = Fraction(1, real.spec.phi_level(element.level))
		if left >= low and right <= high:
			lo += mass
		elif element.level >= depth:
			boundary += mass
		else:
			stack.extend(real.children(element))

	return BallMeasure(center, r, lo, lo + boundary, level, depth)


def canonical_points(real: Realization, level: int) -> list[PointAddress]:
	"""Левые точки и точки спуска в середину для каждого слова длины level"""
	points = []
	for element in real.leaves(level):
		points.append(real.point_at(element.word, Tail.ONES))
		points.append(real.point_at(element.word, Tail.MIDDLE))
	return points


def random_point(real: Realization, rng: np.random.Generator) -> PointAddress:
	word = tuple(int(rng.integers(1, real.spec.n(level) + 1)) for level in range(1, real.depth + 1))
	return real.point_at(word, Tail.ONES)


def scale_extremes(
		real: Realization,
		level: int,
		mode: str = "exhaustive",
		samples: int | None = None,
		seed: int | None = None,
		radius: Number | None = None,
		refinement: int | None = None,
) -> ScaleExtremes:
	"""
	Оценки μ̲(r) = inf μ(B(x, r)) и μ̄(r) = sup μ(B(x, r)) при r = r_k|J|.
	Полный режим обходит канонические точки всех слов длины k и даёт внешние границы,
	выборочный режим не сертифицирован.
	"""
	real.require_1d()
	radius = real.spec.level_radius(level) if radius is None else radius
	if mode == "exhaustive":
		points = canonical_points(real, level)
	else:
		rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
		points = [random_point(real, rng) for _ in range(samples or settings.DEFAULT_PROBES)]

	measures = [ball_measure(real, point, radius, refinement) for point in points]
	return ScaleExtremes(
		level=level,
		radius=radius,
		mu_lower=min(m.lo for m in measures),
		mu_upper=max(m.hi for m in measures),
		method=mode,
		certified=mode == "exhaustive",
	)


def random_probes(
		real: Realization,
		count: int,
		seed: int | None = None,
		margin: int | None = None,
) -> list[BallMeasure]:
	"""
	Случайные пробы (x, r): x из E с точностью r_K|J|, уровень r равномерно в 1..K − margin,
	r равномерно внутри интервала уровня.
	"""
	real.require_1d()
	rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
	margin = settings.REFINEMENT_MARGIN if margin is None else margin
	top = max(1, real.depth - margin)

	probes = []
	for _ in range(count):
		point = random_point(real, rng)
		level = int(rng.integers(1, top + 1))
		lower, upper = real.spec.level_radius(level), real.spec.level_radius(level - 1)
		r = lower + (upper - lower) * Fraction(int(rng.integers(2 ** 20)), 2 ** 20)
		probes.append(ball_measure(real, point, r))
	return probes


def ball_measure_bounds(spec: MoranSpec, level: int) -> tuple[Fraction, Fraction]:
	"""Границы (n_1⋯n_k)^{-1} и C_E·(n_1⋯n_{k−1})^{-1} для шара уровня k"""
	return Fraction(1, spec.phi_level(level)), Fraction(spec.covering_constant()) / spec.phi_level(level - 1)

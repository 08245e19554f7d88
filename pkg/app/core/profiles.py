"""
Профили масштаба: α-профиль, профиль покрытий f(r) = log N(A,r)/(−log r),
оценки размерностей, псевдорасстояние χ и сравнение профилей с точностью O(1/|log r|).
Точные счётчики покрытий и упаковок на прямой с переборными оракулами.
"""
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy import stats

from app.config import settings
from app.core.errors import ScaleBelowResolution
from app.core.expressions import Number
from app.core.moran_spec import MoranSpec, log_number
from app.core.realization import IntervalUnion, Realization
from app.models import BoxDimension, ChiEstimate, CountResult, DecadeSup, DimensionEstimate, ProfileComparison


class ProfileKind(str, Enum):
	ALPHA = "alpha"
	COVERING_F = "covering_f"
	LOG_COUNT = "log_count"


@dataclass(frozen=True, eq=False)
class Profile:
	"""
	Профиль на убывающей сетке log r.
	Ступенчатый профиль постоянен на [r_k, r_{k−1}) и принимает значение узла r_k;
	выборочный определён только в своих точках.
	"""
	kind: ProfileKind
	log_scales: np.ndarray
	values: np.ndarray
	step: bool = True
	label: str = ""

	def at(self, log_r: np.ndarray | float, slack: float = 0.0) -> np.ndarray:
		"""Значение ступенчатого профиля в точках log r (первый узел с log r_k ≤ log r)"""
		index = np.searchsorted(-self.log_scales, -(np.asarray(log_r) + slack), side="left")
		return self.values[np.clip(index, 0, len(self.values) - 1)]

	def rows(self) -> list[dict]:
		return [
			{"k": i + 1 if self.step else None, "log_r": float(lr), "r": math.exp(lr), self.kind.value: float(v)}
			for i, (lr, v) in enumerate(zip(self.log_scales, self.values))
		]


def alpha_values(spec: MoranSpec, depth: int) -> np.ndarray:
	"""α_k = log(n_1⋯n_k)/(−log(c_1⋯c_k)) для k = 1..depth"""
	log_phi = spec.log_phi_array(depth)[1:]
	log_radius = spec.log_radius_array(depth)
	return log_phi / -(log_radius[1:] - log_radius[0])


def alpha_profile(spec: MoranSpec, depth: int) -> Profile:
	return Profile(
		kind=ProfileKind.ALPHA,
		log_scales=spec.log_radius_array(depth)[1:],
		values=alpha_values(spec, depth),
		label=spec.name,
	)


def exact_dimension(spec: MoranSpec) -> float | None:
	"""Предел α_k, если правила допускают замкнутую форму средних"""
	mean_log_n = spec.branching.asymptotic_mean(math.log)
	mean_neglog_c = spec.ratios.asymptotic_mean(lambda c: -math.log(c))
	if mean_log_n is None or not mean_neglog_c:
		return None
	return mean_log_n / mean_neglog_c


def dims(spec: MoranSpec, depth: int, window_fraction: float | None = None) -> DimensionEstimate:
	"""dim_H и dim_P как min и max α-профиля по окну [⌈wf·K⌉, K]"""
	window_fraction = settings.WINDOW_FRACTION if window_fraction is None else window_fraction
	values = alpha_values(spec, depth)
	k_lo = min(max(1, math.ceil(window_fraction * depth)), depth)
	window = values[k_lo - 1:]
	return DimensionEstimate(
		spec=spec.name,
		dim_h_window=float(window.min()),
		dim_p_window=float(window.max()),
		window=(k_lo, depth),
		exact_limit=exact_dimension(spec),
	)


# Счёт покрытий и упаковок на прямой

def count_depth(real: Realization, r: Number) -> int:
	"""Глубина объединения, на которой считаются N и P для масштаба r"""
	resolution = real.spec.level_radius(real.depth)
	if r <= resolution:
		raise ScaleBelowResolution(
			f"Масштаб {float(r):.6g} не больше разрешения r_K|J| = {float(resolution):.6g}", scale=float(r)
		)
	level = real.spec.scale_index(min(r, real.spec.diameter))
	return min(real.depth, level + settings.COUNT_REFINEMENT_MARGIN)


def greedy_sweep(
		real: Realization,
		r: Number,
		depth: int | None = None,
		start: Number | None = None,
		stop: Number | None = None,
		limit: int | None = None,
) -> list[Number]:
	"""
	Жадный проход слева направо: каждая следующая точка это inf{x ∈ U : x > prev + 2r}.
	Число точек равно и жадному покрытию шарами радиуса r, и жадной упаковке с зазором > 2r.
	Окно [start, stop] и limit ограничивают проход внутри следа родительского шара.
	"""
	real.require_1d()
	depth = count_depth(real, r) if depth is None else depth
	points = []
	threshold = start
	while (found := real.first_after(threshold, depth)) is not None:
		point, _ = found
		if stop is not None and point > stop:
			break
		points.append(point)
		if limit is not None and len(points) >= limit:
			break
		threshold = point + 2 * r
	return points


def counting_chain(real: Realization, r: Number) -> tuple[int, int, int]:
	"""N(A, 2r), P(A, r), N(A, r/2) на общей глубине объединения"""
	depth = count_depth(real, r / 2)
	covering_wide, packing, covering_narrow = (len(greedy_sweep(real, s, depth)) for s in (2 * r, r, r / 2))
	return covering_wide, packing, covering_narrow


def union_first_after(union: IntervalUnion, value: Number | None) -> tuple[Number, bool] | None:
	if value is None:
		return union.intervals[0][0], True
	for lo, hi in union.intervals:
		if hi <= value:
			continue
		return (lo, True) if lo > value else (value, False)
	return None


def covering_oracle(union: IntervalUnion, r: Number) -> int:
	"""Минимум шаров радиуса r: перебор правых краёв, выровненных по концам отрезков"""
	rights = sorted({hi for _, hi in union.intervals})

	@lru_cache(maxsize=None)
	def solve(threshold: Number | None) -> int:
		found = union_first_after(union, threshold)
		if found is None:
			return 0
		point, _ = found
		options = {point + 2 * r}
		options.update(b for b in rights if point <= b <= point + 2 * r and (threshold is None or b > threshold))
		return 1 + min(solve(option) for option in options)

	return solve(None)


def packing_oracle(union: IntervalUnion, r: Number) -> int:
	"""
	Максимум точек объединения с попарными расстояниями > 2r.
	Перебор всех упаковок, прижатых влево: очередная точка это либо левый конец
	отрезка правее порога, либо сам порог плюс бесконечно малое.
	"""
	lefts = [lo for lo, _ in union.intervals]

	def has_room(value: Number) -> bool:
		return any(lo <= value < hi for lo, hi in union.intervals)

	@lru_cache(maxsize=None)
	def solve(value: Number) -> int:
		threshold = value + 2 * r
		options = [a for a in lefts if a > threshold]
		if has_room(threshold):
			options.append(threshold)
		return 1 + max((solve(option) for option in options), default=0)

	return max(solve(a) for a in lefts)


def count(real: Realization, r: Number, oracle: bool = False) -> CountResult:
	depth = count_depth(real, r)
	greedy = len(greedy_sweep(real, r, depth))
	if not oracle:
		return CountResult(scale=float(r), covering=greedy, packing=greedy, depth=depth)

	union = real.interval_union(depth)
	covering, packing = covering_oracle(union, r), packing_oracle(union, r)
	return CountResult(
		scale=float(r),
		covering=covering,
		packing=packing,
		depth=depth,
		method="oracle_bruteforce",
		agrees=covering == greedy and packing == greedy,
	)


def covering_profile(
		real: Realization,
		scales: Iterable[Number],
		oracle: bool = False,
) -> tuple[Profile, list[CountResult]]:
	"""f_A(r) = log N(A, r)/(−log r) в заданных масштабах"""
	scales = sorted(scales, reverse=True)
	results = [count(real, r, oracle=oracle) for r in scales]
	log_scales = np.array([log_number(r) for r in scales])
	counts = np.array([result.covering for result in results], dtype=float)
	with np.errstate(divide="ignore", invalid="ignore"):
		values = np.log(counts) / -log_scales
	profile = Profile(ProfileKind.COVERING_F, log_scales, values, step=False, label=real.spec.name)
	return profile, results


def box_dimension(real: Realization, scales: Iterable[Number]) -> BoxDimension:
	"""Наклон log N(A, r) против −log r"""
	scales = list(scales)
	log_counts = [math.log(len(greedy_sweep(real, r))) for r in scales]
	fit = stats.linregress([-log_number(r) for r in scales], log_counts)
	return BoxDimension(slope=fit.slope, intercept=fit.intercept, rvalue=fit.rvalue, scales=len(scales))


def aligned_scales(spec: MoranSpec, levels: Iterable[int]) -> list[Number]:
	"""Масштабы r_k|J|/2: шар радиуса r_k|J|/2 покрывает ровно один элемент уровня k"""
	return [spec.level_radius(k) / 2 for k in levels]


# χ и сравнение профилей

def merged_grid(first: Profile, second: Profile, slack: float) -> np.ndarray:
	"""Объединение узлов двух сеток до общей наименьшей глубины, близкие узлы склеены"""
	floor = max(first.log_scales[-1], second.log_scales[-1])
	grid = np.concatenate([first.log_scales, second.log_scales])
	grid = np.sort(grid[grid >= floor - slack])[::-1]
	keep = np.concatenate(([True], np.abs(np.diff(grid)) > slack))
	return grid[keep]


def decade_sups(log_scales: np.ndarray, values: np.ndarray) -> list[DecadeSup]:
	"""Супремумы по декадам |ln r|"""
	magnitude = np.abs(log_scales)
	decades = np.floor(np.log10(np.maximum(magnitude, 1e-300))).astype(int)
	return [
		DecadeSup(decade=int(d), sup=float(values[decades == d].max()), points=int((decades == d).sum()))
		for d in sorted(set(decades.tolist()))
	]


def chi(
		spec_a: MoranSpec,
		spec_b: MoranSpec,
		depth: int,
		tail_fraction: float = 0.5,
		log_window: tuple[float, float] | None = None,
		depth_b: int | None = None,
) -> ChiEstimate:
	"""
	χ(A, B) = limsup |log(α_A(r)/α_B(r))|, оценка супремумом по хвосту объединённой сетки.
	Хвост: log r ≤ tail_fraction·log r_min, либо явное окно по |ln r|.
	depth_b: своя глубина для B (например, когда A конечна).
	"""
	slack = settings.CHI_GRID_SLACK
	alpha_a, alpha_b = alpha_profile(spec_a, depth), alpha_profile(spec_b, depth_b or depth)
	grid = merged_grid(alpha_a, alpha_b, slack)
	deviation = np.abs(np.log(alpha_a.at(grid, slack) / alpha_b.at(grid, slack)))

	if log_window is not None:
		lo, hi = log_window
		mask = (np.abs(grid) >= lo) & (np.abs(grid) <= hi)
	else:
		mask = grid <= tail_fraction * grid[-1]
	if not mask.any():
		mask = np.zeros_like(grid, dtype=bool)
		mask[-1] = True

	window = (float(np.abs(grid[mask]).min()), float(np.abs(grid[mask]).max()))
	return ChiEstimate(
		estimate=float(deviation[mask].max()),
		window=window,
		trace=decade_sups(grid, deviation),
	)


def _comparison_points(p: Profile, q: Profile) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	slack = settings.CHI_GRID_SLACK
	if p.step and q.step:
		grid = merged_grid(p, q, slack)
		return grid, p.at(grid, slack), q.at(grid, slack)
	if not p.step and q.step:
		return p.log_scales, p.values, q.at(p.log_scales, slack)
	if p.step and not q.step:
		return q.log_scales, p.at(q.log_scales, slack), q.values

	common, p_index, q_index = np.intersect1d(p.log_scales, q.log_scales, return_indices=True)
	return common, p.values[p_index], q.values[q_index]


def compare_profiles(
		p: Profile,
		q: Profile,
		tolerance: float | None = None,
		growth_factor: float | None = None,
) -> ProfileComparison:
	"""
	Вычислимая форма эквивалентности g ∼ h: D(r) = |p − q|·|log r| ограничено.
	Супремумы D берутся по диадическим бинам |ln r|. Первый бин (крупные масштабы)
	отбрасывается; профили эквивалентны, если максимум по поздней половине бинов
	превосходит максимум по ранней не более чем в growth_factor раз.
	"""
	tolerance = settings.EQUAL_TOLERANCE if tolerance is None else tolerance
	growth_factor = settings.PROFILE_GROWTH_FACTOR if growth_factor is None else growth_factor

	grid, p_values, q_values = _comparison_points(p, q)
	finite = np.isfinite(p_values) & np.isfinite(q_values) & (grid < 0)
	grid, deviation = grid[finite], np.abs(p_values[finite] - q_values[finite]) * np.abs(grid[finite])

	bins = np.floor(np.log2(np.abs(grid))).astype(int)
	bin_ids = sorted(set(bins.tolist()))
	bin_sups = [(b, float(deviation[bins == b].max())) for b in bin_ids]
	tail_sups = [(b, float(deviation[bins >= b].max())) for b in bin_ids]

	bound = float(deviation.max()) if deviation.size else 0.0
	tail = [s for _, s in bin_sups[1:]]
	if bound <= tolerance or len(tail) < 2:
		# Двух бинов после первого мало для оценки роста
		return ProfileComparison(
			bounded=bound <= tolerance, bound=bound, growth=1.0, bin_sups=bin_sups, tail_sups=tail_sups
		)

	middle = len(tail) // 2
	growth = max(tail[middle:]) / max(max(tail[:middle]), tolerance)
	return ProfileComparison(
		bounded=growth <= growth_factor,
		bound=bound,
		growth=growth,
		bin_sups=bin_sups,
		tail_sups=tail_sups,
	)


def constant_profile(template: Profile, value: float, label: str = "") -> Profile:
	"""Постоянный ступенчатый профиль на сетке шаблона"""
	return Profile(template.kind, template.log_scales, np.full(len(template.values), value), label=label)

"""
Критерии на конечной глубине: однородность, равномерная несвязность (достаточное
условие и прямая проверка по зазорам), условие вложения, критерий квазилипшицевой
эквивалентности и сертификат невложимости.

Каждый вердикт трёхзначный и несёт окно усечения.
"""
import math
from typing import Iterable

import numpy as np
from scipy import stats

from app.config import settings
from app.core.errors import PreconditionViolated
from app.core.measure import ball_measure, random_point
from app.core.moran_spec import MoranSpec
from app.core.profiles import Profile, ProfileKind, alpha_profile, decade_sups, merged_grid
from app.core.realization import Placement, PlacementKind, Realization, Tail, realize
from app.core.sequences import BlockRule
from app.models import CriterionKind, CriterionVerdict, HomogeneityReport, Verdict


def _window_start(depth: int, window_fraction: float | None) -> int:
	window_fraction = settings.WINDOW_FRACTION if window_fraction is None else window_fraction
	return min(max(1, math.ceil(window_fraction * depth)), depth)


def _record_rows(levels: np.ndarray, values: np.ndarray, highs: bool = True) -> list[dict]:
	"""Строки трассы только для новых рекордов (максимумов или минимумов)"""
	rows = []
	best = None
	for level, value in zip(levels, values):
		if best is None or (value > best if highs else value < best):
			best = value
			rows.append({"level": int(level), "value": float(value)})
	return rows


# Однородность

def _ratio(numerator, denominator) -> float:
	return math.inf if denominator == 0 else float(numerator / denominator)


def _kappa_levels(real: Realization, kappa: float) -> int:
	"""Самый глубокий уровень j, для которого шар радиуса κ·r_j|J| ещё разрешён деревом"""
	spec = real.spec
	top = 0
	for level in range(1, real.depth + 1):
		if spec.scale_index(kappa * spec.level_radius(level)) + settings.REFINEMENT_MARGIN > real.depth:
			break
		top = level
	return top


def check_homogeneity(
		real: Realization,
		probes: int | None = None,
		kappa: float | None = None,
		seed: int | None = None,
		aligned: bool = False,
) -> HomogeneityReport:
	"""
	Оценки λ, δ, Δ по сертифицированным интервалам меры шаров.
	Для супремумов берётся hi/lo, для инфимумов lo/hi.
	В режиме aligned масштабы r = r_j|J| и левые точки слов длины j.
	"""
	real.require_1d()
	spec = real.spec
	probes = probes or settings.DEFAULT_PROBES
	kappa = float(spec.c_star) ** 5 if kappa is None else kappa
	if not 0 < kappa < 1:
		raise PreconditionViolated(f"κ должно лежать в (0, 1), получено {kappa}")

	top = _kappa_levels(real, kappa)
	if top < 1:
		raise PreconditionViolated("Глубина реализации недостаточна для выбранного κ", depth=real.depth)

	rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
	lambda_est = 1.0
	delta, Delta = math.inf, 0.0
	observed = 0.0

	def probe(point, r) -> None:
		nonlocal delta, Delta, observed
		outer = ball_measure(real, point, r)
		inner = ball_measure(real, point, kappa * r)
		delta = min(delta, _ratio(outer.lo, inner.hi))
		Delta = max(Delta, _ratio(outer.hi, inner.lo))
		observed = max(observed, float(outer.hi * spec.phi_level(outer.level - 1)))

	count = 0
	if aligned:
		for level in range(1, top + 1):
			r = spec.level_radius(level)
			words = [e.word for e in real.leaves(level)]
			if len(words) > probes:
				picks = rng.choice(len(words), size=probes, replace=False)
				words = [words[i] for i in sorted(picks)]
			points = [real.point_at(word, Tail.ONES) for word in words]
			measures = [ball_measure(real, point, r) for point in points]
			lambda_est = max(lambda_est, _ratio(max(m.hi for m in measures), min(m.lo for m in measures)))
			for point in points:
				probe(point, r)
				count += 1
	else:
		for _ in range(probes):
			level = int(rng.integers(1, top + 1))
			lower, upper = spec.level_radius(level), spec.level_radius(level - 1)
			r = lower + (upper - lower) * float(rng.random())
			first, second = random_point(real, rng), random_point(real, rng)
			a, b = ball_measure(real, first, r), ball_measure(real, second, r)
			lambda_est = max(lambda_est, _ratio(a.hi, b.lo), _ratio(b.hi, a.lo))
			probe(first, r)
			count += 1

	return HomogeneityReport(
		lambda_est=lambda_est,
		kappa=kappa,
		delta_est=delta,
		Delta_est=Delta,
		probes=count,
		depth=real.depth,
		aligned=aligned,
		consistent=delta > 1 + settings.STRICT_SLACK,
		covering_constant=float(spec.covering_constant()),
		observed_ratio=observed,
	)


# Равномерная несвязность

def window_ratios(spec: MoranSpec, depth: int, k0: int) -> np.ndarray:
	"""log(n_{k+1}⋯n_{k+k0}) / (−log(c_{k+1}⋯c_{k+k0})) для k = 0..depth − k0"""
	log_phi = spec.log_phi_array(depth)
	log_radius = spec.log_radius_array(depth)
	return (log_phi[k0:] - log_phi[:-k0]) / -(log_radius[k0:] - log_radius[:-k0])


def window_ratio(spec: MoranSpec, k: int, k0: int) -> float:
	return float(window_ratios(spec, k + k0, k0)[k])


def ud_sufficient(
		spec: MoranSpec,
		k0: int = 1,
		depth: int | None = None,
		slack: float | None = None,
		window_fraction: float | None = None,
) -> CriterionVerdict:
	"""limsup блочного отношения окна длины k0 меньше 1"""
	if k0 < 1:
		raise PreconditionViolated(f"Длина окна k0 должна быть ≥ 1, получено {k0}")
	depth = depth or settings.DEFAULT_DEPTH
	slack = settings.STRICT_SLACK if slack is None else slack
	depth = max(depth, k0 + 1)

	ratios = window_ratios(spec, depth, k0)
	k_lo = min(_window_start(depth, window_fraction), depth - k0)
	levels = np.arange(k_lo, depth - k0 + 1)
	window = ratios[k_lo:depth - k0 + 1]
	sup = float(window.max())

	if sup < 1 - slack:
		verdict = Verdict.HOLDS
	elif sup > 1 - settings.TRACE_SLACK:
		verdict = Verdict.FAILS
	else:
		verdict = Verdict.INCONCLUSIVE

	return CriterionVerdict(
		kind=CriterionKind.UD_SUFFICIENT,
		value=sup,
		threshold=1 - slack,
		window=(int(k_lo), depth),
		verdict=verdict,
		details={"k0": k0, "spec": spec.name},
		trace=_record_rows(levels, window),
	)


def ud_direct(real: Realization, depth: int | None = None) -> CriterionVerdict:
	"""
	Прямая проверка по относительным зазорам s_k = min_gap / длина родителя.
	Провал: не менее UD_RECORD_LOWS убывающих рекордных минимумов ниже UD_GAP_EPSILON;
	нулевой зазор проваливает сразу.
	"""
	real.require_1d()
	depth = min(depth or real.depth, real.depth)
	gaps = real.normalized_gap_array(depth)
	levels = np.arange(1, depth + 1)

	lows = _record_rows(levels, gaps, highs=False)
	# Точные значения на уровнях рекордов
	for row in lows:
		row["value"] = float(real.normalized_gap(row["level"]))
	s_inf = min(row["value"] for row in lows)
	# В тренд идут только рекорды ниже порога
	small_lows = [row for row in lows if row["value"] < settings.UD_GAP_EPSILON]
	details = {"spec": real.spec.name, "record_lows": len(lows), "small_record_lows": len(small_lows)}

	if s_inf <= 0:
		verdict = Verdict.FAILS
		details["touching_level"] = next(row["level"] for row in lows if row["value"] <= 0)
	elif s_inf >= settings.UD_GAP_EPSILON:
		verdict = Verdict.HOLDS
		details["C"] = 1 / s_inf
		details["r_star"] = s_inf * float(real.spec.diameter)
	elif len(small_lows) >= settings.UD_RECORD_LOWS:
		verdict = Verdict.FAILS
	else:
		verdict = Verdict.INCONCLUSIVE

	return CriterionVerdict(
		kind=CriterionKind.UD_DIRECT,
		value=s_inf,
		threshold=settings.UD_GAP_EPSILON,
		window=(1, depth),
		verdict=verdict,
		details=details,
		trace=lows,
	)


# Вложение и эквивалентность

def _log_phi_on_grid(spec: MoranSpec, depth: int, grid: np.ndarray) -> np.ndarray:
	"""log Φ(r) в узлах объединённой сетки"""
	profile = Profile(
		kind=ProfileKind.LOG_COUNT,
		log_scales=spec.log_radius_array(depth)[1:],
		values=spec.log_phi_array(depth)[1:],
		label=spec.name,
	)
	return profile.at(grid, settings.CHI_GRID_SLACK)


def _common_grid(spec_a: MoranSpec, spec_b: MoranSpec, depth: int) -> np.ndarray:
	return merged_grid(alpha_profile(spec_a, depth), alpha_profile(spec_b, depth), settings.CHI_GRID_SLACK)


def default_r0_grid(spec_a: MoranSpec, spec_b: MoranSpec) -> list[float]:
	base = float(min(spec_a.c_star, spec_b.c_star))
	return [base ** j for j in range(1, 7)]


def embed_condition(
		spec_a: MoranSpec,
		spec_b: MoranSpec,
		r0_grid: Iterable[float] | None = None,
		depth: int | None = None,
		slack: float | None = None,
) -> CriterionVerdict:
	"""
	sup log Φ_A(r, r') / log Φ_B(r, r') по парам узлов с r' < r_0·r < r < r_0.
	Выполнено, если хотя бы одно r_0 даёт sup < 1 − slack.
	"""
	depth = depth or settings.DEFAULT_DEPTH
	slack = settings.STRICT_SLACK if slack is None else slack
	r0_grid = list(r0_grid or default_r0_grid(spec_a, spec_b))

	grid = _common_grid(spec_a, spec_b, depth)
	phi_a = _log_phi_on_grid(spec_a, depth, grid)
	phi_b = _log_phi_on_grid(spec_b, depth, grid)

	numerator = phi_a[None, :] - phi_a[:, None]
	denominator = phi_b[None, :] - phi_b[:, None]
	later = np.triu(np.ones((len(grid), len(grid)), dtype=bool), k=1)
	with np.errstate(divide="ignore", invalid="ignore"):
		ratio = np.where(denominator > 0, numerator / denominator, np.where(numerator > 0, np.inf, np.nan))

	sups = []
	for r0 in r0_grid:
		log_r0 = math.log(r0)
		mask = later & (grid[:, None] < log_r0) & (grid[None, :] < log_r0 + grid[:, None])
		values = ratio[mask]
		values = values[~np.isnan(values)]
		sups.append({"r0": r0, "sup": float(values.max()) if values.size else None, "pairs": int(values.size)})

	measured = [row["sup"] for row in sups if row["sup"] is not None]
	best = min(measured) if measured else None
	if best is not None and best < 1 - slack:
		verdict = Verdict.HOLDS
	elif measured and len(measured) == len(sups) and best >= 1:
		verdict = Verdict.FAILS
	else:
		verdict = Verdict.INCONCLUSIVE

	return CriterionVerdict(
		kind=CriterionKind.EMBEDDABLE,
		value=best,
		threshold=1 - slack,
		window=(1, depth),
		verdict=verdict,
		details={"source": spec_a.name, "target": spec_b.name, "r0": sups},
	)


def ql_equivalent(
		spec_a: MoranSpec,
		spec_b: MoranSpec,
		depth: int | None = None,
		slack: float | None = None,
) -> CriterionVerdict:
	"""
	Трасса log Φ_A(r)/log Φ_B(r) → 1: супремумы |трасса − 1| по декадам |ln r|.
	Выполнено, если последняя декада < slack и супремумы не возрастают.
	"""
	depth = depth or settings.DEFAULT_DEPTH
	slack = settings.TRACE_SLACK if slack is None else slack

	grid = _common_grid(spec_a, spec_b, depth)
	deviation = np.abs(_log_phi_on_grid(spec_a, depth, grid) / _log_phi_on_grid(spec_b, depth, grid) - 1)

	bins = decade_sups(grid, deviation)
	sups = [row.sup for row in bins]
	last = sups[-1]
	non_increasing = all(b <= a + settings.EQUAL_TOLERANCE for a, b in zip(sups, sups[1:]))
	flat_or_rising = len(sups) < 2 or last >= (1 - settings.STRICT_SLACK) * sups[-2]

	if last < slack and non_increasing:
		verdict = Verdict.HOLDS
	elif last >= slack and flat_or_rising:
		verdict = Verdict.FAILS
	else:
		verdict = Verdict.INCONCLUSIVE

	ud_a = ud_sufficient(spec_a, depth=depth)
	ud_b = ud_sufficient(spec_b, depth=depth)
	return CriterionVerdict(
		kind=CriterionKind.QL_EQUIVALENT,
		value=last,
		threshold=slack,
		window=(1, depth),
		verdict=verdict,
		details={
			"source": spec_a.name,
			"target": spec_b.name,
			"ud_sufficient": {spec_a.name: ud_a.verdict.value, spec_b.name: ud_b.verdict.value},
		},
		trace=[row.model_dump() for row in bins],
	)


# Сертификат невложимости

def block_exponents(spec: MoranSpec) -> tuple[float, float]:
	"""Показатели log n_k / (−log c_k) на первом блочном и на внеблочном уровне"""
	rule = spec.branching
	block_level = rule.k_m(1) + 1
	off_level = next(k for k in range(1, rule.t_m(1) + 2) if rule.block_of(k) is None)
	exponent = lambda k: math.log(spec.n(k)) / -math.log(float(spec.c(k)))
	return exponent(block_level), exponent(off_level)


def non_embeddability_certificate(
		s: float,
		spec_b: MoranSpec,
		blocks: int = 4,
) -> CriterionVerdict:
	"""
	Сравнение ν-отношения на блочной паре масштабов с отношением (r/r')^s для
	s-регулярного множества. Положительный наклон y_m = s·log(r_{k_m}/r_{t_m}) − log νratio
	по m даёт сертификат: неравенство регулярности нарушается для любой константы.
	"""
	if not isinstance(spec_b.branching, BlockRule):
		raise PreconditionViolated("Ветвление должно задаваться блочным правилом")
	if spec_b.dimension != 1:
		raise PreconditionViolated("Требуется реализация в ℝ¹")

	rule = spec_b.branching
	lower, upper = sorted(block_exponents(spec_b))
	if not lower <= s <= upper:
		raise PreconditionViolated(f"s = {s} вне интервала [{lower:.6f}, {upper:.6f}]", s=s)

	depth = rule.t_m(blocks) + settings.REFINEMENT_MARGIN + 1
	if any(spec_b.n(k) % 2 == 0 for k in range(1, depth + 1)):
		raise PreconditionViolated("Середины требуют нечётного n_k на всех уровнях")

	real = realize(spec_b, Placement(PlacementKind.UNIFORM), depth)
	center = real.point_at((), Tail.MIDDLE)

	rows = []
	for m in range(1, blocks + 1):
		start, end = rule.k_m(m), rule.t_m(m)
		outer = ball_measure(real, center, spec_b.level_radius(start) / 2)
		inner = ball_measure(real, center, spec_b.level_radius(end) / 2)
		nu_ratio = outer.lo / inner.hi
		scale_ratio = spec_b.level_radius(start) / spec_b.level_radius(end)
		rows.append({
			"m": m,
			"k_m": start,
			"t_m": end,
			"nu_ratio": str(nu_ratio),
			"exact": outer.width == 0 and inner.width == 0,
			"regular_ratio": float(scale_ratio) ** s,
			"y": s * math.log(scale_ratio) - math.log(nu_ratio),
		})

	slope = float(stats.linregress([row["m"] for row in rows], [row["y"] for row in rows]).slope)
	verdict = Verdict.HOLDS if slope > settings.STRICT_SLACK else Verdict.INCONCLUSIVE
	return CriterionVerdict(
		kind=CriterionKind.NOT_EMBEDDABLE,
		value=slope,
		threshold=settings.STRICT_SLACK,
		window=(1, rule.t_m(blocks)),
		verdict=verdict,
		details={"s": s, "interval": [lower, upper], "target": spec_b.name, "depth": depth},
		trace=rows,
	)

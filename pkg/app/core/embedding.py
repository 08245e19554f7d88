"""
Построение отображений: разбиение равномерно несвязного множества, разбиение
пространства последовательностей Σ на цилиндры, упаковочное подмножество и
модель Морана E(η), билипшицево вложение шарами и квазилипшицева биекция
через Σ. Искажение отображений измеряется по парам адресов.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping

import numpy as np

from app.config import settings
from app.core.criteria import ud_direct
from app.core.errors import (
	CapacityExhausted,
	DepthExhausted,
	EtaTooLarge,
	InvalidCount,
	NotUniformlyDisconnectedAtScale,
	PreconditionViolated,
	ScaleBelowResolution,
)
from app.core.expressions import Number
from app.core.measure import scale_extremes
from app.core.moran_spec import MoranSpec, RawSpec, validate
from app.core.profiles import count_depth, greedy_sweep
from app.core.realization import Element, Placement, Realization, Tail, hausdorff_distance, realize, word_to_str
from app.core.sequences import ConstantRule, FiniteRule
from app.models import DistortionStats, Verdict
from app.utils.console import print_warning

Path = tuple[int, ...]
CountTree = Mapping[Path, int]


class Schedule(str, Enum):
	LINEAR = "linear"
	QUADRATIC = "quadratic"

	def radius(self, eta: Number, k: int) -> Number:
		"""r_k = η^k или η^{k²}"""
		return eta ** (k if self == Schedule.LINEAR else k * k)


class Construction(str, Enum):
	BALLS = "balls"
	IDENTITY = "identity"
	SIGMA = "sigma"


def _exact(eta: Number) -> Number:
	return eta if isinstance(eta, float) else Fraction(eta)


def _check_leaves(spec: MoranSpec, depth: int) -> None:
	if spec.phi_level(depth) > settings.MAX_LEAVES:
		raise DepthExhausted(
			f"{spec.phi_level(depth)} листьев глубины {depth} больше MAX_LEAVES={settings.MAX_LEAVES}",
			level=depth,
		)


# Разбиение равномерно несвязного множества

@dataclass(eq=False)
class UDPart:
	"""Часть A_{i_1⋯i_k}: непрерывный диапазон листьев [start, stop) и центр в левой точке"""
	path: Path
	start: int
	stop: int
	center: Number
	children: list['UDPart'] = field(default_factory=list)

	@property
	def level(self) -> int:
		return len(self.path)

	@property
	def count(self) -> int:
		return len(self.children)


@dataclass(eq=False)
class UDDecomposition:
	realization: Realization
	eta: Number
	schedule: Schedule
	constant: Number
	depth: int
	levels: int
	leaves: list[Element]
	root: UDPart

	def radius(self, k: int) -> Number:
		return self.schedule.radius(self.eta, k)

	def parts(self, level: int) -> list[UDPart]:
		current = [self.root]
		for _ in range(level):
			current = [child for part in current for child in part.children]
		return current

	def leaf_parts(self) -> list[UDPart]:
		return self.parts(self.levels)

	def count_tree(self) -> dict[Path, int]:
		"""Число детей m_{i_1⋯i_{k−1}} для каждой части выше последнего уровня"""
		return {part.path: part.count for level in range(self.levels) for part in self.parts(level)}

	def right_end(self, part: UDPart) -> Number:
		return self.leaves[part.stop - 1].right


def _split(parent: UDPart, splits: set[int], center_of) -> list[UDPart]:
	children = []
	begin = parent.start
	for i in range(parent.start, parent.stop - 1):
		if i in splits:
			children.append((begin, i + 1))
			begin = i + 1
	children.append((begin, parent.stop))
	return [
		UDPart(parent.path + (index,), lo, hi, center_of(lo))
		for index, (lo, hi) in enumerate(children, 1)
	]


def _verify_part(decomposition: UDDecomposition, part: UDPart, tau: Number) -> None:
	"""Свойства частей на разрешении листьев: внутренний и внешний шары"""
	leaves = decomposition.leaves
	x = part.center
	details = {"level": part.level, "node": word_to_str(part.path), "scale": float(tau)}
	if part.start > 0 and leaves[part.start - 1].right >= x - tau:
		raise NotUniformlyDisconnectedAtScale("Шар B(x, r_k) задевает соседнюю часть слева", **details)
	if part.stop < len(leaves) and leaves[part.stop].left <= x + tau:
		raise NotUniformlyDisconnectedAtScale("Шар B(x, r_k) задевает соседнюю часть справа", **details)
	if decomposition.right_end(part) - x > decomposition.constant * tau:
		raise NotUniformlyDisconnectedAtScale(
			f"Часть не помещается в шар B(x, C·r_k), C = {decomposition.constant}", **details
		)


def decompose_ud(
		real: Realization,
		eta: Number,
		schedule: Schedule = Schedule.LINEAR,
		depth: int | None = None,
		constant: Number | None = None,
		levels: int | None = None,
) -> UDDecomposition:
	"""
	Вложенные части на масштабах r_k: листья глубины K группируются одиночной связью,
	два соседних листа в одной части тогда и только тогда, когда зазор ≤ r_k.
	Свойства разбиения проверяются после построения.
	"""
	real.require_1d()
	eta = _exact(eta)
	if not 0 < eta < 1:
		raise EtaTooLarge(f"η должно лежать в (0, 1), получено {eta}")
	depth = min(depth or real.depth, real.depth)
	_check_leaves(real.spec, depth)

	check = ud_direct(real, depth)
	if check.verdict == Verdict.FAILS:
		raise PreconditionViolated("Реализация не проходит прямую проверку равномерной несвязности", spec=real.spec.name)
	if check.verdict == Verdict.HOLDS:
		bound = min(1 / check.details["C"], check.details["r_star"])
		if eta >= bound:
			print_warning(f"η = {float(eta):.4g} не меньше min(1/C, r*) = {bound:.4g}, свойства проверяются по факту")

	constant = 1 / eta if constant is None else constant
	leaves = list(real.leaves(depth))
	resolution = real.spec.level_radius(depth)
	if levels is None:
		levels = 1
		while schedule.radius(eta, levels + 1) >= resolution:
			levels += 1

	gaps = [right.left - left.right for left, right in zip(leaves, leaves[1:])]
	center_of = lambda index: leaves[index].left
	root = UDPart((), 0, len(leaves), center_of(0))
	decomposition = UDDecomposition(real, eta, schedule, constant, depth, levels, leaves, root)

	current = [root]
	for k in range(1, levels + 1):
		tau = schedule.radius(eta, k)
		splits = {i for i, gap in enumerate(gaps) if gap > tau}
		following = []
		for parent in current:
			parent.children = _split(parent, splits, center_of)
			following.extend(parent.children)
		for part in following:
			_verify_part(decomposition, part, tau)
		current = following

	return decomposition


# Разбиение Σ на двоичные цилиндры

def splitting_exponent(m: int) -> int:
	"""p с 2^p < m ≤ 2^{p+1}; для m = 1 вырожденное p = 0"""
	if m < 1:
		raise InvalidCount(f"Число частей должно быть ≥ 1, получено {m}", count=m)
	return max((m - 1).bit_length() - 1, 0)


def split_cylinder(word: str, m: int) -> list[str]:
	"""
	m двоичных цилиндров, разбивающих цилиндр word: все 2^p продолжения длины p
	по порядку, первые m − 2^p из них делятся ещё одним символом.
	"""
	if m < 1:
		raise InvalidCount(f"Число частей должно быть ≥ 1, получено {m}", count=m)
	if m == 1:
		return [word]
	p = splitting_exponent(m)
	extensions = [format(i, f"0{p}b") if p else "" for i in range(2 ** p)]
	extra = m - 2 ** p
	children = []
	for index, extension in enumerate(extensions):
		if index < extra:
			children.extend([word + extension + "0", word + extension + "1"])
		else:
			children.append(word + extension)
	return children


def cylinder_distance(first: str, second: str) -> Fraction:
	"""D = 2^{−(первая позиция различия)} для точек двух цилиндров; 0, если цилиндры вложены"""
	for position, (a, b) in enumerate(zip(first, second), 1):
		if a != b:
			return Fraction(1, 2 ** position)
	return Fraction(0)


@dataclass
class SigmaDecomposition:
	words: dict[Path, str]
	exponents: dict[Path, int]
	counts: dict[Path, int]

	def children(self, path: Path) -> list[Path]:
		return [path + (i,) for i in range(1, self.counts.get(path, 0) + 1)]

	def length(self, path: Path) -> int:
		return len(self.words[path])

	def distance(self, first: Path, second: Path) -> Fraction:
		return cylinder_distance(self.words[first], self.words[second])

	def leaves(self) -> dict[Path, str]:
		"""Листовые цилиндры: узлы без детей"""
		return {path: word for path, word in self.words.items() if not self.counts.get(path, 0)}

	def representatives(self, cells: list[str]) -> dict[str, Path]:
		"""Для каждой клетки укрупнения самый левый лист внутри неё"""
		cell_set = set(cells)
		result: dict[str, Path] = {}
		for path, word in sorted(self.leaves().items()):
			cell = next((word[:i] for i in range(len(word) + 1) if word[:i] in cell_set), None)
			if cell is None:
				raise CapacityExhausted(f"Лист {word_to_str(path)} не лежит ни в одной клетке", word=word)
			result.setdefault(cell, path)
		return result


def common_cells(*decompositions: SigmaDecomposition) -> list[str]:
	"""
	Общее укрупнение листовых разбиений Σ: для каждой точки берётся больший из
	содержащих её листовых цилиндров. Клетки идут в лексикографическом порядке,
	каждая содержит хотя бы один лист каждого разбиения.
	"""
	leaf_words = {word for sigma in decompositions for word in sigma.leaves().values()}
	cells, stack = [], [""]
	while stack:
		word = stack.pop()
		if word in leaf_words:
			cells.append(word)
		else:
			stack.extend((word + "1", word + "0"))
	return cells


def sigma_decompose(counts: CountTree) -> SigmaDecomposition:
	"""Дерево двоичных цилиндров по дереву чисел детей"""
	words: dict[Path, str] = {(): ""}
	exponents: dict[Path, int] = {}
	stack: list[Path] = [()]
	while stack:
		path = stack.pop()
		m = counts.get(path)
		if m is None:
			continue
		exponents[path] = splitting_exponent(m)
		for index, word in enumerate(split_cylinder(words[path], m), 1):
			words[path + (index,)] = word
			stack.append(path + (index,))
	return SigmaDecomposition(words, exponents, dict(counts))


# Упаковочное подмножество A(η) и модель E(η)

@dataclass(eq=False)
class PackedSubset:
	spec: MoranSpec
	eta: Number
	counts: list[int]
	floor_bounds: list[int]
	centers: dict[Path, Number]
	hausdorff: Number
	hausdorff_slack: Number

	@property
	def levels(self) -> int:
		return len(self.counts)

	def leaf_centers(self) -> list[Number]:
		return sorted(x for path, x in self.centers.items() if len(path) == self.levels)


def _trace_depth(real: Realization, r: Number) -> int:
	try:
		return count_depth(real, r)
	except ScaleBelowResolution as e:
		raise DepthExhausted(f"Глубина реализации {real.depth} не разрешает масштаб {float(r):.4g}", level=real.depth) from e


def floor_bound(real: Realization, eta: Number, k: int) -> int:
	"""⌊μ̲(η^{k−1}/2) / μ̄(2η^k)⌋ по сертифицированным экстремумам"""
	spec = real.spec
	outer = min(eta ** (k - 1) / 2, spec.diameter)
	inner = min(2 * eta ** k, spec.diameter)
	lower = scale_extremes(real, spec.scale_index(outer), radius=outer).mu_lower
	upper = scale_extremes(real, spec.scale_index(inner), radius=inner).mu_upper
	return math.floor(lower / upper)


def pack_subset(real: Realization, eta: Number, levels: int | None = None) -> PackedSubset:
	"""
	Уровень 1: жадная максимальная упаковка η-шаров с центрами в A.
	Уровень k: внутри следа [y − η^{k−1}/2, y + η^{k−1}/2] каждого выбранного центра
	жадно упаковываются η^k-шары; n_k это минимум по родителям, у каждого родителя
	остаются первые n_k центров.
	Без levels уровни строятся до разрешения реализации (η^k > r_K|J|);
	модель E(η) конечна и за последним уровнем не продолжается.
	"""
	real.require_1d()
	eta = _exact(eta)
	if not 0 < eta <= Fraction(1, 3):
		raise EtaTooLarge(f"η должно лежать в (0, 1/3], получено {eta}")
	resolution = real.spec.level_radius(real.depth)
	if levels is None:
		levels = 0
		while eta ** (levels + 1) > resolution:
			levels += 1
	if levels < 1:
		raise DepthExhausted(f"Глубина реализации {real.depth} не разрешает масштаб η={eta}", level=real.depth)

	centers: dict[Path, Number] = {}
	counts, floors = [], []
	frontier: list[Path] = [()]
	for k in range(1, levels + 1):
		r = eta ** k
		depth = _trace_depth(real, r)
		found: dict[Path, list[Number]] = {}
		for path in frontier:
			if path:
				half = eta ** (k - 1) / 2
				found[path] = greedy_sweep(real, r, depth, start=centers[path] - half, stop=centers[path] + half)
			else:
				found[path] = greedy_sweep(real, r, depth)

		n_k = min(len(points) for points in found.values())
		if n_k < 2:
			raise EtaTooLarge(f"На уровне {k} помещается лишь {n_k} шар(ов) радиуса η^{k}", level=k)
		counts.append(n_k)
		floors.append(floor_bound(real, eta, k))

		frontier = []
		for path, points in found.items():
			for index, point in enumerate(points[:n_k], 1):
				centers[path + (index,)] = point
				frontier.append(path + (index,))

	# Сравнение с A на уровне последнего масштаба, а не на всей глубине
	union_depth = min(real.spec.scale_index(eta ** levels), real.depth)
	leaf_points = [centers[path] for path in frontier]
	distance, _ = hausdorff_distance(leaf_points, real.interval_union(union_depth))
	slack = real.spec.level_radius(union_depth)
	if distance > 3 * eta + slack:
		raise EtaTooLarge(f"d_H(A(η), A) = {float(distance):.4g} > 3η", level=levels)

	spec = validate(
		RawSpec(
			dimension=1,
			diameter=1,
			branching=FiniteRule(tuple(counts)),
			ratios=ConstantRule(eta),
			name=f"E({eta})",
		),
		depth=levels,
	)
	return PackedSubset(spec, eta, counts, floors, centers, distance, slack)


# Вложения

@dataclass(eq=False)
class EmbeddingMap:
	source: 'Realization | UDDecomposition'
	target: 'Realization | UDDecomposition'
	eta: Number
	depth: int
	construction: Construction
	source_points: dict[Path, Number]
	target_points: dict[Path, Number]
	stats: DistortionStats | None = None

	def rows(self) -> list[dict]:
		return [
			{"source": word_to_str(path), "x": float(self.source_points[path]), "f(x)": float(self.target_points[path])}
			for path in sorted(self.source_points)
		]


def _source_tree(source: 'Realization | UDDecomposition', depth: int | None) -> tuple[dict[Path, int], dict[Path, Number], int]:
	if isinstance(source, UDDecomposition):
		points = {part.path: part.center for part in source.leaf_parts()}
		return source.count_tree(), points, source.levels

	source.require_1d()
	depth = min(depth or source.depth, source.depth)
	_check_leaves(source.spec, depth)
	counts: dict[Path, int] = {}
	points: dict[Path, Number] = {}
	for leaf in source.leaves(depth):
		for j in range(depth):
			counts.setdefault(leaf.word[:j], source.spec.n(j + 1))
		points[leaf.word] = source.point_at(leaf.word, Tail.ONES).x
	return counts, points, depth


def _same_construction(source, target: Realization) -> bool:
	return (
		isinstance(source, Realization)
		and source.spec == target.spec
		and source.placement == target.placement
	)


def build_embedding(
		source: 'Realization | UDDecomposition',
		target: Realization,
		eta: Number,
		depth: int | None = None,
) -> EmbeddingMap:
	"""
	Уровень за уровнем: для узла с m детьми жадно выбираются m непересекающихся η^k-шаров
	с центрами в следе B(y_parent, η^{k−1}/2) целевого множества.
	Адрес глубины K отображается в выбранный центр.
	"""
	target.require_1d()
	eta = _exact(eta)
	if not 0 < eta <= Fraction(1, 3):
		raise EtaTooLarge(f"η должно лежать в (0, 1/3], получено {eta}")
	counts, source_points, depth = _source_tree(source, depth)

	if _same_construction(source, target):
		target_points = {path: target.point_at(path, Tail.ONES).x for path in source_points}
		embedding = EmbeddingMap(source, target, eta, depth, Construction.IDENTITY, source_points, target_points)
		embedding.stats = distortion(embedding)
		return embedding

	centers: dict[Path, Number] = {}
	frontier: list[Path] = [()]
	for k in range(1, depth + 1):
		r = eta ** k
		trace_depth = _trace_depth(target, r)
		following = []
		for path in frontier:
			m = counts.get(path, 0)
			if not m:
				continue
			if path:
				half = eta ** (k - 1) / 2
				points = greedy_sweep(
					target, r, trace_depth, start=centers[path] - half, stop=centers[path] + half, limit=m
				)
			else:
				points = greedy_sweep(target, r, trace_depth, limit=m)
			if len(points) < m:
				raise CapacityExhausted(
					f"Узел вмещает {len(points)} из {m} шаров радиуса η^{k}",
					level=k, node=word_to_str(path) or "∅", scale=float(r),
				)
			for index, point in enumerate(points, 1):
				centers[path + (index,)] = point
				following.append(path + (index,))
		frontier = following

	target_points = {path: centers[path] for path in source_points}
	if len(set(target_points.values())) != len(target_points):
		raise CapacityExhausted("Отображение не инъективно", level=depth)

	embedding = EmbeddingMap(source, target, eta, depth, Construction.BALLS, source_points, target_points)
	embedding.stats = distortion(embedding)
	return embedding


def ql_bijection(
		spec_a: MoranSpec,
		spec_b: MoranSpec,
		eta: Number,
		depth: int | None = None,
		placement_a: Placement | None = None,
		placement_b: Placement | None = None,
) -> EmbeddingMap:
	"""
	Разбиения A и B на шкале η^{k²}, оба проводятся через Σ. Листья обоих разбиений
	укрупняются до общих клеток; самая левая часть A в клетке отображается в самую
	левую часть B той же клетки, так что отображение взаимно однозначно.
	"""
	depth = depth or settings.DEFAULT_DEPTH
	decompositions = []
	for spec, placement in ((spec_a, placement_a), (spec_b, placement_b)):
		real = realize(spec, placement, depth)
		if ud_direct(real).verdict != Verdict.HOLDS:
			raise PreconditionViolated("Прямая проверка равномерной несвязности не выполнена", spec=spec.name)
		decompositions.append(decompose_ud(real, eta, Schedule.QUADRATIC))
	dec_a, dec_b = decompositions

	sigma_a, sigma_b = sigma_decompose(dec_a.count_tree()), sigma_decompose(dec_b.count_tree())
	cells = common_cells(sigma_a, sigma_b)
	reps_a, reps_b = sigma_a.representatives(cells), sigma_b.representatives(cells)
	missing = [cell for cell in cells if cell not in reps_a or cell not in reps_b]
	if missing:
		raise CapacityExhausted(f"{len(missing)} клеток без части с одной из сторон", word=missing[0])

	centers_a = {part.path: part.center for part in dec_a.leaf_parts()}
	centers_b = {part.path: part.center for part in dec_b.leaf_parts()}
	source_points = {reps_a[cell]: centers_a[reps_a[cell]] for cell in cells}
	target_points = {reps_a[cell]: centers_b[reps_b[cell]] for cell in cells}
	if len(set(target_points.values())) != len(target_points):
		raise CapacityExhausted("Образы частей совпадают")

	embedding = EmbeddingMap(dec_a, dec_b, dec_a.eta, dec_a.levels, Construction.SIGMA, source_points, target_points)
	embedding.stats = distortion(embedding)
	return embedding


# Искажение

def _padded_paths(paths: list[Path]) -> np.ndarray:
	width = max((len(p) for p in paths), default=0)
	return np.array([p + (0,) * (width - len(p)) for p in paths], dtype=np.int64).reshape(len(paths), width)


def _stratified_pairs(paths: list[Path], rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
	"""Не менее PAIRS_PER_LEVEL пар на каждый уровень расщепления"""
	width = max(len(p) for p in paths)
	first, second = [], []
	for level in range(1, width + 1):
		groups: dict[Path, dict[int, list[int]]] = {}
		for index, path in enumerate(paths):
			if len(path) >= level:
				groups.setdefault(path[:level - 1], {}).setdefault(path[level - 1], []).append(index)
		nodes = [children for children in groups.values() if len(children) > 1]
		if not nodes:
			continue
		for _ in range(settings.PAIRS_PER_LEVEL):
			children = nodes[int(rng.integers(len(nodes)))]
			keys = list(children)
			a, b = rng.choice(len(keys), size=2, replace=False)
			first.append(int(rng.choice(children[keys[a]])))
			second.append(int(rng.choice(children[keys[b]])))
	return np.array(first, dtype=np.int64), np.array(second, dtype=np.int64)


def _pairs(embedding: EmbeddingMap, pair_budget: int | None, seed: int | None):
	paths = sorted(embedding.source_points)
	xs = np.array([float(embedding.source_points[p]) for p in paths])
	ys = np.array([float(embedding.target_points[p]) for p in paths])
	budget = settings.PAIR_BUDGET if pair_budget is None else pair_budget

	n = len(paths)
	exhaustive = n * (n - 1) // 2 <= budget
	if exhaustive:
		i, j = np.triu_indices(n, 1)
	else:
		i, j = _stratified_pairs(paths, np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed))

	padded = _padded_paths(paths)
	if padded.shape[1]:
		differs = padded[i] != padded[j]
		levels = np.where(differs.any(axis=1), differs.argmax(axis=1) + 1, 0)
	else:
		levels = np.zeros(len(i), dtype=np.int64)
	return np.abs(xs[i] - xs[j]), np.abs(ys[i] - ys[j]), levels, exhaustive


def _deviation_bins(d_source: np.ndarray, d_target: np.ndarray) -> list[float]:
	"""sup |log d_target / log d_source − 1| по равным бинам |log d_source|"""
	mask = d_source < 1
	if not mask.any():
		return []
	log_source = np.log(d_source[mask])
	deviation = np.abs(np.log(d_target[mask]) / log_source - 1)
	magnitude = np.abs(log_source)
	edges = np.linspace(magnitude.min(), magnitude.max(), settings.QL_DEVIATION_BINS + 1)
	index = np.clip(np.digitize(magnitude, edges) - 1, 0, settings.QL_DEVIATION_BINS - 1)
	return [
		float(deviation[index == b].max()) if (index == b).any() else 0.0
		for b in range(settings.QL_DEVIATION_BINS)
	]


def distortion(embedding: EmbeddingMap, pair_budget: int | None = None, seed: int | None = None) -> DistortionStats:
	"""
	Отношения d_target/d_source по всем парам (если их не больше бюджета) или по
	стратифицированной выборке. Для отображений шарами проверяется вилка уровня k:
	η^k/4 ≤ d_target ≤ (3/2)·η^{k−1}.
	"""
	d_source, d_target, levels, exhaustive = _pairs(embedding, pair_budget, seed)
	distinct = d_source > 0
	collisions = distinct & (d_target == 0)
	valid = distinct & (d_target > 0)
	d_source, d_target, levels = d_source[valid], d_target[valid], levels[valid]

	ratio = d_target / d_source
	max_up = float(ratio.max()) if ratio.size else 1.0
	max_down = float((1 / ratio).max()) if ratio.size else 1.0

	violations = 0
	sandwich = embedding.construction == Construction.BALLS
	if sandwich and ratio.size:
		eta = float(embedding.eta)
		lower = eta ** levels / 4
		upper = 1.5 * eta ** (levels - 1.0)
		tolerance = settings.EQUAL_TOLERANCE
		violations = int(((d_target < lower * (1 - tolerance)) | (d_target > upper * (1 + tolerance))).sum())

	return DistortionStats(
		pairs=int(valid.sum()),
		exhaustive=exhaustive,
		lipschitz=max(max_up, max_down),
		max_ratio_up=max_up,
		max_ratio_down=max_down,
		sandwich_checked=sandwich,
		sandwich_violations=violations,
		deviation_bins=_deviation_bins(d_source, d_target),
		excluded_collisions=int(collisions.sum()),
	)


def pair_table(embedding: EmbeddingMap, pair_budget: int | None = None, seed: int | None = None) -> list[dict]:
	"""Строки (уровень, d_source, d_target, log-отношение) для CSV"""
	d_source, d_target, levels, _ = _pairs(embedding, pair_budget, seed)
	rows = []
	for level, ds, dt in zip(levels, d_source, d_target):
		if ds > 0 and dt > 0:
			rows.append({"level": int(level), "d_source": ds, "d_target": dt, "log_ratio": math.log(dt / ds)})
	return rows

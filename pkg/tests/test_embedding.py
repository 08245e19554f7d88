from fractions import Fraction

import numpy as np
import pytest
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import pdist

from app.core.embedding import (
	Construction,
	Schedule,
	build_embedding,
	common_cells,
	cylinder_distance,
	decompose_ud,
	distortion,
	pack_subset,
	pair_table,
	ql_bijection,
	sigma_decompose,
	split_cylinder,
	splitting_exponent,
)
from app.core.errors import CapacityExhausted, DepthExhausted, EtaTooLarge, InvalidCount, NotUniformlyDisconnectedAtScale
from app.core.profiles import chi
from app.core.realization import realize
from tests.conftest import constant_spec

ETA = Fraction(1, 5)


# Разбиение Σ

@pytest.mark.parametrize("m, words", [
	(1, [""]),
	(2, ["0", "1"]),
	(3, ["00", "01", "1"]),
	(4, ["00", "01", "10", "11"]),
	(5, ["000", "001", "01", "10", "11"]),
])
def test_split_cylinder(m, words):
	assert split_cylinder("", m) == words


def test_splitting_exponent():
	assert [splitting_exponent(m) for m in (1, 2, 3, 4, 5, 8, 9)] == [0, 0, 1, 1, 2, 2, 3]
	with pytest.raises(InvalidCount):
		splitting_exponent(0)
	with pytest.raises(InvalidCount):
		split_cylinder("0", 0)


def test_cylinder_distance():
	assert cylinder_distance("0", "1") == Fraction(1, 2)
	assert cylinder_distance("00", "01") == Fraction(1, 4)
	assert cylinder_distance("0", "01") == 0


def test_sigma_decompose_and_cells():
	sigma = sigma_decompose({(): 3, (1,): 2})
	assert [sigma.words[path] for path in sigma.children(())] == ["00", "01", "1"]
	assert sigma.words[(1, 2)] == "001"
	assert sigma.exponents[()] == 1
	assert sigma.distance((1, 1), (3,)) == Fraction(1, 2)
	assert sigma.leaves() == {(1, 1): "000", (1, 2): "001", (2,): "01", (3,): "1"}

	# Лист "01" первого разбиения покрывает два листа второго
	other = sigma_decompose({(): 2, (1,): 4})
	cells = common_cells(sigma, other)
	assert cells == ["000", "001", "01", "1"]
	assert sigma.representatives(cells) == {"000": (1, 1), "001": (1, 2), "01": (2,), "1": (3,)}
	assert other.representatives(cells) == {"000": (1, 1), "001": (1, 2), "01": (1, 3), "1": (2,)}


def _random_count_tree(rng: np.random.Generator) -> dict[tuple[int, ...], int]:
	counts, frontier = {}, [()]
	for _ in range(int(rng.integers(1, 4))):
		following = []
		for path in frontier:
			m = int(rng.integers(1, 10))
			counts[path] = m
			following.extend(path + (i,) for i in range(1, m + 1))
		frontier = following
	return counts


def test_sigma_decompose_random_trees():
	"""2000 случайных деревьев: показатели, длины детей и расстояния между братьями"""
	rng = np.random.default_rng(2024)
	for _ in range(2000):
		counts = _random_count_tree(rng)
		sigma = sigma_decompose(counts)
		for path, m in counts.items():
			p = sigma.exponents[path]
			if m >= 2:
				assert 2 ** p < m <= 2 ** (p + 1)
			length = sigma.length(path)
			children = sigma.children(path)
			words = [sigma.words[child] for child in children]
			assert words == sorted(words)
			if m == 1:
				assert words == [sigma.words[path]]
				continue
			assert all(sigma.length(child) - length in (p, p + 1) for child in children)
			assert sum(sigma.length(child) - length == p + 1 for child in children) == 2 * (m - 2 ** p)
			for i, first in enumerate(children):
				for second in children[i + 1:]:
					assert Fraction(1, 2 ** (length + 1 + p)) <= sigma.distance(first, second) <= Fraction(1, 2 ** (length + 1))
		# Листья разбивают Σ
		assert sum(Fraction(1, 2 ** len(word)) for word in sigma.leaves().values()) == 1


# Разбиение равномерно несвязного множества

def test_decompose_cantor(cantor):
	"""Части уровня k совпадают с цилиндрами уровня k − 1"""
	decomposition = decompose_ud(realize(cantor.spec, cantor.placement, 6), Fraction(1, 3))
	assert decomposition.levels == 6
	assert [part.center for part in decomposition.parts(1)] == [0]
	assert [part.center for part in decomposition.parts(2)] == [0, Fraction(2, 3)]
	assert [part.center for part in decomposition.parts(3)] == [0, Fraction(2, 9), Fraction(2, 3), Fraction(8, 9)]
	assert [part.stop - part.start for part in decomposition.parts(3)] == [16] * 4
	assert decomposition.count_tree()[()] == 1


def test_decompose_quadratic_schedule(cantor):
	decomposition = decompose_ud(realize(cantor.spec, cantor.placement, 9), Fraction(1, 3), Schedule.QUADRATIC)
	assert decomposition.levels == 3
	assert decomposition.radius(3) == Fraction(1, 3 ** 9)
	assert len(decomposition.leaf_parts()) == 2 ** 8


def interval_gap(u, v) -> float:
	return max(0.0, max(u[0], v[0]) - min(u[1], v[1]))


def test_decompose_matches_single_linkage(cantor):
	"""Число частей на каждом уровне совпадает с кластерами одиночной связи при пороге r_k"""
	real = realize(cantor.spec, cantor.placement, 6)
	decomposition = decompose_ud(real, ETA)
	intervals = np.array([[float(leaf.left), float(leaf.right)] for leaf in real.leaves(6)])
	tree = linkage(pdist(intervals, interval_gap), method="single")
	assert decomposition.levels == 4
	for k in range(1, decomposition.levels + 1):
		labels = fcluster(tree, t=float(decomposition.radius(k)), criterion="distance")
		assert len(set(labels)) == len(decomposition.parts(k))


def test_decompose_rejects_thin_gaps(exud):
	with pytest.raises(NotUniformlyDisconnectedAtScale):
		decompose_ud(realize(exud.spec, exud.placement, 10), ETA, constant=5)


def test_decompose_rejects_bad_eta(cantor_real):
	with pytest.raises(EtaTooLarge):
		decompose_ud(cantor_real, 1)


# Упаковочное подмножество

def test_pack_subset_cantor(cantor):
	"""Уровни строятся до разрешения K, модель E(η) за ними не продолжается"""
	real = realize(cantor.spec, cantor.placement, 8)
	packed = pack_subset(real, Fraction(1, 9))
	assert packed.counts == [4, 2, 2]
	assert packed.levels == 3
	assert len(packed.leaf_centers()) == 16
	assert packed.hausdorff <= 3 * Fraction(1, 9) + packed.hausdorff_slack
	assert all(bound <= count for bound, count in zip(packed.floor_bounds, packed.counts))
	assert packed.spec.n(3) == 2
	assert packed.spec.c(1) == Fraction(1, 9)
	with pytest.raises(DepthExhausted):
		packed.spec.n(4)
	with pytest.raises(DepthExhausted):
		pack_subset(real, Fraction(1, 9), levels=4)


def test_pack_subset_block_branching(pab):
	real = realize(pab.spec, pab.placement, 6)
	eta = Fraction(1, 6)
	packed = pack_subset(real, eta)
	assert packed.levels == 5
	assert all(count >= 2 for count in packed.counts)
	assert all(bound <= count for bound, count in zip(packed.floor_bounds, packed.counts))
	assert packed.hausdorff <= 3 * eta + packed.hausdorff_slack
	assert packed.spec.branching.kind == "finite"
	assert len(packed.leaf_centers()) == packed.spec.phi_level(packed.levels)
	with pytest.raises(DepthExhausted):
		packed.spec.n(6)
	with pytest.raises(DepthExhausted):
		pack_subset(real, eta, levels=6)


def test_pack_subset_chi_shrinks(cantor):
	real = realize(cantor.spec, cantor.placement, 12)
	estimates = []
	for eta in (Fraction(1, 9), Fraction(1, 27), Fraction(1, 81)):
		packed = pack_subset(real, eta)
		source_depth = cantor.spec.scale_index(eta ** packed.levels)
		estimates.append(chi(packed.spec, cantor.spec, packed.levels, depth_b=source_depth).estimate)
	assert estimates[0] > estimates[1] > estimates[2]


def test_pack_subset_rejects_large_eta(cantor_real):
	with pytest.raises(EtaTooLarge):
		pack_subset(cantor_real, Fraction(1, 2))


# Вложения

def test_build_embedding_balls(example2_b, example2_target):
	source = realize(example2_b.spec, example2_b.placement, 2)
	target = realize(example2_target.spec, example2_target.placement, 8)
	embedding = build_embedding(source, target, ETA, 2)
	assert embedding.construction == Construction.BALLS
	assert embedding.target_points[(1, 1)] == 0
	assert embedding.target_points[(1, 2)] == Fraction(2, 25)
	assert embedding.target_points[(2, 1)] == Fraction(2, 5)
	assert embedding.stats.sandwich_checked
	assert embedding.stats.sandwich_violations == 0
	assert embedding.stats.exhaustive
	assert len(embedding.rows()) == 4


def test_build_embedding_capacity(example2_b, example2_target):
	source = realize(example2_target.spec, example2_target.placement, 2)
	target = realize(example2_b.spec, example2_b.placement, 8)
	with pytest.raises(CapacityExhausted) as e:
		build_embedding(source, target, ETA, 2)
	assert e.value.details["level"] == 1


def test_build_embedding_identity(cantor):
	real = realize(cantor.spec, cantor.placement, 5)
	embedding = build_embedding(real, real, Fraction(1, 3))
	assert embedding.construction == Construction.IDENTITY
	assert embedding.stats.lipschitz == pytest.approx(1)


def test_build_embedding_rejects_large_eta(cantor_real):
	with pytest.raises(EtaTooLarge):
		build_embedding(cantor_real, cantor_real, Fraction(1, 2))


def test_distortion_sampling(example2_b, example2_target):
	source = realize(example2_b.spec, example2_b.placement, 6)
	target = realize(example2_target.spec, example2_target.placement, 12)
	embedding = build_embedding(source, target, ETA, 6)
	sampled = distortion(embedding, pair_budget=100, seed=1)
	assert not sampled.exhaustive
	assert sampled.lipschitz <= embedding.stats.lipschitz + 1e-9
	rows = pair_table(embedding, pair_budget=100, seed=1)
	assert rows and all(row["d_source"] > 0 for row in rows)


def test_ql_bijection_deviation_decreases(example2_a, example2_b):
	bijection = ql_bijection(example2_a.spec, example2_b.spec, Fraction(1, 6), 12, example2_a.placement, example2_b.placement)
	assert bijection.construction == Construction.SIGMA
	# Листья B длины 10 и не длиннее листьев A: клетки совпадают с частями B
	images = list(bijection.target_points.values())
	assert len(bijection.source_points) == 1024
	assert len(set(images)) == len(images)
	assert sorted(images) == sorted(part.center for part in bijection.target.leaf_parts())
	assert bijection.stats.excluded_collisions == 0
	tail = bijection.stats.deviation_bins[-3:]
	assert tail[0] > tail[1] > tail[2]


def test_ql_bijection_negative_control():
	a, b = constant_spec(2, ETA, name="two"), constant_spec(3, ETA, name="three")
	bijection = ql_bijection(a, b, Fraction(1, 6), 10)
	assert all(value > 0.3 for value in bijection.stats.deviation_bins)

from fractions import Fraction

import pytest

from app.core.errors import DimensionMismatch, NotOneDimensional, PlacementInfeasible, WordOutOfRange
from app.core.realization import IntervalUnion, Placement, PlacementKind, Tail, hausdorff_distance, realize
from app.services.spec_loader import spec_from_dict


def test_cantor_elements(cantor_real):
	element = cantor_real.locate((1, 2))
	assert (element.left, element.right) == (Fraction(2, 9), Fraction(1, 3))
	assert (cantor_real.locate((2,)).left, cantor_real.locate((2,)).right) == (Fraction(2, 3), 1)
	assert cantor_real.min_gap(()) == Fraction(1, 3)


def test_uniform_placement_offsets(pab):
	real = realize(pab.spec, pab.placement, 3)
	element = real.locate((3,))
	assert (element.left, element.right) == (Fraction(5, 12), Fraction(7, 12))
	assert real.normalized_gap(1) == Fraction(1, 24)


def test_locate_rejects_bad_words(cantor_real):
	with pytest.raises(WordOutOfRange):
		cantor_real.locate((3,))
	with pytest.raises(WordOutOfRange):
		cantor_real.locate((1,) * 9)


def test_leaves_are_ordered(cantor_real):
	lefts = [leaf.left for leaf in cantor_real.leaves(4)]
	assert len(lefts) == 16
	assert lefts == sorted(lefts)
	assert lefts[:4] == [0, Fraction(2, 81), Fraction(2, 27), Fraction(8, 81)]


def test_point_tails(pab):
	real = realize(pab.spec, pab.placement, 4)
	left = real.point_at((2,), Tail.ONES)
	assert left.x == real.locate((2,)).left
	middle = real.point_at((), Tail.MIDDLE)
	assert middle.x == Fraction(1, 2)
	assert middle.resolution == Fraction(1, 6 ** 4)


def test_first_after(cantor_real):
	assert cantor_real.first_after(None, 2) == (0, True)
	assert cantor_real.first_after(Fraction(1, 3), 2) == (Fraction(2, 3), True)
	assert cantor_real.first_after(Fraction(1, 18), 2) == (Fraction(1, 18), False)
	assert cantor_real.first_after(1, 2) is None


def test_exud_gaps(exud):
	"""Зазор на уровне k_m + 1 равен 1/(4m) от длины родителя"""
	real = realize(exud.spec, exud.placement, 125_001)
	assert real.min_gap((1,)) == Fraction(1, 24)
	assert real.normalized_gap(126) == Fraction(1, 20)
	assert real.normalized_gap(1001) == Fraction(1, 40)
	assert real.normalized_gap(125_001) == Fraction(1, 200)


def test_endpoints_require_binary_branching(pab):
	with pytest.raises(PlacementInfeasible):
		realize(pab.spec, Placement(PlacementKind.ENDPOINTS), 2)


def test_offsets_placement():
	loaded = spec_from_dict({
		"name": "offsets",
		"dimension": 1,
		"branching": {"kind": "constant", "value": 2},
		"ratios": {"kind": "constant", "value": "1/4"},
		"placement": {"kind": "offsets", "per_level": [["0", "1/2"]]},
	})
	real = realize(loaded.spec, loaded.placement, 3)
	assert real.locate((2, 2)).left == Fraction(1, 2) + Fraction(1, 8)
	assert real.normalized_gap(2) == Fraction(1, 4)

	overlapping = Placement(PlacementKind.OFFSETS, ((0, Fraction(1, 8)),))
	with pytest.raises(PlacementInfeasible):
		realize(loaded.spec, overlapping, 1)


def test_planar_grid():
	loaded = spec_from_dict({
		"name": "carpet",
		"dimension": 2,
		"branching": {"kind": "constant", "value": 4},
		"ratios": {"kind": "constant", "value": "1/3"},
	})
	real = realize(loaded.spec, loaded.placement, 2)
	assert real.locate((4,)).origin == (Fraction(2, 3), Fraction(2, 3))
	assert real.normalized_gap(1) == Fraction(1, 3)
	with pytest.raises(NotOneDimensional):
		real.interval_union()


def test_hausdorff_distance(cantor):
	real = realize(cantor.spec, cantor.placement, 1)
	distance, slack = hausdorff_distance(real, IntervalUnion.from_intervals([(0, 1)]))
	assert distance == Fraction(1, 6)
	assert slack == Fraction(1, 3)
	assert hausdorff_distance([0, 1], [0, Fraction(1, 2), 1])[0] == Fraction(1, 2)


def test_hausdorff_dimension_mismatch(cantor):
	planar = spec_from_dict({
		"name": "carpet",
		"dimension": 2,
		"branching": {"kind": "constant", "value": 4},
		"ratios": {"kind": "constant", "value": "1/3"},
	})
	with pytest.raises(DimensionMismatch):
		hausdorff_distance(realize(cantor.spec, cantor.placement, 1), realize(planar.spec, planar.placement, 1))

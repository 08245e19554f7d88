import math
from fractions import Fraction

import pytest

from app.core.criteria import (
	block_exponents,
	check_homogeneity,
	embed_condition,
	non_embeddability_certificate,
	ql_equivalent,
	ud_direct,
	ud_sufficient,
	window_ratio,
)
from app.core.errors import PreconditionViolated
from app.core.moran_spec import RawSpec, validate
from app.core.realization import realize
from app.core.sequences import ConstantRule, PrefixRule
from app.models import Verdict
from tests.conftest import constant_spec


def test_ud_sufficient_holds_for_cantor(cantor):
	verdict = ud_sufficient(cantor.spec, depth=200)
	assert verdict.verdict == Verdict.HOLDS
	assert verdict.value == pytest.approx(math.log(2) / math.log(3))
	assert verdict.window == (100, 200)


def test_ud_sufficient_fails_for_growing_blocks(exud):
	verdict = ud_sufficient(exud.spec, depth=125_060)
	assert verdict.verdict == Verdict.FAILS
	assert verdict.value == pytest.approx(0.99094, abs=1e-4)
	assert verdict.value < 1


def test_window_ratio_k0(pab):
	assert window_ratio(pab.spec, 0, 1) == pytest.approx(math.log(5) / math.log(6))
	assert window_ratio(pab.spec, 1, 1) == pytest.approx(math.log(3) / math.log(6))
	with pytest.raises(PreconditionViolated):
		ud_sufficient(pab.spec, k0=0)


def test_ud_direct_record_lows(exud):
	verdict = ud_direct(realize(exud.spec, exud.placement, 125_060))
	assert verdict.verdict == Verdict.FAILS
	lows = {row["level"]: row["value"] for row in verdict.trace}
	assert lows[126] == pytest.approx(1 / 20)
	assert lows[1001] == pytest.approx(1 / 40)
	assert lows[125_001] == pytest.approx(1 / 200)
	assert verdict.value == pytest.approx(1 / 200)


def test_ud_direct_holds_and_touching(cantor_real):
	verdict = ud_direct(cantor_real)
	assert verdict.verdict == Verdict.HOLDS
	assert verdict.details["C"] == pytest.approx(3)

	touching = ud_direct(realize(constant_spec(2, Fraction(1, 2)), None, 6))
	assert touching.verdict == Verdict.FAILS
	assert touching.details["touching_level"] == 1


def test_ud_direct_single_small_gap_is_not_failure():
	"""Один уровень малого зазора (постоянный хвост) не даёт провала"""
	ratios = PrefixRule((Fraction(1, 4), Fraction(1, 3)), ConstantRule(Fraction(497, 1000)))
	spec = validate(RawSpec(1, 1, ConstantRule(2), ratios, name="small-tail"))
	verdict = ud_direct(realize(spec, None, 8))
	assert verdict.value == pytest.approx(0.006)
	assert verdict.details["record_lows"] == 3
	assert verdict.details["small_record_lows"] == 1
	assert verdict.verdict == Verdict.INCONCLUSIVE


def test_homogeneity_aligned_cantor(cantor):
	report = check_homogeneity(realize(cantor.spec, cantor.placement, 16), probes=8, kappa=1 / 9, aligned=True)
	assert report.lambda_est == 1
	assert report.delta_est == 4
	assert report.Delta_est == pytest.approx(4, rel=1e-3)
	assert report.consistent


def test_homogeneity_aligned_cantor_third(cantor):
	"""κ = 1/3: шар уровня j вдвое тяжелее шара вокруг левого ребёнка"""
	report = check_homogeneity(realize(cantor.spec, cantor.placement, 18), probes=8, kappa=1 / 3, aligned=True)
	assert report.probes > 8
	assert report.delta_est == 2
	assert report.Delta_est == pytest.approx(2, rel=1e-3)
	assert report.consistent


def test_homogeneity_preconditions(cantor):
	real = realize(cantor.spec, cantor.placement, 8)
	with pytest.raises(PreconditionViolated):
		check_homogeneity(real, kappa=1.5)
	with pytest.raises(PreconditionViolated):
		check_homogeneity(real)


def test_embed_condition_constant_pair(example2_b, example2_target):
	verdict = embed_condition(example2_b.spec, example2_target.spec, depth=40)
	assert verdict.verdict == Verdict.HOLDS
	assert verdict.value == pytest.approx(math.log(2) / math.log(3), abs=1e-9)

	reverse = embed_condition(example2_target.spec, example2_b.spec, depth=40)
	assert reverse.verdict == Verdict.FAILS


def test_ql_equivalent_sparse_triples(example2_a, example2_b):
	verdict = ql_equivalent(example2_a.spec, example2_b.spec, depth=10_000)
	assert verdict.verdict == Verdict.HOLDS
	assert verdict.value < 0.01
	sups = [row["sup"] for row in verdict.trace]
	assert all(later <= earlier + 1e-9 for earlier, later in zip(sups, sups[1:]))


def test_ql_equivalent_fails_for_different_dimensions(example2_b, example2_target):
	verdict = ql_equivalent(example2_b.spec, example2_target.spec, depth=1000)
	assert verdict.verdict == Verdict.FAILS
	assert verdict.value == pytest.approx(1 - math.log(2) / math.log(3))


def test_certificate_block_spec(pab):
	certificate = non_embeddability_certificate(math.log(4) / math.log(6), pab.spec, 4)
	assert certificate.verdict == Verdict.HOLDS
	assert certificate.value == pytest.approx(math.log(4 / 3))
	assert [row["nu_ratio"] for row in certificate.trace] == ["3", "9", "27", "81"]
	assert all(row["exact"] for row in certificate.trace)


def test_certificate_boundary_is_inconclusive(pab):
	lower, upper = sorted(block_exponents(pab.spec))
	assert lower == pytest.approx(math.log(3) / math.log(6))
	assert upper == pytest.approx(math.log(5) / math.log(6))

	boundary = non_embeddability_certificate(lower, pab.spec, 4)
	assert boundary.verdict == Verdict.INCONCLUSIVE
	assert boundary.value == pytest.approx(0, abs=1e-9)


def test_certificate_preconditions(pab, cantor):
	with pytest.raises(PreconditionViolated):
		non_embeddability_certificate(0.1, pab.spec)
	with pytest.raises(PreconditionViolated):
		non_embeddability_certificate(0.6, cantor.spec)

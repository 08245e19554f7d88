import math
from fractions import Fraction

import pytest

from app.core.errors import DepthExhausted, InvalidSpec, ParseError, WordOutOfRange
from app.core.expressions import Expression
from app.core.sequences import BlockRule, ConstantRule, FiniteRule, FormulaRule, PeriodicRule, PrefixRule


def block(k_m: str, t_m: str, in_block, off_block) -> BlockRule:
	k = Expression(k_m, "m")
	return BlockRule(k_m=k, t_m=Expression(t_m, "m", bindings={"k_m": k}), in_block=Expression(in_block, "m"), off_block=off_block)


def test_expression_is_exact_rational_function():
	expression = Expression("(k+1)/(2*(k+2))", "k")
	assert expression(1) == Fraction(1, 3)
	assert expression(98) == Fraction(99, 200)
	assert expression.limit() == Fraction(1, 2)
	assert expression.is_exact


def test_expression_irrational_constant_is_float():
	expression = Expression("3**(-log(3)/log(2))")
	assert expression.is_constant
	assert not expression.is_exact
	assert expression(1) == pytest.approx(3 ** (-math.log(3) / math.log(2)))


@pytest.mark.parametrize("source", ["k**2 + os", "import os", "", "sin(k)"])
def test_expression_rejects_bad_input(source):
	with pytest.raises(ParseError):
		Expression(source, "k")


def test_constant_and_periodic_rules():
	constant = ConstantRule(Fraction(1, 3))
	assert constant.value(1000) == Fraction(1, 3)
	assert constant.asymptotic_mean(lambda c: -math.log(c)) == pytest.approx(math.log(3))

	periodic = PeriodicRule((2, 3))
	assert periodic.values(5) == [2, 3, 2, 3, 2]
	assert periodic.infimum() == 2 and periodic.supremum() == 3
	assert periodic.asymptotic_mean(math.log) == pytest.approx((math.log(2) + math.log(3)) / 2)

	with pytest.raises(InvalidSpec):
		PeriodicRule(())
	with pytest.raises(WordOutOfRange):
		constant.value(0)


def test_prefix_rule_uses_global_index():
	rule = PrefixRule((5, 4), FormulaRule(Expression("k", "k")))
	assert rule.values(4) == [5, 4, 3, 4]
	assert list(rule.float_values(4)) == [5.0, 4.0, 3.0, 4.0]


def test_finite_rule_stops_after_last_value():
	rule = FiniteRule((4, 2, 2))
	assert rule.values(3) == [4, 2, 2]
	assert (rule.infimum(), rule.supremum()) == (2, 4)
	assert rule.asymptotic_mean(math.log) is None
	assert rule.describe() == {"kind": "finite", "values": ["4", "2", "2"]}
	with pytest.raises(DepthExhausted):
		rule.value(4)
	with pytest.raises(DepthExhausted):
		rule.float_values(4)
	with pytest.raises(InvalidSpec):
		FiniteRule(())


def test_formula_rule_extremes():
	rule = FormulaRule(Expression("(k+1)/(2*(k+2))", "k"))
	assert rule.infimum() == Fraction(1, 3)
	assert rule.supremum() == Fraction(1, 2)
	assert rule.float_values(3) == pytest.approx([1 / 3, 3 / 8, 2 / 5])


def test_block_rule_membership():
	"""k_m = m³, t_m = k_m + m: блочные уровни 2, 9–10, 28–30"""
	rule = block("m**3", "k_m+m", 3, 5)
	assert [rule.block_of(k) for k in (1, 2, 3, 8, 9, 10, 11, 28, 30, 31)] == [None, 1, None, None, 2, 2, None, 3, 3, None]
	assert rule.values(10) == [5, 3, 5, 5, 5, 5, 5, 5, 3, 3]
	assert list(rule.float_values(10)) == [float(v) for v in rule.values(10)]
	assert rule.blocks(10) == [(1, 2, 2), (2, 9, 10)]
	assert rule.density_vanishes
	assert rule.asymptotic_mean(math.log) == pytest.approx(math.log(5))
	assert rule.block_of(125_001) == 50


def test_block_rule_in_block_formula():
	rule = block("m**3", "k_m+m", "1/3 - 1/(6*m)", Fraction(1, 6))
	assert rule.value(126) == Fraction(3, 10)
	assert rule.value(127) == Fraction(3, 10)
	assert rule.value(131) == Fraction(1, 6)
	assert rule.infimum() == Fraction(1, 6)
	assert rule.supremum() == Fraction(1, 3)


def test_block_rule_schedule_must_be_increasing():
	with pytest.raises(InvalidSpec):
		block("m", "m+1", 3, 2)

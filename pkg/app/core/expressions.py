"""
Разбор выражений из файлов спецификаций.

Допускаются только рациональные функции одной переменной (m или k) с
рациональными коэффициентами и вещественные константы вроде 3**(-log(3)/log(2)).
После разбора выражение вычисляется без sympy: схемой Горнера по Fraction.
"""
import math
import re
from fractions import Fraction
from tokenize import TokenError

import numpy as np
import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, rationalize, standard_transformations

from app.core.errors import ParseError

Number = int | Fraction | float

ALLOWED_FUNCTIONS = {"log": sympy.log, "sqrt": sympy.sqrt, "exp": sympy.exp}
TRANSFORMATIONS = standard_transformations + (convert_xor, rationalize)

_ALLOWED_CHARS = re.compile(r"^[0-9A-Za-z_+\-*/^(). ]+$")
_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")


def to_fraction(value: sympy.Rational) -> Fraction:
	return Fraction(int(value.p), int(value.q))


def normalize_number(value: Fraction) -> int | Fraction:
	"""Целые значения возвращаются как int"""
	return int(value) if value.denominator == 1 else value


class Expression:
	"""Выражение от одной переменной, заданное строкой или числом"""

	def __init__(
			self,
			source: str | int | float | Fraction,
			variable: str = "k",
			bindings: dict[str, 'Expression'] | None = None,
	):
		self.source = str(source)
		self.variable = variable
		self.symbol = sympy.Symbol(variable, positive=True, integer=True)
		self.expr = self._parse(source, bindings or {})

		free = self.expr.free_symbols
		if free - {self.symbol}:
			names = ", ".join(sorted(str(s) for s in free - {self.symbol}))
			raise ParseError(f"Недопустимые переменные в выражении '{self.source}': {names}")

		self._constant: Number | None = None
		self._numerator: list[Fraction] = []
		self._denominator: list[Fraction] = []

		if not free:
			if self.expr.is_Rational:
				self._constant = normalize_number(to_fraction(self.expr))
			else:
				value = complex(self.expr.evalf(30))
				if value.imag or not math.isfinite(value.real):
					raise ParseError(f"Выражение '{self.source}' не задаёт конечное вещественное число")
				self._constant = value.real
		else:
			numerator, denominator = sympy.fraction(sympy.cancel(sympy.together(self.expr)))
			try:
				self._numerator = self._coefficients(numerator)
				self._denominator = self._coefficients(denominator)
			except (sympy.PolynomialError, ParseError):
				raise ParseError(
					f"Выражение '{self.source}' должно быть рациональной функцией от {variable}"
				)

	def _parse(self, source: str | int | float | Fraction, bindings: dict[str, 'Expression']) -> sympy.Expr:
		if isinstance(source, bool):
			raise ParseError(f"Ожидалось число или выражение, получено {source!r}")
		if isinstance(source, int):
			return sympy.Integer(source)
		if isinstance(source, Fraction):
			return sympy.Rational(source.numerator, source.denominator)
		if isinstance(source, float):
			if not math.isfinite(source):
				raise ParseError(f"Недопустимое число: {source}")
			return sympy.Rational(repr(source))

		text = source.strip()
		if not text or not _ALLOWED_CHARS.match(text):
			raise ParseError(f"Недопустимые символы в выражении '{source}'")

		allowed = {self.variable, *bindings, *ALLOWED_FUNCTIONS}
		unknown = sorted(set(_IDENTIFIER.findall(text)) - allowed)
		if unknown:
			raise ParseError(f"Неизвестные имена в выражении '{source}': {', '.join(unknown)}")

		local_dict = {self.variable: self.symbol, **ALLOWED_FUNCTIONS}
		local_dict.update({name: binding.expr for name, binding in bindings.items()})

		try:
			return sympy.sympify(parse_expr(text, local_dict=local_dict, transformations=TRANSFORMATIONS))
		except (SyntaxError, TypeError, TokenError, sympy.SympifyError, ZeroDivisionError) as e:
			raise ParseError(f"Не удалось разобрать выражение '{source}': {e}")

	def _coefficients(self, polynomial: sympy.Expr) -> list[Fraction]:
		poly = sympy.Poly(polynomial, self.symbol)
		coefficients = []
		for coefficient in poly.all_coeffs():
			if not coefficient.is_Rational:
				raise ParseError(f"Нерациональный коэффициент {coefficient}")
			coefficients.append(to_fraction(coefficient))
		return coefficients

	@property
	def is_constant(self) -> bool:
		return self._constant is not None

	@property
	def is_exact(self) -> bool:
		return not isinstance(self._constant, float)

	def __call__(self, x: int) -> Number:
		if self._constant is not None:
			return self._constant

		numerator = Fraction(0)
		for coefficient in self._numerator:
			numerator = numerator * x + coefficient
		denominator = Fraction(0)
		for coefficient in self._denominator:
			denominator = denominator * x + coefficient
		if denominator == 0:
			raise ParseError(f"Выражение '{self.source}' не определено при {self.variable}={x}")
		return normalize_number(numerator / denominator)

	def float_values(self, points: np.ndarray) -> np.ndarray:
		"""Векторное вычисление в float"""
		if self._constant is not None:
			return np.full(len(points), float(self._constant))
		points = np.asarray(points, dtype=float)
		numerator = np.polyval([float(c) for c in self._numerator], points)
		denominator = np.polyval([float(c) for c in self._denominator], points)
		return numerator / denominator

	def limit(self) -> Number:
		"""Предел при стремлении переменной к бесконечности (math.inf, если расходится)"""
		if self._constant is not None:
			return self._constant
		value = sympy.limit(self.expr, self.symbol, sympy.oo)
		if value.is_Rational:
			return normalize_number(to_fraction(value))
		if value.is_finite:
			return float(value.evalf(30))
		return math.inf if value == sympy.oo else -math.inf

	def __eq__(self, other: object) -> bool:
		return isinstance(other, Expression) and (self.expr, self.variable) == (other.expr, other.variable)

	def __hash__(self) -> int:
		return hash((self.expr, self.variable))

	def __repr__(self) -> str:
		return f"Expression({self.source!r}, {self.variable!r})"

	def __str__(self) -> str:
		return self.source

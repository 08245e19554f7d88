"""
Иерархия ошибок вычислительного ядра.

Все ошибки наследуют MoranError (а значит ValueError), несут структурированные
детали и выводятся в CLI под именем своего класса.
"""
from typing import Any


class MoranError(ValueError):
	"""Базовая ошибка moranlab"""

	def __init__(self, message: str, **details: Any):
		super().__init__(message)
		self.message = message
		self.details = {key: value for key, value in details.items() if value is not None}

	@property
	def name(self) -> str:
		return type(self).__name__

	def __str__(self) -> str:
		if not self.details:
			return self.message
		extra = ", ".join(f"{key}={value}" for key, value in self.details.items())
		return f"{self.message} ({extra})"


class InvalidSpec(MoranError):
	"""Рецепт конструкции нарушает условия Морана"""


class BranchingTooSmall(InvalidSpec):
	pass


class RatioInfimumZero(InvalidSpec):
	pass


class Overpacked(InvalidSpec):
	pass


class InvalidScale(MoranError):
	"""Масштаб должен быть положительным"""


class ScaleTooLarge(MoranError):
	pass


class ScaleOrder(MoranError):
	pass


class ScaleBelowResolution(MoranError):
	pass


class PlacementInfeasible(MoranError):
	pass


class WordOutOfRange(MoranError):
	pass


class DimensionMismatch(MoranError):
	pass


class NotOneDimensional(MoranError):
	pass


class PreconditionViolated(MoranError):
	pass


class NotUniformlyDisconnectedAtScale(MoranError):
	pass


class InvalidCount(MoranError):
	pass


class EtaTooLarge(MoranError):
	pass


class DepthExhausted(MoranError):
	pass


class CapacityExhausted(MoranError):
	pass


class ParseError(MoranError):
	"""Ошибка разбора файла спецификации (с номером строки или путём ключа)"""


class UnknownExample(MoranError):
	pass

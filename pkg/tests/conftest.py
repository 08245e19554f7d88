import json
from fractions import Fraction

import pytest

from app.config import settings
from app.core.examples import DOCUMENTS
from app.core.moran_spec import RawSpec, validate
from app.core.realization import Placement, PlacementKind, realize
from app.core.sequences import ConstantRule
from app.services.spec_loader import spec_from_dict


def constant_spec(n: int, c, name: str = "const", dimension: int = 1):
	return validate(RawSpec(dimension, 1, ConstantRule(n), ConstantRule(Fraction(c)), name=name))


@pytest.fixture(autouse=True)
def output_dir(tmp_path, monkeypatch):
	"""Артефакты тестов пишутся во временную папку"""
	monkeypatch.setattr(settings, "OUTPUT_DIR", tmp_path)
	return tmp_path


@pytest.fixture(scope="session")
def cantor():
	return spec_from_dict(DOCUMENTS["cantor"])


@pytest.fixture(scope="session")
def cantor_real(cantor):
	return realize(cantor.spec, cantor.placement, 8)


@pytest.fixture(scope="session")
def pab():
	return spec_from_dict(DOCUMENTS["pab"])


@pytest.fixture(scope="session")
def exud():
	return spec_from_dict(DOCUMENTS["exud"])


@pytest.fixture(scope="session")
def ex():
	return spec_from_dict(DOCUMENTS["ex"])


@pytest.fixture(scope="session")
def example2_a():
	return spec_from_dict(DOCUMENTS["example2_a"])


@pytest.fixture(scope="session")
def example2_b():
	return spec_from_dict(DOCUMENTS["example2_b"])


@pytest.fixture(scope="session")
def example2_target():
	return spec_from_dict(DOCUMENTS["example2_target"])


@pytest.fixture
def uniform():
	return Placement(PlacementKind.UNIFORM)


@pytest.fixture
def spec_file(tmp_path):
	"""Пишет документ примера в JSON-файл и возвращает путь"""
	def write(key: str, data: dict | None = None):
		path = tmp_path / "specs" / f"{key}.json"
		path.parent.mkdir(parents=True, exist_ok=True)
		path.write_text(json.dumps(data or DOCUMENTS[key], ensure_ascii=False), encoding="utf-8")
		return path

	return write

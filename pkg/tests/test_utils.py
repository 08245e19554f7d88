from fractions import Fraction

import pytest

from app.core.errors import ScaleTooLarge
from app.utils.base import canonical_json, format_number, levels_from_range, parse_range_string, slugify_name
from app.utils.console import console, print_error
from app.utils.files import find_spec_files, get_unique_filename


@pytest.mark.parametrize("range_str, expected", [
	(None, (None, None)),
	("all", (None, None)),
	("1-10", (0, 10)),
	(":8", (0, 8)),
	("5-", (4, 16)),
	("7", (0, 7)),
])
def test_parse_range_string(range_str, expected):
	assert parse_range_string(range_str, total=20) == expected


@pytest.mark.parametrize("range_str", ["7-3", "abc", "0", "30-"])
def test_parse_range_string_errors(range_str):
	with pytest.raises(ValueError):
		parse_range_string(range_str, total=20)


def test_levels_from_range():
	assert levels_from_range(None, 4) == [1, 2, 3, 4]
	assert levels_from_range("2-3", 10) == [2, 3]
	assert levels_from_range("8-", 10) == [8, 9, 10]


def test_format_number():
	assert format_number(Fraction(1, 3)) == "1/3"
	assert format_number(0.123456789) == "0.123457"
	assert format_number(Fraction(1, 3 ** 60)).endswith("e-29")
	assert format_number(None) == "None"


def test_slug_and_canonical_json():
	assert slugify_name("P:A<B") == "p-a-b"
	assert slugify_name("Ex:ud") == "ex-ud"
	assert canonical_json({"b": 1, "a": Fraction(1, 2)}) == '{"a": "1/2", "b": 1}'


def test_unique_filename(tmp_path):
	"""Без перезаписи занятое имя получает индекс"""
	first = get_unique_filename(tmp_path, "P:A<B", overwrite=False)
	assert first.name == "p-a-b.xlsx"
	first.write_text("x")
	assert get_unique_filename(tmp_path, "P:A<B", overwrite=False).name == "p-a-b-02.xlsx"
	assert get_unique_filename(tmp_path, "P:A<B", overwrite=True) == first


def test_find_spec_files(tmp_path):
	(tmp_path / "nested").mkdir()
	for name in ("b.json", "a.json", "nested/c.json", "notes.txt"):
		(tmp_path / name).write_text("{}")
	assert [path.relative_to(tmp_path).as_posix() for path in find_spec_files(tmp_path)] == ["a.json", "b.json", "nested/c.json"]


def test_print_error_shows_details():
	with console.capture() as captured:
		print_error(ScaleTooLarge("Масштаб больше диаметра", scale=2))
	text = captured.get()
	assert "ScaleTooLarge" in text
	assert "scale" in text

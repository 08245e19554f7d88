import json
from fractions import Fraction

import pytest

from app.core.errors import Overpacked, ParseError
from app.core.examples import DOCUMENTS
from app.core.sequences import BlockRule, FormulaRule
from app.services.spec_loader import load_spec, load_specs, parse_spec_text, spec_file_name, spec_from_dict, spec_schema, to_number


def test_to_number():
	assert to_number("1/3") == Fraction(1, 3)
	assert to_number(2) == 2
	assert isinstance(to_number("3**(-log(3)/log(2))"), float)
	with pytest.raises(ParseError):
		to_number("k+1")


def test_load_all_example_documents(spec_file):
	for key in DOCUMENTS:
		loaded = load_spec(spec_file(key))
		assert loaded.spec.name == DOCUMENTS[key]["name"]
		assert len(loaded.digest) == 64


def test_block_and_formula_rules(pab, ex, exud):
	assert isinstance(pab.spec.branching, BlockRule)
	assert isinstance(ex.spec.ratios, FormulaRule)
	assert exud.spec.c(126) == Fraction(3, 10)


def test_placement_string_is_expanded(cantor):
	assert cantor.document.placement.kind == "endpoints"


def test_bad_json_reports_line():
	with pytest.raises(ParseError) as e:
		parse_spec_text('{"dimension": 1,\n "branching": }', source="broken.json")
	assert e.value.details["line"] == 2


def test_unknown_key_is_rejected():
	with pytest.raises(ParseError) as e:
		spec_from_dict({**DOCUMENTS["cantor"], "colour": "red"})
	assert "colour" in e.value.details["key"]


def test_bad_expression_names_key():
	document = {**DOCUMENTS["ex"], "ratios": {"kind": "formula", "expr": "(k+1)/(2*(q+2))"}}
	with pytest.raises(ParseError) as e:
		spec_from_dict(document)
	assert e.value.details["key"] == "ratios"


def test_invalid_spec_carries_file_name(spec_file):
	path = spec_file("bad", {**DOCUMENTS["example2_b"], "branching": {"kind": "constant", "value": 6}})
	with pytest.raises(Overpacked) as e:
		load_specs([path])
	assert e.value.details["file"] == "bad.json"


def test_missing_file(tmp_path):
	with pytest.raises(ParseError):
		load_spec(tmp_path / "missing.json")


def test_digest_follows_file_bytes(spec_file, tmp_path):
	first = load_spec(spec_file("cantor"))
	path = tmp_path / "pretty.json"
	path.write_text(json.dumps(DOCUMENTS["cantor"], indent=4), encoding="utf-8")
	assert load_spec(path).digest != first.digest
	assert load_spec(spec_file("cantor")).digest == first.digest


def test_schema_and_file_names(pab):
	schema = spec_schema()
	assert "branching" in schema["properties"]
	assert spec_file_name(pab.document) == "p-a-b.json"

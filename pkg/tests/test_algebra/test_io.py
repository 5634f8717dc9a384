"""
Tests for JSON spec parsing and writing.
"""

import json

import pytest
from src.algebra.io import dump_spec, load_spec, parse_spec, spec_to_context
from src.utils.exceptions import SpecParseError
from src.utils.scalars import max_abs

SCALAR_SPEC = {
    'name': 'sc',
    'dim': 1,
    'mul': [[['1']]],
    'star': [['1']],
    'unit': ['1'],
    'phi': ['1'],
    'gamma': [['1/2']],
    'lambda': [[['1']]],
    'lambda_kind': 'left-multiplier',
}


class TestParseSpec:
    """Test parse_spec and spec_to_context."""

    @pytest.mark.unit
    def test_tensor_form(self):
        """Test the full tensor form."""
        ctx = parse_spec(json.dumps(SCALAR_SPEC))

        assert ctx.name == 'sc'
        assert ctx.is_left_multiplier()
        assert str(ctx.gamma[0, 0]) == '1/2'

    @pytest.mark.unit
    def test_example_reference(self):
        """Test {"example": name, "params": ...} specs."""
        ctx = spec_to_context({'example': 'bozejko', 'params': {'eta': '1/4', 'lam': 0}})

        assert ctx.name == 'bozejko'

    @pytest.mark.unit
    def test_float_mode(self):
        """Test float parsing."""
        ctx = parse_spec(json.dumps(SCALAR_SPEC), exact=False)

        assert ctx.gamma[0, 0] == 0.5

    @pytest.mark.validation
    def test_malformed_json_location(self):
        """Test malformed JSON reports line and column."""
        with pytest.raises(SpecParseError) as info:
            parse_spec('{\n  "dim": 1,\n  "mul": [[[1]]\n}')

        assert info.value.line == 4
        assert info.value.column > 0

    @pytest.mark.validation
    def test_missing_fields(self):
        """Test missing fields are named."""
        spec = dict(SCALAR_SPEC)
        del spec['phi']
        with pytest.raises(SpecParseError, match="phi"):
            spec_to_context(spec)

    @pytest.mark.validation
    def test_invalid_lambda_kind(self):
        """Test lambda_kind is checked."""
        with pytest.raises(SpecParseError, match="lambda_kind"):
            spec_to_context(dict(SCALAR_SPEC, lambda_kind='right-multiplier'))

    @pytest.mark.validation
    def test_not_an_object(self):
        """Test a JSON list is rejected."""
        with pytest.raises(SpecParseError, match="object"):
            parse_spec('[1, 2]')


class TestSpecFiles:
    """Test load_spec and dump_spec."""

    @pytest.mark.unit
    def test_dump_and_load(self, tmp_path, lenczewski_ctx):
        """Test a written context reads back with the same tensors."""
        path = tmp_path / 'lenczewski.json'
        dump_spec(lenczewski_ctx, path)
        loaded = load_spec(path)

        assert loaded.dim == lenczewski_ctx.dim
        assert max_abs(loaded.gamma - lenczewski_ctx.gamma) == 0.0
        assert max_abs(loaded.lam - lenczewski_ctx.lam) == 0.0

    @pytest.mark.validation
    def test_missing_file(self, tmp_path):
        """Test a missing file raises SpecParseError."""
        with pytest.raises(SpecParseError, match="not found"):
            load_spec(tmp_path / 'absent.json')

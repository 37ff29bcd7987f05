"""The hex tuple literal grammar."""

import pytest

from biproj.biprojective import kappa
from biproj.gf2l import FieldSpec, field
from biproj.literals import LiteralError, format_function, format_poly, parse_function, parse_matrix, parse_poly


def test_parse_poly():
    f = parse_poly("(1,0,a,F)_4@4")
    assert f.coeffs == (1, 0, 10, 15)
    assert f.q == 4 and f.field.l == 4
    assert format_poly(f) == "(1,0,a,f)_4@4"


def test_parse_function_roundtrip():
    K = kappa()
    text = format_function(K)
    assert text == "((0,0,1,0),(1,1,0,2))_2@3"
    assert parse_function(text) == K
    assert parse_function("  " + text + "\n") == K


def test_custom_field():
    F = FieldSpec(3, 0xd)
    f = parse_poly("(1,0,0,3)_2@3", F)
    assert f.field == F
    with pytest.raises(LiteralError):
        parse_poly("(1,0,0,3)_2@4", F)


@pytest.mark.parametrize("text,pos", [
    ("(1,0,0)_2@3", 6),
    ("(1,0,0,9)_2@3", 7),
    ("(1,0,0,1)_3@3", 10),
    ("(1,0,0,1)_8@3", 10),
    ("(1,0,0,1)_2@3x", 13),
    ("(1,0,0,g)_2@3", 7),
    ("1,0,0,1)_2@3", 0),
    ("(1,0,0,1)2@3", 9),
])
def test_errors_report_position(text, pos):
    with pytest.raises(LiteralError) as exc:
        parse_poly(text)
    assert exc.value.pos == pos
    assert "^" in str(exc.value)


def test_function_errors():
    with pytest.raises(LiteralError):
        parse_function("((0,0,1,0))_2@3")
    with pytest.raises(LiteralError):
        parse_function("((0,0,1,0),(1,1,0,2)_2@3")
    with pytest.raises(ValueError):
        parse_function("")


def test_parse_matrix():
    F = field(3)
    m = parse_matrix(["1", "2", "0", "3"], F)
    assert m.entries == (1, 2, 0, 3)
    assert parse_matrix(m.to_list(), F) == m
    with pytest.raises(ValueError):
        parse_matrix(["1", "1", "1", "1"], F)
    with pytest.raises(ValueError):
        parse_matrix(["1", "2"], F)
    with pytest.raises(ValueError):
        parse_matrix(["1", "0", "0", "9"], F)

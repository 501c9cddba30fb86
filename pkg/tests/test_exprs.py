from __future__ import annotations

from fractions import Fraction

import pytest

from pautomata import ExpressionError, Poly, parse_poly, parse_term
from pautomata.terms import (
    Prod,
    Scale,
    Sum,
    Var,
    ZERO,
    from_poly,
    normalize,
    to_text,
)
from helpers import random_term


def test_poly_basics():
    assert parse_poly("x^2 - y^2") == parse_poly("(x+y)*(x-y)")
    assert parse_poly("2/3*x + 1/3*x") == parse_poly("x")
    assert parse_poly("-x - -x") == Poly.zero()
    assert parse_poly("7") == Poly.const(7)
    assert parse_poly("x^3") == parse_poly("x*x*x")


def test_poly_whitespace_and_parens():
    assert parse_poly(" ( x + y ) * z ") == parse_poly("x*z + y*z")


def test_juxtaposition_is_an_error():
    with pytest.raises(ExpressionError) as err:
        parse_poly("2x")
    assert err.value.position == 1


def test_bad_rational():
    with pytest.raises(ExpressionError):
        parse_poly("1/0")
    with pytest.raises(ExpressionError):
        parse_poly("2/")


def test_caret_needs_identifier_base():
    with pytest.raises(ExpressionError):
        parse_poly("2^3")
    with pytest.raises(ExpressionError):
        parse_poly("(x+y)^2")
    with pytest.raises(ExpressionError):
        parse_poly("x^0")


def test_unexpected_character_position():
    with pytest.raises(ExpressionError) as err:
        parse_poly("x + $")
    assert err.value.position == 4


def test_term_hadamard_shape():
    assert parse_term("xd*yd") == Prod(Var("xd"), Var("yd"))


def test_term_infiltration_shape():
    expected = Sum(
        Sum(Prod(Var("xd"), Var("y")), Prod(Var("x"), Var("yd"))),
        Prod(Var("xd"), Var("yd")),
    )
    assert parse_term("xd*y + x*yd + xd*yd") == expected


def test_term_zero():
    assert parse_term("0") == ZERO
    assert parse_term("0 + x") == Sum(ZERO, Var("x"))
    # the literal 0 is the zero term, so this is a genuine product node
    assert parse_term("0*y") == Prod(ZERO, Var("y"))
    assert to_text(Scale(Fraction(0), Var("y"))) == "0"


def test_term_scalar_folding():
    assert parse_term("2*3*x") == Scale(Fraction(6), Var("x"))
    assert parse_term("x*2*y") == Prod(Scale(Fraction(2), Var("x")), Var("y"))
    assert parse_term("-x") == Scale(Fraction(-1), Var("x"))
    assert parse_term("x - y") == Sum(Var("x"), Scale(Fraction(-1), Var("y")))


def test_term_keeps_structure():
    assert parse_term("x*yd + yd*x") == Sum(
        Prod(Var("x"), Var("yd")), Prod(Var("yd"), Var("x"))
    )
    assert parse_term("x*(y*z)") == Prod(Var("x"), Prod(Var("y"), Var("z")))
    assert parse_term("x*y*z") == Prod(Prod(Var("x"), Var("y")), Var("z"))


def test_term_rejects_bare_constants():
    with pytest.raises(ExpressionError):
        parse_term("2")
    with pytest.raises(ExpressionError):
        parse_term("x + 3")


def test_term_text_round_trip(rng):
    for _ in range(200):
        t = random_term(rng, ("x", "y", "zd"), depth=4)
        assert parse_term(to_text(t)) == t


def test_normalize_collapses():
    assert normalize(parse_term("x*yd + yd*x")) == parse_poly("2*x*yd")
    assert normalize(parse_term("(x + xd)*y - xd*y")) == parse_poly("x*y")
    assert normalize(parse_term("xd*y + x*yd")) == parse_poly("xd*y + x*yd")


def test_from_poly_inverts_normalize(rng):
    from helpers import random_poly0

    for _ in range(50):
        p = random_poly0(rng, ("x", "y", "z"))
        assert normalize(from_poly(p)) == p


def test_term_size():
    t = parse_term("2*x + y*(x + y)")
    # Scale(2,x)=2 nodes, Var y=1, Sum(x,y)=3, Prod=5, Sum root=8
    assert t.size == 8

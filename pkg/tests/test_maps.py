from fractions import Fraction

import pytest

from jaclab.algebra import MultiPoly, RatFunc
from jaclab.corpus import corpus_list
from jaclab.maps import (
    MapParseError,
    RatMap,
    SingularBase,
    Status,
    compose,
    composition_equals,
    everywhere_defined_verdict,
    jacobian_determinant,
    jacobian_matrix,
    keller_check,
    leading_principal_minors,
    lift_plus,
    nonsingular_verdict,
    nowhere_vanishing_verdict,
    parse_map,
    serialize,
)


def test_parse_with_comments_and_fractions():
    F = parse_map("# comment\nn=2\n\nF1 = (x1 + 1/2)^2  # trailing\nF2 = x2/(1 + x1^2)\n")
    assert F.n == 2
    assert F.evaluate((1, 2)) == (Fraction(9, 4), Fraction(1))
    assert not F.is_polynomial()


@pytest.mark.parametrize("text, code, line, column", [
    ("n=2\nF1 = x1 +* x2\nF2 = x2\n", "SyntaxError", 2, 10),
    ("n=2\nF1 = x3\nF2 = x2\n", "UnknownVariable", 2, 6),
    ("n=2\nF1 = x1\n", "DimensionMismatch", 2, 1),
    ("n=1\nF1 = 1/(x1 - x1)\n", "ZeroDenominator", 2, 7),
    ("n=1\nF1 = x1^2^3\n", "SyntaxError", 2, 10),
    ("F1 = x1\n", "SyntaxError", 1, 1),
    ("", "SyntaxError", 1, 1),
])
def test_parse_errors_carry_positions(text, code, line, column):
    with pytest.raises(MapParseError) as info:
        parse_map(text)
    assert (info.value.code, info.value.line, info.value.column) == (code, line, column)


def test_serialize_round_trip():
    for entry in corpus_list():
        F = entry.load()
        G = parse_map(serialize(F))
        assert G.components == F.components
        assert G.certificates == F.certificates


def test_certificate_lines():
    F = parse_map("n=1\nF1 = x1 + x1^3\ncertificate jac = SOS(x1) + 1/3\n")
    (cert,) = F.certificate_for("jac")
    assert cert.constant == Fraction(1, 3)
    with pytest.raises(MapParseError):
        parse_map("n=1\nF1 = x1\ncertificate jac = SOS(1/x1)\n")


def test_jacobian_and_minors():
    F = parse_map("n=2\nF1 = x1 + x2^3\nF2 = x2\n")
    assert keller_check(F) == (True, Fraction(1))
    J = jacobian_matrix(F)
    assert J[0][1] == RatFunc.from_poly(3 * MultiPoly.var(2, 1) ** 2)
    assert [m.constant_value() for m in leading_principal_minors(F)] == [1, 1]
    G = parse_map("n=1\nF1 = x1 + x1^3\n")
    assert keller_check(G) == (False, None)
    assert jacobian_determinant(G) == RatFunc.from_poly(1 + 3 * MultiPoly.var(1, 0) ** 2)


def test_nonsingular_verdicts():
    assert nonsingular_verdict(parse_map("n=1\nF1 = x1 + x1^3\n")).status is Status.PROVED
    v = nonsingular_verdict(parse_map("n=1\nF1 = x1^3\n"))
    assert v.status is Status.REFUTED and v.witness.point == (0,)
    bump = nonsingular_verdict(parse_map("n=1\nF1 = 1/(1 + x1^2)\n"))
    assert bump.status is Status.REFUTED


def test_everywhere_defined():
    ok = everywhere_defined_verdict(parse_map("n=2\nF1 = x1 + 1/(1 + x2^2)\nF2 = x2\n"))
    assert ok.status is Status.PROVED
    bad = everywhere_defined_verdict(parse_map("n=2\nF1 = x1/(x1^2 + x2^2 - 1)\nF2 = x2\n"))
    assert bad.status is Status.REFUTED


def test_nowhere_vanishing_unknown_is_honest():
    # positive but not a sum of squares: the toolkit must not claim a proof
    x, y = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    motzkin = x ** 4 * y ** 2 + x ** 2 * y ** 4 - 3 * x ** 2 * y ** 2 + 2
    v = nowhere_vanishing_verdict(RatFunc.from_poly(motzkin))
    assert v.status in (Status.PROVED, Status.UNKNOWN)
    assert v.status is not Status.REFUTED


def test_lift_plus():
    F = parse_map("n=1\nF1 = x1 + x1^3\n")
    L = lift_plus(F)
    assert L.n == 2
    assert jacobian_determinant(L) == 1
    with pytest.raises(SingularBase):
        lift_plus(parse_map("n=1\nF1 = x1^2\n"))


def test_composition():
    F = parse_map("n=2\nF1 = x1 + x2^2\nF2 = x2\n")
    G = parse_map("n=2\nF1 = x1 - x2^2\nF2 = x2\n")
    assert compose(F, G).components == RatMap.identity(2).components
    assert composition_equals(F, G, RatMap.identity(2))
    H = parse_map("n=2\nF1 = 1/(1 + x1^2)\nF2 = x2\n")
    notes = compose(H, F).notes
    assert any("outer denominators" in n for n in notes)

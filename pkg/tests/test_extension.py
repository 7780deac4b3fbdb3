import random
from fractions import Fraction

import pytest
import sympy

import oracles
from jaclab.algebra import AlgebraError, MultiPoly, RatFunc, substitute_ratfunc
from jaclab.extension import (
    MoebiusMap,
    NotDominant,
    automorphisms_dim1,
    eliminant_for_form,
    extension_degree,
    galois_check_dim1,
    is_group,
    minpoly_annihilation_check,
)
from jaclab.maps import RatMap, parse_map

X1 = MultiPoly.var(1, 0)


def _random_ratfunc(rng):
    num = MultiPoly.from_univariate(1, 0, [rng.randint(-5, 5) for _ in range(rng.randint(1, 4))] + [1])
    den = MultiPoly.from_univariate(1, 0, [rng.randint(-5, 5) for _ in range(rng.randint(0, 3))] + [1])
    return RatMap(1, (RatFunc(num, den),))


def test_dim1_degree_is_the_larger_degree():
    # Lueroth: [R(x) : R(f)] = max(deg num, deg den) for reduced f = num/den
    rng = random.Random(11)
    for _ in range(30):
        F = _random_ratfunc(rng)
        c = F.components[0]
        if c.is_constant():
            continue
        rep = extension_degree(F, seed=rng.randint(0, 99))
        assert rep.degree == max(c.num.degree(), c.den.degree()) == rep.closed_form


def test_dim1_degree_matches_complex_root_count():
    for coeffs, d in (([0, 1, 0, 1], 3), ([0, 0, 0, 0, 1], 4), ([0, -1, 0, 1], 3)):
        F = RatMap(1, (RatFunc.from_poly(MultiPoly.from_univariate(1, 0, coeffs)),))
        shifted = list(coeffs)
        shifted[0] -= 1.7
        assert extension_degree(F).degree == oracles.distinct_complex_roots(shifted) == d


def _complex_solutions(exprs, target):
    x1, x2 = sympy.symbols("x1 x2")
    eqs = [sympy.numer(sympy.together(e - t)) for e, t in zip(exprs, target)]
    sols = sympy.solve_poly_system(eqs, x1, x2)
    dens = [sympy.denom(sympy.together(e)) for e in exprs]
    return [s for s in sols if all(sympy.N(d.subs({x1: s[0], x2: s[1]})) != 0 for d in dens)]


@pytest.mark.parametrize("texts, expected", [
    (("x1^2 - x2^2", "2*x1*x2"), 4),
    (("x1 + x2^3", "x2"), 1),
    (("x1^2", "x2 + x1"), 2),
    (("x1 + 1/(1 + x2^2)", "x2"), 1),
])
def test_dim2_degree_matches_generic_solution_count(texts, expected):
    F = parse_map("n=2\n" + "".join(f"F{k} = {t}\n" for k, t in enumerate(texts, 1)))
    x1, x2 = sympy.symbols("x1 x2")
    exprs = [sympy.sympify(t.replace("^", "**"), locals={"x1": x1, "x2": x2}) for t in texts]
    count = len(_complex_solutions(exprs, (sympy.Rational(7, 3), sympy.Rational(-5, 2))))
    assert extension_degree(F).degree == count == expected


def test_vitushkin_degree_two():
    F = parse_map("n=2\nF1 = x1^2*x2^6 + 2*x1*x2^2\nF2 = x1*x2^3 + 1/x2\n")
    sols = oracles.vitushkin_solutions(2.3, -1.7)
    for x, y in sols:
        assert abs(x * x * y ** 6 + 2 * x * y * y - 2.3) < 1e-9
        assert abs(x * y ** 3 + 1 / y + 1.7) < 1e-9
    assert extension_degree(F).degree == len(sols) == 2


def test_degree_invariant_under_linear_changes():
    base = parse_map("n=2\nF1 = x1^2\nF2 = x2 + x1\n")
    rng = random.Random(2)
    for _ in range(4):
        a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
        if a * d - b * c == 0:
            continue
        x1, x2 = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
        inner = {0: x1 * a + x2 * b, 1: x1 * c + x2 * d}
        comps = [substitute_ratfunc(f, inner, 2) for f in base.components]
        F = RatMap(2, (comps[0] + comps[1] * 2, comps[1] - comps[0]))
        assert extension_degree(F, seed=3).degree == 2


def test_minpoly_annihilates():
    F = parse_map("n=2\nF1 = x1^2\nF2 = x2 + x1\n")
    rep = extension_degree(F)
    assert minpoly_annihilation_check(F, rep)
    assert minpoly_annihilation_check(F, rep, symbolic_limit=0)
    assert rep.minpoly.degree() == 2


def test_not_dominant_and_dimension_limits():
    with pytest.raises(NotDominant):
        extension_degree(parse_map("n=2\nF1 = x1 + x2\nF2 = 2*x1 + 2*x2\n"))
    with pytest.raises(AlgebraError):
        extension_degree(parse_map("n=3\nF1 = x1\nF2 = x2\nF3 = x3\n"))


def test_moebius_algebra():
    g = MoebiusMap.make(2, 1, 1, 1)
    assert g.compose(g.inverse()) == MoebiusMap.identity()
    assert g(Fraction(1)) == Fraction(3, 2)
    assert MoebiusMap.make(2, 0, 0, 2) == MoebiusMap.identity()
    with pytest.raises(AlgebraError):
        MoebiusMap.make(1, 2, 2, 4)


def test_automorphism_groups():
    F = parse_map("n=1\nF1 = x1^2 + 1/x1^2\n")
    auts = automorphisms_dim1(F)
    assert len(auts) == 4 and is_group(auts)
    assert galois_check_dim1(F)
    inv = parse_map("n=1\nF1 = x1 + 1/x1\n")
    assert set(automorphisms_dim1(inv)) == {MoebiusMap.identity(), MoebiusMap.make(0, 1, 1, 0)}
    for g in auts:
        f = F.components[0]
        assert f.evaluate([g(Fraction(3))]) == f.evaluate([Fraction(3)])


def test_eliminant_for_form_is_linear_for_birational_maps():
    F = parse_map("n=2\nF1 = x1 + x2^3\nF2 = x2\n")
    R = eliminant_for_form(F, (1, 1))
    assert R.degree_in(0) == 1

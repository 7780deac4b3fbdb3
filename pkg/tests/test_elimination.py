import random
from fractions import Fraction

import pytest
import sympy

from jaclab.algebra import MultiPoly, UniPoly
from jaclab.elimination import (
    DegenerateSystem,
    PlaneEliminator,
    charpoly,
    nf_inverse,
    shear,
    solve_plane_system,
)

X, Y = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
SX, SY = sympy.symbols("x1 x2")


def test_rational_intersections():
    res = solve_plane_system(X * X + Y * Y - 25, X + Y - 7)
    pts = sorted(tuple(p.coordinate(i) for i in range(2)) for p in res.points)
    assert pts == [(3, 4), (4, 3)]


def test_irrational_intersections():
    res = solve_plane_system(X * X + Y * Y - 1, X - Y)
    assert len(res.points) == 2
    for p in res.points:
        a, b = p.approx()
        assert abs(a - b) < 1e-12 and abs(abs(a) - 2 ** -0.5) < 1e-12
        assert p.sign_of(X * X + Y * Y - 1) == 0
        assert p.sign_of(X * X - Fraction(1, 4)) == 1


def test_tangency_counts_once():
    res = solve_plane_system(X * X + Y * Y - 1, Y - 1)
    assert [p.coordinate(0) for p in res.points] == [0]


def test_nonzero_constraints_discard_points():
    res = solve_plane_system(X * X - 1, Y - X, nonzero=[X - 1])
    assert len(res.points) == 1
    assert res.discarded == 1


def test_common_factor_is_degenerate():
    with pytest.raises(DegenerateSystem):
        solve_plane_system(X * Y, X * (Y + 1))


def test_shear_is_invertible_change_of_coordinates():
    p = X * X * Y + 3 * Y - 1
    q = shear(p, (2, 3))
    # q(T, w) = p((T - 3w)/2, w), so q(2 x1 + 3 x2, x2) = p(x1, x2)
    for pt in [(Fraction(1), Fraction(2)), (Fraction(-3, 4), Fraction(5))]:
        a, b = pt
        assert q.evaluate([2 * a + 3 * b, b]) == p.evaluate([a, b])


def test_parametric_family():
    # circle of radius^2 = p intersected with the diagonal
    P = MultiPoly.var(3, 2)
    x3, y3 = MultiPoly.var(3, 0), MultiPoly.var(3, 1)
    elim = PlaneEliminator(x3 * x3 + y3 * y3 - P, x3 - y3)
    assert len(elim.solve((Fraction(2),)).points) == 2
    assert len(elim.solve((Fraction(0),)).points) == 1
    assert len(elim.solve((Fraction(-1),)).points) == 0


def test_number_field_helpers():
    m = UniPoly([-2, 0, 1])  # t^2 = 2
    inv = nf_inverse(UniPoly([1, 1]), m)  # 1/(1 + t) = t - 1
    assert (inv * UniPoly([1, 1])) % m == UniPoly([1])
    assert charpoly(UniPoly([0, 1]), m) == m


def _random_quadratic(rng):
    mons = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    coeffs = {m: rng.randint(-5, 5) for m in mons}
    poly = MultiPoly(2, {m: c for m, c in coeffs.items() if c})
    expr = sum(c * SX ** m[0] * SY ** m[1] for m, c in coeffs.items())
    return poly, expr


def test_real_solution_counts_against_sympy():
    rng = random.Random(4)
    for _ in range(8):
        (A, a), (B, b) = _random_quadratic(rng), _random_quadratic(rng)
        sols = sympy.solve_poly_system([a, b], SX, SY)
        ref = sum(1 for s in sols if all(abs(sympy.im(sympy.N(v, 50))) < 1e-30 for v in s))
        assert len(solve_plane_system(A, B).points) == ref

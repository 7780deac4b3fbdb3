from fractions import Fraction

from jaclab.algebra import MultiPoly
from jaclab.positivity import (
    axis_restriction,
    check_certificate,
    falsify,
    gram_certificate,
    halton_points,
    invariant_directions,
    monomial_square_certificate,
    numeric_gram_certificate,
    quadratic_sign_proof,
    search_certificate,
    segment_zero,
    small_lattice,
    strictness,
)

X, Y = MultiPoly.var(2, 0), MultiPoly.var(2, 1)


def test_supplied_certificate_checked_by_expansion():
    g = (X * Y - 1) ** 2 + X ** 2 + 3
    cert = check_certificate(g, [X * Y - 1, X], 3)
    assert cert is not None and cert.sign == 1
    assert cert.expand() == g
    assert check_certificate(g, [X * Y - 1, X], 2) is None
    neg = check_certificate(-g * 2, [X * Y - 1, X], 3)
    assert neg.sign == -1 and neg.scale == 2


def test_strictness_without_constant():
    # t and x cannot vanish together since t = xy - 1 = -1 on x = 0
    cert = check_certificate((X * Y - 1) ** 2 + X ** 2, [X * Y - 1, X], 0)
    ok, why = strictness(cert)
    assert ok, why
    shared = check_certificate(X ** 2 + (X * Y) ** 2, [X, X * Y], 0)
    assert not strictness(shared)[0]


def test_three_squares_needed_for_strictness():
    # x, x^2 and x2 - 1 vanish together nowhere, though x and x^2 do share a zero
    cert = check_certificate(X ** 2 + X ** 4 + (Y - 1) ** 2 + Y ** 2, [X, X * X, Y - 1, Y], 0)
    assert strictness(cert)[0]


def test_searches():
    assert monomial_square_certificate(X ** 4 + 2 * X ** 2 * Y ** 2 + 1) is not None
    assert monomial_square_certificate(X ** 2 - Y ** 2 + 1) is None
    g = (X ** 2 + Y) ** 2 + 1
    cert = gram_certificate(g)
    assert cert is not None and cert.expand() * cert.scale == g
    assert search_certificate(X ** 2 - 2 * X * Y + 2 * Y ** 2 + 1) is not None


def test_motzkin_has_no_certificate():
    motzkin = X ** 4 * Y ** 2 + X ** 2 * Y ** 4 - 3 * X ** 2 * Y ** 2 + 1
    assert numeric_gram_certificate(motzkin) is None
    assert search_certificate(motzkin) is None


def test_numeric_gram_is_exact():
    g = (X ** 2 - Y) ** 2 + (Y - 1) ** 2 + Fraction(1, 10)
    cert = numeric_gram_certificate(g)
    assert cert is not None
    assert cert.expand() * cert.scale * cert.sign == g
    assert all(w > 0 for w in cert.weights)


def test_quadratic_discriminant_proof():
    assert quadratic_sign_proof((X - Y ** 2) ** 2 + Y ** 2 + 1)[0] == 1
    assert quadratic_sign_proof(-(X * X * (Y * Y + 1) + X + 1))[0] == -1
    assert quadratic_sign_proof(X * X - Y) is None


def test_invariant_directions():
    g = (X - Y) ** 4 + (X - Y) + 3
    (v,) = invariant_directions(g)
    assert v[0] == v[1]
    k, u = axis_restriction(g)
    assert u.degree() == 4
    assert axis_restriction(X * X + Y * Y) is None


def test_sample_points_are_deterministic():
    assert halton_points(2, 10, 5) == halton_points(2, 10, 5)
    pts = halton_points(2, 200, 5)
    assert all(-5 <= c <= 5 for p in pts for c in p)
    assert (Fraction(0), Fraction(0)) in small_lattice(2)


def test_falsify_finds_exact_zero():
    out = falsify(X * X + Y * Y - 2, None, small_lattice(2))
    assert out.witness is not None
    assert (X * X + Y * Y - 2).evaluate(out.witness.point) == 0


def test_segment_zero_is_certified():
    g = X * X + Y * Y - 3
    w = segment_zero(g, None, (Fraction(0), Fraction(0)), (Fraction(2), Fraction(0)))
    assert w is not None
    # the zero sits at s = sqrt(3)/2 on the segment
    box = w.parameter.refine(Fraction(1, 10 ** 12))
    assert box.lo ** 2 * 4 < 3 < box.hi ** 2 * 4

"""Acceptance criteria 1-10, one test per criterion.

The conftest prints a PASS/FAIL line per criterion in the terminal summary.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

import oracles
from jaclab.algebra import MultiPoly, RatFunc, UniPoly, resultant, univariate_resultant
from jaclab.corpus import corpus_entry, corpus_list
from jaclab.extension import MoebiusMap, automorphisms_dim1, extension_degree, galois_check_dim1
from jaclab.fibers import parity_report, properness_at, scan_fibers, solve_fiber
from jaclab.maps import (
    RatMap,
    Status,
    composition_equals,
    everywhere_defined_verdict,
    jacobian_determinant,
    keller_check,
    lift_plus,
    nonsingular_verdict,
    nowhere_vanishing_verdict,
    parse_map,
)
from jaclab.realroots import count_real_roots
from jaclab.verdict import birational_inverse, invertibility_verdict

X1 = MultiPoly.var(1, 0)
P1, P2 = MultiPoly.var(2, 0), MultiPoly.var(2, 1)


def _one(text):
    return parse_map(text)


# ---------------------------------------------------------------------------


def test_criterion_01_extension_degrees(pinchuk):
    start = time.perf_counter()
    assert extension_degree(_one("n=1\nF1 = x1\n")).degree == 1
    assert extension_degree(_one("n=2\nF1 = x1\nF2 = x2\n")).degree == 1
    cubic = extension_degree(_one("n=1\nF1 = x1 + x1^3\n"))
    # oracle: a generic target has as many complex preimages as the degree
    counts = {oracles.distinct_complex_roots([-y, 1, 0, 1]) for y in (0.37, -2.9, 11.5)}
    assert counts == {3}
    assert cubic.degree == 3
    assert extension_degree(pinchuk).degree == 6
    assert time.perf_counter() - start < 60


def test_criterion_02_parity_with_scans(pinchuk):
    hist = scan_fibers(pinchuk, samples=500, seed=42)
    assert hist.samples >= 500
    assert hist.N_hat == 2
    assert parity_report(6, hist.N_hat)["status"] == "CONSISTENT"
    cubic = _one("n=1\nF1 = x1 + x1^3\n")
    h1 = scan_fibers(cubic, samples=500, seed=42)
    assert h1.N_hat == 1
    assert parity_report(extension_degree(cubic).degree, h1.N_hat)["status"] == "CONSISTENT"


def _monotone_rational(rng):
    """Odd polynomial with positive coefficients plus a bump c/(1+q^2) that cannot cancel its slope.

    p' >= a1 and |d/dx c/(1+q^2)| <= |c| |b| 3 sqrt(3)/8 < 0.65 |c| |b| for q = b x + e,
    so |c| <= 0.9 a1 / b keeps the total derivative positive.
    """
    a1 = Fraction(rng.randint(1, 5))
    p = X1 * a1
    for k in range(3, 2 * rng.randint(1, 3) + 2, 2):
        p = p + X1 ** k * rng.randint(0, 4)
    b, e = rng.randint(1, 4), rng.randint(-3, 3)
    q = X1 * b + e
    c = Fraction(rng.randint(1, 9), 10) * a1 / b * rng.choice([1, -1])
    return RatMap(1, (RatFunc.from_poly(p) + RatFunc(MultiPoly.const(1, c), q * q + 1),))


def test_criterion_03_random_monotone_maps_have_odd_degree():
    start = time.perf_counter()
    rng = random.Random(3)
    degrees = []
    for i in range(100):
        F = _monotone_rational(rng)
        assert everywhere_defined_verdict(F).status is Status.PROVED
        assert nonsingular_verdict(F).status is Status.PROVED
        degrees.append(extension_degree(F, seed=i, with_minpoly=False).degree)
    assert all(d % 2 == 1 for d in degrees), degrees
    assert time.perf_counter() - start < 120


def test_criterion_04_lift_has_unit_jacobian():
    lifted = []
    for entry in corpus_list():
        F = entry.load()
        if nonsingular_verdict(F).status is Status.REFUTED:
            continue
        G = lift_plus(F)
        assert G.n == F.n + 1
        assert jacobian_determinant(G) == 1
        lifted.append(entry.name)
    assert "pinchuk" in lifted


def test_criterion_05_vitushkin():
    F = corpus_entry("vitushkin").load()
    assert keller_check(F) == (True, Fraction(-2))
    rng = np.random.default_rng(5)
    fn = lambda x: (x[0] ** 2 * x[1] ** 6 + 2 * x[0] * x[1] ** 2, x[0] * x[1] ** 3 + 1 / x[1])  # noqa: E731
    for _ in range(5):
        assert oracles.numeric_jacobian(fn, rng.uniform(0.5, 2, 2)) == pytest.approx(-2, abs=1e-4)
    rep = solve_fiber(F, (3, 2))
    pts = sorted(p.coords for p in rep.points)
    assert pts == [(Fraction(-3), Fraction(-1)), (Fraction(1), Fraction(1))]
    assert F.evaluate((1, 1)) == F.evaluate((-3, -1)) == (3, 2)
    v = everywhere_defined_verdict(F)
    assert v.status is Status.REFUTED
    assert v.witness.point[1] == 0


def _random_birational(rng):
    maps = []
    for _ in range(rng.randint(2, 3)):
        kind = rng.choice(["lower", "upper", "shear"])
        if kind == "lower":
            a = sum((P2 ** k * rng.randint(-3, 3) for k in range(1, rng.randint(1, 3) + 1)), MultiPoly.zero(2))
            maps.append(RatMap.from_components([P1 + a, P2]))
        elif kind == "upper":
            b = sum((P1 ** k * rng.randint(-3, 3) for k in range(1, rng.randint(1, 2) + 1)), MultiPoly.zero(2))
            maps.append(RatMap.from_components([P1, P2 + b]))
        else:
            q = P2 * rng.randint(1, 3) + rng.randint(-2, 2)
            bump = RatFunc(MultiPoly.const(2, rng.randint(1, 5)), q * q + 1)
            maps.append(RatMap(2, (RatFunc.from_poly(P1) + bump, RatFunc.from_poly(P2))))
    F = maps[0]
    for G in maps[1:]:
        F = RatMap(2, tuple(_compose_component(c, G) for c in F.components))
    return F


def _compose_component(c, G):
    from jaclab.algebra import substitute_ratfunc

    return substitute_ratfunc(c, dict(enumerate(G.components)), 2)


def test_criterion_06_birational_inverses():
    rng = random.Random(7)
    identity = RatMap.identity(2)
    for _ in range(20):
        F = _random_birational(rng)
        assert extension_degree(F, with_minpoly=False).degree == 1
        inv = birational_inverse(F)
        G = inv.inverse
        assert composition_equals(F, G, identity)
        assert composition_equals(G, F, identity)
        for c in G.components:
            if not c.den.is_constant():
                assert nowhere_vanishing_verdict(RatFunc.from_poly(c.den)).status is Status.PROVED
        assert all(v.status is Status.PROVED for _, v in inv.denominator_verdicts)


def test_criterion_07_properness_of_the_bump():
    F = corpus_entry("bump").load()
    at0 = properness_at(F, (0,))
    assert at0.status == "NOT_PROPER"
    assert at0.escape
    for y in (Fraction(1, 2), Fraction(2)):
        rep = properness_at(F, (y,))
        assert rep.status == "PROPER"
        assert rep.certificate


def test_criterion_08_automorphisms_and_galois():
    sq = _one("n=1\nF1 = x1^2\n")
    assert set(automorphisms_dim1(sq)) == {MoebiusMap.identity(), MoebiusMap.make(-1, 0, 0, 1)}
    assert galois_check_dim1(sq)
    cubic = _one("n=1\nF1 = x1 + x1^3\n")
    assert automorphisms_dim1(cubic) == [MoebiusMap.identity()]
    assert not galois_check_dim1(cubic)
    assert not galois_check_dim1(_one("n=1\nF1 = x1^3\n"))


def test_criterion_09_verdict_regression(pinchuk, pinchuk_evidence):
    for name in ("identity1", "identity2", "triangular", "rational-shear"):
        assert invertibility_verdict(corpus_entry(name).load(), seed=42).status == "INVERTIBLE", name
    pv = invertibility_verdict(pinchuk, seed=42, evidence=pinchuk_evidence)
    assert pv.status == "NOT_INVERTIBLE"
    rules = {r["rule"] for r in pv.reasons}
    assert {"even extension degree", "counterexample pair"} <= rules
    pair = pinchuk_evidence.counterexample
    assert len(pair.points) == 2
    assert pair.points[0].approx() != pair.points[1].approx()
    sq = invertibility_verdict(corpus_entry("x2").load(), seed=42)
    assert sq.status == "UNKNOWN"
    assert sq.reasons[0]["rule"] == "hypothesis violated"


def _random_int_poly(rng, deg):
    coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [rng.choice([-1, 1]) * rng.randint(1, 9)]
    return coeffs


def test_criterion_10_oracle_equivalences():
    rng = random.Random(10)
    # Sturm counts against derivative-bracketed bisection
    checked = 0
    while checked < 100:
        coeffs = _random_int_poly(rng, rng.randint(1, 8))
        if not oracles.is_squarefree(coeffs):
            continue
        roots = oracles.bisection_roots(coeffs)
        p = UniPoly(coeffs)
        assert count_real_roots(p) == len(roots)
        lo, hi = sorted(Fraction(rng.randint(-60, 60), 7) for _ in range(2))
        assert count_real_roots(p, lo, hi) == sum(1 for r in roots if lo <= r <= hi)
        checked += 1
    # resultants against the root-product formula
    for _ in range(50):
        a = _random_int_poly(rng, rng.randint(1, 6))
        b = _random_int_poly(rng, rng.randint(1, 6))
        exact = univariate_resultant(UniPoly(a), UniPoly(b))
        ref = oracles.numeric_resultant(a, b)
        assert float(exact) == pytest.approx(ref, rel=1e-6, abs=1e-6)
        # the bivariate resultant specializes to the same number
        A = MultiPoly.from_univariate(2, 0, a) + P2 * rng.randint(-2, 2)
        B = MultiPoly.from_univariate(2, 0, b) * (P2 + 1)
        y = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        R = resultant(A, B, 0).partial_evaluate({1: y})
        Ay = A.partial_evaluate({1: y}).to_univariate(0)
        By = B.partial_evaluate({1: y}).to_univariate(0)
        assert R.constant_value() == univariate_resultant(Ay, By)
    # fiber counts of triangular maps against back substitution
    for _ in range(20):
        u = _random_int_poly(rng, rng.randint(1, 3))
        v = [0] + [rng.randint(-3, 3) for _ in range(rng.randint(1, 2))]
        w = _random_int_poly(rng, rng.randint(1, 3))
        F = RatMap.from_components([
            MultiPoly.from_univariate(2, 0, u) + MultiPoly.from_univariate(2, 1, v),
            MultiPoly.from_univariate(2, 1, w),
        ])
        for _ in range(3):
            y = (Fraction(rng.randint(-40, 40), 3), Fraction(rng.randint(-40, 40), 3))
            assert solve_fiber(F, y).count == oracles.triangular_fiber_count(u, v, w, *y)

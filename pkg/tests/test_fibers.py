from fractions import Fraction

import pytest

import oracles
from jaclab.algebra import AlgebraError
from jaclab.corpus import corpus_entry
from jaclab.fibers import (
    EscapeSchedule,
    FiberSolver,
    asymptotic_samples,
    image_probe,
    parity_report,
    parse_region,
    properness_at,
    scan_fibers,
    scan_fibers_adaptive,
    solve_fiber,
)
from jaclab.maps import parse_map


def test_dim1_fibers_match_numeric_roots():
    F = parse_map("n=1\nF1 = x1^3 - x1\n")
    for y in (Fraction(0), Fraction(1, 5), Fraction(-3), Fraction(2, 7)):
        rep = solve_fiber(F, (y,))
        assert rep.count == len(oracles.real_roots_float([-float(y), -1, 0, 1]))
    zero = solve_fiber(F, (0,))
    assert sorted(p.coords[0] for p in zero.points) == [-1, 0, 1]


def test_denominator_zeros_are_discarded():
    # x^2/x is x away from 0, so the target 0 has no admissible preimage
    F = parse_map("n=1\nF1 = (x1^2 + x1)/(x1 + 1)\n")
    assert solve_fiber(F, (0,)).count == 1
    G = parse_map("n=2\nF1 = x1*x2\nF2 = x2 + 1/x1\n")
    rep = solve_fiber(G, (1, 2))
    for p in rep.points:
        a, b = p.approx()
        assert abs(a * b - 1) < 1e-9 and abs(b + 1 / a - 2) < 1e-9


def test_fiber_points_are_verified_and_serializable():
    F = corpus_entry("pinchuk").load()
    rep = solve_fiber(F, (0, 0))
    data = rep.to_json()
    assert data["count"] == rep.count and data["verified"]
    for p in rep.points:
        lo_hi = p.enclosure(Fraction(1, 10 ** 8))
        assert all(lo <= hi for lo, hi in lo_hi)


def test_scan_is_deterministic():
    F = parse_map("n=1\nF1 = x1^3 - x1\n")
    a = scan_fibers(F, samples=60, seed=9)
    b = scan_fibers(F, samples=60, seed=9)
    assert a.to_json() == b.to_json()
    assert a.N_hat in (1, 3)


def test_adaptive_scan():
    F = parse_map("n=1\nF1 = x1^3 - x1\n")
    near = scan_fibers_adaptive(F, 3, region=parse_region("-1/4:1/4", 1), samples=40, seed=1)
    assert near.N_hat == 3 and near.region == [(Fraction(-1, 4), Fraction(1, 4))]
    # three-point fibers live in |y| < 0.39; widening never finds them, N_hat stays a lower bound
    far = scan_fibers_adaptive(F, 3, region=parse_region("-400:400", 1), samples=40, seed=1)
    assert far.N_hat == 1 and far.region == [(-25600, 25600)]


def test_parity_report():
    assert parity_report(3, 1)["status"] == "CONSISTENT"
    assert parity_report(3, 2)["status"] == "INCONCLUSIVE"


def test_parse_region():
    assert parse_region(None, 2) == [(-20, 20), (-20, 20)]
    assert parse_region("-1:2", 1) == [(-1, 2)]
    assert parse_region("0:1,-1/2:1/2", 2) == [(0, 1), (Fraction(-1, 2), Fraction(1, 2))]
    with pytest.raises(ValueError):
        parse_region("3:1", 1)


def test_bump_properness_and_limits():
    F = corpus_entry("bump").load()
    assert properness_at(F, (0,)).status == "NOT_PROPER"
    assert properness_at(F, (Fraction(1, 3),)).status == "PROPER"
    assert properness_at(F, (-1,)).status == "PROPER"  # empty fiber far from the limit
    limits = asymptotic_samples(F)
    assert [round(p["point"][0], 6) for p in limits] == [0.0]


def test_escape_schedule_validation():
    F = corpus_entry("bump").load()
    with pytest.raises(ValueError):
        properness_at(F, (0,), EscapeSchedule(stages=2))


def test_pinchuk_properness():
    F = corpus_entry("pinchuk").load()
    assert properness_at(F, (0, 0)).status == "NOT_PROPER"
    limits = asymptotic_samples(F)
    assert any(max(abs(v) for v in p["point"]) < 1e-6 for p in limits)


def test_image_probe_finds_gaps():
    F = parse_map("n=1\nF1 = x1^2\n")
    empty = image_probe(F, parse_region("-2:2", 1), grid=8)
    assert len(empty) == 4  # the negative half-line is missed
    assert all(Fraction(c["center"][0]) < 0 for c in empty)


def test_solver_dimension_guard():
    with pytest.raises(AlgebraError):
        FiberSolver(parse_map("n=3\nF1 = x1\nF2 = x2\nF3 = x3\n"))

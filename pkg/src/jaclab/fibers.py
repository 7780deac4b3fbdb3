"""Exact fibers of plane and line maps, fiber-size scans, parity, properness, asymptotic values."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraError, MultiPoly, UniPoly, format_rational
from .elimination import AlgebraicPoint, DegenerateSystem, PlaneEliminator
from .maps import RatMap
from .realroots import RootBox, isolate_real_roots, refine, sign_at

DegenerateFiber = DegenerateSystem


def _uni(p: MultiPoly) -> UniPoly:
    return p.to_univariate(0) if p.variables() else UniPoly([p.constant_value()] if p else [])


def _check_dim(F: RatMap):
    if F.n > 2:
        raise AlgebraError("UnsupportedDimension", "fibers are solved exactly for n <= 2 only")


# ---------------------------------------------------------------------------
# fiber points


class FiberPoint:
    """A verified fiber point; coordinates are exact rationals or isolating boxes."""

    def __init__(self, coords=None, algebraic: AlgebraicPoint | None = None, certificate: str = "substitution"):
        self._coords = coords
        self._alg = algebraic
        self.certificate = certificate

    @property
    def coords(self) -> tuple[Fraction | RootBox, ...]:
        if self._coords is None:
            self._coords = tuple(self._alg.coordinate(i) for i in range(2))
        return self._coords

    def approx(self) -> tuple[float, ...]:
        if self._alg is not None and self._coords is None:
            return self._alg.approx()
        return tuple(float(c) if isinstance(c, Fraction) else float(refine(c, Fraction(1, 10 ** 18)).midpoint())
                     for c in self.coords)

    def enclosure(self, width=Fraction(1, 10 ** 6)) -> list[tuple[Fraction, Fraction]]:
        if self._alg is not None:
            return self._alg.enclosure(width)
        out = []
        for c in self.coords:
            if isinstance(c, Fraction):
                out.append((c, c))
            else:
                b = refine(c, width)
                out.append((b.lo, b.hi))
        return out

    def norm_squared_bounds(self, width=Fraction(1, 10 ** 6)) -> tuple[Fraction, Fraction]:
        lo = hi = Fraction(0)
        for a, b in self.enclosure(width):
            hi += max(a * a, b * b)
            lo += Fraction(0) if a <= 0 <= b else min(a * a, b * b)
        return lo, hi

    def is_rational_fast(self) -> bool:
        """Rational coordinates already known (never forces an algebraic lift)."""
        return self._coords is not None and all(isinstance(c, Fraction) for c in self._coords)

    def sign_of(self, p: MultiPoly) -> int:
        """Exact sign of a polynomial at the point."""
        if self._alg is not None:
            return self._alg.sign_of(p)
        c = self.coords[0]
        if isinstance(c, Fraction):
            v = p.evaluate([c])
            return (v > 0) - (v < 0)
        return sign_at(_uni(p), c)

    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coords)

    def to_json(self) -> dict:
        coords = []
        for c in self.coords:
            coords.append(format_rational(c) if isinstance(c, Fraction) else c.to_json())
        return {"coords": coords, "approx": list(self.approx()), "certificate": self.certificate}


@dataclass
class FiberReport:
    target: tuple[Fraction, ...]
    points: list[FiberPoint]
    verified: bool = True
    discarded: int = 0

    @property
    def count(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "target": [format_rational(v) for v in self.target],
            "count": self.count,
            "verified": self.verified,
            "discarded_candidates": self.discarded,
            "points": [p.to_json() for p in self.points],
        }


class FiberSolver:
    """Reusable exact fiber solver; the plane eliminator is set up once per map."""

    def __init__(self, F: RatMap, seed: int = 0, max_count: int | None = None):
        _check_dim(F)
        self.F = F
        self.seed = seed
        self.max_count = max_count
        self._plane = None
        if F.n == 2:
            m = 4
            eqs = []
            for i, c in enumerate(F.components):
                num = c.num.embed(m, [0, 1])
                den = c.den.embed(m, [0, 1])
                eqs.append(num - MultiPoly.var(m, 2 + i) * den)
            nonzero = [c.den for c in F.components if not c.den.is_constant()]
            self._plane = PlaneEliminator(eqs[0], eqs[1], nonzero, seed=seed)

    def solve(self, y: Sequence) -> FiberReport:
        y = tuple(Fraction(v) for v in y)
        if len(y) != self.F.n:
            raise AlgebraError("DimensionMismatch", f"target needs {self.F.n} coordinates")
        report = self._solve1(y) if self.F.n == 1 else self._solve2(y)
        if self.max_count is not None and report.count > self.max_count:
            raise AlgebraError("InternalError", f"fiber of size {report.count} exceeds the extension degree")
        return report

    def _solve1(self, y) -> FiberReport:
        c = self.F.components[0]
        num, den = _uni(c.num), _uni(c.den)
        P = num - den * y[0]
        if not P:
            raise DegenerateFiber(c.num - c.den * y[0], "the map is constant")
        points = []
        discarded = 0
        if P.degree() > 0:
            for box in isolate_real_roots(P, Fraction(1, 2)):
                if den.degree() > 0 and sign_at(den, box) == 0:
                    discarded += 1
                    continue
                exact = box.rational_value()
                points.append(FiberPoint((exact if exact is not None else box,)))
        return FiberReport(y, points, True, discarded)

    def _solve2(self, y) -> FiberReport:
        res = self._plane.solve(y)
        points = [FiberPoint(algebraic=p, certificate=p.certificate) for p in res.points]
        return FiberReport(y, points, True, res.discarded)


def solve_fiber(F: RatMap, y: Sequence, seed: int = 0, extension=None) -> FiberReport:
    """All real x with F(x) = y, exactly; denominator zeros and spurious roots removed."""
    cap = extension.degree if extension is not None else None
    return FiberSolver(F, seed, cap).solve(y)


# ---------------------------------------------------------------------------
# scans and parity


@dataclass
class FiberHistogram:
    samples: int
    histogram: dict[int, int]
    witnesses: dict[int, tuple[Fraction, ...]]
    region: list[tuple[Fraction, Fraction]]
    seed: int
    skipped: list[dict] = field(default_factory=list)
    pairs: list[tuple[tuple[Fraction, ...], FiberReport]] = field(default_factory=list, repr=False)

    @property
    def N_hat(self) -> int:
        return max(self.histogram, default=0)

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "N_hat": self.N_hat,
            "witnesses": {str(k): [format_rational(v) for v in y] for k, y in sorted(self.witnesses.items())},
            "region": [[format_rational(a), format_rational(b)] for a, b in self.region],
            "seed": self.seed,
            "skipped": self.skipped,
        }


def parse_region(text: str | None, n: int) -> list[tuple[Fraction, Fraction]]:
    """'-20:20' (every axis) or '-1:2,0:5' (one range per axis)."""
    if not text:
        return [(Fraction(-20), Fraction(20))] * n
    parts = [p.strip() for p in text.split(",")]
    ranges = []
    for p in parts:
        lo, sep, hi = p.rpartition(":")
        if not sep:
            raise AlgebraError("BadRegion", f"cannot read range {p!r}")
        a, b = Fraction(lo), Fraction(hi)
        if a >= b:
            raise AlgebraError("BadRegion", f"empty range {p!r}")
        ranges.append((a, b))
    if len(ranges) == 1:
        ranges *= n
    if len(ranges) != n:
        raise AlgebraError("BadRegion", f"region has {len(ranges)} ranges for dimension {n}")
    return ranges


def _sample_target(rng: random.Random, region) -> tuple[Fraction, ...]:
    out = []
    for lo, hi in region:
        out.append(lo + (hi - lo) * Fraction(rng.randint(0, 10 ** 4), 10 ** 4))
    return tuple(out)


def scan_fibers(F: RatMap, region=None, samples: int = 500, seed: int = 0,
                solver: FiberSolver | None = None, keep_multi: int = 3) -> FiberHistogram:
    """Seeded exact fiber counts at random rational targets in ``region``."""
    _check_dim(F)
    region = list(region) if region is not None else parse_region(None, F.n)
    solver = solver or FiberSolver(F, seed)
    rng = random.Random(seed)
    hist: dict[int, int] = {}
    witnesses: dict[int, tuple[Fraction, ...]] = {}
    skipped = []
    pairs = []
    for k in range(samples):
        y = _sample_target(rng, region)
        try:
            rep = solver.solve(y)
        except DegenerateFiber as exc:
            skipped.append({"index": k, "target": [format_rational(v) for v in y], "reason": exc.code,
                            "factor": str(exc.factor)})
            continue
        hist[rep.count] = hist.get(rep.count, 0) + 1
        witnesses.setdefault(rep.count, y)
        if rep.count >= 2 and len(pairs) < keep_multi:
            pairs.append((y, rep))
    return FiberHistogram(samples, hist, witnesses, region, seed, skipped, pairs)


def scan_fibers_adaptive(F: RatMap, target_N: int, region=None, samples: int = 500, seed: int = 0,
                         widenings: int = 3) -> FiberHistogram:
    """scan_fibers, widening the region by 4x while N_hat stays below ``target_N``."""
    region = list(region) if region is not None else parse_region(None, F.n)
    solver = FiberSolver(F, seed)
    hist = scan_fibers(F, region, samples, seed, solver)
    for _ in range(widenings):
        if hist.N_hat >= target_N:
            break
        region = [(4 * a, 4 * b) for a, b in region]
        hist = scan_fibers(F, region, samples, seed, solver)
    return hist


def parity_report(degree: int, N_hat: int) -> dict:
    """N and d share parity; N_hat only bounds N from below."""
    if N_hat % 2 == degree % 2:
        return {"d": degree, "N_hat": N_hat, "status": "CONSISTENT",
                "note": f"{degree} = {N_hat} (mod 2)"}
    return {"d": degree, "N_hat": N_hat, "status": "INCONCLUSIVE",
            "note": f"parity forces N >= {N_hat + 1}; N_hat is only a lower bound"}


# ---------------------------------------------------------------------------
# properness


@dataclass(frozen=True)
class EscapeSchedule:
    start: Fraction = Fraction(1, 10)  # first target distance
    shrink: int = 100  # distance divides by this per stage (>= 10)
    growth: int = 4  # norm must multiply by at least this per stage
    stages: int = 4  # >= 3

    def to_json(self) -> dict:
        return {"start": format_rational(self.start), "shrink": self.shrink,
                "growth": self.growth, "stages": self.stages}


@dataclass
class PropernessReport:
    target: tuple[Fraction, ...]
    status: str  # PROPER | NOT_PROPER | UNKNOWN
    escape: list[dict] = field(default_factory=list)
    certificate: dict | None = None
    schedule: EscapeSchedule = field(default_factory=EscapeSchedule)

    def to_json(self) -> dict:
        out = {"target": [format_rational(v) for v in self.target], "status": self.status,
               "schedule": self.schedule.to_json()}
        if self.escape:
            out["escape"] = self.escape
        if self.certificate:
            out["certificate"] = self.certificate
        return out


def _directions(n: int) -> list[tuple[int, ...]]:
    if n == 1:
        return [(1,), (-1,)]
    return [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)]


def _escape(solver: FiberSolver, y, schedule: EscapeSchedule) -> list[dict] | None:
    for u in _directions(len(y)):
        stages = []
        prev_hi = None
        ok = True
        for k in range(schedule.stages):
            delta = schedule.start / Fraction(schedule.shrink) ** k
            target = tuple(a + delta * b for a, b in zip(y, u))
            try:
                rep = solver.solve(target)
            except DegenerateFiber:
                ok = False
                break
            if not rep.count:
                ok = False
                break
            bounds = [p.norm_squared_bounds() for p in rep.points]
            j = max(range(len(bounds)), key=lambda i: bounds[i][0])
            lo, hi = bounds[j]
            if prev_hi is not None and lo < schedule.growth ** 2 * prev_hi:
                ok = False
                break
            # the largest point bounds the whole fiber from above for the next comparison
            prev_hi = max(b[1] for b in bounds)
            stages.append({"target": [format_rational(v) for v in target],
                           "distance": format_rational(delta * max(abs(b) for b in u)),
                           "norm_lower_bound": float(lo) ** 0.5,
                           "point": rep.points[j].to_json()})
        if ok and len(stages) >= 3:
            return stages
    return None


def _interval_poly(p: MultiPoly, box) -> tuple[Fraction, Fraction]:
    lo = hi = Fraction(0)
    for e, c in p.items():
        a, b = Fraction(c), Fraction(c)
        for i, k in enumerate(e):
            if k:
                pl, ph = _ipow(box[i], k)
                prods = (a * pl, a * ph, b * pl, b * ph)
                a, b = min(prods), max(prods)
        lo, hi = lo + a, hi + b
    return lo, hi


def _ipow(iv, k):
    a, b = iv
    vals = (a ** k, b ** k)
    if k % 2 == 0 and a <= 0 <= b:
        return Fraction(0), max(vals)
    return min(vals), max(vals)


def _cauchy_over_box(coeffs: list[MultiPoly], box) -> Fraction | None:
    """Uniform root bound for sum c_k(y) T^k over y in box, or None if lc may vanish."""
    lo, hi = _interval_poly(coeffs[-1], box)
    if lo <= 0 <= hi:
        return None
    lc_min = min(abs(lo), abs(hi))
    top = max((max(abs(a), abs(b)) for a, b in (_interval_poly(c, box) for c in coeffs[:-1])),
              default=Fraction(0))
    return 1 + top / lc_min


def _bound_certificate(F: RatMap, y, eliminants=None) -> dict | None:
    radii = [Fraction(1, 4 ** k) for k in range(8)]
    if F.n == 1:
        c = F.components[0]
        Y = MultiPoly.var(2, 1)
        P = c.num.embed(2, [0]) - Y * c.den.embed(2, [0])
        coeffs = [q for q in P.as_univariate(0)]
        for r in radii:
            box = [(Fraction(0), Fraction(0)), (y[0] - r, y[0] + r)]
            B = _cauchy_over_box(coeffs, box)
            if B is not None:
                return {"neighborhood_radius": format_rational(r), "ball_radius": format_rational(B),
                        "method": "Cauchy bound of num - y*den, uniform over the neighborhood"}
        return None
    if eliminants is None:
        return None
    (l1, R1), (l2, R2) = eliminants
    det = l1[0] * l2[1] - l1[1] * l2[0]
    if det == 0:
        return None
    for r in radii:
        box = [(Fraction(0), Fraction(0))] + [(v - r, v + r) for v in y]
        bounds = []
        for R in (R1, R2):
            B = _cauchy_over_box(R.as_univariate(0), box)
            if B is None:
                break
            bounds.append(B)
        if len(bounds) < 2:
            continue
        # x = M^{-1} (T1, T2) with |Ti| < Bi
        inv = [[Fraction(l2[1], det), Fraction(-l1[1], det)], [Fraction(-l2[0], det), Fraction(l1[0], det)]]
        xb = [abs(row[0]) * bounds[0] + abs(row[1]) * bounds[1] for row in inv]
        ball = sum(v * v for v in xb)
        return {"neighborhood_radius": format_rational(r), "ball_radius_squared": format_rational(ball),
                "forms": [list(l1), list(l2)],
                "method": "Cauchy bounds of two generic eliminants, uniform over the neighborhood box"}
    return None


def properness_at(F: RatMap, y: Sequence, schedule: EscapeSchedule | None = None,
                  seed: int = 0, solver: FiberSolver | None = None, eliminants=None) -> PropernessReport:
    """NOT_PROPER from an escape sequence, PROPER from a uniform root bound, else UNKNOWN.

    For n = 2 the bound needs generic eliminants for two independent linear
    forms (``eliminants`` = ((lam1, R1), (lam2, R2))); they are computed here
    when not supplied.
    """
    _check_dim(F)
    schedule = schedule or EscapeSchedule()
    if schedule.stages < 3 or schedule.shrink < 10 or schedule.growth < 1:
        raise ValueError("escape schedules need >= 3 stages and shrink factor >= 10")
    y = tuple(Fraction(v) for v in y)
    if F.n == 2 and eliminants is None:
        from .extension import eliminant_for_form

        eliminants = []
        for lam in ((1, 3), (-3, 1), (2, -5), (5, 2)):
            try:
                eliminants.append((lam, eliminant_for_form(F, lam, seed)))
            except AlgebraError:
                continue
            if len(eliminants) == 2:
                break
        eliminants = eliminants if len(eliminants) == 2 else None
    cert = _bound_certificate(F, y, eliminants)
    if cert is not None:
        return PropernessReport(y, "PROPER", certificate=cert, schedule=schedule)
    solver = solver or FiberSolver(F, seed)
    stages = _escape(solver, y, schedule)
    if stages is not None:
        return PropernessReport(y, "NOT_PROPER", escape=stages, schedule=schedule)
    return PropernessReport(y, "UNKNOWN", schedule=schedule)


# ---------------------------------------------------------------------------
# numeric evidence


def _curves(n: int):
    """Escape curves s -> x(s) as (label, function of a large rational s)."""
    if n == 1:
        yield "x = s", lambda s: (s,)
        yield "x = -s", lambda s: (-s,)
        return
    for a, b in _directions(2):
        yield f"ray ({a}, {b})", lambda s, a=a, b=b: (a * s, b * s)
    for c in (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2), Fraction(1, 2), Fraction(-1, 2)):
        for sign in (1, -1):
            yield (f"x1*x2 = {format_rational(c)}, x1 = {'' if sign > 0 else '-'}s",
                   lambda s, c=c, sign=sign: (sign * s, c / (sign * s)))
            yield (f"x1*x2 = {format_rational(c)}, x2 = {'' if sign > 0 else '-'}s",
                   lambda s, c=c, sign=sign: (c / (sign * s), sign * s))


def asymptotic_samples(F: RatMap, radii: Sequence[int] | None = None, tol: float = 1e-3) -> list[dict]:
    """Finite limits of F along rays and hyperbolas going to infinity (numeric evidence only)."""
    _check_dim(F)
    radii = list(radii) if radii is not None else [10 ** k for k in range(2, 9)]
    found: list[dict] = []
    for label, curve in _curves(F.n):
        values = []
        for s in radii:
            try:
                values.append([float(v) for v in F.evaluate(curve(Fraction(s)))])
            except (AlgebraError, OverflowError, ZeroDivisionError):
                values = []
                break
        if len(values) < 3:
            continue
        steps = [max(abs(a - b) for a, b in zip(u, v)) for u, v in zip(values, values[1:])]
        last = values[-1]
        scale = 1 + max(abs(v) for v in last)
        if steps[-1] < tol * scale and steps[-1] <= steps[-2] + 1e-15:
            point = [round(v, 6) + 0.0 for v in last]
            match = next((f for f in found if max(abs(a - b) for a, b in zip(f["point"], point)) < 10 * tol * scale), None)
            if match:
                match["curves"].append(label)
            else:
                found.append({"point": point, "curves": [label], "evidence": "numeric"})
    return found


def image_probe(F: RatMap, region=None, grid: int = 16, seed: int = 0,
                solver: FiberSolver | None = None) -> list[dict]:
    """Grid cells whose rational center has a provably empty fiber."""
    _check_dim(F)
    region = list(region) if region is not None else parse_region("-2:2", F.n)
    solver = solver or FiberSolver(F, seed)
    steps = [(hi - lo) / grid for lo, hi in region]
    empty = []

    def centers(i, prefix):
        if i == F.n:
            yield prefix
            return
        lo, _ = region[i]
        for k in range(grid):
            yield from centers(i + 1, prefix + (lo + steps[i] * (k + Fraction(1, 2)),))

    for c in centers(0, ()):
        try:
            rep = solver.solve(c)
        except DegenerateFiber:
            continue
        if rep.count == 0:
            empty.append({"center": [format_rational(v) for v in c],
                          "cell": [[format_rational(v - s / 2), format_rational(v + s / 2)] for v, s in zip(c, steps)],
                          "proof": "no admissible real root of the eliminant"})
    return empty

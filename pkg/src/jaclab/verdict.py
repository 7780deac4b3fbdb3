"""Invertibility verdicts assembled from exact evidence, birational inverses, lift checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraError, MultiPoly, RatFunc, format_rational, substitute_pair
from .extension import (
    ExtensionReport,
    GenericityFailure,
    automorphisms_dim1,
    dominance_check,
    eliminant_for_form,
    extension_degree,
)
from .fibers import DegenerateFiber, FiberHistogram, FiberSolver, parity_report, scan_fibers
from .maps import (
    RatMap,
    SamplingConfig,
    Status,
    Verdict,
    composition_equals,
    everywhere_defined_verdict,
    jacobian_determinant,
    lift_plus,
    nonsingular_verdict,
    nowhere_vanishing_verdict,
)


class NotBirational(AlgebraError):
    def __init__(self, degree: int):
        super().__init__("NotBirational", f"extension degree is {degree}, not 1")
        self.degree = degree


class InverseVerificationFailed(AlgebraError):
    def __init__(self, message: str):
        super().__init__("InverseVerificationFailed", message)


# ---------------------------------------------------------------------------
# birational inverse


@dataclass
class BirationalInverse:
    inverse: RatMap
    denominator_verdicts: list[tuple[str, Verdict]]

    def to_json(self) -> dict:
        return {
            "inverse": [str(c) for c in self.inverse.components],
            "denominators": [{"component": lbl, **v.to_json()} for lbl, v in self.denominator_verdicts],
        }


def _solve_linear(R: MultiPoly, n: int) -> RatFunc:
    """T from a T-linear eliminant R(T, y): T = -r0(y) / r1(y), as a RatFunc in y."""
    coeffs = R.as_univariate(0)
    if len(coeffs) != 2:
        raise NotBirational(len(coeffs) - 1)
    drop = [0] + list(range(n))
    r0, r1 = (c.embed(n, drop) for c in coeffs)
    return RatFunc(-r0, r1)


def _inverse_components(F: RatMap, report: ExtensionReport | None, seed: int) -> tuple[RatFunc, ...]:
    if F.n == 1:
        c = F.components[0]
        Y = MultiPoly.var(2, 1)
        P = c.num.embed(2, [0]) - Y * c.den.embed(2, [0])
        return (_solve_linear(P, 1),)
    forms = [(1, 0), (1, 1)]
    found = []
    rng = random.Random(seed)
    candidates = forms + [report.lam if report else (1, 1)] + [
        (rng.randint(1, 9), rng.randint(-9, 9)) for _ in range(20)]
    for lam in candidates:
        if found and found[0][0][0] * lam[1] - found[0][0][1] * lam[0] == 0:
            continue
        try:
            R = eliminant_for_form(F, lam, seed)
        except GenericityFailure:
            continue
        found.append((lam, _solve_linear(R, 2)))
        if len(found) == 2:
            break
    if len(found) < 2:
        raise GenericityFailure("no pair of independent linear forms in general position")
    (l1, t1), (l2, t2) = found
    det = Fraction(l1[0] * l2[1] - l1[1] * l2[0])
    x1 = (t1 * l2[1] - t2 * l1[1]) * (1 / det)
    x2 = (t2 * l1[0] - t1 * l2[0]) * (1 / det)
    return (x1, x2)


def birational_inverse(F: RatMap, report: ExtensionReport | None = None, seed: int = 0,
                       config: SamplingConfig = SamplingConfig()) -> BirationalInverse:
    """G with F o G = G o F = id, solved from the T-linear eliminants of a degree-1 map."""
    if report is None:
        report = extension_degree(F, seed, with_minpoly=F.n == 1)
    if report.degree != 1:
        raise NotBirational(report.degree)
    G = RatMap(F.n, _inverse_components(F, report, seed))
    identity = RatMap.identity(F.n)
    if not composition_equals(F, G, identity) or not composition_equals(G, F, identity):
        raise InverseVerificationFailed("compositions do not reduce to the identity")
    jF, jG = jacobian_determinant(F), jacobian_determinant(G)
    # j(G) o F == 1 / j(F), cross-multiplied
    a, da = substitute_pair(jG.num, dict(enumerate(F.components)), F.n)
    b, db = substitute_pair(jG.den, dict(enumerate(F.components)), F.n)
    if b.is_zero() or jF.num * a * db != jF.den * da * b:
        raise InverseVerificationFailed("j(F) * (j(G) o F) is not 1")
    verdicts = []
    for k, c in enumerate(G.components, 1):
        if c.den.is_constant():
            continue
        v = nowhere_vanishing_verdict(RatFunc.from_poly(c.den), config=config)
        if v.status is Status.REFUTED:
            raise InverseVerificationFailed(f"denominator of G{k} vanishes: {v.evidence}")
        verdicts.append((f"G{k}", v))
    return BirationalInverse(G, verdicts)


# ---------------------------------------------------------------------------
# counterexamples


@dataclass
class CounterexamplePair:
    target: tuple[Fraction, ...]
    points: tuple
    certificate: list[str]

    def to_json(self) -> dict:
        return {"target": [format_rational(v) for v in self.target],
                "points": [p.to_json() for p in self.points],
                "certificates": self.certificate}


def _image_targets(F: RatMap, limit: int = 3) -> list[tuple[Fraction, ...]]:
    """Images of small lattice points: non-injectivity shows up at such targets."""
    vals = [Fraction(k) for k in range(-limit, limit + 1)]
    out = []
    grid = [(v,) for v in vals] if F.n == 1 else [(a, b) for a in vals for b in vals]
    for x in grid:
        try:
            y = F.evaluate(x)
        except AlgebraError:
            continue
        if y not in out:
            out.append(y)
    return out


def injectivity_counterexample_search(F: RatMap, histogram: FiberHistogram | None = None,
                                      targets: Sequence | None = None, seed: int = 0,
                                      solver: FiberSolver | None = None) -> CounterexamplePair | None:
    """Two distinct verified points over one target, if the scan or the lattice images show one."""
    if F.n > 2:
        raise AlgebraError("UnsupportedDimension", "fibers are solved exactly for n <= 2 only")
    solver = solver or FiberSolver(F, seed)

    def pick(y, rep):
        pts = sorted(rep.points, key=lambda p: (not p.is_rational(), [-abs(v) for v in p.approx()]))
        pts = tuple(sorted(pts[:2], key=lambda p: p.approx(), reverse=True))
        return CounterexamplePair(tuple(Fraction(v) for v in y), pts, [p.certificate for p in pts])

    def scan(ys):
        for y in ys:
            try:
                rep = solver.solve(y)
            except DegenerateFiber:
                continue
            if rep.count >= 2:
                return pick(y, rep)
        return None

    found = scan(targets or [])
    if found is None and histogram is not None:
        for y, rep in histogram.pairs:
            return pick(y, rep)
    return found or scan(_image_targets(F))


# ---------------------------------------------------------------------------
# necessary conditions and the verdict


@dataclass
class ConditionsReport:
    degree: int | None
    parity: dict | None
    automorphisms: list | str
    counterexample: CounterexamplePair | None
    conditions: dict[str, str]
    tags: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "degree_parity": None if self.degree is None else ("odd" if self.degree % 2 else "even"),
            "parity": self.parity,
            "automorphisms": self.automorphisms if isinstance(self.automorphisms, str)
            else [str(g) for g in self.automorphisms],
            "counterexample": self.counterexample.to_json() if self.counterexample else None,
            "conditions": self.conditions,
            "tags": self.tags,
        }


@dataclass
class Evidence:
    """Everything the verdict rules look at, computed once per map."""

    F: RatMap
    nonsingular: Verdict
    defined: Verdict
    extension: ExtensionReport | None
    extension_error: str | None
    histogram: FiberHistogram | None
    automorphisms: list | None
    counterexample: CounterexamplePair | None


def gather_evidence(F: RatMap, seed: int = 0, samples: int = 500, region=None,
                    config: SamplingConfig | None = None) -> Evidence:
    if not dominance_check(F):
        raise AlgebraError("NotDominant", "the Jacobian determinant is identically zero")
    config = config or SamplingConfig(seed=seed)
    defined = everywhere_defined_verdict(F, config)
    nonsing = nonsingular_verdict(F, config)
    ext, err = None, None
    if F.n <= 2:
        try:
            ext = extension_degree(F, seed, with_minpoly=False)
        except AlgebraError as exc:
            err = f"{exc.code}: {exc}"
    hist = None
    cex = None
    if F.n <= 2:
        solver = FiberSolver(F, seed)
        hist = scan_fibers(F, region, samples, seed, solver)
        cex = injectivity_counterexample_search(F, hist, seed=seed, solver=solver)
    auts = automorphisms_dim1(F) if F.n == 1 else None
    return Evidence(F, nonsing, defined, ext, err, hist, auts, cex)


def necessary_conditions(F: RatMap, evidence: Evidence | None = None, seed: int = 0,
                         samples: int = 500) -> ConditionsReport:
    """Geometric degree 1 forces odd d and, for n = 1, a trivial automorphism group."""
    ev = evidence or gather_evidence(F, seed, samples)
    d = ev.extension.degree if ev.extension else None
    cond: dict[str, str] = {}
    tags = []
    cond["odd_degree"] = "NOT_COMPUTED" if d is None else ("PASS" if d % 2 else "FAIL")
    if d is not None:
        tags.append(f"odd-degree necessity [extension report, d={d}]")
    if ev.automorphisms is None:
        cond["trivial_automorphisms"] = "NOT_COMPUTED"
        auts: list | str = "not computed, n >= 2"
    else:
        auts = ev.automorphisms
        cond["trivial_automorphisms"] = "PASS" if len(auts) == 1 else "FAIL"
        tags.append(f"trivial-automorphism necessity [automorphisms, |Aut|={len(auts)}]")
    parity = None
    if d is not None and ev.histogram is not None:
        parity = parity_report(d, ev.histogram.N_hat)
        tags.append(f"parity of N and d [scan, N_hat={ev.histogram.N_hat}]")
    cond["injective_on_samples"] = "FAIL" if ev.counterexample else ("PASS" if ev.histogram else "NOT_COMPUTED")
    cond["nonsingular"] = ev.nonsingular.status.value
    cond["everywhere_defined"] = ev.defined.status.value
    return ConditionsReport(d, parity, auts, ev.counterexample, cond, tags)


@dataclass
class InvertibilityVerdict:
    status: str  # INVERTIBLE | NOT_INVERTIBLE | UNKNOWN
    reasons: list[dict]
    inverse: BirationalInverse | None = None
    conditions: ConditionsReport | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "reasons": self.reasons}
        if self.inverse is not None:
            out["inverse"] = self.inverse.to_json()
        if self.conditions is not None:
            out["conditions"] = self.conditions.to_json()
        return out


def invertibility_verdict(F: RatMap, seed: int = 0, samples: int = 500, region=None,
                          evidence: Evidence | None = None) -> InvertibilityVerdict:
    ev = evidence or gather_evidence(F, seed, samples, region)
    conditions = necessary_conditions(F, ev)
    reasons: list[dict] = []
    d = ev.extension.degree if ev.extension else None

    def reason(rule, detail, **kw):
        reasons.append({"rule": rule, "detail": detail, **kw})

    if ev.defined.status is Status.REFUTED:
        violated = [("everywhere defined", ev.defined)]
    elif ev.nonsingular.status is Status.REFUTED:
        violated = [("nonsingular", ev.nonsingular)]
    else:
        violated = []
    if violated:
        for name, v in violated:
            reason("hypothesis violated", f"{name} is REFUTED; the invertibility theorems do not apply",
                   evidence=v.to_json())
        if ev.counterexample:
            reason("counterexample pair", "two verified points share one image (recorded as evidence)",
                   pair=ev.counterexample.to_json())
        return InvertibilityVerdict("UNKNOWN", reasons, None, conditions)

    status = None
    inverse = None
    if d == 1:
        inverse = birational_inverse(F, ev.extension, seed)
        reason("birational theorem", "extension degree 1: the map has a global inverse, which is birational")
        status = "INVERTIBLE"
    if d is not None and d % 2 == 0:
        reason("even extension degree", f"extension degree {d} is even; geometric degree 1 would force odd d")
        status = status or "NOT_INVERTIBLE"
    if F.n == 1 and d is not None and d > 1 and ev.automorphisms is not None and len(ev.automorphisms) == d:
        reason("Galois theorem", f"Galois extension of degree {d} > 1 is invertible only when birational")
        status = status or "NOT_INVERTIBLE"
    if ev.counterexample is not None:
        reason("counterexample pair", "two verified distinct points with the same image",
               pair=ev.counterexample.to_json())
        status = status or "NOT_INVERTIBLE"
    if status == "INVERTIBLE" and any(r["rule"] != "birational theorem" for r in reasons):
        raise AlgebraError("InternalError", "contradictory invertibility evidence")
    if status is None and F.n == 1 and ev.nonsingular.status is Status.PROVED:
        reason("n=1 nonsingular monotone", "a nowhere-vanishing derivative makes the map monotone, hence injective")
        status = "INVERTIBLE"
    if status is None:
        if ev.extension_error:
            reason("extension degree unavailable", ev.extension_error)
        reason("no rule applies", "asymptotic-set criteria are only sampled here and never decide a verdict")
        status = "UNKNOWN"
    return InvertibilityVerdict(status, reasons, inverse, conditions)


# ---------------------------------------------------------------------------
# the lift


def lift_fiber_equivalence(F: RatMap, samples: int = 20, seed: int = 0,
                           targets: Sequence | None = None) -> dict:
    """|fiber of F+ over (y, w)| = |fiber of F over y|, with z = w j(F)(x) at every base point."""
    lifted = lift_plus(F)
    j = jacobian_determinant(F)
    solver = FiberSolver(F, seed)
    rng = random.Random(seed)
    base_targets = [tuple(Fraction(v) for v in y) for y in (targets or [])]
    while len(base_targets) < samples:
        base_targets.append(tuple(Fraction(rng.randint(-400, 400), 20) for _ in range(F.n)))
    rows = []
    ok = True
    for y in base_targets:
        w = Fraction(rng.randint(-50, 50), rng.randint(1, 5))
        rep = solver.solve(y)
        up = 0
        for p in rep.points:
            if _nonzero_at(j, p):
                up += 1
        rows.append({"target": [format_rational(v) for v in (*y, w)], "base": rep.count, "lift": up})
        ok = ok and up == rep.count
    return {"lift_dimension": lifted.n, "samples": rows, "equivalent": ok}


def _nonzero_at(j: RatFunc, point) -> bool:
    """j(F) is finite and nonzero at a fiber point, so z = w j(x) is the unique lift."""
    if point.is_rational_fast():
        return j.num.evaluate(point.coords) != 0 and j.den.evaluate(point.coords) != 0
    return point.sign_of(j.num) != 0 and point.sign_of(j.den) != 0

"""Exact solving of square polynomial systems in two unknowns.

The system {A = 0, B = 0} is sheared by a random integer linear form
T = l1*x1 + l2*x2, the second unknown is eliminated with a resultant in
Q[T], and every real root of the squarefree eliminant is lifted back by a
gcd computed over Q[T]/(m(T)) (splitting m whenever a zero divisor shows
up).  Each lifted point is re-verified with exact sign evaluation, so a
reported point is always a true solution.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _kernels as K
from .algebra import AlgebraError, MultiPoly, UniPoly, gcd_poly
from .realroots import RootBox, count_real_roots, interval_eval, isolate_real_roots, refine, sign_at


class DegenerateSystem(AlgebraError):
    """The system has a positive-dimensional common component."""

    def __init__(self, factor: MultiPoly, message: str = ""):
        super().__init__("DegenerateFiber", message or f"common factor {factor}")
        self.factor = factor


class ShearFailure(AlgebraError):
    def __init__(self, message: str):
        super().__init__("GenericityFailure", message)


# ---------------------------------------------------------------------------
# shearing


def shear(p: MultiPoly, lam: tuple[int, int]) -> MultiPoly:
    """Rewrite p(x1, x2, *params) in coordinates (T, w, *params) with x1 = (T - l2 w)/l1, x2 = w."""
    l1, l2 = lam
    n = p.nvars
    T = MultiPoly.var(n, 0)
    w = MultiPoly.var(n, 1)
    x1 = (T - w * l2) * Fraction(1, l1)
    images = [x1, w] + [MultiPoly.var(n, i) for i in range(2, n)]
    out = MultiPoly.zero(n)
    cache: dict[tuple[int, int], MultiPoly] = {}
    for e, c in p.items():
        key = (e[0], e[1])
        base = cache.get(key)
        if base is None:
            base = images[0] ** e[0] * images[1] ** e[1]
            cache[key] = base
        rest = [0, 0] + list(e[2:])
        out = out + base * MultiPoly(n, {tuple(rest): c})
    return out


def _nested_int(p: MultiPoly) -> tuple[list[list[int]], int]:
    """p in (T, w) as integer T-polynomials per power of w, plus the clearing scale."""
    if p.variables() - {0, 1}:
        raise ValueError("expected a polynomial in (T, w) only")
    scale = 1
    for c in p._terms.values():
        scale = scale * c.denominator // _gcd(scale, c.denominator)
    dw = p.degree_in(1)
    dt = p.degree_in(0)
    rows = [[0] * (dt + 1) for _ in range(dw + 1)]
    for e, c in p.items():
        rows[e[1]][e[0]] = int(c * scale)
    return [K.trim(r) for r in rows], scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# ---------------------------------------------------------------------------
# resultant in Q[T] by evaluation / interpolation


def _probe_degree(aw, bw, bound: int) -> int:
    best = -1
    for p in K.PROBE_PRIMES:
        lca, lcb = aw[-1], bw[-1]
        xs, ys = [], []
        k = 0
        while len(xs) < bound + 1:
            if K.horner_mod(lca, k, p) and K.horner_mod(lcb, k, p):
                a = [K.horner_mod(c, k, p) for c in aw]
                b = [K.horner_mod(c, k, p) for c in bw]
                xs.append(k)
                ys.append(K.res_mod(a, b, p))
            k += 1
        dd = K.newton_coeffs_mod(xs, ys, p)
        top = max((i for i, c in enumerate(dd) if c), default=-1)
        best = max(best, top)
    return best


def resultant_in_T(A: MultiPoly, B: MultiPoly, degree_hint: int | None = None) -> UniPoly:
    """Res_w(A, B) for A, B in Q[T, w] (variables 0 and 1), returned as a UniPoly in T."""
    if A.is_zero() or B.is_zero():
        return UniPoly()
    aw, sa = _nested_int(A)
    bw, sb = _nested_int(B)
    m, n = len(aw) - 1, len(bw) - 1
    if m == 0 or n == 0:
        base, e = (aw[0], n) if m == 0 else (bw[0], m)
        r = UniPoly([Fraction(c) for c in base]) ** e
        return r * Fraction(1, sa ** n * sb ** m)
    deg_ta = max(len(c) for c in aw) - 1
    deg_tb = max(len(c) for c in bw) - 1
    bound = min(n * deg_ta + m * deg_tb, A.degree() * B.degree())
    if degree_hint is not None:
        d = min(degree_hint, bound)
    elif bound <= 24:
        d = bound
    else:
        d = _probe_degree(aw, bw, bound)
    values = _exact_values(aw, bw, d + 1 + (1 if d < bound else 0))
    xs, ys = zip(*values)
    poly = K.interpolate(list(xs[: d + 1]), list(ys[: d + 1])) if d >= 0 else []
    if d < bound:
        if K.horner(poly, xs[-1]) != ys[-1]:
            return resultant_in_T(A, B, degree_hint=bound)
    scale = Fraction(1, sa ** n * sb ** m)
    return UniPoly([c * scale for c in poly])


def _exact_values(aw, bw, count: int) -> list[tuple[int, int]]:
    lca, lcb = aw[-1], bw[-1]
    out = []
    k = 0
    while len(out) < count:
        if K.horner(lca, k) and K.horner(lcb, k):
            a = [K.horner(c, k) for c in aw]
            b = [K.horner(c, k) for c in bw]
            out.append((k, K.zres(a, b)))
        k += 1
    return out


# ---------------------------------------------------------------------------
# arithmetic in Q[T]/(m)


def nf_inverse(a: UniPoly, m: UniPoly) -> UniPoly:
    """Inverse of a modulo m (requires gcd(a, m) = 1)."""
    r0, r1 = m, a % m
    s0, s1 = UniPoly(), UniPoly([1])
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree() != 0:
        raise ZeroDivisionError("not invertible modulo m")
    return (s0 * (1 / r0.lc())) % m


def _norm(poly: list[UniPoly], m: UniPoly) -> list[UniPoly]:
    out = [c % m for c in poly]
    while out and not out[-1]:
        out.pop()
    return out


def _split_monic(m: UniPoly, poly: list[UniPoly]) -> list[tuple[UniPoly, list[UniPoly]]]:
    poly = _norm(poly, m)
    if not poly:
        return [(m, [])]
    lead = poly[-1]
    g = lead.gcd(m)
    if g.degree() > 0:
        out = _split_monic(g, poly[:-1])
        h = (m // g).monic()
        if h.degree() > 0:
            out += _split_monic(h, poly)
        return out
    inv = nf_inverse(lead, m)
    return [(m, [(c * inv) % m for c in poly])]


def nf_gcd(m: UniPoly, a: list[UniPoly], b: list[UniPoly]) -> list[tuple[UniPoly, list[UniPoly]]]:
    """gcd of polynomials in w over Q[T]/(m), splitting m along zero divisors.

    Returns pairs (m_i, g_i) with prod m_i = m and g_i monic (or empty when
    both inputs vanish modulo m_i).
    """
    results = []
    stack = [(m, a, b)]
    while stack:
        mod, a, b = stack.pop()
        if mod.degree() <= 0:
            continue
        b = _norm(b, mod)
        if not b:
            results.extend(_split_monic(mod, a))
            continue
        for mi, bm in _split_monic(mod, b):
            if not bm:
                stack.append((mi, a, []))
                continue
            r = _norm(a, mi)
            db = len(bm) - 1
            while len(r) - 1 >= db and r:
                c = r[-1]
                shift = len(r) - 1 - db
                for k, v in enumerate(bm):
                    r[k + shift] = (r[k + shift] - c * v) % mi
                r.pop()
                while r and not r[-1]:
                    r.pop()
            stack.append((mi, bm, r))
    return results


def nf_eval(p: MultiPoly, values: Sequence[UniPoly], m: UniPoly) -> UniPoly:
    """p(values) reduced modulo m; values are elements of Q[T]/(m)."""
    n = p.nvars
    tables: list[dict[int, UniPoly]] = [{0: UniPoly([1])} for _ in range(n)]

    def power(i: int, k: int) -> UniPoly:
        t = tables[i]
        if k not in t:
            top = max(j for j in t if j <= k)
            acc = t[top]
            for j in range(top + 1, k + 1):
                acc = (acc * values[i]) % m
                t[j] = acc
        return t[k]

    total = UniPoly()
    for e, c in p.items():
        term = UniPoly([c])
        for i, k in enumerate(e):
            if k:
                term = (term * power(i, k)) % m
        total = total + term
    return total % m


# ---------------------------------------------------------------------------
# algebraic points


class _Lift:
    """Back-substitution shared by the points of one solve, computed on first use."""

    def __init__(self, aw, bw, m: UniPoly, boxes, lam):
        self.aw, self.bw, self.m, self.boxes, self.lam = aw, bw, m, boxes, lam
        self._rows = None

    def rows(self) -> list[tuple[UniPoly, tuple[UniPoly, UniPoly] | None]]:
        if self._rows is None:
            l1, l2 = self.lam
            rows = []
            for box, mi, w in _split_lift(self.aw, self.bw, self.m, self.boxes, self.lam):
                if w is None:
                    rows.append((mi, None))
                    continue
                x1 = ((UniPoly([0, 1]) - w * l2) * Fraction(1, l1)) % mi
                rows.append((mi, (x1, w)))
            self._rows = rows
        return self._rows


class AlgebraicPoint:
    """A real solution point: coordinates are polynomials in T taken at one root of ``factor``.

    ``certificate`` says why the point is known to be a genuine solution:
    "simple-root" (a simple root of the eliminant carries exactly one complex
    solution, hence a real one) or "substitution" (exact back-substitution).
    """

    def __init__(self, t_box: RootBox, lift: _Lift, index: int, certificate: str):
        self.t_box = t_box
        self._lift = lift
        self._index = index
        self.certificate = certificate

    @property
    def factor(self) -> UniPoly:
        return self._lift.rows()[self._index][0]

    @property
    def coords(self) -> tuple[UniPoly, UniPoly]:
        row = self._lift.rows()[self._index][1]
        if row is None:
            raise ShearFailure("point could not be lifted")
        return row

    def _box(self) -> RootBox:
        return RootBox(self.t_box.lo, self.t_box.hi, self.factor)

    def coordinate(self, i: int) -> Fraction | RootBox:
        """Exact rational value, or an isolating box with its defining polynomial."""
        e = self.coords[i]
        if e.degree() <= 0:
            return e.lc() if e else Fraction(0)
        f = self.factor
        if f.degree() == 1:
            return e(-f.coeffs[0] / f.coeffs[1])
        return algebraic_value_box(e, f, self._box())

    def approx(self) -> tuple[float, ...]:
        box = refine(self._box(), Fraction(1, 10 ** 18))
        t = box.midpoint()
        return tuple(float(e(t)) for e in self.coords)

    def enclosure(self, width=Fraction(1, 10 ** 6)) -> list[tuple[Fraction, Fraction]]:
        box = self._box()
        while True:
            encl = [interval_eval(e, box.lo, box.hi) for e in self.coords]
            if all(b - a <= width for a, b in encl):
                return encl
            box = refine(box, box.width / 16)

    def sign_of(self, p: MultiPoly) -> int:
        """Exact sign of a polynomial in the point's coordinates."""
        return sign_at(nf_eval(p, self.coords, self.factor), self._box())


def charpoly(e: UniPoly, m: UniPoly) -> UniPoly:
    """Polynomial vanishing at e(t) for every root t of m: Res_T(m(T), X - e(T))."""
    # variables: 0 = X (kept), 1 = T (eliminated)
    mm = MultiPoly.from_univariate(2, 1, m.coeffs)
    X = MultiPoly.var(2, 0)
    ee = MultiPoly.from_univariate(2, 1, e.coeffs)
    return resultant_in_T(X - ee, mm, degree_hint=m.degree())


def algebraic_value_box(e: UniPoly, m: UniPoly, t_box: RootBox) -> Fraction | RootBox:
    chi = charpoly(e, m).squarefree()
    boxes = isolate_real_roots(chi, Fraction(1, 2))
    box = RootBox(t_box.lo, t_box.hi, m)
    while True:
        lo, hi = interval_eval(e, box.lo, box.hi)
        hits = [b for b in boxes if b.lo < hi and lo <= b.hi]
        if len(hits) == 1 and hits[0].lo < lo and hi <= hits[0].hi:
            exact = hits[0].rational_value()
            return exact if exact is not None else hits[0]
        if len(hits) > 1 or any(b.width > (hi - lo) * 4 for b in hits):
            boxes = [refine(b, max(hi - lo, Fraction(1, 10 ** 30))) if b in hits else b for b in boxes]
        box = refine(box, box.width / 8)


# ---------------------------------------------------------------------------
# solving


@dataclass
class SolveResult:
    points: list[AlgebraicPoint]
    lam: tuple[int, int]
    eliminant: UniPoly
    discarded: int  # eliminant roots that are not admissible solutions


def _separating_lams(rng: random.Random):
    seen = set()
    while True:
        lam = (rng.randint(1, 9) * rng.choice((1, -1)), rng.randint(-9, 9))
        if lam not in seen:
            seen.add(lam)
            yield lam


def _leading_w(p: MultiPoly) -> MultiPoly:
    return p.as_univariate(1)[-1]


def _horner_w(coeffs: list[UniPoly], w: UniPoly, m: UniPoly) -> UniPoly:
    acc = UniPoly()
    for c in reversed(coeffs):
        acc = (acc * w + c) % m
    return acc


def _to_plane(p: MultiPoly) -> MultiPoly:
    """Drop trailing (absent) parameter variables."""
    return p if p.nvars == 2 else p.embed(2, [0, 1] + [0] * (p.nvars - 2))


class PlaneEliminator:
    """Solver for the family {A(x, p) = 0, B(x, p) = 0} over rational parameter values p.

    A and B live in Q[x1, x2, p1..pk].  The shear and the generic degree of
    the eliminant are computed once; every solve is still exact, and falls
    back to fresh shears whenever a specialization is not in general position.
    """

    def __init__(self, A: MultiPoly, B: MultiPoly, nonzero: Sequence[MultiPoly] = (),
                 seed: int = 0, budget: int = 20):
        if A.nvars != B.nvars or A.nvars < 2:
            raise ValueError("A and B must share a ring with at least two variables")
        self.A, self.B = A, B
        self.nparams = A.nvars - 2
        for d in nonzero:
            if d.variables() - {0, 1}:
                raise ValueError("nonzero constraints may only involve x1, x2")
        self.nonzero = [_to_plane(d) for d in nonzero]
        self.seed = seed
        self.budget = budget
        self._rng = random.Random(seed)
        self._lams = _separating_lams(self._rng)
        self._setup(next(self._lams))

    def _setup(self, lam):
        self.lam = lam
        self.As, self.Bs = shear(self.A, lam), shear(self.B, lam)
        self.Ds = [shear(d, lam) for d in self.nonzero]
        lcs = (_leading_w(self.As), _leading_w(self.Bs))
        if any(0 in c.variables() for c in lcs):
            self.hint = None
            self._generic_ok = False
            return
        self._generic_ok = True
        self.hint = self._probe_generic_degree() if self.nparams else None

    def _probe_generic_degree(self) -> int | None:
        rng = random.Random(self.seed + 1)
        best = -1
        for _ in range(2):
            vals = [Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 3)) for _ in range(self.nparams)]
            a, b = self._specialize(vals)
            if a is None:
                return None
            aw, _ = _nested_int(a)
            bw, _ = _nested_int(b)
            if len(aw) < 2 or len(bw) < 2:
                return None
            bound = min((len(bw) - 1) * (max(len(c) for c in aw) - 1) + (len(aw) - 1) * (max(len(c) for c in bw) - 1),
                        a.degree() * b.degree())
            best = max(best, _probe_degree(aw, bw, bound))
        return best

    def _specialize(self, params):
        if not self.nparams:
            return self.As, self.Bs
        assign = {2 + i: Fraction(v) for i, v in enumerate(params)}
        return _to_plane(self.As.partial_evaluate(assign)), _to_plane(self.Bs.partial_evaluate(assign))

    def solve(self, params: Sequence = ()) -> SolveResult:
        if len(params) != self.nparams:
            raise ValueError(f"expected {self.nparams} parameter values")
        last = None
        for attempt in range(self.budget):
            try:
                if self._generic_ok:
                    return self._solve_here(params)
                last = ShearFailure(f"shear {self.lam} is not in general position")
            except ShearFailure as exc:
                last = exc
            # this specialization needs another shear; keep the cached one for later calls
            saved = (self.lam, self.As, self.Bs, self.Ds, self.hint, self._generic_ok)
            try:
                self._setup(next(self._lams))
                if self._generic_ok:
                    self.hint = None
                    return self._solve_here(params)
            except ShearFailure as exc:
                last = exc
            finally:
                self.lam, self.As, self.Bs, self.Ds, self.hint, self._generic_ok = saved
        raise ShearFailure(f"no separating linear form found ({last})")

    def _solve_here(self, params) -> SolveResult:
        a, b = self._specialize(params)
        for p in (a, b):
            if p.is_zero():
                raise DegenerateSystem(p, "an equation is identically zero")
            if not _leading_w(p).is_constant():
                raise ShearFailure(f"shear {self.lam} is not in general position here")
        R = resultant_in_T(a, b, degree_hint=self.hint)
        if not R:
            assign = {2 + i: Fraction(v) for i, v in enumerate(params)}
            g = gcd_poly(_to_plane(self.A.partial_evaluate(assign)), _to_plane(self.B.partial_evaluate(assign)))
            if not g.is_constant():
                raise DegenerateSystem(g)
            raise ShearFailure("eliminant vanished identically")
        m = R.squarefree()
        if m.degree() <= 0 or count_real_roots(m) == 0:
            return SolveResult([], self.lam, R, 0)
        boxes = isolate_real_roots(m, Fraction(1, 2))
        aw = [c.to_univariate(0) for c in a.as_univariate(1)]
        bw = [c.to_univariate(0) for c in b.as_univariate(1)]
        lift = _Lift(aw, bw, m, boxes, self.lam)
        dR = R.derivative()
        guards = [resultant_in_T(a, d) if not d.is_constant() else UniPoly([d.constant_value()]) for d in self.Ds]
        certified = all(sign_at(dR, box) != 0 and all(sign_at(g, box) != 0 for g in guards)
                        for box in boxes)
        points: list[AlgebraicPoint] = []
        discarded = 0
        for i, box in enumerate(boxes):
            if certified:
                points.append(AlgebraicPoint(box, lift, i, "simple-root"))
                continue
            mi, row = lift.rows()[i]
            if row is None:
                discarded += 1
                continue
            pt = AlgebraicPoint(RootBox(box.lo, box.hi, m), lift, i, "substitution")
            if any(pt.sign_of(d) == 0 for d in self.nonzero):
                discarded += 1
                continue
            points.append(pt)
        return SolveResult(points, self.lam, R, discarded)


def solve_plane_system(A: MultiPoly, B: MultiPoly, nonzero: Sequence[MultiPoly] = (),
                       seed: int = 0, budget: int = 20) -> SolveResult:
    """All real solutions of A = B = 0 in the plane where every ``nonzero`` polynomial is nonzero.

    Raises :class:`DegenerateSystem` when A and B share a nonconstant factor
    (the solution set is then not finite over C).
    """
    if A.nvars != 2 or B.nvars != 2:
        raise ValueError("plane systems need polynomials in exactly two variables")
    if A.is_zero() or B.is_zero():
        raise DegenerateSystem(A if A.is_zero() else B, "an equation is identically zero")
    return PlaneEliminator(A, B, nonzero, seed=seed, budget=budget).solve(())

def _split_lift(aw, bw, m: UniPoly, boxes, lam):
    pieces = nf_gcd(m, aw, bw)
    out = []
    for box in boxes:
        owner = [(mi, gi) for mi, gi in pieces if sign_at(mi, box) == 0]
        if len(owner) != 1:
            raise ShearFailure("root not attributable to a single factor")
        mi, gi = owner[0]
        if len(gi) > 2:
            raise ShearFailure(f"shear {lam} does not separate solutions")
        w = (-gi[0]) % mi if len(gi) == 2 else None
        if w is not None and any(sign_at(_horner_w([c % mi for c in cs], w, mi), box) for cs in (aw, bw)):
            w = None
        out.append((box, mi, w))
    return out

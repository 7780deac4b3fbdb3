"""Field-extension data of R(X) over R(F): degree, minimal polynomial, n=1 automorphisms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Sequence

from . import _kernels as K
from .algebra import (
    AlgebraError,
    MultiPoly,
    RatFunc,
    UniPoly,
    format_rational,
    format_univariate,
    nullspace,
    substitute,
    substitute_ratfunc,
)
from .elimination import resultant_in_T, shear
from .maps import RatMap, jacobian_determinant
from .realroots import isolate_real_roots


class NotDominant(AlgebraError):
    def __init__(self):
        super().__init__("NotDominant", "the Jacobian determinant is identically zero")


class GenericityFailure(AlgebraError):
    def __init__(self, message: str):
        super().__init__("GenericityFailure", message)


def dominance_check(F: RatMap) -> bool:
    return not jacobian_determinant(F).is_zero()


# ---------------------------------------------------------------------------
# report


@dataclass
class ExtensionReport:
    degree: int
    lam: tuple[int, ...]
    eliminant: MultiPoly  # R(T, y1..yn), primitive, free of factors in T alone
    trials: list[dict] = field(default_factory=list)
    closed_form: int | None = None  # n = 1 cross-check

    @property
    def nvars(self) -> int:
        return self.eliminant.nvars - 1

    @property
    def minpoly(self) -> UniPoly:
        """Monic minimal polynomial of T = lam.x over Q(y), coefficients RatFunc in y."""
        n = self.nvars
        coeffs = self.eliminant.as_univariate(0)
        drop = [0] + list(range(n))  # y_i is variable i+1 here, variable i in the result
        polys = [c.embed(n, drop) if c else MultiPoly.zero(n) for c in coeffs]
        top = polys[-1]
        return UniPoly([RatFunc(c, top) for c in polys])

    def y_names(self) -> list[str]:
        return [f"y{i + 1}" for i in range(self.nvars)]

    def to_json(self) -> dict:
        out = {
            "degree": self.degree,
            "lambda": list(self.lam),
            "minpoly": format_univariate(self.minpoly, "T", self.y_names()),
            "trials": self.trials,
        }
        if self.closed_form is not None:
            out["closed_form_degree"] = self.closed_form
        return out


# ---------------------------------------------------------------------------
# degree


def _system(F: RatMap) -> tuple[MultiPoly, ...]:
    """num_i(x) - y_i den_i(x) in Q[x1..xn, y1..yn]."""
    n = F.n
    m = 2 * n
    out = []
    for i, c in enumerate(F.components):
        num = c.num.embed(m, list(range(n)))
        den = c.den.embed(m, list(range(n)))
        out.append(num - MultiPoly.var(m, n + i) * den)
    return tuple(out)


def _random_y(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-30, 30), rng.randint(1, 6)) for _ in range(n))


def _strip_T_content(R: UniPoly, bases: Sequence[UniPoly]) -> UniPoly:
    for b in bases:
        if b.degree() <= 0:
            continue
        while True:
            g = R.gcd(b)
            if g.degree() <= 0:
                break
            R = R // g
    return R


def extension_degree(F: RatMap, seed: int = 0, lams: int = 3, specializations: int = 3,
                     budget: int = 20, with_minpoly: bool = True) -> ExtensionReport:
    """Degree of R(X) over R(F) by eliminating x from {num_i - y_i den_i, T - lam.x}."""
    if not dominance_check(F):
        raise NotDominant()
    if F.n > 2:
        raise AlgebraError("UnsupportedDimension", "extension degrees are computed for n <= 2")
    rng = random.Random(seed)
    if F.n == 1:
        return _degree_dim1(F, rng, lams, specializations, budget)
    return _degree_dim2(F, rng, lams, specializations, budget, with_minpoly)


def _degree_dim1(F, rng, lams, specs, budget) -> ExtensionReport:
    c = F.components[0]
    closed = max(c.num.degree(), c.den.degree())
    trials = []
    good: list[tuple[int, int]] = []
    failures = 0
    used = set()
    chosen = None
    while len({l for l, _ in good}) < lams:
        lam = rng.choice([k for k in range(-9, 10) if k and k not in used] or [1])
        used.add(lam)
        R = _dim1_eliminant(c, lam)
        count = 0
        while count < specs:
            y = _random_y(rng, 1)
            special = R.partial_evaluate({1: y[0]}).to_univariate(0)
            entry = {"lambda": [lam], "y": [format_rational(v) for v in y]}
            if special.degree() < R.degree_in(0) or special.gcd(special.derivative()).degree() > 0:
                entry.update(accepted=False, reason="degree drop or repeated root")
                trials.append(entry)
                failures += 1
                if failures > budget:
                    raise GenericityFailure("specializations keep degenerating")
                continue
            entry.update(accepted=True, degree=special.degree())
            trials.append(entry)
            good.append((lam, special.degree()))
            count += 1
        chosen = chosen or (lam, R)
    degrees = {d for _, d in good}
    if len(degrees) != 1:
        raise GenericityFailure(f"unstable degrees {sorted(degrees)}")
    d = degrees.pop()
    if d != closed:
        raise GenericityFailure(f"elimination degree {d} disagrees with max(deg num, deg den) = {closed}")
    lam, R = chosen
    return ExtensionReport(d, (lam,), R, trials, closed_form=closed)


def _dim1_eliminant(c: RatFunc, lam: int) -> MultiPoly:
    """num(T/lam) - y den(T/lam) in Q[T, y], primitive."""
    x = MultiPoly.var(2, 0) * Fraction(1, lam)
    y = MultiPoly.var(2, 1)
    num = c.num.to_univariate(0) if c.num.variables() else UniPoly([c.num.constant_value()])
    den = c.den.to_univariate(0) if c.den.variables() else UniPoly([c.den.constant_value()])

    def at(u: UniPoly) -> MultiPoly:
        acc = MultiPoly.zero(2)
        for coef in reversed(u.coeffs):
            acc = acc * x + coef
        return acc

    return (at(num) - y * at(den)).primitive()


def _degree_dim2(F, rng, lams, specs, budget, with_minpoly) -> ExtensionReport:
    A4, B4 = _system(F)  # variables x1, x2, y1, y2
    bases_src = [(c.num, c.den) for c in F.components if not c.den.is_constant()]
    trials: list[dict] = []
    per_lam: dict[tuple[int, int], list[int]] = {}
    raw_deg: dict[tuple[int, int], int] = {}
    sheared = {}
    failures = 0
    seen = set()
    while sum(1 for v in per_lam.values() if len(v) >= specs) < lams:
        lam = (rng.randint(1, 9) * rng.choice((1, -1)), rng.randint(-9, 9))
        if lam in seen:
            continue
        seen.add(lam)
        As, Bs = shear(A4, lam), shear(B4, lam)
        lcs = [p.as_univariate(1)[-1] for p in (As, Bs)]
        if any(0 in lc.variables() for lc in lcs):
            trials.append({"lambda": list(lam), "accepted": False, "reason": "leading coefficient depends on T"})
            failures += 1
            if failures > budget:
                raise GenericityFailure("no linear form in general position")
            continue
        bases = [resultant_in_T(shear(num, lam), shear(den, lam)) for num, den in bases_src]
        degs: list[int] = []
        attempts = 0
        while len(degs) < specs and attempts < specs + budget:
            attempts += 1
            y = _random_y(rng, 2)
            assign = {2: y[0], 3: y[1]}
            a = As.partial_evaluate(assign).embed(2, [0, 1, 0, 0])
            b = Bs.partial_evaluate(assign).embed(2, [0, 1, 0, 0])
            entry = {"lambda": list(lam), "y": [format_rational(v) for v in y]}
            if any(not p.as_univariate(1) or p.as_univariate(1)[-1].is_zero() for p in (a, b)) \
                    or a.degree_in(1) < As.degree_in(1) or b.degree_in(1) < Bs.degree_in(1):
                entry.update(accepted=False, reason="leading coefficient vanishes")
                trials.append(entry)
                continue
            R = resultant_in_T(a, b)
            if not R:
                entry.update(accepted=False, reason="eliminant vanished")
                trials.append(entry)
                continue
            E = _strip_T_content(R, bases)
            if E.gcd(E.derivative()).degree() > 0:
                entry.update(accepted=False, reason="eliminant not squarefree")
                trials.append(entry)
                continue
            entry.update(accepted=True, degree=E.degree(), raw_degree=R.degree())
            trials.append(entry)
            degs.append(E.degree())
            raw_deg[lam] = max(raw_deg.get(lam, -1), R.degree())
        if len(degs) < specs:
            failures += 1
            if failures > budget:
                raise GenericityFailure("too many rejected specializations")
            continue
        per_lam[lam] = degs
        sheared[lam] = (As, Bs)
    values = {d for v in per_lam.values() for d in v}
    if len(values) != 1:
        raise GenericityFailure(f"unstable eliminant degrees {sorted(values)}")
    d = values.pop()
    lam = next(iter(per_lam))
    As, Bs = sheared[lam]
    if with_minpoly:
        R = generic_eliminant(As, Bs, raw_deg[lam], rng)
        R = _remove_T_content(R)
        if R.degree_in(0) != d:
            raise GenericityFailure(f"generic eliminant has T-degree {R.degree_in(0)}, trials said {d}")
    else:
        R = MultiPoly.zero(3)
    return ExtensionReport(d, lam, R, trials)


# ---------------------------------------------------------------------------
# generic eliminant by dense interpolation over (T, y1, y2)


class _IntForm:
    """A sheared polynomial in (T, w, y1, y2) as integer data grouped by powers of w."""

    def __init__(self, p: MultiPoly):
        scale = 1
        for _, c in p.items():
            scale = lcm(scale, c.denominator)
        self.scale = scale
        self.dw = p.degree_in(1)
        self.rows: list[list[tuple[int, int, int, int]]] = [[] for _ in range(self.dw + 1)]
        for e, c in p.items():
            self.rows[e[1]].append((e[0], e[2], e[3], int(c * scale)))

    def at(self, t, a, b, mod=None) -> list[int]:
        out = []
        for row in self.rows:
            acc = 0
            for et, e1, e2, c in row:
                if mod is None:
                    acc += c * t ** et * a ** e1 * b ** e2
                else:
                    acc = (acc + c * pow(t, et, mod) * pow(a, e1, mod) * pow(b, e2, mod)) % mod
            out.append(acc)
        return out


def _nodes(lc_row, which: int, count: int) -> list[int]:
    """Integer nodes where the w-leading coefficient (a polynomial in one y variable) is nonzero."""
    out = []
    k = 0
    while len(out) < count:
        val = sum(c * (k ** (e1 if which == 1 else e2)) for _, e1, e2, c in lc_row)
        if val != 0:
            out.append(k)
        k = -k if k > 0 else -k + 1
    return out


def _probe_y_degree(Ai: _IntForm, Bi: _IntForm, which: int, bound: int, rng: random.Random) -> int:
    best = -1
    p = K.PROBE_PRIMES[0]
    for _ in range(2):
        t = rng.randint(1, p - 1)
        other = rng.randint(1, p - 1)
        xs, ys = [], []
        k = 0
        while len(xs) < bound + 1:
            a_val, b_val = (k, other) if which == 1 else (other, k)
            a = Ai.at(t, a_val, b_val, p)
            b = Bi.at(t, a_val, b_val, p)
            if a[-1] % p and b[-1] % p:
                xs.append(k)
                ys.append(K.res_mod(a, b, p))
            k += 1
        dd = K.newton_coeffs_mod(xs, ys, p)
        best = max(best, max((i for i, c in enumerate(dd) if c), default=-1))
    return best


def generic_eliminant(As: MultiPoly, Bs: MultiPoly, deg_T: int, rng: random.Random) -> MultiPoly:
    """Res_w(As, Bs) as a polynomial in (T, y1, y2), by exact interpolation on a grid."""
    Ai, Bi = _IntForm(As), _IntForm(Bs)
    d1 = _probe_y_degree(Ai, Bi, 1, Bi.dw, rng)
    d2 = _probe_y_degree(Ai, Bi, 2, Ai.dw, rng)
    tn = list(range(deg_T + 1))
    n1 = _nodes(Ai.rows[-1], 1, d1 + 1)
    n2 = _nodes(Bi.rows[-1], 2, d2 + 1)
    # values[k2][k1] -> interpolate in T first
    coeffs: dict[tuple[int, int, int], Fraction] = {}
    layer2 = []
    for b in n2:
        layer1 = []
        for a in n1:
            vals = [K.zres(Ai.at(t, a, b), Bi.at(t, a, b)) for t in tn]
            cT = K.interpolate(tn, vals)
            cT += [Fraction(0)] * (deg_T + 1 - len(cT))
            layer1.append(cT)
        # interpolate each T-coefficient along y1
        per_T = []
        for e in range(deg_T + 1):
            c1 = K.interpolate(n1, [row[e] for row in layer1])
            per_T.append(c1 + [Fraction(0)] * (d1 + 1 - len(c1)))
        layer2.append(per_T)
    for e in range(deg_T + 1):
        for e1 in range(d1 + 1):
            c2 = K.interpolate(n2, [layer2[k][e][e1] for k in range(len(n2))])
            for e2, v in enumerate(c2):
                if v:
                    coeffs[(e, e1, e2)] = v
    scale = Fraction(1, Ai.scale ** Bi.dw * Bi.scale ** Ai.dw)
    R = MultiPoly(3, {k: v * scale for k, v in coeffs.items()})
    # exact spot checks away from the grid
    for _ in range(3):
        t, a, b = rng.randint(-50, 50), rng.randint(-50, 50), rng.randint(-50, 50)
        av, bv = Ai.at(t, a, b), Bi.at(t, a, b)
        if not av[-1] or not bv[-1]:
            continue
        if R.evaluate((t, a, b)) != K.zres(av, bv) * scale:
            raise GenericityFailure("interpolated eliminant failed an exact spot check")
    return R


def _remove_T_content(R: MultiPoly) -> MultiPoly:
    """Divide out factors depending on T only (base points of a rational map), normalize."""
    buckets: dict[tuple, dict] = {}
    for e, c in R.items():
        buckets.setdefault(e[1:], {})[e[0]] = c
    g = None
    for terms in buckets.values():
        u = UniPoly([terms.get(k, 0) for k in range(max(terms) + 1)])
        g = u if g is None else g.gcd(u)
        if g.degree() == 0:
            break
    if g is not None and g.degree() > 0:
        R = _divide_by_T_poly(R, g)
    return R.primitive()


def _divide_by_T_poly(R: MultiPoly, g: UniPoly) -> MultiPoly:
    buckets: dict[tuple, dict] = {}
    for e, c in R.items():
        buckets.setdefault(e[1:], {})[e[0]] = c
    out = {}
    for rest, terms in buckets.items():
        u = UniPoly([terms.get(k, 0) for k in range(max(terms) + 1)])
        q, r = divmod(u, g)
        if r:
            raise ArithmeticError("content does not divide")
        for k, v in enumerate(q.coeffs):
            if v:
                out[(k,) + rest] = v
    return MultiPoly(R.nvars, out)


# ---------------------------------------------------------------------------
# annihilation


def minpoly_annihilation_check(F: RatMap, report: ExtensionReport, seed: int = 0,
                               symbolic_limit: int = 80, points: int = 8) -> bool:
    """R(lam.x, F(x)) = 0: symbolically when small, else at random exact points (Schwartz-Zippel)."""
    n = F.n
    R = report.eliminant
    T = MultiPoly.zero(n)
    for i, l in enumerate(report.lam):
        T = T + MultiPoly.var(n, i) * l
    size = R.degree_in(0) + sum(R.degree_in(i + 1) * max(c.num.degree(), c.den.degree(), 1)
                                for i, c in enumerate(F.components))
    if size <= symbolic_limit:
        assign = {0: RatFunc.from_poly(T)}
        assign.update({i + 1: c for i, c in enumerate(F.components)})
        return substitute(R, assign, n).is_zero()
    rng = random.Random(seed)
    checked = 0
    tries = 0
    while checked < points and tries < 10 * points:
        tries += 1
        x = [Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 10 ** 6)) for _ in range(n)]
        try:
            y = F.evaluate(x)
        except AlgebraError:
            continue
        if R.evaluate([T.evaluate(x), *y]) != 0:
            return False
        checked += 1
    return checked == points


# ---------------------------------------------------------------------------
# n = 1 automorphisms


@dataclass(frozen=True)
class MoebiusMap:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    @classmethod
    def make(cls, a, b, c, d) -> "MoebiusMap":
        vals = [Fraction(v) for v in (a, b, c, d)]
        if vals[0] * vals[3] - vals[1] * vals[2] == 0:
            raise AlgebraError("SingularMoebius", "ad - bc = 0")
        lead = next(v for v in vals if v)
        return cls(*(v / lead for v in vals))

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls.make(1, 0, 0, 1)

    def as_ratfunc(self) -> RatFunc:
        x = MultiPoly.var(1, 0)
        return RatFunc(x * self.a + self.b, x * self.c + self.d)

    def __call__(self, x: Fraction) -> Fraction:
        return (self.a * x + self.b) / (self.c * x + self.d)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self o other."""
        a, b, c, d = self.a, self.b, self.c, self.d
        p, q, r, s = other.a, other.b, other.c, other.d
        return MoebiusMap.make(a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap.make(self.d, -self.b, -self.c, self.a)

    def __str__(self) -> str:
        from .algebra import format_ratfunc

        return format_ratfunc(self.as_ratfunc(), ["x"])

    def to_json(self) -> dict:
        return {"coefficients": [format_rational(v) for v in (self.a, self.b, self.c, self.d)],
                "map": str(self)}


def _phi(c: RatFunc) -> tuple[UniPoly, UniPoly]:
    def uni(p):
        return p.to_univariate(0) if p.variables() else UniPoly([p.constant_value()])

    return uni(c.num), uni(c.den)


def _rational_roots(u: UniPoly) -> list[Fraction]:
    out = []
    for box in isolate_real_roots(u, Fraction(1, 4)):
        v = box.rational_value()
        if v is not None:
            out.append(v)
    return out


def _moebius_through(pairs) -> MoebiusMap | None:
    # a x + b - c x v - d v = 0 for each pair (x, v)
    rows = [[x, Fraction(1), -x * v, -v] for x, v in pairs]
    null = nullspace(rows, 4)
    if len(null) != 1:
        return None
    try:
        return MoebiusMap.make(*null[0])
    except AlgebraError:
        return None




def automorphisms_dim1(F: RatMap) -> list[MoebiusMap]:
    """All Moebius maps g with rational coefficients and f o g = f.

    g sends each rational point x0 to a rational root of
    num(X) den(x0) - num(x0) den(X); three points fix g, and every candidate
    is confirmed by the exact identity f o g = f.
    """
    if F.n != 1:
        raise AlgebraError("UnsupportedDimension", "automorphisms are computed for n = 1")
    if not dominance_check(F):
        raise NotDominant()
    f = F.components[0]
    num, den = _phi(f)
    top = max(num.degree(), den.degree())
    chosen = []
    for x0 in (Fraction(k, q) for q in (1, 2, 3) for k in range(-6, 7)):
        if den(x0) == 0:
            continue
        phi = num * den(x0) - den * num(x0)
        if phi.degree() < top:
            continue
        chosen.append((x0, _rational_roots(phi)))
        if len(chosen) == 4:
            break
    if len(chosen) < 4:
        raise GenericityFailure("could not find enough admissible sample points")
    (x1, r1), (x2, r2), (x3, r3), (x4, r4) = chosen
    found: dict[MoebiusMap, None] = {}
    for v1, v2, v3 in product(r1, r2, r3):
        g = _moebius_through([(x1, v1), (x2, v2), (x3, v3)])
        if g is None or g in found:
            continue
        if g.c * x4 + g.d == 0 or g(x4) not in r4:
            continue
        composed = substitute_ratfunc(f, {0: g.as_ratfunc()}, 1)
        if composed == f:
            found[g] = None
    out = list(found)
    if MoebiusMap.identity() not in found:
        raise AlgebraError("InternalError", "identity automorphism not recovered")
    out.sort(key=lambda g: (g != MoebiusMap.identity(), str(g)))
    return out


def is_group(maps: Sequence[MoebiusMap]) -> bool:
    s = set(maps)
    return all(g.compose(h) in s for g in s for h in s) and all(g.inverse() in s for g in s)


def galois_check_dim1(F: RatMap, seed: int = 0) -> bool:
    return len(automorphisms_dim1(F)) == extension_degree(F, seed).degree


def eliminant_for_form(F: RatMap, lam: tuple[int, int], seed: int = 0) -> MultiPoly:
    """R(T, y1, y2) for the linear form T = lam.x, free of factors in T alone (n = 2)."""
    if F.n != 2:
        raise AlgebraError("UnsupportedDimension", "plane maps only")
    rng = random.Random(seed)
    A4, B4 = _system(F)
    As, Bs = shear(A4, lam), shear(B4, lam)
    if any(0 in p.as_univariate(1)[-1].variables() for p in (As, Bs)):
        raise GenericityFailure(f"linear form {lam} is not in general position")
    deg_T = -1
    for _ in range(2):
        y = _random_y(rng, 2)
        a = As.partial_evaluate({2: y[0], 3: y[1]}).embed(2, [0, 1, 0, 0])
        b = Bs.partial_evaluate({2: y[0], 3: y[1]}).embed(2, [0, 1, 0, 0])
        deg_T = max(deg_T, resultant_in_T(a, b).degree())
    return _remove_T_content(generic_eliminant(As, Bs, deg_T, rng))

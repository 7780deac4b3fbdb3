"""Positivity certificates and falsification sampling for polynomials over Q.

A certificate states  sign * g = scale * (sum_i w_i s_i^2 + c)  with
rational weights w_i > 0, c >= 0 and scale > 0, checked by exact expansion.
When c = 0 strictness needs a separate argument: the squares must have no
common real zero, which is decided exactly for one or two variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .algebra import MultiPoly, UniPoly, format_poly, format_rational, nullspace
from .elimination import DegenerateSystem, ShearFailure, solve_plane_system
from .realroots import RootBox, count_real_roots, isolate_real_roots, sign_at


@dataclass(frozen=True)
class SOSCertificate:
    squares: tuple[MultiPoly, ...]
    weights: tuple[Fraction, ...]
    constant: Fraction
    sign: int = 1
    scale: Fraction = Fraction(1)
    origin: str = "supplied"
    strict_reason: str = ""

    def expand(self) -> MultiPoly:
        nvars = self.squares[0].nvars if self.squares else 0
        total = MultiPoly.const(nvars, self.constant)
        for w, s in zip(self.weights, self.squares):
            total = total + s * s * w
        return total

    def describe(self, names: Sequence[str] | None = None) -> str:
        parts = []
        for w, s in zip(self.weights, self.squares):
            body = f"({format_poly(s, names)})^2"
            parts.append(body if w == 1 else f"{format_rational(w)}*{body}")
        if self.constant or not parts:
            parts.append(format_rational(self.constant))
        text = " + ".join(parts)
        lead = "-" if self.sign < 0 else ""
        factor = "" if self.scale == 1 else f"{format_rational(self.scale)}*"
        return f"{lead}{factor}[{text}]"


def check_certificate(g: MultiPoly, squares: Sequence[MultiPoly], constant,
                      weights: Sequence | None = None, origin: str = "supplied") -> SOSCertificate | None:
    """Return a certificate if +-g is a positive multiple of sum w_i s_i^2 + c, else None."""
    constant = Fraction(constant)
    weights = tuple(Fraction(w) for w in (weights or [1] * len(squares)))
    if constant < 0 or any(w <= 0 for w in weights) or g.is_zero():
        return None
    squares = tuple(s for s in squares)
    cert = SOSCertificate(squares, weights, constant, origin=origin)
    expanded = cert.expand() if squares else MultiPoly.const(g.nvars, constant)
    if expanded.is_zero():
        return None
    lm = expanded.leading_monomial()
    ratio = g.coefficient(lm) / expanded.leading_coefficient()
    if ratio == 0 or g != expanded * ratio:
        return None
    sign = 1 if ratio > 0 else -1
    return SOSCertificate(squares, weights, constant, sign, abs(ratio), origin)


def strictness(cert: SOSCertificate, seed: int = 0) -> tuple[bool, str]:
    """Decide whether the certified sum is strictly positive everywhere."""
    if cert.constant > 0:
        return True, f"positive constant {format_rational(cert.constant)}"
    squares = [s for s in cert.squares if not s.is_zero()]
    if any(s.is_constant() for s in squares):
        return True, "a square of a nonzero constant"
    if not squares:
        return False, "empty sum"
    nvars = squares[0].nvars
    used = set().union(*(s.variables() for s in squares))
    if len(used) == 1:
        (v,) = used
        g = squares[0].to_univariate(v)
        for s in squares[1:]:
            g = g.gcd(s.to_univariate(v))
        if g.degree() <= 0 or count_real_roots(g) == 0:
            return True, "squares have no common real zero (Sturm)"
        return False, "squares share a real zero"
    if nvars == 2:
        for a, b in combinations(squares, 2):
            try:
                res = solve_plane_system(a, b, seed=seed)
            except (DegenerateSystem, ShearFailure):
                continue
            if not res.points:
                return True, "two of the squares have no common real zero (exact elimination)"
        for k, a in enumerate(squares):
            rest = MultiPoly.zero(nvars)
            for s in squares[:k] + squares[k + 1:]:
                rest = rest + s * s
            try:
                res = solve_plane_system(a, rest, seed=seed)
            except (DegenerateSystem, ShearFailure):
                continue
            if not res.points:
                return True, "one square and the sum of the others have no common real zero (exact elimination)"
    return False, "no strictness argument found"


# ---------------------------------------------------------------------------
# certificate search


def monomial_square_certificate(g: MultiPoly) -> SOSCertificate | None:
    """g (or -g) with all exponents even, all coefficients of one sign and a nonzero constant term."""
    if g.is_zero() or g.coefficient((0,) * g.nvars) == 0:
        return None
    sign = 1 if g.coefficient((0,) * g.nvars) > 0 else -1
    squares, weights = [], []
    constant = Fraction(0)
    for e, c in sorted(g.items(), key=lambda item: item[0]):
        if any(k % 2 for k in e) or c * sign <= 0:
            return None
        if not any(e):
            constant = c * sign
            continue
        squares.append(MultiPoly(g.nvars, {tuple(k // 2 for k in e): 1}))
        weights.append(c * sign)
    return check_certificate(g, squares, constant, weights, origin="monomial squares")


def _candidate_basis(g: MultiPoly) -> list[tuple[int, ...]]:
    n = g.nvars
    half = g.degree() // 2
    caps = [g.degree_in(i) // 2 for i in range(n)]
    out = [e for e in product(*(range(c + 1) for c in caps)) if sum(e) <= half]
    return out


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def gram_certificate(g: MultiPoly, max_basis: int = 60) -> SOSCertificate | None:
    """Heuristic Gram-matrix decomposition by exact LDL^T.

    Coefficients of g are spread evenly over the basis pairs producing each
    monomial; basis elements that are forced to vanish are pruned.  Succeeds
    when the resulting symmetric matrix is positive semidefinite, which covers
    the common textbook cases without a semidefinite solver.
    """
    if g.is_zero() or g.degree() % 2:
        return None
    sign = 1 if g.leading_coefficient() > 0 else -1
    h = g * sign
    coeff = dict(h.items())
    basis = _candidate_basis(h)
    if len(basis) > max_basis:
        return None
    for _ in range(len(basis) + 1):
        pairs: dict[tuple, list[tuple[int, int]]] = {}
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                pairs.setdefault(_add(a, b), []).append((i, j))
        if any(e not in pairs for e in coeff):
            return None
        drop = None
        for i, a in enumerate(basis):
            sq = _add(a, a)
            if pairs[sq] == [(i, i)] and coeff.get(sq, 0) <= 0:
                if coeff.get(sq, 0) < 0:
                    return None
                drop = i
                break
        if drop is not None:
            basis = basis[:drop] + basis[drop + 1:]
            continue
        size = len(basis)
        Q = [[Fraction(0)] * size for _ in range(size)]
        for mono, plist in pairs.items():
            c = coeff.get(mono, Fraction(0))
            share = c / len(plist)
            for i, j in plist:
                Q[i][j] = share
        order = sorted(range(size), key=lambda i: (not any(basis[i]) , [-x for x in basis[i]]))
        result = _ldl(Q, order)
        if isinstance(result, int):
            basis = basis[:result] + basis[result + 1:]
            continue
        if result is None:
            return None
        squares, weights = [], []
        constant = Fraction(0)
        for d, vec in result:
            poly = MultiPoly(h.nvars, {basis[i]: v for i, v in vec.items() if v})
            if poly.is_constant():
                constant += d * poly.constant_value() ** 2
            else:
                squares.append(poly)
                weights.append(d)
        cert = check_certificate(g, squares, constant, weights, origin="Gram decomposition")
        return cert
    return None


def _ldl(Q, order):
    """Exact LDL^T in the given pivot order.

    Returns a list of (d_k, {index: coefficient}) on success, None on a
    negative pivot, or an index to drop when a zero pivot has a nonzero row.
    """
    M = [row[:] for row in Q]
    out = []
    remaining = list(order)
    while remaining:
        k = remaining.pop(0)
        d = M[k][k]
        if d < 0:
            return None
        if d == 0:
            if any(M[k][j] for j in remaining):
                return k
            continue
        vec = {k: Fraction(1)}
        for j in remaining:
            vec[j] = M[j][k] / d
        for i in remaining:
            li = vec[i]
            if not li:
                continue
            for j in remaining:
                M[i][j] -= li * d * vec[j]
        out.append((d, vec))
    return out


def _pruned_basis(h: MultiPoly, coeff: dict) -> list[tuple[int, ...]] | None:
    # drop basis monomials whose square can only come from the diagonal and is absent
    basis = _candidate_basis(h)
    while True:
        pairs: dict[tuple, list[tuple[int, int]]] = {}
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                pairs.setdefault(_add(a, b), []).append((i, j))
        drop = [i for i, a in enumerate(basis)
                if pairs[_add(a, a)] == [(i, i)] and coeff.get(_add(a, a), 0) == 0]
        if not drop:
            return basis
        basis = [a for i, a in enumerate(basis) if i not in drop]


def _gram_classes(basis) -> dict[tuple, list[tuple[int, int]]]:
    classes: dict[tuple, list[tuple[int, int]]] = {}
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            classes.setdefault(_add(a, b), []).append((i, j))
    return classes


def numeric_gram_certificate(g: MultiPoly, max_basis: int = 40, iterations: int = 3000) -> SOSCertificate | None:
    """Gram matrix found numerically, then rounded and checked exactly.

    Alternating projections between the affine space of Gram matrices of g and
    the cone of matrices with eigenvalues >= a small margin give a floating
    point candidate.  Its rational rounding is projected back onto the affine
    space exactly; the certificate stands only if the exact LDL^T succeeds.
    """
    if g.is_zero() or g.degree() % 2:
        return None
    sign = 1 if g.leading_coefficient() > 0 else -1
    h = g * sign
    coeff = dict(h.items())
    basis = _pruned_basis(h, coeff)
    if basis is None or len(basis) > max_basis:
        return None
    classes = _gram_classes(basis)
    if any(e not in classes for e in coeff):
        return None
    size = len(basis)
    idx = [(np.array([i for i, _ in pl]), np.array([j for _, j in pl]), float(coeff.get(m, 0)), len(pl))
           for m, pl in classes.items()]
    scale = max(abs(float(c)) for c in coeff.values())
    margin = 1e-3 * scale

    def to_affine(Q):
        for rows, cols, c, k in idx:
            Q[rows, cols] += (c - Q[rows, cols].sum()) / k
        return Q

    Q = to_affine(np.zeros((size, size)))
    for _ in range(iterations):
        w, U = np.linalg.eigh((Q + Q.T) / 2)
        if w.min() >= margin / 2:
            break
        Q = to_affine((U * np.maximum(w, margin)) @ U.T)
    for digits in (10 ** 3, 10 ** 6, 10 ** 9):
        R = [[Fraction(float(Q[i][j])).limit_denominator(digits) for j in range(size)] for i in range(size)]
        for m, pl in classes.items():
            fix = (coeff.get(m, Fraction(0)) - sum(R[i][j] for i, j in pl)) / len(pl)
            for i, j in pl:
                R[i][j] += fix
        result = _ldl(R, list(range(size)))
        if not isinstance(result, list):
            continue
        squares, weights = [], []
        constant = Fraction(0)
        for d, vec in result:
            poly = MultiPoly(h.nvars, {basis[i]: v for i, v in vec.items() if v})
            if poly.is_constant():
                constant += d * poly.constant_value() ** 2
            else:
                squares.append(poly)
                weights.append(d)
        cert = check_certificate(g, squares, constant, weights, origin="numeric Gram decomposition")
        if cert is not None:
            return cert
    return None


def _positive_everywhere(u: UniPoly) -> bool:
    return bool(u) and count_real_roots(u) == 0 and u(Fraction(0)) > 0


def quadratic_sign_proof(g: MultiPoly) -> tuple[int, str] | None:
    """(sign, reason) when a bivariate g is quadratic in one variable and keeps a strict sign.

    With g = A x^2 + B x + C in x and A, B, C in the other variable y, g > 0
    everywhere iff A(y) > 0 and 4AC - B^2 > 0 for every real y.
    """
    if g.nvars != 2:
        return None
    for v in (0, 1):
        if g.degree_in(v) != 2:
            continue
        w = 1 - v
        C, B, A = (c.to_univariate(w) for c in g.as_univariate(v))
        for sign in (1, -1):
            a, b, c = A * sign, B * sign, C * sign
            if _positive_everywhere(a) and _positive_everywhere(a * c * 4 - b * b):
                return sign, (f"quadratic in x{v + 1} with leading coefficient and discriminant "
                              f"of fixed sign in x{w + 1} (Sturm)")
    return None


def invariant_directions(g: MultiPoly) -> list[list[Fraction]]:
    """Basis of the directions v with v . grad g = 0, i.e. g(x + s v) = g(x)."""
    n = g.nvars
    partials = [g.diff(i) for i in range(n)]
    monos = sorted({e for d in partials for e, _ in d.items()})
    rows = [[d.coefficient(m) for d in partials] for m in monos]
    return nullspace(rows, n)


def axis_restriction(g: MultiPoly) -> tuple[int, UniPoly] | None:
    """(k, g restricted to the x_k axis) when g is a polynomial in one linear form.

    If the invariant directions span a hyperplane V and e_k is not in V, every
    point is t e_k + v with v in V, so g and its restriction have the same range.
    """
    n = g.nvars
    if n < 2 or g.is_constant():
        return None
    V = invariant_directions(g)
    if len(V) != n - 1:
        return None
    for k in range(n):
        cols = V + [[Fraction(int(i == k)) for i in range(n)]]
        if not nullspace([[c[r] for c in cols] for r in range(n)], n):
            rest = g.partial_evaluate({j: 0 for j in range(n) if j != k})
            return k, rest.to_univariate(k)
    return None


def search_certificate(g: MultiPoly) -> SOSCertificate | None:
    return monomial_square_certificate(g) or gram_certificate(g) or numeric_gram_certificate(g)


# ---------------------------------------------------------------------------
# falsification by sampling


def _radical_inverse(i: int, base: int) -> Fraction:
    out = Fraction(0)
    f = Fraction(1, base)
    while i:
        i, digit = divmod(i, base)
        out += digit * f
        f /= base
    return out


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def halton_points(n: int, count: int, bound) -> list[tuple[Fraction, ...]]:
    """Deterministic rational low-discrepancy points in [-bound, bound]^n."""
    if n > len(_PRIMES):
        raise ValueError("dimension too large for the Halton sampler")
    bound = Fraction(bound)
    return [tuple(-bound + 2 * bound * _radical_inverse(i, _PRIMES[k]) for k in range(n))
            for i in range(1, count + 1)]


def small_lattice(n: int, limit: int = 8) -> list[tuple[Fraction, ...]]:
    """All points whose coordinates are p/q with |p|, q <= limit (one variable) or a small grid."""
    if n == 1:
        vals = sorted({Fraction(p, q) for q in range(1, limit + 1) for p in range(-limit, limit + 1)})
        return [(v,) for v in vals]
    base = [Fraction(k, 2) for k in range(-4, 5)]
    if n > 3:
        base = [Fraction(-1), Fraction(0), Fraction(1)]
    return list(product(base, repeat=n))


@dataclass
class Witness:
    """An exact zero: a rational point, or a point on a rational segment at a root box of the parameter."""

    point: tuple[Fraction, ...] | None = None
    segment: tuple[tuple[Fraction, ...], tuple[Fraction, ...]] | None = None
    parameter: RootBox | None = None
    axis: int | None = None

    def to_json(self) -> dict:
        if self.point is not None and self.parameter is None:
            return {"point": [format_rational(c) for c in self.point]}
        out = {"parameter": self.parameter.to_json()}
        if self.segment is not None:
            a, b = self.segment
            out["segment"] = [[format_rational(c) for c in a], [format_rational(c) for c in b]]
            out["description"] = "a + s*(b - a) with s in the parameter box"
        if self.axis is not None:
            out["axis"] = self.axis
            out["point"] = [format_rational(c) if c is not None else None for c in self.point]
            out["description"] = f"coordinate x{self.axis + 1} is the root in the parameter box"
        return out

    def approx(self) -> tuple[float, ...]:
        if self.parameter is None:
            return tuple(float(c) for c in self.point)
        s = float(self.parameter.midpoint())
        if self.segment is not None:
            a, b = self.segment
            return tuple(float(x) + s * (float(y) - float(x)) for x, y in zip(a, b))
        return tuple(s if c is None else float(c) for c in self.point)


class _FloatPoly:
    def __init__(self, p: MultiPoly):
        items = list(p.items())
        self.exps = np.array([e for e, _ in items], dtype=np.int64).reshape(len(items), p.nvars)
        self.coeffs = np.array([float(c) for _, c in items])

    def values(self, pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Values and a magnitude scale (sum of absolute term values) at each point."""
        terms = np.ones((pts.shape[0], len(self.coeffs)))
        for k in range(pts.shape[1]):
            terms *= pts[:, k:k + 1] ** self.exps[:, k][None, :]
        terms *= self.coeffs[None, :]
        return terms.sum(axis=1), np.abs(terms).sum(axis=1)


def restrict_to_segment(p: MultiPoly, a, b) -> UniPoly:
    """p(a + s (b - a)) as a polynomial in s."""
    lines = [UniPoly([x, y - x]) for x, y in zip(a, b)]
    total = UniPoly()
    cache: dict[tuple[int, int], UniPoly] = {}
    for e, c in p.items():
        term = UniPoly([c])
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                if key not in cache:
                    cache[key] = lines[i] ** k
                term = term * cache[key]
        total = total + term
    return total


@dataclass
class SampleOutcome:
    witness: Witness | None
    samples: int
    signs: dict[int, int] = field(default_factory=dict)


def falsify(num: MultiPoly, den: MultiPoly | None, points: Sequence[tuple[Fraction, ...]]) -> SampleOutcome:
    """Search for an exact zero of num (with den nonzero) among points and along sign-change segments."""
    n = num.nvars
    pts = np.array([[float(c) for c in p] for p in points], dtype=float).reshape(len(points), n)
    vals, scale = _FloatPoly(num).values(pts)
    tol = 1e-9 * np.maximum(scale, 1e-300)
    confident = np.abs(vals) > tol
    pos = [i for i in np.nonzero(confident & (vals > 0))[0]]
    neg = [i for i in np.nonzero(confident & (vals < 0))[0]]
    signs = {1: len(pos), -1: len(neg), 0: 0}
    for idx in np.nonzero(~confident)[0]:
        p = points[idx]
        if num.evaluate(p) == 0 and (den is None or den.evaluate(p) != 0):
            signs[0] += 1
            return SampleOutcome(Witness(point=tuple(p)), len(points), signs)
    for i, j in _pairs(pos, neg):
        a, b = points[i], points[j]
        if _exact_sign(num, a) * _exact_sign(num, b) >= 0:
            continue
        w = segment_zero(num, den, a, b)
        if w is not None:
            return SampleOutcome(w, len(points), signs)
    return SampleOutcome(None, len(points), signs)


def _pairs(pos: list, neg: list, limit: int = 8) -> Iterable[tuple[int, int]]:
    for i in pos[:limit]:
        for j in neg[:limit]:
            yield (i, j) if i < j else (j, i)


def _exact_sign(p: MultiPoly, pt) -> int:
    v = p.evaluate(pt)
    return (v > 0) - (v < 0)


def segment_zero(num: MultiPoly, den: MultiPoly | None, a, b) -> Witness | None:
    """A zero of num on the open segment (a, b) where den does not vanish, if one exists."""
    u = restrict_to_segment(num, a, b)
    if not u:
        mid = tuple((x + y) / 2 for x, y in zip(a, b))
        return Witness(point=mid) if den is None or den.evaluate(mid) != 0 else None
    dseg = restrict_to_segment(den, a, b) if den is not None else None
    for box in isolate_real_roots(u, Fraction(1, 64)):
        # the endpoints are not roots, so refinement separates the box from them
        while box.lo < 0 < box.hi or box.lo < 1 < box.hi:
            box = box.refine(box.width / 4)
        if box.hi <= 0 or box.lo >= 1:
            continue
        if dseg is not None and sign_at(dseg, box) == 0:
            continue
        exact = box.rational_value()
        if exact is not None:
            pt = tuple(x + exact * (y - x) for x, y in zip(a, b))
            if den is None or den.evaluate(pt) != 0:
                return Witness(point=pt)
            continue
        return Witness(point=None, segment=(tuple(a), tuple(b)), parameter=box)
    return None

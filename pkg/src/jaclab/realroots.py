"""Sturm-sequence real-root counting and isolation over Q.

Roots are always taken of the squarefree part: multiplicities never matter
for counting fiber points.  Algebraic numbers are handled as isolating
intervals (:class:`RootBox`) and zero tests go through gcds, never epsilons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, log2

from . import _kernels as K
from .algebra import AlgebraError, UniPoly


def _as_unipoly(p) -> UniPoly:
    return p if isinstance(p, UniPoly) else UniPoly(p)


def _positive_primitive(coeffs: list[int]) -> list[int]:
    # positive rescaling only: Sturm signs must survive
    g = K.content(coeffs)
    return [c // g for c in coeffs] if g > 1 else list(coeffs)


def _int_form(p: UniPoly) -> list[int]:
    ints, _ = K.clear_denominators(p.coeffs)
    return _positive_primitive(ints)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _sign_at_int(coeffs: list[int], x: Fraction) -> int:
    """Sign of an integer polynomial at a rational, via the homogenized value."""
    p, q = x.numerator, x.denominator
    acc = 0
    qpow = 1
    # sum c_i p^i q^(d-i), evaluated Horner-style in p with q powers folded in
    for c in reversed(coeffs):
        acc = acc * p + c * qpow
        qpow *= q
    return _sign(acc)


@dataclass(frozen=True)
class SturmChain:
    """Signed remainder sequence of a squarefree polynomial (integer-scaled)."""

    polys: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, p) -> "SturmChain":
        p = _as_unipoly(p)
        if not p:
            raise AlgebraError("ZeroPolynomial", "Sturm chain of the zero polynomial")
        q = p.squarefree()
        chain = [_int_form(q)]
        if q.degree() > 0:
            chain.append(_int_form(q.derivative()))
            while len(chain[-1]) > 1:
                r = K.prem(chain[-2], chain[-1])
                # prem multiplies by lc^k; keep the sign of the true remainder
                lc = chain[-1][-1]
                e = len(chain[-2]) - len(chain[-1]) + 1
                if lc < 0 and e % 2:
                    r = [-c for c in r]
                if not r:
                    break
                chain.append(_positive_primitive([-c for c in r]))
        return cls(tuple(tuple(c) for c in chain))

    def variations_at(self, x: Fraction) -> int:
        signs = [_sign_at_int(list(c), x) for c in self.polys]
        return _count_variations(signs)

    def variations_at_infinity(self, positive: bool) -> int:
        signs = []
        for c in self.polys:
            s = _sign(c[-1])
            if not positive and (len(c) - 1) % 2:
                s = -s
            signs.append(s)
        return _count_variations(signs)

    def count(self, lo: Fraction | None = None, hi: Fraction | None = None) -> int:
        """Number of distinct roots in (lo, hi]; None means infinite."""
        vlo = self.variations_at_infinity(False) if lo is None else self.variations_at(lo)
        vhi = self.variations_at_infinity(True) if hi is None else self.variations_at(hi)
        return vlo - vhi


def _count_variations(signs: list[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def sturm_chain(p) -> list[UniPoly]:
    """The Sturm chain as UniPoly values (positive rescalings of the classical chain)."""
    return [UniPoly([Fraction(c) for c in cs]) for cs in SturmChain.of(p).polys]


def count_real_roots(p, lo=None, hi=None) -> int:
    """Distinct real roots of p in the closed interval [lo, hi] (None = unbounded)."""
    p = _as_unipoly(p)
    if not p:
        raise AlgebraError("ZeroPolynomial", "cannot count roots of the zero polynomial")
    lo = None if lo is None else Fraction(lo)
    hi = None if hi is None else Fraction(hi)
    if lo is not None and hi is not None and lo > hi:
        return 0
    chain = SturmChain.of(p)
    n = chain.count(lo, hi)
    if lo is not None and _sign_at_int(list(chain.polys[0]), lo) == 0:
        n += 1
    return n


def cauchy_bound(p: UniPoly) -> Fraction:
    """All real roots lie strictly inside (-B, B)."""
    lc = abs(p.lc())
    m = max((abs(c) for c in p.coeffs[:-1]), default=Fraction(0))
    return 1 + m / lc


@dataclass(frozen=True)
class RootBox:
    """Half-open interval (lo, hi] holding exactly one root of ``poly``.

    ``poly`` is the squarefree defining polynomial; ``simple`` records whether
    the root was simple in the polynomial the box was issued for.
    """

    lo: Fraction
    hi: Fraction
    poly: UniPoly = field(compare=False)
    simple: bool = True

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())

    def refine(self, width) -> "RootBox":
        return refine(self, width)

    def rational_value(self) -> Fraction | None:
        """The root itself when it is rational, else None.

        A rational root p/q of the integer form has q | lc, and distinct
        fractions with denominators <= lc are 1/lc^2 apart, so refining below
        that spacing makes the best approximation decisive.
        """
        lead = max(abs(self.poly.integer_coeffs()[-1]), 1)
        box = refine(self, Fraction(1, 2 * lead * lead))
        cand = box.midpoint().limit_denominator(lead)
        if box.lo < cand <= box.hi and box.poly(cand) == 0:
            return cand
        return None

    def to_json(self) -> dict:
        from .algebra import format_rational, format_univariate

        return {
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
            "poly": format_univariate(UniPoly(self.poly.integer_coeffs()), "t"),
            "approx": float(self.midpoint()),
        }


def _nonroot_split(q_int: list[int], lo: Fraction, hi: Fraction) -> Fraction:
    mid = (lo + hi) / 2
    k = 3
    while _sign_at_int(q_int, mid) == 0:
        mid = lo + (hi - lo) * Fraction(k - 1, 2 * k)
        k += 1
    return mid


def isolate_real_roots(p, width=Fraction(1)) -> list[RootBox]:
    """Disjoint isolating boxes of width <= ``width``, sorted by position."""
    p = _as_unipoly(p)
    if not p:
        raise AlgebraError("ZeroPolynomial", "cannot isolate roots of the zero polynomial")
    width = Fraction(width)
    if width <= 0:
        raise ValueError("width must be positive")
    q = p.squarefree()
    if q.degree() <= 0:
        return []
    chain = SturmChain.of(q)
    q_int = list(chain.polys[0])
    b = cauchy_bound(q)
    b = Fraction(floor(b) + 1)
    multiplicity_free = q.degree() == p.degree()
    out: list[RootBox] = []
    stack = [(-b, b, chain.count(-b, b))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(_shrink(RootBox(lo, hi, q, multiplicity_free), width, q_int))
            continue
        mid = _nonroot_split(q_int, lo, hi)
        left = chain.count(lo, mid)
        stack.append((mid, hi, n - left))
        stack.append((lo, mid, left))
    out.sort(key=lambda bx: bx.lo)
    if not multiplicity_free:
        out = [_mark_simple(bx, p) for bx in out]
    return out


def _mark_simple(box: RootBox, p: UniPoly) -> RootBox:
    dp = p.derivative()
    simple = sign_at(dp, box) != 0
    return RootBox(box.lo, box.hi, box.poly, simple)


def _shrink(box: RootBox, width: Fraction, q_int: list[int] | None = None) -> RootBox:
    if box.width <= width:
        return box
    if q_int is None:
        q_int = _int_form(box.poly)
    lo, hi = box.lo, box.hi
    s_hi = _sign_at_int(q_int, hi)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = _sign_at_int(q_int, mid)
        if s == 0:
            # exact rational root: center a small non-root box on it
            delta = width / 2
            while True:
                a, c = mid - delta, mid + delta / 2
                if a >= lo and c <= hi and _sign_at_int(q_int, a) and _sign_at_int(q_int, c):
                    if SturmChain.of(box.poly).count(a, c) == 1:
                        return RootBox(a, c, box.poly, box.simple)
                delta /= 2
        if s == s_hi:
            hi, s_hi = mid, s
        else:
            lo = mid
    return RootBox(lo, hi, box.poly, box.simple)


def refine(box: RootBox, width) -> RootBox:
    return _shrink(box, Fraction(width))


def sign_at(p, point) -> int:
    """Exact sign of p at a rational or at the algebraic number inside a RootBox."""
    p = _as_unipoly(p)
    if not isinstance(point, RootBox):
        return _sign(p(Fraction(point)))
    if not p:
        return 0
    if p.degree() == 0:
        return _sign(p.lc())
    g = p.gcd(point.poly)
    if g.degree() > 0 and SturmChain.of(g).count(point.lo, point.hi) > 0:
        return 0
    chain = SturmChain.of(p)
    p_int = list(chain.polys[0])
    box = point
    while True:
        if _sign_at_int(p_int, box.lo) != 0 and chain.count(box.lo, box.hi) == 0:
            return _sign(p(box.hi))
        box = refine(box, box.width / 4)


def interval_eval(p: UniPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of p over [lo, hi] by interval Horner evaluation."""
    a = b = Fraction(0)
    for c in reversed(p.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def descartes_bound(p) -> int:
    """Sign variations of the coefficient sequence (bounds positive roots)."""
    p = _as_unipoly(p)
    return _count_variations([_sign(c) for c in p.coeffs])


def approx_digits(box: RootBox) -> int:
    if box.width == 0:
        return 99
    return max(0, int(-log2(float(box.width)) * 0.30103))

"""Exact sparse multivariate polynomials and rational functions over Q.

Everything in this module is immutable and uses :class:`fractions.Fraction`
coefficients.  The fixed monomial order is graded lexicographic (grlex); it
decides leading terms, and with them the sign/scale normalization of
denominators and gcds.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import reduce as _fold
from math import gcd as _igcd, lcm as _ilcm
from typing import Iterable, Mapping, Sequence

from . import _kernels as K

Monomial = tuple[int, ...]


class AlgebraError(ValueError):
    """Raised for ill-posed algebraic requests; ``code`` names the failure."""

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.message = message or code


# ---------------------------------------------------------------------------
# rationals


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_rational(q) -> str:
    """Serialize as ``p/q`` (or ``p`` when q = 1); Fraction keeps gcd(p,q)=1, q>0."""
    q = as_fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not text or any(c in text for c in ".eE"):
        raise ValueError(f"not a decimal-free rational: {text!r}")
    return Fraction(text)


def _grlex_key(exps: Monomial):
    return (sum(exps), exps)


# ---------------------------------------------------------------------------
# MultiPoly


class MultiPoly:
    """Sparse polynomial in ``nvars`` variables with exact rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != nvars or any(e < 0 for e in exps):
                    raise ValueError(f"bad exponent vector {exps} for {nvars} variables")
                c = as_fraction(c)
                if c:
                    clean[exps] = clean.get(exps, 0) + c
            clean = {e: c for e, c in clean.items() if c}
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MultiPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # constructors -----------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        c = as_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def from_univariate(cls, nvars: int, i: int, coeffs: Sequence) -> "MultiPoly":
        terms = {}
        for k, c in enumerate(coeffs):
            c = as_fraction(c)
            if c:
                e = [0] * nvars
                e[i] = k
                terms[tuple(e)] = c
        return cls._raw(nvars, terms)

    # basic queries ------------------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0,) * self.nvars in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def variables(self) -> set[int]:
        used = set()
        for e in self._terms:
            used.update(i for i, k in enumerate(e) if k)
        return used

    def leading_monomial(self) -> Monomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self._terms, key=_grlex_key)

    def leading_coefficient(self) -> Fraction:
        return self._terms[self.leading_monomial()] if self._terms else Fraction(0)

    def coefficient(self, exps: Monomial) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    # equality / hashing -------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MultiPoly({format_poly(self)!r})"

    def __str__(self) -> str:
        return format_poly(self)

    # arithmetic -----------------------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for e, c in other._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly.zero(self.nvars)
            return MultiPoly._raw(self.nvars, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self._terms) < len(other._terms):
            a, b = self._terms, other._terms
        else:
            a, b = other._terms, self._terms
        out: dict[Monomial, Fraction] = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, 0) + ca * cb
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        """Division by a nonzero rational scalar only; see :func:`divide_exact`."""
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            inv = 1 / Fraction(other)
            return self * inv
        return NotImplemented

    # calculus / evaluation --------------------------------------------------------

    def diff(self, i: int) -> "MultiPoly":
        terms = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                f = list(e)
                f[i] = k - 1
                terms[tuple(f)] = c * k
        return MultiPoly._raw(self.nvars, terms)

    def evaluate(self, point: Sequence):
        """Exact value at a point (coordinates: ints/Fractions, or any ring elements)."""
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        powers: list[dict[int, object]] = [dict() for _ in range(self.nvars)]
        total = 0
        for e, c in self._terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    v = cache.get(k)
                    if v is None:
                        v = point[i] ** k
                        cache[k] = v
                    term = term * v
            total = total + term
        return total

    def partial_evaluate(self, assignments: Mapping[int, object]) -> "MultiPoly":
        """Substitute rational values for some variables (variable count unchanged)."""
        out: dict[Monomial, Fraction] = {}
        for e, c in self._terms.items():
            f = list(e)
            v = c
            for i, val in assignments.items():
                if f[i]:
                    v = v * Fraction(val) ** f[i]
                    f[i] = 0
            if v:
                key = tuple(f)
                out[key] = out.get(key, 0) + v
        return MultiPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    # structure ---------------------------------------------------------------------

    def as_univariate(self, i: int) -> list["MultiPoly"]:
        """Coefficients in variable ``i`` (low first), each free of variable ``i``."""
        buckets: dict[int, dict] = {}
        for e, c in self._terms.items():
            k = e[i]
            f = list(e)
            f[i] = 0
            buckets.setdefault(k, {})[tuple(f)] = c
        if not buckets:
            return []
        top = max(buckets)
        return [MultiPoly._raw(self.nvars, buckets.get(k, {})) for k in range(top + 1)]

    @classmethod
    def from_coefficients(cls, nvars: int, i: int, coeffs: Sequence["MultiPoly"]) -> "MultiPoly":
        terms: dict[Monomial, Fraction] = {}
        for k, c in enumerate(coeffs):
            for e, v in c._terms.items():
                f = list(e)
                f[i] += k
                terms[tuple(f)] = v
        return cls._raw(nvars, terms)

    def to_univariate(self, i: int) -> "UniPoly":
        """View as a univariate polynomial over Q; all other variables must be absent."""
        extra = self.variables() - {i}
        if extra:
            raise ValueError(f"polynomial involves variables {sorted(extra)} besides {i}")
        coeffs = [Fraction(0)] * (self.degree_in(i) + 1) if self._terms else []
        for e, c in self._terms.items():
            coeffs[e[i]] = c
        return UniPoly(coeffs)

    def embed(self, nvars: int, mapping: Sequence[int]) -> "MultiPoly":
        """Rename variable j to ``mapping[j]`` inside a polynomial ring of ``nvars`` variables."""
        terms = {}
        for e, c in self._terms.items():
            f = [0] * nvars
            for j, k in enumerate(e):
                if k:
                    f[mapping[j]] += k
            terms[tuple(f)] = c
        return MultiPoly._raw(nvars, terms)

    def integer_content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = _igcd(num, c.numerator)
            den = _ilcm(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MultiPoly":
        """Integer-primitive associate with positive grlex leading coefficient."""
        if not self._terms:
            return self
        c = self.integer_content()
        if self.leading_coefficient() < 0:
            c = -c
        return self * (1 / c)

    def monic(self) -> "MultiPoly":
        lc = self.leading_coefficient()
        return self * (1 / lc)

    def sign_normalized(self) -> "MultiPoly":
        return -self if self._terms and self.leading_coefficient() < 0 else self


def variable_count(*polys: MultiPoly) -> int:
    n = {p.nvars for p in polys}
    if len(n) != 1:
        raise ValueError("variable count mismatch")
    return n.pop()


# ---------------------------------------------------------------------------
# exact division and gcd


def divide_exact(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Quotient p/q when q divides p exactly; raises ArithmeticError otherwise."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if q.is_constant():
        return p / q.constant_value()
    n = variable_count(p, q)
    rem = dict(p._terms)
    lm = q.leading_monomial()
    lc = q._terms[lm]
    qterms = list(q._terms.items())
    quot: dict[Monomial, Fraction] = {}
    while rem:
        m = max(rem, key=_grlex_key)
        if any(a < b for a, b in zip(m, lm)):
            raise ArithmeticError("polynomial division is not exact")
        shift = tuple(a - b for a, b in zip(m, lm))
        c = rem[m] / lc
        quot[shift] = c
        for e, v in qterms:
            key = tuple(a + b for a, b in zip(e, shift))
            s = rem.get(key, 0) - c * v
            if s:
                rem[key] = s
            else:
                rem.pop(key, None)
    return MultiPoly._raw(n, quot)


def divides(q: MultiPoly, p: MultiPoly) -> bool:
    try:
        divide_exact(p, q)
    except ArithmeticError:
        return False
    return True


def _univariate_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    while b:
        a, b = b, a % b
    return a.monic() if a else a


def _content_in(p: MultiPoly, i: int) -> MultiPoly:
    coeffs = [c for c in p.as_univariate(i) if c]
    return _fold(gcd_poly, coeffs, MultiPoly.zero(p.nvars))


def _prem_uni(a: list[MultiPoly], b: list[MultiPoly]) -> list[MultiPoly]:
    """Pseudo-remainder of lists of MultiPoly coefficients (low first)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for k, c in enumerate(b):
            r[k + shift] = r[k + shift] - lr * c
        r.pop()
        while r and r[-1].is_zero():
            r.pop()
        e -= 1
    if e > 0 and r:
        f = lb ** e
        r = [c * f for c in r]
    return r


def _coprime_probe(p: MultiPoly, q: MultiPoly, main: int, rng: random.Random) -> bool:
    """True when a good specialization proves deg_main gcd(p, q) = 0."""
    others = (p.variables() | q.variables()) - {main}
    lp = p.as_univariate(main)[-1]
    lq = q.as_univariate(main)[-1]
    for _ in range(3):
        point = {i: Fraction(rng.randint(-97, 97), rng.randint(1, 7)) for i in others}
        if lp.partial_evaluate(point).is_zero() or lq.partial_evaluate(point).is_zero():
            continue
        up = p.partial_evaluate(point).to_univariate(main)
        uq = q.partial_evaluate(point).to_univariate(main)
        return _univariate_gcd(up, uq).degree() == 0
    return False


def gcd_poly(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor, integer-primitive with positive grlex leading coefficient.

    gcd(0, 0) = 0.  Works recursively on a main variable: contents are handled
    by recursion, primitive parts by a primitive pseudo-remainder sequence.  A
    random specialization first checks cheaply for coprimality.
    """
    n = variable_count(p, q)
    if p.is_zero():
        return q.primitive()
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return MultiPoly.const(n, 1)
    pp = p.primitive()
    if pp == q.primitive():
        return pp
    vp, vq = p.variables(), q.variables()
    if len(vp | vq) == 1:
        (i,) = vp | vq
        g = _univariate_gcd(p.to_univariate(i), q.to_univariate(i))
        return MultiPoly.from_univariate(n, i, g.coeffs).primitive()
    only_p = vp - vq
    if only_p:
        return gcd_poly(_content_in(p, min(only_p)), q)
    only_q = vq - vp
    if only_q:
        return gcd_poly(p, _content_in(q, min(only_q)))
    main = max(vp, key=lambda i: (min(p.degree_in(i), q.degree_in(i)), -i))
    cp, cq = _content_in(p, main), _content_in(q, main)
    cont = gcd_poly(cp, cq)
    rng = random.Random(hash((p, q)) & 0xFFFF)
    if _coprime_probe(p, q, main, rng):
        return cont.primitive()
    a = [divide_exact(c, cp) for c in p.as_univariate(main)]
    b = [divide_exact(c, cq) for c in q.as_univariate(main)]
    if len(a) < len(b):
        a, b = b, a
    while True:
        r = _prem_uni(a, b)
        if not r:
            break
        if len(r) == 1:
            return cont.primitive()
        rc = _fold(gcd_poly, [c for c in r if c], MultiPoly.zero(n))
        a, b = b, [divide_exact(c, rc) for c in r]
    g = MultiPoly.from_coefficients(n, main, b)
    g = divide_exact(g, _content_in(g, main))
    return (g * cont).primitive()


def squarefree_part(p: MultiPoly, i: int) -> MultiPoly:
    """p / gcd(p, dp/dx_i) -- removes repeated factors involving variable i."""
    if p.degree_in(i) <= 0:
        return p
    g = gcd_poly(p, p.diff(i))
    return divide_exact(p, g)


# ---------------------------------------------------------------------------
# UniPoly


class UniPoly:
    """Dense univariate polynomial, coefficients low degree first.

    Coefficients are Fractions for the root-finding machinery, or any exact
    field elements supporting + - * / (e.g. :class:`RatFunc` for minimal
    polynomials over Q(y)).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if not isinstance(c, int) else Fraction(c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "UniPoly":
        return cls([0, 1])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({format_univariate(self)!r})"

    def __add__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        other = other if isinstance(other, UniPoly) else UniPoly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [a[0] * 0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if _is_zero(ca):
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __divmod__(self, other: "UniPoly"):
        if not other:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = list(self.coeffs)
        db = other.degree()
        inv = 1 / other.lc()
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            c = rem[-1] * inv
            shift = len(rem) - 1 - db
            quot[shift] = c
            for k, v in enumerate(other.coeffs):
                rem[k + shift] = rem[k + shift] - c * v
            rem.pop()
            while rem and _is_zero(rem[-1]):
                rem.pop()
        return UniPoly(quot), UniPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly([c * k for k, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        inv = 1 / self.lc()
        return UniPoly([c * inv for c in self.coeffs])

    def compose(self, other: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def integer_coeffs(self) -> list[int]:
        """Primitive integer associate (positive leading coefficient), low first."""
        ints, _ = K.clear_denominators(self.coeffs)
        ints = K.primitive(ints)
        if ints and ints[-1] < 0:
            ints = [-c for c in ints]
        return ints

    def gcd(self, other: "UniPoly") -> "UniPoly":
        return _univariate_gcd(self, other)

    def squarefree(self) -> "UniPoly":
        """Squarefree part, monic (zero stays zero, constants become 1)."""
        if self.degree() <= 0:
            return UniPoly([1]) if self.coeffs else self
        g = self.gcd(self.derivative())
        return (self // g).monic()


def _is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


# ---------------------------------------------------------------------------
# RatFunc


class RatFunc:
    """Reduced quotient num/den: gcd(num, den) = 1 and den is integer-primitive with positive grlex lc."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None, *, _reduced: bool = False):
        if den is None:
            den = MultiPoly.const(num.nvars, 1)
        if not _reduced:
            num, den = _reduce_pair(num, den)
        self.num = num
        self.den = den

    @property
    def nvars(self) -> int:
        return self.num.nvars

    @classmethod
    def const(cls, nvars: int, c) -> "RatFunc":
        return cls(MultiPoly.const(nvars, c), MultiPoly.const(nvars, 1), _reduced=True)

    @classmethod
    def var(cls, nvars: int, i: int) -> "RatFunc":
        return cls(MultiPoly.var(nvars, i), MultiPoly.const(nvars, 1), _reduced=True)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RatFunc":
        return cls(p, MultiPoly.const(p.nvars, 1), _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def variables(self) -> set[int]:
        return self.num.variables() | self.den.variables()

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MultiPoly):
            return self.den == 1 and self.num == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFunc({format_ratfunc(self)!r})"

    def __str__(self) -> str:
        return format_ratfunc(self)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc.from_poly(other)
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        g = gcd_poly(self.den, other.den)
        da = divide_exact(self.den, g)
        db = divide_exact(other.den, g)
        return RatFunc(self.num * db + other.num * da, da * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc.const(self.nvars, 0)
        g1 = gcd_poly(self.num, other.den)
        g2 = gcd_poly(other.num, self.den)
        num = divide_exact(self.num, g1) * divide_exact(other.num, g2)
        den = divide_exact(self.den, g2) * divide_exact(other.den, g1)
        return RatFunc(*_normalize_sign(num, den), _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise AlgebraError("ZeroDenominator", "inverse of zero")
        return RatFunc(*_normalize_sign(self.den, self.num), _reduced=True)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _reduced=True)

    def diff(self, i: int) -> "RatFunc":
        if self.den.is_constant():
            return RatFunc(self.num.diff(i), self.den, _reduced=True)
        return RatFunc(self.num.diff(i) * self.den - self.num * self.den.diff(i), self.den * self.den)

    def evaluate(self, point: Sequence):
        d = self.den.evaluate(point)
        if d == 0:
            raise AlgebraError("ZeroDenominator", f"denominator vanishes at {list(point)}")
        return self.num.evaluate(point) / d


def _normalize_sign(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    c = den.integer_content()
    if den.leading_coefficient() < 0:
        c = -c
    if c != 1:
        inv = 1 / c
        return num * inv, den * inv
    return num, den


def _reduce_pair(num: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, MultiPoly]:
    variable_count(num, den)
    if den.is_zero():
        raise AlgebraError("ZeroDenominator", "denominator is the zero polynomial")
    if num.is_zero():
        return num, MultiPoly.const(num.nvars, 1)
    if not den.is_constant():
        g = gcd_poly(num, den)
        if not g.is_constant():
            num = divide_exact(num, g)
            den = divide_exact(den, g)
    return _normalize_sign(num, den)


def reduce(num: MultiPoly, den: MultiPoly) -> RatFunc:
    """Canonical reduced form of num/den (raises ZeroDenominator for den = 0)."""
    return RatFunc(num, den)


# ---------------------------------------------------------------------------
# resultants


def nullspace(rows, ncols) -> list[list[Fraction]]:
    """Basis of the rational null space of a matrix given by rows."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [u - f * w for u, w in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -m[i][fc]
        basis.append(vec)
    return basis


def _bareiss_det(matrix: list[list[MultiPoly]], nvars: int) -> MultiPoly:
    m = [row[:] for row in matrix]
    size = len(m)
    if size == 0:
        return MultiPoly.const(nvars, 1)
    sign = 1
    prev = MultiPoly.const(nvars, 1)
    for k in range(size - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, size):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(nvars)
        pivot = m[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                m[i][j] = divide_exact(m[i][j] * pivot - m[i][k] * m[k][j], prev)
            m[i][k] = MultiPoly.zero(nvars)
        prev = pivot
    det = m[size - 1][size - 1]
    return -det if sign < 0 else det


def sylvester_matrix(a: list, b: list, zero) -> list[list]:
    """Sylvester matrix of coefficient lists (low first); rows of a then rows of b."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    ra, rb = list(reversed(a)), list(reversed(b))
    rows = []
    for i in range(n):
        rows.append([zero] * i + ra + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + rb + [zero] * (size - n - 1 - i))
    return rows


def resultant(p: MultiPoly, q: MultiPoly, var: int) -> MultiPoly:
    """Sylvester resultant of p and q with respect to variable ``var``.

    The result lives in the same polynomial ring and is free of ``var``.
    Univariate inputs use an integer subresultant sequence; otherwise the
    Sylvester determinant is expanded by fraction-free (Bareiss) elimination.
    """
    n = variable_count(p, q)
    if p.is_zero() and q.is_zero():
        raise AlgebraError("UndefinedResultant", "both polynomials are zero")
    if p.is_zero() or q.is_zero():
        return MultiPoly.zero(n)
    a, b = p.as_univariate(var), q.as_univariate(var)
    da, db = len(a) - 1, len(b) - 1
    if da == 0 and db == 0:
        return MultiPoly.const(n, 1)
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    if (p.variables() | q.variables()) <= {var}:
        ua, sa = K.clear_denominators([c.constant_value() for c in a])
        ub, sb = K.clear_denominators([c.constant_value() for c in b])
        r = Fraction(K.zres(ua, ub), sa ** db * sb ** da)
        return MultiPoly.const(n, r)
    return _bareiss_det(sylvester_matrix(a, b, MultiPoly.zero(n)), n)


def univariate_resultant(a: UniPoly, b: UniPoly) -> Fraction:
    """Resultant of two univariate polynomials over Q."""
    if not a and not b:
        raise AlgebraError("UndefinedResultant", "both polynomials are zero")
    if not a or not b:
        return Fraction(0)
    ua, sa = K.clear_denominators(a.coeffs)
    ub, sb = K.clear_denominators(b.coeffs)
    return Fraction(K.zres(ua, ub), sa ** b.degree() * sb ** a.degree())


# ---------------------------------------------------------------------------
# substitution


def substitute(p: MultiPoly, assignments: Mapping[int, RatFunc | MultiPoly], nvars: int | None = None) -> RatFunc:
    """Compose p with rational functions: variable i -> assignments[i].

    Every variable occurring in p must be assigned.  The images share a ring
    of ``nvars`` variables (inferred from the assignments).
    """
    num, den = substitute_pair(p, assignments, nvars)
    return RatFunc(num, den)


def substitute_pair(p: MultiPoly, assignments: Mapping[int, RatFunc | MultiPoly],
                    nvars: int | None = None) -> tuple[MultiPoly, MultiPoly]:
    """Like :func:`substitute` but returns an unreduced (numerator, denominator)."""
    imgs: dict[int, RatFunc] = {}
    for i, v in assignments.items():
        imgs[i] = v if isinstance(v, RatFunc) else RatFunc.from_poly(v)
    if nvars is None:
        if not imgs:
            raise ValueError("cannot infer target ring")
        nvars = next(iter(imgs.values())).nvars
    missing = p.variables() - set(imgs)
    if missing:
        raise ValueError(f"variables {sorted(missing)} are not assigned")
    if p.is_constant():
        return MultiPoly.const(nvars, p.constant_value() if p else 0), MultiPoly.const(nvars, 1)
    used = sorted(p.variables())
    degs = {i: p.degree_in(i) for i in used}
    # common denominator prod den_i^deg_i; numerator terms num_i^e * den_i^(deg_i - e)
    num_pows = {i: _power_table(imgs[i].num, degs[i]) for i in used}
    den_pows = {i: _power_table(imgs[i].den, degs[i]) for i in used}
    total = MultiPoly.zero(nvars)
    for e, c in p.items():
        term = MultiPoly.const(nvars, c)
        for i in used:
            k = e[i]
            term = term * num_pows[i][k] * den_pows[i][degs[i] - k]
        total = total + term
    den = MultiPoly.const(nvars, 1)
    for i in used:
        den = den * den_pows[i][degs[i]]
    return total, den


def _power_table(p: MultiPoly, top: int) -> list[MultiPoly]:
    table = [MultiPoly.const(p.nvars, 1)]
    if p.is_constant() and p.constant_value() == 1:
        return table * (top + 1)
    for _ in range(top):
        table.append(table[-1] * p)
    return table


def substitute_ratfunc(f: RatFunc, assignments: Mapping[int, RatFunc | MultiPoly], nvars: int | None = None) -> RatFunc:
    num = substitute(f.num, assignments, nvars)
    den = substitute(f.den, assignments, num.nvars)
    if den.is_zero():
        raise AlgebraError("ZeroDenominator", "composition makes a denominator vanish identically")
    return num / den


# ---------------------------------------------------------------------------
# formatting (expression grammar of map files)


def default_names(nvars: int) -> list[str]:
    return [f"x{i + 1}" for i in range(nvars)]


def _format_monomial(exps: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, k in zip(names, exps):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(p: MultiPoly, names: Sequence[str] | None = None) -> str:
    names = names or default_names(p.nvars)
    if p.is_zero():
        return "0"
    out = []
    for e in sorted(p._terms, key=_grlex_key, reverse=True):
        c = p._terms[e]
        mono = _format_monomial(e, names)
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)


def format_ratfunc(f: RatFunc, names: Sequence[str] | None = None) -> str:
    num = format_poly(f.num, names)
    if f.den == 1:
        return num
    return f"({num})/({format_poly(f.den, names)})"


def format_univariate(p: UniPoly, name: str = "T", coeff_names: Sequence[str] | None = None) -> str:
    if not p:
        return "0"
    out = []
    for k in range(p.degree(), -1, -1):
        c = p.coeffs[k]
        if _is_zero(c):
            continue
        mono = "" if k == 0 else (name if k == 1 else f"{name}^{k}")
        if isinstance(c, RatFunc):
            if c.is_constant():
                c = c.constant_value()
            else:
                body = f"({format_ratfunc(c, coeff_names)})"
                out.append(("+ " if out else "") + (f"{body}*{mono}" if mono else body))
                continue
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(("- " if c < 0 else "+ ") + body)
    return " ".join(out)

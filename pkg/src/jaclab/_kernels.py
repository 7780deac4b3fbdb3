"""Integer and modular kernels for univariate polynomials.

Polynomials here are plain lists of coefficients, lowest degree first, with
no trailing zeros (the zero polynomial is ``[]``).  These routines back the
exact elimination code paths where Fraction arithmetic would be too slow.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

# Two 61/62-bit primes used for degree probes.
PROBE_PRIMES = (2305843009213693951, 4611686018427387847)


def trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def deg(a: list) -> int:
    return len(a) - 1


def content(a: list[int]) -> int:
    g = 0
    for c in a:
        g = gcd(g, c)
        if g == 1:
            break
    return g


def primitive(a: list[int]) -> list[int]:
    g = content(a)
    if g in (0, 1):
        return list(a)
    return [c // g for c in a]


def clear_denominators(coeffs) -> tuple[list[int], int]:
    """Return integer coefficients ``c*coeffs`` and the positive multiplier ``c``."""
    den = 1
    for c in coeffs:
        if isinstance(c, Fraction):
            den = lcm(den, c.denominator)
    return [int(c * den) for c in coeffs], den


def horner(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def horner_mod(a: list[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer polynomials: lc(b)^(deg a - deg b + 1) a mod b."""
    r = list(a)
    db = deg(b)
    lb = b[-1]
    e = deg(a) - db + 1
    while r and deg(r) >= db:
        lr = r[-1]
        shift = deg(r) - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[i + shift] -= lr * c
        r.pop()
        trim(r)
        e -= 1
    if e > 0:
        f = lb ** e
        r = [c * f for c in r]
    return r


def zres(a: list[int], b: list[int]) -> int:
    """Resultant of two integer polynomials via the subresultant PRS."""
    if not a or not b:
        return 0
    if deg(a) == 0 and deg(b) == 0:
        return 1
    ca, cb = content(a), content(b)
    a = [c // ca for c in a]
    b = [c // cb for c in b]
    t = ca ** deg(b) * cb ** deg(a)
    s = 1
    if deg(a) < deg(b):
        a, b = b, a
        if deg(a) % 2 and deg(b) % 2:
            s = -s
    g = h = 1
    while deg(b) > 0:
        delta = deg(a) - deg(b)
        if deg(a) % 2 and deg(b) % 2:
            s = -s
        r = prem(a, b)
        if not r:
            return 0
        a = b
        div = g * h ** delta
        b = [c // div for c in r]
        g = a[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = g ** delta // h ** (delta - 1)
    # b is a nonzero constant
    da = deg(a)
    if da == 1:
        h = b[0]
    else:
        h = b[0] ** da // h ** (da - 1)
    return s * t * h


def res_mod(a: list[int], b: list[int], p: int) -> int:
    """Resultant modulo a prime by the Euclidean recursion."""
    a = trim([c % p for c in a])
    b = trim([c % p for c in b])
    if not a or not b:
        return 0
    res = 1
    while True:
        m, n = deg(a), deg(b)
        if n == 0:
            return res * pow(b[0], m, p) % p
        if m < n:
            if m % 2 and n % 2:
                res = -res
            a, b = b, a
            continue
        inv = pow(b[-1], p - 2, p)
        r = list(a)
        while r and deg(r) >= n:
            q = r[-1] * inv % p
            shift = deg(r) - n
            for i, c in enumerate(b):
                r[i + shift] = (r[i + shift] - q * c) % p
            r.pop()
            trim(r)
        if not r:
            return 0
        k = deg(r)
        if m % 2 and n % 2:
            res = -res
        res = res * pow(b[-1], m - k, p) % p
        a, b = b, r


def interp_degree_mod(xs: list[int], ys: list[int], p: int) -> int:
    """Degree of the interpolating polynomial through (xs, ys) modulo p (-1 for zero)."""
    coeffs = newton_coeffs_mod(xs, ys, p)
    poly = newton_to_mono_mod(coeffs, xs, p)
    trim(poly)
    return deg(poly)


def newton_coeffs_mod(xs, ys, p):
    c = [y % p for y in ys]
    n = len(xs)
    inv: dict[int, int] = {}
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            d = xs[i] - xs[i - j]
            r = inv.get(d)
            if r is None:
                r = inv[d] = pow(d, p - 2, p)
            c[i] = (c[i] - c[i - 1]) * r % p
    return c


def newton_to_mono_mod(c, xs, p):
    n = len(c)
    poly = [0] * n
    poly[0] = c[-1]
    size = 1
    for i in range(n - 2, -1, -1):
        # poly = poly*(x - xs[i]) + c[i]
        new = [0] * n
        for k in range(size):
            new[k + 1] = (new[k + 1] + poly[k]) % p
            new[k] = (new[k] - xs[i] * poly[k]) % p
        new[0] = (new[0] + c[i]) % p
        poly = new
        size += 1
    return poly


def interpolate(xs: list, ys: list) -> list[Fraction]:
    """Exact Newton interpolation; returns monomial coefficients (low first)."""
    n = len(xs)
    c = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    poly[0] = c[-1]
    size = 1
    for i in range(n - 2, -1, -1):
        new = [Fraction(0)] * n
        xi = xs[i]
        for k in range(size):
            pk = poly[k]
            if pk:
                new[k + 1] += pk
                new[k] -= xi * pk
        new[0] += c[i]
        poly = new
        size += 1
    return trim(poly)

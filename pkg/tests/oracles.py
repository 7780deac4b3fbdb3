"""Independent reference computations for the test suite.

Nothing here imports jaclab: each oracle reaches its answer by a different
route (floating point roots, derivative-bracketed bisection, hand algebra).
"""

from fractions import Fraction

import numpy as np


def _eval(coeffs, x):
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _trim(coeffs):
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _rem(a, b):
    a = [Fraction(c) for c in a]
    while len(a) >= len(b):
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[i + shift] -= q * c
        a = _trim(a)
        if not a:
            break
    return a


def is_squarefree(coeffs) -> bool:
    """Plain Euclid on p and p'."""
    a, b = _trim([Fraction(c) for c in coeffs]), _trim([Fraction(c) for c in _derivative(coeffs)])
    while b:
        a, b = b, _rem(a, b)
    return len(a) == 1


def bisection_roots(coeffs, depth: int = 80) -> list[Fraction]:
    """Approximations of the distinct real roots of a squarefree polynomial.

    The roots of p' split the line into monotone pieces; a piece holds a root
    exactly when p changes sign across it, and bisection then closes in.
    """
    coeffs = _trim([Fraction(c) for c in coeffs])
    deg = len(coeffs) - 1
    if deg < 1:
        return []
    bound = 1 + max(abs(c) for c in coeffs[:-1]) / abs(coeffs[-1])
    crit = [c for c in bisection_roots(_derivative(coeffs), depth) if -bound < c < bound] if deg > 1 else []
    edges = [-bound] + crit + [bound]
    roots = []
    for lo, hi in zip(edges, edges[1:]):
        slo, shi = _eval(coeffs, lo), _eval(coeffs, hi)
        if slo == 0:
            roots.append(lo)
            continue
        if slo * shi > 0:
            continue
        for _ in range(depth):
            mid = (lo + hi) / 2
            sm = _eval(coeffs, mid)
            if sm == 0:
                lo = hi = mid
                break
            if (sm > 0) == (slo > 0):
                lo = mid
            else:
                hi = mid
        roots.append((lo + hi) / 2)
    out = []
    for r in sorted(roots):
        if not out or r - out[-1] > Fraction(1, 10 ** 12):
            out.append(r)
    return out


def numeric_resultant(a, b) -> float:
    """Res(a, b) = lc(a)^deg(b) * prod b(alpha) over the complex roots alpha of a."""
    a, b = [float(c) for c in a], [float(c) for c in b]
    roots = np.roots(a[::-1])
    vals = np.polyval(b[::-1], roots)
    return float(np.real(a[-1] ** (len(b) - 1) * np.prod(vals)))


def distinct_complex_roots(coeffs, tol: float = 1e-6) -> int:
    roots = np.roots([float(c) for c in coeffs][::-1])
    out = []
    for r in roots:
        if all(abs(r - s) > tol for s in out):
            out.append(r)
    return len(out)


def real_roots_float(coeffs, tol: float = 1e-7) -> list[float]:
    roots = np.roots([float(c) for c in coeffs][::-1])
    return sorted(float(r.real) for r in roots if abs(r.imag) < tol * max(1.0, abs(r)))


def triangular_fiber_count(u, v, w, y1, y2) -> int:
    """Real solutions of u(x1) + v(x2) = y1, w(x2) = y2 by back substitution."""
    total = 0
    shifted = list(w)
    shifted[0] -= y2
    for r in real_roots_float(shifted):
        inner = [float(c) for c in u]
        inner[0] -= float(y1) - float(np.polyval([float(c) for c in v][::-1], r))
        total += len(real_roots_float(inner))
    return total


def numeric_jacobian(fn, x, h: float = 1e-6) -> float:
    """Central-difference Jacobian determinant of a map R^2 -> R^2."""
    x = np.asarray(x, dtype=float)
    cols = []
    for k in range(2):
        e = np.zeros(2)
        e[k] = h
        cols.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2 * h))
    return float(np.linalg.det(np.column_stack(cols)))


def vitushkin_solutions(y1: float, y2: float) -> list[tuple[complex, complex]]:
    """Complex solutions of the Vitushkin system.

    With v = x*y^3 and w = 1/y the components read v^2 + 2vw = y1 and
    v + w = y2, so w^2 = y2^2 - y1 and v = y2 - w.
    """
    out = []
    for w in np.roots([1.0, 0.0, -(y2 * y2 - y1)]):
        v = y2 - w
        y = 1 / w
        out.append((v * w ** 3, y))
    return out

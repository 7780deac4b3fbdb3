"""Rational maps R^n -> R^n: parsing, Jacobians, verdicts, composition and the F+ lift."""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import (
    AlgebraError,
    MultiPoly,
    RatFunc,
    _bareiss_det,
    default_names,
    format_poly,
    format_ratfunc,
    format_rational,
    substitute_pair,
    substitute_ratfunc,
)
from .positivity import (
    Witness,
    axis_restriction,
    quadratic_sign_proof,
    check_certificate,
    falsify,
    halton_points,
    search_certificate,
    small_lattice,
    strictness,
)
from .realroots import count_real_roots, isolate_real_roots, sign_at


class MapParseError(AlgebraError):
    def __init__(self, code: str, message: str, line: int, column: int):
        super().__init__(code, f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SingularBase(AlgebraError):
    def __init__(self, verdict: "Verdict"):
        super().__init__("SingularBase", "the Jacobian determinant vanishes somewhere")
        self.verdict = verdict


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class MapCertificate:
    """A positivity claim attached in a map file: target = SOS(squares) + constant."""

    target: str  # "jac" or "F<k>.den"
    squares: tuple[MultiPoly, ...]
    constant: Fraction = Fraction(0)

    def line(self, names: Sequence[str]) -> str:
        body = ", ".join(format_poly(s, names) for s in self.squares)
        tail = f" + {format_rational(self.constant)}" if self.constant else ""
        return f"certificate {self.target} = SOS({body}){tail}"


@dataclass(frozen=True)
class RatMap:
    n: int
    components: tuple[RatFunc, ...]
    certificates: tuple[MapCertificate, ...] = ()
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.components) != self.n:
            raise AlgebraError("DimensionMismatch", f"expected {self.n} components, got {len(self.components)}")
        for c in self.components:
            if c.nvars != self.n:
                raise AlgebraError("DimensionMismatch", "component ring does not match the dimension")

    @classmethod
    def from_components(cls, comps: Sequence, n: int | None = None) -> "RatMap":
        n = n if n is not None else len(comps)
        out = []
        for c in comps:
            if isinstance(c, MultiPoly):
                c = RatFunc.from_poly(c)
            out.append(c)
        return cls(n, tuple(out))

    @classmethod
    def identity(cls, n: int) -> "RatMap":
        return cls(n, tuple(RatFunc.var(n, i) for i in range(n)))

    @property
    def names(self) -> list[str]:
        return default_names(self.n)

    def is_polynomial(self) -> bool:
        return all(c.is_polynomial() for c in self.components)

    def evaluate(self, point: Sequence) -> tuple[Fraction, ...]:
        return tuple(c.evaluate([Fraction(v) for v in point]) for c in self.components)

    def certificate_for(self, target: str) -> list[MapCertificate]:
        return [c for c in self.certificates if c.target == target]

    def __str__(self) -> str:
        return "(" + ", ".join(format_ratfunc(c) for c in self.components) + ")"


class Status(str, enum.Enum):
    PROVED = "PROVED"
    REFUTED = "REFUTED"
    UNKNOWN = "UNKNOWN"

    def __str__(self) -> str:
        return self.value


@dataclass
class Verdict:
    status: Status
    evidence: list[str] = field(default_factory=list)
    witness: Witness | None = None
    certificate: str | None = None  # kind of proof for PROVED

    def to_json(self) -> dict:
        out = {"status": self.status.value, "evidence": list(self.evidence)}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def combine(verdicts: Sequence[tuple[str, Verdict]]) -> Verdict:
    """Conjunction: REFUTED if any part is, PROVED if all parts are, else UNKNOWN."""
    evidence = [f"{label}: {v.status.value}; " + "; ".join(v.evidence) for label, v in verdicts]
    for label, v in verdicts:
        if v.status is Status.REFUTED:
            return Verdict(Status.REFUTED, evidence, v.witness)
    if all(v.status is Status.PROVED for _, v in verdicts):
        kinds = ", ".join(f"{label}: {v.certificate}" for label, v in verdicts)
        return Verdict(Status.PROVED, evidence, certificate=kinds)
    return Verdict(Status.UNKNOWN, evidence)


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    def __init__(self, text: str, line: int, offset: int, n: int):
        self.text = text
        self.line = line
        self.offset = offset
        self.n = n
        self.tokens: list[tuple[str, str, int]] = []
        for m in _TOKEN.finditer(text):
            num, ident, op = m.groups()
            col = m.start(m.lastindex) if m.lastindex else m.start()
            if num is not None:
                self.tokens.append(("num", num, col))
            elif ident is not None:
                self.tokens.append(("id", ident, col))
            elif op is not None:
                if op not in "+-*/^(),":
                    self.fail("SyntaxError", f"unexpected character {op!r}", col)
                self.tokens.append(("op", op, col))
        self.pos = 0

    def fail(self, code: str, msg: str, col: int | None = None):
        if col is None:
            col = self.tokens[self.pos][2] if self.pos < len(self.tokens) else len(self.text)
        raise MapParseError(code, msg, self.line, self.offset + col + 1)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", "", len(self.text))

    def take(self, kind=None, value=None):
        tok = self.peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of line"
            self.fail("SyntaxError", f"expected {want!r}, found {got!r}")
        self.pos += 1
        return tok

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def expr(self) -> RatFunc:
        value = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> RatFunc:
        value = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            tok = self.take()
            rhs = self.unary()
            if tok[1] == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    self.fail("ZeroDenominator", "division by zero", tok[2])
                value = value / rhs
        return value

    def unary(self) -> RatFunc:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek()[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            tok = self.peek()
            if tok[0] != "num":
                self.fail("SyntaxError", "exponent must be a nonnegative integer literal")
            self.take()
            if self.peek()[:2] == ("op", "^"):
                self.fail("SyntaxError", "chained exponents are ambiguous; use parentheses")
            return base ** int(tok[1])
        return base

    def atom(self) -> RatFunc:
        kind, value, col = self.peek()
        if kind == "num":
            self.take()
            return RatFunc.const(self.n, int(value))
        if kind == "id":
            self.take()
            m = re.fullmatch(r"x([1-9]\d*)", value)
            if not m or int(m.group(1)) > self.n:
                self.fail("UnknownVariable", f"unknown variable {value!r} (expected x1..x{self.n})", col)
            return RatFunc.var(self.n, int(m.group(1)) - 1)
        if (kind, value) == ("op", "("):
            self.take()
            inner = self.expr()
            self.take("op", ")")
            return inner
        self.fail("SyntaxError", f"unexpected {value or 'end of line'!r}")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_map(text: str) -> RatMap:
    """Parse the map-file format (see the README for the grammar)."""
    n = None
    comps: dict[int, RatFunc] = {}
    certs: list[MapCertificate] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        last_line = lineno
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if n is None:
            m = re.fullmatch(r"n\s*=\s*(\d+)", body)
            if not m or int(m.group(1)) < 1:
                raise MapParseError("SyntaxError", "first line must be n=<positive integer>", lineno, indent + 1)
            n = int(m.group(1))
            continue
        m = re.fullmatch(r"F(\d+)\s*=(.*)", body)
        if m:
            k = int(m.group(1))
            if not 1 <= k <= n:
                raise MapParseError("DimensionMismatch", f"component F{k} outside 1..{n}", lineno, indent + 1)
            if k in comps:
                raise MapParseError("SyntaxError", f"component F{k} defined twice", lineno, indent + 1)
            start = indent + m.start(2)
            comps[k] = _parse_expr(m.group(2), lineno, start, n)
            continue
        m = re.fullmatch(r"certificate\s+(jac|F(\d+)\.den)\s*=(.*)", body)
        if m:
            target = m.group(1)
            if m.group(2) and not 1 <= int(m.group(2)) <= n:
                raise MapParseError("DimensionMismatch", f"certificate for missing component {target}",
                                    lineno, indent + 1)
            certs.append(_parse_certificate(target, m.group(3), lineno, indent + m.start(3), n))
            continue
        raise MapParseError("SyntaxError", "expected 'F<k> = <expr>' or a certificate line", lineno, indent + 1)
    if n is None:
        raise MapParseError("SyntaxError", "empty map file", max(last_line, 1), 1)
    missing = [k for k in range(1, n + 1) if k not in comps]
    if missing:
        raise MapParseError("DimensionMismatch", f"missing components {', '.join(f'F{k}' for k in missing)}",
                            last_line, 1)
    return RatMap(n, tuple(comps[k] for k in range(1, n + 1)), tuple(certs))


def _parse_expr(text: str, line: int, offset: int, n: int) -> RatFunc:
    p = _Parser(text, line, offset, n)
    value = p.expr()
    if not p.at_end():
        p.fail("SyntaxError", f"unexpected {p.peek()[1]!r}")
    return value


def _parse_certificate(target: str, text: str, line: int, offset: int, n: int) -> MapCertificate:
    p = _Parser(text, line, offset, n)
    tok = p.take("id")
    if tok[1] != "SOS":
        p.fail("SyntaxError", "certificates have the form SOS(e1, e2, ...) + c", tok[2])
    p.take("op", "(")
    squares = []
    while True:
        col = p.peek()[2]
        value = p.expr()
        if not value.is_polynomial():
            p.fail("SyntaxError", "SOS entries must be polynomials", col)
        squares.append(value.num * (1 / value.den.constant_value()))
        if p.peek()[:2] == ("op", ","):
            p.take()
            continue
        p.take("op", ")")
        break
    constant = Fraction(0)
    if not p.at_end():
        p.take("op", "+")
        col = p.peek()[2]
        value = p.expr()
        if not value.is_constant() or value.constant_value() < 0:
            p.fail("SyntaxError", "the trailing constant must be a nonnegative rational", col)
        constant = value.constant_value()
    return MapCertificate(target, tuple(squares), constant)


def serialize(F: RatMap) -> str:
    names = F.names
    lines = [f"n={F.n}"]
    lines += [f"F{k} = {format_ratfunc(c, names)}" for k, c in enumerate(F.components, start=1)]
    lines += [c.line(names) for c in F.certificates]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Jacobians


def jacobian_matrix(F: RatMap) -> list[list[RatFunc]]:
    return [[c.diff(j) for j in range(F.n)] for c in F.components]


def _poly_rows(F: RatMap, size: int):
    """Rows d_j(N_i) D_i - N_i d_j(D_i), whose row i carries the denominator D_i^2."""
    rows, dens = [], []
    for c in F.components[:size]:
        N, D = c.num, c.den
        if D.is_constant():
            rows.append([N.diff(j) for j in range(size)])
            dens.append(D * D)
        else:
            rows.append([N.diff(j) * D - N * D.diff(j) for j in range(size)])
            dens.append(D * D)
    return rows, dens


def _det(rows: list[list[MultiPoly]], nvars: int) -> MultiPoly:
    size = len(rows)
    if size == 0:
        return MultiPoly.const(nvars, 1)
    if size == 1:
        return rows[0][0]
    if size > 4:
        return _bareiss_det(rows, nvars)
    # Laplace expansion along the row with most zeros
    r = min(range(size), key=lambda i: -sum(1 for e in rows[i] if e.is_zero()))
    total = MultiPoly.zero(nvars)
    for j, entry in enumerate(rows[r]):
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for i, row in enumerate(rows) if i != r]
        term = entry * _det(minor, nvars)
        total = total + term if (r + j) % 2 == 0 else total - term
    return total


def _minor(F: RatMap, size: int) -> RatFunc:
    rows, dens = _poly_rows(F, size)
    num = _det([row[:size] for row in rows], F.n)
    den = MultiPoly.const(F.n, 1)
    for d in dens:
        den = den * d
    return RatFunc(num, den)


def jacobian_determinant(F: RatMap) -> RatFunc:
    return _minor(F, F.n)


def leading_principal_minors(F: RatMap) -> list[RatFunc]:
    return [_minor(F, k) for k in range(1, F.n + 1)]


def keller_check(F: RatMap) -> tuple[bool, Fraction | None]:
    j = jacobian_determinant(F)
    if j.is_constant() and not j.is_zero():
        return True, j.constant_value()
    return False, None


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class SamplingConfig:
    bound: Fraction = Fraction(10)
    samples: int = 10_000
    search: bool = True
    seed: int = 0


def nowhere_vanishing_verdict(g: RatFunc, certificates: Sequence[MapCertificate] = (),
                              config: SamplingConfig = SamplingConfig()) -> Verdict:
    """Three-valued decision of "g has no real zero where it is defined"."""
    num, den = g.num, g.den
    n = g.nvars
    den_or_none = None if den.is_constant() else den
    if num.is_zero():
        pt = _admissible_point(den, n)
        return Verdict(Status.REFUTED, ["identically zero"], Witness(point=pt))
    if num.is_constant():
        return Verdict(Status.PROVED, ["numerator is a nonzero constant"], certificate="nonzero constant")
    used = num.variables()
    if len(used) == 1:
        (i,) = used
        u = num.to_univariate(i)
        if count_real_roots(u) == 0:
            return Verdict(Status.PROVED, [f"numerator depends on x{i + 1} only and has no real roots (Sturm)"],
                           certificate="Sturm")
        w = _univariate_witness(u, i, den, n)
        if w is not None:
            return Verdict(Status.REFUTED, [f"real root of the numerator in x{i + 1} (Sturm isolation)"], w)
    reduced = axis_restriction(num)
    if reduced is not None and count_real_roots(reduced[1]) == 0:
        return Verdict(Status.PROVED, [f"numerator is a polynomial in one linear form; its restriction to the "
                                       f"x{reduced[0] + 1} axis has no real roots (Sturm)"], certificate="Sturm")
    quad = quadratic_sign_proof(num)
    if quad is not None:
        return Verdict(Status.PROVED, [quad[1]], certificate="Sturm")
    for cert in certificates:
        v = _try_certificate(num, cert.squares, cert.constant, "supplied", config.seed)
        if v is not None:
            return v
    if config.search:
        found = search_certificate(num)
        if found is not None:
            ok, why = strictness(found, config.seed)
            if ok:
                return Verdict(Status.PROVED, [f"{found.origin}: {found.describe(default_names(n))}", why],
                               certificate=f"SOS ({found.origin})")
    points = small_lattice(n) + halton_points(n, config.samples, config.bound)
    outcome = falsify(num, den_or_none, points)
    stats = (f"{outcome.samples} rational samples in [-{format_rational(config.bound)}, "
             f"{format_rational(config.bound)}]^{n} plus a small lattice: "
             f"{outcome.signs.get(1, 0)} positive, {outcome.signs.get(-1, 0)} negative")
    if outcome.witness is not None:
        kind = "exact rational zero" if outcome.witness.parameter is None else "zero on a sign-change segment"
        return Verdict(Status.REFUTED, [kind, stats], outcome.witness)
    return Verdict(Status.UNKNOWN, [stats, "no certificate found and no zero located"])


def _try_certificate(num, squares, constant, origin, seed) -> Verdict | None:
    cert = check_certificate(num, squares, constant, origin=origin)
    if cert is None:
        return None
    ok, why = strictness(cert, seed)
    if not ok:
        return None
    names = default_names(num.nvars)
    return Verdict(Status.PROVED, [f"{origin} certificate verified by expansion: {cert.describe(names)}", why],
                   certificate=f"SOS ({origin})")


def _admissible_point(den: MultiPoly, n: int) -> tuple[Fraction, ...]:
    for pt in small_lattice(n):
        if den.evaluate(pt) != 0:
            return pt
    for pt in halton_points(n, 1000, 10):
        if den.evaluate(pt) != 0:
            return pt
    raise AlgebraError("ZeroDenominator", "no admissible point found")


def _univariate_witness(u, i: int, den: MultiPoly, n: int) -> Witness | None:
    boxes = isolate_real_roots(u, Fraction(1, 64))
    others = sorted(small_lattice(n - 1), key=lambda p: sum(abs(c.numerator) + c.denominator for c in p)) \
        if n > 1 else [()]
    for box in boxes:
        exact = box.rational_value()
        for rest in others:
            fixed = {j: rest[k] for k, j in enumerate(jj for jj in range(n) if jj != i)}
            if exact is not None:
                pt = tuple(exact if j == i else fixed[j] for j in range(n))
                if den.evaluate(pt) != 0:
                    return Witness(point=pt)
                continue
            dres = den.partial_evaluate(fixed)
            if dres.is_constant():
                ok = not dres.is_zero()
            else:
                ok = sign_at(dres.to_univariate(i), box) != 0
            if ok:
                pt = tuple(None if j == i else fixed[j] for j in range(n))
                return Witness(point=pt, parameter=box, axis=i)
    return None


def everywhere_defined_verdict(F: RatMap, config: SamplingConfig = SamplingConfig()) -> Verdict:
    parts = []
    for k, c in enumerate(F.components, start=1):
        if c.den.is_constant():
            continue
        label = f"F{k}.den"
        v = nowhere_vanishing_verdict(RatFunc.from_poly(c.den), F.certificate_for(label), config)
        parts.append((label, v))
    if not parts:
        return Verdict(Status.PROVED, ["all components are polynomials"], certificate="polynomial map")
    return combine(parts)


def nonsingular_verdict(F: RatMap, config: SamplingConfig = SamplingConfig()) -> Verdict:
    j = jacobian_determinant(F)
    jv = nowhere_vanishing_verdict(j, F.certificate_for("jac"), config)
    return combine([("jacobian", jv), ("everywhere defined", everywhere_defined_verdict(F, config))])


# ---------------------------------------------------------------------------
# lift and composition


def lift_plus(F: RatMap, verdict: Verdict | None = None,
              config: SamplingConfig = SamplingConfig()) -> RatMap:
    """F+(x, z) = (F(x), z / j(F)(x)), checked to have Jacobian determinant exactly 1."""
    verdict = verdict or nonsingular_verdict(F, config)
    if verdict.status is Status.REFUTED:
        raise SingularBase(verdict)
    m = F.n + 1
    embed = list(range(F.n))
    comps = [RatFunc(c.num.embed(m, embed), c.den.embed(m, embed), _reduced=True) for c in F.components]
    j = jacobian_determinant(F)
    jj = RatFunc(j.num.embed(m, embed), j.den.embed(m, embed), _reduced=True)
    comps.append(RatFunc.var(m, F.n) / jj)
    lifted = RatMap(m, tuple(comps), notes=(f"base nonsingularity: {verdict.status.value}",))
    check = jacobian_determinant(lifted)
    if check != 1:
        raise AlgebraError("LiftCheckFailed", f"j(F+) = {check}, expected 1")
    return lifted


def composition_equals(F: RatMap, G: RatMap, H: RatMap) -> bool:
    """Exact test of F o G == H by cross-multiplication, without reducing F o G."""
    if not (F.n == G.n == H.n):
        raise AlgebraError("DimensionMismatch", "maps of different dimensions")
    assign = dict(enumerate(G.components))
    for c, h in zip(F.components, H.components):
        a, da = substitute_pair(c.num, assign, G.n)
        b, db = substitute_pair(c.den, assign, G.n)
        if b.is_zero() or a * db * h.den != h.num * da * b:
            return False
    return True


def compose(F: RatMap, G: RatMap) -> RatMap:
    """Formal composition F o G on reduced representatives; domain caveats go to ``notes``."""
    if F.n != G.n:
        raise AlgebraError("DimensionMismatch", f"cannot compose maps of dimensions {F.n} and {G.n}")
    assign = dict(enumerate(G.components))
    comps = tuple(substitute_ratfunc(c, assign, G.n) for c in F.components)
    notes = []
    inner = [k for k, c in enumerate(G.components, 1) if not c.den.is_constant()]
    outer = [k for k, c in enumerate(F.components, 1) if not c.den.is_constant()]
    if inner:
        notes.append("inner map has denominators in components " + ", ".join(f"G{k}" for k in inner)
                     + "; the composite is defined only where they are nonzero")
    if outer:
        notes.append("outer denominators of " + ", ".join(f"F{k}" for k in outer)
                     + " are pulled back through G and may vanish on G's image")
    if not notes:
        notes.append("polynomial maps: composition is defined everywhere")
    return RatMap(F.n, comps, notes=tuple(notes))

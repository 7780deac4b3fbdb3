"""Built-in example maps with expected metadata; every expected value names its source."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import MultiPoly, format_poly
from .maps import RatMap, parse_map

# provenance tags
CITED = "CITED"  # stated in the source article (quote in ``note``)
DERIVED = "DERIVED"  # computed by an independent oracle in the test suite
TRIVIAL = "TRIVIAL"  # immediate by hand


@dataclass(frozen=True)
class Expected:
    value: object
    provenance: str
    note: str = ""

    def to_json(self) -> dict:
        out = {"value": self.value, "provenance": self.provenance}
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    description: str
    _source: object = field(repr=False)  # text, or a zero-argument callable producing it
    expected: dict = field(default_factory=dict)

    @property
    def source(self) -> str:
        return self._source() if callable(self._source) else self._source

    def load(self) -> RatMap:
        return parse_map(self.source)

    def to_json(self) -> dict:
        return {"name": self.name, "description": self.description,
                "expected": {k: v.to_json() for k, v in self.expected.items()}}


@lru_cache(maxsize=None)
def pinchuk_source() -> str:
    """The Pinchuk map with its Jacobian certificate.

    t = xy - 1, h = t(xt + 1), f = (xt + 1)^2 (t^2 + y),
    P = f + h, Q = -t^2 - 6th(h + 1) - u(f, h) with
    u = 170fh + 91h^2 + 195fh^2 + 69h^3 + 75fh^3 + (75/4)h^4.
    Its Jacobian determinant is t^2 + (t + f(13 + 15h))^2 + f^2, which is
    positive because t and f have no common real zero.
    """
    x, y = MultiPoly.var(2, 0), MultiPoly.var(2, 1)
    t = x * y - 1
    h = t * (x * t + 1)
    f = (x * t + 1) ** 2 * (t ** 2 + y)
    P = f + h
    u = (170 * f * h + 91 * h ** 2 + 195 * f * h ** 2 + 69 * h ** 3 + 75 * f * h ** 3
         + Fraction(75, 4) * h ** 4)
    Q = -t ** 2 - 6 * t * h * (h + 1) - u
    names = ["x1", "x2"]
    squares = ", ".join(format_poly(s, names) for s in (t, t + f * (13 + 15 * h), f))
    return (
        "# Pinchuk map: nonsingular, not injective, geometric degree 2\n"
        "n=2\n"
        f"F1 = {format_poly(P, names)}\n"
        f"F2 = {format_poly(Q, names)}\n"
        f"certificate jac = SOS({squares})\n"
    )


def _e(value, provenance, note=""):
    return Expected(value, provenance, note)


_ENTRIES = [
    CorpusEntry("identity1", "identity on the line", "n=1\nF1 = x1\n", {
        "degree": _e(1, TRIVIAL), "N": _e(1, TRIVIAL), "keller": _e(1, TRIVIAL),
        "nonsingular": _e("PROVED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("INVERTIBLE", TRIVIAL),
    }),
    CorpusEntry("identity2", "identity on the plane", "n=2\nF1 = x1\nF2 = x2\n", {
        "degree": _e(1, TRIVIAL), "N": _e(1, TRIVIAL), "keller": _e(1, TRIVIAL),
        "nonsingular": _e("PROVED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("INVERTIBLE", TRIVIAL),
    }),
    CorpusEntry("x+x3", "monotone cubic, injective with extension degree 3", "n=1\nF1 = x1 + x1^3\n", {
        "degree": _e(3, DERIVED, "x^3 + x - y0 has 3 complex roots"),
        "N": _e(1, CITED, "monotone increasing or decreasing, hence injective"),
        "keller": _e(None, TRIVIAL, "j = 1 + 3x^2 is not constant"),
        "nonsingular": _e("PROVED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("INVERTIBLE", CITED, "monotone increasing or decreasing, hence injective"),
        "galois": _e(False, CITED, "the field extension R(y) in R(x) is neither"),
        "automorphisms": _e(1, DERIVED),
    }),
    CorpusEntry("x2", "square map, singular at 0", "n=1\nF1 = x1^2\n", {
        "degree": _e(2, TRIVIAL), "N": _e(2, TRIVIAL), "keller": _e(None, TRIVIAL),
        "nonsingular": _e("REFUTED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("UNKNOWN", TRIVIAL, "nonsingularity fails, theorems do not apply"),
        "galois": _e(True, TRIVIAL), "automorphisms": _e(2, TRIVIAL),
    }),
    CorpusEntry("x3", "cube map, singular at 0 yet injective", "n=1\nF1 = x1^3\n", {
        "degree": _e(3, TRIVIAL), "N": _e(1, TRIVIAL), "keller": _e(None, TRIVIAL),
        "nonsingular": _e("REFUTED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("UNKNOWN", TRIVIAL, "nonsingularity fails, theorems do not apply"),
        "galois": _e(False, DERIVED), "automorphisms": _e(1, DERIVED),
    }),
    CorpusEntry("x3-x", "cubic with three-point fiber over 0", "n=1\nF1 = x1^3 - x1\n", {
        "degree": _e(3, TRIVIAL), "N": _e(3, TRIVIAL), "keller": _e(None, TRIVIAL),
        "nonsingular": _e("REFUTED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("UNKNOWN", TRIVIAL, "nonsingularity fails, theorems do not apply"),
    }),
    CorpusEntry("bump", "1/(1+x^2), proper except at 0", "n=1\nF1 = 1/(1 + x1^2)\n", {
        "degree": _e(2, TRIVIAL), "N": _e(2, TRIVIAL), "keller": _e(None, TRIVIAL),
        "nonsingular": _e("REFUTED", TRIVIAL, "derivative vanishes at 0"),
        "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("UNKNOWN", TRIVIAL, "nonsingularity fails, theorems do not apply"),
        "non_proper_points": _e([0], CITED, "proper except at y = 0"),
    }),
    CorpusEntry("triangular", "triangular polynomial automorphism", "n=2\nF1 = x1 + x2^3\nF2 = x2\n", {
        "degree": _e(1, TRIVIAL), "N": _e(1, TRIVIAL), "keller": _e(1, TRIVIAL),
        "nonsingular": _e("PROVED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("INVERTIBLE", TRIVIAL), "inverse": _e(["x1 - x2^3", "x2"], TRIVIAL),
    }),
    CorpusEntry("rational-shear", "shear by an everywhere-defined rational function",
                "n=2\nF1 = x1 + 1/(1 + x2^2)\nF2 = x2\n", {
        "degree": _e(1, TRIVIAL), "N": _e(1, TRIVIAL), "keller": _e(1, TRIVIAL),
        "nonsingular": _e("PROVED", TRIVIAL), "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("INVERTIBLE", TRIVIAL),
        "inverse": _e(["(x1*x2^2 + x1 - 1)/(x2^2 + 1)", "x2"], TRIVIAL),
    }),
    CorpusEntry("vitushkin", "Keller map that is not everywhere defined and not injective",
                "n=2\nF1 = x1^2*x2^6 + 2*x1*x2^2\nF2 = x1*x2^3 + 1/x2\n", {
        "degree": _e(2, DERIVED, "complex solution count at a generic target"),
        "keller": _e(-2, DERIVED),
        "nonsingular": _e("REFUTED", DERIVED, "j = -2 where defined, but the map is undefined on x2 = 0"),
        "everywhere_defined": _e("REFUTED", CITED, "denominator x2 vanishes; that requirement is crucial"),
        "pair": _e([[1, 1], [-3, -1]], CITED, "maps (1,1) and (-3,-1) to the same point"),
        "invertibility": _e("UNKNOWN", TRIVIAL, "not everywhere defined, theorems do not apply"),
    }),
    CorpusEntry("pinchuk", "Pinchuk map: nonsingular polynomial map of the plane that is not injective",
                pinchuk_source, {
        "degree": _e(6, CITED, "the same extension of degree 6"),
        "N": _e(2, CITED, "geometric degree 2"),
        "keller": _e(None, CITED, "everywhere positive Jacobian determinant, not constant"),
        "nonsingular": _e("PROVED", CITED, "everywhere positive Jacobian determinant"),
        "everywhere_defined": _e("PROVED", TRIVIAL),
        "invertibility": _e("NOT_INVERTIBLE", CITED, "a family of counterexamples for n=2"),
        "omitted_points": _e(2, CITED, "exactly 2 points omitted in the image plane; regression data only"),
        "automorphisms": _e("trivial", CITED, "cited, not verifiable here (n = 2)"),
    }),
]


def corpus_list() -> list[CorpusEntry]:
    return list(_ENTRIES)


def corpus_entry(name: str) -> CorpusEntry:
    for e in _ENTRIES:
        if e.name == name:
            return e
    raise KeyError(f"no corpus entry named {name!r}; known: {', '.join(e.name for e in _ENTRIES)}")

"""Every corpus entry's computed metadata against its expected metadata (seed 42)."""

import pytest

from jaclab.corpus import DERIVED, CITED, TRIVIAL, corpus_entry, corpus_list
from jaclab.fibers import properness_at, solve_fiber
from jaclab.maps import keller_check, parse_map, serialize
from jaclab.verdict import birational_inverse, gather_evidence, invertibility_verdict

SEED = 42
NAMES = [e.name for e in corpus_list()]


@pytest.fixture(scope="module")
def evidence(request):
    cache = {}

    def get(name):
        if name not in cache:
            if name == "pinchuk":
                cache[name] = request.getfixturevalue("pinchuk_evidence")
            else:
                cache[name] = gather_evidence(corpus_entry(name).load(), seed=SEED, samples=500)
        return cache[name]

    return get


def test_listing_and_lookup():
    assert {"identity1", "identity2", "x+x3", "x2", "x3", "x3-x", "bump", "triangular",
            "rational-shear", "vitushkin", "pinchuk"} <= set(NAMES)
    with pytest.raises(KeyError):
        corpus_entry("nope")


def test_every_expectation_has_provenance():
    for entry in corpus_list():
        for key, exp in entry.expected.items():
            assert exp.provenance in (CITED, DERIVED, TRIVIAL), (entry.name, key)
            if exp.provenance == CITED:
                assert exp.note, (entry.name, key)


def test_sources_parse_and_round_trip():
    for entry in corpus_list():
        F = entry.load()
        assert parse_map(serialize(F)).components == F.components


@pytest.mark.parametrize("name", NAMES)
def test_metadata_regression(name, evidence):
    entry = corpus_entry(name)
    F = entry.load()
    ev = evidence(name)
    exp = {k: v.value for k, v in entry.expected.items()}
    assert ev.extension.degree == exp["degree"]
    assert keller_check(F)[1] == exp["keller"]
    assert ev.nonsingular.status.value == exp["nonsingular"]
    assert ev.defined.status.value == exp["everywhere_defined"]
    if "N" in exp:
        assert ev.histogram.N_hat == exp["N"]
    verdict = invertibility_verdict(F, seed=SEED, evidence=ev)
    assert verdict.status == exp["invertibility"]
    if "galois" in exp:
        assert (len(ev.automorphisms) == ev.extension.degree) is exp["galois"]
    if isinstance(exp.get("automorphisms"), int):
        assert len(ev.automorphisms) == exp["automorphisms"]
    if "inverse" in exp:
        G = birational_inverse(F, ev.extension).inverse
        text = f"n={F.n}\n" + "".join(f"F{k} = {s}\n" for k, s in enumerate(exp["inverse"], 1))
        assert G.components == parse_map(text).components
    if "pair" in exp:
        a, b = (tuple(v) for v in exp["pair"])
        target = F.evaluate(a)
        assert F.evaluate(b) == target
        coords = {p.coords for p in solve_fiber(F, target).points}
        assert {a, b} <= coords
    for y in exp.get("non_proper_points", []):
        assert properness_at(F, (y,) if F.n == 1 else y).status == "NOT_PROPER"


@pytest.mark.parametrize("name", [n for n in NAMES if corpus_entry(n).load().n == 1])
def test_dim1_nonsingular_maps_are_invertible_with_odd_degree(name, evidence):
    ev = evidence(name)
    if ev.nonsingular.status.value != "PROVED":
        return
    assert ev.extension.degree % 2 == 1
    assert invertibility_verdict(ev.F, seed=SEED, evidence=ev).status == "INVERTIBLE"

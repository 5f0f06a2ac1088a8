from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import short_words, vectors2, words
from kannappan.algebra import (
    CyclicElement, DomainError, FreeAbelian, FreeSemigroup, ProductCarrier, ProductElement,
    CyclicGroup, Word, ZERO, ZeroAdjoined, power, vec,
)
from kannappan.realfn import (
    AdditiveCharacter, BoundedNoise, LookupTable, PatternCount, Pullback, QuadraticForm,
    from_config, kannappan_defect, nfold_bound, nfold_defect, order_two_deviations, parse_fn,
    power_defect, projection, quadratic_exchange_residuals, square_compose_defect, square_fn,
    sup_defect, zero_defect,
)

Z = FreeAbelian(1)
Q2 = QuadraticForm([[2, -1], [-1, 3]], [5, -7])


def brute_defect(f, x, y, z):
    # the seven terms written out independently
    return f(x * y * z) + f(x) + f(y) + f(z) - f(x * y) - f(x * z) - f(y * z)


def test_evaluate_examples():
    assert square_fn()(vec(3)) == 9
    assert AdditiveCharacter([2, -1])(vec(1, 1)) == 1
    assert PatternCount()(Word("aabb")) == 1


def test_defect_examples():
    assert kannappan_defect(square_fn(), vec(3), vec(4), vec(5)) == 0
    assert kannappan_defect(PatternCount(), Word("a"), Word("a"), Word("bb")) == 1


@pytest.mark.parametrize("K", [1, 3, Fraction(5, 2)])
def test_bit_pullback_defect(K):
    G = ProductCarrier(FreeAbelian(1), CyclicGroup(2))
    f = Pullback(projection(1), LookupTable({CyclicElement(0, 2): 0, CyclicElement(1, 2): K}))
    odd = [G.parse(f"{k}&1") for k in (2, -5, 7)]
    assert kannappan_defect(f, *odd) == 4 * K


@given(vectors2, vectors2, vectors2)
def test_quadratic_forms_are_solutions(x, y, z):
    assert kannappan_defect(Q2, x, y, z) == 0
    assert kannappan_defect(Q2, x, y, z) == brute_defect(Q2, x, y, z)


@given(short_words, short_words, short_words)
def test_eta_defect_bounded(x, y, z):
    f = PatternCount()
    d = kannappan_defect(f, x, y, z)
    assert d == brute_defect(f, x, y, z)
    assert abs(d) <= 5


def test_eta_sup_on_short_words():
    ws = list(FreeSemigroup().words(4))
    triples = [(x, y, z) for x in ws for y in ws for z in ws]
    rep = sup_defect(PatternCount(), triples)
    assert rep.sup_estimate <= 5 and rep.samples == len(triples)
    assert abs(rep.value) == rep.sup_estimate
    json.dumps(rep.to_json())


def test_noise_defect_sweep():
    f = square_fn() + 0.1 * BoundedNoise(1.0, 4)
    rng = random.Random(0)
    triples = [tuple(Z.random(rng) for _ in range(3)) for _ in range(3000)]
    rep = sup_defect(f, triples)
    assert 0 < rep.sup_estimate <= 0.7
    assert rep.arithmetic == "float"


def test_sup_defect_empty():
    with pytest.raises(DomainError):
        sup_defect(square_fn(), [])


def test_noise_is_deterministic_and_bounded():
    f, g = BoundedNoise(0.5, 11), BoundedNoise(0.5, 11)
    vals = [f(vec(n)) for n in range(-200, 200)]
    assert vals == [g(vec(n)) for n in range(-200, 200)]
    assert max(abs(v) for v in vals) <= 0.5
    assert vals != [BoundedNoise(0.5, 12)(vec(n)) for n in range(-200, 200)]
    e = BoundedNoise(0.5, 11, even=True)
    assert all(e(vec(n)) == e(vec(-n)) for n in range(50))


def test_nfold():
    f = PatternCount()
    assert nfold_bound(4, 5) == 15
    xs = [Word(w) for w in ("a", "a", "bb")]
    assert nfold_defect(f, xs, 5).value == kannappan_defect(f, *xs)
    assert nfold_defect(Q2, [vec(1, 2), vec(3, 4), vec(0, 1), vec(-1, 1), vec(2, 2)], 0).value == 0
    with pytest.raises(DomainError):
        nfold_defect(f, xs[:2], 5)
    rng = random.Random(1)
    F = FreeSemigroup()
    for _ in range(2000):
        assert nfold_defect(f, [F.random(rng, 12) for _ in range(4)], 5).holds()


def test_power_defect_examples():
    for n in range(3, 12):
        assert power_defect(square_fn(), vec(7), n, 0).value == 0
        assert power_defect(AdditiveCharacter([1]), vec(7), n, 0).value == 0
    v = power_defect(PatternCount(), Word("aabb"), 5, 5)
    assert v.value == 0 and v.bound == 30
    with pytest.raises(DomainError):
        power_defect(square_fn(), vec(1), 2, 0)


@given(short_words, st.integers(3, 12))
def test_power_defect_bound_eta(w, n):
    assert power_defect(PatternCount(), w, n, 5).holds()


@given(short_words, short_words, short_words)
def test_square_compose_eta(x, y, z):
    v = square_compose_defect(PatternCount(), x, y, z, 5)
    assert v.bound == 105 and v.holds()


@given(vectors2, vectors2, vectors2)
def test_square_compose_additive_zero(x, y, z):
    assert square_compose_defect(AdditiveCharacter([3, -2]), x, y, z, 0).value == 0


def test_exchange_counter_triple():
    r = quadratic_exchange_residuals(square_fn(), vec(0), vec(0), vec(1))
    assert r.corrected == 0 and r.as_printed == -1


@given(vectors2, vectors2, vectors2)
def test_exchange_corrected(x, y, z):
    assert quadratic_exchange_residuals(Q2, x, y, z).corrected == 0
    assert quadratic_exchange_residuals(AdditiveCharacter([1, 4]), x, y, z).corrected == 0


def test_exchange_needs_group():
    with pytest.raises(DomainError):
        quadratic_exchange_residuals(PatternCount(), Word("a"), Word("b"), Word("a"))


def test_order_two_bounds():
    G = ProductCarrier(FreeAbelian(1), CyclicGroup(2))
    eps = 0.2
    f = Pullback(projection(0), square_fn()) + BoundedNoise(eps, 5)
    c = G.parse("0&1")
    rng = random.Random(2)
    for _ in range(500):
        assert order_two_deviations(f, G.random(rng), c).within(7 * eps, 1e-12)
    with pytest.raises(DomainError):
        order_two_deviations(f, G.random(rng), G.parse("0&0"))


def test_zero_adjunction():
    table = {ZERO: Fraction(3), ZeroAdjoined(Word("a")): Fraction(-2),
             ZeroAdjoined(Word("ab")): Fraction(7, 3)}
    f = LookupTable(table)
    for x in table:
        assert zero_defect(f, x) == f(x)


def test_lookup_outside_table():
    with pytest.raises(DomainError):
        LookupTable({vec(0): 1})(vec(1))


def test_parse_fn_shorthand():
    f = parse_fn("quadratic:1,2,2,3,5,-1")
    assert f(vec(1, 1)) == 1 + 4 + 3 + 5 - 1
    g = parse_fn("2*quadratic:1,0+additive:3")
    assert g(vec(2)) == 2 * 4 + 6
    assert parse_fn("eta")(Word("aabb")) == 1
    assert parse_fn("pattern:ab")(Word("abab")) == 2
    h = parse_fn("quadratic:1,1+noise:0.5,3")
    assert not h.exact and abs(h(vec(4)) - 20) <= 0.5
    with pytest.raises(DomainError):
        parse_fn("quadratic:1,2,3")
    with pytest.raises(DomainError):
        parse_fn("wobble:1")


def test_parse_fn_json(tmp_path):
    cfg = {"kind": "sum", "terms": [{"weight": "1/2", "fn": {"kind": "quadratic", "M": [[2]]}},
                                    {"fn": {"kind": "additive", "a": [1]}}]}
    f = parse_fn(json.dumps(cfg))
    assert f(vec(3)) == 12
    p = tmp_path / "f.json"
    p.write_text(json.dumps({"kind": "table", "entries": {"0": 1, "1": "2/3"}}))
    g = parse_fn(f"@{p}", CyclicGroup(2))
    assert g(CyclicElement(1, 2)) == Fraction(2, 3)
    s = from_config({"kind": "pullback", "hom": "sigma", "fn": {"kind": "quadratic", "M": [[1]]}})
    assert s.describe()


def test_quadratic_form_symmetry_check():
    with pytest.raises(DomainError):
        QuadraticForm([[1, 2], [0, 1]])

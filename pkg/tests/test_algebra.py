from __future__ import annotations

import random

import pytest
from hypothesis import given, strategies as st

from conftest import klein, vectors2, wreath_elements, words
from kannappan.algebra import (
    B, BC, C, ONE, ZERO, AbelianVector, CyclicElement, CyclicGroup, DomainError, FreeAbelian,
    FreeSemigroup, KleinFour, ProductCarrier, Word, WreathCarrier, WreathElement,
    ZeroAdjoined, ZeroAdjoinedCarrier, amplification_triple, amplified_element, embed,
    embed_chain, mul, parse_carrier, power, vec, wreath_chain, wreath_conjugate,
)


def test_word_concatenation():
    assert mul(Word("ab"), Word("ba")) == Word("abba")
    assert power(Word("ab"), 3) == Word("ababab")


def test_vector_sum_and_power():
    assert vec(1, 2) * vec(3, -1) == vec(4, 1)
    assert power(vec(2, -1), 4) == vec(8, -4)


def test_cyclic_power():
    assert power(CyclicElement(3, 5), 7) == CyclicElement(1, 5)


def test_zero_absorbs():
    x = ZeroAdjoined(Word("ab"))
    assert ZERO * x == ZERO and x * ZERO == ZERO
    assert x * x == ZeroAdjoined(Word("abab"))


def test_domain_errors():
    with pytest.raises(DomainError):
        mul(Word("a"), vec(1))
    with pytest.raises(DomainError):
        power(Word("a"), 0)
    with pytest.raises(DomainError):
        Word("")
    with pytest.raises(DomainError):
        vec(1) * vec(1, 2)
    with pytest.raises(DomainError):
        amplification_triple(WreathElement(B), WreathElement(), WreathElement())


def test_power_zero_with_unit():
    assert power(Word("ab", True), 0) == Word("", True)
    assert power(vec(3), 0) == vec(0)


@given(words, st.integers(1, 40))
def test_power_matches_repetition(w, n):
    assert power(w, n).letters == w.letters * n


@given(klein, klein, klein)
def test_klein_group_laws(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * y == y * x
    assert (x * x).is_identity()


@given(wreath_elements(), wreath_elements(), wreath_elements())
def test_wreath_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(wreath_elements())
def test_wreath_inverse(x):
    assert (x * x.inverse()).is_identity()
    assert (x.inverse() * x).is_identity()


@given(wreath_elements(slot_one_only=True), klein)
def test_conjugation_moves_slot(u, t):
    moved = wreath_conjugate(u, t)
    assert moved.top == ONE
    assert moved.slot_map() == {t: v for _, v in u.slots}
    assert wreath_conjugate(wreath_conjugate(u, t), t) == u


@given(wreath_elements(slot_one_only=True), wreath_elements(slot_one_only=True),
       wreath_elements(slot_one_only=True))
def test_amplification_triple(x, y, z):
    x1, y1, z1 = amplification_triple(x, y, z)
    assert x1 * y1 * z1 == amplified_element(x) * amplified_element(y) * amplified_element(z)


def test_amplification_identity():
    e = WreathElement()
    assert amplification_triple(e, e, e) == (e, e, e)


def test_embed():
    assert embed(vec(0)).is_identity()
    s = embed_chain(vec(3), 3)
    assert str(s) == "1|1=(1|1=(1|1=3))"
    assert embed(vec(1)) * embed(vec(2)) == embed(vec(3))


def test_wreath_chain_parse_roundtrip():
    carriers = wreath_chain(FreeAbelian(1), 2)
    rng = random.Random(3)
    for W in carriers[1:]:
        for _ in range(50):
            x = W.random(rng)
            assert W.parse(str(x)) == x


@pytest.mark.parametrize("text", ["Z", "Z^3", "Z/7", "K4", "F:ab", "M:ab", "zero(F:ab)",
                                  "wr(Z)", "prod(Z,Z/2)", "wr(wr(Z))", "prod(zero(F:ab),K4)"])
def test_carrier_parse_roundtrip(text):
    carrier = parse_carrier(text)
    rng = random.Random(text)
    for _ in range(30):
        x = carrier.random(rng)
        assert carrier.contains(x)
        assert carrier.parse(str(x)) == x


def test_carrier_parse_errors():
    for bad in ["Q", "Z/0", "Z^x", "wr(", "prod()", "zero(Z,Z)"]:
        with pytest.raises(DomainError):
            parse_carrier(bad)
    with pytest.raises(DomainError):
        FreeSemigroup("ab").parse("abc")
    with pytest.raises(DomainError):
        FreeAbelian(2).parse("1")


def test_shortlex_words():
    ws = [w.letters for w in FreeSemigroup("ab").words(2)]
    assert ws == ["a", "b", "aa", "ab", "ba", "bb"]
    assert len(list(FreeSemigroup("ab").words(8))) == 510


def test_carrier_flags():
    assert CyclicGroup(4).is_periodic and CyclicGroup(4).is_group
    assert not FreeSemigroup().is_group
    assert FreeAbelian(2).is_abelian
    assert not WreathCarrier(FreeAbelian(1)).is_abelian
    assert KleinFour().is_periodic
    assert not ZeroAdjoinedCarrier(FreeSemigroup()).is_group
    assert ProductCarrier(FreeAbelian(1), CyclicGroup(2)).is_group


@given(vectors2, vectors2)
def test_vector_inverse(u, v):
    assert (u * v) * v.inverse() == u
    assert -(-u) == u

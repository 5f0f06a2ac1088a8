from __future__ import annotations

import re

import pytest
from hypothesis import given, strategies as st

from conftest import short_words, words
from kannappan.algebra import DomainError, FreeSemigroup, Word, power
from kannappan.patterns import (
    PatternCounter, count_occurrences, crossing_count, eta, eta_power_count, eta_tilde,
)


def scan(text: str, pattern: str = "aabb") -> int:
    # independent oracle: overlapping matches via lookahead
    return len(re.findall(f"(?={re.escape(pattern)})", text))


@pytest.mark.parametrize("w,expected", [("aabb", 1), ("ab", 0), ("aabbaabb", 2), ("aaabbb", 1),
                                        ("bbaa", 0), ("aabbb", 1)])
def test_eta_values(w, expected):
    assert eta(w) == expected


@pytest.mark.parametrize("w,expected", [("aabb", 0), ("bbaa", 1), ("a", 0), ("abb", 0),
                                        ("baa", 0), ("bbaaab", 1), ("bbaaa", 1), ("abab", 0)])
def test_crossing_values(w, expected):
    assert crossing_count(w) == expected


@given(short_words)
def test_crossing_oracle(w):
    if len(w) >= 3:
        assert crossing_count(w) == scan(w.letters * 2) - 2 * scan(w.letters)


def test_power_count_values():
    assert eta_power_count("aabb", 1) == 2
    assert eta_power_count("bbaa", 2) == 3
    assert all(eta_power_count("ab", n) == 0 for n in range(21))


def test_eta_tilde_listed_values():
    assert eta_tilde("aabb") == 1
    assert [eta_tilde(w) for w in ("a", "b", "aa", "bb", "abb")] == [0] * 5
    assert eta_tilde("bbaa") == 1
    assert eta_tilde("bbaa") == eta_power_count("bbaa", 30) // 2**30 + (eta_power_count("bbaa", 30) % 2**30 > 0)


def test_eta_tilde_matches_large_power_ratio():
    for w in FreeSemigroup("ab").words(6):
        n = 30
        ratio = eta_power_count(w, n) / 2**n
        assert abs(ratio - eta_tilde(w)) <= 1 / 2**n * 3


def test_alphabet_errors():
    with pytest.raises(DomainError):
        eta("abc")
    with pytest.raises(DomainError):
        PatternCounter("")


@given(st.text(alphabet="ab", max_size=40), st.text(alphabet="ab", min_size=1, max_size=6))
def test_count_occurrences_oracle(text, pattern):
    assert count_occurrences(text, pattern) == scan(text, pattern)


@given(short_words, st.integers(0, 7))
def test_doubling_recurrence_matches_scan(w, n):
    assert eta_power_count(w, n) == scan(w.letters * 2**n)


@given(short_words, st.integers(1, 30), st.sampled_from(["aabb", "abab", "aba", "ab", "bbb"]))
def test_power_summary_matches_scan(w, m, pattern):
    counter = PatternCounter(pattern)
    assert counter.power_summary(w, m).count == scan(w.letters * m, pattern)


@given(words, words)
def test_window_property(u, v):
    assert eta(u * v) - eta(u) - eta(v) in (0, 1)


@given(short_words, short_words, short_words)
def test_triple_window(x, y, z):
    w = eta(x * y * z) - eta(x * y) - eta(y * z) + eta(y)
    assert w in (-1, 0, 1)


@given(short_words, st.integers(1, 16))
def test_eta_tilde_homogeneous(w, m):
    assert eta_tilde(power(w, m)) == m * eta_tilde(w)


@given(short_words)
def test_eta_tilde_is_eta_plus_crossing(w):
    if len(w) >= 3:
        assert eta_tilde(w) == eta(w) + crossing_count(w)


def test_short_words_use_powers():
    # |x| < 3: crossing is not a single junction
    assert eta_tilde(Word("ab")) == 0
    assert eta_tilde(Word("a")) == 0

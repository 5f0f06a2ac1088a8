from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kannappan.abelian import (
    ODD_CONSTANT, additive_recover, fit_least_squares, fit_quadratic_additive, is_kannappan_on,
    jung_recover, measured_defect, model_residual, quadratic_equation_residual,
)
from kannappan.algebra import DomainError, FreeAbelian, Word, vec
from kannappan.realfn import AdditiveCharacter, BoundedNoise, PatternCount, QuadraticForm, square_fn

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_fit_examples():
    m = fit_quadratic_additive(square_fn(), 1)
    assert m.form == ((1,),) and m.additive == (0,)
    m = fit_quadratic_additive(QuadraticForm([[1, 2], [2, 3]], [5, -1]), 2)
    assert m.form == ((1, 2), (2, 3)) and m.additive == (5, -1)
    m = fit_quadratic_additive(AdditiveCharacter([7]), 1)
    assert m.form == ((0,),) and m.additive == (7,)


@given(st.lists(fractions, min_size=6, max_size=6), st.lists(fractions, min_size=3, max_size=3))
def test_fit_is_exact_on_solutions(entries, a):
    M = [[entries[0], entries[1], entries[2]],
         [entries[1], entries[3], entries[4]],
         [entries[2], entries[4], entries[5]]]
    f = QuadraticForm(M, a)
    model = fit_quadratic_additive(f, 3)
    rng = random.Random(0)
    Z3 = FreeAbelian(3)
    assert model_residual(model, f, [Z3.random(rng) for _ in range(100)]) == 0


def test_residual_with_noise():
    f = QuadraticForm([[2]], [1]) + BoundedNoise(0.25, 3)
    model = fit_quadratic_additive(QuadraticForm([[2]], [1]), 1)
    assert model_residual(model, f, [vec(n) for n in range(-50, 51)]) <= 0.25


def test_residual_errors():
    model = fit_quadratic_additive(square_fn(), 1)
    with pytest.raises(DomainError):
        model_residual(model, square_fn(), [])
    with pytest.raises(DomainError):
        model_residual(model, PatternCount(), [Word("ab")])


def test_least_squares_mode():
    f = QuadraticForm([[1, 2], [2, 3]], [5, -1]) + BoundedNoise(0.01, 1)
    rng = random.Random(4)
    Z2 = FreeAbelian(2, random_bound=30)
    model = fit_least_squares(f, [Z2.random(rng) for _ in range(300)], 2)
    assert abs(float(model.form[0][1]) - 2) < 1e-3
    assert abs(float(model.additive[0]) - 5) < 1e-2


@given(st.tuples(st.integers(-999, 999), st.integers(-999, 999)).map(lambda t: vec(*t)),
       st.tuples(st.integers(-999, 999), st.integers(-999, 999)).map(lambda t: vec(*t)))
def test_quadratic_equation(x, y):
    Q = QuadraticForm([[3, -1], [-1, 2]])
    assert quadratic_equation_residual(Q, x, y) == 0


def test_jung_exact():
    res = jung_recover(square_fn(), [vec(n) for n in range(-20, 21)])
    assert res.Q.form == ((1,),) and res.sup_dev == 0 and res.holds


def test_jung_noise():
    f = square_fn() + 0.1 * BoundedNoise(1, 6, even=True)
    corpus = [vec(n) for n in range(-100, 101)]
    res = jung_recover(f, corpus, method="iterate")
    assert abs(res.Q.form[0][0] - 1) <= 1e-6
    d = measured_defect(f, corpus)
    assert res.sup_dev <= 0.1 <= 3 * d
    assert res.holds


def test_jung_rational_form_z2():
    rng = random.Random(8)
    M = [[Fraction(3, 2), Fraction(-1, 3)], [Fraction(-1, 3), Fraction(5, 4)]]
    f = QuadraticForm(M) + BoundedNoise(0.2, 2, even=True)
    Z2 = FreeAbelian(2, random_bound=40)
    corpus = [Z2.random(rng) for _ in range(150)]
    res = jung_recover(f, corpus, method="iterate")
    assert all(abs(res.Q.form[i][j] - M[i][j]) <= 1e-6 for i in range(2) for j in range(2))
    assert res.holds


def test_jung_uniqueness_across_corpora():
    f = QuadraticForm([[Fraction(7, 3)]]) + BoundedNoise(0.4, 1, even=True)
    r1 = jung_recover(f, [vec(n) for n in range(-60, 41)])
    r2 = jung_recover(f, [vec(n) for n in range(-10, 91)])
    shared = [vec(n) for n in range(-10, 41)]
    g1, g2 = r1.Q.as_realfn(), r2.Q.as_realfn()
    assert all(g1(v) == g2(v) for v in shared)


def test_jung_rejects_non_even():
    f = square_fn() + BoundedNoise(0.3, 1)
    with pytest.raises(DomainError, match="evenness"):
        jung_recover(f, [vec(n) for n in range(-5, 6)])


def test_additive_recovery():
    f = AdditiveCharacter([3]) + BoundedNoise(0.2, 4)
    corpus = [vec(n) for n in range(-60, 61)]
    res = additive_recover(f, corpus, theta=0.4)
    assert res.psi.additive == (3,)
    assert res.holds and res.constant == ODD_CONSTANT


def test_is_kannappan_on():
    triples = [(vec(a), vec(b), vec(c)) for a in range(-2, 3) for b in range(-2, 3) for c in range(-2, 3)]
    assert is_kannappan_on(QuadraticForm([[2]], [1]), triples)
    assert not is_kannappan_on(QuadraticForm([[2]], [1]) + BoundedNoise(0.1, 0), triples)

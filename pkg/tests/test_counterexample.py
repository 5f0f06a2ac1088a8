from __future__ import annotations

import json
import time

from kannappan.algebra import Word
from kannappan.counterexample import eta_fn, eta_tilde_fn, instability_witness
from kannappan.realfn import kannappan_defect


def test_witness_value():
    t0 = time.perf_counter()
    rep = instability_witness()
    assert time.perf_counter() - t0 < 1.0
    assert rep.value == 1 and type(rep.value) is int
    assert rep.eta_value == 1
    assert rep.ok


def test_listed_values():
    rep = instability_witness()
    assert tuple(rep.listed_eta_tilde.values()) == (1, 0, 0, 0, 0, 0)
    assert rep.listed_eta["aabb"] == 1
    assert sum(rep.listed_eta.values()) == 1


def test_witness_terms_sum():
    rep = instability_witness()
    assert sum(rep.terms.values()) == rep.value
    assert rep.terms["+eta~(xyz)"] == 1
    assert rep.rows()[-1][1] == "1"
    json.dumps(rep.to_json())


def test_eta_tilde_defect_elsewhere():
    f = eta_tilde_fn()
    a, b = Word("a"), Word("b")
    assert kannappan_defect(f, a, a, b * b) == 1
    # a solution would vanish on every triple; eta~ also fails on shifted copies
    assert kannappan_defect(f, Word("ba"), a, b * b) == 1
    assert kannappan_defect(eta_fn(), a, a, Word("bb")) == 1


def test_tilde_is_additive_on_powers_but_not_everywhere():
    f = eta_tilde_fn()
    x = Word("aabb")
    assert f(x * x) == 2 * f(x)
    assert f(Word("aa") * Word("bb")) != f(Word("aa")) + f(Word("bb"))

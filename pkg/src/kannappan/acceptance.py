"""Acceptance suite: one check per criterion, each with a time budget.

Every check returns a ``CriterionResult``; ``run_all`` runs them in order.
Sampling is seeded, so reports are reproducible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .abelian import fit_quadratic_additive, jung_recover, measured_defect, model_residual
from .algebra import (
    BC,
    C,
    CyclicGroup,
    FreeAbelian,
    FreeSemigroup,
    ProductCarrier,
    ProductElement,
    WreathCarrier,
    ZERO,
    ZeroAdjoined,
    amplification_triple,
    amplified_element,
    power,
    vec,
    wreath_conjugate,
)
from .counterexample import instability_witness
from .limits import (
    decompose,
    hat_limit,
    second_difference_certificate,
    tilde_limit,
    weighted_certificate,
)
from .patterns import PatternCounter, count_occurrences
from .realfn import (
    AdditiveCharacter,
    BoundedNoise,
    LookupTable,
    PatternCount,
    Pullback,
    QuadraticForm,
    as_fraction,
    coordinate_sum,
    kannappan_defect,
    nfold_bound,
    nfold_defect,
    order_two_deviations,
    power_defect,
    projection,
    quadratic_exchange_residuals,
    square_compose_defect,
    square_fn,
    zero_defect,
)

DEFAULT_SEED = 20240917
ETA_BOUND = 5


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    budget: float = 0.0
    data: dict = field(default_factory=dict)

    @property
    def in_time(self) -> bool:
        return self.seconds < self.budget

    @property
    def ok(self) -> bool:
        return self.passed and self.in_time

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        timing = f"{self.seconds:.2f}s / {self.budget:g}s"
        if not self.in_time:
            timing += " OVER BUDGET"
        return f"[{tag}] {self.number:2d} {self.name}: {self.detail} ({timing})"

    def to_json(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "in_time": self.in_time, "ok": self.ok, "detail": self.detail,
                "seconds": round(self.seconds, 3), "budget": self.budget, "data": self.data}


CRITERIA: dict[int, tuple[str, float, Callable]] = {}


def criterion(number: int, name: str, budget: float):
    def register(fn):
        CRITERIA[number] = (name, budget, fn)
        return fn
    return register


def run_criterion(number: int, seed: int = DEFAULT_SEED) -> CriterionResult:
    name, budget, fn = CRITERIA[number]
    t0 = time.perf_counter()
    passed, detail, data = fn(random.Random(f"{seed}:{number}"))
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0,
                           budget, data)


def run_all(seed: int = DEFAULT_SEED, only=None, echo: Callable | None = None) -> list[CriterionResult]:
    out = []
    for number in sorted(CRITERIA):
        if only and number not in only:
            continue
        res = run_criterion(number, seed)
        if echo:
            echo(res.line())
        out.append(res)
    return out


WORDS = FreeSemigroup("ab")


def _words(rng, count, max_length):
    return [WORDS.random(rng, max_length) for _ in range(count)]


# ---------------------------------------------------------------------------


@criterion(1, "instability witness", 1.0)
def _witness(rng):
    rep = instability_witness()
    ok = rep.ok and rep.value == 1 and isinstance(rep.value, int)
    return ok, f"defect of eta~ at (a, a, bb) = {rep.value}", rep.to_json()


@criterion(2, "eta defect bound", 30.0)
def _eta_defect(rng):
    f = PatternCount()
    worst, where = 0, None
    for _ in range(100_000):
        x, y, z = _words(rng, 3, 50)
        d = abs(kannappan_defect(f, x, y, z))
        if d > worst:
            worst, where = d, (str(x), str(y), str(z))
    return (worst <= ETA_BOUND,
            f"sup |defect| = {worst} <= {ETA_BOUND} over 1e5 triples",
            {"sup": int(worst), "witness": where})


@criterion(3, "window property", 30.0)
def _window(rng):
    counter = PatternCounter()
    bad = []

    def check(u, v):
        w = counter.eta(u.letters + v.letters) - counter.eta(u) - counter.eta(v)
        if w not in (0, 1):
            bad.append((str(u), str(v), w))

    short = list(WORDS.words(6))
    for u in short:
        for v in short:
            check(u, v)
    for _ in range(100_000):
        u, v = _words(rng, 2, 50)
        check(u, v)
    n = len(short) ** 2 + 100_000
    return not bad, f"{n} pairs, {len(bad)} outside {{0, 1}}", {"pairs": n, "bad": bad[:10]}


@criterion(4, "doubling recurrence vs brute force", 10.0)
def _doubling(rng):
    counter = PatternCounter()
    words = list(WORDS.words(8))
    bad = []
    for w in words:
        for n in range(7):
            if counter.power_count(w, n) != count_occurrences(w.letters * 2**n, counter.pattern):
                bad.append((str(w), n))
    return (len(words) == 510 and not bad,
            f"{len(words)} words x n <= 6, {len(bad)} mismatches", {"mismatches": bad[:10]})


@criterion(5, "n-fold bound", 60.0)
def _nfold(rng):
    f = PatternCount()
    worst = {}
    ok = True
    for n in range(3, 9):
        bound = nfold_bound(n, ETA_BOUND)
        top = 0
        for _ in range(10_000):
            v = nfold_defect(f, _words(rng, n, 12), ETA_BOUND)
            top = max(top, abs(v.value))
            ok &= v.holds()
        worst[n] = f"{top}/{bound}"
    return ok, "max |value| / bound: " + ", ".join(f"n={n}: {w}" for n, w in worst.items()), worst


@criterion(6, "power and square-composition bounds", 60.0)
def _power(rng):
    f = PatternCount()
    words = list(WORDS.words(8))
    p_checked = p_bad = 0
    for w in words:
        for n in range(3, 9):
            p_checked += 1
            p_bad += not power_defect(f, w, n, ETA_BOUND).holds()
    s_bad = s_top = 0
    for _ in range(10_000):
        v = square_compose_defect(f, *_words(rng, 3, 12), ETA_BOUND)
        s_top = max(s_top, abs(v.value))
        s_bad += not v.holds()
    ok = p_bad == 0 and s_bad == 0
    return (ok, f"power: {p_checked} checks, {p_bad} over; square-compose: 1e4 triples, "
                f"max {s_top} <= {21 * ETA_BOUND}, {s_bad} over",
            {"power_checked": p_checked, "power_violations": p_bad,
             "square_max": int(s_top), "square_violations": s_bad})


@criterion(7, "limit laws", 60.0)
def _limit_laws(rng):
    counter = PatternCounter()
    words = list(WORDS.words(8))
    eta = PatternCount()
    exact_bad = 0
    for w in words:
        base = counter.eta_tilde(w)
        for m in range(1, 17):
            exact_bad += counter.eta_tilde(power(w, m)) != m * base
    Z2 = FreeAbelian(2, random_bound=50)
    q = QuadraticForm([[2, -1], [-1, 3]], [5, -7])
    add = AdditiveCharacter([3, -4])
    vecs = [Z2.random(rng) for _ in range(100)]
    for v in vecs:
        h = hat_limit(q, v).value
        t = tilde_limit(add, v).value
        for n in range(1, 17):
            exact_bad += hat_limit(q, power(v, n)).value != n * n * h
            exact_bad += tilde_limit(add, power(v, n)).value != n * t
    agree_bad, worst = 0, Fraction(0)

    def cmp(a, b):
        nonlocal agree_bad, worst
        gap = abs(as_fraction(a) - as_fraction(b))
        worst = max(worst, gap)
        agree_bad += gap > 1e-9

    for w in words:
        cmp(tilde_limit(eta, w, method="iterate").value, counter.eta_tilde(w))
        cmp(hat_limit(eta, w, method="iterate").value, 0)
    for v in vecs:
        cmp(hat_limit(q, v, method="iterate").value, hat_limit(q, v, method="closed").value)
        cmp(tilde_limit(add, v, method="iterate").value, tilde_limit(add, v, method="closed").value)
    ok = exact_bad == 0 and agree_bad == 0
    return (ok, f"{exact_bad} exact-law failures; iterative vs closed max gap {float(worst):.3g}",
            {"exact_failures": exact_bad, "agreement_failures": agree_bad,
             "max_gap": float(worst)})


def _certificate_cases():
    yield "eta on words <= 8", PatternCount(), list(WORDS.words(8)), ETA_BOUND
    ints = [vec(n) for n in range(-100, 101)]
    # noise of size eps has defect at most 7 eps; the quadratic part is exact
    yield "n^2+n+noise(0.5)", QuadraticForm([[1]], [1]) + BoundedNoise(0.5, 1), ints, 7 * 0.5
    yield "n^2+noise(0.5)", square_fn() + BoundedNoise(0.5, 2), ints, 7 * 0.5


@criterion(8, "Cauchy certificate on hat traces", 30.0)
def _cauchy(rng):
    rows, ok = {}, True
    for name, f, corpus, c in _certificate_cases():
        checked = viol = wviol = 0
        worst = 0.0
        first = None
        for x in corpus:
            trace = hat_limit(f, x, method="iterate").trace
            cert = second_difference_certificate(trace, c)
            checked += cert.checked
            viol += len(cert.violations)
            worst = max(worst, cert.worst_ratio)
            if cert.violations and first is None:
                k, m, lhs, bound = cert.violations[0]
                first = f"x={x} k={k} m={m} lhs={float(lhs):.3g} bound={float(bound):.3g}"
            wviol += len(weighted_certificate(trace, c).violations)
        ok &= viol == 0
        rows[name] = {"checked": checked, "violations": viol, "worst_ratio": worst,
                      "first_violation": first, "weighted_violations": wviol}
    detail = "; ".join(f"{n}: {r['violations']}/{r['checked']} over "
                       f"(weighted form: {r['weighted_violations']} over)" for n, r in rows.items())
    return ok, detail, rows


@criterion(9, "decomposition reconstruction", 30.0)
def _decomposition(rng):
    f = QuadraticForm([[1]], [1]) + BoundedNoise(0.5, rng.randrange(1 << 30))
    corpus = [vec(n) for n in range(-100, 101)]
    out, ok = {}, True
    for method in ("auto", "iterate"):
        dec = decompose(f, corpus, method=method)
        qerr = max(abs(p.quartic - p.point.coords[0] ** 2) for p in dec.points)
        lerr = max(abs(p.linear - p.point.coords[0]) for p in dec.points)
        good = qerr <= 1e-6 and lerr <= 1e-6 and dec.remainder_sup <= 0.5 + 1e-6
        ok &= good
        out[method] = {"quartic_err": float(qerr), "linear_err": float(lerr),
                       "remainder_sup": float(dec.remainder_sup)}
    it = out["iterate"]
    return (ok, f"iterative: |q - n^2| <= {it['quartic_err']:.2g}, |l - n| <= {it['linear_err']:.2g}, "
                f"remainder sup {it['remainder_sup']:.4f}", out)


@criterion(10, "periodic collapse", 10.0)
def _periodic(rng):
    bad, count = 0, 0
    for m in range(2, 13):
        G = CyclicGroup(m)
        for _ in range(100):
            f = LookupTable({g: Fraction(rng.randint(-1000, 1000), rng.randint(1, 50))
                             for g in G.elements()})
            for g in G.elements():
                count += 1
                bad += hat_limit(f, g).value != 0 or tilde_limit(f, g).value != 0
    return bad == 0, f"{count} points over 1100 tables, {bad} nonzero limits", {"nonzero": bad}


@criterion(11, "abelian fit", 10.0)
def _abelian_fit(rng):
    Z3 = FreeAbelian(3, random_bound=1000)
    bad = 0
    for _ in range(100):
        M = [[0] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(i, 3):
                M[i][j] = M[j][i] = rng.randint(-9, 9)
        a = [rng.randint(-9, 9) for _ in range(3)]
        f = QuadraticForm(M, a)
        model = fit_quadratic_additive(f, 3)
        exact = (model.form == tuple(tuple(Fraction(e) for e in row) for row in M)
                 and model.additive == tuple(Fraction(e) for e in a))
        residual = model_residual(model, f, [Z3.random(rng) for _ in range(100)])
        bad += not exact or residual != 0
    return bad == 0, f"100 models on Z^3, {bad} not recovered exactly", {"failures": bad}


@criterion(12, "Jung bound", 30.0)
def _jung(rng):
    corpus = [vec(n) for n in range(-100, 101)]
    bad, worst = 0, 0.0
    for trial in range(50):
        q = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
        delta = rng.uniform(0.01, 1.0)
        f = QuadraticForm([[q]]) + BoundedNoise(delta, rng.randrange(1 << 30), even=True)
        res = jung_recover(f, corpus, method="iterate")
        d = measured_defect(f, corpus)
        ratio = float(res.sup_dev) / (3 * float(d)) if d else float("inf")
        worst = max(worst, ratio)
        bad += not res.holds or abs(res.Q.form[0][0] - q) > 1e-6
    return bad == 0, f"50 trials, worst sup_dev / 3d = {worst:.3f}, {bad} failures", {
        "failures": bad, "worst_ratio": worst}


@criterion(13, "zero adjunction", 5.0)
def _zero(rng):
    inner = [ZeroAdjoined(w) for w in WORDS.words(4)]
    keys = [ZERO] + inner
    bad = 0
    for _ in range(1000):
        f = LookupTable({k: Fraction(rng.randint(-100, 100), rng.randint(1, 9)) for k in keys})
        x = rng.choice(keys)
        bad += zero_defect(f, x) != f(x)
    return bad == 0, f"1000 tables, {bad} with defect(x, 0, 0) != f(x)", {"failures": bad}


@criterion(14, "wreath identities", 30.0)
def _wreath(rng):
    W = WreathCarrier(FreeAbelian(1, random_bound=1000))
    amp_bad = 0
    for _ in range(1000):
        x, y, z = (W.random(rng, slot_one_only=True) for _ in range(3))
        x1, y1, z1 = amplification_triple(x, y, z)
        amp_bad += x1 * y1 * z1 != amplified_element(x) * amplified_element(y) * amplified_element(z)
    f2 = Pullback(coordinate_sum, square_fn())
    f1 = Pullback(coordinate_sum, AdditiveCharacter([1]))
    sig_bad = 0
    for _ in range(1000):
        u = W.random(rng, slot_one_only=True)
        w = wreath_conjugate(u, BC) * wreath_conjugate(u, C) * u
        sig_bad += f2(w) != 9 * f2(u)
        sig_bad += f1(w) != 3 * f1(u)
    # Z x C_2 with f = n^2 o project_0 + noise: defect <= 7 eps
    eps = 0.25
    G = ProductCarrier(FreeAbelian(1, random_bound=1000), CyclicGroup(2))
    f = Pullback(projection(0), square_fn()) + BoundedNoise(eps, rng.randrange(1 << 30))
    d = 7 * eps
    c = ProductElement((vec(0), CyclicGroup(2).parse("1")))
    ord_bad = sum(not order_two_deviations(f, G.random(rng), c).within(d, 1e-12)
                  for _ in range(1000))
    ok = amp_bad == 0 and sig_bad == 0 and ord_bad == 0
    return (ok, f"amplification {amp_bad}/1000 bad, sigma identities {sig_bad}/2000 bad, "
                f"order-two bounds {ord_bad}/1000 bad",
            {"amplification": amp_bad, "sigma": sig_bad, "order_two": ord_bad})


@criterion(15, "corrected quadratic exchange identity", 5.0)
def _exchange(rng):
    bad = 0
    for _ in range(1000):
        k = rng.randint(1, 3)
        Z = FreeAbelian(k, random_bound=100)
        M = [[0] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                M[i][j] = M[j][i] = rng.randint(-9, 9)
        res = quadratic_exchange_residuals(QuadraticForm(M), Z.random(rng), Z.random(rng),
                                           Z.random(rng))
        bad += res.corrected != 0
    printed = quadratic_exchange_residuals(square_fn(), vec(0), vec(0), vec(1)).as_printed
    ok = bad == 0 and printed == -1
    return (ok, f"corrected residual nonzero on {bad}/1000 triples; as-printed at (0,0,1) "
                f"with n^2 = {printed} (known discrepancy)",
            {"corrected_failures": bad, "as_printed_counter_triple": int(printed)})

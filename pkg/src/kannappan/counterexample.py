"""The free-semigroup instability witness.

eta counts occurrences of a^2 b^2.  Its tilde limit is degree-1 homogeneous
along powers but not a Kannappan solution: the defect at (a, a, b^2) is 1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import FreeSemigroup, Word, power
from .limits import hat_limit
from .patterns import (
    DEFAULT_PATTERN,
    PatternCounter,
    PowerSummary,
    count_occurrences,
    crossing_count,
    eta,
    eta_power_count,
    eta_tilde,
)
from .realfn import Closure, PatternCount, kannappan_defect

__all__ = [
    "PatternCounter", "PowerSummary", "count_occurrences", "crossing_count", "eta",
    "eta_power_count", "eta_tilde", "eta_fn", "eta_tilde_fn", "instability_witness",
    "WitnessReport",
]

WITNESS_TRIPLE = ("a", "a", "bb")
# words whose values are listed before the witness computation
LISTED_WORDS = ("aabb", "a", "b", "bb", "aa", "abb")


def eta_fn(pattern: str = DEFAULT_PATTERN) -> PatternCount:
    return PatternCount(pattern)


def eta_tilde_fn(pattern: str = DEFAULT_PATTERN) -> Closure:
    counter = PatternCounter(pattern)
    return Closure(lambda w: counter.eta_tilde(w), f"eta_tilde({pattern})", exact=True,
                   parts=lambda w: (0, counter.eta_tilde(w)))


@dataclass
class WitnessReport:
    triple: tuple
    terms: dict            # signed terms of the defect of eta~
    value: int             # defect of eta~ at the triple
    eta_value: int         # same with eta
    listed_eta: dict
    listed_eta_tilde: dict
    homogeneity_failures: list = field(default_factory=list)
    homogeneity_checked: int = 0
    hat_nonzero: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.value == 1 and self.eta_value == 1 and not self.homogeneity_failures
                and not self.hat_nonzero)

    def rows(self) -> list[tuple[str, str, str]]:
        """(quantity, value, provenance) table rows."""
        rows = [(f"eta({w})", str(v), "direct count") for w, v in self.listed_eta.items()]
        rows += [(f"eta~({w})", str(v), "eta(x) + crossing(x), doubling recurrence")
                 for w, v in self.listed_eta_tilde.items()]
        rows += [(k, str(v), "term of the defect at (a, a, bb)") for k, v in self.terms.items()]
        rows.append(("eta defect at (a, a, bb)", str(self.eta_value), "direct count"))
        rows.append((f"eta~(x^m) = m eta~(x) checks", str(self.homogeneity_checked),
                     f"{len(self.homogeneity_failures)} failures"))
        rows.append(("eta~ defect at (a, a, bb)", str(self.value), "expected 1"))
        return rows

    def to_json(self) -> dict:
        return {
            "triple": list(self.triple),
            "terms": self.terms,
            "value": self.value,
            "eta_value": self.eta_value,
            "listed_eta": self.listed_eta,
            "listed_eta_tilde": self.listed_eta_tilde,
            "homogeneity_checked": self.homogeneity_checked,
            "homogeneity_failures": [list(map(str, f)) for f in self.homogeneity_failures],
            "hat_nonzero": [str(w) for w in self.hat_nonzero],
            "ok": self.ok,
        }


def instability_witness(corpus_max_length: int = 6, max_power: int = 16) -> WitnessReport:
    """Compute the defect of eta~ at (a, a, b^2) and the supporting checks."""
    F = FreeSemigroup("ab")
    x, y, z = (F.word(w) for w in WITNESS_TRIPLE)
    et = eta_tilde_fn()
    terms = {
        "+eta~(xyz)": et(x * y * z),
        "+eta~(x)": et(x),
        "+eta~(y)": et(y),
        "+eta~(z)": et(z),
        "-eta~(xy)": -et(x * y),
        "-eta~(xz)": -et(x * z),
        "-eta~(yz)": -et(y * z),
    }
    value = sum(terms.values())
    assert value == kannappan_defect(et, x, y, z)
    report = WitnessReport(
        triple=WITNESS_TRIPLE,
        terms=terms,
        value=int(value),
        eta_value=int(kannappan_defect(eta_fn(), x, y, z)),
        listed_eta={w: eta(w) for w in LISTED_WORDS},
        listed_eta_tilde={w: eta_tilde(w) for w in LISTED_WORDS},
    )
    # eta~ lies in PK_2: homogeneous of degree 1 along powers
    counter = PatternCounter()
    for w in F.words(corpus_max_length):
        base = et(w)
        for m in range(1, max_power + 1):
            report.homogeneity_checked += 1
            if counter.eta_tilde(power(w, m)) != m * base:
                report.homogeneity_failures.append((w, m))
        if hat_limit(eta_fn(), w).value != 0:
            report.hat_nonzero.append(w)
    return report


def random_words(rng: random.Random, count: int, max_length: int, alphabet: str = "ab") -> list[Word]:
    F = FreeSemigroup(alphabet)
    return [F.random(rng, max_length) for _ in range(count)]

"""Real-valued functions on semigroups and Kannappan defect operators.

The defect of f at (x, y, z) is

    f(xyz) + f(x) + f(y) + f(z) - f(xy) - f(xz) - f(yz).

Function bodies evaluate exactly (``int``/``Fraction``) when they can and fall
back to 64-bit floats otherwise (seeded noise).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from pathlib import Path
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .algebra import (
    AbelianVector,
    Carrier,
    DomainError,
    ProductElement,
    WreathElement,
    ZERO,
    Word,
    power,
    product,
)
from .patterns import DEFAULT_PATTERN, PatternCounter

DEFAULT_TOL = 1e-9


def as_fraction(value) -> Fraction:
    """Exact rational view of an int, Fraction or float."""
    return value if isinstance(value, Fraction) else Fraction(value)


def to_fraction(value) -> Fraction:
    if isinstance(value, str):
        return Fraction(value)
    return as_fraction(value)


def is_exact(value) -> bool:
    return isinstance(value, Rational)


def fmt_number(value) -> str:
    if isinstance(value, Fraction) and value.denominator == 1:
        return str(value.numerator)
    return str(value)


class RealFn:
    """Base class: a real-valued function on a semigroup."""

    exact = True
    kind = "abstract"

    def __call__(self, x):
        raise NotImplementedError

    def closed_parts(self, x):
        """(quartic, linear) homogeneous parts at x in closed form, or None."""
        return None

    def dyadic_orbit(self, x, n: int):
        """[f(x^(2^k)) for k = 0..n] without materializing powers, or None."""
        return None

    def describe(self) -> dict:
        return {"kind": self.kind}

    def __add__(self, other: "RealFn") -> "ScaledSum":
        return ScaledSum(((Fraction(1), self), (Fraction(1), other)))

    def __sub__(self, other: "RealFn") -> "ScaledSum":
        return ScaledSum(((Fraction(1), self), (Fraction(-1), other)))

    def __rmul__(self, weight) -> "ScaledSum":
        return ScaledSum(((to_fraction(weight), self),))

    def __neg__(self) -> "ScaledSum":
        return ScaledSum(((Fraction(-1), self),))


def evaluate(f: RealFn, x):
    return f(x)


def _vector(x, dim: int) -> tuple[int, ...]:
    if not isinstance(x, AbelianVector):
        raise DomainError(f"expected an integer vector, got {x!r}")
    if x.dim != dim:
        raise DomainError(f"expected dimension {dim}, got {x}")
    return x.coords


class QuadraticForm(RealFn):
    """f(v) = v^T M v + a.v on Z^k, M symmetric rational."""

    kind = "quadratic"

    def __init__(self, M: Sequence[Sequence], a: Sequence | None = None):
        self.M = tuple(tuple(to_fraction(e) for e in row) for row in M)
        k = len(self.M)
        if k == 0 or any(len(row) != k for row in self.M):
            raise DomainError("M must be a nonempty square array")
        if any(self.M[i][j] != self.M[j][i] for i in range(k) for j in range(i)):
            raise DomainError("M must be symmetric")
        self.a = tuple(to_fraction(e) for e in (a if a is not None else (0,) * k))
        if len(self.a) != k:
            raise DomainError("additive vector has the wrong length")
        self.dim = k

    def quadratic(self, v: tuple[int, ...]) -> Fraction:
        M = self.M
        return sum((M[i][j] * v[i] * v[j] for i in range(self.dim) for j in range(self.dim)),
                   Fraction(0))

    def linear(self, v: tuple[int, ...]) -> Fraction:
        return sum((ai * vi for ai, vi in zip(self.a, v)), Fraction(0))

    def __call__(self, x):
        v = _vector(x, self.dim)
        return self.quadratic(v) + self.linear(v)

    def closed_parts(self, x):
        v = _vector(x, self.dim)
        return self.quadratic(v), self.linear(v)

    def describe(self) -> dict:
        return {"kind": self.kind, "M": [[fmt_number(e) for e in row] for row in self.M],
                "a": [fmt_number(e) for e in self.a]}


class AdditiveCharacter(RealFn):
    """f(v) = a.v on Z^k."""

    kind = "additive"

    def __init__(self, a: Sequence):
        self.a = tuple(to_fraction(e) for e in a)
        if not self.a:
            raise DomainError("additive character needs a nonempty vector")
        self.dim = len(self.a)

    def __call__(self, x):
        v = _vector(x, self.dim)
        return sum((ai * vi for ai, vi in zip(self.a, v)), Fraction(0))

    def closed_parts(self, x):
        return Fraction(0), self(x)

    def describe(self) -> dict:
        return {"kind": self.kind, "a": [fmt_number(e) for e in self.a]}


class PatternCount(RealFn):
    """eta: number of occurrences of a pattern word."""

    kind = "pattern"

    def __init__(self, pattern: str = DEFAULT_PATTERN, alphabet: str = "ab"):
        from .algebra import Alphabet

        self.counter = PatternCounter(pattern, Alphabet.of(alphabet))

    @property
    def pattern(self) -> str:
        return self.counter.pattern

    def _word(self, x) -> Word:
        if not isinstance(x, Word):
            raise DomainError(f"pattern counts live on words, got {x!r}")
        return x

    def __call__(self, x):
        return self.counter.eta(self._word(x))

    def closed_parts(self, x):
        return 0, self.counter.eta_tilde(self._word(x))

    def dyadic_orbit(self, x, n: int):
        return [s.count for s in self.counter.doubling_summaries(self._word(x), n)]

    def describe(self) -> dict:
        return {"kind": self.kind, "pattern": self.pattern}


@dataclass(frozen=True)
class Homomorphism:
    name: str
    fn: Callable = field(compare=False)

    def __call__(self, x):
        return self.fn(x)


def projection(i: int) -> Homomorphism:
    def fn(x):
        if not isinstance(x, ProductElement):
            raise DomainError(f"projection needs a product element, got {x!r}")
        return x.parts[i]

    return Homomorphism(f"project:{i}", fn)


def _coordinate_sum(x):
    if not isinstance(x, WreathElement):
        raise DomainError(f"coordinate sum needs a wreath element, got {x!r}")
    total = 0
    for _, value in x.slots:
        if not isinstance(value, AbelianVector) or value.dim != 1:
            raise DomainError("coordinate sum needs base Z")
        total += value.coords[0]
    return AbelianVector((total,))


# sigma: Z wr C -> Z, forgets the top and adds the slots
coordinate_sum = Homomorphism("sigma", _coordinate_sum)


class Pullback(RealFn):
    """f = inner o hom for a semigroup homomorphism hom."""

    kind = "pullback"

    def __init__(self, hom: Homomorphism, inner: RealFn):
        self.hom = hom
        self.inner = inner
        self.exact = inner.exact

    def __call__(self, x):
        return self.inner(self.hom(x))

    def closed_parts(self, x):
        # hom(x^n) = hom(x)^n, so limits commute with the pullback
        return self.inner.closed_parts(self.hom(x))

    def dyadic_orbit(self, x, n: int):
        return self.inner.dyadic_orbit(self.hom(x), n)

    def describe(self) -> dict:
        return {"kind": self.kind, "hom": self.hom.name, "fn": self.inner.describe()}


class LookupTable(RealFn):
    kind = "table"

    def __init__(self, table: Mapping, name: str = "table"):
        self.table = dict(table)
        self.name = name
        self.exact = all(is_exact(v) for v in self.table.values())

    def __call__(self, x):
        try:
            return self.table[x]
        except KeyError:
            raise DomainError(f"{x} is outside the lookup table {self.name!r}") from None

    def describe(self) -> dict:
        items = sorted((str(k), v) for k, v in self.table.items())
        return {"kind": self.kind, "name": self.name,
                "entries": {k: fmt_number(v) if is_exact(v) else v for k, v in items}}


class ScaledSum(RealFn):
    kind = "sum"

    def __init__(self, terms: Iterable[tuple]):
        flat = []
        for weight, fn in terms:
            weight = to_fraction(weight)
            if isinstance(fn, ScaledSum):
                flat.extend((weight * w, g) for w, g in fn.terms)
            else:
                flat.append((weight, fn))
        if not flat:
            raise DomainError("empty sum")
        self.terms = tuple(flat)
        self.exact = all(fn.exact for _, fn in self.terms)

    def _combine(self, values):
        if self.exact:
            return sum((w * v for w, v in values), Fraction(0))
        return float(sum(float(w) * float(v) for w, v in values))

    def __call__(self, x):
        return self._combine((w, fn(x)) for w, fn in self.terms)

    def closed_parts(self, x):
        quartic, linear = Fraction(0), Fraction(0)
        for w, fn in self.terms:
            parts = fn.closed_parts(x)
            if parts is None:
                return None
            quartic += w * as_fraction(parts[0])
            linear += w * as_fraction(parts[1])
        return quartic, linear

    def dyadic_orbit(self, x, n: int):
        orbits = []
        for _, fn in self.terms:
            orbit = fn.dyadic_orbit(x, n)
            if orbit is None:
                return None
            orbits.append(orbit)
        return [self._combine(zip((w for w, _ in self.terms), column))
                for column in zip(*orbits)]

    def describe(self) -> dict:
        return {"kind": self.kind,
                "terms": [{"weight": fmt_number(w), "fn": fn.describe()} for w, fn in self.terms]}


def _even_key(x) -> str:
    try:
        return min(str(x), str(x.inverse()))
    except DomainError:
        return str(x)


class BoundedNoise(RealFn):
    """Deterministic pseudo-random values in [-eps, eps].

    The value at x is eps*(2u - 1) where u is the BLAKE2b-64 digest of
    "<seed>:<literal of x>" divided by 2^64.  With ``even=True`` the key is the
    smaller of the literals of x and x^-1, so noise(x) = noise(x^-1).
    """

    kind = "noise"
    exact = False

    def __init__(self, eps: float, seed: int = 0, even: bool = False):
        if eps < 0:
            raise DomainError("noise amplitude must be >= 0")
        self.eps = float(eps)
        self.seed = int(seed)
        self.even = even

    def __call__(self, x):
        key = _even_key(x) if self.even else str(x)
        digest = hashlib.blake2b(f"{self.seed}:{key}".encode(), digest_size=8).digest()
        u = int.from_bytes(digest, "big") / 2.0**64
        return self.eps * (2.0 * u - 1.0)

    def closed_parts(self, x):
        return 0, 0

    def describe(self) -> dict:
        return {"kind": self.kind, "eps": self.eps, "seed": self.seed, "even": self.even}


class Closure(RealFn):
    """A RealFn given by a Python callable."""

    kind = "closure"

    def __init__(self, fn: Callable, name: str = "closure", exact: bool = True,
                 parts: Callable | None = None):
        self.fn = fn
        self.name = name
        self.exact = exact
        self._parts = parts

    def __call__(self, x):
        return self.fn(x)

    def closed_parts(self, x):
        return None if self._parts is None else self._parts(x)

    def describe(self) -> dict:
        return {"kind": self.kind, "name": self.name}


def quadratic(M, a=None) -> QuadraticForm:
    return QuadraticForm(M, a)


def square_fn(dim: int = 1) -> QuadraticForm:
    """f(v) = |v|^2 on Z^dim."""
    return QuadraticForm([[int(i == j) for j in range(dim)] for i in range(dim)])


# ---------------------------------------------------------------------------
# configuration


def from_config(cfg: Mapping, carrier: Carrier | None = None) -> RealFn:
    """Build a RealFn from a declarative mapping ``{"kind": ..., params}``."""
    kind = cfg.get("kind")
    if kind == "quadratic":
        return QuadraticForm(cfg["M"], cfg.get("a"))
    if kind == "additive":
        return AdditiveCharacter(cfg["a"])
    if kind in ("pattern", "eta"):
        return PatternCount(cfg.get("pattern", DEFAULT_PATTERN), cfg.get("alphabet", "ab"))
    if kind == "noise":
        return BoundedNoise(cfg["eps"], cfg.get("seed", 0), cfg.get("even", False))
    if kind == "table":
        if carrier is None:
            raise DomainError("a lookup table needs a carrier to parse its keys")
        entries = {carrier.parse(k): _parse_value(v) for k, v in cfg["entries"].items()}
        return LookupTable(entries, cfg.get("name", "table"))
    if kind == "sum":
        return ScaledSum((t.get("weight", 1), from_config(t["fn"], carrier)) for t in cfg["terms"])
    if kind == "pullback":
        hom = cfg["hom"]
        if hom == "sigma":
            h = coordinate_sum
        elif hom.startswith("project:"):
            h = projection(int(hom.split(":")[1]))
        else:
            raise DomainError(f"unknown homomorphism {hom!r}")
        return Pullback(h, from_config(cfg["fn"]))
    raise DomainError(f"unknown function kind {kind!r}")


def _parse_value(v):
    if isinstance(v, float):
        return v
    return to_fraction(v)


def _shorthand_term(text: str) -> dict:
    weight = "1"
    if "*" in text:
        weight, text = text.split("*", 1)
    name, _, args = text.partition(":")
    vals = [a for a in args.split(",") if a] if args else []
    if name == "quadratic":
        n = len(vals)
        k = next((k for k in range(1, 64) if k * k + k == n), None)
        if k is None:
            raise DomainError(f"quadratic:<k*k entries of M>,<k entries of a>; got {n} numbers")
        M = [vals[i * k:(i + 1) * k] for i in range(k)]
        cfg = {"kind": "quadratic", "M": M, "a": vals[k * k:]}
    elif name == "additive":
        cfg = {"kind": "additive", "a": vals}
    elif name == "eta":
        cfg = {"kind": "pattern", "pattern": DEFAULT_PATTERN}
    elif name == "pattern":
        cfg = {"kind": "pattern", "pattern": vals[0] if vals else DEFAULT_PATTERN}
    elif name in ("noise", "evennoise"):
        cfg = {"kind": "noise", "eps": float(vals[0]), "seed": int(vals[1]) if len(vals) > 1 else 0,
               "even": name == "evennoise"}
    else:
        raise DomainError(f"unknown function shorthand {name!r}")
    return {"weight": weight, "fn": cfg}


def parse_fn(text: str, carrier: Carrier | None = None) -> RealFn:
    """Parse ``--fn``: a JSON config file (``@path`` or a path ending in
    .json), inline JSON, or shorthand terms joined by ``+`` such as
    ``quadratic:1,0``, ``additive:2,-1``, ``eta``, ``pattern:abab``,
    ``noise:0.5,7``, ``evennoise:0.1,3``, optionally weighted as ``2*eta``.
    """
    text = text.strip()
    if text.startswith("@") or text.endswith(".json"):
        cfg = json.loads(Path(text.lstrip("@")).read_text())
        return from_config(cfg, carrier)
    if text.startswith("{"):
        return from_config(json.loads(text), carrier)
    terms = [_shorthand_term(t.strip()) for t in text.split("+") if t.strip()]
    if not terms:
        raise DomainError("empty function description")
    if len(terms) == 1 and to_fraction(terms[0]["weight"]) == 1:
        return from_config(terms[0]["fn"], carrier)
    return from_config({"kind": "sum", "terms": terms}, carrier)


# ---------------------------------------------------------------------------
# defects


def _total(values: Iterable, exact: bool):
    values = list(values)
    if exact and all(is_exact(v) for v in values):
        return sum((as_fraction(v) for v in values), Fraction(0))
    return float(sum(float(v) for v in values))


def kannappan_defect(f: RealFn, x, y, z):
    xy = x * y
    return _total([f(xy * z), f(x), f(y), f(z), -f(xy), -f(x * z), -f(y * z)], f.exact)


@dataclass
class DefectReport:
    value: object
    triple: tuple
    sup_estimate: object
    samples: int
    arithmetic: str
    bound: object = None
    label: str = "empirical"

    def to_json(self) -> dict:
        return {
            "value": _json_number(self.value),
            "sup_estimate": _json_number(self.sup_estimate),
            "bound": _json_number(self.bound) if self.bound is not None else None,
            "label": self.label,
            "witness": [str(t) for t in self.triple],
            "samples": self.samples,
            "arithmetic": self.arithmetic,
        }


def _json_number(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    return v


def sup_defect(f: RealFn, corpus: Iterable[tuple]) -> DefectReport:
    """Max |defect| over a corpus of triples, with the witnessing triple.

    Ties are broken by the lexicographically smallest literal triple.
    """
    best = None
    samples = 0
    for triple in corpus:
        d = kannappan_defect(f, *triple)
        samples += 1
        key = (-abs(d), tuple(str(t) for t in triple))
        if best is None or key < best[0]:
            best = (key, d, tuple(triple))
    if best is None:
        raise DomainError("empty corpus")
    _, value, triple = best
    return DefectReport(value, triple, abs(value), samples,
                        "exact" if f.exact else "float")


class BoundedValue(NamedTuple):
    value: object
    bound: object

    def holds(self, tol: float = 0.0) -> bool:
        return abs(self.value) <= self.bound + tol


def nfold_bound(n: int, c) -> object:
    """(n-2)(n-1)/2 * c."""
    return Fraction((n - 2) * (n - 1), 2) * as_fraction(c) if is_exact(c) else (n - 2) * (n - 1) / 2 * c


def nfold_defect(f: RealFn, xs: Sequence, c=None) -> BoundedValue:
    """f(x1...xn) + (n-2) sum f(xi) - sum_{i<j} f(xi xj) with its bound.

    Without ``c`` the constant is estimated from all triples drawn from ``xs``.
    """
    n = len(xs)
    if n < 3:
        raise DomainError("nfold_defect needs n >= 3")
    values = [f(product(xs))]
    values += [(n - 2) * f(x) for x in xs]
    values += [-f(xs[i] * xs[j]) for i, j in combinations(range(n), 2)]
    value = _total(values, f.exact)
    if c is None:
        c = sup_defect(f, ((a, b, d) for a in xs for b in xs for d in xs)).sup_estimate
    return BoundedValue(value, nfold_bound(n, c))


def power_defect(f: RealFn, x, n: int, c) -> BoundedValue:
    """f(x^n) + (n-2) n f(x) - (n-1) n/2 f(x^2) with bound (n-2)(n-1)/2 c."""
    if n < 3:
        raise DomainError("power_defect needs n >= 3")
    fx, fx2, fxn = f(x), f(x * x), f(power(x, n))
    if f.exact:
        value = as_fraction(fxn) + (n - 2) * n * as_fraction(fx) - Fraction((n - 1) * n, 2) * as_fraction(fx2)
    else:
        value = float(fxn) + (n - 2) * n * float(fx) - (n - 1) * n / 2 * float(fx2)
    return BoundedValue(value, nfold_bound(n, c))


def square_compose_defect(f: RealFn, x, y, z, c) -> BoundedValue:
    """Defect of phi(x) = f(x^2) at (x, y, z), bounded by 21c."""
    phi = Closure(lambda t: f(t * t), name="square-compose", exact=f.exact)
    return BoundedValue(kannappan_defect(phi, x, y, z), 21 * as_fraction(c) if is_exact(c) else 21 * c)


def _is_group_element(x) -> bool:
    try:
        x.inverse()
    except DomainError:
        return False
    return True


class ExchangeResiduals(NamedTuple):
    as_printed: object
    corrected: object


def quadratic_exchange_residuals(f: RealFn, x, y, z) -> ExchangeResiduals:
    """Residuals of two exchange identities for quadratic functions on groups.

    ``as_printed``: f(xyz)+f(xzy) - [f(x)+3f(y)+3f(z)+f(xy)+f(xz)-f(yz)].
    ``corrected``:  f(xyz)+f(xzy)+2f(x)+2f(y)+2f(z)-2f(xy)-2f(xz)-2f(yz).
    Only the corrected identity holds for quadratic forms; e.g. f(n)=n^2 at
    (0, 0, 1) gives as_printed = -1.
    """
    if not all(_is_group_element(t) for t in (x, y, z)):
        raise DomainError("the exchange identity needs a group carrier")
    fxyz, fxzy = f(x * y * z), f(x * z * y)
    fx, fy, fz = f(x), f(y), f(z)
    fxy, fxz, fyz = f(x * y), f(x * z), f(y * z)
    printed = _total([fxyz, fxzy, -fx, -3 * fy, -3 * fz, -fxy, -fxz, fyz], f.exact)
    corrected = _total([fxyz, fxzy, 2 * fx, 2 * fy, 2 * fz, -2 * fxy, -2 * fxz, -2 * fyz], f.exact)
    return ExchangeResiduals(printed, corrected)


class OrderTwoDeviations(NamedTuple):
    left: object   # |f(u) - f(cu)|,  bound 2d
    right: object  # |f(u) - f(uc)|,  bound 2d
    conj: object   # |f(u^c) - f(u)|, bound 8d

    def within(self, d, tol: float = 0.0) -> bool:
        return (self.left <= 2 * d + tol and self.right <= 2 * d + tol
                and self.conj <= 8 * d + tol)


def order_two_deviations(f: RealFn, u, c) -> OrderTwoDeviations:
    """Deviations controlled by an element c of order two."""
    if not (c * c).is_identity() or c.is_identity():
        raise DomainError(f"{c} is not of order two")
    fu = f(u)
    conj = c.inverse() * u * c
    return OrderTwoDeviations(abs(fu - f(c * u)), abs(fu - f(u * c)), abs(f(conj) - fu))


def zero_defect(f: RealFn, x):
    """Defect at (x, 0, 0); equals f(x) on a semigroup with zero."""
    return kannappan_defect(f, x, ZERO, ZERO)

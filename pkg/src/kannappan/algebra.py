"""Carriers and elements: free (abelian) semigroups, cyclic groups, the Klein
four-group, zero adjunction, direct products and wreath products S wr C.

Elements are immutable values with structural equality and a ``*`` law.
Carriers are lightweight descriptors used for parsing, membership and random
sampling.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True)
class Alphabet:
    generators: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.generators:
            raise DomainError("alphabet must be nonempty")
        if len(set(self.generators)) != len(self.generators):
            raise DomainError(f"alphabet symbols must be distinct: {self.generators}")
        if any(len(g) != 1 for g in self.generators):
            raise DomainError("alphabet symbols must be single characters")

    @classmethod
    def of(cls, letters: str) -> "Alphabet":
        return cls(tuple(letters))

    def __contains__(self, letter: str) -> bool:
        return letter in self.generators

    def __str__(self) -> str:
        return "".join(self.generators)


@dataclass(frozen=True)
class Word:
    letters: str
    unit_allowed: bool = False

    def __post_init__(self) -> None:
        if not self.letters and not self.unit_allowed:
            raise DomainError("the free semigroup has no empty word")

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word) or other.unit_allowed != self.unit_allowed:
            raise DomainError(f"cannot multiply {self!r} by {other!r}")
        return Word(self.letters + other.letters, self.unit_allowed)

    def __len__(self) -> int:
        return len(self.letters)

    def identity(self) -> "Word":
        if not self.unit_allowed:
            raise DomainError("the free semigroup has no unit")
        return Word("", True)

    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        raise DomainError("words are not invertible")

    def __str__(self) -> str:
        return self.letters or "1"


@dataclass(frozen=True)
class AbelianVector:
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coords:
            raise DomainError("AbelianVector needs at least one coordinate")

    def __mul__(self, other: "AbelianVector") -> "AbelianVector":
        if not isinstance(other, AbelianVector) or len(other.coords) != len(self.coords):
            raise DomainError(f"cannot multiply {self!r} by {other!r}")
        return AbelianVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "AbelianVector":
        return self.inverse()

    @property
    def dim(self) -> int:
        return len(self.coords)

    def identity(self) -> "AbelianVector":
        return AbelianVector((0,) * len(self.coords))

    def is_identity(self) -> bool:
        return not any(self.coords)

    def inverse(self) -> "AbelianVector":
        return AbelianVector(tuple(-a for a in self.coords))

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.coords)


def vec(*coords: int) -> AbelianVector:
    return AbelianVector(tuple(int(c) for c in coords))


@dataclass(frozen=True)
class CyclicElement:
    residue: int
    modulus: int

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise DomainError("modulus must be >= 1")
        if not 0 <= self.residue < self.modulus:
            object.__setattr__(self, "residue", self.residue % self.modulus)

    def __mul__(self, other: "CyclicElement") -> "CyclicElement":
        if not isinstance(other, CyclicElement) or other.modulus != self.modulus:
            raise DomainError(f"cannot multiply {self!r} by {other!r}")
        return CyclicElement((self.residue + other.residue) % self.modulus, self.modulus)

    def identity(self) -> "CyclicElement":
        return CyclicElement(0, self.modulus)

    def is_identity(self) -> bool:
        return self.residue == 0

    def inverse(self) -> "CyclicElement":
        return CyclicElement(-self.residue % self.modulus, self.modulus)

    def __str__(self) -> str:
        return str(self.residue)


@dataclass(frozen=True, order=True)
class KleinFourElement:
    """b^beta c^gamma in C = <b, c | b^2 = c^2 = 1, bc = cb>."""

    beta: int = 0
    gamma: int = 0

    def __post_init__(self) -> None:
        if self.beta not in (0, 1) or self.gamma not in (0, 1):
            raise DomainError("Klein four-group bits must be 0 or 1")

    def __mul__(self, other: "KleinFourElement") -> "KleinFourElement":
        if not isinstance(other, KleinFourElement):
            raise DomainError(f"cannot multiply {self!r} by {other!r}")
        return KleinFourElement(self.beta ^ other.beta, self.gamma ^ other.gamma)

    def identity(self) -> "KleinFourElement":
        return ONE

    def is_identity(self) -> bool:
        return not (self.beta or self.gamma)

    def inverse(self) -> "KleinFourElement":
        return self

    def __str__(self) -> str:
        return ("b" if self.beta else "") + ("c" if self.gamma else "") or "1"


ONE = KleinFourElement(0, 0)
B = KleinFourElement(1, 0)
C = KleinFourElement(0, 1)
BC = KleinFourElement(1, 1)
KLEIN = (ONE, B, C, BC)


@dataclass(frozen=True)
class ZeroAdjoined:
    """An element of S_0 = S with an absorbing zero adjoined."""

    inner: object = None
    is_zero: bool = False

    def __post_init__(self) -> None:
        if self.is_zero != (self.inner is None):
            raise DomainError("zero-adjoined element: exactly one of inner / is_zero")

    def __mul__(self, other: "ZeroAdjoined") -> "ZeroAdjoined":
        if not isinstance(other, ZeroAdjoined):
            raise DomainError(f"cannot multiply {self!r} by {other!r}")
        if self.is_zero or other.is_zero:
            return ZERO
        return ZeroAdjoined(self.inner * other.inner)

    def identity(self) -> "ZeroAdjoined":
        if self.is_zero:
            raise DomainError("cannot recover the unit from the zero element")
        return ZeroAdjoined(self.inner.identity())

    def is_identity(self) -> bool:
        return not self.is_zero and self.inner.is_identity()

    def inverse(self) -> "ZeroAdjoined":
        raise DomainError("a semigroup with zero is not a group")

    def __str__(self) -> str:
        return "zero" if self.is_zero else str(self.inner)


ZERO = ZeroAdjoined(None, True)


def _wrap(x: object) -> str:
    s = str(x)
    return f"({s})" if any(ch in s for ch in "|;&=") else s


@dataclass(frozen=True)
class ProductElement:
    parts: tuple

    def __mul__(self, other: "ProductElement") -> "ProductElement":
        if not isinstance(other, ProductElement) or len(other.parts) != len(self.parts):
            raise DomainError(f"cannot multiply {self!r} by {other!r}")
        return ProductElement(tuple(a * b for a, b in zip(self.parts, other.parts)))

    def identity(self) -> "ProductElement":
        return ProductElement(tuple(p.identity() for p in self.parts))

    def is_identity(self) -> bool:
        return all(p.is_identity() for p in self.parts)

    def inverse(self) -> "ProductElement":
        return ProductElement(tuple(p.inverse() for p in self.parts))

    def __str__(self) -> str:
        return "&".join(_wrap(p) for p in self.parts)


@dataclass(frozen=True)
class WreathElement:
    """Element ``top * v`` of S wr C, v a function C -> S with finite support.

    ``slots`` is the canonical sorted tuple of (index, value) pairs with
    identity values elided.  Conjugation by t moves slot s to slot s*t, so the
    product is (k, v)(k', w) = (kk', s -> v(s k'^-1) w(s)).
    """

    top: KleinFourElement = ONE
    slots: tuple = ()

    def __post_init__(self) -> None:
        seen = set()
        clean = []
        for idx, value in self.slots:
            if not isinstance(idx, KleinFourElement):
                raise DomainError(f"slot index must be a Klein element, got {idx!r}")
            if idx in seen:
                raise DomainError(f"duplicate slot {idx}")
            seen.add(idx)
            if not value.is_identity():
                clean.append((idx, value))
        object.__setattr__(self, "slots", tuple(sorted(clean, key=lambda p: p[0])))

    @classmethod
    def from_map(cls, top: KleinFourElement, slots: dict) -> "WreathElement":
        return cls(top, tuple(slots.items()))

    def slot_map(self) -> dict:
        return dict(self.slots)

    def shifted(self, t: KleinFourElement) -> dict:
        """Slot map of v^t, i.e. s -> v(s t^-1)."""
        return {idx * t: value for idx, value in self.slots}

    def __mul__(self, other: "WreathElement") -> "WreathElement":
        if not isinstance(other, WreathElement):
            raise DomainError(f"cannot multiply {self!r} by {other!r}")
        left = self.shifted(other.top)
        right = other.slot_map()
        merged = dict(left)
        for idx, value in right.items():
            merged[idx] = merged[idx] * value if idx in merged else value
        return WreathElement.from_map(self.top * other.top, merged)

    def identity(self) -> "WreathElement":
        return WreathElement()

    def is_identity(self) -> bool:
        return self.top.is_identity() and not self.slots

    def inverse(self) -> "WreathElement":
        # (k v)^-1 = k (v^-1)^k since k is an involution
        inv = {idx: value.inverse() for idx, value in self.slots}
        return WreathElement.from_map(self.top, {idx * self.top: v for idx, v in inv.items()})

    def support(self) -> tuple[KleinFourElement, ...]:
        return tuple(idx for idx, _ in self.slots)

    def is_slot_one_supported(self) -> bool:
        return self.top.is_identity() and all(idx == ONE for idx, _ in self.slots)

    def __str__(self) -> str:
        body = ";".join(f"{idx}={_wrap(value)}" for idx, value in self.slots)
        return f"{self.top}|{body}"


# ---------------------------------------------------------------------------
# generic operations


def mul(x, y):
    """Product in the common ambient semigroup of ``x`` and ``y``."""
    if type(x) is not type(y):
        raise DomainError(f"elements from different carriers: {x!r}, {y!r}")
    return x * y


def power(x, n: int):
    """n-th power by repeated squaring; n = 0 needs a unit."""
    if n < 0:
        raise DomainError("negative exponent")
    if n == 0:
        return x.identity()
    result = None
    base = x
    while True:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if not n:
            return result
        base = base * base


def product(elements: Sequence):
    if not elements:
        raise DomainError("empty product")
    it = iter(elements)
    acc = next(it)
    for e in it:
        acc = acc * e
    return acc


def wreath_conjugate(u: WreathElement, t: KleinFourElement) -> WreathElement:
    """Return u^t = t^-1 u t."""
    g = WreathElement(t)
    return g.inverse() * u * g


def amplification_triple(x: WreathElement, y: WreathElement, z: WreathElement):
    """(x1, x1^b, x1^c) with x1 = xyz, for slot-1 supported x, y, z."""
    for e in (x, y, z):
        if not e.is_slot_one_supported():
            raise DomainError(f"{e} is not supported in slot 1")
    x1 = x * y * z
    return x1, wreath_conjugate(x1, B), wreath_conjugate(x1, C)


def amplified_element(u: WreathElement) -> WreathElement:
    """u u^b u^c, the factor appearing in the amplification identity."""
    return u * wreath_conjugate(u, B) * wreath_conjugate(u, C)


def embed(s) -> WreathElement:
    """Inject s into slot 1 of S wr C."""
    return WreathElement(ONE, ((ONE, s),))


def embed_chain(s, depth: int):
    """Image of s in S_{depth+1} = (...(S wr C_1) wr ...) wr C_depth."""
    for _ in range(depth):
        s = embed(s)
    return s


# ---------------------------------------------------------------------------
# carriers


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` at parenthesis depth zero."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise DomainError(f"unbalanced parentheses in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise DomainError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


def _unwrap(text: str) -> str:
    """Strip one pair of parentheses enclosing the whole literal."""
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        return text
    depth = 0
    for i, ch in enumerate(text):
        depth += (ch == "(") - (ch == ")")
        if depth == 0 and i < len(text) - 1:
            return text
    return text[1:-1].strip()


class Carrier:
    """Descriptor of an ambient semigroup."""

    is_group = False
    is_abelian = False
    is_periodic = False
    has_unit = False

    def parse(self, text: str):
        raise NotImplementedError

    def contains(self, x) -> bool:
        raise NotImplementedError

    def identity(self):
        raise DomainError(f"{self} has no unit")

    def random(self, rng: random.Random):
        raise NotImplementedError

    def check(self, x):
        if not self.contains(x):
            raise DomainError(f"{x!r} is not an element of {self}")
        return x

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({str(self)!r})"


class FreeSemigroup(Carrier):
    def __init__(self, alphabet: Alphabet | str = "ab", unit_allowed: bool = False,
                 max_random_length: int = 8):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)
        self.unit_allowed = unit_allowed
        self.has_unit = unit_allowed
        self.max_random_length = max_random_length

    def word(self, letters: str) -> Word:
        bad = [ch for ch in letters if ch not in self.alphabet]
        if bad:
            raise DomainError(f"letters {bad} not in alphabet {self.alphabet}")
        return Word(letters, self.unit_allowed)

    def parse(self, text: str) -> Word:
        text = text.strip()
        if text == "1" and "1" not in self.alphabet:
            return self.identity()
        return self.word(text)

    def contains(self, x) -> bool:
        return (isinstance(x, Word) and x.unit_allowed == self.unit_allowed
                and all(ch in self.alphabet for ch in x.letters))

    def identity(self) -> Word:
        if not self.unit_allowed:
            raise DomainError("the free semigroup has no unit")
        return Word("", True)

    def random(self, rng: random.Random, max_length: int | None = None) -> Word:
        top = self.max_random_length if max_length is None else max_length
        lo = 0 if self.unit_allowed else 1
        n = rng.randint(lo, top)
        return Word("".join(rng.choices(self.alphabet.generators, k=n)), self.unit_allowed)

    def words(self, max_length: int, min_length: int | None = None) -> Iterator[Word]:
        """All words in shortlex order."""
        from itertools import product as cartesian

        lo = (0 if self.unit_allowed else 1) if min_length is None else min_length
        for n in range(lo, max_length + 1):
            for letters in cartesian(self.alphabet.generators, repeat=n):
                yield Word("".join(letters), self.unit_allowed)

    def __str__(self) -> str:
        return f"{'M' if self.unit_allowed else 'F'}:{self.alphabet}"


class FreeAbelian(Carrier):
    is_group = True
    is_abelian = True
    has_unit = True

    def __init__(self, k: int = 1, random_bound: int = 100):
        if k < 1:
            raise DomainError("rank must be >= 1")
        self.k = k
        self.random_bound = random_bound

    def parse(self, text: str) -> AbelianVector:
        try:
            coords = tuple(int(t) for t in _unwrap(text).split(","))
        except ValueError as exc:
            raise DomainError(f"bad integer vector {text!r}") from exc
        if len(coords) != self.k:
            raise DomainError(f"expected {self.k} coordinates, got {text!r}")
        return AbelianVector(coords)

    def contains(self, x) -> bool:
        return isinstance(x, AbelianVector) and x.dim == self.k

    def identity(self) -> AbelianVector:
        return AbelianVector((0,) * self.k)

    def basis(self, i: int) -> AbelianVector:
        return AbelianVector(tuple(int(j == i) for j in range(self.k)))

    def random(self, rng: random.Random, bound: int | None = None) -> AbelianVector:
        r = self.random_bound if bound is None else bound
        return AbelianVector(tuple(rng.randint(-r, r) for _ in range(self.k)))

    def __str__(self) -> str:
        return "Z" if self.k == 1 else f"Z^{self.k}"


class CyclicGroup(Carrier):
    is_group = True
    is_abelian = True
    is_periodic = True
    has_unit = True

    def __init__(self, m: int):
        if m < 1:
            raise DomainError("modulus must be >= 1")
        self.m = m

    def parse(self, text: str) -> CyclicElement:
        try:
            return CyclicElement(int(text) % self.m, self.m)
        except ValueError as exc:
            raise DomainError(f"bad residue {text!r}") from exc

    def contains(self, x) -> bool:
        return isinstance(x, CyclicElement) and x.modulus == self.m

    def identity(self) -> CyclicElement:
        return CyclicElement(0, self.m)

    def elements(self) -> list[CyclicElement]:
        return [CyclicElement(r, self.m) for r in range(self.m)]

    def random(self, rng: random.Random) -> CyclicElement:
        return CyclicElement(rng.randrange(self.m), self.m)

    def __str__(self) -> str:
        return f"Z/{self.m}"


class KleinFour(Carrier):
    is_group = True
    is_abelian = True
    is_periodic = True
    has_unit = True

    _names = {str(k): k for k in KLEIN} | {"cb": BC, "e": ONE}

    def parse(self, text: str) -> KleinFourElement:
        try:
            return self._names[text.strip()]
        except KeyError as exc:
            raise DomainError(f"bad Klein four-group element {text!r}") from exc

    def contains(self, x) -> bool:
        return isinstance(x, KleinFourElement)

    def identity(self) -> KleinFourElement:
        return ONE

    def elements(self) -> tuple[KleinFourElement, ...]:
        return KLEIN

    def random(self, rng: random.Random) -> KleinFourElement:
        return rng.choice(KLEIN)

    def __str__(self) -> str:
        return "K4"


class ZeroAdjoinedCarrier(Carrier):
    def __init__(self, inner: Carrier, zero_probability: float = 0.2):
        self.inner = inner
        self.has_unit = inner.has_unit
        self.is_abelian = inner.is_abelian
        self.zero_probability = zero_probability

    def parse(self, text: str) -> ZeroAdjoined:
        if text.strip() == "zero":
            return ZERO
        return ZeroAdjoined(self.inner.parse(text))

    def contains(self, x) -> bool:
        return isinstance(x, ZeroAdjoined) and (x.is_zero or self.inner.contains(x.inner))

    def identity(self) -> ZeroAdjoined:
        return ZeroAdjoined(self.inner.identity())

    def random(self, rng: random.Random) -> ZeroAdjoined:
        if rng.random() < self.zero_probability:
            return ZERO
        return ZeroAdjoined(self.inner.random(rng))

    def __str__(self) -> str:
        return f"zero({self.inner})"


class ProductCarrier(Carrier):
    def __init__(self, *factors: Carrier):
        if len(factors) < 2:
            raise DomainError("a direct product needs at least two factors")
        self.factors = factors
        self.is_group = all(f.is_group for f in factors)
        self.is_abelian = all(f.is_abelian for f in factors)
        self.is_periodic = all(f.is_periodic for f in factors)
        self.has_unit = all(f.has_unit for f in factors)

    def parse(self, text: str) -> ProductElement:
        parts = _split_top(_unwrap(text), "&")
        if len(parts) != len(self.factors):
            raise DomainError(f"expected {len(self.factors)} '&'-separated parts in {text!r}")
        return ProductElement(tuple(f.parse(_unwrap(p)) for f, p in zip(self.factors, parts)))

    def contains(self, x) -> bool:
        return (isinstance(x, ProductElement) and len(x.parts) == len(self.factors)
                and all(f.contains(p) for f, p in zip(self.factors, x.parts)))

    def identity(self) -> ProductElement:
        return ProductElement(tuple(f.identity() for f in self.factors))

    def random(self, rng: random.Random) -> ProductElement:
        return ProductElement(tuple(f.random(rng) for f in self.factors))

    def __str__(self) -> str:
        return "prod(" + ",".join(str(f) for f in self.factors) + ")"


class WreathCarrier(Carrier):
    """S wr C for a base carrier S with unit."""

    has_unit = True

    def __init__(self, base: Carrier, slot_probability: float = 0.5):
        if not base.has_unit:
            raise DomainError("the wreath base must admit a unit")
        self.base = base
        self.is_group = base.is_group
        self.is_periodic = base.is_periodic
        self.slot_probability = slot_probability

    def parse(self, text: str) -> WreathElement:
        text = _unwrap(text)
        pieces = _split_top(text, "|")
        if len(pieces) != 2:
            raise DomainError(f"wreath literal must look like top|slot=value;... got {text!r}")
        top = KleinFour().parse(pieces[0] or "1")
        slots = {}
        for item in _split_top(pieces[1], ";"):
            if not item.strip():
                continue
            key, sep, value = item.partition("=")
            if not sep:
                raise DomainError(f"bad slot assignment {item!r}")
            idx = KleinFour().parse(key)
            if idx in slots:
                raise DomainError(f"slot {idx} assigned twice")
            slots[idx] = self.base.parse(_unwrap(value))
        return WreathElement.from_map(top, slots)

    def contains(self, x) -> bool:
        return (isinstance(x, WreathElement)
                and all(self.base.contains(v) for _, v in x.slots))

    def identity(self) -> WreathElement:
        return WreathElement()

    def random(self, rng: random.Random, slot_one_only: bool = False) -> WreathElement:
        if slot_one_only:
            return embed(self.base.random(rng))
        slots = {t: self.base.random(rng) for t in KLEIN if rng.random() < self.slot_probability}
        return WreathElement.from_map(rng.choice(KLEIN), slots)

    def __str__(self) -> str:
        return f"wr({self.base})"


def wreath_chain(base: Carrier, depth: int = 3) -> list[Carrier]:
    """[S_1, S_2, ..., S_{depth+1}] with S_{k+1} = S_k wr C_k."""
    chain = [base]
    for _ in range(depth):
        chain.append(WreathCarrier(chain[-1]))
    return chain


def parse_carrier(text: str) -> Carrier:
    """Parse a carrier descriptor.

    Grammar: ``Z``, ``Z^k``, ``Z/m``, ``K4``, ``F:ab`` (free semigroup),
    ``M:ab`` (free monoid), ``zero(<carrier>)``, ``wr(<carrier>)`` and
    ``prod(<carrier>,<carrier>,...)``.
    """
    text = text.strip()
    if text == "Z":
        return FreeAbelian(1)
    if text.startswith(("Z^", "Z/")):
        try:
            n = int(text[2:])
        except ValueError:
            raise DomainError(f"bad carrier {text!r}") from None
        return FreeAbelian(n) if text[1] == "^" else CyclicGroup(n)
    if text == "K4":
        return KleinFour()
    if text[:2] in ("F:", "M:"):
        return FreeSemigroup(text[2:] or "ab", unit_allowed=text[0] == "M")
    if text in ("F", "M"):
        return FreeSemigroup("ab", unit_allowed=text == "M")
    for name in ("zero", "wr", "prod"):
        if text.startswith(name + "(") and text.endswith(")"):
            args = [parse_carrier(a) for a in _split_top(text[len(name) + 1:-1], ",")]
            if name == "prod":
                return ProductCarrier(*args)
            if len(args) != 1:
                raise DomainError(f"{name}(...) takes one carrier")
            return ZeroAdjoinedCarrier(args[0]) if name == "zero" else WreathCarrier(args[0])
    raise DomainError(f"unknown carrier {text!r}")

"""Pattern occurrence counting in free-semigroup words.

eta(w) counts (overlapping) occurrences of a fixed pattern, by default
``aabb``.  Powers x^(2^n) are handled through ``PowerSummary``, which keeps
only the length, the first/last P-1 letters and the count, so that
eta(x^(2^40)) is exact without building the word.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import Alphabet, DomainError, Word

DEFAULT_PATTERN = "aabb"


def count_occurrences(text: str, pattern: str) -> int:
    """Number of start positions i with text[i:i+len(pattern)] == pattern."""
    if not pattern:
        raise DomainError("empty pattern")
    count = 0
    i = text.find(pattern)
    while i >= 0:
        count += 1
        i = text.find(pattern, i + 1)
    return count


def _letters(w) -> str:
    return w.letters if isinstance(w, Word) else w


@dataclass(frozen=True)
class PowerSummary:
    """Enough of a (possibly huge) word to count occurrences across joins."""

    length: int
    prefix: str
    suffix: str
    count: int


@dataclass(frozen=True)
class PatternCounter:
    pattern: str = DEFAULT_PATTERN
    alphabet: Alphabet = Alphabet(("a", "b"))

    def __post_init__(self) -> None:
        if not self.pattern:
            raise DomainError("pattern must be nonempty")
        object.__setattr__(self, "_strip", str.maketrans("", "", "".join(self.alphabet.generators)))
        self._check(self.pattern)

    @property
    def margin(self) -> int:
        return len(self.pattern) - 1

    def _check(self, letters: str) -> str:
        bad = letters.translate(self._strip)
        if bad:
            raise DomainError(f"letters {sorted(set(bad))} not in alphabet {self.alphabet}")
        return letters

    def eta(self, w) -> int:
        return count_occurrences(self._check(_letters(w)), self.pattern)

    def crossing_count(self, x) -> int:
        """Occurrences straddling the junction of x.x."""
        s = self._check(_letters(x))
        if not s:
            raise DomainError("crossing count needs a nonempty word")
        return self.eta(s + s) - 2 * self.eta(s)

    def summarize(self, w) -> PowerSummary:
        s = self._check(_letters(w))
        m = self.margin
        return PowerSummary(len(s), s[:m], s[max(0, len(s) - m):] if m else "", self.eta(s))

    def straddle(self, left: PowerSummary, right: PowerSummary) -> int:
        # an occurrence straddles iff it starts within the last P-1 letters of
        # the left block and ends inside the right block
        joint = left.suffix + right.prefix
        cut = len(left.suffix)
        p = len(self.pattern)
        return sum(1 for i in range(cut) if i + p > cut and joint.startswith(self.pattern, i))

    def join(self, left: PowerSummary, right: PowerSummary) -> PowerSummary:
        m = self.margin
        prefix = left.prefix if left.length >= m else (left.prefix + right.prefix)[:m]
        if right.length >= m:
            suffix = right.suffix
        else:
            tail = left.suffix + right.suffix
            suffix = tail[max(0, len(tail) - m):] if m else ""
        return PowerSummary(left.length + right.length, prefix, suffix,
                            left.count + right.count + self.straddle(left, right))

    def doubling_summaries(self, x, n: int) -> list[PowerSummary]:
        """Summaries of x^(2^k) for k = 0..n."""
        if n < 0:
            raise DomainError("n must be >= 0")
        out = [self.summarize(x)]
        for _ in range(n):
            out.append(self.join(out[-1], out[-1]))
        return out

    def power_count(self, x, n: int) -> int:
        """eta(x^(2^n)) via the doubling recurrence."""
        return self.doubling_summaries(x, n)[-1].count

    def power_summary(self, x, m: int) -> PowerSummary:
        """Summary of x^m for any m >= 1, by binary powering."""
        if m < 1:
            raise DomainError("m must be >= 1")
        base = self.summarize(x)
        result = None
        while True:
            if m & 1:
                result = base if result is None else self.join(result, base)
            m >>= 1
            if not m:
                return result
            base = self.join(base, base)

    def eta_tilde(self, x) -> int:
        """lim eta(x^(2^n)) / 2^n, exactly."""
        s = self._check(_letters(x))
        if not s:
            raise DomainError("eta_tilde needs a nonempty word")
        if len(s) >= self.margin:
            return self.eta(s) + self.crossing_count(s)
        # short blocks: pass to y = x^(2^k) with |y| >= P-1, then divide
        k = 0
        while len(s) << k < self.margin:
            k += 1
        y = s * (1 << k)
        value = self.eta(y) + self.crossing_count(y)
        if value % (1 << k):
            raise AssertionError("eta_tilde of a short block is not an integer")
        return value >> k


_DEFAULT = PatternCounter()


def eta(w, pattern: str = DEFAULT_PATTERN) -> int:
    return (_DEFAULT if pattern == DEFAULT_PATTERN else PatternCounter(pattern)).eta(w)


def crossing_count(x, pattern: str = DEFAULT_PATTERN) -> int:
    return (_DEFAULT if pattern == DEFAULT_PATTERN else PatternCounter(pattern)).crossing_count(x)


def eta_power_count(x, n: int, pattern: str = DEFAULT_PATTERN) -> int:
    return (_DEFAULT if pattern == DEFAULT_PATTERN else PatternCounter(pattern)).power_count(x, n)


def eta_tilde(x, pattern: str = DEFAULT_PATTERN) -> int:
    return (_DEFAULT if pattern == DEFAULT_PATTERN else PatternCounter(pattern)).eta_tilde(x)

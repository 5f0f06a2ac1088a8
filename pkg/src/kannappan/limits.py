"""Dyadic limits and the quartic / linear / bounded decomposition.

hat:   f^(x) = lim f(x^(2^k)) / 4^k    (degree-2 homogeneous part)
tilde: f~(x) = lim f(x^(2^k)) / 2^k    (degree-1 homogeneous part)

Orbit values are converted to exact rationals before any arithmetic, so
noise-carrying functions on Z^k lose no precision in the trace.  The hat value
is read off the trace with one Richardson step, 2 a_K - a_{K-1}, which equals
(f(y^2)/2 - f(y)) / 4^(K-1) at y = x^(2^(K-1)).
Its error is at most c / 4^(K-1) for a defect bound c.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import DomainError, power
from .realfn import Closure, LookupTable, RealFn, as_fraction, fmt_number

log = logging.getLogger(__name__)

DEFAULT_NMAX = 40
DEFAULT_TOL = 1e-9
# stop materializing powers once their literal exceeds this many characters
MATERIALIZE_LIMIT = 1 << 21


@dataclass
class DyadicLimitResult:
    value: object
    trace: list
    iterations: int
    cauchy_gap: object
    converged: bool
    method: str = "iterative"
    base: int = 2
    warnings: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "value": _num(self.value),
            "trace": [_num(a) for a in self.trace],
            "iterations": self.iterations,
            "cauchy_gap": _num(self.cauchy_gap),
            "converged": self.converged,
            "method": self.method,
            "base": self.base,
            "warnings": list(self.warnings),
        }


def _num(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v)
        return float(v)
    return v


def _out(value, exact: bool):
    return as_fraction(value) if exact else float(value)


@dataclass
class Orbit:
    values: list          # f(x^(base^k)) as Fractions, k = 0..len-1
    periodic: bool = False
    truncated: bool = False


def orbit_values(f: RealFn, x, n: int, base: int = 2) -> Orbit:
    """f along x, x^base, x^(base^2), ... up to n squarings.

    Uses the function's own recurrence when it has one, otherwise
    materializes the powers.  A repeated element marks the orbit periodic.
    """
    if base == 2:
        fast = f.dyadic_orbit(x, n)
        if fast is not None:
            return Orbit([as_fraction(v) for v in fast])
    y = x
    seen = {y}
    values = [as_fraction(f(y))]
    for _ in range(n):
        y = power(y, base)
        if y in seen:
            return Orbit(values, periodic=True)
        seen.add(y)
        if len(str(y)) > MATERIALIZE_LIMIT:
            return Orbit(values, truncated=True)
        values.append(as_fraction(f(y)))
    return Orbit(values)


def _stop_index(trace: Sequence, tol: float) -> tuple[int, bool]:
    """First K >= 3 whose last three gaps are <= tol, else the last index."""
    for K in range(3, len(trace)):
        if all(abs(trace[j] - trace[j - 1]) <= tol for j in range(K - 2, K + 1)):
            return K, True
    return len(trace) - 1, False


def _tail_gap(trace: Sequence, K: int):
    gaps = [abs(trace[j] - trace[j - 1]) for j in range(max(1, K - 2), K + 1)]
    return max(gaps) if gaps else Fraction(0)


def _check_method(method: str) -> None:
    if method not in ("auto", "closed", "iterate"):
        raise DomainError(f"unknown method {method!r}")


def hat_from_values(values: Sequence, tol: float = DEFAULT_TOL, base: int = 2):
    """(value, trace, converged, gap) of the hat limit from orbit values."""
    scale = base * base
    trace = [v / scale**k for k, v in enumerate(values)]
    K, converged = _stop_index(trace, tol)
    trace = trace[:K + 1]
    if K >= 1:
        value = (base * trace[K] - trace[K - 1]) / (base - 1)
    else:
        value = trace[0]
    return value, trace, converged, _tail_gap(trace, K)


def tilde_from_values(values: Sequence, tol: float = DEFAULT_TOL, base: int = 2):
    trace = [v / base**k for k, v in enumerate(values)]
    K, converged = _stop_index(trace, tol)
    trace = trace[:K + 1]
    return trace[K], trace, converged, _tail_gap(trace, K)


def hat_limit(f: RealFn, x, n_max: int = DEFAULT_NMAX, tol: float = DEFAULT_TOL, *,
              c=None, method: str = "auto", base: int = 2) -> DyadicLimitResult:
    """lim f(x^(base^k)) / base^(2k)."""
    _check_method(method)
    if n_max < 2:
        raise DomainError("n_max must be >= 2")
    if method != "iterate" and base == 2:
        parts = f.closed_parts(x)
        if parts is not None:
            return DyadicLimitResult(_out(parts[0], f.exact), [], 0, Fraction(0), True,
                                     "closed-form", base)
        if method == "closed":
            raise DomainError(f"no closed form for the hat limit of {f.kind}")
    orbit = orbit_values(f, x, n_max, base)
    if orbit.periodic:
        trace = [v / (base * base)**k for k, v in enumerate(orbit.values)]
        return DyadicLimitResult(_out(0, f.exact), trace, len(trace), Fraction(0), True,
                                 "periodic-orbit", base)
    value, trace, converged, gap = hat_from_values(orbit.values, tol, base)
    result = DyadicLimitResult(_out(value, f.exact), trace, len(trace), gap, converged,
                               "iterative", base)
    if orbit.truncated:
        result.warnings.append("orbit truncated: powers too large to materialize")
    if not converged:
        result.warnings.append(f"no convergence within n_max={n_max} at tol={tol}")
    if c is not None:
        dev = abs(value - (as_fraction(f(x * x)) / 2 - as_fraction(f(x))))
        if dev > as_fraction(c):
            result.warnings.append(f"|hat - (f(x^2)/2 - f(x))| = {float(dev):.6g} exceeds c")
    return result


def tilde_limit(f: RealFn, x, n_max: int = DEFAULT_NMAX, tol: float = DEFAULT_TOL, *,
                c=None, method: str = "auto", base: int = 2) -> DyadicLimitResult:
    """lim f(x^(base^k)) / base^k.

    Hypothesis violations (|f(y^2) - 2 f(y)| > c on the orbit) are reported as
    warnings; the computation always proceeds.
    """
    _check_method(method)
    if n_max < 2:
        raise DomainError("n_max must be >= 2")
    warnings = []
    if method != "iterate" and base == 2:
        parts = f.closed_parts(x)
        if parts is not None and parts[0] == 0:
            return DyadicLimitResult(_out(parts[1], f.exact), [], 0, Fraction(0), True,
                                     "closed-form", base)
        if parts is not None:
            warnings.append("nonzero quartic part: the tilde limit diverges at this point")
        elif method == "closed":
            raise DomainError(f"no closed form for the tilde limit of {f.kind}")
    orbit = orbit_values(f, x, n_max, base)
    if orbit.periodic:
        trace = [v / base**k for k, v in enumerate(orbit.values)]
        return DyadicLimitResult(_out(0, f.exact), trace, len(trace), Fraction(0), True,
                                 "periodic-orbit", base, warnings)
    value, trace, converged, gap = tilde_from_values(orbit.values, tol, base)
    if orbit.truncated:
        warnings.append("orbit truncated: powers too large to materialize")
    if not converged:
        warnings.append(f"no convergence within n_max={n_max} at tol={tol}")
    if c is not None and base == 2:
        vals = orbit.values
        worst = max((abs(vals[k + 1] - 2 * vals[k]) for k in range(len(vals) - 1)),
                    default=Fraction(0))
        if worst > as_fraction(c):
            warnings.append(f"doubling hypothesis violated: |f(y^2) - 2f(y)| = {float(worst):.6g} > c")
    for w in warnings:
        log.warning("tilde_limit at %s: %s", x, w)
    return DyadicLimitResult(_out(value, f.exact), trace, len(trace), gap, converged,
                             "iterative", base, warnings)


def hat_fn(f: RealFn, **kwargs) -> Closure:
    """f^ as a RealFn, evaluated pointwise."""
    return Closure(lambda x: hat_limit(f, x, **kwargs).value, f"hat({f.kind})", f.exact)


def tilde_fn(f: RealFn, **kwargs) -> Closure:
    return Closure(lambda x: tilde_limit(f, x, **kwargs).value, f"tilde({f.kind})", f.exact)


def homogeneity_check(g: RealFn, x, n: int, degree: int):
    """|g(x^n) - n^degree g(x)|."""
    if degree not in (1, 2):
        raise DomainError("degree must be 1 or 2")
    return abs(as_fraction(g(power(x, n))) - n**degree * as_fraction(g(x)))


def phi_doubling_residual(f: RealFn, x, **kwargs):
    """|phi(x^2) - 2 phi(x)| for phi = f - f^, using f^(x^2) = 4 f^(x)."""
    h = as_fraction(hat_limit(f, x, **kwargs).value)
    return abs(as_fraction(f(x * x)) - 2 * as_fraction(f(x)) - 2 * h)


def madic_agreement(f: RealFn, x, bases: Iterable[int] = (2, 3, 5), n_max: int = 30,
                    tol: float = DEFAULT_TOL) -> dict:
    """Hat limit along x^(m^k) for several bases m; they should coincide."""
    out = {}
    for m in bases:
        out[m] = hat_limit(f, x, n_max, tol, method="iterate", base=m).value
    return out


# ---------------------------------------------------------------------------
# Cauchy certificates on a hat trace a_k = f(x^(2^k)) / 4^k


@dataclass
class Certificate:
    checked: int
    violations: list   # (k, m, lhs, bound)
    worst_ratio: float

    @property
    def holds(self) -> bool:
        return not self.violations


def second_difference_certificate(trace: Sequence, c, k_max: int = 20) -> Certificate:
    """Check |a_{m+k} - 2 a_{k+1} + a_k| <= c / 4^k for 1 <= k <= k_max, m >= 1."""
    c = as_fraction(c)
    checked, violations, worst = 0, [], 0.0
    for k in range(1, min(k_max, len(trace) - 2) + 1):
        bound = c / 4**k
        for m in range(1, len(trace) - k):
            lhs = abs(trace[m + k] - 2 * trace[k + 1] + trace[k])
            checked += 1
            if bound:
                worst = max(worst, float(lhs / bound))
            elif lhs:
                worst = float("inf")
            if lhs > bound:
                violations.append((k, m, lhs, bound))
    return Certificate(checked, violations, worst)


def weighted_certificate(trace: Sequence, c, k_max: int = 20) -> Certificate:
    """Check the power inequality along the trace.

    With n = 2^m and y = x^(2^k) the power inequality divided by n^2 4^k reads
    |a_{m+k} - 2(1 - 2^-m) a_{k+1} + (1 - 2^(1-m)) a_k| <= (n-2)(n-1)/(2 n^2) c / 4^k.
    """
    c = as_fraction(c)
    checked, violations, worst = 0, [], 0.0
    for k in range(0, min(k_max, len(trace) - 2) + 1):
        for m in range(1, len(trace) - k):
            n = 2**m
            bound = Fraction((n - 2) * (n - 1), 2 * n * n) * c / 4**k
            lhs = abs(trace[m + k] - 2 * (1 - Fraction(1, n)) * trace[k + 1]
                      + (1 - Fraction(2, n)) * trace[k])
            checked += 1
            if bound:
                worst = max(worst, float(lhs / bound))
            elif lhs:
                worst = float("inf")
            if lhs > bound:
                violations.append((k, m, lhs, bound))
    return Certificate(checked, violations, worst)


# ---------------------------------------------------------------------------
# decomposition


@dataclass
class PointParts:
    point: object
    value: object
    quartic: object
    linear: object
    remainder: object
    method: str
    converged: bool


@dataclass
class Decomposition:
    quartic_part: RealFn
    linear_part: RealFn
    remainder_sup: object
    corpus: str
    points: list
    partial: bool = False
    arithmetic: str = "exact"

    def to_json(self) -> dict:
        worst = max(self.points, key=lambda p: (abs(p.remainder), str(p.point)))
        return {
            "corpus": self.corpus,
            "samples": len(self.points),
            "remainder_sup": _num(self.remainder_sup),
            "witness": str(worst.point),
            "partial": self.partial,
            "arithmetic": self.arithmetic,
            "points": [
                {"point": str(p.point), "value": _num(p.value), "quartic": _num(p.quartic),
                 "linear": _num(p.linear), "remainder": _num(p.remainder),
                 "method": p.method, "converged": p.converged}
                for p in self.points
            ],
        }


def split_point(f: RealFn, x, n_max: int = DEFAULT_NMAX, tol: float = DEFAULT_TOL,
                method: str = "auto") -> PointParts:
    """f(x) = f^(x) + (f - f^)~(x) + remainder at one point."""
    _check_method(method)
    fx = as_fraction(f(x))
    parts = f.closed_parts(x) if method != "iterate" else None
    if parts is not None:
        q, l = as_fraction(parts[0]), as_fraction(parts[1])
        return PointParts(x, fx, q, l, fx - q - l, "closed-form", True)
    if method == "closed":
        raise DomainError(f"no closed form for {f.kind}")
    orbit = orbit_values(f, x, n_max)
    if orbit.periodic:
        return PointParts(x, fx, Fraction(0), Fraction(0), fx, "periodic-orbit", True)
    q, _, hat_ok, _ = hat_from_values(orbit.values, tol)
    # phi = f - f^ along the orbit, using f^(x^(2^k)) = 4^k f^(x)
    phi = [v - 4**k * q for k, v in enumerate(orbit.values)]
    l, _, tilde_ok, _ = tilde_from_values(phi, tol)
    ok = hat_ok and tilde_ok and not orbit.truncated
    return PointParts(x, fx, q, l, fx - q - l, "iterative", ok)


def decompose(f: RealFn, corpus: Sequence, n_max: int = DEFAULT_NMAX,
              tol: float = DEFAULT_TOL, method: str = "auto",
              corpus_name: str = "corpus") -> Decomposition:
    """Pointwise quartic / linear / bounded split over a corpus."""
    corpus = list(corpus)
    if not corpus:
        raise DomainError("empty corpus")
    points = [split_point(f, x, n_max, tol, method) for x in corpus]
    conv = (lambda v: v) if f.exact else float
    quartic = LookupTable({p.point: conv(p.quartic) for p in points}, "quartic-part")
    linear = LookupTable({p.point: conv(p.linear) for p in points}, "linear-part")
    sup = max(abs(p.remainder) for p in points)
    for p in points:
        if not f.exact:
            p.value, p.quartic, p.linear, p.remainder = (
                float(p.value), float(p.quartic), float(p.linear), float(p.remainder))
    return Decomposition(quartic, linear, sup if f.exact else float(sup), corpus_name, points,
                         partial=not all(p.converged for p in points),
                         arithmetic="exact" if f.exact else "float")

"""Closed-form solutions on free abelian groups Z^k.

Every solution of the Kannappan equation on an abelian group has the form
f(v) = B(v, v) + psi(v) with B a symmetric bimorphism and psi additive.  On
Z^k this is f(v) = v^T M v + a.v, and M, a are recovered from the values at
e_i, 2e_i and e_i + e_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .algebra import AbelianVector, DomainError, FreeAbelian
from .limits import hat_limit, tilde_limit
from .realfn import (
    QuadraticForm,
    RealFn,
    as_fraction,
    fmt_number,
    kannappan_defect,
    sup_defect,
)


@dataclass(frozen=True)
class QuadraticAdditiveModel:
    form: tuple      # symmetric k x k Fractions
    additive: tuple  # k Fractions

    def __post_init__(self) -> None:
        k = len(self.form)
        if any(len(row) != k for row in self.form) or len(self.additive) != k:
            raise DomainError("model shapes disagree")
        if any(self.form[i][j] != self.form[j][i] for i in range(k) for j in range(i)):
            raise DomainError("form must be symmetric")

    @property
    def dimension(self) -> int:
        return len(self.form)

    def __call__(self, v: AbelianVector):
        return self.as_realfn()(v)

    def as_realfn(self) -> QuadraticForm:
        return QuadraticForm(self.form, self.additive)

    def to_json(self) -> dict:
        return {"M": [[fmt_number(e) for e in row] for row in self.form],
                "a": [fmt_number(e) for e in self.additive]}


def _probe(f: RealFn, v: AbelianVector) -> Fraction:
    try:
        return as_fraction(f(v))
    except DomainError as exc:
        raise DomainError(f"cannot evaluate at probe point {v}: {exc}") from exc


def fit_quadratic_additive(f: RealFn, k: int) -> QuadraticAdditiveModel:
    """Fit M, a from f(e_i), f(2e_i), f(e_i + e_j)."""
    Z = FreeAbelian(k)
    e = [Z.basis(i) for i in range(k)]
    fe = [_probe(f, ei) for ei in e]
    M = [[Fraction(0)] * k for _ in range(k)]
    a = [Fraction(0)] * k
    for i in range(k):
        M[i][i] = (_probe(f, e[i] * e[i]) - 2 * fe[i]) / 2
        a[i] = fe[i] - M[i][i]
    for i in range(k):
        for j in range(i + 1, k):
            M[i][j] = M[j][i] = (_probe(f, e[i] * e[j]) - fe[i] - fe[j]) / 2
    return QuadraticAdditiveModel(tuple(map(tuple, M)), tuple(a))


def fit_least_squares(f: RealFn, corpus: Sequence[AbelianVector], k: int) -> QuadraticAdditiveModel:
    """Floating-point least-squares fit over a corpus, for noisy inputs."""
    if not corpus:
        raise DomainError("empty corpus")
    pairs = [(i, j) for i in range(k) for j in range(i, k)]
    rows, rhs = [], []
    for v in corpus:
        c = v.coords
        rows.append([c[i] * c[j] * (1 if i == j else 2) for i, j in pairs] + list(c))
        rhs.append(float(f(v)))
    sol, *_ = np.linalg.lstsq(np.array(rows, dtype=float), np.array(rhs), rcond=None)
    M = [[Fraction(0)] * k for _ in range(k)]
    for (i, j), s in zip(pairs, sol[:len(pairs)]):
        M[i][j] = M[j][i] = Fraction(float(s))
    a = tuple(Fraction(float(s)) for s in sol[len(pairs):])
    return QuadraticAdditiveModel(tuple(map(tuple, M)), a)


def _abelian_corpus(corpus: Iterable) -> list[AbelianVector]:
    corpus = list(corpus)
    if not corpus:
        raise DomainError("empty corpus")
    for v in corpus:
        if not isinstance(v, AbelianVector):
            raise DomainError(f"{v!r} is not in a free abelian carrier")
    return corpus


def model_residual(model: QuadraticAdditiveModel, f: RealFn, corpus: Iterable):
    """sup over the corpus of |f(v) - model(v)|."""
    corpus = _abelian_corpus(corpus)
    g = model.as_realfn()
    return max(abs(as_fraction(f(v)) - g(v)) for v in corpus)


def even_deviation(f: RealFn, corpus: Sequence[AbelianVector]):
    """(sup |f(v) - f(-v)|, witness)."""
    return max(((abs(as_fraction(f(v)) - as_fraction(f(-v))), v) for v in corpus),
               key=lambda p: (p[0], str(p[1])))


def odd_deviation(f: RealFn, corpus: Sequence[AbelianVector]):
    """(sup |f(v) + f(-v)|, witness)."""
    return max(((abs(as_fraction(f(v)) + as_fraction(f(-v))), v) for v in corpus),
               key=lambda p: (p[0], str(p[1])))


def defect_corpus(corpus: Sequence[AbelianVector]) -> list[tuple]:
    """Triples probing the defect near each point: (v,v,-v), (v,-v,0), (0,0,0)
    and consecutive corpus triples."""
    zero = corpus[0].identity()
    triples = [(zero, zero, zero)]
    for v in corpus:
        triples += [(v, v, -v), (v, -v, zero), (v, v, zero)]
    n = len(corpus)
    triples += [(corpus[i], corpus[(i + 1) % n], corpus[(i + 2) % n]) for i in range(n)]
    return triples


@dataclass
class JungResult:
    Q: QuadraticAdditiveModel
    sup_dev: object
    defect_bound: object
    theta: object
    evenness: object
    holds: bool
    witness: object = None

    def to_json(self) -> dict:
        return {
            "Q": self.Q.to_json(),
            "sup_dev": float(self.sup_dev),
            "defect_bound": float(self.defect_bound),
            "theta": float(self.theta),
            "evenness": float(self.evenness),
            "bound": float(3 * as_fraction(self.defect_bound)),
            "holds": self.holds,
            "witness": str(self.witness) if self.witness is not None else None,
        }


def measured_defect(f: RealFn, corpus: Sequence[AbelianVector]):
    return sup_defect(f, defect_corpus(corpus)).sup_estimate


def jung_recover(f: RealFn, corpus: Iterable, d=None, theta=0, *,
                 method: str = "auto", tol: float = 1e-9) -> JungResult:
    """Recover the quadratic form Q = f^ of an approximately even f.

    Q is the hat limit at the probe points, fit to a pure form.  The check is
    sup_corpus |f - Q| <= 3d; ``d`` defaults to the measured corpus defect.
    """
    corpus = _abelian_corpus(corpus)
    k = corpus[0].dim
    dev, witness = even_deviation(f, corpus)
    if dev > as_fraction(theta):
        raise DomainError(f"evenness fails: |f(v) - f(-v)| = {float(dev):.6g} > theta at v = {witness}")
    if d is None:
        d = measured_defect(f, corpus)
    hat_values = {}

    class _Hat(RealFn):
        exact = True

        def __call__(self, v):
            if v not in hat_values:
                hat_values[v] = as_fraction(hat_limit(f, v, method=method, tol=tol).value)
            return hat_values[v]

    fitted = fit_quadratic_additive(_Hat(), k)
    # f^ is degree-2 homogeneous, so the additive part vanishes up to rounding
    Q = QuadraticAdditiveModel(fitted.form, (Fraction(0),) * k)
    g = Q.as_realfn()
    sup_dev, where = max(((abs(as_fraction(f(v)) - g(v)), v) for v in corpus),
                         key=lambda p: (p[0], str(p[1])))
    holds = sup_dev <= 3 * as_fraction(d)
    return JungResult(Q, sup_dev, d, theta, dev, holds, where)


# odd companion: the defect at (x, x, -x) with |f(0)| <= d gives
# |f(2x) - 2f(x)| <= 3d + theta; summing the dyadic tail, sup |f - psi| <= 3d + theta
ODD_CONSTANT = 3


@dataclass
class AdditiveRecovery:
    psi: QuadraticAdditiveModel
    sup_dev: object
    defect_bound: object
    theta: object
    constant: int
    holds: bool


def additive_recover(f: RealFn, corpus: Iterable, d=None, theta=0, *,
                     method: str = "auto") -> AdditiveRecovery:
    """Recover the additive part psi = f~ of an approximately odd f."""
    corpus = _abelian_corpus(corpus)
    k = corpus[0].dim
    dev, witness = odd_deviation(f, corpus)
    if dev > as_fraction(theta):
        raise DomainError(f"oddness fails: |f(v) + f(-v)| = {float(dev):.6g} > theta at v = {witness}")
    if d is None:
        d = measured_defect(f, corpus)
    Z = FreeAbelian(k)
    a = tuple(as_fraction(tilde_limit(f, Z.basis(i), method=method).value) for i in range(k))
    psi = QuadraticAdditiveModel(tuple(tuple(Fraction(0) for _ in range(k)) for _ in range(k)), a)
    g = psi.as_realfn()
    sup_dev = max(abs(as_fraction(f(v)) - g(v)) for v in corpus)
    bound = ODD_CONSTANT * (as_fraction(d) + as_fraction(theta))
    return AdditiveRecovery(psi, sup_dev, d, theta, ODD_CONSTANT, sup_dev <= bound)


def quadratic_equation_residual(f: RealFn, x: AbelianVector, y: AbelianVector):
    """f(x+y) + f(x-y) - 2f(x) - 2f(y)."""
    return (as_fraction(f(x * y)) + as_fraction(f(x * (-y)))
            - 2 * as_fraction(f(x)) - 2 * as_fraction(f(y)))


def is_kannappan_on(f: RealFn, triples: Iterable[tuple]) -> bool:
    return all(kannappan_defect(f, *t) == 0 for t in triples)

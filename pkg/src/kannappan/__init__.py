"""Kannappan functional equation workbench on semigroups.

Exact-arithmetic defects, dyadic limits (hat and tilde), the three-way
decomposition, the aabb instability witness, closed-form solutions on Z^k
and wreath-product embeddings.
"""

from __future__ import annotations

from .algebra import (
    AbelianVector,
    CyclicElement,
    DomainError,
    KleinFourElement,
    ProductElement,
    Word,
    WreathElement,
    ZeroAdjoined,
    amplification_triple,
    amplified_element,
    embed,
    embed_chain,
    parse_carrier,
    power,
    vec,
    wreath_conjugate,
)
from .realfn import (
    AdditiveCharacter,
    BoundedNoise,
    LookupTable,
    PatternCount,
    Pullback,
    QuadraticForm,
    RealFn,
    coordinate_sum,
    kannappan_defect,
    nfold_defect,
    order_two_deviations,
    parse_fn,
    power_defect,
    quadratic_exchange_residuals,
    square_compose_defect,
    sup_defect,
    zero_defect,
)
from .limits import decompose, hat_limit, tilde_limit
from .patterns import PatternCounter, eta, eta_power_count, eta_tilde
from .counterexample import instability_witness
from .abelian import fit_quadratic_additive, jung_recover, additive_recover

__version__ = "0.1.0"

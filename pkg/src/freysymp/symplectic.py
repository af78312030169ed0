"""Symplectic / anti-symplectic decisions for isomorphisms of p-torsion.

Four decision procedures plus the pairing oracle:

* ``classify_isomorphism``: square class of det(M) for a matrix between
  symplectic bases.
* ``oracle_r_of_phi``: the multiplier r(phi) read off actual Weil pairing
  values, cross-checked against det(M).
* ``maincrit2_decide``: curves at 2 whose inertia image is SL_2(F_3).
* ``ko_multiplicative_decide``: two curves multiplicative at the same prime.

Inapplicable criteria return ``UNDETERMINED`` instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .ffcurve import TorsionBasis, weil_pairing
from .matgroup import MatModP
from .numutil import legendre, smallest_nonsquare
from .wmodel import InertiaImage

SYMPLECTIC = "Symplectic"
ANTI = "AntiSymplectic"
BOTH = "Both"
UNDETERMINED = "Undetermined"

CONTRADICTION = "Contradiction"
CONSISTENT = "Consistent"


@dataclass(frozen=True)
class SympClass:
    tag: str
    witness: dict = field(default_factory=dict)
    nonabelian: Optional[bool] = None

    def __post_init__(self):
        if self.tag not in (SYMPLECTIC, ANTI, BOTH, UNDETERMINED):
            raise ValueError(self.tag)
        if self.tag == BOTH and self.nonabelian:
            raise ValueError("a non-abelian image cannot be both symplectic and anti-symplectic")

    def as_dict(self) -> dict:
        return {"tag": self.tag, "nonabelian": self.nonabelian, "witness": self.witness}


def nonsquare_rep(p: int) -> int:
    """The fixed nonsquare r_p: smallest positive nonsquare mod p."""
    return smallest_nonsquare(p)


def classify_isomorphism(M: MatModP, p: Optional[int] = None) -> SympClass:
    p = M.p if p is None else p
    d = M.det()
    if d == 0:
        raise ValueError("singular matrix is not an isomorphism")
    ls = legendre(d, p)
    return SympClass(
        SYMPLECTIC if ls == 1 else ANTI,
        {"det": d, "legendre": ls, "p": p, "r_p": nonsquare_rep(p)},
    )


def oracle_r_of_phi(M: MatModP, basis: TorsionBasis) -> int:
    """r(phi) from pairing values: e(phi P, phi Q) = e(P, Q)^r.

    phi is the endomorphism of E[p] with matrix M in ``basis``; with the
    whole torsion rational every invertible M is a module automorphism.
    """
    if M.p != basis.p:
        raise ValueError("matrix and basis use different primes")
    if M.det() == 0:
        raise ValueError("singular matrix")
    X, Y = basis.apply(M)
    r = basis.dlog(weil_pairing(X, Y, basis.p))
    if r != M.det():
        raise AssertionError(f"r(phi) = {r} but det(M) = {M.det()}: pairing bug")
    return r


def maincrit2_decide(
    p: int,
    v2_dmin_E: int,
    v2_dmin_Eprime: int,
    cert_E: Optional[InertiaImage],
    cert_Eprime: Optional[InertiaImage],
    *,
    same_torsion_field: bool,
) -> SympClass:
    """Decide symplecticity at 2 for curves whose inertia image is SL_2(F_3).

    ``same_torsion_field`` is the caller's assertion that both curves have
    the same p-torsion field over Q_2^un; it cannot be read off valuations.
    """
    if p < 3 or legendre(2, p) == 0:
        raise ValueError(f"p must be an odd prime >= 3, got {p}")
    w = {
        "p": p,
        "v2_dmin": [v2_dmin_E, v2_dmin_Eprime],
        "same_torsion_field_asserted": same_torsion_field,
    }
    certs = [cert_E, cert_Eprime]
    w["inertia"] = [c.tag if c else None for c in certs]
    if any(c is None or c.tag != "SL2F3" for c in certs):
        return SympClass(UNDETERMINED, {**w, "reason": "inertia image at 2 not certified as SL2F3"})
    if not same_torsion_field:
        return SympClass(UNDETERMINED, {**w, "reason": "equal torsion fields not asserted"})
    l2 = legendre(2, p)
    w["legendre_2_p"] = l2
    if l2 == 1:
        return SympClass(SYMPLECTIC, {**w, "clause": "(2/p) = 1"}, nonabelian=True)
    congruent = (v2_dmin_E - v2_dmin_Eprime) % 3 == 0
    w["clause"] = "(2/p) = -1, valuations compared mod 3"
    w["congruent_mod_3"] = congruent
    return SympClass(SYMPLECTIC if congruent else ANTI, w, nonabelian=True)


def ko_multiplicative_decide(p: int, v_E: int, v_Eprime: int) -> SympClass:
    """Two curves multiplicative at the same prime: symplectic iff the
    minimal-discriminant valuations differ by a square factor mod p."""
    w = {"p": p, "v_dmin": [v_E, v_Eprime]}
    if v_E % p == 0 or v_Eprime % p == 0:
        return SympClass(UNDETERMINED, {**w, "reason": "p divides a valuation"})
    ls = legendre(v_E * v_Eprime, p)
    w["legendre_product"] = ls
    return SympClass(SYMPLECTIC if ls == 1 else ANTI, w)


def contradiction_check(class_at_2: SympClass, class_at_3: SympClass, nonabelian: bool) -> str:
    tags = {class_at_2.tag, class_at_3.tag}
    if UNDETERMINED in tags or BOTH in tags or not nonabelian:
        return UNDETERMINED
    return CONTRADICTION if tags == {SYMPLECTIC, ANTI} else CONSISTENT

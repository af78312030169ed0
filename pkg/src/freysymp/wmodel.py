"""Integral long Weierstrass models over Q.

Invariants, quadratic twists, changes of variables, minimal models at a
single prime and the reduction-type and inertia-type predicates used in
the Frey chain.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .numutil import is_prime, valuation, valuation_or_none

GOOD = "Good"
POT_GOOD = "PotentiallyGood"
MULT = "Multiplicative"
POT_MULT = "PotentiallyMultiplicative"
ADDITIVE = "Additive-other"


class SingularModel(ValueError):
    pass


class NonIntegralModel(ValueError):
    pass


@dataclass(frozen=True)
class WeierstrassModel:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            v = getattr(self, name)
            if isinstance(v, Fraction):
                if v.denominator != 1:
                    raise NonIntegralModel(f"{name} = {v} is not an integer")
                object.__setattr__(self, name, int(v))
            elif not isinstance(v, int):
                raise TypeError(f"{name} must be an integer")
        if self.discriminant() == 0:
            raise SingularModel(f"model {self.ainvs} is singular")

    @classmethod
    def parse(cls, text: str) -> "WeierstrassModel":
        """Read the ``a1,a2,a3,a4,a6`` input format."""
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 5:
            raise ValueError(f"expected 5 comma-separated integers, got {text!r}")
        return cls(*(int(s) for s in parts))

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def b_invariants(self) -> tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __str__(self):
        return ",".join(str(a) for a in self.ainvs)


@dataclass(frozen=True)
class InvariantData:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    delta: int
    j: Fraction

    def __post_init__(self):
        assert self.c4**3 - self.c6**2 == 1728 * self.delta
        assert 4 * self.b8 == self.b2 * self.b6 - self.b4**2
        assert self.j * self.delta == self.c4**3

    def as_dict(self) -> dict:
        return {
            "b2": self.b2, "b4": self.b4, "b6": self.b6, "b8": self.b8,
            "c4": self.c4, "c6": self.c6, "delta": self.delta, "j": str(self.j),
        }


def invariants(model: WeierstrassModel) -> InvariantData:
    b2, b4, b6, b8 = model.b_invariants()
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    delta = model.discriminant()
    if delta == 0:
        raise SingularModel(str(model))
    return InvariantData(b2, b4, b6, b8, c4, c6, delta, Fraction(c4**3, delta))


def _is_squarefree(d: int) -> bool:
    n, q = abs(d), 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        q += 1
    return True


def quadratic_twist(model: WeierstrassModel, d: int) -> WeierstrassModel:
    """Integral model of the quadratic twist by d.

    Returns a model with invariants exactly (d^2 c4, d^3 c6, d^6 Delta) when
    an integral one exists, preferring a1, a3 in {0, 1} with unchanged
    b-invariants.  Failing that (possible only at 2) the model
    y^2 = x^3 + d b2 x^2 + 8 d^2 b4 x + 16 d^3 b6 is returned; its invariants
    carry an extra 2^4, 2^6, 2^12.
    """
    if d == 0 or not _is_squarefree(d):
        raise ValueError(f"twist parameter {d} must be a nonzero squarefree integer")
    b2, b4, b6, _ = model.b_invariants()
    B2, B4, B6 = d * b2, d * d * b4, d**3 * b6
    twisted = None
    for a1, a3 in ((0, 0), (0, 1), (1, 0), (1, 1)):
        if (B2 - a1) % 4 == 0 and (B4 - a1 * a3) % 2 == 0 and (B6 - a3) % 4 == 0:
            twisted = WeierstrassModel(a1, (B2 - a1) // 4, a3, (B4 - a1 * a3) // 2, (B6 - a3) // 4)
            break
    w = 1
    if twisted is None:
        scaled = WeierstrassModel(0, B2, 0, 8 * B4, 16 * B6)
        rst = find_ell_reduction(scaled, 2)
        if rst is not None:
            twisted = rescale(scaled, 2, *rst)
        else:
            twisted, w = scaled, 2
    I, J = invariants(model), invariants(twisted)
    assert (J.c4, J.c6, J.delta) == (d**2 * w**4 * I.c4, d**3 * w**6 * I.c6, d**6 * w**12 * I.delta)
    return twisted


def rescale(model: WeierstrassModel, u, r=0, s=0, t=0) -> WeierstrassModel:
    """Apply x = u^2 x' + r, y = u^3 y' + u^2 s x' + t; the result must be integral."""
    u, r, s, t = (Fraction(v) for v in (u, r, s, t))
    if u == 0:
        raise ValueError("u must be nonzero")
    a1, a2, a3, a4, a6 = (Fraction(a) for a in model.ainvs)
    new = {
        "a1": (a1 + 2 * s) / u,
        "a2": (a2 - s * a1 + 3 * r - s * s) / u**2,
        "a3": (a3 + r * a1 + 2 * t) / u**3,
        "a4": (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
        "a6": (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
    }
    for name, v in new.items():
        if v.denominator != 1:
            raise NonIntegralModel(f"{name} = {v} is not integral under u={u}, r={r}, s={s}, t={t}")
    return WeierstrassModel(*(int(v) for v in new.values()))


def inverse_substitution(u, r=0, s=0, t=0) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    u, r, s, t = (Fraction(v) for v in (u, r, s, t))
    return 1 / u, -r / u**2, -s / u, (r * s - t) / u**3


@dataclass(frozen=True)
class LocalData:
    ell: int
    v_c4: Optional[int]  # None means c4 = 0
    v_c6: Optional[int]
    v_delta: int
    v_j: Optional[int]  # None means j = 0
    minimal: bool
    reduction_type: str

    def __post_init__(self):
        if self.minimal and self.reduction_type == MULT:
            assert self.v_c4 == 0 and self.v_delta > 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _solutions_mod(coef: int, rhs: int, mod: int) -> list[int]:
    """All x in [0, mod) with coef * x = rhs (mod mod)."""
    return [x for x in range(mod) if (coef * x - rhs) % mod == 0] if mod < 64 else _lin_solve(coef, rhs, mod)


def _lin_solve(coef: int, rhs: int, mod: int) -> list[int]:
    from math import gcd

    g = gcd(coef, mod)
    if rhs % g:
        return []
    m = mod // g
    x0 = (rhs // g) * pow(coef // g, -1, m) % m
    return [x0 + k * m for k in range(g)]


def find_ell_reduction(model: WeierstrassModel, ell: int) -> Optional[tuple[int, int, int]]:
    """Integral (r, s, t) making the u = ell substitution integral, or None.

    Searching r mod ell^2, s mod ell and t mod ell^3 is complete: any
    integral substitution composed with an integral unimodular one on the
    target side stays integral and shifts (r, s, t) by exactly those moduli.
    """
    a1, a2, a3, a4, a6 = model.ainvs
    for s in _solutions_mod(2, -a1, ell):
        # a2' needs 3r = s a1 + s^2 - a2 (mod ell^2)
        for r in _solutions_mod(3, s * a1 + s * s - a2, ell**2):
            for t in _solutions_mod(2, -(a3 + r * a1), ell**3):
                try:
                    rescale(model, ell, r, s, t)
                except NonIntegralModel:
                    continue
                return r, s, t
    return None


def _may_be_nonminimal(I: InvariantData, ell: int) -> bool:
    return (
        (I.c4 == 0 or valuation(I.c4, ell) >= 4)
        and (I.c6 == 0 or valuation(I.c6, ell) >= 6)
        and valuation(I.delta, ell) >= 12
    )


def local_data(model: WeierstrassModel, ell: int, minimal: bool) -> LocalData:
    I = invariants(model)
    v_j = None if I.j == 0 else valuation(I.j.numerator, ell) - valuation(I.j.denominator, ell)
    ld = LocalData(
        ell=ell,
        v_c4=valuation_or_none(I.c4, ell),
        v_c6=valuation_or_none(I.c6, ell),
        v_delta=valuation(I.delta, ell),
        v_j=v_j,
        minimal=minimal,
        reduction_type=ADDITIVE,
    )
    return LocalData(**{**ld.__dict__, "reduction_type": reduction_type(ld)})


def minimalize_at(model: WeierstrassModel, ell: int) -> tuple[WeierstrassModel, LocalData]:
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    while _may_be_nonminimal(invariants(model), ell):
        rst = find_ell_reduction(model, ell)
        if rst is None:
            break
        model = rescale(model, ell, *rst)
    return model, local_data(model, ell, minimal=True)


def reduction_type(ld: LocalData) -> str:
    """Reduction type at ell from the data of a minimal model."""
    if ld.v_delta == 0:
        return GOOD
    if ld.v_j is None or ld.v_j >= 0:
        return POT_GOOD
    return MULT if ld.v_c4 == 0 else POT_MULT


# --- inertia type at 2 --------------------------------------------------------

CERTIFIED_INERTIA_ROWS = (
    {
        "v2_delta": 4,
        "v2_c4": 5,
        "group_tag": "SL2F3",
        "source_citation": "Kraus 1990, classification of the semistability defect at 2",
    },
)


@dataclass(frozen=True)
class InertiaImage:
    tag: str  # SL2F3, another tag from an external row, or Unknown
    details: str
    external: bool = False

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def load_inertia_table(path) -> list[dict]:
    with open(path) as fh:
        rows = json.load(fh)
    if not isinstance(rows, list):
        raise ValueError("inertia table must be a JSON array")
    out = []
    for row in rows:
        missing = {"v2_delta", "v2_c4", "group_tag"} - set(row)
        if missing:
            raise ValueError(f"inertia row {row} is missing {sorted(missing)}")
        if not row.get("source_citation"):
            raise ValueError(f"inertia row {row} has no source_citation")
        out.append(dict(row))
    return out


def inertia_image_at_2(ld: LocalData, extra_rows: Sequence[dict] = ()) -> InertiaImage:
    if ld.ell != 2 or not ld.minimal or ld.reduction_type != POT_GOOD:
        raise ValueError("inertia type at 2 needs a 2-minimal model with potentially good reduction")
    key = (ld.v_delta, ld.v_c4)
    for row in CERTIFIED_INERTIA_ROWS:
        if (row["v2_delta"], row["v2_c4"]) == key:
            return InertiaImage(row["group_tag"], f"certified row {key}: {row['source_citation']}")
    for row in extra_rows:
        if (row["v2_delta"], row["v2_c4"]) == key:
            return InertiaImage(
                row["group_tag"], f"external row {key}: {row['source_citation']}", external=True
            )
    return InertiaImage("Unknown", f"no row for (v2(Delta_m), v2(c4)) = {key}")

"""Finite subgroups of GL_2(F_p).

The copy of SL_2(F_3) inside SL_2(F_p), its normalizer and the determinant
square classes of that normalizer modulo scalars.  Matrices are stored as
reduced 4-tuples ``(a, b, c, d)`` (row-major) so that closures and scans
stay cheap; ``MatModP`` is the public wrapper.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .numutil import find_alpha_beta, is_prime, legendre, nonzero_alpha_beta_exists, primitive_root

Mat = tuple[int, int, int, int]

DEFAULT_CAP = 10**6
BRUTE_FORCE_PMAX = 31


class GroupTooLarge(RuntimeError):
    pass


class LemmaVerificationError(AssertionError):
    """A clause of the normalizer lemma failed; the message names the clause."""


# --- raw tuple arithmetic ----------------------------------------------------


def mul(x: Mat, y: Mat, p: int) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return ((a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p)


def det(x: Mat, p: int) -> int:
    return (x[0] * x[3] - x[1] * x[2]) % p


def inv(x: Mat, p: int) -> Mat:
    dt = det(x, p)
    if dt == 0:
        raise ZeroDivisionError(f"singular matrix {x} mod {p}")
    di = pow(dt, -1, p)
    a, b, c, d = x
    return (d * di % p, -b * di % p, -c * di % p, a * di % p)


def scalar(lam: int, p: int) -> Mat:
    lam %= p
    return (lam, 0, 0, lam)


def projective_normal_form(x: Mat, p: int) -> Mat:
    """Scale so the first nonzero entry is 1: the lexicographically smallest coset member."""
    lead = next(e for e in x if e)
    li = pow(lead, -1, p)
    return tuple(e * li % p for e in x)  # type: ignore[return-value]


@dataclass(frozen=True)
class MatModP:
    a: int
    b: int
    c: int
    d: int
    p: int

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, int(getattr(self, name)) % self.p)

    @classmethod
    def from_tuple(cls, t: Sequence[int], p: int) -> "MatModP":
        return cls(t[0], t[1], t[2], t[3], p)

    @classmethod
    def identity(cls, p: int) -> "MatModP":
        return cls(1, 0, 0, 1, p)

    @property
    def t(self) -> Mat:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> int:
        return det(self.t, self.p)

    def __matmul__(self, other: "MatModP") -> "MatModP":
        if other.p != self.p:
            raise ValueError("mixed moduli")
        return MatModP.from_tuple(mul(self.t, other.t, self.p), self.p)

    def inverse(self) -> "MatModP":
        return MatModP.from_tuple(inv(self.t, self.p), self.p)

    def __neg__(self):
        return MatModP(-self.a, -self.b, -self.c, -self.d, self.p)

    def scale(self, lam: int) -> "MatModP":
        return MatModP(lam * self.a, lam * self.b, lam * self.c, lam * self.d, self.p)

    def tolist(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]] mod {self.p}"


def _as_tuple(m) -> Mat:
    return m.t if isinstance(m, MatModP) else tuple(m)


@dataclass
class MatGroup:
    """A finite group of matrices mod p.

    With ``projective=True`` the elements are normal forms of cosets of the
    scalar subgroup and products are renormalized, i.e. this is a subgroup of
    PGL_2(F_p).
    """

    p: int
    keys: tuple[Mat, ...]
    generators: tuple[Mat, ...] = ()
    projective: bool = False
    labels: dict = field(default_factory=dict)

    def __post_init__(self):
        self._set = frozenset(self.keys)

    @property
    def order(self) -> int:
        return len(self.keys)

    def __len__(self):
        return len(self.keys)

    def __contains__(self, m) -> bool:
        t = _as_tuple(m)
        if self.projective:
            t = projective_normal_form(t, self.p)
        return t in self._set

    def __iter__(self):
        return iter(self.keys)

    @property
    def elements(self) -> list[MatModP]:
        return [MatModP.from_tuple(k, self.p) for k in self.keys]

    def same_elements(self, other: "MatGroup") -> bool:
        return self.p == other.p and self.projective == other.projective and self._set == other._set

    def mul(self, x: Mat, y: Mat) -> Mat:
        z = mul(x, y, self.p)
        return projective_normal_form(z, self.p) if self.projective else z

    def element_order(self, x: Mat) -> int:
        one = (1, 0, 0, 1)
        y, n = x, 1
        while y != one:
            y = self.mul(y, x)
            n += 1
        return n

    def order_profile(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_order(x) for x in self.keys).items()))

    def is_closed(self, subset: Iterable[Mat]) -> bool:
        s = set(subset)
        return all(self.mul(x, y) in s for x in s for y in s)

    def conjugate_set(self, g: Mat, subset: Iterable[Mat]) -> set[Mat]:
        gi = inv(g, self.p)
        return {self.mul(self.mul(g, h), gi) for h in subset}


def closure(
    generators: Iterable, p: int, cap: int = DEFAULT_CAP, projective: bool = False
) -> MatGroup:
    """Subgroup generated by ``generators`` (breadth-first, sorted output)."""
    gens = []
    for g in generators:
        t = tuple(x % p for x in _as_tuple(g))
        if det(t, p) == 0:
            raise ValueError(f"generator {t} is singular mod {p}")
        gens.append(projective_normal_form(t, p) if projective else t)
    one = (1, 0, 0, 1)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g, p)
                if projective:
                    y = projective_normal_form(y, p)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cap:
                        raise GroupTooLarge(f"closure exceeded the cap of {cap} elements")
        frontier = nxt
    return MatGroup(p, tuple(sorted(seen)), tuple(gens), projective)


def gl2_order(p: int) -> int:
    return (p * p - 1) * (p * p - p)


def _gl2_arrays(p: int):
    """All invertible matrices mod p as four int64 columns, in lexicographic order."""
    r = np.arange(p, dtype=np.int64)
    a, b, c, d = (x.ravel() for x in np.meshgrid(r, r, r, r, indexing="ij"))
    keep = (a * d - b * c) % p != 0
    return a[keep], b[keep], c[keep], d[keep]


def gl2_elements(p: int) -> list[Mat]:
    a, b, c, d = _gl2_arrays(p)
    return list(zip(a.tolist(), b.tolist(), c.tolist(), d.tolist()))


def _encode(a, b, c, d, p):
    return ((a * p + b) * p + c) * p + d


# --- SL_2(F_3) inside SL_2(F_p) -----------------------------------------------


def sl23_generators(p: int) -> dict[str, Mat]:
    """g1, g2, g3 from a solution of alpha^2 + beta^2 = -1, plus k = -g1 g2."""
    al, be = (x.value for x in find_alpha_beta(p))
    half = pow(2, -1, p)
    g1 = (0, p - 1, 1, 0)
    g2 = (al, be, be, -al % p)
    g3 = tuple(
        half * e % p for e in (al + be - 1, be - al - 1, be - al + 1, -al - be - 1)
    )
    k = tuple(-e % p for e in mul(g1, g2, p))
    return {"i": g1, "j": g2, "k": k, "u": g3}  # type: ignore[dict-item]


def build_sl23(p: int) -> MatGroup:
    if p < 3 or not is_prime(p):
        raise ValueError(f"expected an odd prime, got {p}")
    lab = sl23_generators(p)
    H = closure([lab["i"], lab["j"], lab["u"]], p)
    H.labels = lab
    if H.order != 24 or any(det(x, p) != 1 for x in H):
        raise AssertionError(f"<g1,g2,g3> mod {p} has order {H.order}, expected 24 inside SL_2")
    return H


def normalizer_elements(p: int) -> dict[str, Mat]:
    al, be = (x.value for x in find_alpha_beta(p))
    return {"n1": (1, p - 1, 1, 1), "n2": (al, (be - 1) % p, (be + 1) % p, -al % p)}


# --- identification ----------------------------------------------------------

PROFILE_Q8 = {1: 1, 2: 1, 4: 6}
PROFILE_SL23 = {1: 1, 2: 1, 3: 8, 4: 6, 6: 8}
PROFILE_S4 = {1: 1, 2: 9, 3: 8, 4: 6}
PROFILE_A4 = {1: 1, 2: 3, 3: 8}


@dataclass(frozen=True)
class GroupIsoClass:
    tag: str  # Quaternion8, SL2F3, S4, A4, Cyclic<n>, Other
    evidence: dict

    def __post_init__(self):
        assert sum(self.evidence.values()) >= 1


def unique_sylow2(group: MatGroup) -> Optional[list[Mat]]:
    """The Sylow 2-subgroup if it is unique, else None.

    It is unique exactly when the 2-power-order elements form a subgroup of
    the full 2-part order.
    """
    n = group.order
    two_part = n & -n
    twos = [x for x in group if (group.element_order(x) & (group.element_order(x) - 1)) == 0]
    if len(twos) == two_part and group.is_closed(twos):
        return twos
    return None


def identify(group: MatGroup) -> GroupIsoClass:
    if group.order > 10**4:
        raise ValueError("identify() is limited to groups of order <= 10^4")
    prof = group.order_profile()
    n = group.order
    if n in prof:
        return GroupIsoClass(f"Cyclic{n}", prof)
    if prof == PROFILE_Q8:
        return GroupIsoClass("Quaternion8", prof)
    if n == 24 and prof == PROFILE_S4:
        return GroupIsoClass("S4", prof)
    if n == 24 and prof == PROFILE_SL23:
        syl = unique_sylow2(group)
        if syl is not None:
            sub = MatGroup(group.p, tuple(sorted(syl)), projective=group.projective)
            if sub.order_profile() == PROFILE_Q8:
                return GroupIsoClass("SL2F3", prof)
    if n == 12 and prof == PROFILE_A4:
        return GroupIsoClass("A4", prof)
    return GroupIsoClass("Other", prof)


# --- centralizers and normalizers --------------------------------------------


def center_of_gl2(p: int) -> MatGroup:
    return MatGroup(p, tuple(sorted(scalar(l, p) for l in range(1, p))), (scalar(primitive_root(p), p),))


def _commutation_nullspace(gens: Sequence[Mat], p: int) -> list[list[int]]:
    """Basis of {X : X g = g X for all g} over F_p (X as a 4-vector)."""
    rows = []
    for (a, b, c, d) in gens:
        # X = (x, y, z, w); entries of X g - g X
        rows += [
            [0, c, -b, 0],
            [b, d - a, 0, -b],
            [-c, 0, a - d, c],
            [0, -c, b, 0],
        ]
    m = [[e % p for e in r] for r in rows]
    pivots, r = [], 0
    for col in range(4):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        iv = pow(m[r][col], -1, p)
        m[r] = [e * iv % p for e in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [(e - f * g) % p for e, g in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(4) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * 4
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc] % p
        basis.append(v)
    return basis


def centralizer(group: MatGroup, p: Optional[int] = None) -> MatGroup:
    p = group.p if p is None else p
    gens = list(group.generators) or list(group.keys)
    if p <= BRUTE_FORCE_PMAX:
        a, b, c, d = _gl2_arrays(p)
        ok = np.ones(a.shape, dtype=bool)
        for (e, f, g, h) in gens:
            ok &= ((a * e + b * g) % p == (e * a + f * c) % p)
            ok &= ((a * f + b * h) % p == (e * b + f * d) % p)
            ok &= ((c * e + d * g) % p == (g * a + h * c) % p)
            ok &= ((c * f + d * h) % p == (g * b + h * d) % p)
        els = list(zip(a[ok].tolist(), b[ok].tolist(), c[ok].tolist(), d[ok].tolist()))
    else:
        basis = _commutation_nullspace(gens, p)
        if len(basis) > 2:
            raise GroupTooLarge("centralizer too large to enumerate by linear algebra")
        els = []
        from itertools import product

        for coeffs in product(range(p), repeat=len(basis)):
            v = tuple(sum(k * bv[i] for k, bv in zip(coeffs, basis)) % p for i in range(4))
            if det(v, p):
                els.append(v)
    return MatGroup(p, tuple(sorted(els)))


def normalizer_bruteforce(H: MatGroup, p: Optional[int] = None) -> MatGroup:
    """Normalizer of H in GL_2(F_p) by scanning every invertible matrix."""
    p = H.p if p is None else p
    if p > BRUTE_FORCE_PMAX:
        raise ValueError(
            f"brute-force scan limited to p <= {BRUTE_FORCE_PMAX}; use normalizer_generated for p={p}"
        )
    a, b, c, d = _gl2_arrays(p)
    dinv = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)[(a * d - b * c) % p]
    ia, ib, ic, id_ = d * dinv % p, -b * dinv % p, -c * dinv % p, a * dinv % p
    codes = np.array([_encode(*h, p) for h in H.keys], dtype=np.int64)
    ok = np.ones(a.shape, dtype=bool)
    for (e, f, g, h) in H.generators or H.keys:
        # g * h
        m0, m1, m2, m3 = (a * e + b * g) % p, (a * f + b * h) % p, (c * e + d * g) % p, (c * f + d * h) % p
        # (g h) g^{-1}
        r0 = (m0 * ia + m1 * ic) % p
        r1 = (m0 * ib + m1 * id_) % p
        r2 = (m2 * ia + m3 * ic) % p
        r3 = (m2 * ib + m3 * id_) % p
        ok &= np.isin(_encode(r0, r1, r2, r3, p), codes)
    els = list(zip(a[ok].tolist(), b[ok].tolist(), c[ok].tolist(), d[ok].tolist()))
    return MatGroup(p, tuple(sorted(els)))


def normalizes(g: Mat, H: MatGroup) -> bool:
    gi = inv(g, H.p)
    return all(mul(mul(g, h, H.p), gi, H.p) in H for h in (H.generators or H.keys))


def normalizer_generated(H: MatGroup, p: Optional[int] = None) -> MatGroup:
    """Closure of H, n1, n2 and the scalars; every element is checked to normalize H."""
    p = H.p if p is None else p
    ns = normalizer_elements(p)
    gens = list(H.generators) + [ns["n1"], ns["n2"], scalar(primitive_root(p), p)]
    N = closure(gens, p)
    bad = next((x for x in N if not normalizes(x, H)), None)
    if bad is not None:
        raise AssertionError(f"{bad} mod {p} does not normalize H")
    N.labels = ns
    return N


def quotient_by_scalars(group: MatGroup) -> MatGroup:
    p = group.p
    keys = sorted({projective_normal_form(x, p) for x in group})
    gens = tuple(projective_normal_form(g, p) for g in group.generators)
    return MatGroup(p, tuple(keys), gens, projective=True)


# --- the lemma ---------------------------------------------------------------


@dataclass
class LemmaReport:
    p: int
    legendre_2_p: int
    quotient_order: int
    quotient_class: str
    det_n1: int
    det_n2: int
    square_class_counts: dict
    a4_check: Optional[dict]
    normalizer_order: int
    alpha_beta: tuple[int, int]
    nonzero_alpha_beta_exists: bool
    bruteforce_match: Optional[bool] = None

    def to_json(self, **kw) -> str:
        return json.dumps(asdict(self), **kw)


def verify_normalizer_lemma(p: int, brute_force: bool = False) -> LemmaReport:
    """Check the normalizer lemma at p; raises LemmaVerificationError naming the failed clause."""
    if p < 3 or not is_prime(p):
        raise ValueError(f"expected an odd prime, got {p}")
    H = build_sl23(p)
    if identify(H).tag != "SL2F3":
        raise LemmaVerificationError(f"H is not SL_2(F_3) at p={p}")
    N = normalizer_generated(H, p)
    match = None
    if brute_force:
        match = N.same_elements(normalizer_bruteforce(H, p))
        if not match:
            raise LemmaVerificationError(f"generated normalizer differs from the full scan at p={p}")

    C = centralizer(H, p)
    if not C.same_elements(center_of_gl2(p)):
        raise LemmaVerificationError(f"centralizer of H is not the centre at p={p}")

    Q = quotient_by_scalars(N)
    if N.order != (p - 1) * Q.order or Q.order != 24:
        raise LemmaVerificationError(f"|N/C| = {N.order / (p - 1)} != 24 at p={p}")
    qclass = identify(Q).tag
    if qclass != "S4":
        raise LemmaVerificationError(f"N/C identified as {qclass}, not S4, at p={p}")

    ns = N.labels
    d1, d2 = det(ns["n1"], p), det(ns["n2"], p)
    if d1 != 2 % p or d2 != 2 % p:
        raise LemmaVerificationError(f"det(n1)={d1}, det(n2)={d2}, expected 2 mod {p}")

    counts = Counter("square" if legendre(det(x, p), p) == 1 else "nonsquare" for x in N)
    counts = {"square": counts["square"], "nonsquare": counts["nonsquare"]}
    l2 = legendre(2, p)
    a4 = None
    if l2 == 1:
        if counts["nonsquare"]:
            raise LemmaVerificationError(f"clause (a): nonsquare determinant in N at p={p}")
    else:
        sq = [x for x in Q if legendre(det(x, p), p) == 1]
        closed = Q.is_closed(sq)
        sub = MatGroup(p, tuple(sorted(sq)), projective=True)
        tag = identify(sub).tag if closed else "not a subgroup"
        a4 = {
            "square_det_count": counts["square"],
            "index": N.order // counts["square"] if counts["square"] else None,
            "image_order": len(sq),
            "image_closed": closed,
            "image_class": tag,
        }
        if counts["square"] * 2 != N.order or not closed or tag != "A4":
            raise LemmaVerificationError(f"clause (b): square-determinant part is not A4 at p={p}: {a4}")

    al, be = (x.value for x in find_alpha_beta(p))
    return LemmaReport(
        p=p,
        legendre_2_p=l2,
        quotient_order=Q.order,
        quotient_class=qclass,
        det_n1=d1,
        det_n2=d2,
        square_class_counts=counts,
        a4_check=a4,
        normalizer_order=N.order,
        alpha_beta=(al, be),
        nonzero_alpha_beta_exists=nonzero_alpha_beta_exists(p),
        bruteforce_match=match,
    )

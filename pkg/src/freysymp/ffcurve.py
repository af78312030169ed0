"""Elliptic curves over small finite fields, characteristic 2 included.

Group law on long Weierstrass models, point enumeration, rational torsion
bases, the Weil pairing by Miller's algorithm, and the 24 automorphisms of
the supersingular curve y^2 + y = x^3 over F_4 acting on its 3-torsion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from .matgroup import MatModP
from .numutil import FqElem, FqField

MAX_ENUMERATION = 10**6
PAIRING_RETRIES = 16


class DegenerateEvaluation(ArithmeticError):
    pass


class TorsionNotRational(ValueError):
    pass


class FFCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a finite field."""

    def __init__(self, field: FqField, ainvs):
        if len(ainvs) != 5:
            raise ValueError("need five a-invariants")
        self.field = field
        self.ainvs = tuple(field(a) for a in ainvs)
        if not self.discriminant():
            raise ValueError(f"singular curve {self.ainvs} over {field}")

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self) -> FqElem:
        b2, b4, b6, b8 = self.b_invariants()
        return -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def __eq__(self, other):
        return isinstance(other, FFCurve) and self.field is other.field and self.ainvs == other.ainvs

    def __hash__(self):
        return hash(self.ainvs)

    def __repr__(self):
        return f"FFCurve({list(self.ainvs)} over {self.field})"

    def contains(self, x: FqElem, y: FqElem) -> bool:
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6

    @property
    def infinity(self) -> "FFPoint":
        return FFPoint(self, None, None)

    def point(self, x, y) -> "FFPoint":
        return FFPoint(self, self.field(x), self.field(y))

    @cached_property
    def points(self) -> tuple["FFPoint", ...]:
        return tuple(self.enumerate_points())

    def enumerate_points(self) -> list["FFPoint"]:
        """All points, infinity first, then sorted by (x, y) coefficient tuples."""
        F = self.field
        if F.order > MAX_ENUMERATION:
            raise ValueError(f"field of size {F.order} too large to enumerate")
        a1, a2, a3, a4, a6 = self.ainvs
        elems = F.elements()
        out = [self.infinity]
        if F.p == 2:
            artin = {}
            for z in elems:
                artin.setdefault(z * z + z, []).append(z)
            half = F.order // 2
            for x in elems:
                h = a1 * x + a3
                f = x * x * x + a2 * x * x + a4 * x + a6
                if not h:
                    ys = [f**half]
                else:
                    ys = [h * z for z in artin.get(f / (h * h), [])]
                out += [FFPoint(self, x, y) for y in ys]
        else:
            roots = {}
            for y in elems:
                roots.setdefault(y * y, []).append(y)
            inv2 = F(2).inverse()
            for x in elems:
                h = a1 * x + a3
                f = x * x * x + a2 * x * x + a4 * x + a6
                ys = {(r - h) * inv2 for r in roots.get(h * h + 4 * f, [])}
                out += [FFPoint(self, x, y) for y in ys]
        out[1:] = sorted(out[1:], key=lambda P: (P.x.coeffs, P.y.coeffs))
        return out


@dataclass(frozen=True)
class FFPoint:
    curve: FFCurve
    x: Optional[FqElem]
    y: Optional[FqElem]

    def __post_init__(self):
        if (self.x is None) != (self.y is None):
            raise ValueError("half-specified point")
        if self.x is not None and not self.curve.contains(self.x, self.y):
            raise ValueError(f"({self.x}, {self.y}) is not on {self.curve}")

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other):
        return (
            isinstance(other, FFPoint)
            and self.curve == other.curve
            and self.x == other.x
            and self.y == other.y
        )

    def __hash__(self):
        return hash((self.x, self.y))

    def __repr__(self):
        return "O" if self.is_infinity else f"({self.x}, {self.y})"

    def __neg__(self) -> "FFPoint":
        if self.is_infinity:
            return self
        a1, _, a3, _, _ = self.curve.ainvs
        return FFPoint(self.curve, self.x, -self.y - a1 * self.x - a3)

    def _check(self, other: "FFPoint"):
        if self.curve != other.curve:
            raise ValueError("points on different curves")

    def __add__(self, other: "FFPoint") -> "FFPoint":
        self._check(other)
        if self.is_infinity:
            return other
        if other.is_infinity:
            return self
        lam = _slope(self, other)
        if lam is None:
            return self.curve.infinity
        a1, a2, a3, _, _ = self.curve.ainvs
        x3 = lam * lam + a1 * lam - a2 - self.x - other.x
        y3 = -(lam + a1) * x3 - (self.y - lam * self.x) - a3
        return FFPoint(self.curve, x3, y3)

    def __sub__(self, other: "FFPoint") -> "FFPoint":
        return self + (-other)

    def __rmul__(self, n: int) -> "FFPoint":
        return self.scalar_mul(n)

    def scalar_mul(self, n: int) -> "FFPoint":
        if n < 0:
            return (-self).scalar_mul(-n)
        result, base = self.curve.infinity, self
        while n:
            if n & 1:
                result = result + base
            base = base + base
            n >>= 1
        return result

    def order(self) -> int:
        n, Q = 1, self
        while not Q.is_infinity:
            Q = Q + self
            n += 1
        return n


def _slope(P: FFPoint, Q: FFPoint) -> Optional[FqElem]:
    """Slope of the line through P and Q (tangent if equal); None if the line is vertical."""
    a1, a2, a3, a4, _ = P.curve.ainvs
    if P.x == Q.x:
        if P.y + Q.y + a1 * Q.x + a3 == 0:  # Q = -P
            return None
        den = 2 * P.y + a1 * P.x + a3
        return (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / den
    return (Q.y - P.y) / (Q.x - P.x)


def add_points(P: FFPoint, Q: FFPoint) -> FFPoint:
    return P + Q


def scalar_mul(n: int, P: FFPoint) -> FFPoint:
    return P.scalar_mul(n)


# --- Miller / Weil -----------------------------------------------------------


def _line_ratio(T: FFPoint, U: FFPoint, R: FFPoint) -> tuple[FqElem, FFPoint]:
    """(line through T, U) / (vertical at T + U), evaluated at R; returns (value, T + U)."""
    if R.is_infinity:
        raise DegenerateEvaluation("evaluation at infinity")
    lam = _slope(T, U)
    S = T + U
    if lam is None:
        num = R.x - T.x
        den = R.x.field(1)
    else:
        num = R.y - T.y - lam * (R.x - T.x)
        den = R.x - S.x
    if not num or not den:
        raise DegenerateEvaluation(f"line through {T}, {U} vanishes at {R}")
    return num / den, S


def miller(P: FFPoint, n: int, R: FFPoint) -> FqElem:
    """f_{n,P}(R) for the function with divisor n(P) - ([n]P) - (n-1)(O)."""
    f = P.curve.field(1)
    T = P
    for bit in bin(n)[3:]:
        v, T = _line_ratio(T, T, R)
        f = f * f * v
        if bit == "1":
            v, T = _line_ratio(T, P, R)
            f = f * v
    return f


def _subgroup(P: FFPoint, n: int) -> set[FFPoint]:
    return {k * P for k in range(n)}


def weil_pairing(P: FFPoint, Q: FFPoint, n: int) -> FqElem:
    """e_n(P, Q) with the shifted divisor (Q + S) - (S).

    Offsets S come from the point enumeration in order, skipping the
    obviously degenerate ones; at most PAIRING_RETRIES are attempted.
    """
    P._check(Q)
    F = P.curve.field
    if not (n * P).is_infinity or not (n * Q).is_infinity:
        raise ValueError(f"inputs are not {n}-torsion")
    if P.is_infinity or Q.is_infinity:
        return F(1)
    gp, gq = _subgroup(P, n), _subgroup(Q, n)
    candidates = [
        S for S in P.curve.points
        if S not in gp and S + Q not in gp and S not in gq and P - S not in gq
    ]
    last = None
    for S in candidates[:PAIRING_RETRIES]:
        try:
            num = miller(P, n, Q + S) / miller(P, n, S)
            den = miller(Q, n, P - S) / miller(Q, n, -S)
        except DegenerateEvaluation as exc:
            last = exc
            continue
        return num / den
    raise DegenerateEvaluation(f"no usable offset point among {len(candidates)} candidates ({last})")


def nth_roots_of_unity(F: FqField, n: int) -> list[FqElem]:
    return [z for z in F.elements() if z and z**n == 1]


@dataclass(frozen=True)
class TorsionBasis:
    P: FFPoint
    Q: FFPoint
    p: int
    zeta: FqElem

    def __post_init__(self):
        assert (self.p * self.P).is_infinity and (self.p * self.Q).is_infinity
        assert self.zeta != 1 and self.zeta**self.p == 1

    @cached_property
    def _table(self) -> dict[FFPoint, tuple[int, int]]:
        return {
            a * self.P + b * self.Q: (a, b) for a in range(self.p) for b in range(self.p)
        }

    def coordinates(self, X: FFPoint) -> tuple[int, int]:
        """(a, b) with X = aP + bQ."""
        try:
            return self._table[X]
        except KeyError:
            raise ValueError(f"{X} is not in the span of the basis") from None

    def combine(self, a: int, b: int) -> FFPoint:
        return a * self.P + b * self.Q

    def apply(self, M: MatModP) -> tuple[FFPoint, FFPoint]:
        """Images of P and Q under the endomorphism whose matrix (columns) is M."""
        return self.combine(M.a, M.c), self.combine(M.b, M.d)

    def dlog(self, z: FqElem) -> int:
        """k in [0, p) with z = zeta^k."""
        w = self.P.curve.field(1)
        for k in range(self.p):
            if w == z:
                return k
            w = w * self.zeta
        raise ValueError(f"{z} is not a power of zeta")


def torsion_basis(curve: FFCurve, p: int) -> TorsionBasis:
    """Deterministic basis of E[p] whose pairing is the smallest primitive p-th root."""
    pts = curve.points
    if len(pts) % (p * p):
        raise TorsionNotRational(
            f"#E = {len(pts)} is not divisible by {p * p}; extend the base field"
        )
    tors = [P for P in pts if (p * P).is_infinity]
    if len(tors) != p * p:
        raise TorsionNotRational(
            f"only {len(tors)} points of {p}-torsion are rational; extend the base field"
        )
    for P, Q in itertools.product(tors[1:], repeat=2):
        z = weil_pairing(P, Q, p)
        if z != 1:
            k = min(range(1, p), key=lambda k: (z**k).coeffs)
            return TorsionBasis(P, k * Q, p, z**k)
    raise AssertionError("Weil pairing is degenerate on a full torsion group")


# --- automorphisms in characteristic 2 ---------------------------------------


def _transformed_ainvs(ainvs, u, r, s, t):
    a1, a2, a3, a4, a6 = ainvs
    return (
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u**2,
        (a3 + r * a1 + 2 * t) / u**3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u**4,
        (a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1) / u**6,
    )


@dataclass(frozen=True)
class CurveAutomorphism:
    """(x, y) -> (u^2 x + s^2, u^3 y + u^2 s x + t) on a characteristic-2 curve."""

    curve: FFCurve
    u: FqElem
    s: FqElem
    t: FqElem

    def __post_init__(self):
        if not self.u:
            raise ValueError("u must be nonzero")
        new = _transformed_ainvs(self.curve.ainvs, self.u, self.s * self.s, self.s, self.t)
        if tuple(new) != self.curve.ainvs:
            raise ValueError(f"({self.u}, {self.s}, {self.t}) does not preserve the curve")

    def __call__(self, X: FFPoint) -> FFPoint:
        if X.is_infinity:
            return X
        u, s, t = self.u, self.s, self.t
        return FFPoint(self.curve, u * u * X.x + s * s, u**3 * X.y + u * u * s * X.x + t)

    def compose(self, other: "CurveAutomorphism") -> "CurveAutomorphism":
        """self after other."""
        u, s, t = self.u, self.s, self.t
        return CurveAutomorphism(
            self.curve, u * other.u, u * other.s + s, u**3 * other.t + u * u * s * other.s**2 + t
        )

    def order(self) -> int:
        n, g = 1, self
        while not g.is_identity():
            g = g.compose(self)
            n += 1
        return n

    def is_identity(self) -> bool:
        return self.u == 1 and not self.s and not self.t

    def key(self):
        return (self.u.coeffs, self.s.coeffs, self.t.coeffs)

    def __repr__(self):
        return f"Aut(u={self.u}, s={self.s}, t={self.t})"


def f4() -> FqField:
    return FqField(2, 2)


def supersingular_f4_curve() -> FFCurve:
    """y^2 + y = x^3 over F_4."""
    return FFCurve(f4(), (0, 0, 1, 0, 0))


def automorphisms_f4() -> list[CurveAutomorphism]:
    E = supersingular_f4_curve()
    F = E.field
    out = []
    for u, s, t in itertools.product(F.elements(), repeat=3):
        if not u:
            continue
        try:
            out.append(CurveAutomorphism(E, u, s, t))
        except ValueError:
            pass
    if len(out) != 24:
        raise AssertionError(f"found {len(out)} automorphisms, expected 24")
    return out


def order3_translations(omega: Optional[FqElem] = None) -> list[CurveAutomorphism]:
    """T(omega^k) : (x, y) -> (omega^(2k) x, y), k = 0, 1, 2."""
    E = supersingular_f4_curve()
    w = E.field.gen() if omega is None else omega
    zero = E.field(0)
    return [CurveAutomorphism(E, w**k, zero, zero) for k in range(3)]


def psi_map(aut: CurveAutomorphism, basis: TorsionBasis) -> MatModP:
    """Matrix of the automorphism on E[p] in the given basis (images as columns)."""
    a, c = basis.coordinates(aut(basis.P))
    b, d = basis.coordinates(aut(basis.Q))
    return MatModP(a, b, c, d, basis.p)

"""Exact integer, modular and small finite-field arithmetic.

Everything here is pure and immutable.  ``FpElem`` and ``FqElem`` are thin
value types; the heavier modules (matrix groups, curves) work on plain
reduced ints where speed matters and only wrap results at the boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from math import gcd
from typing import Iterable, Mapping, Optional

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3 * 10**24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    if hi < 2:
        return []
    sieve = bytearray([1]) * (hi + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, int(hi**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(max(lo, 2), hi + 1) if sieve[i]]


def _require_odd_prime(p: int) -> None:
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"expected an odd prime, got {p}")


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p."""
    _require_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def valuation(n: int, ell: int) -> int:
    """Largest e with ell**e dividing n.  n = 0 is rejected (its valuation is infinite)."""
    if n == 0:
        raise ValueError("valuation of 0 is infinite")
    if ell < 2:
        raise ValueError(f"bad prime {ell}")
    n = abs(n)
    e = 0
    while n % ell == 0:
        n //= ell
        e += 1
    return e


def valuation_or_none(n: int, ell: int) -> Optional[int]:
    """Like ``valuation`` but maps 0 to None (the 'infinite' marker)."""
    return None if n == 0 else valuation(n, ell)


def smallest_nonsquare(p: int) -> int:
    _require_odd_prime(p)
    return next(r for r in range(2, p) if legendre(r, p) == -1)


def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^*."""
    if p == 2:
        return 1
    phi = p - 1
    qs = _prime_factors(phi)
    for g in range(2, p):
        if all(pow(g, phi // q, p) != 1 for q in qs):
            return g
    raise AssertionError("unreachable for prime p")


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(n: int) -> int:
    result = n
    for q in _prime_factors(n):
        result -= result // q
    return result


@dataclass(frozen=True)
class FpElem:
    """Element of F_p; the value is always reduced into [0, p)."""

    value: int
    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2**31) or not is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not a prime below 2**31")
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FpElem(pow(self.value, n, self.p), self.p)

    def inverse(self) -> "FpElem":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * FpElem(o, self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, int):
            return self.value == other % self.p
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def sqrt_mod(a: FpElem) -> Optional[FpElem]:
    """Smallest square root of a in F_p, or None when a is a nonsquare."""
    p, n = a.p, a.value
    if n == 0:
        return FpElem(0, p)
    if p == 2:
        return FpElem(n, p)
    if legendre(n, p) != 1:
        return None
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonsquare(p)
    m, c, t, r = s, pow(z, q, p), pow(n, q, p), pow(n, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return FpElem(min(r, p - r), p)


def find_alpha_beta(p: int) -> tuple[FpElem, FpElem]:
    """Solve alpha^2 + beta^2 = -1 in F_p.

    Smallest alpha admitting a solution, then smallest beta.  A zero
    component is allowed: mod 5 there is no solution with both nonzero.
    """
    _require_odd_prime(p)
    for alpha in range(p):
        beta = sqrt_mod(FpElem(-1 - alpha * alpha, p))
        if beta is not None:
            return FpElem(alpha, p), beta
    raise AssertionError("alpha^2 + beta^2 = -1 always has a solution mod an odd prime")


def nonzero_alpha_beta_exists(p: int) -> bool:
    return any(
        legendre(-1 - a * a, p) == 1 for a in range(1, p)
    )


def crt_classes(
    conditions: Mapping[int, Iterable[int]] | Iterable[tuple[int, Iterable[int]]],
    modulus: Optional[int] = None,
) -> set[int]:
    """Lift every (modulus, residues) condition to classes mod a common modulus.

    The common modulus defaults to the lcm of the condition moduli; an
    explicit one must be a multiple of each.  The result is the union of the
    lifts.
    """
    items = list(conditions.items()) if isinstance(conditions, Mapping) else list(conditions)
    if not items:
        return set()
    lcm = reduce(lambda x, y: x * y // gcd(x, y), (m for m, _ in items), 1)
    M = lcm if modulus is None else modulus
    if M % lcm:
        raise ValueError(f"target modulus {M} is not a multiple of {lcm}")
    out: set[int] = set()
    for m, residues in items:
        for r in residues:
            out.update(range(r % m, M, m))
    return out


# --- F_{p^k} -----------------------------------------------------------------


def _poly_divmod_mod(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num / den over F_p; coefficients low -> high, den monic."""
    num = num[:]
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    return [c % p for c in num[:dd]]


def _monic_polys(p: int, deg: int):
    # coefficients low -> high; iterate so the high-to-low tuple is increasing
    for tail in itertools.product(range(p), repeat=deg):
        yield list(reversed(tail)) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    k = len(poly) - 1
    if k <= 1:
        return k == 1
    for d in range(1, k // 2 + 1):
        for f in _monic_polys(p, d):
            if not any(_poly_divmod_mod(poly, f, p)):
                return False
    return True


@lru_cache(maxsize=None)
def defining_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree k over F_p.

    Ordering compares coefficients from x^(k-1) down to the constant term.
    """
    for f in _monic_polys(p, k):
        if is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("irreducible polynomials exist in every degree")


class FqField:
    """The field F_{p^k} = F_p[x]/(f) for the fixed defining polynomial f."""

    _cache: dict = {}

    def __new__(cls, p: int, k: int = 1):
        key = (p, k)
        if key not in cls._cache:
            if not is_prime(p) or p >= 2**31:
                raise ValueError(f"{p} is not a prime below 2**31")
            if not 1 <= k <= 6:
                raise ValueError("only extension degrees 1..6 are supported")
            self = super().__new__(cls)
            self.p, self.k = p, k
            self.modulus = defining_polynomial(p, k)
            self.order = p**k
            cls._cache[key] = self
        return cls._cache[key]

    def __reduce__(self):
        return (FqField, (self.p, self.k))

    def __call__(self, value) -> "FqElem":
        if isinstance(value, FqElem):
            if value.field is not self:
                raise ValueError("element of another field")
            return value
        if isinstance(value, int):
            return FqElem(self, (value % self.p,) + (0,) * (self.k - 1))
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.k:
            raise ValueError("too many coefficients")
        return FqElem(self, coeffs + (0,) * (self.k - len(coeffs)))

    def gen(self) -> "FqElem":
        """The class of x."""
        if self.k == 1:
            return self(0)  # not meaningful for prime fields
        return self((0, 1))

    def elements(self) -> list["FqElem"]:
        """All field elements, ordered by coefficient tuple (constant term first)."""
        return [FqElem(self, c) for c in itertools.product(range(self.p), repeat=self.k)]

    def __repr__(self):
        return f"GF({self.p}^{self.k})"


@dataclass(frozen=True)
class FqElem:
    field: FqField = field(compare=False, hash=False)
    coeffs: tuple[int, ...]

    def _other(self, o) -> "FqElem":
        if isinstance(o, FqElem):
            if o.field is not self.field:
                raise ValueError("mixed fields")
            return o
        if isinstance(o, (int, FpElem)):
            return self.field(int(o))
        raise TypeError(type(o))

    def __add__(self, o):
        o = self._other(o)
        p = self.field.p
        return FqElem(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FqElem(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, o):
        return self + (-self._other(o))

    def __rsub__(self, o):
        return self._other(o) - self

    def __mul__(self, o):
        o = self._other(o)
        F = self.field
        p, k = F.p, F.k
        if k == 1:
            return FqElem(F, (self.coeffs[0] * o.coeffs[0] % p,))
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        return FqElem(F, tuple(_poly_divmod_mod(prod, list(F.modulus), p)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = self.field(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "FqElem":
        if not self:
            raise ZeroDivisionError("0 has no inverse")
        return self ** (self.field.order - 2)

    def __truediv__(self, o):
        return self * self._other(o).inverse()

    def __rtruediv__(self, o):
        return self._other(o) * self.inverse()

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, o):
        if isinstance(o, int):
            return self.coeffs == self.field(o).coeffs
        if isinstance(o, FqElem):
            return self.field is o.field and self.coeffs == o.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __lt__(self, o: "FqElem"):
        return self.coeffs < o.coeffs

    def multiplicative_order(self) -> int:
        if not self:
            raise ValueError("0 has no multiplicative order")
        n = self.field.order - 1
        order = n
        for q in _prime_factors(n):
            while order % q == 0 and self ** (order // q) == 1:
                order //= q
        return order

    def __repr__(self):
        if self.field.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(f"{c}" if not mon else (mon if c == 1 else f"{c}*{mon}"))
        return " + ".join(reversed(terms)) or "0"

"""Finite fields GF(p^e) with elements encoded as integers 0..q-1.

For e > 1 the integer ``a`` encodes the polynomial whose coefficients are the
base-p digits of ``a`` (lowest degree first), reduced modulo a fixed monic
irreducible polynomial. Multiplication goes through log/antilog tables.
"""

from __future__ import annotations

import itertools

from . import CapExceeded

FIELD_ORDER_CAP = 2**16


class NotPrime(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _polymod(a, f, p):
    """Remainder of coefficient list ``a`` modulo monic ``f`` over GF(p)."""
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    a = [c % p for c in a[:df]]
    return a + [0] * (df - len(a))


def is_irreducible(f, p) -> bool:
    """Monic ``f`` (coefficients lowest degree first) has no factor of degree 1..deg/2."""
    e = len(f) - 1
    if e < 1 or f[-1] % p != 1:
        return False
    for dg in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=dg):
            g = list(tail) + [1]
            if not any(_polymod(f, g, p)):
                return False
    return True


def default_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible polynomial of degree ``e``."""
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        f = tuple(reversed(tail)) + (1,)
        if f[0] != 0 and is_irreducible(f, p):
            return f
    raise AssertionError("an irreducible polynomial exists for every degree")


class FieldSpec:
    def __init__(self, p: int, e: int = 1, modulus=None, cap: int = FIELD_ORDER_CAP):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if e < 1:
            raise ValueError("extension degree must be >= 1")
        q = p**e
        if q > cap:
            raise CapExceeded("field order", q, cap)
        self.p, self.e, self.q = p, e, q
        if modulus is None:
            modulus = default_modulus(p, e)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or (e > 1 and not is_irreducible(modulus, p)):
            raise ValueError(f"modulus {modulus} is not a monic irreducible of degree {e}")
        self.modulus = modulus
        if e > 1:
            self._build_tables()

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.e, self.modulus) == (other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __repr__(self):
        return f"GF({self.q})" if self.e == 1 else f"GF({self.p}^{self.e}, modulus={self.modulus})"

    def __reduce__(self):
        return (FieldSpec, (self.p, self.e, self.modulus))

    # coefficient-vector conversions for extension fields
    def to_poly(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def from_poly(self, coeffs) -> int:
        a = 0
        for c in reversed(list(coeffs)):
            a = a * self.p + c % self.p
        return a

    def _poly_mul(self, a: int, b: int) -> int:
        pa, pb = self.to_poly(a), self.to_poly(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(pa):
            if x:
                for j, y in enumerate(pb):
                    prod[i + j] += x * y
        return self.from_poly(_polymod(prod, self.modulus, self.p))

    def _build_tables(self):
        q = self.q
        for g in range(2, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._poly_mul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                break
        else:
            raise AssertionError("multiplicative group of a finite field is cyclic")
        self._exp = exp + exp
        self._log = [0] * q
        for i, x in enumerate(exp):
            self._log[x] = i

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.q)

    def nonzero(self) -> range:
        return range(1, self.q)

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        return self.from_poly(x + y for x, y in zip(self.to_poly(a), self.to_poly(b)))

    def neg(self, a: int) -> int:
        if self.e == 1:
            return -a % self.p
        return self.from_poly(-x for x in self.to_poly(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self}")
        if self.e == 1:
            return pow(a, -1, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def from_int(self, n: int) -> int:
        """Image of the integer ``n`` in the prime subfield."""
        return n % self.p


def field_make(p: int, e: int = 1, modulus=None, cap: int = FIELD_ORDER_CAP) -> FieldSpec:
    return FieldSpec(p, e, modulus, cap)


def field_of_order(q: int, cap: int = FIELD_ORDER_CAP) -> FieldSpec:
    """GF(q) for a prime power ``q``."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            break
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    if r != 1 or not is_prime(p):
        raise NotPrime(f"{q} is not a prime power")
    return FieldSpec(p, e, cap=cap)

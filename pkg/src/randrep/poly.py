"""Sparse multivariate polynomials with exact integer or rational coefficients.

Text format: a sum of terms ``c*x1^a1*x2^a2``, variables numbered from 1,
e.g. ``3*x1^2*x2 - x1 + 5``.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

ZERO_DEGREE = -math.inf  # degree of the zero polynomial


class IntPolynomial:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, Rational] | None = None):
        self.n = int(n)
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(int(a) for a in exps)
            if len(exps) != self.n:
                raise ValueError(f"exponent vector {exps} does not have {self.n} entries")
            if c:
                c = _normalize(c)
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def const(cls, n: int, c) -> "IntPolynomial":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int, power: int = 1) -> "IntPolynomial":
        """The monomial x_i^power, with ``i`` counted from 0."""
        exps = [0] * n
        exps[i] = power
        return cls(n, {tuple(exps): 1})

    @classmethod
    def parse(cls, text: str, n: int) -> "IntPolynomial":
        return parse_polynomial(text, n)

    def _coerce(self, other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            if other.n != self.n:
                raise ValueError(f"variable counts differ: {self.n} vs {other.n}")
            return other
        if isinstance(other, Rational):
            return IntPolynomial.const(self.n, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return IntPolynomial(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return IntPolynomial(self.n, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = IntPolynomial.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, IntPolynomial) else other
        if other is NotImplemented:
            return False
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"IntPolynomial({self.n}, {format_polynomial(self)!r})"

    def __str__(self):
        return format_polynomial(self)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Total degree; ``ZERO_DEGREE`` (-inf) for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=ZERO_DEGREE)

    def height(self):
        """Largest absolute value of a coefficient (0 for the zero polynomial)."""
        return max((abs(c) for c in self.terms.values()), default=0)

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0)

    def sorted_terms(self):
        """Terms in graded lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True)

    def evaluate(self, point: Sequence, modulus: int | None = None):
        total = 0
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v = v * (pow(x, a, modulus) if modulus else x**a)
            total += v
        if modulus is not None:
            if isinstance(total, Fraction):
                total = total.numerator * pow(total.denominator, -1, modulus)
            total %= modulus
        return total

    def substitute(self, mapping: Mapping[int, "IntPolynomial"], n_out: int | None = None) -> "IntPolynomial":
        """Replace x_i (0-based) by ``mapping[i]``; unmapped variables stay put when n_out == n."""
        n_out = self.n if n_out is None else n_out
        result = IntPolynomial(n_out)
        for e, c in self.terms.items():
            term = IntPolynomial.const(n_out, c)
            for i, a in enumerate(e):
                if a:
                    if i in mapping:
                        term = term * mapping[i] ** a
                    elif n_out == self.n:
                        term = term * IntPolynomial.var(n_out, i, a)
                    else:
                        raise ValueError(f"no substitution for x{i + 1}")
            result = result + term
        return result

    def map_coefficients(self, f) -> "IntPolynomial":
        return IntPolynomial(self.n, {e: f(c) for e, c in self.terms.items()})

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())


def _normalize(c):
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, bool) or not isinstance(c, Rational):
        raise TypeError(f"coefficient {c!r} is not exact")
    return int(c) if isinstance(c, int) else Fraction(c)


def monomials(n: int, max_degree: int) -> list[tuple]:
    """Exponent vectors of total degree <= max_degree, graded lex ascending."""
    out = []
    for deg in range(max_degree + 1):
        block = []
        for bars in itertools.combinations(range(deg + n - 1), n - 1):
            cuts = (-1,) + bars + (deg + n - 1,)
            block.append(tuple(cuts[i + 1] - cuts[i] - 1 for i in range(n)))
        out += sorted(block)
    return out


def _fmt_coef(c):
    return str(c) if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: IntPolynomial) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e, c in p.sorted_terms():
        mono = "*".join(f"x{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(e) if a)
        mag = abs(c)
        if not mono:
            body = _fmt_coef(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coef(mag)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


_TERM = re.compile(r"([+-]?)([^+-]+)")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_polynomial(text: str, n: int) -> IntPolynomial:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    # split at +/- that are not part of an exponent
    pos = 0
    terms: dict = {}
    for match in _TERM.finditer(s):
        if match.start() != pos:
            raise ValueError(f"cannot parse polynomial {text!r}")
        pos = match.end()
        sign, body = match.groups()
        coef: Rational = -1 if sign == "-" else 1
        exps = [0] * n
        for factor in body.split("*"):
            if not factor:
                raise ValueError(f"empty factor in {text!r}")
            fm = _FACTOR.match(factor)
            if fm:
                i = int(fm.group(1))
                if not 1 <= i <= n:
                    raise ValueError(f"variable x{i} outside x1..x{n}")
                exps[i - 1] += int(fm.group(2) or 1)
            else:
                try:
                    coef = coef * Fraction(factor)
                except ValueError:
                    raise ValueError(f"bad factor {factor!r} in {text!r}") from None
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + coef
    if pos != len(s):
        raise ValueError(f"cannot parse polynomial {text!r}")
    return IntPolynomial(n, terms)


def common_arity(polys: Iterable[IntPolynomial]) -> int:
    ns = {p.n for p in polys}
    if len(ns) != 1:
        raise ValueError(f"polynomials disagree on the number of variables: {sorted(ns)}")
    return ns.pop()

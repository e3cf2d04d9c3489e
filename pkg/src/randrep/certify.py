"""Nullstellensatz certificates and the polynomial encoding of word relations.

A certificate for ``r`` against ``p_1..p_t`` is a list of integer
polynomials ``q_i`` with positive integers ``b`` and ``nu`` such that
``sum p_i q_i == b * r**nu``. Finding one with ``deg q_i <= D`` is a linear
problem in the coefficients of the ``q_i``, which is what ``find_certificate``
sets up and solves exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bounds import brownawell_degree_cap
from .linsolve import solve_integer_system
from .poly import IntPolynomial, common_arity, monomials

DEFAULT_NU_MAX = 8


class NotFound(LookupError):
    """No certificate within the degree cap and nu_max.

    This is inconclusive: it does not show that r lies outside the radical.
    """


class DimensionMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    qs: tuple
    b: int
    nu: int
    degree: int  # the degree bound the q_i were searched under

    def as_dict(self):
        return {"qs": [str(q) for q in self.qs], "b": self.b, "nu": self.nu, "degree": self.degree}


# -- encoding of GL_k^m and of words -------------------------------------------

def variable_index(m: int, k: int, gen: int, inverse: bool, row: int, col: int) -> int:
    """0-based variable for entry (row, col) of A_gen (or of its formal inverse)."""
    return (gen - 1) * 2 * k * k + (k * k if inverse else 0) + row * k + col


def _symbolic_matrix(m, k, gen, inverse):
    n = 2 * m * k * k
    return [[IntPolynomial.var(n, variable_index(m, k, gen, inverse, r, c)) for c in range(k)]
            for r in range(k)]


def _matmul(X, Y, n):
    k = len(X)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            acc = IntPolynomial(n)
            for s in range(k):
                acc = acc + X[i][s] * Y[s][j]
            row.append(acc)
        out.append(row)
    return out


def _identity_minus(M, n):
    k = len(M)
    return [M[i][j] - (1 if i == j else 0) for i in range(k) for j in range(k)]


def variety_polynomials(m: int, k: int) -> list[IntPolynomial]:
    """The m k^2 quadratics A_i * Abar_i - I that cut GL_k^m out of affine space."""
    n = 2 * m * k * k
    out = []
    for g in range(1, m + 1):
        out += _identity_minus(_matmul(_symbolic_matrix(m, k, g, False), _symbolic_matrix(m, k, g, True), n), n)
    return out


def relation_polynomials(w, m: int, k: int) -> list[IntPolynomial]:
    """Entries of w(A, Abar) - I, with Abar_i standing in for A_i^-1."""
    letters = tuple(w)
    for a in letters:
        if a == 0 or abs(a) > m:
            raise ValueError(f"letter {a} out of range for {m} generators")
    n = 2 * m * k * k
    prod = [[IntPolynomial.const(n, 1 if i == j else 0) for j in range(k)] for i in range(k)]
    for a in letters:
        prod = _matmul(prod, _symbolic_matrix(m, k, abs(a), a < 0), n)
    return _identity_minus(prod, n)


def tuple_point(t) -> list[int]:
    """Coordinates of a MatrixTuple in the same variable order (prime fields)."""
    point = []
    for A, Ai in zip(t.mats, t.invs):
        point += list(A) + list(Ai)
    return point


# -- certificates --------------------------------------------------------------

def _system(ps, target, D):
    """Coefficient-matching system for sum p_i q_i == target with deg q_i <= D."""
    n = target.n
    basis = monomials(n, D)
    cols = [(i, mono) for i in range(len(ps)) for mono in basis]
    row_of: dict[tuple, int] = {}
    entries: list[dict[int, int]] = []
    for j, (i, mono) in enumerate(cols):
        for e, c in ps[i].terms.items():
            key = tuple(a + b for a, b in zip(e, mono))
            r = row_of.get(key)
            if r is None:
                r = row_of[key] = len(entries)
                entries.append({})
            entries[r][j] = entries[r].get(j, 0) + c
    for e in target.terms:
        if e not in row_of:
            row_of[e] = len(entries)
            entries.append({})
    A = [[row.get(j, 0) for j in range(len(cols))] for row in entries]
    rhs = [0] * len(entries)
    for e, c in target.terms.items():
        rhs[row_of[e]] = c
    return cols, A, rhs


def _try_degree(ps, target, D):
    if not ps:
        return None
    cols, A, rhs = _system(ps, target, D)
    if not cols:
        return None
    sol = solve_integer_system(A, rhs)
    if sol is None:
        return None
    den = 1
    for x in sol:
        den = math.lcm(den, x.denominator)
    ints = [int(x * den) for x in sol]
    g = math.gcd(den, *ints)
    b = den // g
    n = target.n
    qs = []
    for i in range(len(ps)):
        terms = {mono: ints[j] // g for j, (ii, mono) in enumerate(cols) if ii == i and ints[j]}
        qs.append(IntPolynomial(n, terms))
    return qs, b


def find_certificate(ps: Sequence[IntPolynomial], r: IntPolynomial, degree_cap: int | None = None,
                     nu_max: int = DEFAULT_NU_MAX) -> Certificate:
    """Smallest nu, then smallest degree D <= degree_cap, admitting a certificate.

    ``degree_cap`` defaults to the Brownawell cap for the system, which is
    astronomically large beyond one or two variables; pass a small cap for
    anything but toy instances.
    """
    ps = list(ps)
    try:
        n = common_arity(ps + [r])
    except ValueError as exc:
        raise DimensionMismatch(str(exc)) from None
    if any(not p.is_integral() for p in ps + [r]):
        raise ValueError("certificate search expects integer coefficients")
    d = max([1] + [p.degree() for p in ps + [r] if not p.is_zero()])
    if degree_cap is None:
        degree_cap = brownawell_degree_cap(n, d)
    for nu in range(1, nu_max + 1):
        target = r**nu
        for D in range(degree_cap + 1):
            found = _try_degree(ps, target, D)
            if found is not None:
                qs, b = found
                cert = Certificate(tuple(qs), b, nu, D)
                if not verify_certificate(ps, r, cert):
                    raise AssertionError("solver produced a certificate that does not verify")
                return cert
    raise NotFound(f"no certificate with nu <= {nu_max} and degree <= {degree_cap}")


def verify_certificate(ps: Sequence[IntPolynomial], r: IntPolynomial, cert: Certificate) -> bool:
    """Exact check of sum p_i q_i == b r^nu."""
    if len(ps) != len(cert.qs) or cert.b < 1 or cert.nu < 1:
        return False
    n = r.n
    if any(p.n != n for p in ps) or any(q.n != n for q in cert.qs):
        return False
    lhs = IntPolynomial(n)
    for p, q in zip(ps, cert.qs):
        lhs = lhs + p * q
    return lhs == (r**cert.nu) * cert.b

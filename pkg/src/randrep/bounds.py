"""Closed-form bounds: Bezout component counts, Nullstellensatz degree and
height caps, and the thresholds of the collapse theorem.

Quantities that cannot be written down as integers are carried as
``Power(base, exponent)`` and evaluated on a log scale. The absolute
constants ``C`` and ``c`` of the asymptotic statements have no published
values; they are parameters here (default 1) and the dependent numbers are
reported, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

MATERIALIZE_MAX_EXPONENT = 10**6
_JSON_VALUE_MAX_DIGITS = 200


@dataclass(frozen=True)
class Power:
    base: int
    exponent: int

    def ln(self) -> mpmath.mpf:
        return self.exponent * mpmath.log(self.base)

    def log10(self) -> float:
        return float(self.exponent * mpmath.log10(self.base))

    def value(self) -> int:
        if self.exponent > MATERIALIZE_MAX_EXPONENT:
            raise OverflowError(f"{self.base}^{self.exponent} is too large to materialize")
        return self.base**self.exponent

    def as_dict(self):
        out = {"base": self.base, "exponent": self.exponent, "log10": self.log10()}
        if self.log10() <= _JSON_VALUE_MAX_DIGITS:
            out["value"] = str(self.value())
        return out


def brownawell_degree_cap(n: int, d: int) -> int:
    """(n+1)(n+2)(d+1)^(n+2), the degree allowed for the q_i."""
    if n < 1 or d < 1:
        raise ValueError("need n >= 1 and d >= 1")
    return (n + 1) * (n + 2) * (d + 1) ** (n + 2)


def poly_space_dim(d: int, n: int) -> int:
    """Number of monomials of total degree <= d in n variables."""
    if d < 0 or n < 0:
        raise ValueError("need d, n >= 0")
    f = math.comb(d + n, n)
    assert f <= (d + 1) ** n
    return f


@dataclass
class BoundReport:
    quantities: dict
    notes: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.quantities[key]

    def __getattr__(self, key):
        try:
            return self.__dict__["quantities"][key]
        except KeyError:
            raise AttributeError(key) from None

    def as_dict(self):
        return {"quantities": {k: _jsonable(v) for k, v in self.quantities.items()}, "notes": dict(self.notes)}


def _jsonable(v):
    if isinstance(v, Power):
        return v.as_dict()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, mpmath.mpf):
        return float(v)
    return v


def height_bound_report(n: int, d: int, h, R: int | None = None, C=1) -> BoundReport:
    """Bounds on log b for a certificate of a degree-d, height-h system in n variables.

    ``R`` is the rank of the coefficient system; it defaults to its largest
    possible value f(Q + d, n).
    """
    if n < 1 or d < 1 or h < 1:
        raise ValueError("need n >= 1, d >= 1, h >= 1")
    Q = brownawell_degree_cap(n, d)
    f = poly_space_dim(Q + d, n)
    if R is None:
        R = f
    if R < 1:
        raise ValueError("rank must be >= 1")
    log_h = mpmath.log(h)
    hadamard = R * (log_h + mpmath.log(R) / 2)
    max_rank = f * (log_h + mpmath.log(f) / 2)
    coarse = mpmath.mpf(Q + d + 1) ** n * (log_h + n * mpmath.log(Q + d + 1) / 2)
    theorem = (mpmath.mpf(C) ** n * mpmath.mpf(n) ** (2 * n) * mpmath.mpf(d + 1) ** (n * (n + 2))
               * (log_h + C * n * n * mpmath.log(d)))
    simplified = mpmath.mpf(2 * d) ** (n * (n + 2) + 1) * log_h
    return BoundReport(
        {
            "n": n, "d": d, "h": h, "rank": R,
            "degree_cap": Q,
            "equations_max": f,
            "unknowns_per_polynomial": poly_space_dim(Q, n),
            "log_b_hadamard": hadamard,
            "log_b_max_rank": max_rank,
            "log_b_coarse": coarse,
            "log_b_theorem": theorem,
            "log_b_simplified": simplified,
        },
        {
            "log_b_theorem": f"absolute constant C = {C} is a placeholder",
            "log_b_simplified": "valid only for d > d0(n); d0 is not known explicitly",
        },
    )


def bezout_component_bound(m: int, n: int, d: int) -> int:
    """Most irreducible components m polynomials of degree <= d can cut out of n-space."""
    if m < 0 or n < 1 or d < 1:
        raise ValueError("need m >= 0, n >= 1, d >= 1")
    return d ** min(m, n)


@dataclass(frozen=True)
class DecompositionClaim:
    components: tuple  # of (degree, dimension)
    n: int
    d: int

    def __post_init__(self):
        comps = tuple((int(a), int(b)) for a, b in self.components)
        object.__setattr__(self, "components", comps)
        for deg, dim in comps:
            if deg < 1 or not 0 <= dim <= self.n:
                raise ValueError(f"bad component (degree {deg}, dimension {dim}) in {self.n}-space")
        if self.d < 1:
            raise ValueError("defining degree must be >= 1")


def check_weighted_bezout(claim: DecompositionClaim) -> bool:
    """sum of deg(X_j) * d^dim(X_j) <= d^n."""
    total = sum(deg * claim.d**dim for deg, dim in claim.components)
    return total <= claim.d**claim.n


def theorem_bounds(m: int, k: int, l: int, u: int | None = None, c=1) -> BoundReport:
    """Relator-count, degree and height thresholds for collapse at (m, k, l)."""
    if m < 2 or k < 1 or l < 2:
        raise ValueError("need m >= 2, k >= 1, l >= 2")
    ln_l = mpmath.log(l)
    mk2 = m * k * k
    u_min_real = 15 * m**3 * k**4 * ln_l
    u_min = int(mpmath.ceil(u_min_real))
    u_theorem = 15 * m**3 * k**4 * int(mpmath.ceil(ln_l))
    lam_threshold = 5 * m * m * k * k * ln_l
    exponent = 7 * m * m * k**4
    log_b_pre = (mpmath.mpf(2 * l) ** (4 * m * m * k**4 + 4 * mk2 + 1)) * l * mpmath.log(2 * mk2)
    q = {
        "m": m, "k": k, "l": l,
        "variables": 2 * mk2,
        "u_min": u_min,
        "u_min_real": u_min_real,
        "u_theorem": u_theorem,
        "polynomial_count": mk2 + u_theorem,
        "relator_threshold": Power(3 * l, exponent),
        "log_B_cap": Power(2 * l, exponent),
        "log10_log_B_intermediate": float(mpmath.log10(log_b_pre)),
        "component_bound": Power(l, 2 * mk2),
        "lambda_threshold": lam_threshold,
        "u_for_lambda_threshold": (2 * mk2 + 1) * lam_threshold,
        "height_estimate": Power(2 * mk2, l),
        "r_count_bound": mk2 + mk2 ** (2**m),
        "relator_survival_bound": Fraction(2 * m - 2, 2 * m - 1),
    }
    notes = {"logs": "natural logarithm throughout"}
    if u is not None:
        lam = Fraction(u, 2 * mk2 + 1)
        q["u"] = u
        q["lambda"] = lam
        q["component_break_probability"] = 1 - mpmath.exp(-mpmath.mpf(lam.numerator) / lam.denominator / (2 * m))
        q["decay_prediction"] = mpmath.exp(-mpmath.mpf(c) * u / mk2)
        notes["decay_prediction"] = f"exp(-c u / (m k^2)) with placeholder c = {c}"
    return BoundReport(q, notes)


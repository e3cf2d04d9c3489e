"""Certificate instances shared by the certify tests and the acceptance suite.

Each entry: (name, n, ps, r, degree_cap or None, expected (b, nu) or None).
"""

import random

from randrep.poly import IntPolynomial, parse_polynomial


def _random_gh(seed):
    """p_i = g * h_i with h_1 - h_2 a nonzero constant, so r = g has a nu = 1 certificate."""
    rnd = random.Random(seed)
    n = 2
    x1, x2 = IntPolynomial.var(n, 0), IntPolynomial.var(n, 1)
    g = IntPolynomial(n)
    for e in [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]:
        g = g + IntPolynomial(n, {e: rnd.randint(-3, 3)})
    if g.is_zero():
        g = x1 + 1
    a, b = rnd.sample(range(-4, 5), 2)
    h1 = x1 + rnd.randint(-2, 2) * x2 + a
    h2 = h1 - a + b
    return n, [g * h1, g * h2], g, abs(a - b)


def golden():
    cases = [
        ("unit_ideal_line", 1, ["x1", "x1 - 1"], "1", None, (1, 1)),
        ("scaled_generator", 1, ["2*x1"], "x1", None, (2, 1)),
        ("square", 1, ["x1^2"], "x1", None, (1, 2)),
        ("hyperbola_axis", 2, ["x1*x2 - 1", "x1"], "1", None, (1, 1)),
        ("parabola_tangent", 2, ["x1^2 - x2", "x2"], "x1", 4, (1, 2)),
        ("three_lines", 2, ["x1", "x2", "x1 + x2 - 1"], "1", None, (1, 1)),
        # GL_1 with the relator x1: a*abar = 1 and a = 1 force abar = 1
        ("gl1_trivial_relator", 2, ["x1*x2 - 1", "x1 - 1"], "x2 - 1", None, (1, 1)),
        # GL_1 with the relator x1 x1: a^2 = 1 forces abar = a
        ("gl1_involution", 2, ["x1*x2 - 1", "x1^2 - 1"], "x2 - x1", None, (1, 1)),
    ]
    out = [(name, n, [parse_polynomial(s, n) for s in ps], parse_polynomial(r, n), cap, exp)
           for name, n, ps, r, cap, exp in cases]
    for seed in range(4):
        n, ps, r, b = _random_gh(seed)
        out.append((f"random_gh_{seed}", n, ps, r, None, (b, 1)))
    return out

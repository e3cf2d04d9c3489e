"""Small regular multigraphs used to exercise the nonbacktracking return bound."""

from __future__ import annotations

import itertools

from .matrep import MatrixTuple, as_field, cayley_multigraph, mat_from_rows
from .nbwalk import Multigraph


def complete(n: int) -> Multigraph:
    return Multigraph(n, list(itertools.combinations(range(n), 2)))


def circulant(n: int, jumps) -> Multigraph:
    edges = [(v, (v + j) % n) for v in range(n) for j in jumps]
    return Multigraph(n, edges)


def complete_bipartite(a: int, b: int) -> Multigraph:
    return Multigraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def case_two(d: int) -> Multigraph:
    """x joined to y by d-1 parallel edges and to z by one; likewise w to z and y.

    The extremal configuration where P(N(2) = x) = (d-2)/d.
    """
    x, y, z, w = range(4)
    edges = [(x, y)] * (d - 1) + [(x, z), (y, w)] + [(z, w)] * (d - 1)
    return Multigraph(4, edges)


def fat_cycle(n: int, multiplicity: int) -> Multigraph:
    """Cycle C_n with every edge repeated; degree 2 * multiplicity."""
    return Multigraph(n, [(v, (v + 1) % n) for v in range(n)] * multiplicity)


def bouquet(loops: int) -> Multigraph:
    """One vertex with ``loops`` self-loops; too small for the return bound."""
    return Multigraph(1, [(0, 0)] * loops)


def cayley_examples() -> dict[str, Multigraph]:
    F2, F5, F7 = as_field(2), as_field(5), as_field(7)
    u = mat_from_rows([[1, 1], [0, 1]])
    s = mat_from_rows([[0, 1], [1, 1]])
    return {
        "cayley_gl1f5_(2,1)": cayley_multigraph(MatrixTuple.scalars(F5, [2, 1])),
        "cayley_gl1f5_(2,4)": cayley_multigraph(MatrixTuple.scalars(F5, [2, 4])),
        "cayley_gl1f7_(2,6)": cayley_multigraph(MatrixTuple.scalars(F7, [2, 6])),
        "cayley_gl1f7_(3,1,1)": cayley_multigraph(MatrixTuple.scalars(F7, [3, 1, 1])),
        "cayley_gl2f2_(u,s)": cayley_multigraph(MatrixTuple(F2, 2, (u, s))),
        "cayley_gl2f2_(u,ut)": cayley_multigraph(MatrixTuple(F2, 2, (u, mat_from_rows([[1, 0], [1, 1]])))),
    }


def catalog() -> dict[str, Multigraph]:
    graphs = {
        "K5": complete(5),
        "K7": complete(7),
        "octahedron": circulant(6, [1, 2]),
        "C7(1,2)": circulant(7, [1, 2]),
        "C8(1,2)": circulant(8, [1, 2]),
        "C8(1,3)": circulant(8, [1, 3]),
        "C8(1,2,3)": circulant(8, [1, 2, 3]),
        "K4,4": complete_bipartite(4, 4),
        "case_two_d4": case_two(4),
        "case_two_d6": case_two(6),
        "double_triangle": fat_cycle(3, 2),
        "triple_triangle": fat_cycle(3, 3),
        "double_C5": fat_cycle(5, 2),
        "bouquet2": bouquet(2),
        "bouquet3": bouquet(3),
    }
    graphs.update(cayley_examples())
    return graphs


def meets_bound_hypotheses(G: Multigraph) -> bool:
    """Regular of degree >= 4, connected, more than 2 vertices."""
    degs = set(G.degrees())
    return len(degs) == 1 and min(degs) >= 4 and G.vertex_count > 2 and G.is_connected()


def bound_catalog() -> dict[str, Multigraph]:
    return {name: G for name, G in catalog().items() if meets_bound_hypotheses(G)}

"""Nonbacktracking random walks on regular multigraphs.

Every undirected edge ``j`` is stored as two directed half-edges, ``2j`` and
``2j + 1``, which are each other's reversal. A self-loop is an edge whose two
half-edges start and end at the same vertex, so a loop contributes 2 to the
degree and can be walked in either direction.

The walk's state after step ``t`` is the edge it last traversed. With
``q_t(e)`` the probability that ``e: v -> w`` was traversed at step ``t``,

    q_{t+1}(e) = (1 / (d - 1)) * sum of q_t(f) over f: -> v with f != reverse(e)

and ``P(N(t) = w)`` sums ``q_t`` over the edges into ``w``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np


class NonRegular(ValueError):
    def __init__(self, degrees, offending):
        super().__init__(f"multigraph is not regular; degrees {degrees}, offending vertices {offending}")
        self.degrees = degrees
        self.offending = offending


class Disconnected(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class Multigraph:
    def __init__(self, vertex_count: int, edges: Sequence[tuple[int, int]], labels=None):
        if vertex_count < 1:
            raise ValueError("a multigraph needs at least one vertex")
        self.vertex_count = int(vertex_count)
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in self.edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{vertex_count - 1}")
        src, dst = [], []
        for u, v in self.edges:
            src += [u, v]
            dst += [v, u]
        self.source = np.array(src, dtype=np.int64)
        self.target = np.array(dst, dtype=np.int64)
        self.out_edges = [[] for _ in range(vertex_count)]
        self.in_edges = [[] for _ in range(vertex_count)]
        for e, (a, b) in enumerate(zip(src, dst)):
            self.out_edges[a].append(e)
            self.in_edges[b].append(e)
        # optional per-half-edge tag, e.g. the generator letter in a Cayley graph
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != 2 * len(self.edges):
            raise ValueError("need one label per directed half-edge")

    @staticmethod
    def partner(e: int) -> int:
        return e ^ 1

    @property
    def half_edge_count(self) -> int:
        return 2 * len(self.edges)

    def degrees(self) -> list[int]:
        return [len(out) for out in self.out_edges]

    def is_connected(self) -> bool:
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
        return len({find(v) for v in range(self.vertex_count)}) == 1

    def __repr__(self):
        return f"Multigraph(vertices={self.vertex_count}, edges={len(self.edges)})"

    def to_text(self) -> str:
        lines = [f"vertices {self.vertex_count}"] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Multigraph":
        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or not lines[0].startswith("vertices"):
            raise ValueError("graph file must start with 'vertices <n>'")
        n = int(lines[0].split()[1])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
        return cls(n, edges)


def validate_regular(G: Multigraph, require_connected: bool = True) -> int:
    """Common vertex degree of ``G``; raises NonRegular or Disconnected."""
    degs = G.degrees()
    d = degs[0]
    bad = [v for v, dv in enumerate(degs) if dv != d]
    if bad:
        raise NonRegular(degs, bad)
    if require_connected and not G.is_connected():
        raise Disconnected(f"multigraph on {G.vertex_count} vertices is not connected")
    return d


def _walk_degree(G):
    d = validate_regular(G, require_connected=False)
    if d < 2:
        raise ValueError(f"nonbacktracking walk needs degree >= 2, got {d}")
    return d


@dataclass(frozen=True)
class EdgeDistribution:
    time: int
    probabilities: tuple  # Fractions in exact mode, floats otherwise

    @property
    def exact(self) -> bool:
        return bool(self.probabilities) and isinstance(self.probabilities[0], Fraction)

    def max(self):
        return max(self.probabilities)

    def total(self):
        return sum(self.probabilities, Fraction(0) if self.exact else 0.0)


def initial_distribution(G: Multigraph, start: int, exact: bool = True) -> EdgeDistribution:
    d = _walk_degree(G)
    p = Fraction(1, d) if exact else 1.0 / d
    zero = Fraction(0) if exact else 0.0
    probs = [zero] * G.half_edge_count
    for e in G.out_edges[start]:
        probs[e] = p
    return EdgeDistribution(1, tuple(probs))


def nbw_step(G: Multigraph, dist: EdgeDistribution) -> EdgeDistribution:
    d = _walk_degree(G)
    q = dist.probabilities
    if dist.exact:
        inflow = [sum((q[f] for f in G.in_edges[v]), Fraction(0)) for v in range(G.vertex_count)]
        src = G.source.tolist()
        new = tuple((inflow[src[e]] - q[e ^ 1]) / (d - 1) for e in range(G.half_edge_count))
    else:
        arr = np.asarray(q, dtype=float)
        inflow = np.bincount(G.target, weights=arr, minlength=G.vertex_count)
        new = tuple(((inflow[G.source] - arr[np.arange(len(arr)) ^ 1]) / (d - 1)).tolist())
    return EdgeDistribution(dist.time + 1, new)


def edge_distributions(G: Multigraph, start: int, t_max: int, exact: bool = True):
    """Yield q_1, ..., q_{t_max} for a walk started at ``start``."""
    if t_max < 1:
        raise ValueError("t must be >= 1")
    dist = initial_distribution(G, start, exact)
    yield dist
    for _ in range(t_max - 1):
        dist = nbw_step(G, dist)
        yield dist


def vertex_distribution(G: Multigraph, dist: EdgeDistribution) -> list:
    zero = Fraction(0) if dist.exact else 0.0
    out = [zero] * G.vertex_count
    tgt = G.target.tolist()
    for e, p in enumerate(dist.probabilities):
        out[tgt[e]] += p
    return out


def nbw_distribution(G: Multigraph, start: int, t: int, exact: bool = True) -> list:
    """Exact (or float) law of N(t) given N(0) = start."""
    for dist in edge_distributions(G, start, t, exact):
        pass
    return vertex_distribution(G, dist)


def return_probabilities(G: Multigraph, start: int, t_max: int, exact: bool = True) -> list:
    """[P(N(t) = start) for t = 1..t_max]."""
    into = G.in_edges[start]
    return [sum((dist.probabilities[e] for e in into), Fraction(0) if exact else 0.0)
            for dist in edge_distributions(G, start, t_max, exact)]


def _successors(G):
    d = _walk_degree(G)
    succ = np.empty((G.half_edge_count, d - 1), dtype=np.int64)
    for e in range(G.half_edge_count):
        w = int(G.target[e])
        allowed = [f for f in G.out_edges[w] if f != (e ^ 1)]
        succ[e] = allowed
    return succ


def nbw_sample_many(G: Multigraph, start: int, t: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Endpoints of ``n`` independent walks of length ``t`` from ``start``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    d = _walk_degree(G)
    succ = _successors(G)
    first = np.asarray(G.out_edges[start], dtype=np.int64)
    cur = first[rng.integers(0, d, size=n)]
    for _ in range(t - 1):
        cur = succ[cur, rng.integers(0, d - 1, size=n)]
    return G.target[cur]


def nbw_sample(G: Multigraph, start: int, t: int, rng: np.random.Generator) -> int:
    """Endpoint of one walk; every step after the first picks one of d-1 edges."""
    if t < 1:
        raise ValueError("t must be >= 1")
    d = _walk_degree(G)
    e = G.out_edges[start][int(rng.integers(0, d))]
    for _ in range(t - 1):
        w = int(G.target[e])
        allowed = [f for f in G.out_edges[w] if f != (e ^ 1)]
        e = allowed[int(rng.integers(0, d - 1))]
    return int(G.target[e])


@dataclass
class ReturnBoundReport:
    start: int
    degree: int
    bound: Fraction
    values: dict  # t -> P(N(t) = start)
    holds: bool

    @property
    def max_value(self):
        return max(self.values.values())

    @property
    def argmax(self):
        return max(self.values, key=lambda t: self.values[t])

    def as_dict(self):
        return {
            "start": self.start,
            "degree": self.degree,
            "bound": str(self.bound),
            "max": str(self.max_value),
            "argmax": self.argmax,
            "holds": self.holds,
            "values": {str(t): str(v) for t, v in self.values.items()},
        }


def check_return_bound(G: Multigraph, start: int, t_max: int, exact: bool = True) -> ReturnBoundReport:
    """Compare P(N(t) = start), 2 <= t <= t_max, with (d - 2) / (d - 1)."""
    d = validate_regular(G, require_connected=False)
    if d < 4:
        raise PreconditionViolated(f"return bound needs degree >= 4, got {d}")
    if G.vertex_count <= 2:
        raise PreconditionViolated(f"return bound needs more than 2 vertices, got {G.vertex_count}")
    if not G.is_connected():
        raise PreconditionViolated("return bound needs a connected multigraph")
    if t_max < 2:
        raise ValueError("t_max must be >= 2")
    bound = Fraction(d - 2, d - 1)
    probs = return_probabilities(G, start, t_max, exact)
    values = {t: probs[t - 1] for t in range(2, t_max + 1)}
    limit = bound if exact else float(bound) + 1e-12
    return ReturnBoundReport(start, d, bound, values, all(v <= limit for v in values.values()))

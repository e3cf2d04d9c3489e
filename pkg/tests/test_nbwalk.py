from fractions import Fraction

import numpy as np
import pytest

from randrep.catalog import bouquet, case_two, catalog, complete, fat_cycle, bound_catalog
from randrep.nbwalk import (
    Disconnected, EdgeDistribution, Multigraph, NonRegular, PreconditionViolated, check_return_bound,
    edge_distributions, nbw_distribution, nbw_sample, nbw_sample_many, nbw_step, return_probabilities,
    validate_regular,
)


def brute_walk(G, start, t):
    """Exact endpoint law by expanding every nonbacktracking edge sequence."""
    d = G.degrees()[start]
    paths = {e: Fraction(1, d) for e in G.out_edges[start]}
    for _ in range(t - 1):
        nxt = {}
        for e, p in paths.items():
            w = int(G.target[e])
            allowed = [f for f in G.out_edges[w] if f != (e ^ 1)]
            for f in allowed:
                nxt[f] = nxt.get(f, 0) + p / len(allowed)
        paths = nxt
    out = [Fraction(0)] * G.vertex_count
    for e, p in paths.items():
        out[int(G.target[e])] += p
    return out


def test_degree_examples():
    assert validate_regular(complete(5)) == 4
    assert validate_regular(bouquet(2)) == 4
    with pytest.raises(NonRegular):
        validate_regular(Multigraph(3, [(0, 1), (1, 2)]))


def test_disconnected():
    G = Multigraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    with pytest.raises(Disconnected):
        validate_regular(G)
    assert validate_regular(G, require_connected=False) == 2


def test_partner_involution():
    G = catalog()["case_two_d4"]
    for e in range(G.half_edge_count):
        f = G.partner(e)
        assert f != e and G.partner(f) == e
        assert G.source[f] == G.target[e] and G.target[f] == G.source[e]
    for v in range(G.vertex_count):
        assert len(G.out_edges[v]) == 4


def test_self_loop_counts_twice():
    G = Multigraph(2, [(0, 0), (0, 1), (0, 1), (1, 1)])
    assert G.degrees() == [4, 4]


def test_point_mass_step_on_k5():
    G = complete(5)
    x, a = 0, 1
    e = next(e for e in G.out_edges[x] if G.target[e] == a)
    probs = [Fraction(0)] * G.half_edge_count
    probs[e] = Fraction(1)
    nxt = nbw_step(G, EdgeDistribution(1, probs))
    support = {(int(G.source[f]), int(G.target[f])): p for f, p in enumerate(nxt.probabilities) if p}
    assert support == {(a, b): Fraction(1, 3) for b in (2, 3, 4)}


def test_uniform_edge_distribution_is_stationary():
    G = complete(5)
    n = G.half_edge_count
    dist = EdgeDistribution(1, [Fraction(1, n)] * n)
    assert list(nbw_step(G, dist).probabilities) == [Fraction(1, n)] * n


@pytest.mark.parametrize("name", sorted(catalog()))
def test_mass_preserved(name):
    G = catalog()[name]
    for dist in edge_distributions(G, 0, 12):
        assert dist.total() == 1
    for dist in edge_distributions(G, 0, 12, exact=False):
        assert abs(dist.total() - 1) < 1e-12


def test_k5_spot_values():
    G = complete(5)
    assert nbw_distribution(G, 0, 1) == [0] + [Fraction(1, 4)] * 4
    assert nbw_distribution(G, 0, 2)[0] == 0
    assert nbw_distribution(G, 0, 3)[0] == Fraction(1, 3)


@pytest.mark.parametrize("name", sorted(catalog()))
def test_distribution_matches_path_expansion(name):
    G = catalog()[name]
    for t in range(1, 7):
        assert nbw_distribution(G, 0, t) == brute_walk(G, 0, t)


@pytest.mark.parametrize("name", sorted(catalog()))
def test_float_mode_agrees(name):
    G = catalog()[name]
    ex = return_probabilities(G, 0, 20)
    fl = return_probabilities(G, 0, 20, exact=False)
    assert max(abs(float(a) - b) for a, b in zip(ex, fl)) < 1e-12


@pytest.mark.parametrize("name", sorted(catalog()))
def test_max_edge_probability_non_increasing(name):
    G = catalog()[name]
    Q = [dist.max() for dist in edge_distributions(G, 0, 50)]
    assert all(b <= a for a, b in zip(Q, Q[1:]))


@pytest.mark.parametrize("d", [4, 5, 6, 8])
def test_case_two_return_at_two(d):
    G = case_two(d)
    assert nbw_distribution(G, 0, 2)[0] == Fraction(d - 2, d)


def test_return_bound_examples():
    rep = check_return_bound(complete(5), 0, 20)
    assert rep.holds and rep.bound == Fraction(2, 3)
    assert all(v <= Fraction(2, 3) for v in rep.values.values())
    rep = check_return_bound(fat_cycle(3, 2), 0, 20)
    assert rep.degree == 4 and rep.holds


def test_return_bound_preconditions():
    with pytest.raises(PreconditionViolated):
        check_return_bound(bouquet(2), 0, 10)
    with pytest.raises(PreconditionViolated):
        check_return_bound(Multigraph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]), 0, 10)
    G = Multigraph(6, [(0, 1), (1, 2), (2, 0)] * 2 + [(3, 4), (4, 5), (5, 3)] * 2)
    with pytest.raises(PreconditionViolated):
        check_return_bound(G, 0, 10)


@pytest.mark.parametrize("name", sorted(bound_catalog()))
def test_return_bound_on_catalog(name):
    G = bound_catalog()[name]
    for start in range(G.vertex_count):
        assert check_return_bound(G, start, 30).holds


def tv(counts, exact):
    n = counts.sum()
    return 0.5 * sum(abs(c / n - float(p)) for c, p in zip(counts, exact))


def test_scalar_sampler_matches_exact_k5():
    G = complete(5)
    rng = np.random.default_rng(0)
    ends = [nbw_sample(G, 0, 5, rng) for _ in range(100_000)]
    assert tv(np.bincount(ends, minlength=5), nbw_distribution(G, 0, 5)) <= 0.01


@pytest.mark.parametrize("name", sorted(catalog()))
def test_vector_sampler_matches_exact(name):
    G = catalog()[name]
    rng = np.random.default_rng(1)
    for t in (1, 2, 5, 9):
        ends = nbw_sample_many(G, 0, t, 100_000, rng)
        assert tv(np.bincount(ends, minlength=G.vertex_count), nbw_distribution(G, 0, t)) <= 0.02


def test_sampler_deterministic():
    G = catalog()["C8(1,2)"]
    a = [nbw_sample(G, 0, 7, np.random.default_rng(5)) for _ in range(3)]
    assert len(set(a)) == 1
    x = nbw_sample_many(G, 0, 7, 1000, np.random.default_rng(9))
    y = nbw_sample_many(G, 0, 7, 1000, np.random.default_rng(9))
    assert (x == y).all()


def test_walk_needs_degree_two():
    G = Multigraph(2, [(0, 1)])
    with pytest.raises(ValueError):
        nbw_distribution(G, 0, 2)
    with pytest.raises(ValueError):
        nbw_sample(G, 0, 2, np.random.default_rng(0))


def test_text_round_trip():
    G = case_two(5)
    H = Multigraph.from_text(G.to_text())
    assert H.edges == G.edges and H.vertex_count == G.vertex_count
    with pytest.raises(ValueError):
        Multigraph.from_text("0 1\n")

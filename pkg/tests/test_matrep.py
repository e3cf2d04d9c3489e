import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from randrep import CapExceeded
from randrep.fields import field_of_order
from randrep.freegroup import Presentation, Word, iter_sphere, sample_presentation
from randrep.matrep import (
    ImageKind, MatrixTuple, TupleSpace, as_field, cayley_multigraph, classify_image, enumerate_tuples,
    evaluate_word, exact_nontrivial_survival, exact_survival_curve, generated_subgroup, gl_elements, gl_order,
    identity, large_survival_probabilities, mat_from_rows, mat_inv, mat_mul, search_representations,
    survival_probability, union_bound_curve,
)
from randrep.nbwalk import validate_regular

F2, F3, F5 = as_field(2), as_field(3), as_field(5)
U = mat_from_rows([[1, 1], [0, 1]])


def det_count(k, q):
    """Invertible matrices by determinant, independent of the elimination code."""
    if k == 1:
        return q - 1
    return sum(1 for a, b, c, d in itertools.product(range(q), repeat=4) if (a * d - b * c) % q)


@pytest.mark.parametrize("k,q", [(1, 3), (1, 5), (2, 2), (2, 3), (2, 5)])
def test_gl_order(k, q):
    assert gl_order(k, q) == det_count(k, q) == len(gl_elements(as_field(q), k))


def test_gl_order_examples():
    assert gl_order(1, 3) == 2
    assert gl_order(2, 2) == 6
    assert gl_order(2, 3) == 48
    assert gl_order(2, 4) == len(gl_elements(as_field(4), 2)) == 180


def test_tuple_counts():
    assert len(list(enumerate_tuples(2, 1, 3))) == 4
    assert len(list(enumerate_tuples(2, 2, 2))) == 36
    with pytest.raises(CapExceeded):
        list(enumerate_tuples(2, 2, 5, cap=1000))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_inverses(q):
    F = as_field(q)
    for A in gl_elements(F, 2):
        assert mat_mul(F, 2, A, mat_inv(F, 2, A)) == identity(2)
    assert mat_inv(F, 2, (1, 1, 1, 1)) is None


def test_evaluate_word_examples():
    for t in enumerate_tuples(2, 2, 2):
        assert evaluate_word([1], t) == t.mats[0]
        if t.mats[0] == t.mats[1]:
            assert evaluate_word([1, 2, -1, -2], t) == identity(2)
    t = MatrixTuple(F2, 2, (U, identity(2)))
    assert evaluate_word([1, 1], t) == identity(2)
    with pytest.raises(IndexError):
        evaluate_word([3], t)


def test_subgroup_examples():
    assert generated_subgroup(MatrixTuple.scalars(F5, [1, 1])) == {(1,)}
    assert generated_subgroup(MatrixTuple.scalars(F5, [2])) == {(1,), (2,), (4,), (3,)}
    assert len(generated_subgroup(MatrixTuple(F2, 2, (U,)))) == 2


def test_subgroup_cap():
    t = MatrixTuple.scalars(as_field(7), [3])
    with pytest.raises(CapExceeded):
        generated_subgroup(t, cap=3)


def test_cayley_examples():
    G = cayley_multigraph(MatrixTuple.scalars(F5, [1, 1]))
    assert G.vertex_count == 1 and validate_regular(G) == 4
    G = cayley_multigraph(MatrixTuple.scalars(F5, [2, 1]))
    assert G.vertex_count == 4 and validate_regular(G) == 4
    loops = [e for e in G.edges if e[0] == e[1]]
    cycle = sorted(tuple(sorted(e)) for e in G.edges if e[0] != e[1])
    assert len(loops) == 4
    # powers of 2 in BFS order 1, 2, 3(=2^-1), 4
    elems = G.elements
    assert elems[0] == (1,)
    assert {(elems[a][0], elems[b][0]) for a, b in G.edges if a != b} == {(1, 2), (2, 4), (4, 3), (3, 1)}
    assert len(cycle) == 4


def test_cayley_labels_follow_generators():
    t = MatrixTuple(F3, 2, (mat_from_rows([[1, 1], [0, 1]]), mat_from_rows([[0, 1], [2, 0]])))
    G = cayley_multigraph(t)
    for e in range(G.half_edge_count):
        g, h = G.elements[G.source[e]], G.elements[G.target[e]]
        assert mat_mul(F3, 2, g, t.generator(G.labels[e])) == h


def test_classify_examples():
    assert classify_image(MatrixTuple.scalars(F5, [1, 1])).kind is ImageKind.TRIVIAL
    c = classify_image(MatrixTuple.scalars(F5, [4, 4]))
    assert c.kind is ImageKind.ORDER_TWO and c.witness == (4,)
    assert classify_image(MatrixTuple.scalars(F5, [2, 1])).kind is ImageKind.LARGE
    assert classify_image(MatrixTuple.scalars(F5, [4, 1])).kind is ImageKind.ORDER_TWO


@pytest.mark.parametrize("m,k,q", [(2, 2, 2), (2, 1, 5), (3, 1, 5), (2, 1, 7), (2, 2, 3)])
def test_classification_matches_subgroup_size(m, k, q):
    for t in enumerate_tuples(m, k, q):
        n = len(generated_subgroup(t))
        kind = classify_image(t).kind
        assert (kind is ImageKind.LARGE) == (n > 2)
        assert (kind is ImageKind.TRIVIAL) == (n == 1)


def test_search_examples():
    space = TupleSpace(2, 1, 5)
    P = Presentation(2, 1, ())
    res = search_representations(P, 1, 5, space=space)
    assert sum(res.counts.values()) == 16 and res.trajectory == [16]
    P = Presentation(2, 1, (Word((1,)), Word((2,))))
    res = search_representations(P, 1, 5, emit_survivors=True)
    assert res.counts == {"trivial": 1, "order_two": 0, "large": 0}
    assert [t.mats for t in res.survivors] == [((1,), (1,))]


def test_search_space_mismatch():
    with pytest.raises(ValueError):
        search_representations(Presentation(2, 1, ()), 1, 3, space=TupleSpace(2, 1, 5))


def test_search_matches_direct_evaluation():
    space = TupleSpace(2, 2, 2)
    for seed in range(20):
        P = sample_presentation(2, 5, count=3, seed=seed)
        res = search_representations(P, 2, 2, space=space, emit_survivors=True)
        direct = [t for t in enumerate_tuples(2, 2, 2)
                  if all(evaluate_word(w, t) == identity(2) for w in P.relators)]
        assert res.survivors == direct
        assert all(a >= b for a, b in zip(res.trajectory, res.trajectory[1:]))
        assert res.trajectory[-1] == len(direct)


def exhaustive_survival(t, l):
    words = list(iter_sphere(t.m, l))
    hits = sum(evaluate_word(w, t) == identity(t.k) for w in words)
    return Fraction(hits, len(words))


@pytest.mark.parametrize("m,k,q", [(2, 1, 5), (2, 2, 2), (3, 1, 3)])
def test_survival_probability_matches_words(m, k, q):
    for t in enumerate_tuples(m, k, q):
        for l in range(1, 6):
            assert survival_probability(t, l) == exhaustive_survival(t, l)


def test_survival_examples():
    t = MatrixTuple.scalars(F5, [1, 1])
    assert all(survival_probability(t, l) == 1 for l in range(1, 8))
    for t in enumerate_tuples(2, 1, 5):
        if classify_image(t).kind is ImageKind.LARGE:
            for l in range(2, 12):
                assert survival_probability(t, l) <= Fraction(2, 3)


def test_order_two_survival_parity():
    t = MatrixTuple.scalars(F3, [2, 2])
    for l in range(1, 9):
        assert survival_probability(t, l) == (1 if l % 2 == 0 else 0)


def test_exact_curve_values():
    curve = exact_survival_curve(2, 1, 5, 6, 4)
    assert curve[0] == 1 and curve[1] == 1
    assert curve[2] == Fraction(2239, 4374)
    assert exact_nontrivial_survival(2, 1, 5, 6, 2) == Fraction(2239, 4374)


def test_exact_curve_against_pair_enumeration():
    space = TupleSpace(2, 1, 5)
    words = list(iter_sphere(2, 4))
    sigs = [space.signature(w) & space.large_mask for w in words]
    hits = sum(1 for a in sigs for b in sigs if a & b)
    assert exact_survival_curve(2, 1, 5, 4, 2, space=space)[2] == Fraction(hits, len(words) ** 2)


def test_exact_curve_against_monte_carlo():
    space = TupleSpace(2, 1, 5)
    p = float(exact_nontrivial_survival(2, 1, 5, 6, 3, space=space))
    n = 20_000
    fails = 0
    for seed in range(n):
        P = sample_presentation(2, 6, count=3, seed=seed)
        fails += search_representations(P, 1, 5, space=space).n_large > 0
    assert abs(fails / n - p) <= 3 * np.sqrt(p * (1 - p) / n)


def test_union_bound_dominates_exact():
    space = TupleSpace(2, 1, 5)
    exact = exact_survival_curve(2, 1, 5, 6, 12, space=space)
    ps = large_survival_probabilities(2, 1, 5, 6, space=space)
    ub = union_bound_curve(ps, 12)
    assert len(ps) == 12
    assert set(ps) == {Fraction(41, 162), Fraction(13, 27)}
    assert ub[0] == 12
    assert all(a >= b for a, b in zip(ub, ub[1:]))
    assert all(e <= b for e, b in zip(exact, ub))


def test_exact_curve_without_large_tuples():
    # GL_1(GF(2)) is trivial: no large tuples at all
    assert exact_survival_curve(2, 1, 2, 3, 2) == [0, 0, 0]


def test_exact_curve_word_cap():
    with pytest.raises(CapExceeded):
        exact_survival_curve(2, 1, 5, 8, 2, word_cap=1000)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8),
       st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8),
       st.integers(0, 35))
def test_evaluation_is_a_homomorphism(a, b, n):
    t = list(enumerate_tuples(2, 2, 2))[n]
    u, v = Word.reduce(a), Word.reduce(b)
    F = t.field
    assert evaluate_word(u * v, t) == mat_mul(F, 2, evaluate_word(u, t), evaluate_word(v, t))
    assert evaluate_word(a + b, t) == evaluate_word(u * v, t)


def test_extension_field_tuples():
    F4 = field_of_order(4)
    t = MatrixTuple.scalars(F4, [2, 3])
    assert len(generated_subgroup(t)) == 3
    assert classify_image(t).kind is ImageKind.LARGE
    assert survival_probability(t, 4) == exhaustive_survival(t, 4)

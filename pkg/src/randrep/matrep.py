"""Representations of finitely presented groups into GL_k(GF(q)).

Matrices are row-major tuples of field elements (see ``fields``). A point of
GL_k(F)^m is a ``MatrixTuple``, which keeps the inverses next to the
matrices so that words are evaluated without inverting anything.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import CapExceeded
from .fields import FieldSpec, field_of_order
from .freegroup import Presentation, Word, iter_sphere, sphere_size
from .nbwalk import Multigraph, return_probabilities

SUBGROUP_CAP = 10**5
TUPLE_CAP = 10**8
WORD_CAP = 10**7

Matrix = tuple  # k*k field elements, row-major


def as_field(q) -> FieldSpec:
    return q if isinstance(q, FieldSpec) else field_of_order(int(q))


def identity(k: int) -> Matrix:
    return tuple(1 if i == j else 0 for i in range(k) for j in range(k))


def mat_mul(F: FieldSpec, k: int, A: Matrix, B: Matrix) -> Matrix:
    if k == 1:
        return (F.mul(A[0], B[0]),)
    if F.e == 1:
        p = F.p
        return tuple(
            sum(A[i * k + s] * B[s * k + j] for s in range(k)) % p
            for i in range(k) for j in range(k)
        )
    out = []
    for i in range(k):
        for j in range(k):
            acc = 0
            for s in range(k):
                acc = F.add(acc, F.mul(A[i * k + s], B[s * k + j]))
            out.append(acc)
    return tuple(out)


def mat_inv(F: FieldSpec, k: int, A: Matrix) -> Matrix | None:
    """Inverse by Gauss-Jordan elimination, or None when ``A`` is singular."""
    rows = [list(A[i * k:(i + 1) * k]) + [1 if j == i else 0 for j in range(k)] for i in range(k)]
    for c in range(k):
        piv = next((r for r in range(c, k) if rows[r][c] != 0), None)
        if piv is None:
            return None
        rows[c], rows[piv] = rows[piv], rows[c]
        s = F.inv(rows[c][c])
        rows[c] = [F.mul(s, x) for x in rows[c]]
        for r in range(k):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[c])]
    return tuple(x for row in rows for x in row[k:])


def mat_from_rows(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(int(x) for row in rows for x in row)


def mat_rows(A: Matrix, k: int) -> list[list[int]]:
    return [list(A[i * k:(i + 1) * k]) for i in range(k)]


def gl_order(k: int, q: int) -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.prod(q**k - q**i for i in range(k))


def gl_elements(F: FieldSpec, k: int, cap: int = TUPLE_CAP) -> list[Matrix]:
    """All invertible k x k matrices, in lexicographic order of entries."""
    total = F.q ** (k * k)
    if total > cap:
        raise CapExceeded(f"matrices in M_{k}(GF({F.q}))", total, cap)
    return [A for A in itertools.product(range(F.q), repeat=k * k) if mat_inv(F, k, A) is not None]


@dataclass(frozen=True)
class MatrixTuple:
    field: FieldSpec
    k: int
    mats: tuple
    invs: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        mats = tuple(tuple(int(x) for x in A) for A in self.mats)
        object.__setattr__(self, "mats", mats)
        if self.invs is None:
            invs = []
            for A in mats:
                Ai = mat_inv(self.field, self.k, A)
                if Ai is None:
                    raise ValueError(f"matrix {A} is singular over {self.field}")
                invs.append(Ai)
            object.__setattr__(self, "invs", tuple(invs))

    @classmethod
    def scalars(cls, F, values) -> "MatrixTuple":
        """k = 1 tuple from field elements."""
        F = as_field(F)
        return cls(F, 1, tuple((v % F.q if F.e == 1 else v,) for v in values))

    @property
    def m(self) -> int:
        return len(self.mats)

    def generator(self, letter: int) -> Matrix:
        return self.mats[letter - 1] if letter > 0 else self.invs[-letter - 1]


def enumerate_tuples(m: int, k: int, q, cap: int = TUPLE_CAP) -> Iterator[MatrixTuple]:
    """Every point of GL_k(GF(q))^m exactly once."""
    F = as_field(q)
    total = gl_order(k, F.q) ** m
    if total > cap:
        raise CapExceeded(f"tuples in GL_{k}(GF({F.q}))^{m}", total, cap)
    gl = gl_elements(F, k, cap)
    inverse = {A: mat_inv(F, k, A) for A in gl}
    for mats in itertools.product(gl, repeat=m):
        yield MatrixTuple(F, k, mats, tuple(inverse[A] for A in mats))


def evaluate_word(w: Iterable[int], t: MatrixTuple) -> Matrix:
    """Product of the generator images along ``w``, left to right."""
    F, k = t.field, t.k
    acc = identity(k)
    for a in w:
        if a == 0 or abs(a) > t.m:
            raise IndexError(f"letter {a} out of range for {t.m} generators")
        acc = mat_mul(F, k, acc, t.generator(a))
    return acc


def _closure(t: MatrixTuple, cap: int) -> list[Matrix]:
    F, k = t.field, t.k
    gens = list(t.mats) + list(t.invs)
    e = identity(k)
    seen = {e}
    order = [e]
    queue = deque([e])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = mat_mul(F, k, g, s)
            if h not in seen:
                if len(seen) >= cap:
                    raise CapExceeded("subgroup size", f"> {cap}", cap)
                seen.add(h)
                order.append(h)
                queue.append(h)
    return order


def generated_subgroup(t: MatrixTuple, cap: int = SUBGROUP_CAP) -> frozenset:
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return frozenset(_closure(t, cap))


def cayley_multigraph(t: MatrixTuple, cap: int = SUBGROUP_CAP) -> Multigraph:
    """Cayley multigraph of the subgroup generated by ``t``.

    One undirected edge {g, g A_i} per element g and generator i; vertex 0 is
    the identity. Half-edge labels record the letter read along them (+i for
    g -> g A_i, -i for the way back), so reduced words are exactly the
    nonbacktracking walks from the identity.
    """
    elems = _closure(t, cap)
    index = {g: n for n, g in enumerate(elems)}
    F, k = t.field, t.k
    edges, labels = [], []
    for g in elems:
        for i, A in enumerate(t.mats, start=1):
            edges.append((index[g], index[mat_mul(F, k, g, A)]))
            labels += [i, -i]
    G = Multigraph(len(elems), edges, labels)
    G.elements = elems
    return G


class ImageKind(str, enum.Enum):
    TRIVIAL = "trivial"
    ORDER_TWO = "order_two"
    LARGE = "large"


@dataclass(frozen=True)
class ImageClass:
    kind: ImageKind
    witness: Matrix | None = None  # the common non-identity image when order_two


def classify_image(t: MatrixTuple) -> ImageClass:
    F, k = t.field, t.k
    e = identity(k)
    nontrivial = {A for A in t.mats if A != e}
    if not nontrivial:
        return ImageClass(ImageKind.TRIVIAL)
    if len(nontrivial) == 1:
        (B,) = nontrivial
        if mat_mul(F, k, B, B) == e:
            return ImageClass(ImageKind.ORDER_TWO, B)
    return ImageClass(ImageKind.LARGE)


class TupleSpace:
    """All of GL_k(GF(q))^m, with their image classes and cached word signatures.

    The signature of a word is the bitmask of tuples on which it evaluates
    to the identity (bit n for ``tuples[n]``).
    """

    def __init__(self, m: int, k: int, q, cap: int = TUPLE_CAP):
        self.m, self.k = m, k
        self.field = as_field(q)
        self.tuples = list(enumerate_tuples(m, k, self.field, cap))
        self.classes = [classify_image(t) for t in self.tuples]
        self.full = (1 << len(self.tuples)) - 1
        self.large_mask = sum(1 << n for n, c in enumerate(self.classes) if c.kind is ImageKind.LARGE)
        self._sig: dict[tuple, int] = {}

    def __len__(self):
        return len(self.tuples)

    def signature(self, w: Word) -> int:
        key = tuple(w)
        sig = self._sig.get(key)
        if sig is None:
            e = identity(self.k)
            sig = 0
            for n, t in enumerate(self.tuples):
                if evaluate_word(key, t) == e:
                    sig |= 1 << n
            self._sig[key] = sig
        return sig

    def kind_counts(self, mask: int) -> dict[str, int]:
        counts = {kind.value: 0 for kind in ImageKind}
        n = 0
        while mask:
            if mask & 1:
                counts[self.classes[n].kind.value] += 1
            mask >>= 1
            n += 1
        return counts

    def members(self, mask: int) -> list[MatrixTuple]:
        return [t for n, t in enumerate(self.tuples) if mask >> n & 1]


@dataclass
class SearchResult:
    counts: dict  # ImageKind value -> number of surviving tuples
    trajectory: list  # |E_j| for j = 0..u
    survivors: list | None = None

    @property
    def n_trivial(self):
        return self.counts[ImageKind.TRIVIAL.value]

    @property
    def n_order2(self):
        return self.counts[ImageKind.ORDER_TWO.value]

    @property
    def n_large(self):
        return self.counts[ImageKind.LARGE.value]


def search_representations(P: Presentation, k: int, q, *, emit_survivors: bool = False,
                           cap: int = TUPLE_CAP, space: TupleSpace | None = None) -> SearchResult:
    """Brute-force all homomorphisms of ``P`` into GL_k(GF(q)) and classify them."""
    if space is None:
        space = TupleSpace(P.m, k, q, cap)
    elif (space.m, space.k, space.field) != (P.m, k, as_field(q)):
        raise ValueError("tuple space does not match the requested search")
    mask = space.full
    trajectory = [bin(mask).count("1")]
    for w in P.relators:
        mask &= space.signature(w)
        trajectory.append(bin(mask).count("1"))
    return SearchResult(space.kind_counts(mask), trajectory,
                        space.members(mask) if emit_survivors else None)


def survival_probability(t: MatrixTuple, l: int, cap: int = SUBGROUP_CAP, exact: bool = True):
    """P(w(A) = 1) for w uniform on the sphere S_l, as a walk return probability."""
    if l < 1:
        raise ValueError("l must be >= 1")
    G = cayley_multigraph(t, cap)
    return return_probabilities(G, 0, l, exact)[-1]


def _sphere(m, l, word_cap):
    size = sphere_size(m, l)
    if size > word_cap:
        raise CapExceeded(f"words in S_{l} on {m} generators", size, word_cap)
    return size, iter_sphere(m, l)


def exact_survival_curve(m: int, k: int, q, l: int, u_max: int, *, space: TupleSpace | None = None,
                         tuple_cap: int = TUPLE_CAP, word_cap: int = WORD_CAP) -> list[Fraction]:
    """P(some large-image tuple satisfies u i.i.d. uniform relators), u = 0..u_max.

    Words are grouped by their signature on large-image tuples; the state
    after each draw is the intersection of the signatures drawn so far.
    """
    if space is None:
        space = TupleSpace(m, k, q, tuple_cap)
    size, words = _sphere(m, l, word_cap)
    sig_weights = Counter(space.signature(w) & space.large_mask for w in words)
    states = {space.large_mask: 1}
    curve = []
    for u in range(u_max + 1):
        alive = sum(c for s, c in states.items() if s)
        curve.append(Fraction(alive, size**u))
        if u == u_max:
            break
        nxt: dict[int, int] = {}
        for s, c in states.items():
            if not s:
                nxt[0] = nxt.get(0, 0) + c * size
                continue
            for sig, wt in sig_weights.items():
                key = s & sig
                nxt[key] = nxt.get(key, 0) + c * wt
        states = nxt
    return curve


def exact_nontrivial_survival(m: int, k: int, q, l: int, u: int, **kw) -> Fraction:
    return exact_survival_curve(m, k, q, l, u, **kw)[-1]


def large_survival_probabilities(m: int, k: int, q, l: int, *, space: TupleSpace | None = None,
                                 cap: int = SUBGROUP_CAP) -> list[Fraction]:
    """p_A at length ``l`` for every large-image tuple A."""
    if space is None:
        space = TupleSpace(m, k, q)
    return [survival_probability(t, l, cap) for t, c in zip(space.tuples, space.classes)
            if c.kind is ImageKind.LARGE]


def union_bound_curve(p_values: Sequence[Fraction], u_max: int) -> list[Fraction]:
    """sum_A p_A^u for u = 0..u_max."""
    return [sum((p**u for p in p_values), Fraction(0)) for u in range(u_max + 1)]

"""Reduced words in a free group and random presentations.

A letter is a nonzero signed integer: ``i`` stands for the generator x_i and
``-i`` for its inverse, generators numbered from 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import mpmath
import numpy as np

# exact integer roots are used for rational densities with denominator up to this
EXACT_ROOT_MAX_DENOMINATOR = 10_000
_GUARD_DIGITS = 30


def is_reduced(letters: Iterable[int]) -> bool:
    prev = 0
    for a in letters:
        if a == 0:
            return False
        if a == -prev:
            return False
        prev = a
    return True


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(a) for a in self.letters))
        if not is_reduced(self.letters):
            raise ValueError(f"word is not freely reduced: {self.letters}")

    @classmethod
    def reduce(cls, letters: Iterable[int]) -> "Word":
        return cls(free_reduce(letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        return cls(tuple(int(tok) for tok in text.split()))

    def __str__(self):
        return " ".join(str(a) for a in self.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word.reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-a for a in reversed(self.letters)))

    def max_generator(self) -> int:
        return max((abs(a) for a in self.letters), default=0)


def _check_ml(m, l):
    if m < 2:
        raise ValueError(f"need m >= 2 generators, got {m}")
    if l < 1:
        raise ValueError(f"need word length l >= 1, got {l}")


def sphere_size(m: int, l: int) -> int:
    """Number of reduced words of length ``l`` on ``m`` generators."""
    _check_ml(m, l)
    return 2 * m * (2 * m - 1) ** (l - 1)


def alphabet(m: int) -> list[int]:
    """Letters in index order: x1, x1^-1, x2, x2^-1, ..."""
    return [s * i for i in range(1, m + 1) for s in (1, -1)]


def iter_sphere(m: int, l: int) -> Iterator[Word]:
    """All reduced words of length ``l``, each once."""
    _check_ml(m, l)
    letters = alphabet(m)

    def extend(prefix):
        if len(prefix) == l:
            yield Word(tuple(prefix))
            return
        for a in letters:
            if prefix and prefix[-1] == -a:
                continue
            prefix.append(a)
            yield from extend(prefix)
            prefix.pop()

    yield from extend([])


def _as_fraction(density) -> Fraction | None:
    if isinstance(density, Fraction):
        return density
    if isinstance(density, (int, np.integer)):
        return Fraction(int(density))
    if isinstance(density, (float, np.floating)):
        # decimal literal the user typed, not the binary expansion
        return Fraction(repr(float(density)))
    if isinstance(density, (str, Decimal)):
        return Fraction(str(density))
    return None


def _iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0, exactly."""
    if n < 2:
        return n
    guess = int(mpmath.floor(mpmath.root(mpmath.mpf(n), k)))
    x = max(guess, 0)
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def relator_count(m: int, l: int, density) -> int:
    """floor(|S_l| ** density), with the floor taken exactly.

    Rational densities (ints, Fractions, decimal strings, floats read as
    their decimal repr) with small denominators go through an exact integer
    root; anything else through high-precision evaluation, which raises if
    the value lies too close to an integer to decide the floor.
    """
    size = sphere_size(m, l)
    frac = _as_fraction(density)
    value = float(frac) if frac is not None else float(density)
    if not 0 <= value <= 1:
        raise ValueError(f"density must lie in [0, 1], got {density}")
    if frac is not None and frac.denominator <= EXACT_ROOT_MAX_DENOMINATOR:
        return _iroot(size ** frac.numerator, frac.denominator)
    with mpmath.workdps(len(str(size)) + 2 * _GUARD_DIGITS):
        d = mpmath.mpf(frac.numerator) / frac.denominator if frac is not None else mpmath.mpf(density)
        x = mpmath.power(size, d)
        n = int(mpmath.floor(x))
        eps = mpmath.mpf(10) ** (-_GUARD_DIGITS)
        if x - n < eps or n + 1 - x < eps:
            raise ValueError(f"floor of {size}^{density} is numerically ambiguous")
    return n


def letter_index(a: int) -> int:
    """Position of a letter in ``alphabet``; inverse letters differ in the low bit."""
    return 2 * (abs(a) - 1) + (a < 0)


def index_letter(c: int) -> int:
    i = c // 2 + 1
    return -i if c & 1 else i


def word_from_choices(m: int, choices: Sequence[int]) -> Word:
    """Map raw choices to a reduced word.

    ``choices[0]`` is in [0, 2m) and picks the first letter; every later
    choice is in [0, 2m-1) and picks among the letters other than the
    inverse of the previous one.
    """
    out = []
    prev = -1
    for j, r in enumerate(choices):
        r = int(r)
        if j == 0:
            c = r
        else:
            banned = prev ^ 1
            c = r if r < banned else r + 1
        out.append(index_letter(c))
        prev = c
    return Word(tuple(out))


def sample_reduced_word(m: int, l: int, rng: np.random.Generator) -> Word:
    """A uniform sample from the sphere S_l."""
    _check_ml(m, l)
    first = rng.integers(0, 2 * m)
    rest = rng.integers(0, 2 * m - 1, size=l - 1)
    return word_from_choices(m, [first, *rest.tolist()])


def relator_rng(seed: int, index: int) -> np.random.Generator:
    """Independent counter-based stream for relator ``index`` of a presentation."""
    key = ((int(seed) & (2**64 - 1)) << 64) | (int(index) & (2**64 - 1))
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class Presentation:
    m: int
    l: int
    relators: tuple[Word, ...]
    seed: int | None = None
    density: object = None
    count: int | None = None

    def __post_init__(self):
        for w in self.relators:
            if len(w) != self.l:
                raise ValueError(f"relator {w} does not have length {self.l}")
            if w.max_generator() > self.m:
                raise ValueError(f"relator {w} uses a generator beyond x{self.m}")

    @property
    def u(self) -> int:
        return len(self.relators)

    def to_text(self) -> str:
        lines = [f"m={self.m} l={self.l} seed={self.seed}"]
        lines += [str(w) for w in self.relators]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise ValueError("empty presentation file")
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        try:
            m, l = int(header["m"]), int(header["l"])
        except KeyError as exc:
            raise ValueError(f"presentation header lacks {exc}") from None
        seed = header.get("seed")
        seed = None if seed in (None, "None") else int(seed)
        rels = tuple(Word.parse(ln) for ln in lines[1:])
        return cls(m=m, l=l, relators=rels, seed=seed, count=len(rels))


def sample_presentation(m: int, l: int, *, count: int | None = None, density=None,
                        seed: int = 0) -> Presentation:
    """Random presentation with ``count`` relators, or floor(|S_l|^density) of them.

    Relator ``j`` depends only on ``(seed, j)``, so a presentation with more
    relators extends one with fewer.
    """
    _check_ml(m, l)
    if (count is None) == (density is None):
        raise ValueError("give exactly one of count and density")
    u = relator_count(m, l, density) if density is not None else int(count)
    if u < 0:
        raise ValueError(f"relator count must be >= 0, got {u}")
    rels = tuple(sample_reduced_word(m, l, relator_rng(seed, j)) for j in range(u))
    return Presentation(m=m, l=l, relators=rels, seed=seed, density=density, count=u)


def enumerate_reduced(m: int, max_len: int) -> Iterator[Word]:
    """Reduced words of every length up to ``max_len``, shortest first."""
    yield Word(())
    for l in range(1, max_len + 1):
        yield from iter_sphere(m, l)


"""The three-exterior (Roby) algebra on generators theta^1, ..., theta^n.

The defining relation says the sum of the six arrangements of every cubic
monomial vanishes.  Words without a *rise* (three consecutive letters
``i <= j <= k``) form a basis, and every word is rewritten to that basis by
repeatedly replacing its leftmost rise with minus the remaining arrangements:

    i <  j <  k :  ijk = -(jki + kij + ikj + jik + kji)
    i == j <  k :  iik = -(iki + kii)
    i <  j == k :  ijj = -(jij + jji)
    i == j == k :  iii = 0

Every replacement keeps the word length and strictly increases its inversion
count, so rewriting terminates.  Letters are 1-based to match theta^1..theta^n.
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

from .errors import ParseError, PreconditionError
from .scalars import ONE, Cyclotomic3, as_cyc, format_cyc, parse_cyc

Word = tuple  # tuple[int, ...]

__all__ = [
    "Word",
    "RobyElement",
    "has_rise",
    "is_rise_free",
    "inversions",
    "reduce_word",
    "reduce",
    "lam_mul",
    "grade",
    "homogeneous_component",
    "roby_dim",
    "enumerate_basis",
    "nilpotency_order",
]


def has_rise(word: Iterable[int]) -> int | None:
    """Position of the leftmost rise, or None for a rise-free word."""
    w = tuple(word)
    for pos in range(len(w) - 2):
        if w[pos] <= w[pos + 1] <= w[pos + 2]:
            return pos
    return None


def is_rise_free(word: Iterable[int]) -> bool:
    return has_rise(word) is None


def inversions(word: Iterable[int]) -> int:
    w = tuple(word)
    return sum(1 for a in range(len(w)) for b in range(a + 1, len(w)) if w[a] > w[b])


def _rewrite_rise(i: int, j: int, k: int) -> tuple[tuple[int, Word], ...]:
    # (coefficient, triple) pairs for the rise i <= j <= k
    if i < j < k:
        return tuple((-1, t) for t in ((j, k, i), (k, i, j), (i, k, j), (j, i, k), (k, j, i)))
    if i == j < k:
        return ((-1, (i, k, i)), (-1, (k, i, i)))
    if i < j == k:
        return ((-1, (j, i, j)), (-1, (j, j, i)))
    return ()


@lru_cache(maxsize=None)
def _append_letter(u: Word, x: int) -> tuple[tuple[Word, int], ...]:
    # u is rise-free; the only possible rise of u + (x,) sits at the end
    if len(u) < 2 or not (u[-2] <= u[-1] <= x):
        return ((u + (x,), 1),)
    base = u[:-2]
    acc: dict[Word, int] = defaultdict(int)
    for coeff, triple in _rewrite_rise(u[-2], u[-1], x):
        for w, c in _append_letters(base, triple).items():
            acc[w] += coeff * c
    return tuple((w, c) for w, c in acc.items() if c)


def _append_letters(u: Word, letters: Word) -> dict[Word, int]:
    current = {u: 1}
    for x in letters:
        nxt: dict[Word, int] = defaultdict(int)
        for w, c in current.items():
            for w2, c2 in _append_letter(w, x):
                nxt[w2] += c * c2
        current = {w: c for w, c in nxt.items() if c}
        if not current:
            break
    return current


@lru_cache(maxsize=None)
def _concat(u: Word, v: Word) -> tuple[tuple[Word, int], ...]:
    return tuple(_append_letters(u, v).items())


def reduce_word(word: Iterable[int]) -> dict[Word, int]:
    """Integer expansion of a monomial in the rise-free basis."""
    return dict(_concat((), tuple(word)))


class RobyElement:
    """Finite linear combination of rise-free words with Q(q) coefficients.

    Treated as immutable; arithmetic returns new elements.
    """

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[Word, object] | None = None, *, _canonical=False):
        if n < 1:
            raise PreconditionError("generator count must be positive")
        self.n = n
        if _canonical:
            self._terms = terms
            return
        acc: dict[Word, Cyclotomic3] = {}
        for word, coeff in (terms or {}).items():
            word = tuple(int(i) for i in word)
            if any(not 1 <= i <= n for i in word):
                raise PreconditionError(f"letter out of range 1..{n} in {word}")
            coeff = as_cyc(coeff)
            if not coeff:
                continue
            for w, c in _concat((), word):
                acc[w] = acc.get(w, 0) + coeff * c
        self._terms = {w: c for w, c in acc.items() if c}

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, n: int) -> "RobyElement":
        return cls(n, {}, _canonical=True)

    @classmethod
    def one(cls, n: int) -> "RobyElement":
        return cls(n, {(): ONE}, _canonical=True)

    @classmethod
    def scalar(cls, n: int, c) -> "RobyElement":
        c = as_cyc(c)
        return cls(n, {(): c} if c else {}, _canonical=True)

    @classmethod
    def theta(cls, n: int, *letters: int) -> "RobyElement":
        """The monomial theta^{l1} theta^{l2} ..., reduced."""
        return cls(n, {tuple(letters): ONE})

    @property
    def terms(self) -> Mapping[Word, Cyclotomic3]:
        return self._terms

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "RobyElement"):
        if self.n != other.n:
            raise PreconditionError(f"generator count mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, RobyElement):
            return self + RobyElement.scalar(self.n, other)
        self._check(other)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            s = acc.get(w)
            s = c if s is None else s + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        return RobyElement(self.n, acc, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return RobyElement(self.n, {w: -c for w, c in self._terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "RobyElement":
        c = as_cyc(c)
        if not c:
            return RobyElement.zero(self.n)
        return RobyElement(self.n, {w: c * v for w, v in self._terms.items()}, _canonical=True)

    def __mul__(self, other):
        if isinstance(other, RobyElement):
            return lam_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        result = RobyElement.one(self.n)
        for _ in range(k):
            result = lam_mul(result, self)
        return result

    def __eq__(self, other):
        if isinstance(other, RobyElement):
            return self.n == other.n and self._terms == other._terms
        if isinstance(other, (int, Cyclotomic3)) or hasattr(other, "denominator"):
            return self == RobyElement.scalar(self.n, other)
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    # structure ------------------------------------------------------------

    def constant(self) -> Cyclotomic3:
        return self._terms.get((), Cyclotomic3(0))

    def degrees(self) -> set[int]:
        return {len(w) for w in self._terms}

    def max_degree(self) -> int:
        return max((len(w) for w in self._terms), default=-1)

    def degree_part(self, d: int) -> "RobyElement":
        return RobyElement(self.n, {w: c for w, c in self._terms.items() if len(w) == d}, _canonical=True)

    def grades(self) -> set[int]:
        return grade(self)

    def sorted_terms(self) -> list[tuple[Word, Cyclotomic3]]:
        return sorted(self._terms.items())

    def __repr__(self):
        return f"RobyElement(n={self.n}, {self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            mono = "".join(f"t{i}" for i in w) or "1"
            parts.append(f"({format_cyc(c)})*{mono}")
        return " + ".join(parts)

    # interchange ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"word": list(w), "coeff": format_cyc(c)} for w, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "RobyElement":
        try:
            n = int(doc["n"])
            terms: dict[Word, Cyclotomic3] = {}
            for item in doc["terms"]:
                w = tuple(int(i) for i in item["word"])
                terms[w] = terms.get(w, 0) + parse_cyc(str(item["coeff"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, PreconditionError):
                raise
            raise ParseError(f"malformed Roby element: {exc}") from exc
        return cls(n, terms)


def reduce(word: Iterable[int], n: int | None = None) -> RobyElement:
    """Canonical form of the monomial ``word`` in the rise-free basis."""
    word = tuple(word)
    if n is None:
        n = max(word, default=1)
    return RobyElement(n, {word: ONE})


def lam_mul(a: RobyElement, b: RobyElement) -> RobyElement:
    a._check(b)
    acc: dict[Word, Cyclotomic3] = {}
    for u, cu in a._terms.items():
        for v, cv in b._terms.items():
            cuv = cu * cv
            for w, c in _concat(u, v):
                s = acc.get(w)
                t = cuv * c
                acc[w] = t if s is None else s + t
    return RobyElement(a.n, {w: c for w, c in acc.items() if c}, _canonical=True)


def grade(a: RobyElement) -> set[int]:
    return {len(w) % 3 for w in a.terms}


def homogeneous_component(a: RobyElement, i: int) -> RobyElement:
    return RobyElement(a.n, {w: c for w, c in a.terms.items() if len(w) % 3 == i % 3}, _canonical=True)


def roby_dim(n: int, k: int) -> int:
    """Number of rise-free words of length k over n letters.

    Dynamic programme over the last two letters of a prefix.
    """
    if n < 1 or k < 0:
        raise PreconditionError("roby_dim needs n >= 1 and k >= 0")
    if k < 2:
        return n**k
    counts = {(a, b): 1 for a in range(1, n + 1) for b in range(1, n + 1)}
    for _ in range(k - 2):
        nxt: dict[tuple[int, int], int] = defaultdict(int)
        for (a, b), c in counts.items():
            for x in range(1, n + 1):
                if not (a <= b <= x):
                    nxt[(b, x)] += c
        counts = nxt
    return sum(counts.values())


def enumerate_basis(n: int, k: int) -> list[Word]:
    """Rise-free words of length k in lexicographic order."""
    if n < 1 or k < 0:
        raise PreconditionError("enumerate_basis needs n >= 1 and k >= 0")
    out: list[Word] = []

    def extend(prefix: Word):
        if len(prefix) == k:
            out.append(prefix)
            return
        for x in range(1, n + 1):
            if len(prefix) >= 2 and prefix[-2] <= prefix[-1] <= x:
                continue
            extend(prefix + (x,))

    extend(())
    return out


def nilpotency_order(a: RobyElement, cap: int) -> int | None:
    """Smallest m <= cap with a**m == 0, or None."""
    if cap < 1:
        raise PreconditionError("cap must be >= 1")
    power = a
    for m in range(1, cap + 1):
        if not power:
            return m
        if m < cap:
            power = lam_mul(power, a)
    return None


def all_words(n: int, k: int) -> Iterable[Word]:
    return product(range(1, n + 1), repeat=k)

"""Enveloping algebra of an elementary Lie algebra of order 3 and its Hopf structure.

Elements are kept in PBW form: linear combinations of

    (X_1^{a_1} / a_1!) ... (X_{n0}^{a_{n0}} / a_{n0}!) * Y_{i_1} ... Y_{i_l}

with the Y-word rise-free.  Labels here are 1-based (X_1.., Y_1..), matching the
Roby words over the dual generators theta^1..; the underlying
:class:`~ternary_algebra.lie3.LieOrder3Algebra` is indexed from 0.

Normal forms come from rewriting with the three ideal relations:

* ``X_a X_b -> X_b X_a + [X_a, X_b]`` for ``a > b``;
* ``Y_i X_a -> X_a Y_i - [X_a, Y_i]``;
* a rise ``Y_i Y_j Y_k`` (``i <= j <= k``) -> minus the other arrangements of
  the triple plus ``{Y_i, Y_j, Y_k} / m`` where ``m`` counts how often the
  sorted arrangement occurs among the six permutations.

The coproduct lands in the Z3-graded tensor product, where
``(a1 (x) a2)(b1 (x) b2) = q^{gr(a2) gr(b1)} a1 b1 (x) a2 b2``.
Everything infinite (exponentials, dual products) is cut at an explicit degree cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import factorial
from typing import Iterable, Mapping, NamedTuple

from .errors import CapExceededError, ParseError, PreconditionError
from .lie3 import AxiomReport, AxiomResult, LieOrder3Algebra
from .roby import enumerate_basis, is_rise_free
from .scalars import ONE, ZERO, Cyclotomic3, as_cyc, format_cyc, parse_cyc, qpow

__all__ = [
    "PBWMonomial",
    "DualMonomial",
    "EnvelopingAlgebra",
    "UElement",
    "GradedTensor",
    "GroupLikeReport",
    "ThetaReport",
    "u_normalize",
    "u_mul",
    "coproduct",
    "antipode",
    "counit",
    "check_bracket_coproduct",
    "check_antipode_axiom",
    "truncated_exp",
    "group_like_report",
    "dual_multiply",
    "dual_product",
    "derive_theta_relations",
    "pbw_basis",
    "trivial_algebra",
]

X, Y = 0, 1  # letter kinds; a letter is (kind, index)


class PBWMonomial(NamedTuple):
    x: tuple[int, ...]
    y: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.x) + len(self.y)

    @property
    def grade(self) -> int:
        return len(self.y) % 3

    def letters(self) -> tuple:
        return tuple((X, a) for a, e in enumerate(self.x) for _ in range(e)) + tuple((Y, i) for i in self.y)

    def norm(self) -> int:
        """Product of the factorials in the normalization."""
        out = 1
        for e in self.x:
            out *= factorial(e)
        return out

    def label(self) -> str:
        parts = []
        for a, e in enumerate(self.x):
            if e == 1:
                parts.append(f"X{a + 1}")
            elif e:
                parts.append(f"X{a + 1}^{e}/{e}!")
        parts += [f"Y{i}" for i in self.y]
        return "*".join(parts) or "1"

    def to_json(self) -> dict:
        return {"x": list(self.x), "y": list(self.y)}


class DualMonomial(NamedTuple):
    """Dual basis element: alpha^{exponents} theta^{(word)}."""

    alpha: tuple[int, ...]
    theta: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.alpha) + len(self.theta)

    def as_pbw(self) -> PBWMonomial:
        return PBWMonomial(self.alpha, self.theta)

    def label(self) -> str:
        parts = [f"a{a + 1}^{e}" if e > 1 else f"a{a + 1}" for a, e in enumerate(self.alpha) if e]
        if self.theta:
            parts.append("theta(" + ",".join(map(str, self.theta)) + ")")
        return "*".join(parts) or "1"

    def to_json(self) -> dict:
        return {"alpha": list(self.alpha), "theta": list(self.theta)}


def _acc(out: dict, terms: Mapping, scale) -> None:
    for k, v in terms.items():
        s = out.get(k)
        t = scale * v
        s = t if s is None else s + t
        if s:
            out[k] = s
        else:
            out.pop(k, None)


def trivial_algebra(n0: int, n1: int) -> LieOrder3Algebra:
    """Elementary algebra with every bracket zero (U is S(g0) x Lambda_3(g1))."""
    return LieOrder3Algebra.from_constants(n0, n1)


class EnvelopingAlgebra:
    """U(g) for an elementary Lie algebra of order 3, with memoized normal forms."""

    def __init__(self, algebra: LieOrder3Algebra):
        if algebra.n2:
            raise PreconditionError("enveloping algebra is implemented for elementary algebras (n2 = 0)")
        self.algebra = algebra
        self.n0 = algebra.n0
        self.n1 = algebra.n1
        self._nf_cache: dict = {}
        self._mul_cache: dict = {}
        self._delta_cache: dict = {}
        self._zero_x = (0,) * self.n0

    # constructors ---------------------------------------------------------

    def element(self, terms: Mapping[PBWMonomial, object] | None = None) -> "UElement":
        out: dict = {}
        for m, c in (terms or {}).items():
            m = PBWMonomial(tuple(m[0]), tuple(m[1]))
            self._check_monomial(m)
            _acc(out, {m: as_cyc(c)}, ONE)
        return UElement(self, out)

    def one(self) -> "UElement":
        return UElement(self, {PBWMonomial(self._zero_x, ()): ONE})

    def zero(self) -> "UElement":
        return UElement(self, {})

    def x(self, a: int) -> "UElement":
        """X_a, 1-based."""
        return self.normalize([("X", a)])

    def y(self, i: int) -> "UElement":
        """Y_i, 1-based."""
        return self.normalize([("Y", i)])

    def monomial(self, m: PBWMonomial) -> "UElement":
        return self.element({m: ONE})

    def _check_monomial(self, m: PBWMonomial):
        if len(m.x) != self.n0 or any(e < 0 for e in m.x):
            raise PreconditionError(f"bad X exponents {m.x}")
        if any(not 1 <= i <= self.n1 for i in m.y) or not is_rise_free(m.y):
            raise PreconditionError(f"Y-word {m.y} is not a rise-free word over 1..{self.n1}")

    # normal form ------------------------------------------------------------

    def _letter(self, item) -> tuple[int, int]:
        if isinstance(item, str):
            kind, idx = item[0].upper(), item[1:]
        else:
            kind, idx = item
            kind = str(kind).upper()
        try:
            idx = int(idx)
        except ValueError as exc:
            raise ParseError(f"bad letter {item!r}") from exc
        if kind == "X" and 1 <= idx <= self.n0:
            return (X, idx - 1)
        if kind == "Y" and 1 <= idx <= self.n1:
            return (Y, idx)
        raise PreconditionError(f"unknown basis element {item!r}")

    def normalize(self, letters: Iterable) -> "UElement":
        word = tuple(self._letter(item) for item in letters)
        return UElement(self, dict(self._nf(word)))

    def _nf(self, word: tuple) -> dict:
        cached = self._nf_cache.get(word)
        if cached is None:
            cached = self._nf_compute(word)
            self._nf_cache[word] = cached
        return cached

    def _nf_compute(self, word: tuple) -> dict:
        A = self.algebra
        L = len(word)
        for p in range(L - 1):
            (k1, i1), (k2, i2) = word[p], word[p + 1]
            head, tail = word[:p], word[p + 2 :]
            if k1 == Y and k2 == X:
                out: dict = {}
                _acc(out, self._nf(head + ((X, i2), (Y, i1)) + tail), ONE)
                for j, c in A.xy(i2, i1 - 1).items():
                    _acc(out, self._nf(head + ((Y, j + 1),) + tail), -c)
                return out
            if k1 == X and k2 == X and i1 > i2:
                out = {}
                _acc(out, self._nf(head + ((X, i2), (X, i1)) + tail), ONE)
                for c, v in A.xx(i1, i2).items():
                    _acc(out, self._nf(head + ((X, c),) + tail), v)
                return out
            if k1 == Y and k2 == Y and p + 2 < L and word[p + 2][0] == Y and i1 <= i2 <= word[p + 2][1]:
                i3 = word[p + 2][1]
                tail = word[p + 3 :]
                arrangements = set(permutations((i1, i2, i3)))
                mult = 6 // len(arrangements)
                out = {}
                for arr in arrangements:
                    if arr != (i1, i2, i3):
                        _acc(out, self._nf(head + tuple((Y, i) for i in arr) + tail), -ONE)
                for c, v in A.yyy(i1 - 1, i2 - 1, i3 - 1).items():
                    _acc(out, self._nf(head + ((X, c),) + tail), v / mult)
                return out
        xs = [0] * self.n0
        ys = []
        for kind, idx in word:
            if kind == X:
                xs[idx] += 1
            else:
                ys.append(idx)
        m = PBWMonomial(tuple(xs), tuple(ys))
        return {m: Cyclotomic3(m.norm())}

    def mul_monomials(self, m1: PBWMonomial, m2: PBWMonomial) -> dict:
        key = (m1, m2)
        cached = self._mul_cache.get(key)
        if cached is None:
            if not m1.y and not any(m2.x) and not any(m1.x):
                cached = {m2: ONE}
            elif not m2.y and not any(m2.x):
                cached = {m1: ONE}
            else:
                raw = self._nf(m1.letters() + m2.letters())
                scale = Cyclotomic3(1, 0) / (m1.norm() * m2.norm())
                cached = {k: v * scale for k, v in raw.items()}
            self._mul_cache[key] = cached
        return cached

    # coproduct ---------------------------------------------------------------

    def tensor(self, terms: Mapping | None = None, twist: bool = True) -> "GradedTensor":
        return GradedTensor(self, dict(terms or {}), twist)

    def _generator_delta(self, letter, twist: bool) -> "GradedTensor":
        kind, idx = letter
        xs = list(self._zero_x)
        if kind == X:
            xs[idx] = 1
            m = PBWMonomial(tuple(xs), ())
        else:
            m = PBWMonomial(tuple(xs), (idx,))
        unit = PBWMonomial(self._zero_x, ())
        return GradedTensor(self, {(m, unit): ONE, (unit, m): ONE}, twist)

    def delta_monomial(self, m: PBWMonomial, twist: bool = True) -> "GradedTensor":
        key = (m, twist)
        cached = self._delta_cache.get(key)
        if cached is None:
            unit = PBWMonomial(self._zero_x, ())
            cached = GradedTensor(self, {(unit, unit): ONE}, twist)
            for letter in m.letters():
                cached = cached * self._generator_delta(letter, twist)
            if m.norm() != 1:
                cached = cached.scale(Cyclotomic3(1, 0) / m.norm())
            self._delta_cache[key] = cached
        return cached


class UElement:
    """Element of U(g) in PBW form."""

    __slots__ = ("env", "terms")

    def __init__(self, env: EnvelopingAlgebra, terms: dict):
        self.env = env
        self.terms = terms

    def _check(self, other):
        if not isinstance(other, UElement) or other.env.algebra is not self.env.algebra:
            raise PreconditionError("elements of different enveloping algebras")

    def __add__(self, other):
        if not isinstance(other, UElement):
            other = self.env.one().scale(other)
        self._check(other)
        out = dict(self.terms)
        _acc(out, other.terms, ONE)
        return UElement(self.env, out)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "UElement":
        c = as_cyc(c)
        if not c:
            return self.env.zero()
        return UElement(self.env, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, UElement):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                _acc(out, self.env.mul_monomials(m1, m2), c1 * c2)
        return UElement(self.env, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = self.env.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, UElement):
            return other.env.algebra is self.env.algebra and self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((m.degree for m in self.terms), default=-1)

    def grades(self) -> set[int]:
        return {m.grade for m in self.terms}

    def truncate(self, cap: int) -> "UElement":
        return UElement(self.env, {m: c for m, c in self.terms.items() if m.degree <= cap})

    def coefficient(self, m: PBWMonomial) -> Cyclotomic3:
        return self.terms.get(m, ZERO)

    def __repr__(self):
        return f"UElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({format_cyc(c)})*{m.label()}" for m, c in sorted(self.terms.items(), key=lambda t: (t[0].degree, t[0])))

    def to_json(self) -> dict:
        return {
            "n0": self.env.n0,
            "n1": self.env.n1,
            "terms": [{**m.to_json(), "coeff": format_cyc(c)} for m, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_json(cls, env: EnvelopingAlgebra, doc: Mapping) -> "UElement":
        try:
            terms = {}
            for t in doc["terms"]:
                m = PBWMonomial(tuple(int(v) for v in t["x"]), tuple(int(v) for v in t["y"]))
                terms[m] = terms.get(m, ZERO) + parse_cyc(str(t["coeff"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed enveloping element: {exc}") from exc
        return env.element(terms)


class GradedTensor:
    """Two-fold tensors over U(g); ``twist=False`` drops the q-sign rule."""

    __slots__ = ("env", "terms", "twist")

    def __init__(self, env: EnvelopingAlgebra, terms: dict, twist: bool = True):
        self.env = env
        self.terms = terms
        self.twist = twist

    def __add__(self, other: "GradedTensor") -> "GradedTensor":
        out = dict(self.terms)
        _acc(out, other.terms, ONE)
        return GradedTensor(self.env, out, self.twist)

    def __sub__(self, other: "GradedTensor") -> "GradedTensor":
        out = dict(self.terms)
        _acc(out, other.terms, -ONE)
        return GradedTensor(self.env, out, self.twist)

    def scale(self, c) -> "GradedTensor":
        c = as_cyc(c)
        return GradedTensor(self.env, {k: v * c for k, v in self.terms.items() if v * c}, self.twist)

    def __mul__(self, other):
        if not isinstance(other, GradedTensor):
            return self.scale(other)
        env = self.env
        out: dict = {}
        for (a1, a2), c in self.terms.items():
            ga2 = a2.grade
            for (b1, b2), d in other.terms.items():
                sign = qpow(ga2 * b1.grade) if self.twist else ONE
                coeff = c * d * sign
                left = env.mul_monomials(a1, b1)
                right = env.mul_monomials(a2, b2)
                for l, cl in left.items():
                    for r, cr in right.items():
                        _acc(out, {(l, r): cr}, coeff * cl)
        return GradedTensor(env, out, self.twist)

    def __eq__(self, other):
        if isinstance(other, GradedTensor):
            return self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    def truncate(self, cap: int) -> "GradedTensor":
        return GradedTensor(self.env, {k: v for k, v in self.terms.items() if k[0].degree + k[1].degree <= cap}, self.twist)

    def coefficient(self, left: PBWMonomial, right: PBWMonomial) -> Cyclotomic3:
        return self.terms.get((left, right), ZERO)

    def apply(self, f_left, f_right) -> "GradedTensor":
        """(f_left (x) f_right) applied termwise; maps send monomials to UElements."""
        out: dict = {}
        for (l, r), c in self.terms.items():
            fl, fr = f_left(l), f_right(r)
            for ml, cl in fl.terms.items():
                for mr, cr in fr.terms.items():
                    _acc(out, {(ml, mr): cr}, c * cl)
        return GradedTensor(self.env, out, self.twist)

    def multiply_out(self) -> UElement:
        """The multiplication map U (x) U -> U."""
        out: dict = {}
        for (l, r), c in self.terms.items():
            _acc(out, self.env.mul_monomials(l, r), c)
        return UElement(self.env, out)

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: (-t[0][0].degree, t[0]))
        return " + ".join(f"({format_cyc(c)}) {l.label()} (x) {r.label()}" for (l, r), c in items)

    def __repr__(self):
        return f"GradedTensor({self})"

    def to_json(self) -> dict:
        return {
            "twist": self.twist,
            "terms": [
                {"left": l.to_json(), "right": r.to_json(), "coeff": format_cyc(c)} for (l, r), c in sorted(self.terms.items())
            ],
        }


# ---------------------------------------------------------------------------
# functional interface


def u_normalize(env: EnvelopingAlgebra, letters: Iterable) -> UElement:
    """PBW normal form of a word of letters such as ``"X1"``, ``("Y", 2)``."""
    return env.normalize(letters)


def u_mul(a: UElement, b: UElement) -> UElement:
    return a * b


def coproduct(u: UElement, twist: bool = True) -> GradedTensor:
    out = GradedTensor(u.env, {}, twist)
    for m, c in u.terms.items():
        out = out + u.env.delta_monomial(m, twist).scale(c)
    return out


def counit(u: UElement) -> Cyclotomic3:
    return u.terms.get(PBWMonomial(u.env._zero_x, ()), ZERO)


def antipode(u: UElement, braided: bool = False) -> UElement:
    """S with S(g) = -g on generators, extended as an anti-morphism.

    ``braided=False`` uses S(ab) = S(b)S(a).  ``braided=True`` uses the graded
    rule S(ab) = q^{gr(a)gr(b)} S(b)S(a), which is the extension satisfying
    m(S (x) id)Delta = eta epsilon for the q-twisted coproduct.
    """
    env = u.env
    out: dict = {}
    for m, c in u.terms.items():
        letters = m.letters()
        n_y = len(m.y)
        sign = (-1) ** len(letters)
        scale = c * sign / m.norm()
        if braided:
            scale = scale * qpow(n_y * (n_y - 1) // 2)
        _acc(out, env._nf(tuple(reversed(letters))), scale)
    return UElement(env, out)


def _report_from(name: str, pairs: list[tuple[str, object]]) -> AxiomResult:
    witness = None
    for where, residual in pairs:
        if residual and witness is None:
            witness = f"{where}: residual {residual}"
    return AxiomResult(name, witness is None, len(pairs), witness)


def check_bracket_coproduct(algebra: LieOrder3Algebra | EnvelopingAlgebra, twist: bool = True) -> AxiomReport:
    """Compare {Delta Y_i, Delta Y_j, Delta Y_k} with Delta{Y_i, Y_j, Y_k} on every triple."""
    env = algebra if isinstance(algebra, EnvelopingAlgebra) else EnvelopingAlgebra(algebra)
    A = env.algebra
    deltas = [coproduct(env.y(i), twist) for i in range(1, env.n1 + 1)]
    pair_cache: dict = {}
    pairs = []
    for i, j, k in product(range(env.n1), repeat=3):
        lhs = GradedTensor(env, {}, twist)
        for p, q_, r in permutations((i, j, k)):
            if (p, q_) not in pair_cache:
                pair_cache[(p, q_)] = deltas[p] * deltas[q_]
            lhs = lhs + pair_cache[(p, q_)] * deltas[r]
        bracket = env.zero()
        for c, v in A.yyy(i, j, k).items():
            bracket = bracket + env.x(c + 1).scale(v)
        rhs = coproduct(bracket, twist)
        pairs.append((f"triple (Y{i + 1},Y{j + 1},Y{k + 1})", lhs - rhs))
    return AxiomReport([_report_from("bracket-coproduct" + ("" if twist else "-ungraded"), pairs)])


def check_antipode_axiom(env: EnvelopingAlgebra, max_degree: int = 3, braided: bool = False) -> AxiomReport:
    """m(S (x) id)Delta(g) = epsilon(g) 1 on every PBW monomial g up to ``max_degree``."""
    pairs = []
    s = lambda m: antipode(env.monomial(m), braided)
    ident = env.monomial
    for d in range(max_degree + 1):
        for g in pbw_basis(env.n0, env.n1, d):
            lhs = env.delta_monomial(g).apply(s, ident).multiply_out()
            rhs = env.one().scale(counit(env.monomial(g)))
            pairs.append((g.label(), lhs - rhs))
    return AxiomReport([_report_from("antipode-axiom" + ("-braided" if braided else ""), pairs)])


def truncated_exp(u: UElement, cap: int) -> UElement:
    """sum_{m <= cap} u^m / m!, with PBW terms of degree > cap discarded."""
    if counit(u):
        raise PreconditionError("exponential needs an element without constant term")
    out = u.env.one()
    power = u.env.one()
    for m in range(1, cap + 1):
        power = power * u
        out = out + power.scale(Cyclotomic3(1, 0) / factorial(m))
    return out.truncate(cap)


def _tensor_exp(t: GradedTensor, cap: int) -> GradedTensor:
    env = t.env
    unit = PBWMonomial(env._zero_x, ())
    out = GradedTensor(env, {(unit, unit): ONE}, t.twist)
    power = out
    for m in range(1, cap + 1):
        power = power * t
        out = out + power.scale(Cyclotomic3(1, 0) / factorial(m))
    return out.truncate(cap)


@dataclass
class GroupLikeReport:
    cap: int
    morphism: bool
    factorized: bool
    antipode: bool
    counit: bool
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "cap": self.cap,
            "delta_exp_equals_exp_delta": self.morphism,
            "delta_exp_equals_exp_tensor_exp": self.factorized,
            "antipode_exp_equals_exp_minus": self.antipode,
            "counit_exp_equals_one": self.counit,
            "witnesses": dict(sorted(self.witnesses.items())),
        }


def group_like_report(u: UElement, cap: int) -> GroupLikeReport:
    """Compare Delta(e^u) with e^{Delta u} and with e^u (x) e^u, all modulo degree > cap.

    Also records S(e^u) = e^{-u} (plain anti-morphism S) and epsilon(e^u) = 1.
    The factorized comparison is informational: under the q-sign rule it
    need not hold for elements of nonzero grade.
    """
    env = u.env
    e = truncated_exp(u, cap)
    lhs = coproduct(e).truncate(cap)
    rhs = _tensor_exp(coproduct(u), cap)
    fact = GradedTensor(env, {(l, r): cl * cr for l, cl in e.terms.items() for r, cr in e.terms.items()}, True).truncate(cap)
    s_lhs = antipode(e).truncate(cap)
    s_rhs = truncated_exp(-u, cap)
    witnesses = {}
    if lhs != rhs:
        witnesses["morphism"] = str(lhs - rhs)
    if lhs != fact:
        witnesses["factorized"] = str(lhs - fact)
    if s_lhs != s_rhs:
        witnesses["antipode"] = str(s_lhs - s_rhs)
    return GroupLikeReport(cap, lhs == rhs, lhs == fact, s_lhs == s_rhs, counit(e) == ONE, witnesses)


# ---------------------------------------------------------------------------
# dual algebra


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def pbw_basis(n0: int, n1: int, degree: int) -> list[PBWMonomial]:
    """PBW monomials of exactly the given total degree."""
    out = []
    for ylen in range(degree + 1):
        if n1 == 0 and ylen:
            continue
        words = enumerate_basis(n1, ylen) if n1 else [()]
        for xs in _compositions(degree - ylen, n0):
            out.extend(PBWMonomial(xs, w) for w in words)
    return out


def _as_dual(env: EnvelopingAlgebra, u) -> DualMonomial:
    if isinstance(u, DualMonomial):
        d = u
    else:
        d = DualMonomial(tuple(u[0]), tuple(u[1]))
    env._check_monomial(d.as_pbw())
    return d


def dual_multiply(env: EnvelopingAlgebra, u: DualMonomial, v: DualMonomial, cap: int) -> dict:
    """Product of two dual basis elements, transposing the coproduct.

    The coefficient of g^{c,I} is <u (x) v, Delta g_{c,I}>; basis elements of
    degree deg(u) + deg(v) up to ``cap`` are scanned (lower degrees cannot pair).
    """
    u, v = _as_dual(env, u), _as_dual(env, v)
    lo = u.degree + v.degree
    if lo > cap:
        raise CapExceededError(f"product degree {lo} exceeds cap {cap}")
    key = (u.as_pbw(), v.as_pbw())
    out = {}
    for d in range(lo, cap + 1):
        for g in pbw_basis(env.n0, env.n1, d):
            c = env.delta_monomial(g).terms.get(key)
            if c:
                out[DualMonomial(g.x, g.y)] = c
    return out


def dual_product(env: EnvelopingAlgebra, a: Mapping, b: Mapping, cap: int) -> dict:
    """Bilinear extension of :func:`dual_multiply` to combinations."""
    out: dict = {}
    for u, cu in a.items():
        for v, cv in b.items():
            _acc(out, dual_multiply(env, u, v, cap), cu * cv)
    return out


def _fmt_dual(comb: Mapping) -> str:
    if not comb:
        return "0"
    return " + ".join(f"({format_cyc(c)}){m.label()}" for m, c in sorted(comb.items()))


@dataclass
class ThetaReport:
    n1: int
    cap: int
    expansions: dict
    relation_sums: dict
    associative: bool
    relations_hold: bool
    alpha_commute: bool

    @property
    def passed(self) -> bool:
        return self.associative and self.relations_hold and self.alpha_commute

    def to_json(self) -> dict:
        return {
            "n1": self.n1,
            "cap": self.cap,
            "expansions": {k: _fmt_dual(v) for k, v in sorted(self.expansions.items())},
            "relation_sums": {k: _fmt_dual(v) for k, v in sorted(self.relation_sums.items())},
            "associative": self.associative,
            "relations_hold": self.relations_hold,
            "alpha_commute": self.alpha_commute,
            "passed": self.passed,
        }


def derive_theta_relations(n1: int, cap: int = 3, algebra: LieOrder3Algebra | None = None) -> ThetaReport:
    """Products of the dual variables theta^i, checked against the cubic relation.

    By default the algebra is the bracket-free one with a single X, whose
    coproduct is the same on generators as for any other algebra.
    """
    if cap < 3:
        raise PreconditionError("cap must be >= 3 to see cubic relations")
    env = EnvelopingAlgebra(algebra or trivial_algebra(1, n1))
    zx = (0,) * env.n0
    theta = {i: {DualMonomial(zx, (i,)): ONE} for i in range(1, n1 + 1)}
    mul = lambda a, b: dual_product(env, a, b, cap)
    name = lambda *idx: " ".join(f"t{i}" for i in idx)

    expansions = {}
    pair = {}
    for i, j in product(range(1, n1 + 1), repeat=2):
        pair[(i, j)] = mul(theta[i], theta[j])
        expansions[name(i, j)] = pair[(i, j)]
    triple = {}
    associative = True
    for i, j, k in product(range(1, n1 + 1), repeat=3):
        left = mul(pair[(i, j)], theta[k])
        right = mul(theta[i], pair[(j, k)])
        associative &= left == right
        triple[(i, j, k)] = left
        expansions[name(i, j, k)] = left
    relation_sums = {}
    for i, j, k in product(range(1, n1 + 1), repeat=3):
        if not i <= j <= k:
            continue
        total: dict = {}
        for p in ((i, j, k), (j, k, i), (k, i, j), (i, k, j), (j, i, k), (k, j, i)):
            _acc(total, triple[p], ONE)
        relation_sums[name(i, j, k)] = total
    relations_hold = not any(relation_sums.values())

    alpha_commute = True
    for a in range(env.n0):
        ea = tuple(1 if t == a else 0 for t in range(env.n0))
        alpha = {DualMonomial(ea, ()): ONE}
        for b in range(env.n0):
            eb = tuple(1 if t == b else 0 for t in range(env.n0))
            beta = {DualMonomial(eb, ()): ONE}
            alpha_commute &= mul(alpha, beta) == mul(beta, alpha)
        for i in range(1, n1 + 1):
            alpha_commute &= mul(alpha, theta[i]) == mul(theta[i], alpha)
    return ThetaReport(n1, cap, expansions, relation_sums, associative, relations_hold, alpha_commute)

"""Lie algebras of order 3 given by structure constants.

An algebra is ``g0 + g1 (+ g2)``: ``g0`` a Lie algebra with basis X_a, acting on
``g1`` (basis Y_i) and ``g2`` (basis Z_u), plus totally symmetric 3-brackets
``{Y_i, Y_j, Y_k}`` and ``{Z_u, Z_v, Z_w}`` valued in ``g0``.  Basis indices are
0-based here.  Sparse vectors are plain ``dict[int, Cyclotomic3]``.

3-brackets are stored un-normalized under the sorted index triple, so any
permutation of the arguments reads the same value.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations
from typing import Iterable, Mapping

import numpy as np

from . import linalg
from .errors import ParseError, PreconditionError
from .scalars import ONE, ZERO, Cyclotomic3, as_cyc, format_cyc, parse_cyc, qpow

Vector = dict  # dict[int, Cyclotomic3]

__all__ = [
    "LieOrder3Algebra",
    "MatrixRep",
    "AxiomResult",
    "AxiomReport",
    "GradeAutomorphism",
    "check_axioms",
    "check_representation",
    "build_gl",
    "build_gl_el",
    "build_poincare_cubic",
    "apply_grade_automorphism",
    "constants_from_rep",
]


def _vadd(acc: dict, vec: Mapping, scale=ONE) -> dict:
    for k, v in vec.items():
        s = acc.get(k, ZERO) + scale * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


def _clean(vec: Mapping) -> dict:
    return {k: v for k, v in vec.items() if v}


def _fmt_vec(vec: Mapping, prefix: str) -> str:
    if not vec:
        return "0"
    return " + ".join(f"({format_cyc(c)}){prefix}{k}" for k, c in sorted(vec.items()))


@dataclass(frozen=True)
class LieOrder3Algebra:
    n0: int
    n1: int
    n2: int = 0
    f: Mapping[tuple[int, int], Mapping[int, Cyclotomic3]] = field(default_factory=dict)
    r1: Mapping[tuple[int, int], Mapping[int, Cyclotomic3]] = field(default_factory=dict)
    r2: Mapping[tuple[int, int], Mapping[int, Cyclotomic3]] = field(default_factory=dict)
    t1: Mapping[tuple[int, int, int], Mapping[int, Cyclotomic3]] = field(default_factory=dict)
    t2: Mapping[tuple[int, int, int], Mapping[int, Cyclotomic3]] = field(default_factory=dict)
    names: Mapping[str, tuple[str, ...]] | None = None

    @classmethod
    def from_constants(
        cls,
        n0: int,
        n1: int,
        n2: int = 0,
        *,
        f: Iterable = (),
        r1: Iterable = (),
        r2: Iterable = (),
        t1: Iterable = (),
        t2: Iterable = (),
        names: Mapping[str, Iterable[str]] | None = None,
    ) -> "LieOrder3Algebra":
        """Build from sparse lists of ``(indices..., coeff)`` tuples.

        Entries with the same key accumulate.  For the 3-brackets, entries
        given under different permutations of one triple must agree.
        """
        if min(n0, n1, n2) < 0:
            raise PreconditionError("dimensions must be non-negative")

        def pairs(entries, dims, label):
            out: dict = defaultdict(dict)
            for *idx, c, coeff in entries:
                idx = tuple(int(i) for i in idx)
                for i, d in zip(idx + (int(c),), dims):
                    if not 0 <= i < d:
                        raise PreconditionError(f"{label} index {i} out of range")
                _vadd(out[idx], {int(c): as_cyc(coeff)})
            return {k: v for k, v in out.items() if v}

        def triples(entries, d, label):
            seen: dict = {}
            for i, j, k, c, coeff in entries:
                key = (int(i), int(j), int(k))
                for x in key:
                    if not 0 <= x < d:
                        raise PreconditionError(f"{label} index {x} out of range")
                if not 0 <= int(c) < n0:
                    raise PreconditionError(f"{label} output index {c} out of range")
                seen.setdefault(key, {})
                _vadd(seen[key], {int(c): as_cyc(coeff)})
            out: dict = {}
            for key, vec in seen.items():
                skey = tuple(sorted(key))
                if skey in out and out[skey] != vec:
                    raise PreconditionError(f"{label} not symmetric at {skey}")
                out[skey] = vec
            return {k: v for k, v in out.items() if v}

        return cls(
            n0,
            n1,
            n2,
            f=pairs(f, (n0, n0, n0), "f"),
            r1=pairs(r1, (n0, n1, n1), "r1"),
            r2=pairs(r2, (n0, n2, n2), "r2"),
            t1=triples(t1, n1, "t1"),
            t2=triples(t2, n2, "t2"),
            names={k: tuple(v) for k, v in names.items()} if names else None,
        )

    @property
    def elementary(self) -> bool:
        return self.n2 == 0

    # brackets on basis elements -----------------------------------------

    def xx(self, a: int, b: int) -> Mapping[int, Cyclotomic3]:
        return self.f.get((a, b), {})

    def xy(self, a: int, i: int) -> Mapping[int, Cyclotomic3]:
        return self.r1.get((a, i), {})

    def xz(self, a: int, u: int) -> Mapping[int, Cyclotomic3]:
        return self.r2.get((a, u), {})

    def yyy(self, i: int, j: int, k: int) -> Mapping[int, Cyclotomic3]:
        return self.t1.get(tuple(sorted((i, j, k))), {})

    def zzz(self, u: int, v: int, w: int) -> Mapping[int, Cyclotomic3]:
        return self.t2.get(tuple(sorted((u, v, w))), {})

    def action(self, sector: int):
        """Bracket [X_a, .] on the given graded sector (1 or 2)."""
        return self.xy if sector == 1 else self.xz

    def brace(self, sector: int):
        return self.yyy if sector == 1 else self.zzz

    def dim(self, sector: int) -> int:
        return (self.n0, self.n1, self.n2)[sector]

    # linear extensions -----------------------------------------------------

    def act_vec(self, sector: int, xvec: Mapping, vec: Mapping) -> dict:
        act = self.action(sector)
        out: dict = {}
        for a, ca in xvec.items():
            for i, ci in vec.items():
                _vadd(out, act(a, i), ca * ci)
        return out

    def xx_vec(self, xa: Mapping, xb: Mapping) -> dict:
        out: dict = {}
        for a, ca in xa.items():
            for b, cb in xb.items():
                _vadd(out, self.xx(a, b), ca * cb)
        return out

    def brace_vec(self, sector: int, u: Mapping, v: Mapping, w: Mapping) -> dict:
        br = self.brace(sector)
        out: dict = {}
        for i, ci in u.items():
            for j, cj in v.items():
                cij = ci * cj
                for k, ck in w.items():
                    _vadd(out, br(i, j, k), cij * ck)
        return out

    # interchange ---------------------------------------------------------

    def to_json(self) -> dict:
        def flat2(d):
            return [[*k, c, format_cyc(v)] for k, vec in sorted(d.items()) for c, v in sorted(vec.items())]

        doc = {
            "n0": self.n0,
            "n1": self.n1,
            "n2": self.n2,
            "f": flat2(self.f),
            "r1": flat2(self.r1),
            "r2": flat2(self.r2),
            "t1": flat2(self.t1),
            "t2": flat2(self.t2),
        }
        if self.names:
            doc["names"] = {k: list(v) for k, v in sorted(self.names.items())}
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "LieOrder3Algebra":
        try:
            parsed = {
                key: [tuple(int(x) for x in row[:-1]) + (parse_cyc(str(row[-1])),) for row in doc.get(key, [])]
                for key in ("f", "r1", "r2", "t1", "t2")
            }
            return cls.from_constants(int(doc["n0"]), int(doc["n1"]), int(doc.get("n2", 0)), names=doc.get("names"), **parsed)
        except PreconditionError:
            raise
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"malformed algebra document: {exc}") from exc


# ---------------------------------------------------------------------------
# axiom verification


@dataclass
class AxiomResult:
    name: str
    passed: bool
    checked: int
    witness: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "witness": self.witness}


@dataclass
class AxiomReport:
    results: list[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def __getitem__(self, name: str) -> AxiomResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)

    def first_failure(self) -> AxiomResult | None:
        return next((r for r in self.results if not r.passed), None)

    def to_json(self) -> dict:
        return {"passed": self.passed, "results": [r.to_json() for r in self.results]}

    def __str__(self):
        lines = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            tail = f"  witness: {r.witness}" if r.witness else ""
            lines.append(f"{status} {r.name} ({r.checked} instances){tail}")
        return "\n".join(lines)


class _Checker:
    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.witness: str | None = None

    def expect_zero(self, residual: Mapping, where: str, prefix: str):
        self.checked += 1
        if self.witness is None and any(residual.values()):
            self.witness = f"{where}: residual {_fmt_vec(_clean(residual), prefix)}"

    def result(self) -> AxiomResult:
        return AxiomResult(self.name, self.witness is None, self.checked, self.witness)


def check_axioms(A: LieOrder3Algebra) -> AxiomReport:
    """Verify every defining identity of a Lie algebra of order 3.

    Equivariance of the 3-bracket is read as the derivation rule
    ``[X,{Y1,Y2,Y3}] = {[X,Y1],Y2,Y3} + {Y1,[X,Y2],Y3} + {Y1,Y2,[X,Y3]}``.
    """
    results = []
    n0 = A.n0

    anti = _Checker("g0-antisymmetry")
    for a in range(n0):
        for b in range(a, n0):
            anti.expect_zero(_vadd(dict(A.xx(a, b)), A.xx(b, a)), f"[X{a},X{b}] + [X{b},X{a}]", "X")
    results.append(anti.result())

    jac = _Checker("g0-jacobi")
    for a in range(n0):
        for b in range(n0):
            for c in range(n0):
                res: dict = {}
                _vadd(res, A.xx_vec(A.xx(a, b), {c: ONE}))
                _vadd(res, A.xx_vec(A.xx(b, c), {a: ONE}))
                _vadd(res, A.xx_vec(A.xx(c, a), {b: ONE}))
                jac.expect_zero(res, f"Jacobi(X{a},X{b},X{c})", "X")
    results.append(jac.result())

    for sector, label in ((1, "Y"), (2, "Z")):
        d = A.dim(sector)
        if d == 0:
            continue
        act = A.action(sector)
        mod = _Checker(f"g{sector}-module")
        for a in range(n0):
            for b in range(n0):
                for i in range(d):
                    lhs = A.act_vec(sector, A.xx(a, b), {i: ONE})
                    rhs = A.act_vec(sector, {a: ONE}, act(b, i))
                    _vadd(rhs, A.act_vec(sector, {b: ONE}, act(a, i)), -ONE)
                    mod.expect_zero(_vadd(lhs, rhs, -ONE), f"[[X{a},X{b}],{label}{i}]", label)
        results.append(mod.result())

        equi = _Checker(f"g{sector}-equivariance")
        for a in range(n0):
            for i, j, k in combinations_with_replacement(range(d), 3):
                lhs = A.xx_vec({a: ONE}, A.brace(sector)(i, j, k))
                rhs = A.brace_vec(sector, act(a, i), {j: ONE}, {k: ONE})
                _vadd(rhs, A.brace_vec(sector, {i: ONE}, act(a, j), {k: ONE}))
                _vadd(rhs, A.brace_vec(sector, {i: ONE}, {j: ONE}, act(a, k)))
                equi.expect_zero(_vadd(lhs, rhs, -ONE), f"[X{a},{{{label}{i},{label}{j},{label}{k}}}]", "X")
        results.append(equi.result())

        j3 = _Checker(f"g{sector}-jacobi3")
        for quad in combinations_with_replacement(range(d), 4):
            res: dict = {}
            for pos in range(4):
                rest = quad[:pos] + quad[pos + 1 :]
                # [Y, {..}] = -[{..}, Y]
                _vadd(res, A.act_vec(sector, A.brace(sector)(*rest), {quad[pos]: ONE}), -ONE)
            j3.expect_zero(res, "sum_j [" + label + "_j, {others}] for " + str(quad), label)
        results.append(j3.result())

    return AxiomReport(results)


# ---------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class MatrixRep:
    """Matrices for every basis element on a Z3-graded space.

    ``grades[r]`` is the grade of the r-th coordinate; Y-matrices must raise
    grades by one and Z-matrices by two.
    """

    grades: tuple[int, ...]
    rho0: tuple[np.ndarray, ...]
    rho1: tuple[np.ndarray, ...]
    rho2: tuple[np.ndarray, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.grades)

    def sector(self, s: int) -> tuple[np.ndarray, ...]:
        return (self.rho0, self.rho1, self.rho2)[s]

    def image(self, sector: int, vec: Mapping) -> np.ndarray:
        out = linalg.zeros(self.dim, self.dim)
        mats = self.sector(sector)
        for k, c in vec.items():
            out = out + mats[k] * c
        return out

    def to_json(self) -> dict:
        def enc(mats):
            return [[[format_cyc(v) for v in row] for row in m] for m in mats]

        return {"grades": list(self.grades), "rho0": enc(self.rho0), "rho1": enc(self.rho1), "rho2": enc(self.rho2)}

    @classmethod
    def from_json(cls, doc: Mapping) -> "MatrixRep":
        try:
            grades = tuple(int(g) % 3 for g in doc["grades"])
            dec = lambda key: tuple(linalg.cyc_array(m) if m else linalg.zeros(len(grades), len(grades)) for m in doc.get(key, []))
            return cls(grades, dec("rho0"), dec("rho1"), dec("rho2"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed representation document: {exc}") from exc


def _mat_residual(lhs: np.ndarray, rhs: np.ndarray) -> dict:
    diff = lhs - rhs
    return {(i, j): v for (i, j), v in np.ndenumerate(diff) if v}


def check_representation(A: LieOrder3Algebra, R: MatrixRep) -> AxiomReport:
    """Check the representation conditions, including the 6-term symmetrized product."""
    d = R.dim
    if len(R.rho0) != A.n0 or len(R.rho1) != A.n1 or len(R.rho2) != A.n2:
        raise PreconditionError("representation does not match algebra dimensions")
    for mats in (R.rho0, R.rho1, R.rho2):
        for m in mats:
            if m.shape != (d, d):
                raise PreconditionError(f"matrix of shape {m.shape}, expected {(d, d)}")
    results = []

    def mcheck(name):
        return _Checker(name)

    def expect(chk, lhs, rhs, where):
        chk.checked += 1
        if chk.witness is None:
            res = _mat_residual(lhs, rhs)
            if res:
                (i, j), v = sorted(res.items())[0]
                chk.witness = f"{where}: entry ({i},{j}) differs by {format_cyc(v)}"

    xx = mcheck("rep-xx-commutator")
    for a in range(A.n0):
        for b in range(A.n0):
            lhs = R.image(0, A.xx(a, b))
            rhs = linalg.matmul(R.rho0[a], R.rho0[b]) - linalg.matmul(R.rho0[b], R.rho0[a])
            expect(xx, lhs, rhs, f"rho([X{a},X{b}])")
    results.append(xx.result())

    for sector, label in ((1, "Y"), (2, "Z")):
        n = A.dim(sector)
        if n == 0:
            continue
        mats = R.sector(sector)
        xs = mcheck(f"rep-x{label.lower()}-commutator")
        for a in range(A.n0):
            for i in range(n):
                lhs = R.image(sector, A.action(sector)(a, i))
                rhs = linalg.matmul(R.rho0[a], mats[i]) - linalg.matmul(mats[i], R.rho0[a])
                expect(xs, lhs, rhs, f"rho([X{a},{label}{i}])")
        results.append(xs.result())

        sym = mcheck(f"rep-{label.lower() * 3}-symmetrized")
        pair = {}
        for i, j, k in combinations_with_replacement(range(n), 3):
            lhs = R.image(0, A.brace(sector)(i, j, k))
            rhs = linalg.zeros(d, d)
            for p, q_, r in set(permutations((i, j, k))):
                if (p, q_) not in pair:
                    pair[(p, q_)] = linalg.matmul(mats[p], mats[q_])
                # repeated letters: each distinct arrangement occurs 6/len(set) times
                rhs = rhs + linalg.matmul(pair[(p, q_)], mats[r]) * (6 // len(set(permutations((i, j, k)))))
            expect(sym, lhs, rhs, f"rho({{{label}{i},{label}{j},{label}{k}}})")
        results.append(sym.result())

    grading = mcheck("rep-grading")
    for sector in (0, 1, 2):
        for idx, m in enumerate(R.sector(sector)):
            grading.checked += 1
            for (r, c), v in np.ndenumerate(m):
                # m maps coordinate c into coordinate r
                if v and (R.grades[r] - R.grades[c]) % 3 != sector and grading.witness is None:
                    grading.witness = f"sector {sector} element {idx}: entry ({r},{c}) maps grade {R.grades[c]} to {R.grades[r]}"
    results.append(grading.result())
    return AxiomReport(results)


def constants_from_rep(R: MatrixRep, n2: int | None = None) -> LieOrder3Algebra:
    """Recover structure constants from a faithful representation.

    Brackets are computed as commutators and as the 6-term symmetrized product,
    then decomposed in the span of the representing matrices.
    """
    flat = lambda m: [as_cyc(v) for v in m.flat]
    basis = [[flat(m) for m in R.sector(s)] for s in (0, 1, 2)]

    def decompose(sector, m, what):
        coeffs = linalg.solve_combination(flat(m), basis[sector])
        if coeffs is None:
            raise PreconditionError(f"{what} leaves the span of the representation")
        return {k: c for k, c in enumerate(coeffs) if c}

    n0, n1 = len(R.rho0), len(R.rho1)
    n2 = len(R.rho2) if n2 is None else n2
    f, r1, r2, t1, t2 = [], [], [], [], []
    for a in range(n0):
        for b in range(n0):
            m = linalg.matmul(R.rho0[a], R.rho0[b]) - linalg.matmul(R.rho0[b], R.rho0[a])
            f += [(a, b, c, v) for c, v in decompose(0, m, "[X,X]").items()]
    for sector, out, trip in ((1, r1, t1), (2, r2, t2)):
        mats = R.sector(sector)
        for a in range(n0):
            for i in range(len(mats)):
                m = linalg.matmul(R.rho0[a], mats[i]) - linalg.matmul(mats[i], R.rho0[a])
                out += [(a, i, j, v) for j, v in decompose(sector, m, "[X,Y]").items()]
        for i, j, k in combinations_with_replacement(range(len(mats)), 3):
            m = linalg.zeros(R.dim, R.dim)
            for p, q_, r in permutations((i, j, k)):
                m = m + linalg.matmul(linalg.matmul(mats[p], mats[q_]), mats[r])
            trip += [(i, j, k, c, v) for c, v in decompose(0, m, "{Y,Y,Y}").items()]
    return LieOrder3Algebra.from_constants(n0, n1, n2, f=f, r1=r1, r2=r2, t1=t1, t2=t2)


# ---------------------------------------------------------------------------
# built-in algebras


def _blocks(m1: int, m2: int, m3: int) -> list[range]:
    if min(m1, m2, m3) < 1:
        raise PreconditionError("block sizes must be >= 1")
    return [range(0, m1), range(m1, m1 + m2), range(m1 + m2, m1 + m2 + m3)]


# (row block, column block) of the Y and Z generators, in the listed order
_Y_BLOCKS = ((0, 1), (1, 2), (2, 0))
_Z_BLOCKS = ((1, 0), (2, 1), (0, 2))


def _gl_structure(m1: int, m2: int, m3: int, with_z: bool):
    blocks = _blocks(m1, m2, m3)
    size = m1 + m2 + m3
    xs = [(i, j) for blk in blocks for i in blk for j in blk]
    ys = [(i, j) for rb, cb in _Y_BLOCKS for i in blocks[rb] for j in blocks[cb]]
    zs = [(i, j) for rb, cb in _Z_BLOCKS for i in blocks[rb] for j in blocks[cb]] if with_z else []
    xi = {e: n for n, e in enumerate(xs)}

    def act(targets):
        tindex = {e: n for n, e in enumerate(targets)}
        out = []
        for a, (I, J) in enumerate(xs):
            for i, (K, L) in enumerate(targets):
                # [X_I^J, T_K^L] = delta^J_K T_I^L - delta^L_I T_K^J
                if J == K:
                    out.append((a, i, tindex[(I, L)], 1))
                if L == I:
                    out.append((a, i, tindex[(K, J)], -1))
        return out

    def brace(targets):
        out = []
        for i, j, k in combinations_with_replacement(range(len(targets)), 3):
            (I, J), (K, L), (M, N) = targets[i], targets[j], targets[k]
            terms = [
                (J == K and L == M, (I, N)),
                (N == I and J == K, (M, L)),
                (L == M and N == I, (K, J)),
                (J == M and N == K, (I, L)),
                (N == K and L == I, (M, J)),
                (L == I and J == M, (K, N)),
            ]
            for cond, e in terms:
                if cond:
                    out.append((i, j, k, xi[e], 1))
        return out

    f = act(xs)
    label = lambda pre, es: tuple(f"{pre}_{i + 1}^{j + 1}" for i, j in es)
    names = {"g0": label("X", xs), "g1": label("Y", ys)}
    if with_z:
        names["g2"] = label("Z", zs)
    alg = LieOrder3Algebra.from_constants(
        len(xs), len(ys), len(zs), f=f, r1=act(ys), r2=act(zs) if with_z else (), t1=brace(ys), t2=brace(zs) if with_z else (), names=names
    )

    def unit(I, J):
        m = linalg.zeros(size, size)
        m[I, J] = ONE
        return m

    # coordinate grades chosen so that Y raises grade by one
    block_grade = (0, 2, 1)
    grades = tuple(block_grade[b] for b, blk in enumerate(blocks) for _ in blk)
    rep = MatrixRep(
        grades,
        tuple(unit(*e) for e in xs),
        tuple(unit(*e) for e in ys),
        tuple(unit(*e) for e in zs),
    )
    return alg, rep


def build_gl(m1: int, m2: int, m3: int) -> tuple[LieOrder3Algebra, MatrixRep]:
    """gl(m1, m2, m3) with its defining representation."""
    return _gl_structure(m1, m2, m3, with_z=True)


def build_gl_el(m1: int, m2: int, m3: int) -> tuple[LieOrder3Algebra, MatrixRep]:
    """The elementary algebra gl_el(m1, m2, m3): only the b-blocks in grade one."""
    return _gl_structure(m1, m2, m3, with_z=False)


def build_poincare_cubic(D: int) -> LieOrder3Algebra:
    """Cubic extension of the D-dimensional Poincare algebra.

    Basis order: L_{mu nu} (mu < nu, lexicographic), then P_mu; g1 = V_mu.
    Metric diag(1, -1, ..., -1).
    """
    if D < 2:
        raise PreconditionError("D must be >= 2")
    eta = lambda m, n: 0 if m != n else (1 if m == 0 else -1)
    lidx = {}
    for m in range(D):
        for n in range(m + 1, D):
            lidx[(m, n)] = len(lidx)
    nl = len(lidx)
    P = lambda m: nl + m

    def L(m, n):
        # (sign, index) with L_{nm} = -L_{mn}, L_{mm} = 0
        if m == n:
            return None
        return (1, lidx[(m, n)]) if m < n else (-1, lidx[(n, m)])

    f, r1, t1 = [], [], []

    def add_l(out, key, coeff, m, n):
        if coeff and (ln := L(m, n)):
            out.append((*key, ln[1], coeff * ln[0]))

    for (m, n), a in lidx.items():
        for (r, s), b in lidx.items():
            add_l(f, (a, b), eta(n, s), r, m)
            add_l(f, (a, b), -eta(m, s), r, n)
            add_l(f, (a, b), eta(n, r), m, s)
            add_l(f, (a, b), -eta(m, r), n, s)
        for r in range(D):
            for coeff, tgt in ((eta(n, r), m), (-eta(m, r), n)):
                if coeff:
                    f.append((a, P(r), P(tgt), coeff))
                    f.append((P(r), a, P(tgt), -coeff))
                    r1.append((a, r, tgt, coeff))
    for m, n, r in combinations_with_replacement(range(D), 3):
        for coeff, tgt in ((eta(m, n), r), (eta(m, r), n), (eta(r, n), m)):
            if coeff:
                t1.append((m, n, r, P(tgt), coeff))
    names = {
        "g0": tuple(f"L_{m}{n}" for (m, n) in lidx) + tuple(f"P_{m}" for m in range(D)),
        "g1": tuple(f"V_{m}" for m in range(D)),
    }
    return LieOrder3Algebra.from_constants(nl + D, D, 0, f=f, r1=r1, t1=t1, names=names)


# ---------------------------------------------------------------------------
# grade automorphism


class GradeAutomorphism:
    """epsilon: multiplies the grade-i component by q**i; epsilon**3 = 1."""

    order = 3

    def __init__(self, algebra: LieOrder3Algebra):
        self.algebra = algebra

    def __call__(self, element: Mapping[tuple[int, int], object], times: int = 1) -> dict:
        out = {}
        for (sector, idx), c in element.items():
            if not 0 <= idx < self.algebra.dim(sector):
                raise PreconditionError(f"no basis element {idx} in sector {sector}")
            v = as_cyc(c) * qpow(sector * times)
            if v:
                out[(sector, idx)] = v
        return out


def apply_grade_automorphism(A: LieOrder3Algebra, element: Mapping[tuple[int, int], object], times: int = 1) -> dict:
    """Apply epsilon ``times`` times to ``{(sector, index): coeff}``."""
    return GradeAutomorphism(A)(element, times)

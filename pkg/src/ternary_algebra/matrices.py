"""Matrices over the Roby algebra with the three-block Z3 grading.

A matrix is stored as a sparse map from rise-free words to scalar matrices,
``M = sum_w M_w theta^w``.  Products multiply the scalar parts and send the
concatenated words through the Roby rewriting, so every operation stays exact.

For a block shape ``(m1, m2, m3)`` the entry in row block ``r`` and column
block ``c`` must have grade ``(c - r) mod 3``:

    ( A0  B1  C2 )
    ( C0  A1  B2 )      A grade 0, B grade 1, C grade 2
    ( B0  C1  A2 )
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import CapExceededError, NotInvertibleError, ParseError, PreconditionError
from .roby import RobyElement, _concat, enumerate_basis, reduce_word
from .scalars import ONE, ZERO, Cyclotomic3, as_cyc

__all__ = [
    "LambdaMatrix",
    "Lambda0Matrix",
    "GradedMatrix",
    "InversionStats",
    "GLfCertificate",
    "TangentReport",
    "ccoefficients",
    "invert_lambda0",
    "mat_mul",
    "invert_block",
    "is_glf_member",
    "exp_nilpotent",
    "group_element",
    "infinitesimal_limit",
    "default_cap",
    "random_group_element",
]

BLOCK_NAMES = {
    (0, 0): "A0", (1, 1): "A1", (2, 2): "A2",
    (0, 1): "B1", (1, 2): "B2", (2, 0): "B0",
    (1, 0): "C0", (2, 1): "C1", (0, 2): "C2",
}
BLOCK_POS = {name: pos for pos, name in BLOCK_NAMES.items()}


def _nonzero(m: np.ndarray) -> bool:
    return any(bool(v) for v in m.flat)


class LambdaMatrix:
    """rows x cols matrix with entries in the Roby algebra on p generators."""

    __slots__ = ("rows", "cols", "p", "parts")

    def __init__(self, rows: int, cols: int, p: int, parts: Mapping[tuple, np.ndarray] | None = None):
        if p < 1:
            raise PreconditionError("need at least one theta generator")
        self.rows, self.cols, self.p = rows, cols, p
        clean = {}
        for w, m in (parts or {}).items():
            if m.shape != (rows, cols):
                raise PreconditionError(f"part {w} has shape {m.shape}, expected {(rows, cols)}")
            if _nonzero(m):
                clean[tuple(w)] = m
        self.parts = clean

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, rows: int, cols: int, p: int) -> "LambdaMatrix":
        return cls(rows, cols, p)

    @classmethod
    def identity(cls, k: int, p: int) -> "LambdaMatrix":
        return cls(k, k, p, {(): linalg.identity(k)})

    @classmethod
    def constant(cls, m, p: int) -> "LambdaMatrix":
        m = m if isinstance(m, np.ndarray) and m.dtype == object else linalg.cyc_array(m)
        return cls(m.shape[0], m.shape[1], p, {(): m})

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[RobyElement]], p: int) -> "LambdaMatrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        parts: dict = {}
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise PreconditionError("ragged matrix")
            for j, e in enumerate(row):
                if e.n != p:
                    raise PreconditionError(f"entry ({i},{j}) lives over {e.n} generators, expected {p}")
                for w, c in e.terms.items():
                    if w not in parts:
                        parts[w] = linalg.zeros(rows, cols)
                    parts[w][i, j] = c
        return cls(rows, cols, p, parts)

    @classmethod
    def from_terms(cls, rows: int, cols: int, p: int, terms: Iterable[tuple]) -> "LambdaMatrix":
        """From ``(i, j, word, coeff)`` tuples; non-canonical words are reduced."""
        out = cls.zero(rows, cols, p)
        for i, j, word, coeff in terms:
            e = RobyElement(p, {tuple(word): coeff})
            out = out + LambdaMatrix(rows, cols, p, {w: _unit(rows, cols, i, j, c) for w, c in e.terms.items()})
        return out

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> RobyElement:
        return RobyElement(self.p, {w: m[i, j] for w, m in self.parts.items() if m[i, j]}, _canonical=True)

    def entries(self) -> list[list[RobyElement]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def const(self) -> np.ndarray:
        return self.parts.get((), linalg.zeros(self.rows, self.cols))

    def degree_part(self, d: int) -> "LambdaMatrix":
        return LambdaMatrix(self.rows, self.cols, self.p, {w: m for w, m in self.parts.items() if len(w) == d})

    def degrees(self) -> set[int]:
        return {len(w) for w in self.parts}

    def max_degree(self) -> int:
        return max(self.degrees(), default=-1)

    def block(self, rows: range, cols: range) -> "LambdaMatrix":
        return LambdaMatrix(
            len(rows), len(cols), self.p,
            {w: m[rows.start : rows.stop, cols.start : cols.stop] for w, m in self.parts.items()},
        )

    def is_zero(self) -> bool:
        return not self.parts

    def __bool__(self):
        return bool(self.parts)

    # arithmetic -----------------------------------------------------------

    def _same_shape(self, other: "LambdaMatrix"):
        if not isinstance(other, LambdaMatrix) or self.shape != other.shape or self.p != other.p:
            raise PreconditionError("shape or generator-count mismatch")

    def __add__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        self._same_shape(other)
        parts = dict(self.parts)
        for w, m in other.parts.items():
            parts[w] = parts[w] + m if w in parts else m
        return LambdaMatrix(self.rows, self.cols, self.p, parts)

    def __neg__(self) -> "LambdaMatrix":
        return LambdaMatrix(self.rows, self.cols, self.p, {w: -m for w, m in self.parts.items()})

    def __sub__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        return self + (-other)

    def scale(self, c) -> "LambdaMatrix":
        c = as_cyc(c)
        return LambdaMatrix(self.rows, self.cols, self.p, {w: m * c for w, m in self.parts.items()})

    def __matmul__(self, other: "LambdaMatrix") -> "LambdaMatrix":
        return _product(self, other, None)

    def __eq__(self, other):
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return self.shape == other.shape and self.p == other.p and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"LambdaMatrix({self.rows}x{self.cols}, p={self.p}, degrees={sorted(self.degrees())})"

    # interchange ----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "p": self.p,
            "entries": [[e.to_json()["terms"] for e in row] for row in self.entries()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "LambdaMatrix":
        p, entries = _decode_entries(doc)
        rows = len(entries)
        return cls.from_entries(entries, p) if rows else cls.zero(0, int(doc.get("cols", 0)), p)


def _unit(rows, cols, i, j, c) -> np.ndarray:
    m = linalg.zeros(rows, cols)
    m[i, j] = as_cyc(c)
    return m


def _decode_entries(doc: Mapping) -> tuple[int, list[list[RobyElement]]]:
    try:
        p = int(doc["p"])
        entries = [[RobyElement.from_json({"n": p, "terms": cell}) for cell in row] for row in doc["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise ParseError(f"malformed matrix document: {exc}") from exc
    return p, entries


def _product(a: LambdaMatrix, b: LambdaMatrix, stats: "InversionStats | None") -> LambdaMatrix:
    if a.cols != b.rows or a.p != b.p:
        raise PreconditionError(f"cannot multiply {a.shape} by {b.shape}")
    parts: dict = {}
    for u, ma in a.parts.items():
        for v, mb in b.parts.items():
            prod = linalg.matmul(ma, mb)
            if not _nonzero(prod):
                continue
            expansion = _concat(u, v)
            if stats is not None and len(u) == 3 and len(v) == 3 and expansion != ((u + v, 1),):
                stats.ccoefficient_products += 1
            for w, c in expansion:
                t = prod * c
                parts[w] = parts[w] + t if w in parts else t
    return LambdaMatrix(a.rows, b.cols, a.p, parts)


class Lambda0Matrix(LambdaMatrix):
    """Square matrix whose entries only involve words of length divisible by three."""

    __slots__ = ()

    def __init__(self, rows: int, cols: int, p: int, parts=None):
        super().__init__(rows, cols, p, parts)
        if rows != cols:
            raise PreconditionError("Lambda0Matrix must be square")
        bad = [w for w in self.parts if len(w) % 3]
        if bad:
            raise PreconditionError(f"grade-0 matrix has words of nonzero grade, e.g. {bad[0]}")

    @classmethod
    def of(cls, m: LambdaMatrix) -> "Lambda0Matrix":
        if isinstance(m, Lambda0Matrix):
            return m
        return cls(m.rows, m.cols, m.p, m.parts)

    @property
    def size(self) -> int:
        return self.rows


def ccoefficients(u: Sequence[int], v: Sequence[int]) -> dict[tuple, int]:
    """Expansion of theta^u theta^v over rise-free words of length |u| + |v|."""
    return reduce_word(tuple(u) + tuple(v))


@dataclass
class InversionStats:
    """Counters filled in by the inversion routines."""

    inversions: int = 0
    max_degree: int = 0
    ccoefficient_products: int = 0

    def to_json(self) -> dict:
        return {"inversions": self.inversions, "max_degree": self.max_degree, "ccoefficient_products": self.ccoefficient_products}


def invert_lambda0(A: LambdaMatrix, cap: int, stats: InversionStats | None = None) -> Lambda0Matrix:
    """Order-by-order inverse: B_(0) = A_(0)^-1 and B_(d) = -A_(0)^-1 sum_e A_(e) B_(d-e).

    Raises NotInvertibleError for a singular constant part and
    CapExceededError when a nonzero term of theta-degree > cap appears.
    """
    A = Lambda0Matrix.of(A)
    inv0 = linalg.inverse(A.const())
    if stats is not None:
        stats.inversions += 1
    by_degree: dict[int, LambdaMatrix] = {0: LambdaMatrix.constant(inv0, A.p)}
    a_parts = {d: A.degree_part(d) for d in A.degrees() if d}
    top = max(a_parts, default=0)
    inv0_m = by_degree[0]
    d = 0
    while True:
        d += 3
        if all(not by_degree.get(d - e) for e in range(3, top + 1, 3)):
            break
        acc = LambdaMatrix.zero(A.rows, A.cols, A.p)
        for e, part in a_parts.items():
            prev = by_degree.get(d - e)
            if prev:
                acc = acc + _product(part, prev, stats)
        term = -(inv0_m @ acc)
        if term and d > cap:
            raise CapExceededError(f"inverse has nonzero terms beyond theta-degree cap {cap}")
        by_degree[d] = term
        if term and stats is not None:
            stats.max_degree = max(stats.max_degree, d)
    out = LambdaMatrix.zero(A.rows, A.cols, A.p)
    for part in by_degree.values():
        out = out + part
    return Lambda0Matrix.of(out)


# ---------------------------------------------------------------------------
# block-graded matrices


def _block_ranges(shape: Sequence[int]) -> list[range]:
    m1, m2, m3 = shape
    if min(shape) < 1:
        raise PreconditionError("block sizes must be >= 1")
    return [range(0, m1), range(m1, m1 + m2), range(m1 + m2, m1 + m2 + m3)]


def default_cap(shape: Sequence[int], p: int) -> int:
    return 3 * p * max(shape)


class GradedMatrix:
    """Square matrix over the Roby algebra with the block grading pattern.

    ``validate=False`` keeps ill-graded input around so that it can be
    diagnosed (see :func:`infinitesimal_limit`).
    """

    __slots__ = ("shape", "mat")

    def __init__(self, shape: Sequence[int], mat: LambdaMatrix, validate: bool = True):
        self.shape = tuple(int(m) for m in shape)
        size = sum(self.shape)
        _block_ranges(self.shape)
        if mat.shape != (size, size):
            raise PreconditionError(f"matrix is {mat.shape}, shape {self.shape} needs {size}x{size}")
        self.mat = mat
        if validate:
            bad = self.grade_violations()
            if bad:
                raise PreconditionError("grading violated: " + bad[0])

    @property
    def p(self) -> int:
        return self.mat.p

    @property
    def size(self) -> int:
        return sum(self.shape)

    def block_index(self) -> list[int]:
        return [b for b, m in enumerate(self.shape) for _ in range(m)]

    def grade_violations(self) -> list[str]:
        idx = self.block_index()
        out = []
        for w, m in sorted(self.mat.parts.items()):
            for (i, j), v in np.ndenumerate(m):
                if v and len(w) % 3 != (idx[j] - idx[i]) % 3:
                    out.append(f"entry ({i},{j}) in block {BLOCK_NAMES[(idx[i], idx[j])]} has word {w}")
        return out

    @classmethod
    def identity(cls, shape: Sequence[int], p: int) -> "GradedMatrix":
        return cls(shape, LambdaMatrix.identity(sum(shape), p))

    @classmethod
    def zero(cls, shape: Sequence[int], p: int) -> "GradedMatrix":
        return cls(shape, LambdaMatrix.zero(sum(shape), sum(shape), p))

    @classmethod
    def from_blocks(cls, shape: Sequence[int], p: int, blocks: Mapping[str, LambdaMatrix], validate: bool = True) -> "GradedMatrix":
        ranges = _block_ranges(shape)
        size = sum(shape)
        parts: dict = {}
        for name, blk in blocks.items():
            r, c = BLOCK_POS[name]
            rr, cc = ranges[r], ranges[c]
            if blk.shape != (len(rr), len(cc)):
                raise PreconditionError(f"block {name} is {blk.shape}, expected {(len(rr), len(cc))}")
            for w, m in blk.parts.items():
                if w not in parts:
                    parts[w] = linalg.zeros(size, size)
                parts[w][rr.start : rr.stop, cc.start : cc.stop] += m
        return cls(shape, LambdaMatrix(size, size, p, parts), validate)

    def blocks(self) -> dict[str, LambdaMatrix]:
        ranges = _block_ranges(self.shape)
        return {name: self.mat.block(ranges[r], ranges[c]) for (r, c), name in BLOCK_NAMES.items()}

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        return GradedMatrix(self.shape, self.mat + other.mat)

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        return GradedMatrix(self.shape, self.mat - other.mat)

    def __neg__(self) -> "GradedMatrix":
        return GradedMatrix(self.shape, -self.mat, validate=False)

    def scale(self, c) -> "GradedMatrix":
        return GradedMatrix(self.shape, self.mat.scale(c), validate=False)

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self.shape == other.shape and self.mat == other.mat

    __hash__ = None

    def is_identity(self) -> bool:
        return self.mat == LambdaMatrix.identity(self.size, self.p)

    def __repr__(self):
        return f"GradedMatrix(shape={self.shape}, p={self.p}, degrees={sorted(self.mat.degrees())})"

    def to_json(self) -> dict:
        return {
            "shape": list(self.shape),
            "p": self.p,
            "entries": [[e.to_json()["terms"] for e in row] for row in self.mat.entries()],
        }

    @classmethod
    def from_json(cls, doc: Mapping, validate: bool = True) -> "GradedMatrix":
        try:
            shape = [int(m) for m in doc["shape"]]
            if len(shape) != 3:
                raise ValueError("shape needs three block sizes")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed graded matrix: {exc}") from exc
        p, entries = _decode_entries(doc)
        return cls(shape, LambdaMatrix.from_entries(entries, p), validate)


def mat_mul(M: GradedMatrix, N: GradedMatrix) -> GradedMatrix:
    if M.shape != N.shape or M.p != N.p:
        raise PreconditionError(f"shape mismatch: {M.shape}/p={M.p} vs {N.shape}/p={N.p}")
    return GradedMatrix(M.shape, M.mat @ N.mat)


def invert_block(M: GradedMatrix, cap: int | None = None, stats: InversionStats | None = None) -> GradedMatrix:
    """Blockwise inverse; every inner inverse is a grade-0 order-by-order inversion."""
    if cap is None:
        cap = default_cap(M.shape, M.p)
    b = M.blocks()
    A, B, C = [b[f"A{i}"] for i in range(3)], [b[f"B{i}"] for i in range(3)], [b[f"C{i}"] for i in range(3)]
    inv = lambda X: invert_lambda0(X, cap, stats)
    mul = lambda X, Y: _product(X, Y, stats)
    for i in range(3):
        try:
            linalg.inverse(A[i].const())
        except NotInvertibleError as exc:
            raise NotInvertibleError(f"constant part of A{i} is singular") from exc

    inv_a = [inv(A[i]) for i in range(3)]
    out: dict[str, LambdaMatrix] = {}
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        s_inv = inv(A[k] - mul(mul(C[j], inv_a[j]), B[k]))
        t = B[i] - mul(mul(C[j], inv_a[j]), C[i])
        s_t = mul(s_inv, t)
        bracket = C[i] - mul(B[k], s_t)
        a_new = inv(A[i] - mul(C[k], s_t) - mul(mul(B[j], inv_a[j]), bracket))
        out[f"A{i}"] = a_new
        out[f"B{i}"] = -mul(s_t, a_new)
        out[f"C{i}"] = -mul(mul(inv_a[j], bracket), a_new)
    return GradedMatrix.from_blocks(M.shape, M.p, out)


@dataclass
class GLfCertificate:
    member: bool
    reason: str
    cap: int
    inverse: GradedMatrix | None = None
    left_identity: bool = False
    right_identity: bool = False
    stats: InversionStats = field(default_factory=InversionStats)

    def __bool__(self):
        return self.member

    def to_json(self) -> dict:
        return {
            "member": self.member,
            "reason": self.reason,
            "cap": self.cap,
            "inverse": self.inverse.to_json() if self.inverse is not None else None,
            "MN_is_identity": self.left_identity,
            "NM_is_identity": self.right_identity,
            "stats": self.stats.to_json(),
        }


def is_glf_member(M: GradedMatrix, cap: int | None = None) -> GLfCertificate:
    """Membership in GL_f relative to ``cap``; never raises for domain failures."""
    if cap is None:
        cap = default_cap(M.shape, M.p)
    stats = InversionStats()
    bad = M.grade_violations()
    if bad:
        return GLfCertificate(False, "grading violated: " + bad[0], cap, stats=stats)
    try:
        N = invert_block(M, cap, stats)
    except NotInvertibleError as exc:
        return GLfCertificate(False, f"not-invertible: {exc}", cap, stats=stats)
    except CapExceededError as exc:
        return GLfCertificate(False, f"cap-exceeded: {exc}", cap, stats=stats)
    left = (M @ N).is_identity()
    right = (N @ M).is_identity()
    ok = left and right
    return GLfCertificate(ok, "ok" if ok else "inverse check failed", cap, N, left, right, stats)


def _is_nilpotent_input(B: GradedMatrix) -> bool:
    idx = B.block_index()
    grade1 = True
    grade0 = True
    for w, m in B.mat.parts.items():
        for (i, j), v in np.ndenumerate(m):
            if not v:
                continue
            rel = (idx[j] - idx[i]) % 3
            grade1 &= rel == 1 and len(w) % 3 == 1
            grade0 &= rel == 0 and len(w) % 3 == 0
    return grade1 or grade0


def exp_nilpotent(B: GradedMatrix, cap: int = 12) -> GradedMatrix:
    """sum_m B^m / m! for B supported on the B-blocks (or grade-0), nilpotent by power ``cap``."""
    if not _is_nilpotent_input(B):
        raise PreconditionError("exponent must be purely grade-one (B-blocks) or purely grade-zero")
    size, p = B.size, B.p
    total = LambdaMatrix.identity(size, p)
    power = LambdaMatrix.identity(size, p)
    for m in range(1, cap + 2):
        power = power @ B.mat
        if power.is_zero():
            return GradedMatrix(B.shape, total)
        if m > cap:
            break
        total = total + power.scale(Fraction(1, factorial(m)))
    raise CapExceededError(f"B^{cap + 1} is nonzero; exponent not nilpotent within cap {cap}")


def group_element(G0: GradedMatrix, Bs: Sequence[GradedMatrix], cap: int = 12) -> GradedMatrix:
    """G0 * prod_k exp(B_k) for a constant block-diagonal invertible G0."""
    idx = G0.block_index()
    if any(w for w in G0.mat.parts):
        raise PreconditionError("G0 must be constant")
    for (i, j), v in np.ndenumerate(G0.mat.const()):
        if v and idx[i] != idx[j]:
            raise PreconditionError("G0 must be block-diagonal")
    blocks = G0.blocks()
    for i in range(3):
        try:
            linalg.inverse(blocks[f"A{i}"].const())
        except NotInvertibleError as exc:
            raise NotInvertibleError(f"G0 block A{i} is singular") from exc
    out = G0
    for B in Bs:
        if B.shape != G0.shape or B.p != G0.p:
            raise PreconditionError("factor shape mismatch")
        out = out @ exp_nilpotent(B, cap)
    return out


@dataclass
class TangentReport:
    shape: tuple[int, int, int]
    p: int
    degree0: np.ndarray
    degree0_block_diagonal: bool
    degree0_invertible: bool
    degree1: dict[int, np.ndarray]
    degree1_in_b_blocks: bool
    violations: list[str]
    tangent: list[tuple[int, int, Cyclotomic3]]

    @property
    def passed(self) -> bool:
        return self.degree0_block_diagonal and self.degree0_invertible and self.degree1_in_b_blocks

    def to_json(self) -> dict:
        from .scalars import format_cyc

        enc = lambda m: [[format_cyc(v) for v in row] for row in m]
        return {
            "shape": list(self.shape),
            "p": self.p,
            "degree0": enc(self.degree0),
            "degree0_block_diagonal": self.degree0_block_diagonal,
            "degree0_invertible": self.degree0_invertible,
            "degree1": {str(i): enc(m) for i, m in sorted(self.degree1.items())},
            "degree1_in_b_blocks": self.degree1_in_b_blocks,
            "violations": list(self.violations),
            "tangent": [{"y": y, "theta": t, "coeff": format_cyc(c)} for y, t, c in self.tangent],
            "passed": self.passed,
        }


_Y_BLOCKS = ((0, 1), (1, 2), (2, 0))


def infinitesimal_limit(M: GradedMatrix) -> TangentReport:
    """Constant part and theta-linear part of M, with the linear part written in the Y-basis.

    Y-basis indices follow :func:`~ternary_algebra.lie3.build_gl_el` (0-based);
    theta indices are 1-based.
    """
    idx = M.block_index()
    ranges = _block_ranges(M.shape)
    const = M.mat.const()
    violations = []
    block_diag = True
    for (i, j), v in np.ndenumerate(const):
        if v and idx[i] != idx[j]:
            block_diag = False
            violations.append(f"constant entry ({i},{j}) outside the diagonal blocks")
    try:
        linalg.inverse(const)
        invertible = True
    except NotInvertibleError:
        invertible = False
        violations.append("constant part is singular")
    y_index = {}
    for rb, cb in _Y_BLOCKS:
        for i in ranges[rb]:
            for j in ranges[cb]:
                y_index[(i, j)] = len(y_index)
    degree1 = {}
    in_b = True
    tangent = []
    for w, m in sorted(M.mat.parts.items()):
        if len(w) != 1:
            continue
        degree1[w[0]] = m
        for (i, j), v in np.ndenumerate(m):
            if not v:
                continue
            if (i, j) in y_index:
                tangent.append((y_index[(i, j)], w[0], v))
            else:
                in_b = False
                violations.append(f"theta^{w[0]} term at ({i},{j}) in block {BLOCK_NAMES[(idx[i], idx[j])]}")
    tangent.sort(key=lambda t: (t[0], t[1]))
    return TangentReport(M.shape, M.p, const, block_diag, invertible, degree1, in_b, violations, tangent)


# ---------------------------------------------------------------------------
# random members


def _random_invertible(rng: random.Random, k: int, bound: int = 3) -> np.ndarray:
    while True:
        m = linalg.cyc_array([[rng.randint(-bound, bound) for _ in range(k)] for _ in range(k)])
        try:
            linalg.inverse(m)
            return m
        except NotInvertibleError:
            continue


def random_group_element(
    shape: Sequence[int],
    p: int,
    rng: random.Random | int,
    factors: int = 1,
    grade0_factors: int = 1,
    cap: int = 12,
    bound: int = 2,
) -> tuple[GradedMatrix, GradedMatrix, list[GradedMatrix]]:
    """A seeded random G0 * prod exp(B_k); returns (element, G0, Bs).

    Grade-one factors are a random scalar matrix on the B-blocks times
    c * theta^i, so they cube to zero.  Grade-zero factors are a random
    block-diagonal scalar matrix times c * theta^w for a rise-free word w of
    length three; every such word is nilpotent for p <= 2, and the resulting
    degree-three diagonal terms exercise the degree-six rewriting during
    inversion.  Factors are shuffled.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    ranges = _block_ranges(shape)
    size = sum(shape)
    g0 = linalg.zeros(size, size)
    for r in ranges:
        g0[r.start : r.stop, r.start : r.stop] = _random_invertible(rng, len(r))
    G0 = GradedMatrix(shape, LambdaMatrix.constant(g0, p))
    coeff = lambda: as_cyc(rng.choice([c for c in range(-bound, bound + 1) if c]))
    words3 = enumerate_basis(p, 3)
    Bs = []
    for _ in range(factors):
        y = linalg.zeros(size, size)
        for rb, cb in _Y_BLOCKS:
            for i in ranges[rb]:
                for j in ranges[cb]:
                    y[i, j] = as_cyc(rng.randint(-bound, bound))
        Bs.append(GradedMatrix(shape, LambdaMatrix(size, size, p, {(rng.randint(1, p),): y * coeff()})))
    for _ in range(grade0_factors if words3 else 0):
        x = linalg.zeros(size, size)
        for r in ranges:
            for i in r:
                for j in r:
                    x[i, j] = as_cyc(rng.randint(-bound, bound))
        Bs.append(GradedMatrix(shape, LambdaMatrix(size, size, p, {rng.choice(words3): x * coeff()})))
    rng.shuffle(Bs)
    return group_element(G0, Bs, cap), G0, Bs

"""Exact scalars: rationals and the cyclotomic field Q(q), q a primitive cube root of unity.

Elements of Q(q) are stored in the basis {1, q}; products are reduced with
q**2 = -1 - q, so every value has exactly one representation.

Textual form (used by the JSON interchange) is ``a/b+c/d*q`` with zero parts
and unit denominators omitted, e.g. ``"0"``, ``"-1-q"``, ``"1/2*q"``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC

from .errors import ParseError

Rational = Fraction

__all__ = [
    "Rational",
    "Cyclotomic3",
    "ZERO",
    "ONE",
    "Q",
    "as_cyc",
    "cyc_add",
    "cyc_mul",
    "cyc_inv",
    "qpow",
]


_new = object.__new__
_set = object.__setattr__


class Cyclotomic3:
    """Immutable element ``re + qp*q`` of Q(q)."""

    __slots__ = ("_re", "_qp", "_hash")

    def __new__(cls, re=0, qp=0):
        return cls._raw(
            re if type(re) is Fraction else Fraction(re),
            qp if type(qp) is Fraction else Fraction(qp),
        )

    @classmethod
    def _raw(cls, re: Fraction, qp: Fraction) -> "Cyclotomic3":
        self = _new(cls)
        _set(self, "_re", re)
        _set(self, "_qp", qp)
        _set(self, "_hash", None)
        return self

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def qp(self) -> Fraction:
        return self._qp

    def __setattr__(self, name, value):
        raise AttributeError("Cyclotomic3 is immutable")

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if type(other) is not Cyclotomic3:
            if isinstance(other, (int, _RationalABC)):
                return Cyclotomic3._raw(self._re + other, self._qp)
            return NotImplemented
        return Cyclotomic3._raw(self._re + other._re, self._qp + other._qp)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic3._raw(-self._re, -self._qp)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if type(other) is not Cyclotomic3:
            if isinstance(other, (int, _RationalABC)):
                return Cyclotomic3._raw(self._re - other, self._qp)
            return NotImplemented
        return Cyclotomic3._raw(self._re - other._re, self._qp - other._qp)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if type(other) is not Cyclotomic3:
            if isinstance(other, (int, _RationalABC)):
                return Cyclotomic3._raw(self._re * other, self._qp * other)
            return NotImplemented
        a, b, c, d = self._re, self._qp, other._re, other._qp
        if not b and not d:
            return Cyclotomic3._raw(a * c, b)
        bd = b * d
        return Cyclotomic3._raw(a * c - bd, a * d + b * c - bd)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic3":
        a, b = self._re, self._qp
        if not b:
            if not a:
                raise ZeroDivisionError("inverse of zero in Q(q)")
            return Cyclotomic3._raw(1 / a, b)
        # (a + b q)(a - b - b q) = a^2 - a b + b^2
        norm = a * a - a * b + b * b
        return Cyclotomic3._raw((a - b) / norm, -b / norm)

    def __truediv__(self, other):
        if type(other) is not Cyclotomic3:
            if isinstance(other, (int, _RationalABC)):
                if not other:
                    raise ZeroDivisionError("division by zero in Q(q)")
                return Cyclotomic3._raw(self._re / other, self._qp / other)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return as_cyc(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Cyclotomic3":
        # complex conjugation swaps q and q^2 = -1 - q
        return Cyclotomic3._raw(self._re - self._qp, -self._qp)

    # comparison -----------------------------------------------------------

    def __bool__(self):
        return bool(self._re) or bool(self._qp)

    def __eq__(self, other):
        if type(other) is Cyclotomic3:
            return self._re == other._re and self._qp == other._qp
        if isinstance(other, (int, _RationalABC)):
            return not self._qp and self._re == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            h = hash(self._re) if not self._qp else hash((self._re, self._qp))
            _set(self, "_hash", h)
        return self._hash

    def is_rational(self) -> bool:
        return not self._qp

    def __complex__(self):
        # numeric view for display only; q = -1/2 + i*sqrt(3)/2
        return complex(float(self._re) - float(self._qp) / 2, float(self._qp) * 3**0.5 / 2)

    # text -----------------------------------------------------------------

    def __str__(self):
        return format_cyc(self)

    def __repr__(self):
        return f"Cyclotomic3({format_cyc(self)!r})"

    def __reduce__(self):
        return (Cyclotomic3, (self._re, self._qp))


ZERO = Cyclotomic3(0, 0)
ONE = Cyclotomic3(1, 0)
Q = Cyclotomic3(0, 1)
_QPOWS = (ONE, Q, Cyclotomic3(-1, -1))


def as_cyc(x) -> Cyclotomic3:
    if type(x) is Cyclotomic3:
        return x
    if isinstance(x, str):
        return parse_cyc(x)
    if isinstance(x, (int, _RationalABC)):
        return Cyclotomic3(Fraction(x), 0)
    raise TypeError(f"cannot convert {type(x).__name__} to Cyclotomic3")


def cyc_add(a: Cyclotomic3, b: Cyclotomic3) -> Cyclotomic3:
    return as_cyc(a) + as_cyc(b)


def cyc_mul(a: Cyclotomic3, b: Cyclotomic3) -> Cyclotomic3:
    return as_cyc(a) * as_cyc(b)


def cyc_inv(a: Cyclotomic3) -> Cyclotomic3:
    return as_cyc(a).inverse()


def qpow(k: int) -> Cyclotomic3:
    """q**k for any integer k (negative exponents wrap, q**-1 = q**2)."""
    return _QPOWS[k % 3]


def _format_fraction(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_cyc(x: Cyclotomic3) -> str:
    a, b = x.re, x.qp
    if not b:
        return _format_fraction(a)
    if b == 1:
        qpart = "q"
    elif b == -1:
        qpart = "-q"
    else:
        qpart = _format_fraction(b) + "*q"
    if not a:
        return qpart
    if not qpart.startswith("-"):
        qpart = "+" + qpart
    return _format_fraction(a) + qpart


_NUM = r"[0-9]+(?:/[0-9]+)?"
_TERM = re.compile(rf"([+-]?)(?:({_NUM})(\*q)?|(q))")


def parse_cyc(text: str) -> Cyclotomic3:
    """Parse the ``a/b+c/d*q`` form; accepts any order of the two parts."""
    if re.search(r"[0-9q]\s+[0-9q]", text):
        raise ParseError(f"malformed scalar: {text!r}")
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ParseError(f"empty scalar: {text!r}")
    re_part = Fraction(0)
    q_part = Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (pos > 0 and not m.group(1)):
            raise ParseError(f"malformed scalar: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        try:
            if m.group(4):
                q_part += sign
            elif m.group(3):
                q_part += sign * Fraction(m.group(2))
            else:
                re_part += sign * Fraction(m.group(2))
        except ZeroDivisionError as exc:
            raise ParseError(f"zero denominator in scalar: {text!r}") from exc
        pos = m.end()
    return Cyclotomic3(re_part, q_part)

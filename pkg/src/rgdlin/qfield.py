"""Exact arithmetic in the real field Q(sqrt2, sqrt3).

Elements are stored as ``(a + b*r2 + c*r3 + d*r6) / den`` with integer
numerators and a positive denominator, reduced so that the gcd of all five
integers is 1.  This makes the representation unique, so equality and hashing
are plain tuple comparisons.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "FieldElem",
    "ZERO",
    "ONE",
    "SQRT2",
    "SQRT3",
    "SQRT6",
    "INF",
    "cos_value",
    "field_arith",
    "field_sign",
    "UnsupportedLabelError",
]

INF = math.inf

_R2 = math.sqrt(2.0)
_R3 = math.sqrt(3.0)
_R6 = math.sqrt(6.0)


class UnsupportedLabelError(ValueError):
    """A Coxeter label outside {2, 3, 4, 6, inf}."""


def _sign_int(x: int) -> int:
    return (x > 0) - (x < 0)


def _sign_q2(a: int, b: int) -> int:
    """Sign of a + b*sqrt(2) for integers a, b."""
    sa, sb = _sign_int(a), _sign_int(b)
    if sb == 0 or sa == sb:
        return sa
    if sa == 0:
        return sb
    # opposite signs; a^2 == 2 b^2 is impossible unless both vanish
    return sa if a * a > 2 * b * b else sb


class FieldElem:
    """An exact element a + b*sqrt2 + c*sqrt3 + d*sqrt6 of Q(sqrt2, sqrt3).

    Instances are immutable.  Arithmetic with ``int`` and ``Fraction``
    operands is supported on either side.
    """

    __slots__ = ("_n", "_den", "_hash")

    def __init__(self, a=0, b=0, c=0, d=0):
        fa, fb, fc, fd = (Fraction(x) for x in (a, b, c, d))
        den = math.lcm(fa.denominator, fb.denominator, fc.denominator, fd.denominator)
        nums = tuple(int(x * den) for x in (fa, fb, fc, fd))
        self._set(nums, den)

    def _set(self, nums: tuple, den: int) -> None:
        if den < 0:
            nums = tuple(-x for x in nums)
            den = -den
        g = math.gcd(den, *nums) if den != 1 else 1
        if g > 1:
            nums = tuple(x // g for x in nums)
            den //= g
        if not any(nums):
            den = 1
        self._n = nums
        self._den = den
        self._hash = None

    @classmethod
    def _raw(cls, nums: tuple, den: int) -> FieldElem:
        obj = cls.__new__(cls)
        obj._set(nums, den)
        return obj

    @classmethod
    def coerce(cls, x) -> FieldElem:
        if isinstance(x, FieldElem):
            return x
        if isinstance(x, (int, Rational)):
            f = Fraction(x)
            return cls._raw((f.numerator, 0, 0, 0), f.denominator)
        if isinstance(x, str):
            return cls.parse(x)
        raise TypeError(f"cannot convert {type(x).__name__} to FieldElem")

    # components -------------------------------------------------------
    @property
    def a(self) -> Fraction:
        return Fraction(self._n[0], self._den)

    @property
    def b(self) -> Fraction:
        return Fraction(self._n[1], self._den)

    @property
    def c(self) -> Fraction:
        return Fraction(self._n[2], self._den)

    @property
    def d(self) -> Fraction:
        return Fraction(self._n[3], self._den)

    @property
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.a, self.b, self.c, self.d)

    def is_rational(self) -> bool:
        return not (self._n[1] or self._n[2] or self._n[3])

    def is_zero(self) -> bool:
        return not any(self._n)

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        try:
            o = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        d1, d2 = self._den, o._den
        if d1 == d2:
            return FieldElem._raw(tuple(x + y for x, y in zip(self._n, o._n)), d1)
        return FieldElem._raw(tuple(x * d2 + y * d1 for x, y in zip(self._n, o._n)), d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        obj = FieldElem.__new__(FieldElem)
        obj._n = tuple(-x for x in self._n)
        obj._den = self._den
        obj._hash = None
        return obj

    def __pos__(self) -> FieldElem:
        return self

    def __sub__(self, other):
        try:
            o = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            o = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        try:
            o = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        a1, b1, c1, d1 = self._n
        a2, b2, c2, d2 = o._n
        if not (b2 or c2 or d2):
            nums = (a1 * a2, b1 * a2, c1 * a2, d1 * a2)
        elif not (b1 or c1 or d1):
            nums = (a1 * a2, a1 * b2, a1 * c2, a1 * d2)
        else:
            nums = (
                a1 * a2 + 2 * b1 * b2 + 3 * c1 * c2 + 6 * d1 * d2,
                a1 * b2 + b1 * a2 + 3 * (c1 * d2 + d1 * c2),
                a1 * c2 + c1 * a2 + 2 * (b1 * d2 + d1 * b2),
                a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2,
            )
        return FieldElem._raw(nums, self._den * o._den)

    __rmul__ = __mul__

    def conj3(self) -> FieldElem:
        """Image under sqrt3 -> -sqrt3."""
        a, b, c, d = self._n
        return FieldElem._raw((a, b, -c, -d), self._den)

    def conj2(self) -> FieldElem:
        """Image under sqrt2 -> -sqrt2."""
        a, b, c, d = self._n
        return FieldElem._raw((a, -b, c, -d), self._den)

    def inverse(self) -> FieldElem:
        if self.is_zero():
            raise ZeroDivisionError("FieldElem division by zero")
        # x * conj3(x) lies in Q(sqrt2); multiply by its sqrt2-conjugate to land in Q
        c3 = self.conj3()
        m = self * c3
        c2 = m.conj2()
        norm = m * c2
        assert norm.is_rational()
        num = c3 * c2
        n0 = norm._n[0]
        return FieldElem._raw(tuple(x * norm._den for x in num._n), num._den * n0)

    def __truediv__(self, other):
        try:
            o = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        try:
            o = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> FieldElem:
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

    # ordering ---------------------------------------------------------
    def sign(self) -> int:
        a, b, c, d = self._n
        sp = _sign_q2(a, b)
        sq = _sign_q2(c, d)
        if sq == 0 or sp == sq:
            return sp
        if sp == 0:
            return sq
        # P + Q*sqrt3 with sign(P) = -sign(Q): compare P^2 against 3 Q^2
        sd = _sign_q2(a * a + 2 * b * b - 3 * c * c - 6 * d * d, 2 * a * b - 6 * c * d)
        return sp if sd > 0 else sq

    def __abs__(self) -> FieldElem:
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        return (self - FieldElem.coerce(other)).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self._den == other._den and self._n == other._n
        if isinstance(other, (int, Rational)):
            return self == FieldElem.coerce(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._n[0], self._den))
            else:
                self._hash = hash((self._n, self._den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __float__(self) -> float:
        a, b, c, d = self._n
        den = self._den
        return a / den + (b / den) * _R2 + (c / den) * _R3 + (d / den) * _R6

    def __reduce__(self):
        return (FieldElem._raw, (self._n, self._den))

    # text form --------------------------------------------------------
    def __str__(self) -> str:
        parts = []
        for coeff, suffix in zip(self.components, ("", "*r2", "*r3", "*r6")):
            if coeff == 0:
                continue
            text = str(abs(coeff)) + suffix
            if not parts:
                parts.append(("-" if coeff < 0 else "") + text)
            else:
                parts.append(("- " if coeff < 0 else "+ ") + text)
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"FieldElem({str(self)!r})"

    _TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*(\*?\s*r([236]))?")

    @classmethod
    def parse(cls, text: str) -> FieldElem:
        """Parse ``"p/q + p/q*r2 + p/q*r3 + p/q*r6"``; zero terms may be omitted."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty field element")
        coeffs = {"": Fraction(0), "2": Fraction(0), "3": Fraction(0), "6": Fraction(0)}
        pos = 0
        # "+-" is tolerated so that "1 + -1/2*r2" parses
        s = s.replace("+-", "-").replace("--", "+")
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if m is None or m.end() == pos or (m.group(2) is None and m.group(4) is None):
                raise ValueError(f"cannot parse field element {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            coeffs[m.group(4) or ""] += sign * coeff
            pos = m.end()
            if pos < len(s) and s[pos] not in "+-":
                raise ValueError(f"cannot parse field element {text!r}")
        return cls(coeffs[""], coeffs["2"], coeffs["3"], coeffs["6"])


ZERO = FieldElem(0)
ONE = FieldElem(1)
SQRT2 = FieldElem(0, 1)
SQRT3 = FieldElem(0, 0, 1)
SQRT6 = FieldElem(0, 0, 0, 1)


def field_arith(x: FieldElem, y: FieldElem, op: str) -> FieldElem:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown field operation {op!r}")


def field_sign(x: FieldElem) -> int:
    return FieldElem.coerce(x).sign()


_COS = {
    2: ZERO,
    3: FieldElem(Fraction(1, 2)),
    4: FieldElem(0, Fraction(1, 2)),
    6: FieldElem(0, 0, Fraction(1, 2)),
}


def cos_value(m) -> FieldElem:
    """cos(pi/m) for m in {2, 3, 4, 6}; the value 1 for m = inf."""
    if m == INF:
        return ONE
    try:
        return _COS[m]
    except (KeyError, TypeError):
        raise UnsupportedLabelError(f"unsupported Coxeter label {m!r}") from None

"""Exact scalars: rationals (``fractions.Fraction``) and Gaussian rationals.

Two rings are supported, tagged ``"rational"`` (Q) and ``"gaussian"`` (Q[i]).
Nothing in this package ever rounds.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

RATIONAL = "rational"
GAUSSIAN = "gaussian"
RINGS = (RATIONAL, GAUSSIAN)


class Gaussian:
    """A Gaussian rational ``re + im*i`` with ``Fraction`` components."""

    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _lift(other):
        if isinstance(other, Gaussian):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return Gaussian(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        norm = o.re * o.re + o.im * o.im
        if norm == 0:
            raise ZeroDivisionError("Gaussian division by zero")
        return Gaussian(
            (self.re * o.re + self.im * o.im) / norm,
            (self.im * o.re - self.re * o.im) / norm,
        )

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return Gaussian(1) / (self ** (-exponent))
        result = Gaussian(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"Gaussian({self.re!s}, {self.im!s})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[Fraction, Gaussian]


def ring_of(x) -> str:
    return GAUSSIAN if isinstance(x, Gaussian) else RATIONAL


def coerce(x, ring: str = RATIONAL) -> Scalar:
    """Convert ``x`` (int, Fraction, Gaussian, or text) into a scalar of ``ring``."""
    if ring not in RINGS:
        raise ValueError(f"unknown scalar ring {ring!r}")
    if isinstance(x, str):
        x = parse_scalar(x)
    if isinstance(x, Gaussian):
        if ring == RATIONAL:
            if x.im != 0:
                raise ValueError(f"{x} is not rational")
            return x.re
        return x
    if isinstance(x, bool) or not isinstance(x, (int, Fraction, Rational)):
        raise TypeError(f"not an exact scalar: {x!r}")
    if ring == GAUSSIAN:
        return Gaussian(x, 0)
    return Fraction(x)


def zero(ring: str = RATIONAL) -> Scalar:
    return coerce(0, ring)


def one(ring: str = RATIONAL) -> Scalar:
    return coerce(1, ring)


def _fmt_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def format_scalar(x) -> str:
    """Render as ``"p/q"`` or ``"p/q+r/s*i"`` (``-`` replaces ``+`` for a negative
    imaginary part)."""
    if isinstance(x, Gaussian):
        sign = "-" if x.im < 0 else "+"
        return f"{_fmt_fraction(x.re)}{sign}{_fmt_fraction(abs(x.im))}*i"
    return _fmt_fraction(Fraction(x))


_GAUSS_RE = re.compile(r"^\s*([+-]?[0-9]+(?:/[0-9]+)?)\s*([+-])\s*([0-9]+(?:/[0-9]+)?)\s*\*?\s*i\s*$")


def parse_scalar(obj) -> Scalar:
    """Parse the text/JSON forms: ``"p/q"``, an int, ``"p/q+r/s*i"`` or ``[re, im]``."""
    if isinstance(obj, Gaussian):
        return obj
    if isinstance(obj, (list, tuple)):
        if len(obj) != 2:
            raise ValueError(f"Gaussian value needs [real, imaginary], got {obj!r}")
        return Gaussian(parse_scalar(obj[0]), parse_scalar(obj[1]))
    if isinstance(obj, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(obj, int):
        return Fraction(obj)
    if isinstance(obj, Fraction):
        return obj
    if isinstance(obj, float):
        raise TypeError("floating-point values are not accepted; write them as 'p/q'")
    if isinstance(obj, str):
        m = _GAUSS_RE.match(obj)
        if m:
            im = Fraction(m.group(3))
            return Gaussian(Fraction(m.group(1)), im if m.group(2) == "+" else -im)
        try:
            return Fraction(obj.strip())
        except ValueError as exc:
            raise ValueError(f"cannot parse scalar {obj!r}") from exc
    raise TypeError(f"cannot parse scalar {obj!r}")


def to_json(x):
    """JSON form of a scalar; strings so consumers never coerce to floats."""
    if isinstance(x, Gaussian):
        return [_fmt_fraction(x.re), _fmt_fraction(x.im)]
    return _fmt_fraction(Fraction(x))


def denominator_of(x) -> int:
    if isinstance(x, Gaussian):
        return math.lcm(x.re.denominator, x.im.denominator)
    return Fraction(x).denominator

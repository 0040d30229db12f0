# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Exact values of the valuation, normalized so that v(p) = 1, and the discrete
value groups (1/D)Z they live in.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Union

from monty.json import MSONable

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__date__ = "Jun 3 2024"


class MalformedValue(ValueError):
    """
    Raised when a value is not an element of the value group at hand, or a
    serialized value cannot be parsed.
    """


Rational = Union[int, Fraction]


@total_ordering
class Value(MSONable):
    """
    An element of Q u {+inf}. Infinity is the valuation of zero: it absorbs
    addition and is larger than every finite value.
    """

    __slots__ = ("_q",)

    def __init__(self, q: Rational | str | Value | None = None):
        """
        Args:
            q: An exact rational, a serialized string ("3/2", "inf") or None
                for infinity.
        """
        if isinstance(q, Value):
            q = q._q
        elif isinstance(q, str):
            q = self._parse(q)
        elif isinstance(q, float):
            raise MalformedValue("Values are exact, floats are not accepted!")
        self._q: Fraction | None = None if q is None else Fraction(q)

    @staticmethod
    def _parse(s: str) -> Fraction | None:
        s = s.strip()
        if s == "inf":
            return None
        try:
            num, _, den = s.partition("/")
            return Fraction(int(num), int(den) if den else 1)
        except (ValueError, ZeroDivisionError):
            raise MalformedValue(f"Cannot parse value {s!r}.")

    @classmethod
    def inf(cls) -> Value:
        """The value of zero."""
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self._q is None

    @property
    def q(self) -> Fraction:
        """The exact rational. Raises for infinity."""
        if self._q is None:
            raise ValueError("Infinity has no rational representative!")
        return self._q

    @staticmethod
    def _coerce(other) -> Value:
        if isinstance(other, Value):
            return other
        if isinstance(other, (int, Fraction)):
            return Value(other)
        return NotImplemented

    def __add__(self, other) -> Value:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_infinite or other.is_infinite:
            return Value.inf()
        return Value(self.q + other.q)

    __radd__ = __add__

    def __neg__(self) -> Value:
        if self.is_infinite:
            raise ValueError("Infinity cannot be negated!")
        return Value(-self.q)

    def __sub__(self, other) -> Value:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Value:
        return self._coerce(other) - self

    def __mul__(self, scalar: Rational) -> Value:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        if self.is_infinite:
            if scalar <= 0:
                raise ValueError("Infinity can only be scaled by a positive rational!")
            return Value.inf()
        return Value(self.q * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar: Rational) -> Value:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(scalar))

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self._q == other._q

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.q < other.q

    def __hash__(self) -> int:
        return hash(self._q)

    def __str__(self) -> str:
        return "inf" if self._q is None else str(self._q)

    def __repr__(self) -> str:
        return f"Value({str(self)!r})"

    def as_dict(self) -> dict:
        return {"@module": type(self).__module__, "@class": type(self).__name__, "value": str(self)}

    @classmethod
    def from_dict(cls, d: dict) -> Value:
        return cls(d["value"])


def vmin(*values: Value) -> Value:
    """Minimum of values; the minimum of nothing is infinity."""
    return min(values, default=Value.inf())


class ValueGroup(MSONable):
    """
    The lattice (1/D)Z with D = (p - 1) * p^n for the backend with tower level n.
    """

    def __init__(self, denominator: int, tower_level: int = 0):
        """
        Args:
            denominator: Positive D with value group (1/D)Z.
            tower_level: Tower level n the lattice belongs to.
        """
        if denominator < 1:
            raise ValueError("Lattice denominator must be positive!")
        self.denominator = denominator
        self.tower_level = tower_level

    def contains(self, x: Value | Rational) -> bool:
        x = Value(x)
        return not x.is_infinite and (x.q * self.denominator).denominator == 1

    def index(self, x: Value | Rational) -> int:
        """
        Returns x * D as an integer.
        """
        if not self.contains(x):
            raise MalformedValue(f"{x} is not in (1/{self.denominator})Z.")
        return int(Value(x).q * self.denominator)

    def ceil(self, x: Value | Rational) -> Value:
        """Smallest element of the lattice that is >= x."""
        x = Value(x)
        return Value(Fraction(math.ceil(x.q * self.denominator), self.denominator))

    def floor(self, x: Value | Rational) -> Value:
        """Largest element of the lattice that is <= x."""
        x = Value(x)
        return Value(Fraction(math.floor(x.q * self.denominator), self.denominator))

    @property
    def generator(self) -> Value:
        return Value(Fraction(1, self.denominator))

    def __eq__(self, other) -> bool:
        return isinstance(other, ValueGroup) and self.denominator == other.denominator

    def __hash__(self) -> int:
        return hash(self.denominator)

    def __repr__(self) -> str:
        return f"ValueGroup((1/{self.denominator})Z, n={self.tower_level})"


def in_p_multiple(t: Value | Rational, group: ValueGroup, p: int) -> bool:
    """
    Decide whether t lies in p * Gamma.

    Args:
        t: A finite element of the group.
        group: The value group Gamma.
        p: The prime.

    Returns:
        True iff t = p * g for some g in Gamma.
    """
    return group.index(t) % p == 0


def w_normalize(x: Value, e: int, denominator: int) -> int | None:
    """
    Express x in units of the generator of (1/(e*D))Z, the value group of L.
    Infinity maps to None.
    """
    if x.is_infinite:
        return None
    n = x.q * e * denominator
    if n.denominator != 1:
        raise MalformedValue(f"{x} is not in (1/{e * denominator})Z.")
    return int(n)

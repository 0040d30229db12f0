from __future__ import annotations

import unittest
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramification.values import MalformedValue, Value, ValueGroup, in_p_multiple, vmin, w_normalize

__author__ = "Materials Virtual Lab"

fractions = st.fractions(max_denominator=60).filter(lambda q: abs(q) < 1000)


class ValueTest(unittest.TestCase):
    def test_parse(self):
        assert Value("3/2").q == Fraction(3, 2)
        assert Value(" 4 ").q == 4
        assert Value("inf").is_infinite
        assert Value(None) == Value.inf()
        assert Value(Value("1/3")) == Value(Fraction(1, 3))
        with pytest.raises(MalformedValue):
            Value("three halves")
        with pytest.raises(MalformedValue):
            Value("1/0")
        with pytest.raises(MalformedValue):
            Value(0.5)

    def test_arithmetic(self):
        a, b = Value("1/2"), Value("1/3")
        assert a + b == Value("5/6")
        assert a - b == Value("1/6")
        assert 1 - a == a
        assert a * 3 == Value("3/2")
        assert a / 2 == Value("1/4")
        assert 2 * b == Value("2/3")
        assert -a == Value("-1/2")

    def test_infinity(self):
        inf = Value.inf()
        assert inf + 3 == inf
        assert inf * 2 == inf
        assert inf > Value(10**6)
        assert not inf < inf
        assert str(inf) == "inf"
        with pytest.raises(ValueError, match="negated"):
            -inf
        with pytest.raises(ValueError, match="positive"):
            inf * 0
        with pytest.raises(ValueError, match="no rational"):
            inf.q

    def test_serialization(self):
        v = Value("-7/4")
        assert str(v) == "-7/4"
        assert Value.from_dict(v.as_dict()) == v
        assert Value.from_dict(Value.inf().as_dict()).is_infinite

    def test_vmin(self):
        assert vmin(Value(2), Value("1/2"), Value.inf()) == Value("1/2")
        assert vmin().is_infinite

    @given(fractions, fractions)
    def test_ordering(self, x, y):
        assert (Value(x) < Value(y)) == (x < y)
        assert (Value(x) == Value(y)) == (x == y)
        assert Value(x) + Value(y) == Value(x + y)
        assert hash(Value(x)) == hash(Value(Fraction(x)))


class ValueGroupTest(unittest.TestCase):
    def setUp(self):
        self.group = ValueGroup(6, tower_level=1)

    def test_membership(self):
        assert self.group.contains(Fraction(1, 3))
        assert not self.group.contains(Fraction(1, 4))
        assert not self.group.contains(Value.inf())
        assert self.group.index(Fraction(5, 6)) == 5
        with pytest.raises(MalformedValue):
            self.group.index(Fraction(1, 4))
        assert self.group.generator == Value("1/6")
        with pytest.raises(ValueError, match="positive"):
            ValueGroup(0)

    def test_rounding(self):
        assert self.group.ceil(Fraction(1, 4)) == Value("1/3")
        assert self.group.floor(Fraction(1, 4)) == Value("1/6")
        assert self.group.ceil(Value("2/3")) == Value("2/3")
        assert self.group.ceil(Fraction(-1, 4)) == Value("-1/6")

    @given(fractions)
    def test_ceil_floor_bracket(self, x):
        lo, hi = self.group.floor(x), self.group.ceil(x)
        assert lo <= Value(x) <= hi
        assert hi - lo <= self.group.generator
        assert self.group.contains(lo)
        assert self.group.contains(hi)

    def test_in_p_multiple(self):
        group = ValueGroup(2)
        assert in_p_multiple(Fraction(3, 2), group, 3)
        assert not in_p_multiple(Fraction(1, 2), group, 3)
        assert in_p_multiple(Fraction(1, 2), ValueGroup(6, 1), 3)

    def test_w_normalize(self):
        assert w_normalize(Value("3/2"), 3, 2) == 9
        assert w_normalize(Value("2/3"), 3, 2) == 4
        assert w_normalize(Value.inf(), 3, 2) is None
        with pytest.raises(MalformedValue):
            w_normalize(Value("1/5"), 1, 2)


if __name__ == "__main__":
    unittest.main()

from __future__ import annotations

import unittest
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramification.algebra.fields import FieldDesc, NegativeValuation, make_field, residue, valuation
from ramification.values import MalformedValue, Value

__author__ = "Materials Virtual Lab"


class FieldDescTest(unittest.TestCase):
    def test_invalid(self):
        with pytest.raises(ValueError, match="prime"):
            make_field(FieldDesc(4))
        with pytest.raises(ValueError, match="prime"):
            make_field(FieldDesc(1))
        with pytest.raises(ValueError, match="non-negative"):
            make_field(FieldDesc(3, tower_level=-1))

    def test_cache_and_serialization(self):
        desc = FieldDesc(3, with_u=True, tower_level=1)
        assert make_field(desc) is make_field(FieldDesc(3, True, 1))
        assert FieldDesc.from_dict(desc.as_dict()) == desc
        assert repr(make_field(desc)) == "Q(zeta_3)(u)[s]/(s^3 - 3)"


class FieldTest(unittest.TestCase):
    def setUp(self):
        self.k2 = make_field(FieldDesc(2))
        self.k3 = make_field(FieldDesc(3))
        self.k3u1 = make_field(FieldDesc(3, with_u=True, tower_level=1))
        self.k5 = make_field(FieldDesc(5))

    def test_constants(self):
        assert self.k3.N == 1
        assert self.k3.D == 2
        assert self.k3u1.N == 3
        assert self.k3u1.D == 6
        assert self.k5.value_group.denominator == 4

    def test_basic_valuations(self):
        for k in (self.k2, self.k3, self.k5, self.k3u1):
            assert k.z.valuation() == Value(Fraction(1, k.p - 1))
            assert k(k.p).valuation() == Value(1)
            assert k.zero.valuation().is_infinite
            assert k.zeta**k.p == k.one
        assert self.k2.z == self.k2(-2)
        assert self.k3u1.s.valuation() == Value("1/3")
        assert (self.k3u1.s**3) == self.k3u1(3)
        assert self.k3u1.u.valuation() == Value(0)
        assert valuation(self.k3, self.k3(Fraction(2, 9))) == Value(-2)

    def test_generators_not_adjoined(self):
        with pytest.raises(ValueError, match="u is not adjoined"):
            self.k3.u
        with pytest.raises(ValueError, match="s is not adjoined"):
            self.k3.s

    def test_mono(self):
        assert self.k3.mono(Fraction(3, 2)) == self.k3(3) * self.k3.z
        assert self.k3.mono(0) == self.k3.one
        assert self.k3u1.mono(Fraction(1, 3)) == self.k3u1.s
        assert self.k3u1.mono(Fraction(-1, 6)).valuation() == Value("-1/6")
        with pytest.raises(MalformedValue):
            self.k3.mono(Fraction(1, 3))
        with pytest.raises(MalformedValue):
            self.k3.mono(Value.inf())

    @given(st.integers(min_value=-12, max_value=12))
    def test_mono_values(self, m):
        k = self.k3u1
        gamma = Fraction(m, k.D)
        x = k.mono(gamma)
        assert x.valuation() == Value(gamma)
        assert len(x.poly) == 1

    @settings(max_examples=30, deadline=None)
    @given(
        st.integers(min_value=-6, max_value=6),
        st.integers(min_value=-6, max_value=6),
        st.integers(min_value=0, max_value=5),
        st.integers(min_value=0, max_value=5),
    )
    def test_valuation_multiplicative(self, a, b, i, j):
        k = self.k3u1
        x = k(a) + k.z**i * k.u + k.s**j
        y = k(b) * k.s + k.u**2 + 1
        assert (x * y).valuation() == x.valuation() + y.valuation()
        if not x.is_zero:
            assert (y / x) * x == y
            assert x.inverse().valuation() == -x.valuation()

    def test_inverse(self):
        k = self.k3u1
        x = k(1) + k.u * k.z + k.s
        assert x * x.inverse() == k.one
        assert (k.z ** (-2)) * k.z**2 == k.one
        with pytest.raises(ZeroDivisionError):
            k.zero.inverse()

    def test_derivative(self):
        k = self.k3u1
        x = k.u**2 * k.z + k.s / k.u
        y = 1 + k.u * k.z
        assert k.derivative(x) == 2 * k.u * k.z - k.s / k.u**2
        assert k.derivative(x * y) == k.derivative(x) * y + x * k.derivative(y)
        assert k.derivative(k.z**5 + 7) == k.zero
        assert self.k3.derivative(self.k3.z) == self.k3.zero

    def test_residue(self):
        k = self.k3u1
        rf = k.residue_field
        assert residue(k, k(4)) == rf.one
        assert (k.u**2 + k.z).residue() == rf.u**2
        assert ((k.u + 1) / (k.u + 4)).residue() == rf.one
        assert k.z.residue() == rf.zero
        with pytest.raises(NegativeValuation):
            (k.one / k.z).residue()

    def test_leading_residue(self):
        k = self.k3u1
        rf = k.residue_field
        assert k.leading_residue(k.u * k.z * 2 + 9, k.z) == rf.u * 2
        with pytest.raises(ValueError, match="equal values"):
            k.leading_residue(k.z, k.s)

    def test_lift(self):
        k = self.k3u1
        rf = k.residue_field
        r = (rf.u + 2) / (rf.u**2 + 1)
        assert k.lift(r).residue() == r
        assert self.k3.lift(self.k3.residue_field(2)) == self.k3(2)

    def test_reduction(self):
        k = self.k3
        assert k.z**2 == -k.z * 3 - 3
        assert "**" not in str(self.k3u1.s**2)
        assert "^" in str(self.k3u1.s**2)


if __name__ == "__main__":
    unittest.main()

from __future__ import annotations

import unittest

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramification.algebra.residues import ResidueField, artin_schreier_solvable, is_pth_power_residue

__author__ = "Materials Virtual Lab"


class ResidueFieldTest(unittest.TestCase):
    def setUp(self):
        self.f2u = ResidueField(2, with_u=True)
        self.f3u = ResidueField(3, with_u=True)
        self.f5 = ResidueField(5)

    def test_arithmetic(self):
        rf = self.f3u
        u = rf.u
        x = (u + 1) / (u + 2)
        assert x * (u + 2) == u + 1
        assert x - x == rf.zero
        assert (u**2 - 1) / (u - 1) == u + 1
        assert rf(4) == rf.one
        assert rf(3).is_zero
        assert str(u**2) == "u^2"
        with pytest.raises(ZeroDivisionError):
            u / rf.zero
        with pytest.raises(ValueError, match="not adjoined"):
            self.f5.u

    def test_hash(self):
        rf = self.f3u
        assert hash((rf.u + 1) / (rf.u + 1)) == hash(rf.one)
        assert len({rf.u, rf.u * 4, rf.one}) == 2

    def test_pth_powers(self):
        rf = self.f3u
        ok, root = is_pth_power_residue(rf, rf.u**3 + 2)
        assert ok
        assert root**3 == rf.u**3 + 2
        assert is_pth_power_residue(rf, rf.u) == (False, None)
        assert not is_pth_power_residue(rf, rf.one / rf.u)[0]
        with pytest.raises(ValueError, match="non-zero"):
            is_pth_power_residue(rf, rf.zero)

    @given(st.integers(min_value=1, max_value=4))
    def test_constants_are_pth_powers(self, c):
        ok, root = is_pth_power_residue(self.f5, self.f5(c))
        assert ok
        assert root**5 == self.f5(c)

    def test_artin_schreier(self):
        rf = self.f2u
        u = rf.u
        assert artin_schreier_solvable(rf, rf.one) == (False, None)
        assert artin_schreier_solvable(rf, rf.zero)[0]
        assert not artin_schreier_solvable(rf, u)[0]
        ok, x = artin_schreier_solvable(rf, u**2 + u)
        assert ok
        assert x**2 - x == u**2 + u
        c = rf.one / u**2 + rf.one / u
        ok, x = artin_schreier_solvable(rf, c)
        assert ok
        assert x**2 - x == c
        assert not artin_schreier_solvable(rf, rf.one / u)[0]

    def test_artin_schreier_prime_field(self):
        rf = ResidueField(3)
        assert artin_schreier_solvable(rf, rf.zero) == (True, rf.zero)
        assert not artin_schreier_solvable(rf, rf.one)[0]

    @given(st.lists(st.integers(min_value=0, max_value=2), min_size=1, max_size=4))
    def test_artin_schreier_images(self, coeffs):
        rf = self.f3u
        x = rf.zero
        for k, c in enumerate(coeffs):
            x = x + rf.u**k * c
        ok, y = artin_schreier_solvable(rf, x**3 - x)
        assert ok
        assert y**3 - y == x**3 - x


if __name__ == "__main__":
    unittest.main()

from __future__ import annotations

import unittest
from fractions import Fraction

import pytest

from ramification.algebra.expr import ExpressionSyntaxError, eval_expr, tokenize
from ramification.algebra.fields import FieldDesc, make_field

__author__ = "Materials Virtual Lab"


class TokenizeTest(unittest.TestCase):
    def test_tokens(self):
        tokens = tokenize("1 + u**2")
        assert [t[:2] for t in tokens] == [("num", "1"), ("op", "+"), ("name", "u"), ("op", "^"), ("num", "2"), ("end", "")]
        assert tokens[2][2] == 4

    def test_bad_character(self):
        with pytest.raises(ExpressionSyntaxError) as exc_info:
            tokenize("1 + $")
        assert exc_info.value.position == 4


class EvalExprTest(unittest.TestCase):
    def setUp(self):
        self.k3 = make_field(FieldDesc(3))
        self.k = make_field(FieldDesc(3, with_u=True, tower_level=1))

    def test_values(self):
        k = self.k
        assert eval_expr(k, "1 + u*z") == k.one + k.u * k.z
        assert eval_expr(k, "z^3/(1+z)") == k.z**3 / (k.one + k.z)
        assert eval_expr(k, "-(s^-1)") == -(k.s.inverse())
        assert eval_expr(k, "zeta - 1") == k.z
        assert eval_expr(k, "p") == k(3)
        assert eval_expr(k, "2/4") == k(Fraction(1, 2))
        assert eval_expr(k, "  +3 -  -2 ") == k(5)
        assert eval_expr(k, "u**2") == k.u**2

    def test_s_power(self):
        k2 = make_field(FieldDesc(3, tower_level=2))
        assert eval_expr(k2, "s", s_power=3) == k2.s**3
        assert eval_expr(k2, "s^3", s_power=3) == k2(3)

    def test_round_trip_through_str(self):
        k = self.k
        for x in (k.u * k.z / (k.u + 1) - k.s**2, k.z**-1, (k.u**2 + 3) / 7):
            assert eval_expr(k, str(x)) == x

    def test_errors(self):
        with pytest.raises(ExpressionSyntaxError) as exc_info:
            eval_expr(self.k3, "1 +")
        assert exc_info.value.position == 3
        with pytest.raises(ExpressionSyntaxError, match="'u' is not adjoined"):
            eval_expr(self.k3, "u")
        with pytest.raises(ExpressionSyntaxError, match="'s' is not adjoined"):
            eval_expr(self.k3, "1 + s")
        with pytest.raises(ExpressionSyntaxError, match="Unknown symbol"):
            eval_expr(self.k3, "x")
        with pytest.raises(ExpressionSyntaxError, match="Expected"):
            eval_expr(self.k3, "(1 + z")
        with pytest.raises(ExpressionSyntaxError, match="integer"):
            eval_expr(self.k3, "z^z")
        with pytest.raises(ExpressionSyntaxError, match="Unexpected token"):
            eval_expr(self.k3, "z z")
        with pytest.raises(ZeroDivisionError):
            eval_expr(self.k3, "1/(z - z)")
        with pytest.raises(ZeroDivisionError):
            eval_expr(self.k3, "0^-1")


if __name__ == "__main__":
    unittest.main()

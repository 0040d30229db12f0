from __future__ import annotations

import unittest
from fractions import Fraction

import pytest

from ramification.algebra.expr import eval_expr
from ramification.algebra.ext import make_extension
from ramification.algebra.fields import FieldDesc, make_field
from ramification.values import Value
from ramification.verify.forms import DiffElem, delta, dlog_circ, h_x_threshold, rsw_apply

__author__ = "Materials Virtual Lab"


class DiffElemTest(unittest.TestCase):
    def setUp(self):
        self.k = make_field(FieldDesc(3, with_u=True))
        self.z = self.k.z
        self.u = self.k.u

    def test_log_rules(self):
        z, u = self.z, self.u
        x, y = u + z, z**2 + 3
        assert DiffElem.dlog((x, y)).equals(DiffElem.dlog(x) + DiffElem.dlog(y))
        assert DiffElem.dlog(x, coeff=x).equals(DiffElem.d(x))
        assert not DiffElem.d(z + 3).equals(DiffElem.d(z))
        assert DiffElem.d(z + 3).equals(DiffElem.d(z), threshold=Value(1))
        assert DiffElem.d(-z).equals(-DiffElem.d(z))
        assert DiffElem.d(z * 2).equals(DiffElem.d(z * 2))
        assert not DiffElem.d(z * 2).equals(DiffElem.d(z))
        assert (DiffElem.d(x) - DiffElem.d(x)).normal_form() == {}
        assert DiffElem.d(self.k(7)).normal_form() == {}

    def test_products(self):
        z, u = self.z, self.u
        assert DiffElem.dlog(z * u).equals(DiffElem.dlog(z) + DiffElem.dlog(u))
        assert DiffElem.dlog(z**2).equals(DiffElem.dlog(z, coeff=2))
        assert DiffElem.dlog(z**2 / u**3).equals(DiffElem.dlog(z, coeff=2) - DiffElem.dlog(u, coeff=3))
        assert DiffElem.d(z * u).equals(z * DiffElem.d(u) + u * DiffElem.d(z))
        x = 1 + u * z
        assert DiffElem.dlog(x * (u - 2)).equals(DiffElem.dlog((x, u - 2)))
        assert DiffElem.dlog(-x).equals(DiffElem.dlog(x))

    def test_coordinates(self):
        k, z, u = self.k, self.z, self.u
        assert DiffElem.dlog(z).normal_form() == {"dlog p": k(Fraction(1, 2))}
        assert DiffElem.dlog(k(3)).normal_form() == {"dlog p": k.one}
        assert DiffElem.dlog(k(-7)).normal_form() == {}
        assert DiffElem.dlog(u).normal_form() == {"du": u.inverse()}
        assert DiffElem.d(u**2).normal_form() == {"du": 2 * u}
        tower = make_field(FieldDesc(3, tower_level=1))
        assert DiffElem.dlog(tower.s).normal_form() == {"dlog p": tower(Fraction(1, 3))}
        assert DiffElem.dlog(tower.s**3).equals(DiffElem.dlog(tower(3)))
        assert DiffElem.dlog(tower.z**2).equals(DiffElem.dlog(tower(3)))

    def test_threshold(self):
        z = self.z
        form = DiffElem.d(z, coeff=self.k(9)) + DiffElem.d(self.u)
        assert not form.equals(DiffElem.d(self.u))
        assert form.equals(DiffElem.d(self.u), threshold=Value(2))
        assert not form.equals(DiffElem.d(self.u), threshold=Value(3))
        assert form.equals(DiffElem.d(self.u), threshold=Value("5/2"))

    def test_rmul(self):
        z = self.z
        form = z * DiffElem.dlog(z)
        assert form.equals(DiffElem.d(z))
        assert str(DiffElem()) == "0"
        assert "dlog" in str(DiffElem.dlog(z))

    def test_errors(self):
        with pytest.raises(ValueError, match="non-zero"):
            DiffElem.d(self.k.zero).normal_form()
        e = make_extension(self.k, self.u)
        with pytest.raises(TypeError):
            DiffElem.dlog(e.alpha).normal_form()
        with pytest.raises(ValueError, match="dlog terms"):
            DiffElem.d(e.alpha).dn()

    def test_dn(self):
        e = make_extension(self.k, self.u)
        b = e.alpha + 1
        form = DiffElem.dlog(e.alpha, coeff=b)
        assert form.ambient == "B"
        pushed = form.dn()
        assert pushed.ambient == "A"
        assert pushed.equals(DiffElem.dlog(self.u, coeff=b.norm()))


class ModifiedDlogTest(unittest.TestCase):
    def setUp(self):
        self.k = make_field(FieldDesc(3, with_u=True))

    def test_branches(self):
        k = self.k
        z, u = k.z, k.u
        assert dlog_circ(k.one).normal_form() == {}
        assert dlog_circ(z).equals(DiffElem.dlog(z))
        assert dlog_circ(u).equals(DiffElem.dlog(u - 1, coeff=(u - 1) / u))
        assert dlog_circ(u).equals(DiffElem.dlog(u))
        assert dlog_circ(z.inverse()).equals(-DiffElem.dlog(z))
        assert dlog_circ(u / z).equals(-dlog_circ(z / u))

    def test_delta(self):
        k = self.k
        z = k.z
        assert delta(z).equals(DiffElem.d(z))
        x = k.u + z
        assert delta(x).equals(DiffElem.d(x - 1, coeff=1))

    def test_h_x_threshold(self):
        k = self.k
        assert h_x_threshold(k.one + k.z) == Value("1/2")
        assert h_x_threshold(k.z.inverse()) == Value("1/2")
        assert h_x_threshold(k.u) == Value(0)
        assert h_x_threshold(k.one).is_infinite

    def test_rsw_apply(self):
        k3 = make_field(FieldDesc(3))
        e = make_extension(k3, k3.z)
        z = k3.z
        form = rsw_apply(e, z**3 / (z - 1))
        assert form.equals(DiffElem.dlog(z, coeff=(z - 1).inverse()))
        k = self.k
        h = eval_expr(k, "1 + u*z")
        e = make_extension(k, h)
        form = rsw_apply(e, k.z**3 / (h - 1))
        assert form.equals(DiffElem.d(h - 1, coeff=((h - 1) ** 2).inverse() * (h - 1) / h))


if __name__ == "__main__":
    unittest.main()

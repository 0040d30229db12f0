from __future__ import annotations

import unittest
from fractions import Fraction

import pytest

from ramification.algebra.expr import eval_expr
from ramification.algebra.ext import Extension, make_extension
from ramification.algebra.fields import FieldDesc, make_field
from ramification.values import Value
from ramification.verify.sampling import (
    BSampler,
    diagram_generator,
    generator,
    lefschetz_witness,
    random_integral,
    random_unit,
    sample_rng,
    uniformizer,
)

__author__ = "Materials Virtual Lab"


def _ext(p, h, with_u=False, tower=0):
    fld = make_field(FieldDesc(p, with_u, tower))
    return make_extension(fld, eval_expr(fld, h)).best()


CASES = [
    (3, "z", False, 0),
    (3, "z^2", False, 0),
    (3, "1 + u*z", True, 0),
    (3, "u", True, 0),
    (3, "1 + u*z", True, 1),
    (2, "-1", False, 0),
    (2, "2", False, 0),
    (2, "5", False, 0),
    (5, "1 + z^2", False, 0),
]


class GeneratorTest(unittest.TestCase):
    def test_generator_values(self):
        for case in CASES:
            e = _ext(*case)
            mu, w_mu = generator(e)
            assert mu.valuation() == w_mu, case
            ratio = mu.sigma() / mu - 1
            assert ratio.valuation() == e.report.j, case

    def test_uniformizer(self):
        for case in CASES:
            e = _ext(*case)
            pi, w_pi = uniformizer(e)
            assert pi.valuation() == w_pi, case
            if e.report.case.ramified:
                assert w_pi == Value(Fraction(1, e.p * e.field.D)), case
            else:
                assert w_pi == Value(Fraction(1, e.field.D)), case

    def test_lefschetz_witness(self):
        for case in CASES:
            e = _ext(*case)
            b = lefschetz_witness(e)
            assert (b.sigma() - b).valuation() == e.report.i, case

    def test_diagram_generator(self):
        assert diagram_generator(_ext(3, "z")) == _ext(3, "z").alpha
        e = _ext(2, "-1")
        assert diagram_generator(e) == e.alpha - 1

    def test_requires_best(self):
        fld = make_field(FieldDesc(3))
        h = eval_expr(fld, "9*z")
        e = make_extension(fld, h)
        assert e.h != e.report.h_best
        with pytest.raises(ValueError, match="best-h"):
            generator(e)
        assert generator(e.best())[1] == Value("1/3")
        with pytest.raises(ValueError, match="best-h"):
            generator(Extension(fld, fld.z))


class SamplerTest(unittest.TestCase):
    def test_lefschetz_minimum(self):
        for case in ((3, "z", False, 0), (3, "1 + u*z", True, 1), (2, "-1", False, 0), (5, "1 + z^2", False, 0)):
            e = _ext(*case)
            sampler = BSampler(e)
            values = []
            for index in range(100):
                b = sampler.integral(sample_rng(17, index))
                values.append((b.sigma() - b).valuation())
            assert min(values) >= e.report.i, case
            witness = lefschetz_witness(e)
            assert min([*values, (witness.sigma() - witness).valuation()]) == e.report.i, case

    def test_determinism(self):
        fld = make_field(FieldDesc(3, with_u=True))
        a = random_unit(fld, sample_rng(7, 3))
        b = random_unit(fld, sample_rng(7, 3))
        assert a == b
        assert random_integral(fld, sample_rng(1, 0), 1) == random_integral(fld, sample_rng(1, 0), 1)

    def test_base_samplers(self):
        fld = make_field(FieldDesc(2, with_u=True, tower_level=1))
        for index in range(20):
            rng = sample_rng(0, index)
            assert random_unit(fld, rng).valuation() == 0
            assert random_integral(fld, rng, Value("3/2")).valuation() >= Value("3/2")

    def test_b_sampler(self):
        for case in CASES:
            e = _ext(*case)
            sampler = BSampler(e)
            for index in range(5):
                rng = sample_rng(11, index)
                b = sampler.integral(rng)
                assert not b.in_base
                assert b.valuation() >= 0
                unit = sampler.unit(rng)
                assert not unit.in_base
                assert unit.valuation() == 0


if __name__ == "__main__":
    unittest.main()

# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Case generators of the integral closure B and random samplers of A and B.

An element sum x_k mu^k with x_k in K lies in B iff every x_k mu^k does, so
drawing x_k as small units times monomials of large enough value gives a
genuine sampler of B. All randomness comes from numpy generators seeded with
(seed, index), which makes every sample reproducible on its own.
"""
from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np

from ramification.algebra.ext import Extension, ExtElem
from ramification.algebra.fields import Field, FieldElem
from ramification.classify import CaseTag
from ramification.values import Value

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__date__ = "Jun 3 2024"

logger = logging.getLogger(__name__)


class SamplerExhausted(RuntimeError):
    """The sampler could not produce an admissible element."""


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample number index of a run with the given seed."""
    return np.random.default_rng([int(seed), int(index)])


def _require_best(e: Extension) -> None:
    if e.report is None or e.h != e.report.h_best:
        raise ValueError("Generators are defined for the best-h presentation, use Extension.best().")


def generator(e: Extension) -> tuple[ExtElem, Value]:
    """
    Element mu whose powers generate B over A, with its value w(mu).

    (i) (alpha - 1)/z; (ii) alpha; (iii) alpha - 1; (iv) alpha;
    (v) (alpha - 1)/c with v(c) = t/p.
    """
    _require_best(e)
    rep = e.report
    fld = e.field
    alpha = e.alpha
    p = e.p
    if rep.case == CaseTag.UNRAMIFIED_I:
        return (alpha - 1) / fld.z, Value(0)
    if rep.case == CaseTag.WILD_II:
        return alpha, e.h.valuation() / p
    if rep.case == CaseTag.WILD_III:
        return alpha - 1, rep.t / p
    if rep.case == CaseTag.FEROCIOUS_IV:
        return alpha, Value(0)
    return (alpha - 1) / fld.mono(rep.t / p), Value(0)


def diagram_generator(e: Extension) -> ExtElem:
    """
    Generator of the logarithmic differentials of B over A: alpha when
    alpha - 1 is a unit, alpha - 1 otherwise.
    """
    _require_best(e)
    if e.report.case in (CaseTag.WILD_II, CaseTag.FEROCIOUS_IV):
        return e.alpha
    return e.alpha - 1


def uniformizer(e: Extension) -> tuple[ExtElem, Value]:
    """
    An element of B of smallest positive value. In the ramified cases this
    is mu^a c with a * w(mu) = 1/(pD) mod Gamma_K; otherwise it is the
    uniformizer of K.
    """
    fld = e.field
    if not e.report.case.ramified:
        return e.from_base(fld.mono(Fraction(1, fld.D))), Value(Fraction(1, fld.D))
    mu, w_mu = generator(e)
    lattice = e.p * fld.D
    k = int(w_mu.q * lattice)
    a = pow(k, -1, e.p)
    shift = Fraction(1 - a * k, lattice)
    return mu**a * fld.mono(shift), Value(Fraction(1, lattice))


def lefschetz_witness(e: Extension) -> ExtElem:
    """
    Element b of B with w(sigma(b) - b) = i(sigma).
    """
    if e.report.case.ramified:
        return uniformizer(e)[0]
    return generator(e)[0]


def random_unit(field: Field, rng: np.random.Generator, perturb: bool = True) -> FieldElem:
    """
    A random unit of A: a p-adic unit constant (or Gauss unit in u), plus
    optionally a small element of the maximal ideal.
    """
    p = field.p

    def unit_int() -> int:
        while True:
            n = int(rng.integers(1, 3 * p + 1))
            if n % p:
                return n * (1 if rng.random() < 0.5 else -1)

    x = field(Fraction(unit_int(), abs(unit_int())))
    if field.with_u and rng.random() < 0.6:
        c0, c1 = int(rng.integers(-p, p + 1)), unit_int()
        x = x * (field(c0) + field(c1) * field.u)
        if rng.random() < 0.3:
            x = x / (field.u + field(unit_int()))
    if perturb and rng.random() < 0.5:
        gamma = Fraction(int(rng.integers(1, 3)), field.D)
        x = x + field(int(rng.integers(-p, p + 1))) * field.mono(gamma)
    return x


def random_integral(field: Field, rng: np.random.Generator, gamma: Value | Fraction | int = 0) -> FieldElem:
    """
    Random element r * mono(g) with r a unit and g >= gamma in Gamma_K.
    """
    low = field.value_group.ceil(gamma)
    g = low.q + Fraction(int(rng.integers(0, 3)), field.D)
    return random_unit(field, rng) * field.mono(g)


class BSampler:
    """
    Sampler of the integral closure B of an extension in its best-h
    presentation.
    """

    def __init__(self, e: Extension, max_tries: int = 50):
        """
        Args:
            e: Extension over its best h.
            max_tries: Retries before a unit draw gives up.
        """
        self.e = e
        self.field = e.field
        self.mu, self.w_mu = generator(e)
        self.max_tries = max_tries
        self._powers = [e.one]
        for _ in range(1, e.p):
            self._powers.append(self._powers[-1] * self.mu)

    def _tail(self, rng: np.random.Generator) -> ExtElem:
        """sum_{k >= 1} x_k mu^k, integral, at least one x_k non-zero."""
        e = self.e
        while True:
            total = e.zero
            for k in range(1, e.p):
                if rng.random() < 0.35:
                    continue
                x = random_integral(self.field, rng, -(self.w_mu * k))
                total = total + self._powers[k] * x
            if not total.in_base:
                return total

    def integral(self, rng: np.random.Generator) -> ExtElem:
        """A random element of B outside A."""
        x0 = random_integral(self.field, rng, 0) if rng.random() < 0.8 else self.field.zero
        return self._tail(rng) + x0

    def unit(self, rng: np.random.Generator) -> ExtElem:
        """A random element of B^x outside A."""
        for _ in range(self.max_tries):
            b = self._tail(rng) + random_unit(self.field, rng)
            if b.valuation() == 0:
                return b
            logger.debug("Rejected non-unit sample %s", b)
        raise SamplerExhausted(f"No unit of B found in {self.max_tries} draws.")

# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Formal logarithmic differentials.

A DiffElem is a finite sum of terms c * dlog(a) and c * d(a). Comparison
goes through a normal form in the generators dlog p and du of forms over A:

    dlog(x) = v(x) dlog p + (dx/du)/x du,    d(x) = x dlog(x).

x -> dlog(x) is a homomorphism on the units of K, so dlog(xy) = dlog x +
dlog y and d(xy) = x dy + y dx hold exactly. Rational constants prime to p
have dlog 0, dlog z = dlog p/(p - 1) and dlog s = dlog p/p^n. Two forms are
equal when their coordinates agree, optionally after dropping coefficients
in a threshold ideal.
"""
from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Union

from ramification.algebra.ext import ExtElem
from ramification.algebra.fields import FieldElem
from ramification.values import Value

if TYPE_CHECKING:
    from ramification.algebra.ext import Extension

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__date__ = "Jun 3 2024"

logger = logging.getLogger(__name__)

DLOG = "dlog"
D = "d"

DLOG_P = "dlog p"
DU = "du"

Elem = Union[FieldElem, ExtElem]


class DiffElem:
    """
    Sum of terms (coeff, kind, arg) with kind "dlog" or "d". A dlog argument
    may be a tuple of factors.
    """

    def __init__(self, terms=(), ambient: str = "A"):
        """
        Args:
            terms: Iterable of (coeff, kind, arg).
            ambient: "A" for forms over the base ring, "B" over the integral
                closure.
        """
        self.terms = list(terms)
        self.ambient = ambient

    @classmethod
    def dlog(cls, arg, coeff=1, ambient: str | None = None) -> DiffElem:
        if ambient is None:
            first = arg[0] if isinstance(arg, tuple) else arg
            ambient = "B" if isinstance(first, ExtElem) else "A"
        return cls([(coeff, DLOG, arg)], ambient)

    @classmethod
    def d(cls, arg, coeff=1) -> DiffElem:
        return cls([(coeff, D, arg)], "B" if isinstance(arg, ExtElem) else "A")

    def __add__(self, other: DiffElem) -> DiffElem:
        return DiffElem(self.terms + other.terms, self.ambient)

    def __neg__(self) -> DiffElem:
        return DiffElem([(-c, k, a) for c, k, a in self.terms], self.ambient)

    def __sub__(self, other: DiffElem) -> DiffElem:
        return self + (-other)

    def __rmul__(self, c) -> DiffElem:
        return DiffElem([(c * t, k, a) for t, k, a in self.terms], self.ambient)

    def dn(self) -> DiffElem:
        """
        Norm map to forms over A, b dlog(x) -> N(b) dlog(N(x)).
        """
        terms = []
        for c, kind, arg in self.terms:
            if kind != DLOG:
                raise ValueError("The norm map is only defined on dlog terms.")
            args = arg if isinstance(arg, tuple) else (arg,)
            terms.append((_norm(c), DLOG, tuple(_norm(a) for a in args)))
        return DiffElem(terms, "A")

    def normal_form(self, threshold: Value | None = None) -> dict[str, FieldElem]:
        """
        Coordinates {"dlog p": c, "du": c'} of a form over A. Zero
        coordinates are left out.

        Args:
            threshold: Drop coefficients of valuation >= threshold.
        """
        collected: dict[str, FieldElem] = {}
        for coeff, kind, arg in self.terms:
            args = arg if isinstance(arg, tuple) else (arg,)
            for a in args:
                if not isinstance(a, FieldElem):
                    raise TypeError("Normal forms are computed for forms over A only.")
                if a.is_zero:
                    raise ValueError("The argument of a differential must be non-zero.")
                c = coeff if isinstance(coeff, FieldElem) else a.field(coeff)
                if kind == D:
                    c = c * a
                for key, part in _dlog_coordinates(a).items():
                    collected[key] = collected[key] + c * part if key in collected else c * part
        result = {}
        for key, c in collected.items():
            if c.is_zero:
                continue
            if threshold is not None and c.valuation() >= threshold:
                continue
            result[key] = c
        return result

    def equals(self, other: DiffElem, threshold: Value | None = None) -> bool:
        return (self - other).normal_form(threshold) == {}

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, kind, arg in self.terms:
            args = arg if isinstance(arg, tuple) else (arg,)
            inner = "*".join(f"({a})" for a in args)
            parts.append(f"({c})*{kind}{inner}")
        return " + ".join(parts)

    __repr__ = __str__


def _dlog_coordinates(x: FieldElem) -> dict[str, FieldElem]:
    fld = x.field
    coords = {}
    v = x.valuation()
    if v != 0:
        coords[DLOG_P] = fld(v.q)
    dx = fld.derivative(x)
    if not dx.is_zero:
        coords[DU] = dx / x
    return coords


def _norm(x):
    if isinstance(x, ExtElem):
        return x.norm()
    return x


def dlog_circ(x: FieldElem) -> DiffElem:
    """
    The modified logarithmic differential of x:

    * 0 for x = 1,
    * dlog(x) for x in the maximal ideal,
    * ((x - 1)/x) dlog(x - 1) for a unit x,
    * -dlog°(1/x) for x outside A.
    """
    if x == 1:
        return DiffElem()
    v = x.valuation()
    if v > 0:
        return DiffElem.dlog(x)
    if v == 0:
        return DiffElem.dlog(x - 1, (x - 1) / x)
    return -dlog_circ(x.inverse())


def delta(b: FieldElem) -> DiffElem:
    """b * dlog°(b)."""
    return b * dlog_circ(b)


def h_x_threshold(x: FieldElem) -> Value:
    """
    Threshold of H_x = (x - 1)A meet A meet (x - 1)^-1 A, that is |v(x - 1)|.
    """
    v = (x - 1).valuation()
    if v.is_infinite:
        return v
    return v if v >= 0 else -v


def rsw_apply(e: Extension, r: FieldElem) -> DiffElem:
    """
    Image of r in H under the refined Swan conductor, (r/z^p) dlog°(h).
    """
    h = e.report.h_best
    fld = e.field
    return (r / fld.z**e.p) * dlog_circ(h)

# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Arithmetic in the Kummer extension L = K[X]/(X^p - h) with generator sigma of
the Galois group acting by alpha -> zeta * alpha.
"""
from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Sequence

from ramification.algebra.fields import Field, FieldElem
from ramification.values import Value

if TYPE_CHECKING:
    from ramification.classify import ExtensionReport

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__maintainer__ = "Materials Virtual Lab"
__email__ = "ongsp@eng.ucsd.edu"
__date__ = "Jun 3 2024"


class Extension:
    """
    The extension L = K(alpha), alpha^p = h, together with its classification
    report. Build it with make_extension, which certifies that h gives a
    degree-p extension of the henselized base.
    """

    def __init__(self, field: Field, h: FieldElem, report: ExtensionReport | None = None):
        """
        Args:
            field: Base field K.
            h: Kummer element, alpha^p = h.
            report: Classification of h. make_extension fills it in.
        """
        if h.is_zero:
            raise ValueError("h must be non-zero!")
        self.field = field
        self.p = field.p
        self.h = h
        self.report = report
        self._zeta_powers = [field.zeta**k for k in range(self.p)]

    def element(self, coeffs: Sequence[FieldElem | int | Fraction]) -> ExtElem:
        """
        The element sum c_i alpha^i. Missing coefficients are zero.
        """
        if len(coeffs) > self.p:
            raise ValueError(f"At most {self.p} coefficients expected.")
        full = [c if isinstance(c, FieldElem) else self.field(c) for c in coeffs]
        full += [self.field.zero] * (self.p - len(full))
        return ExtElem(self, tuple(full))

    def from_base(self, x: FieldElem | int | Fraction) -> ExtElem:
        return self.element([x])

    @property
    def alpha(self) -> ExtElem:
        return self.element([0, 1])

    @property
    def zero(self) -> ExtElem:
        return self.element([])

    @property
    def one(self) -> ExtElem:
        return self.element([1])

    def zeta_power(self, k: int) -> FieldElem:
        return self._zeta_powers[k % self.p]

    def best(self) -> Extension:
        """
        The same field L presented through the best h of the report.
        """
        if self.report is None:
            raise ValueError("Extension has no classification report.")
        if self.report.h_best == self.h:
            return self
        return Extension(self.field, self.report.h_best, self.report)

    def __repr__(self) -> str:
        return f"Extension({self.field!r}, alpha^{self.p} = {self.h})"


class ExtElem:
    """
    Element sum c_i alpha^i of L with c_i in K, i < p.
    """

    __slots__ = ("coeffs", "ext")

    def __init__(self, ext: Extension, coeffs: tuple[FieldElem, ...]):
        self.ext = ext
        self.coeffs = coeffs

    def _other(self, other) -> ExtElem:
        if isinstance(other, ExtElem):
            if other.ext is not self.ext and other.ext.h != self.ext.h:
                raise ValueError("Elements of different extensions cannot be combined.")
            return other
        if isinstance(other, (FieldElem, int, Fraction)):
            return self.ext.from_base(other)
        return NotImplemented

    def __add__(self, other) -> ExtElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ExtElem(self.ext, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> ExtElem:
        return ExtElem(self.ext, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> ExtElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ExtElem(self.ext, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other) -> ExtElem:
        return self._other(other) - self

    def __mul__(self, other) -> ExtElem:
        if isinstance(other, (FieldElem, int, Fraction)):
            return ExtElem(self.ext, tuple(a * other for a in self.coeffs))
        other = self._other(other)
        if other is NotImplemented:
            return other
        p = self.ext.p
        fld = self.ext.field
        low = [fld.ring.zero] * p
        high = [fld.ring.zero] * p
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_zero:
                    continue
                if i + j < p:
                    low[i + j] += a.poly * b.poly
                else:
                    high[i + j - p] += a.poly * b.poly
        hpoly = self.ext.h.poly
        return ExtElem(self.ext, tuple(fld.element(lo + hi * hpoly) for lo, hi in zip(low, high)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> ExtElem:
        if isinstance(other, (FieldElem, int, Fraction)):
            inv = (other if isinstance(other, FieldElem) else self.ext.field(other)).inverse()
            return self * inv
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> ExtElem:
        return self._other(other) * self.inverse()

    def __pow__(self, k: int) -> ExtElem:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.ext.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    @property
    def in_base(self) -> bool:
        return all(c.is_zero for c in self.coeffs[1:])

    def base_value(self) -> FieldElem:
        """
        The element of K this element equals. Raises if it is not in K.
        """
        if not self.in_base:
            raise ValueError(f"{self} does not lie in the base field.")
        return self.coeffs[0]

    def sigma(self, power: int = 1) -> ExtElem:
        """
        sigma^power, acting by c_i -> zeta^(i * power) c_i.
        """
        return ExtElem(self.ext, tuple(c * self.ext.zeta_power(i * power) for i, c in enumerate(self.coeffs)))

    def conjugate_product(self) -> ExtElem:
        """Product of sigma^k(x) over 1 <= k < p."""
        result = self.ext.one
        for k in range(1, self.ext.p):
            result = result * self.sigma(k)
        return result

    def norm(self) -> FieldElem:
        """
        N_{L|K}(x) as the product of all conjugates. X^p - h is monic, so this
        equals the resultant Res_X(X^p - h, x(X)).
        """
        return (self * self.conjugate_product()).base_value()

    def trace(self) -> FieldElem:
        """Tr_{L|K}(x) = p * c_0, the other powers of alpha have trace 0."""
        return self.coeffs[0] * self.ext.p

    def inverse(self) -> ExtElem:
        if self.is_zero:
            raise ZeroDivisionError("Zero is not invertible in L.")
        if self.in_base:
            return self.ext.from_base(self.coeffs[0].inverse())
        conj = self.conjugate_product()
        return conj * (self * conj).base_value().inverse()

    def valuation(self) -> Value:
        """
        w(x) = v(N(x))/p, the unique extension of v to L.
        """
        if self.is_zero:
            return Value.inf()
        if self.in_base:
            return self.coeffs[0].valuation()
        return self.norm().valuation() / self.ext.p

    def __eq__(self, other) -> bool:
        if isinstance(other, (FieldElem, int, Fraction)):
            other = self.ext.from_base(other)
        if not isinstance(other, ExtElem):
            return False
        return self.ext.h == other.ext.h and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(tuple(hash(c) for c in self.coeffs))

    def __str__(self) -> str:
        return "[" + "; ".join(str(c) for c in self.coeffs) + "]"

    def __repr__(self) -> str:
        return f"ExtElem({self})"


def make_extension(field: Field, h: FieldElem, max_iter: int = 200) -> Extension:
    """
    Classify h and build L = K(h^(1/p)).

    Args:
        field: Base field K.
        h: Non-zero element of K.
        max_iter: Cap of the best-h loop.

    Returns:
        Extension carrying its ExtensionReport.
    """
    from ramification.classify import classify

    report = classify(field, h, max_iter=max_iter)
    return Extension(field, h, report)


def sigma(e: Extension, x: ExtElem, power: int = 1) -> ExtElem:
    return x.sigma(power)


def ext_valuation(e: Extension, x: ExtElem) -> Value:
    return x.valuation()


def min_poly(e: Extension, b: ExtElem) -> list[FieldElem]:
    """
    Minimal polynomial of b over K as coefficients from degree 0 upwards.

    Args:
        e: The extension.
        b: Element of L.

    Returns:
        [g_0, ..., g_p] with g_p = 1, or [-b, 1] when b lies in K.
    """
    fld = e.field
    if b.in_base:
        return [-b.coeffs[0], fld.one]
    coeffs = [e.one]
    for k in range(e.p):
        root = b.sigma(k)
        shifted = [e.zero, *coeffs]
        for i, c in enumerate(coeffs):
            shifted[i] = shifted[i] - root * c
        coeffs = shifted
    return [c.base_value() for c in coeffs]


def poly_eval(coeffs: Sequence[FieldElem], x: ExtElem) -> ExtElem:
    """Horner evaluation of a K-polynomial at x in L."""
    result = x.ext.zero
    for c in reversed(coeffs):
        result = result * x + c
    return result


def poly_derivative(coeffs: Sequence[FieldElem]) -> list[FieldElem]:
    return [c * k for k, c in enumerate(coeffs)][1:]

# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
The residue field k of the base field: F_p, or F_p(u) when the transcendental
u is adjoined. Elements are reduced fractions of polynomials in u over GF(p)
with monic denominators, so equality is structural.
"""
from __future__ import annotations

import logging
from math import ceil

from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__date__ = "Jun 3 2024"

logger = logging.getLogger(__name__)


class ResidueField:
    """
    F_p(u) represented through the polynomial ring F_p[u]. Without u, every
    element is a constant polynomial and the same code paths apply.
    """

    def __init__(self, p: int, with_u: bool = False):
        """
        Args:
            p: Characteristic.
            with_u: Whether u is adjoined.
        """
        self.p = p
        self.with_u = with_u
        self.ring, self._u = ring("u", GF(p), lex)

    def __call__(self, num, den=1) -> ResElem:
        return ResElem(self, self._poly(num), self._poly(den))

    def _poly(self, x):
        if isinstance(x, int):
            return self.ring.ground_new(x % self.p)
        return x

    def from_coefficients(self, num: dict[int, int], den: dict[int, int] | None = None) -> ResElem:
        """
        Build num/den from {exponent: integer coefficient} dictionaries.
        """
        den = den or {0: 1}
        return ResElem(
            self,
            self.ring.from_dict({(k,): c % self.p for k, c in num.items() if c % self.p}),
            self.ring.from_dict({(k,): c % self.p for k, c in den.items() if c % self.p}),
        )

    @property
    def zero(self) -> ResElem:
        return self(0)

    @property
    def one(self) -> ResElem:
        return self(1)

    @property
    def u(self) -> ResElem:
        if not self.with_u:
            raise ValueError("u is not adjoined to this residue field!")
        return ResElem(self, self._u, self.ring.one)

    def coefficients(self, poly) -> dict[int, int]:
        """
        {exponent: coefficient in [0, p)} of a polynomial over GF(p).
        """
        return {m[0]: int(c) % self.p for m, c in poly.items() if int(c) % self.p}

    def __repr__(self) -> str:
        return f"F_{self.p}(u)" if self.with_u else f"F_{self.p}"


class ResElem:
    """
    A residue class num/den in lowest terms, den monic.
    """

    __slots__ = ("den", "num", "rf")

    def __init__(self, rf: ResidueField, num, den):
        if not den:
            raise ZeroDivisionError("Residue denominator is zero.")
        self.rf = rf
        if not num:
            self.num, self.den = rf.ring.zero, rf.ring.one
            return
        g = num.gcd(den)
        num, den = num.quo(g), den.quo(g)
        inv = rf.ring.domain.revert(den.LC)
        self.num = num.mul_ground(inv)
        self.den = den.monic()

    def _other(self, other) -> ResElem:
        if isinstance(other, ResElem):
            return other
        if isinstance(other, int):
            return self.rf(other)
        return NotImplemented

    def __add__(self, other) -> ResElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ResElem(self.rf, self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> ResElem:
        return ResElem(self.rf, -self.num, self.den)

    def __sub__(self, other) -> ResElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> ResElem:
        return self._other(other) - self

    def __mul__(self, other) -> ResElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ResElem(self.rf, self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> ResElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        if other.is_zero:
            raise ZeroDivisionError("Division by the zero residue.")
        return ResElem(self.rf, self.num * other.den, self.den * other.num)

    def __pow__(self, k: int) -> ResElem:
        if k < 0:
            return self.rf.one / self**-k
        return ResElem(self.rf, self.num**k, self.den**k)

    @property
    def is_zero(self) -> bool:
        return not self.num

    def __eq__(self, other) -> bool:
        other = self._other(other)
        if other is NotImplemented:
            return False
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        coeffs = self.rf.coefficients
        return hash((tuple(sorted(coeffs(self.num).items())), tuple(sorted(coeffs(self.den).items()))))

    def __str__(self) -> str:
        num = str(self.num.as_expr()).replace("**", "^")
        if self.den == self.rf.ring.one:
            return num
        return f"({num})/({str(self.den.as_expr()).replace('**', '^')})"

    __repr__ = __str__


def _pth_root_poly(rf: ResidueField, poly):
    """
    The p-th root of a polynomial over GF(p), or None. Frobenius is the
    identity on F_p, so only the exponents have to be divisible by p.
    """
    p = rf.p
    terms = rf.coefficients(poly)
    if any(k % p for k in terms):
        return None
    return rf.ring.from_dict({(k // p,): c for k, c in terms.items()})


def is_pth_power_residue(rf: ResidueField, c: ResElem) -> tuple[bool, ResElem | None]:
    """
    Decide whether c lies in k^p.

    Args:
        rf: The residue field k.
        c: A non-zero residue.

    Returns:
        (True, d) with d^p = c, or (False, None).
    """
    if c.is_zero:
        raise ValueError("The p-th power test is only defined for non-zero residues!")
    num = _pth_root_poly(rf, c.num)
    den = _pth_root_poly(rf, c.den)
    if num is None or den is None:
        return False, None
    return True, ResElem(rf, num, den)


def artin_schreier_solvable(rf: ResidueField, c: ResElem) -> tuple[bool, ResElem | None]:
    """
    Decide whether c = x^p - x for some x in k.

    With c = num/den reduced, any solution x = a/b (reduced, b monic) has
    den = b^p, and deg a <= max(deg b, ceil(deg num / p)). The coefficients
    of a then solve a linear system over F_p.

    Args:
        rf: The residue field k.
        c: Residue to test.

    Returns:
        (True, x) with x^p - x = c, or (False, None).
    """
    p = rf.p
    if c.is_zero:
        return True, rf.zero
    b = _pth_root_poly(rf, c.den)
    if b is None:
        return False, None

    deg_b = b.degree()
    deg_num = c.num.degree()
    dmax = max(deg_b, ceil(deg_num / p))
    b_pm1 = b ** (p - 1)
    # Image of u^k under a -> a^p - a * b^(p-1).
    images = [rf.coefficients(rf._u ** (k * p) - rf._u**k * b_pm1) for k in range(dmax + 1)]
    target = rf.coefficients(c.num)
    nrows = max([deg_num, *(max(im, default=0) for im in images)]) + 1

    dom = rf.ring.domain
    rows = [[dom(images[k].get(r, 0)) for k in range(dmax + 1)] + [dom(target.get(r, 0))] for r in range(nrows)]
    reduced, pivots = DomainMatrix(rows, (nrows, dmax + 2), dom).rref()
    if dmax + 1 in pivots:
        return False, None

    entries = reduced.to_list()
    a = {col: int(entries[r][dmax + 1]) % p for r, col in enumerate(pivots)}
    x = ResElem(rf, rf.ring.from_dict({(k,): v for k, v in a.items() if v}), b)
    if x**p - x != c:
        raise RuntimeError("Artin-Schreier solve returned a non-solution.")
    logger.debug("Solved x^p - x = %s with x = %s", c, x)
    return True, x

# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Exact arithmetic in the base field K = Q(zeta_p)(u)[s]/(s^(p^n) - p).

Elements are polynomials in z = zeta - 1 and s over Q or Q(u), reduced modulo
E(z) = ((1 + z)^p - 1)/z and s^(p^n) - p. E is Eisenstein in z, so v(z) =
1/(p - 1), and the values of the reduced monomials z^i s^j are pairwise
distinct modulo Z. The valuation of an element is therefore the minimum over
its terms, and both the valuation and the residue can be read off the
canonical form without computing norms.

K is a global model: its value group (1/D)Z with D = (p - 1) p^n and its
residue field F_p or F_p(u) coincide with those of the henselization, and
every invariant computed in this package depends on those data only.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from math import comb

from monty.json import MSONable
from sympy import isprime
from sympy.ntheory import multiplicity
from sympy.polys.domains import QQ
from sympy.polys.fields import field as frac_field
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import lex
from sympy.polys.rings import ring

from ramification.algebra.residues import ResElem, ResidueField
from ramification.values import MalformedValue, Value, ValueGroup

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__maintainer__ = "Materials Virtual Lab"
__email__ = "ongsp@eng.ucsd.edu"
__date__ = "Jun 3 2024"

logger = logging.getLogger(__name__)


class NegativeValuation(ValueError):
    """
    Raised when the residue of an element outside the valuation ring is requested.
    """


class FieldDesc(MSONable):
    """
    Descriptor of a base field backend.
    """

    def __init__(self, p: int, with_u: bool = False, tower_level: int = 0):
        """
        Args:
            p: The prime. zeta_p is adjoined to Q.
            with_u: Adjoin a transcendental u carrying the Gauss valuation.
                The residue field becomes F_p(u).
            tower_level: n >= 0. Adjoin s with s^(p^n) = p.
        """
        self.p = int(p)
        self.with_u = bool(with_u)
        self.tower_level = int(tower_level)

    @property
    def key(self) -> tuple[int, bool, int]:
        return self.p, self.with_u, self.tower_level

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldDesc) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"FieldDesc(p={self.p}, with_u={self.with_u}, tower_level={self.tower_level})"


class Field:
    """
    Handle on a base field K. Immutable once built; use make_field to obtain
    cached instances.
    """

    def __init__(self, desc: FieldDesc):
        """
        Args:
            desc: Field descriptor.
        """
        if desc.p < 2 or not isprime(desc.p):
            raise ValueError(f"p should be a prime number, got {desc.p}!")
        if desc.tower_level < 0:
            raise ValueError("Tower level must be non-negative!")
        self.desc = desc
        self.p = desc.p
        self.with_u = desc.with_u
        self.tower_level = desc.tower_level
        self.N = self.p**self.tower_level
        self.D = (self.p - 1) * self.N
        self.value_group = ValueGroup(self.D, self.tower_level)
        self.residue_field = ResidueField(self.p, self.with_u)

        if self.with_u:
            self.ufield, self._u = frac_field("u", QQ)
            self.domain = self.ufield.to_domain()
        else:
            self.ufield, self._u = None, None
            self.domain = QQ
        self.ring, z, s = ring("z,s", self.domain, lex)
        eisenstein = sum((comb(self.p, k) * z ** (k - 1) for k in range(1, self.p + 1)), self.ring.zero)
        self._relations = [eisenstein, s**self.N - self.p]
        self.basis = [(i, j) for i in range(self.p - 1) for j in range(self.N)]

        self.zero = FieldElem(self, self.ring.zero)
        self.one = FieldElem(self, self.ring.one)
        self.z = self.element(z)
        self.zeta = self.one + self.z
        self._s = self.element(s)

    @property
    def u(self) -> FieldElem:
        if not self.with_u:
            raise ValueError("u is not adjoined to this field!")
        return self.element(self.ring.ground_new(self._u))

    @property
    def s(self) -> FieldElem:
        if self.tower_level == 0:
            raise ValueError("s is not adjoined at tower level 0!")
        return self._s

    def element(self, poly) -> FieldElem:
        """
        Reduce a polynomial of the ambient ring to canonical form.
        """
        return FieldElem(self, poly.rem(self._relations) if poly else poly)

    def coeff(self, q: int | Fraction) -> object:
        """
        Convert an exact rational into the coefficient domain.
        """
        q = Fraction(q)
        c = QQ(q.numerator, q.denominator)
        return c if self.domain == QQ else self.domain.convert_from(c, QQ)

    def __call__(self, q: int | Fraction) -> FieldElem:
        return FieldElem(self, self.ring.ground_new(self.coeff(q)))

    def ground(self, c) -> FieldElem:
        """
        Element of K for a coefficient-domain element c.
        """
        return FieldElem(self, self.ring.ground_new(c))

    def coeff_valuation(self, c) -> Fraction:
        """
        p-adic valuation of a non-zero coefficient, Gauss-extended to Q(u).
        """
        if self.domain == QQ:
            return self._qq_valuation(c)
        return self._gauss(c.numer) - self._gauss(c.denom)

    def _qq_valuation(self, c) -> Fraction:
        num, den = int(QQ.numer(c)), int(QQ.denom(c))
        return Fraction(multiplicity(self.p, abs(num)) - multiplicity(self.p, den))

    def _gauss(self, poly) -> Fraction:
        return min(self._qq_valuation(c) for c in poly.values())

    def _qq_mod_p(self, c, shift: int = 0) -> int:
        """
        Image of p^-shift * c in F_p.
        """
        q = Fraction(int(QQ.numer(c)), int(QQ.denom(c))) / Fraction(self.p) ** shift
        if q.denominator % self.p == 0:
            raise NegativeValuation("Coefficient is not p-integral.")
        return q.numerator * pow(q.denominator, -1, self.p) % self.p

    def coeff_residue(self, c) -> ResElem:
        """
        Residue of a coefficient of non-negative valuation.
        """
        rf = self.residue_field
        if not c:
            return rf.zero
        val = self.coeff_valuation(c)
        if val < 0:
            raise NegativeValuation("Coefficient has negative valuation.")
        if val > 0:
            return rf.zero
        if self.domain == QQ:
            return rf(self._qq_mod_p(c))
        a, b = self._gauss(c.numer), self._gauss(c.denom)
        num = {m[0]: self._qq_mod_p(x, int(a)) for m, x in c.numer.items()}
        den = {m[0]: self._qq_mod_p(x, int(b)) for m, x in c.denom.items()}
        return rf.from_coefficients(num, den)

    def term_value(self, monom: tuple[int, int], c) -> Value:
        i, j = monom
        return Value(self.coeff_valuation(c) + Fraction(i, self.p - 1) + Fraction(j, self.N))

    def leading_term(self, x: FieldElem) -> tuple[tuple[int, int], object, Value]:
        """
        The unique term of minimal value of a non-zero element.

        Returns:
            (monomial, coefficient, value)
        """
        if not x.poly:
            raise ValueError("Zero has no leading term!")
        return min(((m, c, self.term_value(m, c)) for m, c in x.poly.items()), key=lambda t: t[2])

    def leading_residue(self, x: FieldElem, g: FieldElem) -> ResElem:
        """
        Residue of x/g for v(x) = v(g), without inverting g. The minimal terms
        of x and g then share the same monomial.
        """
        mx, cx, vx = self.leading_term(x)
        mg, cg, vg = self.leading_term(g)
        if vx != vg:
            raise ValueError(f"Leading residue needs equal values, got {vx} and {vg}.")
        if mx != mg:
            raise RuntimeError("Equal values with different leading monomials.")
        return self.coeff_residue(self.domain.quo(cx, cg))

    def mono(self, gamma: Value | int | Fraction) -> FieldElem:
        """
        The canonical monomial z^a s^b p^c of value gamma with 0 <= a < p - 1
        and 0 <= b < p^n.

        Args:
            gamma: An element of the value group.
        """
        gamma = Value(gamma)
        if gamma.is_infinite or not self.value_group.contains(gamma):
            raise MalformedValue(f"{gamma} is not in the value group (1/{self.D})Z.")
        m = self.value_group.index(gamma)
        p1, N = self.p - 1, self.N
        a = m * pow(N, -1, p1) % p1 if p1 > 1 else 0
        b = m * pow(p1, -1, N) % N if N > 1 else 0
        c = (m - a * N - b * p1) // self.D
        return FieldElem(self, self.ring.term_new((a, b), self.coeff(Fraction(self.p) ** c)))

    def lift(self, r: ResElem) -> FieldElem:
        """
        Canonical lift of a residue to a unit of A, coefficients in [0, p).
        """
        rf = self.residue_field
        num, den = rf.coefficients(r.num), rf.coefficients(r.den)
        if self.domain == QQ:
            return self(Fraction(num.get(0, 0), den.get(0, 1)))
        uring = self.ufield.ring
        lifted = self.ufield(uring.from_dict({(k,): QQ(c) for k, c in num.items()})) / self.ufield(
            uring.from_dict({(k,): QQ(c) for k, c in den.items()})
        )
        return self.ground(lifted)

    def derivative(self, x: FieldElem) -> FieldElem:
        """
        The partial derivative of x in u, zero when u is not adjoined. The
        relations defining K have rational coefficients, so this is a
        derivation of K.
        """
        if not self.with_u or x.is_zero:
            return self.zero
        terms = {m: c.diff(self._u) for m, c in x.poly.items()}
        return FieldElem(self, self.ring.from_dict({m: c for m, c in terms.items() if c}))

    def multiplication_matrix(self, x: FieldElem) -> DomainMatrix:
        """
        Matrix of y -> x*y on the monomial basis of K over the coefficient domain.
        """
        index = {m: k for k, m in enumerate(self.basis)}
        dim = len(self.basis)
        rows = [[self.domain.zero] * dim for _ in range(dim)]
        for col, m in enumerate(self.basis):
            prod = self.element(x.poly * self.ring.term_new(m, self.domain.one))
            for mon, c in prod.poly.items():
                rows[index[mon]][col] = c
        return DomainMatrix(rows, (dim, dim), self.domain)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.desc == other.desc

    def __hash__(self) -> int:
        return hash(self.desc)

    def __repr__(self) -> str:
        name = f"Q(zeta_{self.p})"
        if self.with_u:
            name += "(u)"
        if self.tower_level:
            name += f"[s]/(s^{self.N} - {self.p})"
        return name


@lru_cache(maxsize=None)
def make_field(desc: FieldDesc) -> Field:
    """
    Build (or fetch) the field described by desc.

    Args:
        desc: Field descriptor.

    Returns:
        Field handle.
    """
    logger.debug("Building field for %s", desc)
    return Field(desc)


class FieldElem:
    """
    Canonical element of K.
    """

    __slots__ = ("field", "poly")

    def __init__(self, field: Field, poly):
        self.field = field
        self.poly = poly

    def _other(self, other) -> FieldElem:
        if isinstance(other, FieldElem):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field(other)
        return NotImplemented

    def __add__(self, other) -> FieldElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, self.poly + other.poly)

    __radd__ = __add__

    def __neg__(self) -> FieldElem:
        return FieldElem(self.field, -self.poly)

    def __sub__(self, other) -> FieldElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, self.poly - other.poly)

    def __rsub__(self, other) -> FieldElem:
        return self._other(other) - self

    def __mul__(self, other) -> FieldElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self.field.element(self.poly * other.poly)

    __rmul__ = __mul__

    def __truediv__(self, other) -> FieldElem:
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> FieldElem:
        return self._other(other) * self.inverse()

    def __pow__(self, k: int) -> FieldElem:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.field.one, self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    @property
    def is_zero(self) -> bool:
        return not self.poly

    @property
    def is_ground(self) -> bool:
        """True if the element lies in Q or Q(u)."""
        return all(m == (0, 0) for m in self.poly)

    def constant(self):
        """The coefficient of the monomial 1."""
        return self.poly.get((0, 0), self.field.domain.zero)

    def inverse(self) -> FieldElem:
        """
        Multiplicative inverse, solving x*y = 1 on the monomial basis.
        """
        if self.is_zero:
            raise ZeroDivisionError("Zero is not invertible in K.")
        fld = self.field
        if self.is_ground:
            return fld.ground(fld.domain.revert(self.constant()))
        dim = len(fld.basis)
        rhs = DomainMatrix([[fld.domain.one]] + [[fld.domain.zero] for _ in range(dim - 1)], (dim, 1), fld.domain)
        sol = fld.multiplication_matrix(self).lu_solve(rhs).to_list()
        poly = fld.ring.from_dict({m: row[0] for m, row in zip(fld.basis, sol) if row[0]})
        return FieldElem(fld, poly)

    def valuation(self) -> Value:
        """
        v(x), with v(p) = 1 and v(0) = inf.
        """
        if self.is_zero:
            return Value.inf()
        return min(self.field.term_value(m, c) for m, c in self.poly.items())

    def residue(self) -> ResElem:
        """
        Image in the residue field. Only the constant term can contribute,
        all other monomials have positive value once the element is integral.
        """
        if self.valuation() < 0:
            raise NegativeValuation(f"{self} has negative valuation, no residue.")
        return self.field.coeff_residue(self.constant())

    def __eq__(self, other) -> bool:
        other = self._other(other)
        if other is NotImplemented:
            return False
        return self.field == other.field and self.poly == other.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __str__(self) -> str:
        return str(self.poly.as_expr()).replace("**", "^")

    def __repr__(self) -> str:
        return f"FieldElem({self})"


def valuation(field: Field, x: FieldElem) -> Value:
    """Valuation of x in field."""
    return x.valuation()


def residue(field: Field, x: FieldElem) -> ResElem:
    """Residue of x in the residue field of field."""
    return x.residue()

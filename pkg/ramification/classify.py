# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Best-h normalization and classification of degree-p Kummer extensions.

Multiplying h by a p-th power a^p does not change the extension. The best-h
loop uses such multiplications to push t = v(h - 1) as high as possible, and
the obstruction that stops it decides which of the five cases the extension
belongs to:

* UNRAMIFIED_I: t = p v(z), leading residue not of the form x^p - x.
* WILD_II: v(h) not in p Gamma.
* WILD_III: 0 < t < p v(z), t not in p Gamma.
* FEROCIOUS_IV: v(h) = 0, residue of h not a p-th power.
* FEROCIOUS_V: 0 < t < p v(z), t in p Gamma, leading residue not a p-th power.

If t exceeds p v(z), h is a p-th power in the henselization and there is no
extension at all.
"""
from __future__ import annotations

import logging
from enum import Enum
from fractions import Fraction
from typing import NamedTuple

from monty.json import MSONable

from ramification.algebra.expr import eval_expr
from ramification.algebra.fields import Field, FieldDesc, FieldElem, make_field
from ramification.algebra.residues import artin_schreier_solvable, is_pth_power_residue
from ramification.values import Value, in_p_multiple, w_normalize

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__maintainer__ = "Materials Virtual Lab"
__email__ = "ongsp@eng.ucsd.edu"
__date__ = "Jun 3 2024"

logger = logging.getLogger(__name__)


class ZeroH(ValueError):
    """h = 0 does not define an extension."""


class NotInA(ValueError):
    """
    h is a p-th power in the henselization, so X^p - h splits and the
    extension is trivial.
    """


class IterationCap(RuntimeError):
    """The best-h loop did not terminate within max_iter multiplications."""


class CaseTag(Enum):
    """
    The five mutually exclusive shapes of a best h.
    """

    UNRAMIFIED_I = "UNRAMIFIED_I"
    WILD_II = "WILD_II"
    WILD_III = "WILD_III"
    FEROCIOUS_IV = "FEROCIOUS_IV"
    FEROCIOUS_V = "FEROCIOUS_V"

    @property
    def ramified(self) -> bool:
        """e = p."""
        return self in (CaseTag.WILD_II, CaseTag.WILD_III)


class BestH(NamedTuple):
    h_best: FieldElem
    case: CaseTag
    iterations: int
    t: Value


class _Counter:
    def __init__(self, max_iter: int):
        self.max_iter = max_iter
        self.count = 0

    def step(self, h: FieldElem, reason: str) -> FieldElem:
        self.count += 1
        if self.count > self.max_iter:
            raise IterationCap(f"Best-h loop exceeded {self.max_iter} iterations.")
        logger.debug("Iteration %d (%s): h -> %s", self.count, reason, h)
        return h


def _unit_one_loop(field: Field, h: FieldElem, counter: _Counter) -> tuple[FieldElem, CaseTag, Value]:
    """
    Raise t = v(h - 1) for h = 1 mod m_A until an obstruction is met.
    """
    p = field.p
    rf = field.residue_field
    bound = Value(Fraction(p, p - 1))
    while True:
        d = h - 1
        if d.is_zero:
            raise NotInA("h = 1 is a p-th power.")
        t = d.valuation()
        if t > bound:
            raise NotInA(f"v(h - 1) = {t} exceeds v(z^p) = {bound}; h is a p-th power in the henselization.")
        if t == bound:
            c = field.leading_residue(d, field.z**p)
            solvable, x = artin_schreier_solvable(rf, c)
            if not solvable:
                return h, CaseTag.UNRAMIFIED_I, t
            h = counter.step(h * (1 - field.z * field.lift(x)) ** p, f"t = {t}, x^p - x = {c}")
            continue
        if not in_p_multiple(t, field.value_group, p):
            return h, CaseTag.WILD_III, t
        m = field.mono(t / p)
        c = field.leading_residue(d, m**p)
        is_power, root = is_pth_power_residue(rf, c)
        if not is_power:
            return h, CaseTag.FEROCIOUS_V, t
        h = counter.step(h * (1 - field.lift(root) * m) ** p, f"t = {t}, d^p = {c}")


def _is_henselian_pth_power(field: Field, x: FieldElem, max_iter: int) -> bool:
    try:
        _unit_one_loop(field, x, _Counter(max_iter))
    except NotInA:
        return True
    return False


def best_h(field: Field, h: FieldElem, max_iter: int = 200) -> BestH:
    """
    Normalize h within its class h * (K^x)^p so that v(h - 1) is maximal.

    Args:
        field: Base field K.
        h: Non-zero element.
        max_iter: Maximal number of multiplications by p-th powers.

    Returns:
        BestH(h_best, case, iterations, t) with t = v(h_best - 1).
    """
    if h.is_zero:
        raise ZeroH("h must be non-zero!")
    p = field.p
    group = field.value_group
    counter = _Counter(max_iter)
    rf = field.residue_field

    k = group.index(h.valuation())
    if k % p:
        shift = k // p
        if shift:
            h = counter.step(h * field.mono(Fraction(-shift, field.D)) ** p, "value window")
        logger.info("Best h %s: %s after %d iterations", h, CaseTag.WILD_II.value, counter.count)
        return BestH(h, CaseTag.WILD_II, counter.count, Value(0))
    if k:
        h = counter.step(h * field.mono(Fraction(-(k // p), field.D)) ** p, "unit normalization")

    residue = h.residue()
    is_power, root = is_pth_power_residue(rf, residue)
    if not is_power:
        g = field.lift(residue)
        if g != h and _is_henselian_pth_power(field, h / g, max_iter):
            h = counter.step(g, "residue lift")
        logger.info("Best h %s: %s after %d iterations", h, CaseTag.FEROCIOUS_IV.value, counter.count)
        return BestH(h, CaseTag.FEROCIOUS_IV, counter.count, Value(0))
    if root != rf.one:
        h = counter.step(h / field.lift(root) ** p, "residue root")

    h, case, t = _unit_one_loop(field, h, counter)
    logger.info("Best h %s: %s, t = %s after %d iterations", h, case.value, t, counter.count)
    return BestH(h, case, counter.count, t)


class ExtensionReport(MSONable):
    """
    All invariants of L|K. Values use the normalization v(p) = 1.
    """

    def __init__(
        self,
        field: FieldDesc,
        h_input: FieldElem,
        h_best: FieldElem,
        case: CaseTag,
        e: int,
        f: int,
        t: Value,
        sw: Value,
        j: Value,
        i: Value,
        iterations: int,
        defect: int = 1,
        H_gen_val: Value | None = None,
        model: str = "global",
        descended: bool = False,
        m: int = 1,
    ):
        """
        Args:
            field: Descriptor of the base field.
            h_input: The h the extension was given by.
            h_best: A best h of the same class.
            case: Classification case.
            e: Ramification index.
            f: Inertia degree.
            t: v(h_best - 1).
            sw: Swan conductor v(z^p/(h_best - 1)).
            j: Logarithmic Lefschetz number, min w(sigma(x)/x - 1).
            i: Lefschetz number, min w(sigma(b) - b) over integral b.
            iterations: Multiplications used by the best-h loop.
            defect: Defect, 1 for every backend here.
            H_gen_val: Valuation of the generator of H. Defaults to sw.
            model: "global": invariants computed in a global model.
            descended: Whether this report describes a descended L'|K'.
            m: Degree [K:K'] of the descent.
        """
        self.field = field
        self.p = field.p
        self.h_input = h_input
        self.h_best = h_best
        self.case = case
        self.e = e
        self.f = f
        self.defect = defect
        self.t = t
        self.sw = sw
        self.j = j
        self.i = i
        self.H_gen_val = sw if H_gen_val is None else H_gen_val
        self.iterations = iterations
        self.model = model
        self.descended = descended
        self.m = m

    @property
    def base(self) -> Field:
        return make_field(self.field)

    @property
    def unramified(self) -> bool:
        return self.case == CaseTag.UNRAMIFIED_I

    @property
    def invariants(self) -> tuple:
        """The class invariants: case, e, f, defect, sw, j, i."""
        return self.case, self.e, self.f, self.defect, self.sw, self.j, self.i

    def w_normalized(self) -> dict[str, int | None]:
        """
        sw, j, i and t in units of the generator of the value group of L.
        """
        denom = self.base.D
        return {k: w_normalize(getattr(self, k), self.e, denom) for k in ("t", "sw", "j", "i")}

    def as_dict(self) -> dict:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "field": self.field.as_dict(),
            "h_input": str(self.h_input),
            "h_best": str(self.h_best),
            "case": self.case.value,
            "e": self.e,
            "f": self.f,
            "defect": self.defect,
            "t": str(self.t),
            "sw": str(self.sw),
            "j": str(self.j),
            "i": str(self.i),
            "H_gen_val": str(self.H_gen_val),
            "iterations": self.iterations,
            "model": self.model,
            "descended": self.descended,
            "m": self.m,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ExtensionReport:
        desc = d["field"] if isinstance(d["field"], FieldDesc) else FieldDesc.from_dict(d["field"])
        fld = make_field(desc)
        return cls(
            field=desc,
            h_input=eval_expr(fld, d["h_input"]),
            h_best=eval_expr(fld, d["h_best"]),
            case=CaseTag(d["case"]),
            e=d["e"],
            f=d["f"],
            defect=d.get("defect", 1),
            t=Value(d["t"]),
            sw=Value(d["sw"]),
            j=Value(d["j"]),
            i=Value(d["i"]),
            H_gen_val=Value(d["H_gen_val"]),
            iterations=d["iterations"],
            model=d.get("model", "global"),
            descended=d.get("descended", False),
            m=d.get("m", 1),
        )

    def __repr__(self) -> str:
        return f"ExtensionReport({self.case.value}, h_best={self.h_best}, sw={self.sw}, j={self.j}, i={self.i})"


def classify(field: Field, h: FieldElem, max_iter: int = 200) -> ExtensionReport:
    """
    Classify the extension K(h^(1/p)) and compute its invariants.

    Args:
        field: Base field K.
        h: Non-zero element.
        max_iter: Cap of the best-h loop.

    Returns:
        ExtensionReport
    """
    p = field.p
    result = best_h(field, h, max_iter=max_iter)
    vz = Value(Fraction(1, p - 1))
    t = (result.h_best - 1).valuation()
    sw = vz * p - t
    j = sw / p
    if result.case.ramified:
        e, f = p, 1
        # Smallest positive value of L is 1/(pD), attained by a uniformizer.
        i = j + Fraction(1, p * field.D)
    else:
        e, f = 1, p
        i = j
    return ExtensionReport(
        field=field.desc,
        h_input=h,
        h_best=result.h_best,
        case=result.case,
        e=e,
        f=f,
        t=t,
        sw=sw,
        j=j,
        i=i,
        iterations=result.iterations,
    )

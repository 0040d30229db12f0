# Copyright (c) Materials Virtual Lab.
# Distributed under the terms of the BSD License.

"""
Desk-scale tools for the defect machinery.

For a root x of X^p - h with h a unit congruent to 1, the element
x' = gamma (x - 1)/z is a unit of B once v(gamma) = v(z) - v(h - 1)/p. This
module builds these elements, checks how the rings A[x'] nest when x is
rescaled by an element of K, bounds the traces used to show that B is the
union of such rings, and follows the Swan conductor through a family of
fields of growing tower level. A family whose conductors keep decreasing is
evidence that the limit extension has no best h, i.e. has defect.
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import NamedTuple, Sequence

from joblib import Parallel, delayed
from monty.json import MSONable
from monty.serialization import loadfn

from ramification.algebra.expr import eval_expr
from ramification.algebra.ext import Extension, ExtElem, make_extension, min_poly, poly_derivative, poly_eval
from ramification.algebra.fields import FieldDesc, FieldElem, make_field
from ramification.classify import classify
from ramification.values import MalformedValue, Value
from ramification.verify.theorems import VerificationResult

__author__ = "Materials Virtual Lab"
__version__ = "0.1"
__maintainer__ = "Materials Virtual Lab"
__email__ = "ongsp@eng.ucsd.edu"
__date__ = "Jun 3 2024"

logger = logging.getLogger(__name__)

NONE_ATTAINED = "none attained within stages"


class NotUnitOneClass(ValueError):
    """h is not a unit congruent to 1, or the scaling gamma is not in K."""


class NotInSPrime(ValueError):
    """(c alpha)^p is not a unit congruent to 1."""


class MalformedFamily(ValueError):
    """A family document is missing fields or has invalid entries."""


class FamilyStageError(ValueError):
    """Classification of one stage of a family failed."""

    def __init__(self, stage: int, message: str):
        super().__init__(f"Stage {stage}: {message}")
        self.stage = stage


class AlphaPrime(NamedTuple):
    alpha: ExtElem
    gamma: FieldElem
    alpha_prime: ExtElem
    t: Value


def _alpha_prime_for(e: Extension, x: ExtElem) -> AlphaPrime:
    fld = e.field
    xp = x**e.p
    if not xp.in_base:
        raise NotUnitOneClass(f"{x} is not a Kummer generator.")
    hx = xp.base_value()
    if hx.valuation() != 0:
        raise NotUnitOneClass(f"v(h) = {hx.valuation()}, expected a unit.")
    t = (hx - 1).valuation()
    if t <= 0:
        raise NotUnitOneClass(f"v(h - 1) = {t}, expected h = 1 mod m_A.")
    try:
        gamma = fld.mono(Value(Fraction(1, e.p - 1)) - t / e.p)
    except MalformedValue as exc:
        raise NotUnitOneClass(f"The scaling of value v(z) - {t}/{e.p} is not in K at tower level "
                              f"{fld.tower_level}.") from exc
    ap = gamma * (x - 1) / fld.z
    if ap.valuation() != 0:
        raise RuntimeError(f"w(alpha') = {ap.valuation()}, expected 0.")
    if ap.sigma() - ap != x * gamma:
        raise RuntimeError("(sigma - 1)(alpha') != gamma alpha.")
    if gamma.valuation() >= Value(Fraction(1, e.p - 1)):
        raise RuntimeError(f"v(gamma) = {gamma.valuation()} is not below v(z).")
    return AlphaPrime(x, gamma, ap, t)


def make_alpha_prime(e: Extension) -> AlphaPrime:
    """
    Build alpha' = gamma (alpha - 1)/z for the Kummer generator of e.

    Args:
        e: Extension with h a unit and v(h - 1) > 0.

    Returns:
        AlphaPrime(alpha, gamma, alpha_prime, t = v(h - 1)).
    """
    return _alpha_prime_for(e, e.alpha)


def containment_check(e: Extension, c: FieldElem) -> VerificationResult:
    """
    Compare A[alpha'] with A[(c alpha)'] for a unit c of K.

    With the pair ordered so that v(h1 - 1) <= v(h2 - 1) and r = alpha1/alpha2,
    alpha1' = (gamma1/gamma2) r alpha2' + gamma1 (r - 1)/z. Both coefficients
    must be integral, and the constant one a unit when the order is strict.

    Args:
        e: Extension whose h is a unit congruent to 1.
        c: Element of K.
    """
    ap = make_alpha_prime(e)
    try:
        ap_c = _alpha_prime_for(e, e.alpha * c)
    except NotUnitOneClass as exc:
        if (c**e.p * e.h).valuation() != 0 or ((c**e.p * e.h) - 1).valuation() <= 0:
            raise NotInSPrime(f"(c alpha)^{e.p} is not a unit congruent to 1.") from exc
        raise
    first, second = (ap, ap_c) if ap.t <= ap_c.t else (ap_c, ap)
    ratio = c.inverse() if first is ap else c
    fld = e.field

    scale = first.gamma / second.gamma * ratio
    tail = first.gamma * (ratio - 1) / fld.z
    failures = []
    if first.alpha_prime != second.alpha_prime * scale + tail:
        failures.append("alpha1' differs from (gamma1/gamma2) r alpha2' + gamma1 (r - 1)/z.")
    for name, coeff in (("(gamma1/gamma2) r", scale), ("gamma1 (r - 1)/z", tail)):
        if coeff.valuation() < 0:
            failures.append(f"Coefficient {name} = {coeff} is not integral.")
    if first.t < second.t and tail.valuation() != 0:
        failures.append(f"gamma1 (r - 1)/z = {tail} is not a unit although v(h1 - 1) < v(h2 - 1).")
    return VerificationResult(
        theorem="containment",
        samples=1,
        failures=failures,
        witnesses=[(str(scale), scale.valuation()), (str(tail), tail.valuation())],
        details={"c": str(c), "t1": str(first.t), "t2": str(second.t)},
    )


def _select_alpha_prime(chain: Sequence[ExtElem], options: Sequence[AlphaPrime]) -> AlphaPrime:
    """
    Walk (sigma - 1)^i(beta) = b_i gamma_(i-1) ... gamma_0 and choose at each step
    the largest gamma that keeps b_i integral. The answer is the chosen
    alpha' with the smallest gamma.
    """
    used = Value(0)
    chosen = []
    for step in chain[1:]:
        room = step.valuation() - used
        fitting = [ap for ap in options if ap.gamma.valuation() <= room]
        if fitting:
            pick = max(fitting, key=lambda ap: ap.gamma.valuation())
        else:
            pick = min(options, key=lambda ap: ap.gamma.valuation())
        chosen.append(pick)
        used = used + pick.gamma.valuation()
    return min(chosen, key=lambda ap: ap.gamma.valuation())


def trace_bound_check(
    e: Extension, beta: ExtElem, multipliers: Sequence[FieldElem] = ()
) -> VerificationResult:
    """
    Check w((sigma - 1)^(p-1)(alpha'^m beta^j)) >= (p - 1) v(gamma) for all
    0 <= m, j < p and the identities F'(alpha') = (h p/alpha)(gamma/z)^(p-1),
    w(F'(alpha')) = (p - 1) v(gamma), F the minimal polynomial of alpha'.

    The alpha' used is chosen from the ambient one and those of c alpha for
    the given multipliers by walking the chain (sigma - 1)^i(beta).

    Args:
        e: Extension whose h is a unit congruent to 1.
        beta: Unit of B.
        multipliers: Elements c of K offering alternative generators c alpha.
    """
    p = e.p
    options = [make_alpha_prime(e)]
    for c in multipliers:
        try:
            options.append(_alpha_prime_for(e, e.alpha * c))
        except NotUnitOneClass as exc:
            logger.debug("Multiplier %s skipped: %s", c, exc)
    chain = [beta]
    for _ in range(p - 1):
        chain.append(chain[-1].sigma() - chain[-1])
    ap = _select_alpha_prime(chain, options)
    bound = ap.gamma.valuation() * (p - 1)

    failures = []
    worst = None
    for m in range(p):
        for j in range(p):
            x = ap.alpha_prime**m * beta**j
            for _ in range(p - 1):
                x = x.sigma() - x
            val = x.valuation()
            if val < bound:
                failures.append(f"w((sigma-1)^{p - 1}(alpha'^{m} beta^{j})) = {val} < {bound}.")
            if worst is None or val < worst:
                worst = val

    fld = e.field
    hx = (ap.alpha**p).base_value()
    deriv = poly_eval(poly_derivative(min_poly(e, ap.alpha_prime)), ap.alpha_prime)
    expected = (ap.alpha.inverse() * (hx * p)) * (ap.gamma / fld.z) ** (p - 1)
    if deriv != expected:
        failures.append(f"F'(alpha') = {deriv}, expected {expected}.")
    if deriv.valuation() != bound:
        failures.append(f"w(F'(alpha')) = {deriv.valuation()}, expected {bound}.")
    return VerificationResult(
        theorem="trace-bound",
        samples=p * p,
        failures=failures,
        witnesses=[("F'(alpha')", deriv.valuation())],
        min_attained=worst,
        details={
            "beta": str(beta),
            "gamma": str(ap.gamma),
            "chain": [str(x.valuation()) for x in chain],
        },
    )


class FamilyStage(NamedTuple):
    n: int
    h: str
    multiplier: str | None = None


class FamilySpec(MSONable):
    """
    A sequence of Kummer elements over fields of growing tower level.
    """

    def __init__(self, p: int, with_u: bool, stages: Sequence[FamilyStage], description: str = ""):
        """
        Args:
            p: The prime.
            with_u: Whether the base fields adjoin u.
            stages: (tower level, h expression, optional multiplier c with
                h_k = c^p h_(k-1) after embedding both in a common level).
            description: Free text, including the provenance of the family.
        """
        if not stages:
            raise MalformedFamily("A family needs at least one stage.")
        self.p = p
        self.with_u = with_u
        self.stages = [FamilyStage(*s) for s in stages]
        self.description = description

    @property
    def tower_levels(self) -> list[int]:
        return sorted({s.n for s in self.stages})

    def as_dict(self) -> dict:
        stages = []
        for s in self.stages:
            d = {"n": s.n, "h": s.h}
            if s.multiplier is not None:
                d["multiplier"] = s.multiplier
            stages.append(d)
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "p": self.p,
            "base": {"with_u": self.with_u, "tower_levels": self.tower_levels},
            "stages": stages,
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, d: dict) -> FamilySpec:
        try:
            p = int(d["p"])
            base = d.get("base", {})
            with_u = bool(base.get("with_u", False))
            levels = base.get("tower_levels")
            stages = [FamilyStage(int(s["n"]), str(s["h"]), s.get("multiplier")) for s in d["stages"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedFamily(f"Invalid family document: {exc}") from exc
        if levels is not None and any(s.n not in levels for s in stages):
            raise MalformedFamily("Stage tower level missing from base.tower_levels.")
        return cls(p, with_u, stages, d.get("description", ""))


def load_family(filename: str) -> FamilySpec:
    """
    Read a family document (JSON or YAML).
    """
    d = loadfn(filename)
    if isinstance(d, FamilySpec):
        return d
    if not isinstance(d, dict):
        raise MalformedFamily(f"{filename} does not hold a family document.")
    return FamilySpec.from_dict(d)


class DefectCertificate(MSONable):
    """
    Swan conductors along a family and the cross-stage containment checks.
    """

    def __init__(
        self,
        sws: Sequence[Value],
        stages: Sequence[dict] | None = None,
        containment: Sequence[VerificationResult] | None = None,
        description: str = "",
    ):
        """
        Args:
            sws: Swan conductor of every stage, in stage order.
            stages: Per stage summaries (n, h, case, sw).
            containment: Results of the cross-stage containment checks.
            description: Description of the family.
        """
        self.sws = list(sws)
        self.stages = list(stages or [])
        self.containment = list(containment or [])
        self.description = description

    @property
    def strictly_decreasing(self) -> bool:
        return len(self.sws) >= 2 and all(a > b for a, b in zip(self.sws, self.sws[1:]))

    @property
    def inf_candidate(self) -> Value | str:
        """The infimum of the sws if attained, else NONE_ATTAINED."""
        if self.strictly_decreasing:
            return NONE_ATTAINED
        return min(self.sws)

    def as_dict(self) -> dict:
        return {
            "@module": type(self).__module__,
            "@class": type(self).__name__,
            "sws": [str(v) for v in self.sws],
            "strictly_decreasing": self.strictly_decreasing,
            "inf_candidate": str(self.inf_candidate),
            "stages": self.stages,
            "containment": [r.as_dict() for r in self.containment],
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, d: dict) -> DefectCertificate:
        return cls(
            [Value(v) for v in d["sws"]],
            d.get("stages"),
            [VerificationResult.from_dict(r) for r in d.get("containment", [])],
            d.get("description", ""),
        )


def _classify_stage(p: int, with_u: bool, n: int, h: str, max_iter: int) -> tuple[str, dict | str]:
    try:
        fld = make_field(FieldDesc(p, with_u, n))
        report = classify(fld, eval_expr(fld, h), max_iter=max_iter)
    except (ValueError, ZeroDivisionError, RuntimeError) as exc:
        return "error", f"{type(exc).__name__}: {exc}"
    return "ok", report.as_dict()


def _cross_stage(spec: FamilySpec, prev: FamilyStage, stage: FamilyStage, max_level: int) -> VerificationResult:
    """
    Embed two consecutive stages in a common tower level and run
    containment_check on the earlier h with the stage multiplier. The level
    is raised until both scalings gamma exist.
    """
    p = spec.p
    level = max(prev.n, stage.n)
    while True:
        fld = make_field(FieldDesc(p, spec.with_u, level))
        h_prev = eval_expr(fld, prev.h, s_power=p ** (level - prev.n))
        h_next = eval_expr(fld, stage.h, s_power=p ** (level - stage.n))
        c = eval_expr(fld, stage.multiplier, s_power=p ** (level - stage.n))
        if c**p * h_prev != h_next:
            return VerificationResult(
                theorem="containment",
                failures=[f"c^{p} h_prev != h_next at tower level {level}."],
                details={"c": stage.multiplier, "level": level},
            )
        try:
            result = containment_check(make_extension(fld, h_prev), c)
        except NotUnitOneClass:
            if level >= max_level:
                raise
            level += 1
            continue
        result.details["level"] = level
        return result


def family_scan(spec: FamilySpec, max_iter: int = 200, n_jobs: int = 1, max_level: int = 4) -> DefectCertificate:
    """
    Classify every stage of a family and collect the Swan conductors.

    Args:
        spec: The family.
        max_iter: Cap of the best-h loop per stage.
        n_jobs: joblib workers over stages.
        max_level: Highest tower level used to embed consecutive stages.

    Returns:
        DefectCertificate
    """
    jobs = (delayed(_classify_stage)(spec.p, spec.with_u, s.n, s.h, max_iter) for s in spec.stages)
    outcomes = Parallel(n_jobs=n_jobs)(jobs)
    sws, stages = [], []
    for index, (status, payload) in enumerate(outcomes):
        if status == "error":
            raise FamilyStageError(index, payload)
        sw = Value(payload["sw"])
        sws.append(sw)
        stages.append({"n": spec.stages[index].n, "h": spec.stages[index].h, "case": payload["case"], "sw": str(sw)})
        logger.info("Stage %d (n = %d): %s, sw = %s", index, spec.stages[index].n, payload["case"], sw)

    containment = []
    for index in range(1, len(spec.stages)):
        stage = spec.stages[index]
        if stage.multiplier is None:
            continue
        try:
            containment.append(_cross_stage(spec, spec.stages[index - 1], stage, max_level))
        except (NotUnitOneClass, NotInSPrime) as exc:
            raise FamilyStageError(index, str(exc)) from exc
    return DefectCertificate(sws, stages, containment, spec.description)

"""Discrepancies of toric valuations and the singularity classes they define.

For a toric b-log pair the log canonical divisor on a fan is
``-sum(1/r_rho D_rho)``.  Its support function ``phi`` takes the value
``-1/r_rho`` on each ray, and for a primitive vector ``w`` with ramification
index ``r_w``::

    b'(w) = -phi(w) - 1/r_w        b(w) = r_w * b'(w)        a(w) = b'(w) - d_w

Inside a simplicial cone ``<v_1..v_m>`` with ``w = sum a_i v_i`` this reads
``b(w) = sum(a_i r_w / r_i) - 1``.  Because ``r_w >= 1``, every ``w`` with
``b(w) <= c`` satisfies ``sum(a_i / r_i) <= c + 1``; that bounded polytope is
what :func:`enumerate_at_most` scans, which makes threshold queries exact and
complete.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import _kernels
from .bdivisor import ZERO, CoefficientRule, ZeroRule
from .errors import (NotExceptional, NotInSupport, NotPrimitive, NotQGorenstein,
                     VerificationFailed, ZeroVector)
from .fan import Cone, Fan, _box_of, find_containing_cone, minimal_face, triangulate
from .lattice import (Vector, as_vector, content, dot, independent_frame,
                      solve_in_generators, solve_linear)


@dataclass(frozen=True)
class SupportFunctionData:
    """One covector per maximal cone of ``fan`` (same order as ``fan.max_cones``)."""

    fan: Fan
    covectors: tuple[tuple[Fraction, ...], ...]

    def covector(self, cone: Cone) -> tuple[Fraction, ...]:
        return self.covectors[self.fan.max_cones.index(cone)]

    def __call__(self, w: Sequence[int]) -> Fraction:
        w = as_vector(w)
        if not any(w):
            return Fraction(0)
        for cone, m in zip(self.fan.max_cones, self.covectors):
            if minimal_face(self.fan.cone_rays(cone), w) is not None:
                return dot(m, w)
        raise NotInSupport(f"{list(w)} is not in the support of the fan")


@dataclass(frozen=True)
class DiscrepancyRecord:
    w: Vector
    d: Fraction
    r: Fraction
    a: Fraction
    b_prime: Fraction
    b: Fraction

    def __post_init__(self):
        if self.b != self.r * self.b_prime:
            raise VerificationFailed(f"b != r*b' at {self.w}")
        if self.b + 1 != self.r * (self.a + 1):
            raise VerificationFailed(f"b+1 != r(a+1) at {self.w}")
        if self.b_prime != self.a + self.d:
            raise VerificationFailed(f"b' != a+d at {self.w}")


def _record(w: Vector, d: Fraction, weighted: Fraction) -> DiscrepancyRecord:
    """Build the record from d_w and weighted = sum(a_i / r_i) = -phi(w)."""
    r = 1 / (1 - d)
    b_prime = weighted - 1 / r
    return DiscrepancyRecord(w, d, r, b_prime - d, b_prime, r * b_prime)


class Level(enum.IntEnum):
    """Singularity classes, best first; comparisons follow the nesting."""

    TERMINAL = 0
    CANONICAL = 1
    LOG_TERMINAL = 2
    LOG_CANONICAL = 3
    NOT_LC = 4

    def label(self, b: bool = False) -> str:
        text = {0: "terminal", 1: "canonical", 2: "log-terminal",
                3: "log-canonical", 4: "not-log-canonical"}[self.value]
        return f"b-{text}" if b else text

    def implies(self, other: "Level") -> bool:
        return self <= other


def level_of_minimum(minimum: Fraction | None) -> Level:
    """Class from the least discrepancy among those <= 0 (None: none exist)."""
    if minimum is None:
        return Level.TERMINAL
    if minimum >= 0:
        return Level.CANONICAL
    if minimum > -1:
        return Level.LOG_TERMINAL
    if minimum == -1:
        return Level.LOG_CANONICAL
    return Level.NOT_LC


@dataclass(frozen=True)
class Classification:
    b_class: Level
    ordinary_class: Level | None
    witness: DiscrepancyRecord | None = None
    ordinary_witness: DiscrepancyRecord | None = None


@dataclass(frozen=True)
class MinimalDiscrepancy:
    value: Fraction
    witness: DiscrepancyRecord


@dataclass(frozen=True)
class GreaterThan:
    bound: Fraction


# -- support function -------------------------------------------------------

def _ray_indices(fan: Fan, rule: CoefficientRule) -> list[Fraction]:
    return [1 / (1 - rule.coefficient(v)) for v in fan.rays]


def boundary_support_function(fan: Fan, rule: CoefficientRule) -> SupportFunctionData:
    """Covectors m with <m, v> = -1/r_v on the rays of each maximal cone."""
    rs = _ray_indices(fan, rule)
    covectors = []
    for cone in fan.max_cones:
        gens = fan.cone_rays(cone)
        m = solve_linear([list(g) for g in gens], [-1 / rs[i] for i in cone])
        if m is None:
            raise NotQGorenstein(gens)
        covectors.append(tuple(m))
    # shared rays get one value from every cone through them
    for cone, m in zip(fan.max_cones, covectors):
        for i in cone:
            if dot(m, fan.rays[i]) != -1 / rs[i]:
                raise VerificationFailed(f"support function disagrees on ray {fan.rays[i]}")
    return SupportFunctionData(fan, tuple(covectors))


# -- single valuation -------------------------------------------------------

def _check_valuation(fan: Fan, w) -> Vector:
    w = as_vector(w)
    if len(w) != fan.rank:
        raise ValueError(f"vector {list(w)} does not have length {fan.rank}")
    if not any(w):
        raise ZeroVector("the zero vector is not a valuation")
    if content(w) != 1:
        raise NotPrimitive(f"{list(w)} is not primitive")
    if fan.ray_index(w) is not None:
        raise NotExceptional(f"{list(w)} spans a ray of the fan")
    return w


def discrepancy_at(fan: Fan, rule: CoefficientRule, w: Sequence[int],
                   support: SupportFunctionData | None = None) -> DiscrepancyRecord:
    """Discrepancies of the exceptional toric valuation ``w`` over ``fan``.

    Computed from the coefficients of ``w`` in a simplicial cone of the
    triangulated fan and checked against the support function.
    """
    w = _check_valuation(fan, w)
    if support is None:
        support = boundary_support_function(fan, rule)
    general = -support(w)
    tri = triangulate(fan)
    cone = find_containing_cone(tri, w)
    gens = tri.cone_rays(cone)
    coeffs = solve_in_generators(gens, w)
    weighted = sum((a * (1 - rule.coefficient(v)) for a, v in zip(coeffs, gens)), Fraction(0))
    if weighted != general:
        raise VerificationFailed(f"cone formula {weighted} != support function {general} at {w}")
    return _record(w, rule.coefficient(w), weighted)


# -- threshold enumeration --------------------------------------------------

def _scan_cone(fan: Fan, rule: CoefficientRule, cone: Cone, bound: Fraction,
               threshold: Fraction, kernel: str | None) -> list[DiscrepancyRecord]:
    gens = fan.cone_rays(cone)
    inv_r = [1 - rule.coefficient(v) for v in gens]          # 1 / r_i
    rows, adj, det = independent_frame(gens)
    lo, hi = _box_of(gens, [bound / q for q in inv_r])
    scale = lcm(*(q.denominator for q in inv_r), bound.denominator)
    weights = [int(q * scale) for q in inv_r]
    budget = int(bound * scale)
    out = []
    for w in _kernels.scan_box(lo, hi, rows, adj, det, gens, weights, budget,
                               primitive=True, kernel=kernel):
        if fan.ray_index(w) is not None:
            continue
        coeffs = solve_in_generators(gens, w)
        weighted = sum((a * q for a, q in zip(coeffs, inv_r)), Fraction(0))
        rec = _record(w, rule.coefficient(w), weighted)
        if rec.b <= threshold:
            out.append(rec)
    return out


def enumerate_at_most(fan: Fan, rule: CoefficientRule, threshold, *, jobs: int = 1,
                      kernel: str | None = None) -> list[DiscrepancyRecord]:
    """Every exceptional toric valuation with b <= threshold, sorted by w.

    ``jobs > 1`` scans cones on a thread pool; the merged output is the same.
    """
    threshold = Fraction(threshold)
    if threshold < -1:
        raise ValueError("threshold must be at least -1")
    support = boundary_support_function(fan, rule)
    tri = triangulate(fan)
    bound = threshold + 1
    cones = tri.sorted_cones()
    if jobs > 1 and len(cones) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda c: _scan_cone(tri, rule, c, bound, threshold, kernel), cones))
    else:
        parts = [_scan_cone(tri, rule, c, bound, threshold, kernel) for c in cones]
    found: dict[Vector, DiscrepancyRecord] = {}
    for part in parts:
        for rec in part:
            prev = found.setdefault(rec.w, rec)
            if prev != rec:
                raise VerificationFailed(f"cones disagree on the discrepancy of {rec.w}")
    # spot check against the support function of the input fan
    for rec in found.values():
        if -support(rec.w) - 1 / rec.r != rec.b_prime:
            raise VerificationFailed(f"support function disagrees at {rec.w}")
    return [found[w] for w in sorted(found)]


def min_discrepancy_below(fan: Fan, rule: CoefficientRule, cap, *, jobs: int = 1,
                          kernel: str | None = None) -> MinimalDiscrepancy | GreaterThan:
    """Exact minimal b-discrepancy if it is <= cap, otherwise GreaterThan(cap)."""
    cap = Fraction(cap)
    recs = enumerate_at_most(fan, rule, cap, jobs=jobs, kernel=kernel)
    if not recs:
        return GreaterThan(cap)
    best = min(recs, key=lambda rec: (rec.b, rec.w))
    return MinimalDiscrepancy(best.b, best)


def _level(fan, rule, jobs, kernel):
    recs = enumerate_at_most(fan, rule, 0, jobs=jobs, kernel=kernel)
    if not recs:
        return Level.TERMINAL, None
    best = min(recs, key=lambda rec: (rec.b, rec.w))
    return level_of_minimum(best.b), best


def classify(fan: Fan, rule: CoefficientRule = ZERO, *, jobs: int = 1,
             kernel: str | None = None) -> Classification:
    """b-class of (fan, rule) and ordinary class of (fan, 0).

    ``ordinary_class`` is None when K_X itself is not Q-Cartier while the
    b-pair is Q-Gorenstein.
    """
    b_level, witness = _level(fan, rule, jobs, kernel)
    if b_level > Level.LOG_TERMINAL:
        raise VerificationFailed("a fractional toric b-log pair must be b-lt")
    if isinstance(rule, ZeroRule):
        return Classification(b_level, b_level, witness, witness)
    try:
        o_level, o_witness = _level(fan, ZERO, jobs, kernel)
    except NotQGorenstein:
        o_level, o_witness = None, None
    return Classification(b_level, o_level, witness, o_witness)

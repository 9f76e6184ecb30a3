"""Q-factorial b-terminalization of toric b-log pairs.

Resolve the fan, list every exceptional valuation with b <= 0 over the
smooth model, then star-subdivide at each of them.  Extracting a divisor
with b <= 0 can only raise the discrepancies of the remaining valuations,
so the final fan is b-terminal; :func:`b_terminalize` re-checks this.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .bdivisor import CoefficientRule
from .discrepancy import DiscrepancyRecord, Level, classify, enumerate_at_most
from .errors import VerificationFailed
from .fan import Fan, resolve, star_subdivide, triangulate
from .lattice import Vector, as_vector


@dataclass(frozen=True)
class TerminalizationReport:
    input_fan: Fan
    resolved_fan: Fan
    output_fan: Fan
    extracted: tuple[DiscrepancyRecord, ...]
    subdivision_log: tuple[Vector, ...]
    resolution_log: tuple[Vector, ...] = field(default=())
    verified: bool = False


def extract_divisors(fan: Fan, targets: Sequence[Sequence[int]], *,
                     log: list | None = None) -> Fan:
    """Triangulate, then star-subdivide at each target in lexicographic order."""
    fan = triangulate(fan)
    for w in sorted(as_vector(t) for t in targets):
        fan = star_subdivide(fan, w)
        if log is not None:
            log.append(w)
    return fan


def b_terminalize(fan: Fan, rule: CoefficientRule, *, jobs: int = 1,
                  kernel: str | None = None) -> TerminalizationReport:
    """Resolve, extract every valuation with b <= 0, and verify the result.

    A pair that is already b-terminal after triangulation is returned as its
    own terminalization.  Resolving it first would add rays with b > 0, which
    lowers other discrepancies and makes the construction non-idempotent.
    """
    tri = triangulate(fan)
    if classify(tri, rule, jobs=jobs, kernel=kernel).b_class is Level.TERMINAL:
        return TerminalizationReport(fan, tri, tri, (), (), (), verified=True)
    centers: list[Vector] = []
    resolved = resolve(fan, centers=centers)
    records = enumerate_at_most(resolved, rule, 0, jobs=jobs, kernel=kernel)
    log: list[Vector] = []
    output = extract_divisors(resolved, [rec.w for rec in records], log=log)
    result = classify(output, rule, jobs=jobs, kernel=kernel)
    if result.b_class is not Level.TERMINAL:
        raise VerificationFailed(
            f"extraction left a valuation with b = {result.witness.b} at {result.witness.w}")
    return TerminalizationReport(fan, resolved, output, tuple(records), tuple(log),
                                 tuple(centers), verified=True)

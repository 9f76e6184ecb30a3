"""Fractional b-divisors on toric valuations.

A b-divisor is stored as a rule assigning a coefficient in [0, 1) to every
primitive lattice vector (each one names a toric valuation).  The trace on a
fan is the rule restricted to the fan's rays.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .brauer import BrauerClass, order_of_image
from .errors import InvalidCoefficient, NotPrimitive
from .lattice import Vector, as_vector, content, make_primitive


class CoefficientRule:
    """Base class; subclasses implement :meth:`_coefficient` on primitive vectors."""

    def coefficient(self, w: Sequence[int]) -> Fraction:
        return self._coefficient(make_primitive(as_vector(w))[0])

    def _coefficient(self, w: Vector) -> Fraction:
        raise NotImplementedError


class ZeroRule(CoefficientRule):
    def _coefficient(self, w):
        return Fraction(0)

    def __repr__(self):
        return "ZeroRule()"

    def __eq__(self, other):
        return isinstance(other, ZeroRule)

    def __hash__(self):
        return hash(ZeroRule)


ZERO = ZeroRule()


class FiniteSupportRule(CoefficientRule):
    """Coefficients listed on finitely many primitive vectors, 0 elsewhere."""

    def __init__(self, entries: Mapping[Sequence[int], object] | Iterable[tuple[Sequence[int], object]]):
        items = entries.items() if isinstance(entries, Mapping) else entries
        table: dict[Vector, Fraction] = {}
        for ray, coeff in items:
            ray = as_vector(ray)
            if content(ray) != 1:
                raise NotPrimitive(f"support vector {list(ray)} is not primitive")
            if ray in table:
                raise InvalidCoefficient(f"support vector {list(ray)} listed twice")
            q = Fraction(coeff)
            if not 0 <= q < 1:
                raise InvalidCoefficient(f"coefficient {q} at {list(ray)} is outside [0, 1)")
            table[ray] = q
        self.entries = dict(sorted(table.items()))

    def _coefficient(self, w):
        return self.entries.get(w, Fraction(0))

    def __repr__(self):
        return f"FiniteSupportRule({self.entries!r})"

    def __eq__(self, other):
        return isinstance(other, FiniteSupportRule) and self.entries == other.entries

    def __hash__(self):
        return hash(tuple(self.entries.items()))


class BrauerRule(CoefficientRule):
    """Ramification b-divisor of a toric Brauer class: d = 1 - 1/order."""

    def __init__(self, brauer: BrauerClass):
        self.brauer = brauer

    def _coefficient(self, w):
        return 1 - Fraction(1, order_of_image(self.brauer, w))

    def __repr__(self):
        return f"BrauerRule({self.brauer!r})"

    def __eq__(self, other):
        return isinstance(other, BrauerRule) and self.brauer == other.brauer

    def __hash__(self):
        return hash(self.brauer)


def coefficient(rule: CoefficientRule, w: Sequence[int]) -> Fraction:
    return rule.coefficient(w)


def ramification_index(rule: CoefficientRule, w: Sequence[int]) -> Fraction:
    return 1 / (1 - rule.coefficient(w))


@dataclass(frozen=True)
class RayDatum:
    w: Vector
    d: Fraction
    r: Fraction


def trace(rule: CoefficientRule, fan) -> list[RayDatum]:
    """Coefficient and ramification index on every ray, rays sorted."""
    out = []
    for ray in sorted(fan.rays):
        d = rule.coefficient(ray)
        out.append(RayDatum(ray, d, 1 / (1 - d)))
    return out

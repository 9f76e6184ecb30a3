"""Toric Brauer classes given by skew-symmetric matrices over Z/p.

The ramification index of the class along the toric divisor of a primitive
vector ``w`` is the additive order of ``M @ w`` in (Z/p)^n.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .errors import CompositeModulus, InvalidBrauerClass, InvalidCTriple
from .lattice import make_primitive


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def rp(x: int, p: int) -> int:
    """Least non-negative residue of ``x`` modulo ``p``."""
    if p < 1:
        raise ValueError("modulus must be positive")
    return x % p


@dataclass(frozen=True)
class BrauerClass:
    """Skew-symmetric matrix ``M`` over Z/p; entries stored in ``0..p-1``."""

    p: int
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        p = int(self.p)
        if p < 2:
            raise InvalidBrauerClass(f"modulus must be at least 2, got {p}")
        rows = tuple(tuple(int(x) % p for x in row) for row in self.matrix)
        n = len(rows)
        if n == 0 or any(len(row) != n for row in rows):
            raise InvalidBrauerClass("matrix must be square and nonempty")
        for i in range(n):
            if rows[i][i] != 0:
                raise InvalidBrauerClass(f"diagonal entry {i} is not 0 mod {p}")
            for j in range(i + 1, n):
                if (rows[i][j] + rows[j][i]) % p:
                    raise InvalidBrauerClass(f"entries ({i},{j}) and ({j},{i}) are not opposite mod {p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "matrix", rows)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def prime_modulus(self) -> bool:
        """False for composite p, where results go beyond the prime-order theory."""
        return is_prime(self.p)

    def image(self, w: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(a * b for a, b in zip(row, w)) % self.p for row in self.matrix)

    def rank_mod_p(self) -> int:
        """Rank over the field Z/p (p must be prime)."""
        if not self.prime_modulus:
            raise CompositeModulus(f"rank over Z/{self.p} needs a prime modulus")
        p = self.p
        m = [list(row) for row in self.matrix]
        r = 0
        for c in range(self.n):
            piv = next((i for i in range(r, self.n) if m[i][c] % p), None)
            if piv is None:
                continue
            m[r], m[piv] = m[piv], m[r]
            inv = pow(m[r][c], -1, p)
            m[r] = [x * inv % p for x in m[r]]
            for i in range(self.n):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
            r += 1
        return r


def order_of_image(brauer: BrauerClass, w: Sequence[int]) -> int:
    """Order of ``M @ w`` in (Z/p)^n for the primitive part of ``w``."""
    if len(w) != brauer.n:
        raise ValueError(f"vector of length {len(w)} for a rank {brauer.n} class")
    w, _ = make_primitive(w)
    g = brauer.p
    for x in brauer.image(w):
        g = gcd(g, x)
    return brauer.p // g


@dataclass(frozen=True)
class CTriple:
    """Rank-two class on a 3-dimensional torus, written as (c0, c1, c2) mod p."""

    p: int
    c: tuple[int, int, int]

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidCTriple(f"p = {self.p} is not prime")
        if len(self.c) != 3:
            raise InvalidCTriple("need exactly three entries")
        c = tuple(int(x) % self.p for x in self.c)
        if sum(1 for x in c if x) < 2:
            raise InvalidCTriple(f"at least two of {c} must be nonzero mod {self.p}")
        object.__setattr__(self, "c", c)


def matrix_from_c(t: CTriple) -> BrauerClass:
    c0, c1, c2 = t.c
    return BrauerClass(t.p, ((0, c2, -c1), (-c2, 0, c0), (c1, -c0, 0)))


def c_invariant(t: CTriple) -> int:
    """min over units i of rp(i c0) + rp(i c1) + rp(i c2)."""
    return min(sum(rp(i * cj, t.p) for cj in t.c) for i in range(1, t.p))


class Affine3Class(enum.Enum):
    B_TERMINAL = "b-terminal"
    B_CANONICAL_NOT_TERMINAL = "b-canonical"
    NOT_B_CANONICAL = "not b-canonical"


@dataclass(frozen=True)
class Affine3Classification:
    kind: Affine3Class
    c: int
    p: int
    b_lt: bool = True

    @property
    def b_terminal(self) -> bool:
        return self.kind is Affine3Class.B_TERMINAL

    @property
    def b_canonical(self) -> bool:
        return self.kind is not Affine3Class.NOT_B_CANONICAL


def classify_affine3(t: CTriple) -> Affine3Classification:
    """Closed-form classification of affine 3-space with the class of ``t``."""
    c = c_invariant(t)
    if c > t.p:
        kind = Affine3Class.B_TERMINAL
    elif c == t.p:
        kind = Affine3Class.B_CANONICAL_NOT_TERMINAL
    else:
        kind = Affine3Class.NOT_B_CANONICAL
    return Affine3Classification(kind, c, t.p)


def full_rank_shortcut(brauer: BrauerClass, fan):
    """Ordinary class of ``fan`` when ``M`` has full rank, else None.

    With p an odd prime and M invertible mod p every primitive vector has
    ramification index p, so the b-discrepancies equal the ordinary ones.
    """
    if brauer.p % 2 == 0 or not brauer.prime_modulus:
        raise CompositeModulus(f"the full-rank criterion needs an odd prime, got p = {brauer.p}")
    if brauer.n != fan.rank or brauer.rank_mod_p() < brauer.n:
        return None
    from .bdivisor import ZERO
    from .discrepancy import classify

    return classify(fan, ZERO).ordinary_class

"""Rational polyhedral fans and the subdivisions used to resolve them.

A :class:`Fan` is an immutable value: a lattice rank, a list of primitive ray
generators and a list of maximal cones given as sorted tuples of ray
indices.  Every operation that changes the fan returns a new one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from . import _kernels
from .errors import (InvalidCone, NotInSupport, NotPrimitive, RayAlreadyPresent,
                     ZeroVector)
from .lattice import (Vector, as_vector, cone_multiplicity, content, dot,
                      independent_frame, lp_feasible, make_primitive, nullspace,
                      rank, row_reduce, solve_in_generators, solve_linear)


@dataclass(frozen=True, order=True)
class Cone:
    ray_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ray_indices", tuple(sorted(set(self.ray_indices))))

    def __len__(self):
        return len(self.ray_indices)

    def __iter__(self):
        return iter(self.ray_indices)


class Fan:
    """A finite rational fan in N_R = R^rank.

    Equality ignores the order of rays and cones: two fans are equal when
    they have the same rays and the same maximal cones as sets of vectors.
    """

    __slots__ = ("rank", "rays", "max_cones", "_key", "_index")

    def __init__(self, rank: int, rays: Iterable[Sequence[int]], max_cones: Iterable[Iterable[int]]):
        rays = tuple(as_vector(r) for r in rays)
        cones = []
        for c in max_cones:
            cone = c if isinstance(c, Cone) else Cone(tuple(c))
            if cone not in cones:
                cones.append(cone)
        object.__setattr__(self, "rank", int(rank))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", tuple(cones))
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_index", None)

    def __setattr__(self, name, value):
        raise AttributeError("Fan is immutable")

    def __repr__(self):
        cones = [list(c.ray_indices) for c in self.max_cones]
        return f"Fan(rank={self.rank}, rays={[list(r) for r in self.rays]}, max_cones={cones})"

    def key(self):
        if self._key is None:
            cones = frozenset(frozenset(self.rays[i] for i in c) for c in self.max_cones)
            object.__setattr__(self, "_key", (self.rank, frozenset(self.rays), cones))
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def ray_index(self, v: Sequence[int]) -> int | None:
        if self._index is None:
            object.__setattr__(self, "_index", {r: i for i, r in enumerate(self.rays)})
        return self._index.get(tuple(v))

    def cone_rays(self, cone: Cone | Iterable[int]) -> list[Vector]:
        return [self.rays[i] for i in cone]

    def is_simplicial(self) -> bool:
        return all(rank(self.cone_rays(c)) == len(c) for c in self.max_cones)

    def canonical(self) -> "Fan":
        """Same fan with rays sorted lexicographically and cones sorted."""
        order = sorted(range(len(self.rays)), key=lambda i: self.rays[i])
        new = {old: k for k, old in enumerate(order)}
        cones = sorted(Cone(tuple(new[i] for i in c)) for c in self.max_cones)
        return Fan(self.rank, [self.rays[i] for i in order], cones)

    def sorted_cones(self) -> list[Cone]:
        """Maximal cones ordered by their lexicographically sorted ray lists."""
        return sorted(self.max_cones, key=lambda c: sorted(self.cone_rays(c)))


# -- cone geometry ----------------------------------------------------------

@lru_cache(maxsize=4096)
def _facets(gens: tuple[Vector, ...]) -> tuple[tuple[tuple[Fraction, ...], frozenset[int]], ...]:
    """Facets of cone(gens) inside its linear span.

    Each facet is (inward normal lying in the span, indices of generators on
    it).  Brute force over (d-1)-subsets; fine for the small cones we see.
    """
    d = rank(gens)
    # independent generators giving a basis of the span
    _, piv = row_reduce([[g[j] for g in gens] for j in range(len(gens[0]))])
    basis = [gens[i] for i in piv]
    found: dict[frozenset[int], tuple[Fraction, ...]] = {}
    for sub in itertools.combinations(range(len(gens)), d - 1):
        if rank([gens[i] for i in sub]) < d - 1:
            continue
        constraints = [[dot(b, gens[i]) for b in basis] for i in sub]
        sol = nullspace(constraints, d)
        if len(sol) != 1:
            continue
        normal = tuple(sum(Fraction(c) * b[j] for c, b in zip(sol[0], basis))
                       for j in range(len(gens[0])))
        vals = [dot(normal, g) for g in gens]
        if all(v >= 0 for v in vals):
            pass
        elif all(v <= 0 for v in vals):
            normal = tuple(-x for x in normal)
        else:
            continue
        on = frozenset(i for i, v in enumerate(vals) if v == 0)
        if on not in found:
            found[on] = normal
    return tuple((nrm, on) for on, nrm in found.items())


def is_strongly_convex(gens: Sequence[Vector]) -> bool:
    """True when cone(gens) contains no line."""
    gens = [tuple(g) for g in gens]
    if not gens:
        return True
    if rank(gens) == len(gens):
        return True
    # a line exists iff 0 is a nontrivial nonnegative combination
    n = len(gens[0])
    rows = [[g[j] for g in gens] for j in range(n)] + [[1] * len(gens)]
    return lp_feasible(rows, [0] * n + [1]) is None


def _in_span(gens: Sequence[Vector], w: Sequence[int]) -> bool:
    n = len(w)
    return solve_linear([[g[j] for g in gens] for j in range(n)], list(w)) is not None


def minimal_face(gens: Sequence[Vector], w: Sequence[int]) -> frozenset[int] | None:
    """Indices of the generators of the smallest face of cone(gens) holding w.

    Returns None when w is outside the cone.
    """
    gens = tuple(tuple(g) for g in gens)
    if not any(w):
        return frozenset()
    if rank(gens) == len(gens):
        if not _in_span(gens, w):
            return None
        coeffs = solve_in_generators(gens, w)
        if any(a < 0 for a in coeffs):
            return None
        return frozenset(i for i, a in enumerate(coeffs) if a > 0)
    if not _in_span(gens, w):
        return None
    facets = _facets(gens)
    tight = []
    for normal, on in facets:
        v = dot(normal, w)
        if v < 0:
            return None
        if v == 0:
            tight.append(on)
    face = frozenset(range(len(gens)))
    for on in tight:
        face &= on
    return face


def in_cone(gens: Sequence[Vector], w: Sequence[int]) -> bool:
    return minimal_face(gens, w) is not None


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    caveats: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


def _overlap_beyond_common(s_gens, t_gens, common_s, common_t) -> bool:
    """Do two simplicial cones meet outside the cone on their shared rays?"""
    n = len(s_gens[0])
    ms, mt = len(s_gens), len(t_gens)
    rows = [[g[j] for g in s_gens] + [-g[j] for g in t_gens] for j in range(n)]
    rows.append([0 if i in common_s else 1 for i in range(ms)] +
                [0 if i in common_t else 1 for i in range(mt)])
    return lp_feasible(rows, [0] * n + [1]) is not None


def validate(fan: Fan) -> ValidationReport:
    """Check primitivity, convexity and (for simplicial fans) face intersections."""
    bad: list[Violation] = []
    caveats: list[str] = []
    if fan.rank < 1:
        bad.append(Violation("bad rank", f"rank {fan.rank} < 1"))
        return ValidationReport(tuple(bad))
    seen: dict[Vector, int] = {}
    for i, r in enumerate(fan.rays):
        if len(r) != fan.rank:
            bad.append(Violation("rank mismatch", f"ray {i} = {list(r)} has length {len(r)}"))
            continue
        g = content(r)
        if g == 0:
            bad.append(Violation("zero ray", f"ray {i} is the zero vector"))
        elif g != 1:
            bad.append(Violation("non-primitive ray", f"ray {i} = {list(r)} has content {g}"))
        if r in seen:
            bad.append(Violation("duplicate ray", f"rays {seen[r]} and {i} coincide"))
        seen.setdefault(r, i)
    if bad:
        return ValidationReport(tuple(bad))
    used = set()
    for c in fan.max_cones:
        if not c.ray_indices:
            bad.append(Violation("empty cone", "a maximal cone has no rays"))
        for i in c:
            if not 0 <= i < len(fan.rays):
                bad.append(Violation("bad index", f"cone {list(c)} references ray {i}"))
        used.update(c)
    if bad:
        return ValidationReport(tuple(bad))
    for i in range(len(fan.rays)):
        if i not in used:
            bad.append(Violation("unused ray", f"ray {i} = {list(fan.rays[i])} is in no maximal cone"))
    for c in fan.max_cones:
        if not is_strongly_convex(fan.cone_rays(c)):
            bad.append(Violation("not strongly convex", f"cone {list(c)} contains a line"))
    for a, b in itertools.combinations(fan.max_cones, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            bad.append(Violation("nested cones", f"maximal cones {list(a)} and {list(b)} are nested"))
    if bad:
        return ValidationReport(tuple(bad))
    if fan.is_simplicial():
        for a, b in itertools.combinations(fan.max_cones, 2):
            common = set(a) & set(b)
            ia, ib = list(a), list(b)
            if _overlap_beyond_common(fan.cone_rays(a), fan.cone_rays(b),
                                      {k for k, i in enumerate(ia) if i in common},
                                      {k for k, i in enumerate(ib) if i in common}):
                bad.append(Violation("faces do not intersect in faces",
                                     f"cones {ia} and {ib} overlap outside their common face"))
    else:
        caveats.append("non-simplicial fan: face-intersection condition not certified")
    return ValidationReport(tuple(bad), tuple(caveats))


# -- queries ----------------------------------------------------------------

def _nonzero(w):
    w = as_vector(w)
    if not any(w):
        raise ZeroVector("expected a nonzero lattice vector")
    return w


def find_containing_cone(fan: Fan, w: Sequence[int]) -> Cone:
    """The smallest cone of ``fan`` whose relative interior contains ``w``."""
    w = _nonzero(w)
    best = None
    for c in fan.max_cones:
        idx = list(c)
        face = minimal_face(fan.cone_rays(c), w)
        if face is None:
            continue
        cone = Cone(tuple(idx[k] for k in face))
        if best is None or len(cone) < len(best):
            best = cone
    if best is None:
        raise NotInSupport(f"{list(w)} is not in the support of the fan")
    return best


def contains(fan: Fan, x: Sequence) -> bool:
    """Membership of a rational point in |fan| (scale-invariant)."""
    den = 1
    for q in x:
        den = den * Fraction(q).denominator // gcd(den, Fraction(q).denominator)
    v = tuple(int(Fraction(q) * den) for q in x)
    if not any(v):
        return True
    return any(in_cone(fan.cone_rays(c), v) for c in fan.max_cones)


# -- triangulation ----------------------------------------------------------

def _pulling(gens: tuple[Vector, ...], face: frozenset[int]) -> list[frozenset[int]]:
    sub = tuple(gens[i] for i in sorted(face))
    if rank(sub) == len(sub):
        return [face]
    order = sorted(face, key=lambda i: gens[i])
    apex = order[0]
    local = sorted(face)
    out = []
    for _, on in _facets(sub):
        facet = frozenset(local[k] for k in on)
        if apex in facet:
            continue
        for simplex in _pulling(gens, facet):
            out.append(simplex | {apex})
    return out


def triangulate(fan: Fan) -> Fan:
    """Pulling triangulation in lexicographic ray order; adds no rays."""
    if fan.is_simplicial():
        return fan
    cones: list[Cone] = []
    for c in fan.max_cones:
        idx = list(c)
        gens = tuple(fan.cone_rays(c))
        if rank(gens) == len(gens):
            pieces = [frozenset(range(len(idx)))]
        else:
            pieces = _pulling(gens, frozenset(range(len(idx))))
        for p in pieces:
            cone = Cone(tuple(idx[k] for k in p))
            if cone not in cones:
                cones.append(cone)
    return Fan(fan.rank, fan.rays, cones)


# -- subdivision ------------------------------------------------------------

def star_subdivide(fan: Fan, w: Sequence[int]) -> Fan:
    """Star subdivision at the ray through the primitive vector ``w``.

    Non-simplicial input is triangulated first, so the result is simplicial.
    """
    w = _nonzero(w)
    if content(w) != 1:
        raise NotPrimitive(f"{list(w)} is not primitive")
    if fan.ray_index(w) is not None:
        raise RayAlreadyPresent(f"{list(w)} is already a ray")
    fan = triangulate(fan)
    new = len(fan.rays)
    cones: list[Cone] = []
    hit = False
    for c in fan.max_cones:
        idx = list(c)
        gens = fan.cone_rays(c)
        face = minimal_face(gens, w)
        if face is None:
            cones.append(c)
            continue
        hit = True
        for k in sorted(face):
            cones.append(Cone(tuple(idx[:k] + idx[k + 1:] + [new])))
    if not hit:
        raise NotInSupport(f"{list(w)} is not in the support of the fan")
    return Fan(fan.rank, fan.rays + (w,), cones)


def blowup_stratum(fan: Fan, cone: Cone | Iterable[int]) -> Fan:
    """Star subdivision at the primitive part of the sum of the cone's rays."""
    cone = cone if isinstance(cone, Cone) else Cone(tuple(cone))
    if len(cone) < 2:
        raise InvalidCone("blowing up a stratum needs a cone with at least two rays")
    if not any(set(cone) <= set(c) for c in fan.max_cones):
        raise InvalidCone(f"{list(cone)} is not a cone of the fan")
    total = tuple(sum(col) for col in zip(*fan.cone_rays(cone)))
    return star_subdivide(fan, make_primitive(total)[0])


def _box_of(gens: Sequence[Vector], scales: Sequence[Fraction]) -> tuple[list[int], list[int]]:
    """Integer box containing {sum a_i g_i : 0 <= a_i <= scales[i]}."""
    n = len(gens[0])
    lo, hi = [], []
    for j in range(n):
        neg = sum(min(0, g[j]) * s for g, s in zip(gens, scales))
        pos = sum(max(0, g[j]) * s for g, s in zip(gens, scales))
        lo.append(int(Fraction(neg).__floor__()))
        hi.append(int(Fraction(pos).__ceil__()))
    return lo, hi


def parallelepiped_points(gens: Sequence[Vector], kernel: str | None = None) -> list[Vector]:
    """Nonzero lattice points of the half-open fundamental parallelepiped."""
    gens = [tuple(g) for g in gens]
    rows, adj, det = independent_frame(gens)
    lo, hi = _box_of(gens, [1] * len(gens))
    return _kernels.scan_box(lo, hi, rows, adj, det, gens, [0] * len(gens), 0,
                             strict_unit=True, kernel=kernel)


def resolve(fan: Fan, *, centers: list | None = None, max_steps: int = 100_000) -> Fan:
    """Refine ``fan`` to a smooth fan with the same support.

    Each step takes the first singular maximal cone (in sorted ray order),
    picks the nonzero parallelepiped point with the least coefficient sum
    (ties broken lexicographically) and star-subdivides there.  A point
    u = sum l_i v_i with 0 <= l_i < 1 replaces every maximal cone sigma
    through it by cones of multiplicity l_i * mult(sigma) < mult(sigma), so
    the multiset of multiplicities drops in the multiset order and the loop
    terminates.  Centers are appended to ``centers`` when given.
    """
    fan = triangulate(fan)
    for _ in range(max_steps):
        target = None
        for c in fan.sorted_cones():
            if cone_multiplicity(fan.cone_rays(c)) > 1:
                target = c
                break
        if target is None:
            return fan
        gens = fan.cone_rays(target)
        pts = parallelepiped_points(gens)
        u = min(pts, key=lambda p: (sum(solve_in_generators(gens, p)), p))
        u = make_primitive(u)[0]
        if centers is not None:
            centers.append(u)
        fan = star_subdivide(fan, u)
    raise RuntimeError(f"resolution did not finish within {max_steps} steps")


def refines(fine: Fan, coarse: Fan) -> bool:
    """Every cone of ``fine`` lies in some cone of ``coarse``."""
    for c in fine.max_cones:
        gens = fine.cone_rays(c)
        if not any(all(in_cone(coarse.cone_rays(d), g) for g in gens) for d in coarse.max_cones):
            return False
    return True

"""Exit criteria.  Each test carries its criterion number; a summary line per
criterion is printed at the end of the pytest run."""

import itertools
import random
import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import corpus
import oracles
from checks import audit_terminalization, monotonicity_audit, same_support
from conftest import RECORD_AUDIT
from toricb import (ZERO, Affine3Class, CTriple, Cone, Fan,
                    FiniteSupportRule, Level, MinimalDiscrepancy, b_terminalize, classify,
                    classify_affine3, discrepancy_at, enumerate_at_most, find_containing_cone,
                    full_rank_shortcut, min_discrepancy_below, resolve, star_subdivide,
                    triangulate)
from toricb.lattice import cone_multiplicity, make_primitive

F = Fraction


def criterion(n, summary):
    return pytest.mark.acceptance(criterion=n, summary=summary)


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.2f}s, limit {self.limit}s"


# -- 1 ------------------------------------------------------------------------

@criterion(1, "affine 3-space with p = 3: (1,2,0) b-canonical, (1,1,0) b-lt, b(1,1,0) = -1/3")
def test_criterion_1_brauer_pair_on_affine_space():
    with Timer(1.0):
        canon = classify(corpus.A3, corpus.c3(3, (1, 2, 0)))
        lt = classify(corpus.A3, corpus.c3(3, (1, 1, 0)))
        rec = discrepancy_at(corpus.A3, corpus.c3(3, (1, 1, 0)), (1, 1, 0))
    assert canon.b_class is Level.CANONICAL
    assert lt.b_class is Level.LOG_TERMINAL
    assert rec.b < 0
    assert rec.b == oracles.b_value(corpus.A3, corpus.rfun(corpus.c3(3, (1, 1, 0))), (1, 1, 0))
    assert rec.b == F(-1, 3)


# -- 2 ------------------------------------------------------------------------

def _all_triples(p):
    for c in itertools.product(range(p), repeat=3):
        if sum(1 for x in c if x) >= 2:
            yield CTriple(p, c)


@criterion(2, "c-invariant classifier equals enumeration on every triple, p in {2,3,5}")
def test_criterion_2_c_invariant_exhaustive():
    expected = {Affine3Class.B_TERMINAL: Level.TERMINAL,
                Affine3Class.B_CANONICAL_NOT_TERMINAL: Level.CANONICAL,
                Affine3Class.NOT_B_CANONICAL: Level.LOG_TERMINAL}
    checked = 0
    with Timer(60.0):
        for p in (2, 3, 5):
            for t in _all_triples(p):
                closed = classify_affine3(t)
                c = oracles.c_invariant(p, t.c)
                assert closed.c == c
                assert closed.b_terminal == (c > p) and closed.b_canonical == (c >= p) and closed.b_lt
                general = classify(corpus.A3, corpus.c3(p, t.c))
                assert general.b_class is expected[closed.kind], (p, t.c)
                checked += 1
    assert checked == 4 + 20 + 112


# -- 3 ------------------------------------------------------------------------

@criterion(3, "1/r(1,1,0), r = 2..6: minimal discrepancy -1 + 2/r on the kernel face")
def test_criterion_3_cyclic_quotient_minimum():
    with Timer(5.0):
        results = {r: min_discrepancy_below(corpus.cyclic(r), ZERO, 0) for r in range(2, 7)}
    for r, res in results.items():
        assert isinstance(res, MinimalDiscrepancy)
        assert res.value == -1 + F(2, r)
        w = res.witness.w
        assert w[2] == 0 and find_containing_cone(corpus.cyclic(r), w) == Cone((0, 1))
        expected = oracles.enumerate_box(corpus.cyclic(r), corpus.rfun(ZERO), 0,
                                         [-r - 1] * 3, [r + 1] * 3)
        assert min(expected.values()) == res.value


# -- 4 ------------------------------------------------------------------------

@criterion(4, "three-fold Brauer example b-terminal for (r,p) in {(3,5),(4,7),(5,7)}")
def test_criterion_4_threefold_example():
    outcome = {}
    with Timer(10.0):
        for r, p in [(3, 5), (4, 7), (5, 7)]:
            outcome[(r, p)] = classify(corpus.cyclic(r), corpus.threefold(r, p))
    failures = {k: (v.b_class.label(b=True), v.witness.w, str(v.witness.b))
                for k, v in outcome.items() if v.b_class is not Level.TERMINAL}
    assert not failures, f"not b-terminal: {failures}"


def test_threefold_example_when_p_equals_r():
    """Companion to criterion 4: the regime where the pair is b-terminal.

    With p = r the matrix reduces to rows (0,0,0),(0,0,-1),(0,1,0) mod p, so
    v_2 is no longer in the kernel.  A proper multiple p = kr is not enough.
    """
    for r, p in [(4, 2), (6, 3), (6, 2)]:
        assert classify(corpus.cyclic(r), corpus.threefold(r, p)).b_class is not Level.TERMINAL
    for r, p in [(2, 2), (3, 3), (5, 5), (7, 7)]:
        res = classify(corpus.cyclic(r), corpus.threefold(r, p))
        assert res.b_class is Level.TERMINAL, (r, p)
        assert res.ordinary_class is (Level.CANONICAL if r == 2 else Level.LOG_TERMINAL)


def test_threefold_example_kernel_face_witness():
    """Why (3,5), (4,7), (5,7) fail: v_2 = (-1,r,0) spans ker M, so r_2 = 1."""
    for r, p in [(3, 5), (4, 7), (5, 7)]:
        rule = corpus.threefold(r, p)
        assert rule.coefficient((-1, r, 0)) == 0
        res = classify(corpus.cyclic(r), rule)
        w = res.witness.w
        # witness lies on the face <v1, v2> and its b agrees with the oracle
        assert find_containing_cone(corpus.cyclic(r), w) == Cone((0, 1))
        assert res.witness.b == oracles.b_value(corpus.cyclic(r), corpus.rfun(rule), w) <= 0


# -- 5 ------------------------------------------------------------------------

def _a(n):
    return Fan(n, [tuple(int(i == j) for j in range(n)) for i in range(n)], [tuple(range(n))])


FULL_RANK_FANS = [
    ("A2", _a(2)),
    ("P2", corpus.P2),
    ("1/2(1,1)", Fan(2, [(0, 1), (2, -1)], [(0, 1)])),
    ("1/3(1,1)", Fan(2, [(0, 1), (3, -1)], [(0, 1)])),
    ("1/3(1,2)", Fan(2, [(0, 1), (3, -2)], [(0, 1)])),
    ("1/5(1,2)", Fan(2, [(0, 1), (5, -2)], [(0, 1)])),
    ("A4", _a(4)),
    ("1/2(1,1,1,1)", Fan(4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 2)], [(0, 1, 2, 3)])),
    ("1/3(1,1,1,1)", Fan(4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (1, 1, 1, 3)], [(0, 1, 2, 3)])),
    ("1/3(1,1,0,0)", Fan(4, [(1, 0, 0, 0), (-1, 3, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)], [(0, 1, 2, 3)])),
]


def _brute_ordinary_level(fan):
    one = corpus.rfun(ZERO)
    bound = oracles.symmetric_bound(fan, one, 0)
    found = oracles.enumerate_box(fan, one, 0, [-bound] * fan.rank, [bound] * fan.rank)
    if not found:
        return Level.TERMINAL
    low = min(found.values())
    return Level.CANONICAL if low >= 0 else Level.LOG_TERMINAL if low > -1 else \
        Level.LOG_CANONICAL if low == -1 else Level.NOT_LC


@criterion(5, "full-rank M, p in {3,5}: b-class equals the ordinary class on 10 fans")
def test_criterion_5_full_rank():
    compared = 0
    with Timer(60.0):
        for name, fan in FULL_RANK_FANS:
            ordinary = classify(fan, ZERO).ordinary_class
            assert ordinary is _brute_ordinary_level(fan), name
            for p in (3, 5):
                rule = corpus.std_skew(fan.rank, p)
                assert rule.brauer.rank_mod_p() == fan.rank
                assert classify(fan, rule).b_class is ordinary, (name, p)
                assert full_rank_shortcut(rule.brauer, fan) is ordinary
                compared += 1
    assert compared >= 12


# -- 6 ------------------------------------------------------------------------

@criterion(6, "enumerate_at_most(0) equals a brute-force box scan on every corpus pair")
def test_criterion_6_enumeration_completeness():
    with Timer(120.0):
        for name, fan, rule in corpus.ENUMERATION_CORPUS:
            rf = corpus.rfun(rule)
            assert max(abs(x) for ray in fan.rays for x in ray) <= 4
            assert {rf(v) for v in fan.rays} <= {1, 2, 3, 5}
            top = int(3 * max(rf(v) for v in fan.rays))
            sym = oracles.symmetric_bound(fan, rf, 0)
            # [0, 3 max r]^n, widened to cover rays with negative coordinates
            lo, hi = [-sym] * fan.rank, [max(top, sym)] * fan.rank
            expected = oracles.enumerate_box(fan, rf, 0, lo, hi)
            got = enumerate_at_most(fan, rule, 0)
            assert {rec.w: rec.b for rec in got} == expected, name
            assert [rec.w for rec in got] == sorted(expected)


# -- 7 ------------------------------------------------------------------------

@criterion(7, "b = r b', b + 1 = r(a + 1), b' = a + d on at least 10^4 records")
def test_criterion_7_identities():
    start = RECORD_AUDIT["count"]
    records = []
    for fan, rule, threshold in [(corpus.A3, ZERO, 30), (corpus.P2, ZERO, 60),
                                 (corpus.cyclic(4), corpus.c3(3, (1, 1, 0)), 6),
                                 (corpus.TWO_CONES, corpus.c3(3, (0, 1, 1)), 4),
                                 (corpus.HALF, FiniteSupportRule({(1, 1): F(2, 3)}), 80)]:
        records.extend(enumerate_at_most(fan, rule, threshold))
    assert len(records) >= 10 ** 4
    for rec in records:
        assert rec.b == rec.r * rec.b_prime
        assert rec.b + 1 == rec.r * (rec.a + 1)
        assert rec.b_prime == rec.a + rec.d
    assert RECORD_AUDIT["count"] - start >= 10 ** 4
    assert RECORD_AUDIT["bad"] == []


# -- 8 and 9 ------------------------------------------------------------------

TERMINALIZATION_CORPUS = [
    ("A3/c120", corpus.A3, corpus.c3(3, (1, 2, 0))),
    ("A3/c110", corpus.A3, corpus.c3(3, (1, 1, 0))),
    *[(f"cyclic{r}/zero", corpus.cyclic(r), ZERO) for r in range(2, 7)],
    *[(f"cyclic{r}/threefold{p}", corpus.cyclic(r), corpus.threefold(r, p)) for r, p in [(3, 5), (4, 7), (5, 7)]],
    ("A2/full-rank", _a(2), corpus.std_skew(2, 3)),
    ("1/3(1,1)/full-rank", FULL_RANK_FANS[3][1], corpus.std_skew(2, 5)),
    ("square/zero", corpus.SQUARE, ZERO),
    ("P2/finite", corpus.P2, FiniteSupportRule({(-1, -1): F(2, 3), (1, 1): F(1, 2)})),
    ("two_cones/c3", corpus.TWO_CONES, corpus.c3(3, (0, 1, 1))),
]

_REPORTS = {}


@criterion(8, "b_terminalize verified, simplicial, support and rays audited, idempotent")
def test_criterion_8_terminalization():
    assert len(TERMINALIZATION_CORPUS) >= 10
    with Timer(120.0):
        for name, fan, rule in TERMINALIZATION_CORPUS:
            report = b_terminalize(fan, rule)
            audit_terminalization(fan, rule, report)
            _REPORTS[name] = report


@criterion(9, "extraction never lowers b; strict exactly where b(u) < 0 and w is in the star of u")
def test_criterion_9_monotonicity():
    if len(_REPORTS) < len(TERMINALIZATION_CORPUS):
        for name, fan, rule in TERMINALIZATION_CORPUS:
            _REPORTS.setdefault(name, b_terminalize(fan, rule))
    total = strict_total = steps = 0
    for seed, (name, fan, rule) in enumerate(TERMINALIZATION_CORPUS):
        report = _REPORTS[name]
        compared, strict, expected = monotonicity_audit(report, rule, samples=20, seed=seed)
        assert strict == expected, name
        assert compared == 20 * len(report.subdivision_log), name
        total += compared
        strict_total += strict
        steps += len(report.subdivision_log)
    assert steps > 0 and strict_total > 0


# -- 10 -----------------------------------------------------------------------

SUBDIVISION_FANS = [corpus.A2, corpus.A3, corpus.HALF, corpus.THIRD, corpus.P2, corpus.HALF3,
                    corpus.THIRD3, corpus.SQUARE, corpus.TWO_CONES,
                    *[corpus.cyclic(r) for r in range(2, 7)], *[f for _, f in FULL_RANK_FANS]]


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.sampled_from(SUBDIVISION_FANS), st.integers(0, 10 ** 9))
def _star_property(fan, seed):
    rng = random.Random(seed)
    cone = rng.choice(fan.max_cones)
    coeffs = [rng.randint(0, 3) for _ in cone]
    v = [sum(c * g[j] for c, g in zip(coeffs, fan.cone_rays(cone))) for j in range(fan.rank)]
    if not any(v):
        return
    w = make_primitive(v)[0]
    if fan.ray_index(w) is not None:
        return
    out = star_subdivide(fan, w)
    assert set(out.rays) == set(fan.rays) | {w} and len(out.rays) == len(fan.rays) + 1
    assert same_support(fan, out, k=40, seed=seed)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.sampled_from(SUBDIVISION_FANS))
def _triangulate_property(fan):
    tri = triangulate(fan)
    assert tri.rays == fan.rays and tri.is_simplicial()


@criterion(10, "star subdivision adds one ray, keeps support; resolve smooth; triangulate adds no rays")
def test_criterion_10_subdivision_properties():
    with Timer(30.0):
        _star_property()
        _triangulate_property()
        for fan in SUBDIVISION_FANS:
            out = resolve(fan)
            assert all(cone_multiplicity(out.cone_rays(c)) == 1 for c in out.max_cones)

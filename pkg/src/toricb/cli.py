"""Command-line front end.

Fans and rules are read from JSON files; every report is a JSON document
on stdout with exact rationals written as ``"p/q"`` strings.  Exit codes:
0 ok, 1 internal error, 2 parse or validation error, 3 pair not
Q-Gorenstein, 4 bad valuation argument.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .bdivisor import ZERO, BrauerRule, CoefficientRule, FiniteSupportRule
from .brauer import BrauerClass, CTriple, matrix_from_c
from .discrepancy import (DiscrepancyRecord, classify, discrepancy_at,
                          enumerate_at_most)
from .errors import (InvalidFan, NotExceptional, NotInSupport, NotPrimitive, NotQGorenstein,
                     RayAlreadyPresent, ToricError, ZeroVector)
from .fan import Fan, resolve, star_subdivide, validate
from .terminalize import b_terminalize

FORMAT_VERSION = 1

EXIT_OK, EXIT_INTERNAL, EXIT_PARSE, EXIT_NOT_Q_GORENSTEIN, EXIT_VALUATION = 0, 1, 2, 3, 4

_VALUATION_ERRORS = (NotExceptional, NotInSupport, NotPrimitive, ZeroVector, RayAlreadyPresent)


class ParseError(Exception):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


# -- documents --------------------------------------------------------------

def fan_to_document(fan: Fan) -> dict:
    return {
        "rank": fan.rank,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c.ray_indices) for c in fan.max_cones],
    }


def fan_from_document(doc) -> Fan:
    try:
        rank = doc["rank"]
        rays = doc["rays"]
        cones = doc["max_cones"]
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise ParseError("'rank' must be an integer")
        for r in rays:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
                raise ParseError(f"ray {r} must be a list of integers")
        for c in cones:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in c):
                raise ParseError(f"cone {c} must be a list of ray indices")
        fan = Fan(rank, rays, cones)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed fan document: {exc}") from exc
    report = validate(fan)
    if not report.ok:
        raise ParseError("invalid fan", report.violations)
    return fan


def _rational(value) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ParseError(f"{value!r} is not exact; write rationals as \"p/q\" strings")
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse rational {value!r}") from exc


def rule_from_document(doc, rank: int | None = None) -> CoefficientRule:
    try:
        kind = doc["type"]
        if kind == "zero":
            return ZERO
        if kind == "finite":
            entries = [(e["ray"], _rational(e["coeff"])) for e in doc["entries"]]
            for ray, _ in entries:
                if rank is not None and len(ray) != rank:
                    raise ParseError(f"support vector {ray} does not have length {rank}")
            return FiniteSupportRule(entries)
        if kind == "brauer":
            brauer = BrauerClass(int(doc["p"]), tuple(tuple(row) for row in doc["matrix"]))
        elif kind == "brauer_c3":
            brauer = matrix_from_c(CTriple(int(doc["p"]), tuple(doc["c"])))
        else:
            raise ParseError(f"unknown rule type {kind!r}")
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed rule document: {exc}") from exc
    except ToricError as exc:
        raise ParseError(str(exc)) from exc
    if rank is not None and brauer.n != rank:
        raise ParseError(f"Brauer matrix is {brauer.n}x{brauer.n} but the fan has rank {rank}")
    return BrauerRule(brauer)


def _q(x: Fraction) -> str:
    return str(x)


def record_to_document(rec: DiscrepancyRecord, decimal: bool = False) -> dict:
    doc = {"w": list(rec.w), "d": _q(rec.d), "r": _q(rec.r), "a": _q(rec.a),
           "b_prime": _q(rec.b_prime), "b": _q(rec.b)}
    if decimal:
        doc["approximate_decimal"] = {k: float(getattr(rec, k)) for k in ("d", "r", "a", "b_prime", "b")}
    return doc


def _notes(rule: CoefficientRule) -> list[str]:
    notes = []
    if isinstance(rule, BrauerRule) and not rule.brauer.prime_modulus:
        notes.append(f"composite modulus p = {rule.brauer.p}: ramification orders use "
                     "p / gcd(p, M w); outside the prime-order theory")
    return notes


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _parse_ray(text: str, rank: int) -> tuple[int, ...]:
    try:
        ray = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise ParseError(f"--ray must be comma-separated integers, got {text!r}") from exc
    if len(ray) != rank:
        raise ParseError(f"--ray has {len(ray)} coordinates but the fan has rank {rank}")
    return ray


def _emit(doc, out=None):
    text = json.dumps(doc, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ---------------------------------------------------------------

def _load_pair(args):
    fan = fan_from_document(_load_json(args.fan_file))
    rule = rule_from_document(_load_json(args.rule_file), fan.rank)
    return fan, rule


def cmd_classify(args) -> int:
    fan, rule = _load_pair(args)
    result = classify(fan, rule, jobs=args.jobs)
    doc = {
        "format_version": FORMAT_VERSION,
        "command": "classify",
        "b_class": result.b_class.label(b=True),
        "ordinary_class": result.ordinary_class.label() if result.ordinary_class is not None else None,
        "min_b_discrepancy": _q(result.witness.b) if result.witness else None,
        "min_discrepancy": _q(result.ordinary_witness.a) if result.ordinary_witness else None,
        "witness": record_to_document(result.witness, args.decimal) if result.witness else None,
        "ordinary_witness": (record_to_document(result.ordinary_witness, args.decimal)
                             if result.ordinary_witness else None),
        "notes": _notes(rule),
    }
    if result.witness is None:
        doc["notes"].append("no exceptional valuation has b <= 0")
    _emit(doc)
    return EXIT_OK


def cmd_discrepancy(args) -> int:
    fan, rule = _load_pair(args)
    ray = _parse_ray(args.ray, fan.rank)
    rec = discrepancy_at(fan, rule, ray)
    doc = {"format_version": FORMAT_VERSION, "command": "discrepancy"}
    doc.update(record_to_document(rec, args.decimal))
    doc["notes"] = _notes(rule)
    _emit(doc)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    fan, rule = _load_pair(args)
    threshold = _rational(args.threshold)
    if threshold < -1:
        raise ParseError("--threshold must be at least -1")
    recs = enumerate_at_most(fan, rule, threshold, jobs=args.jobs)
    _emit({
        "format_version": FORMAT_VERSION,
        "command": "enumerate",
        "threshold": _q(threshold),
        "records": [record_to_document(r, args.decimal) for r in recs],
        "notes": _notes(rule),
    })
    return EXIT_OK


def cmd_terminalize(args) -> int:
    fan, rule = _load_pair(args)
    report = b_terminalize(fan, rule, jobs=args.jobs)
    if args.out:
        _emit(fan_to_document(report.output_fan), args.out)
    _emit({
        "format_version": FORMAT_VERSION,
        "command": "terminalize",
        "verified": report.verified,
        "extracted": [record_to_document(r, args.decimal) for r in report.extracted],
        "resolution_log": [list(w) for w in report.resolution_log],
        "subdivision_log": [list(w) for w in report.subdivision_log],
        "resolved_fan": fan_to_document(report.resolved_fan),
        "output_fan": fan_to_document(report.output_fan),
        "notes": _notes(rule),
    })
    return EXIT_OK


def cmd_resolve(args) -> int:
    fan = fan_from_document(_load_json(args.fan_file))
    centers: list = []
    _emit(fan_to_document(resolve(fan, centers=centers)), args.out)
    if args.out:
        _emit({"format_version": FORMAT_VERSION, "command": "resolve",
               "centers": [list(c) for c in centers]})
    return EXIT_OK


def cmd_subdivide(args) -> int:
    fan = fan_from_document(_load_json(args.fan_file))
    ray = _parse_ray(args.ray, fan.rank)
    _emit(fan_to_document(star_subdivide(fan, ray)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toricb", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rule=True):
        p.add_argument("fan_file")
        if rule:
            p.add_argument("rule_file")
        p.add_argument("--jobs", type=int, default=1, help="threads for cone enumeration")
        p.add_argument("--decimal", action="store_true",
                       help="also print approximate decimals (not authoritative)")
        return p

    common(sub.add_parser("classify", help="b-class and ordinary class")).set_defaults(func=cmd_classify)
    p = common(sub.add_parser("discrepancy", help="discrepancies of one valuation"))
    p.add_argument("--ray", required=True, help="comma-separated primitive vector")
    p.set_defaults(func=cmd_discrepancy)
    p = common(sub.add_parser("enumerate", help="valuations with b <= threshold"))
    p.add_argument("--threshold", default="0")
    p.set_defaults(func=cmd_enumerate)
    p = common(sub.add_parser("terminalize", help="Q-factorial b-terminalization"))
    p.add_argument("--out", help="write the output fan here")
    p.set_defaults(func=cmd_terminalize)
    p = common(sub.add_parser("resolve", help="smooth refinement"), rule=False)
    p.add_argument("--out")
    p.set_defaults(func=cmd_resolve)
    p = common(sub.add_parser("subdivide", help="star subdivision at a ray"), rule=False)
    p.add_argument("--ray", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_subdivide)
    return parser


def _fail(code: int, kind: str, detail: str, **extra) -> int:
    doc = {"format_version": FORMAT_VERSION, "error": kind, "detail": detail}
    doc.update(extra)
    sys.stderr.write(json.dumps(doc, indent=2) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.jobs < 1:
        return _fail(EXIT_PARSE, "parse", "--jobs must be positive")
    try:
        return args.func(args)
    except ParseError as exc:
        violations = [{"kind": v.kind, "detail": v.detail} for v in exc.violations]
        return _fail(EXIT_PARSE, "parse", str(exc), violations=violations)
    except InvalidFan as exc:
        return _fail(EXIT_PARSE, "parse", str(exc))
    except NotQGorenstein as exc:
        return _fail(EXIT_NOT_Q_GORENSTEIN, "not-q-gorenstein", str(exc),
                     cone=[list(r) for r in exc.cone])
    except _VALUATION_ERRORS as exc:
        return _fail(EXIT_VALUATION, type(exc).__name__, str(exc))
    except Exception as exc:  # noqa: BLE001 - mapped to the internal exit code
        return _fail(EXIT_INTERNAL, "internal", f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())

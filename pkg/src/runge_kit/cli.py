"""``runge-kit`` command line: group specs in, one JSON document out.

Exit status is 0 on success, 1 when a mathematical invariant fails (the JSON
then carries the witness) and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import analytic, bounds
from .cusps import RungeReport, galois_orbits, geometric_cusps, runge_condition
from .gl2 import (
    GroupTooLargeError,
    Subgroup,
    UnitLabel,
    closure,
    label_classes,
    resolve_galois,
    split_cartan,
    unit_galois_group,
)
from .runge import RungeConditionError, budget_bound, runge_unit, verify_runge_unit
from .units import ConventionError, div_w

SCHEMA = 1


class InputError(ValueError):
    pass


class InvariantFailure(Exception):
    def __init__(self, payload: dict):
        super().__init__(payload.get("message", "invariant failure"))
        self.payload = payload


# -- JSON helpers --------------------------------------------------------------

def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):  # numpy scalars
        return _jsonable(x.item())
    return x


def dumps(doc: dict) -> str:
    return json.dumps(_jsonable(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- group specs ---------------------------------------------------------------

def _load_spec(text: str) -> dict:
    src = text.strip()
    if not src.startswith("{"):
        path = Path(text)
        try:
            src = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read group spec {text!r}: {exc.strerror}") from None
        where = str(path)
    else:
        where = "<inline>"
    try:
        spec = json.loads(src)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(spec, dict):
        raise InputError(f"{where}: group spec must be a JSON object")
    return spec


def _parse_generators(gens, N: int) -> list:
    if not isinstance(gens, list):
        raise InputError("'generators' must be a list of 2x2 integer matrices")
    out = []
    for g in gens:
        ok = (isinstance(g, list) and len(g) == 2
              and all(isinstance(r, list) and len(r) == 2 for r in g)
              and all(isinstance(v, int) and not isinstance(v, bool) for r in g for v in r))
        if not ok:
            raise InputError(f"generator {g!r} is not a 2x2 integer matrix")
        out.append(g)
    return out


def load_group(args) -> tuple[Subgroup, frozenset[int]]:
    """Resolve ``--group`` / ``--split-cartan`` / ``--level`` into ``(G, H_K)``."""
    galois = getattr(args, "galois", None)
    if getattr(args, "split_cartan", None) is not None:
        p = args.split_cartan
        if p < 3 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise InputError(f"--split-cartan needs an odd prime, got {p}")
        G = split_cartan(p)
        return G, resolve_galois(G, galois or "full")
    if args.group is not None:
        spec = _load_spec(args.group)
        N = spec.get("level")
        if not isinstance(N, int) or isinstance(N, bool) or N < 2:
            raise InputError("'level' must be an integer >= 2")
        if args.level is not None and args.level != N:
            raise InputError(f"--level {args.level} disagrees with the group spec level {N}")
        gens = _parse_generators(spec.get("generators", []), N)
        galois = galois if galois is not None else spec.get("galois", "detG")
    elif args.level is not None:
        N, gens = args.level, []
        if N < 2:
            raise InputError("--level must be >= 2")
    else:
        raise InputError("a group is required: --group SPEC, --split-cartan p or --level N")
    try:
        G = closure(gens, N)
        H = resolve_galois(G, galois)
        unit_galois_group(G, H)  # checks H_K inside det G
    except GroupTooLargeError as exc:
        raise InputError(str(exc)) from None
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from None
    return G, H


def _group_doc(G: Subgroup, H: frozenset[int]) -> dict:
    return {"level": G.level, "order": G.order, "galois_image": sorted(H)}


def _parse_label(text: str, N: int) -> UnitLabel:
    try:
        k1, k2 = (int(t) for t in text.split(","))
        return UnitLabel(N, k1, k2)
    except ValueError as exc:
        raise InputError(f"bad label {text!r} (expected k1,k2 with a = (k1/N, k2/N) nonzero): {exc}") from None


# -- subcommands -----------------------------------------------------------------

def cmd_cusps(args) -> dict:
    G, H = load_group(args)
    geo = geometric_cusps(G)
    return {
        "group": _group_doc(G, H),
        "cusps": [{"vector": [gc.representative.x, gc.representative.y], "width": gc.width}
                  for gc in geo],
        "count": len(geo),
    }


def cmd_orbits(args) -> dict:
    G, H = load_group(args)
    orbits = galois_orbits(G, H)
    doc = {
        "group": _group_doc(G, H),
        "orbits": [list(o.members) for o in orbits],
        "count": len(orbits),
    }
    if args.places is not None:
        try:
            rep: RungeReport = runge_condition(G, H, args.places)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        doc["runge_condition"] = {"satisfied": rep.satisfied, "orbits": rep.orbit_count,
                                  "places": rep.place_count}
    return doc


def cmd_divisors(args) -> dict:
    G, H = load_group(args)
    N = G.level
    if args.label:
        labels = [_parse_label(t, N) for t in args.label]
    elif args.split_cartan is not None:
        labels = [UnitLabel(N, 1, 0), UnitLabel(N, 0, 1)]
    else:
        labels = label_classes(N)
    out = []
    try:
        for a in labels:
            d = div_w(a, G, H)
            if d.degree() != 0:
                raise InvariantFailure({"message": "divisor has nonzero degree",
                                        "a": [a.k1, a.k2], "degree": d.degree()})
            out.append({"a": [a.k1, a.k2],
                        "divisor": [{"cusp": i, "ord": v} for i, v in enumerate(d.coefficients)]})
    except ConventionError as exc:
        raise InvariantFailure({"message": str(exc)}) from None
    geo = geometric_cusps(G)
    return {
        "group": _group_doc(G, H),
        "cusps": [{"vector": [gc.representative.x, gc.representative.y], "width": gc.width}
                  for gc in geo],
        "orbits": [list(o.members) for o in galois_orbits(G, H)],
        "divisors": out,
    }


def cmd_runge_unit(args) -> dict:
    G, H = load_group(args)
    try:
        u = runge_unit(G, H, args.sigma, args.s)
    except RungeConditionError as exc:
        raise InputError(str(exc)) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    except AssertionError as exc:
        raise InvariantFailure({"message": str(exc)}) from None
    res = verify_runge_unit(u)
    bb = budget_bound(u.s, u.gprime_order, G.level)
    bound_text = bb if isinstance(bb, int) else f"sqrt({bb[0]})*{bb[1]}"
    doc = {
        "group": _group_doc(G, H),
        "sigma": list(u.sigma),
        "s": u.s,
        "exponents": [{"a": [a.k1, a.k2], "b": b} for a, b in u.nonzero_exponents()],
        "B": u.budget_B,
        "bound": bound_text,
        "gprime_order": u.gprime_order,
        "lambda_height": u.lambda_height,
        "divisor": [{"cusp": i, "ord": v} for i, v in enumerate(u.divisor.coefficients)],
        "verification": {
            "pass": res.passed,
            "positivity": res.positivity,
            "budget": res.budget,
            "degree_zero": res.degree_zero,
            "divisor_matches": res.divisor_matches,
            "witnesses": res.witnesses,
        },
    }
    if not res.passed:
        raise InvariantFailure({"message": "Runge unit verification failed", **doc})
    return doc


def cmd_bound(args) -> dict:
    t = args.theorem

    def need(name):
        v = getattr(args, name)
        if v is None:
            raise InputError(f"--theorem {t} needs --{name.replace('_', '-')}")
        return v

    try:
        if t in ("1.1", "1.2"):
            N = args.level
            G_order = args.group_order
            if args.group is not None:
                G, _ = load_group(args)
                N, G_order = G.level, G.order
            N = N if N is not None else need("level")
            G_order = G_order if G_order is not None else need("group_order")
            if t == "1.1":
                rep = bounds.BoundReport("theorem_1_1", {"N": N, "G_order": G_order},
                                         bounds.bound_theorem_1_1(N, G_order))
            else:
                rep = bounds.report_theorem_1_2(N, G_order, need("s"), args.infinite_only)
        elif t == "refined":
            rep = bounds.report_refined(need("level"), need("gprime_order"), need("B"),
                                        args.infinite_only)
        elif t == "split-cartan":
            rep = bounds.report_split_cartan(need("p"), args.case)
        elif t == "x0-plus":
            rep = bounds.report_x0_plus(need("p"))
        else:  # pragma: no cover - argparse restricts choices
            raise InputError(f"unknown theorem {t}")
    except AssertionError as exc:
        raise InvariantFailure({"message": str(exc)}) from None
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from None
    return {"bound": rep.to_json()}


_CHECKS = {
    "prop-j": lambda a: analytic.check_prop_j(a.samples, a.seed, a.terms, a.hi_prec),
    "cor-j": lambda a: analytic.check_cor_j(a.samples, a.seed, a.terms, a.hi_prec),
    "siegel-d": lambda a: analytic.check_siegel_D(a.level, a.samples, a.seed, a.terms, a.hi_prec),
    "siegel-global": lambda a: analytic.check_siegel_global(a.level, a.samples, a.seed, a.terms,
                                                            a.hi_prec),
}


def cmd_verify(args) -> dict:
    if args.samples < 1:
        raise InputError("--samples must be >= 1")
    if args.check in ("siegel-d", "siegel-global"):
        if args.level is None:
            raise InputError(f"--check {args.check} needs --level")
        if args.level < 2:
            raise InputError("--level must be >= 2")
    rep = _CHECKS[args.check](args)
    doc = {"report": rep.to_json()}
    informational = args.check.startswith("siegel") and args.level == 2
    if informational:
        doc["report"].setdefault("details", {})["informational"] = True
    if not rep.passed and not informational:
        raise InvariantFailure({"message": f"{args.check} check failed", **doc})
    return doc


# -- parser ------------------------------------------------------------------------

def _group_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--group", help="group spec: path to a JSON file or inline JSON")
    p.add_argument("--level", type=int, help="level N (alone: G = {+-I})")
    p.add_argument("--split-cartan", type=int, metavar="P",
                   help="diagonal subgroup mod the odd prime P with H_K = all units")
    p.add_argument("--galois", help='override the spec\'s galois field ("full" or "detG")')


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="runge-kit",
                                 description="Cusps, Siegel units and Runge bounds on modular curves.")
    ap.add_argument("--output", "-o", help="write JSON here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cusps", help="geometric cusps of X_G with widths")
    _group_args(p)
    p.set_defaults(func=cmd_cusps)

    p = sub.add_parser("orbits", help="Galois orbits of cusps")
    _group_args(p)
    p.add_argument("--places", type=int, help="check the Runge condition for this many places")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("divisors", help="divisors of the units w_a")
    _group_args(p)
    p.add_argument("--label", action="append", metavar="K1,K2",
                   help="restrict to a = (K1/N, K2/N); repeatable")
    p.set_defaults(func=cmd_divisors)

    p = sub.add_parser("runge-unit", help="construct and verify a Runge unit")
    _group_args(p)
    p.add_argument("--sigma", type=int, nargs="*", default=[], help="orbit indices")
    p.add_argument("--s", type=int, help="number of places (default |sigma|)")
    p.set_defaults(func=cmd_runge_unit)

    p = sub.add_parser("bound", help="explicit height bounds")
    p.add_argument("--theorem", required=True,
                   choices=["1.1", "1.2", "refined", "split-cartan", "x0-plus"])
    _group_args(p)
    p.add_argument("--group-order", type=int)
    p.add_argument("--gprime-order", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--B", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--case", default="single-rational",
                   choices=["single-rational", "two-rational", "6.4", "6.5", "6.6"])
    p.add_argument("--infinite-only", action="store_true",
                   help="all places of S are archimedean")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="sampled certification of the analytic estimates")
    p.add_argument("--check", required=True, choices=sorted(_CHECKS))
    p.add_argument("--level", type=int)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--terms", type=int, default=analytic.DEFAULT_TERMS)
    p.add_argument("--hi-prec", action="store_true", help="re-check the worst witness with mpmath")
    p.set_defaults(func=cmd_verify)
    return ap


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        body = args.func(args)
    except InputError as exc:
        print(f"runge-kit: error: {exc}", file=sys.stderr)
        return 2
    except InvariantFailure as exc:
        _emit(dumps({"schema": SCHEMA, "command": args.command, "pass": False,
                     "failure": exc.payload}), args.output)
        return 1
    _emit(dumps({"schema": SCHEMA, "command": args.command, **body}), args.output)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

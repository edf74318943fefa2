"""Command-line front end.

Subcommands: invariants, local-factor, euler, count, mobius, wiles-eval,
verify.  All outputs are JSON with sorted keys (byte-identical for identical
inputs); rationals are serialized as "num/den" strings.

Exit codes: 0 success, 1 verification failure, 2 unresolvable reference,
3 validation failure, 4 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

from . import catalog, counting, dirichlet, invariants, localfactors, selmer
from .abgroup import FiniteAbelianGroup, parse_abelian
from .errors import (NoAbelianWitness, ResolutionError, ResourceCapError,
                     ValidationError)
from .perm import PermGroup, Permutation
from .twist import TwistGroup

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_RESOLVE = 2
EXIT_VALIDATE = 3
EXIT_CAP = 4


def load_config(path: str | None) -> dict:
    """key=value config file merged with MALLE_-prefixed environment variables."""
    out: dict[str, str] = {}
    if path:
        if not os.path.exists(path):
            raise ResolutionError(f"config file not found: {path}")
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ValidationError(f"bad config line: {line!r}")
                key, val = line.split("=", 1)
                out[key.strip().lower()] = val.strip()
    for key, val in os.environ.items():
        if key.startswith("MALLE_"):
            out[key[len("MALLE_"):].lower()] = val
    return out


def emit(record: dict, path: str | None = None) -> None:
    text = json.dumps(record, sort_keys=True, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_group(ref: str) -> tuple:
    """Catalog name or JSON file path -> (entry or None, PermGroup)."""
    if os.path.exists(ref):
        with open(ref) as fh:
            return None, PermGroup.from_json(json.load(fh))
    try:
        entry = catalog.get(ref)
    except ResolutionError:
        raise ResolutionError(
            f"{ref!r} is neither a file nor a catalog group; "
            f"catalog: {catalog.names()}") from None
    return entry, entry.group


def _resolve_action(ref: str | None, entry, T: PermGroup,
                    subgroup_name: str | None) -> TwistGroup:
    if ref is None:
        ref = "trivial-pi-over-Q"
    if os.path.exists(ref):
        with open(ref) as fh:
            return TwistGroup.from_json(json.load(fh))
    if entry is None:
        raise ResolutionError("action presets need a catalog group")
    return entry.action(ref, subgroup_name)


def _resolve_abelian(ref: str) -> FiniteAbelianGroup:
    try:
        return parse_abelian(ref)
    except ValidationError:
        pass
    from .abgroup import abstract_type_of
    entry, G = _resolve_group(ref)
    T = entry.subgroup(None) if entry is not None else G
    return abstract_type_of(T)


# -- subcommands ---------------------------------------------------------------


def cmd_invariants(args, config) -> int:
    from .twist import units_mod

    entry, G = _resolve_group(args.group)
    T = entry.subgroup(args.subgroup) if entry is not None else G
    gamma = _resolve_action(args.action, entry, T, args.subgroup)
    rep = invariants.b_twisted(T, gamma)
    record = rep.to_json()
    record["group"] = args.group
    record["action"] = args.action or "trivial-pi-over-Q"
    record["a_invariant"] = invariants.a_invariant(T)
    if not args.skip_turkelli:
        record["B"] = invariants.turkelli_B(G, T, gamma)
        if gamma.unit_projection() != frozenset(units_mod(gamma.exponent)):
            record["note"] = ("modified invariant computed over a restricted "
                              "cyclotomic image; no verified reference values")
    record["b_malle"] = invariants.b_malle(G)
    emit(record, args.json)
    return EXIT_OK


def cmd_local_factor(args, config) -> int:
    entry, G = _resolve_group(args.group)
    T = entry.subgroup(args.subgroup) if entry is not None else G
    cls = localfactors.LocalClass(
        Permutation.from_cycles(args.conjugator, T.degree), args.unit)
    emit(localfactors.factor_record(T, cls, args.ordering), args.json)
    return EXIT_OK


def _family_from_args(args) -> dirichlet.FrobenianFamily:
    if args.family:
        if not os.path.exists(args.family):
            raise ResolutionError(f"family file not found: {args.family}")
        with open(args.family) as fh:
            return dirichlet.FrobenianFamily.from_json(json.load(fh))
    entry, G = _resolve_group(args.group)
    T = entry.subgroup(args.subgroup) if entry is not None else G
    gamma = _resolve_action(args.action, entry, T, args.subgroup)
    return dirichlet.family_from_action(T, gamma, args.ordering)


def cmd_euler(args, config) -> int:
    fam = _family_from_args(args)
    P = int(float(args.prime_bound if args.prime_bound is not None
                  else config.get("prime_bound", "100000")))
    pole = dirichlet.aq_bq(fam)
    record = {"a": pole.a, "b": dirichlet._rat(pole.b)}
    if args.s is not None:
        record["s"] = args.s
        record["partial_product"] = dirichlet.euler_partial_product(
            fam, args.s, P, args.assignment)
        record["G_estimate"] = dirichlet.zeta_factor_estimate(
            fam, args.s, P, args.assignment)
    if pole.a is not None:
        g = dirichlet.g_at_pole(fam, P, args.assignment)
        record["G_at_pole"] = g
        record["prediction"] = dirichlet.delange_predict(
            pole.a, pole.b, g, residue=1.0).to_json()
    emit(record, args.json)
    return EXIT_OK


def cmd_count(args, config) -> int:
    A = _resolve_abelian(args.group)
    X = int(float(args.X))
    grid = None
    if args.grid_from:
        lo = int(float(args.grid_from))
        ppd = args.points_per_decade if args.points_per_decade is not None \
            else int(config.get("points_per_decade", "4"))
        n = max(int(math.log10(max(X / lo, 10)) * ppd), 8)
        grid = sorted({int(round(lo * (X / lo) ** (i / n))) for i in range(n + 1)})
    series = counting.count(A, args.ordering, X,
                            surjective_only=args.surjective,
                            fields=args.fields, grid=grid)
    record = series.to_json()
    if args.log:
        with open(args.log, "a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    # side-by-side prediction from the invariant machinery
    T = A.regular_representation()
    from .twist import trivial_conjugator_action
    gamma = trivial_conjugator_action(T.degree, T.exponent())
    rep = invariants.b_twisted(T, gamma)
    if args.ordering == "disc":
        record["predicted"] = {"a": rep.a, "b": rep.b}
    else:
        nonid = [t for t in T.sorted_elements() if not t.is_identity()]
        from .twist import orbits
        record["predicted"] = {"a": 1, "b": len(orbits(gamma, nonid))}
    emit(record, args.json)
    if args.svg:
        _write_svg(series, args.svg)
    return EXIT_OK


def cmd_mobius(args, config) -> int:
    A = FiniteAbelianGroup([args.order])
    nodes = selmer.cyclic_subgroups(A)
    table = []
    mismatches = 0
    for lo in nodes:
        for hi in nodes:
            closed = selmer.mobius(lo, hi)
            row = {"lower_order": lo.order, "upper_order": hi.order,
                   "mobius": closed}
            if args.check:
                rec = selmer.mobius_recursive(lo, hi, nodes)
                row["recursive"] = rec
                if rec != closed:
                    mismatches += 1
            table.append(row)
    emit({"order": args.order, "pairs": table, "mismatches": mismatches},
         args.json)
    return EXIT_VERIFY if mismatches else EXIT_OK


def cmd_wiles_eval(args, config) -> int:
    if not os.path.exists(args.file):
        raise ResolutionError(f"input file not found: {args.file}")
    with open(args.file) as fh:
        record = json.load(fh)
    try:
        ratio = selmer.wiles_rhs(record.get("locals", []),
                                 record["global_H0_T"],
                                 record["global_H0_Tstar"])
    except KeyError as exc:
        raise ValidationError(f"missing field {exc}") from exc
    emit({"ratio": f"{ratio.numerator}/{ratio.denominator}",
          "ratio_float": float(ratio)}, args.json)
    return EXIT_OK


# -- verify suites ----------------------------------------------------------------


def _verify_mblocal(filter_name, lines) -> int:
    from .twist import burnside_orbit_count
    failures = 0
    cases = [c for c in catalog.twist_cases()
             if filter_name in (None, c[0].name)]
    for entry, sub_name, T, preset, gamma in cases:
        fam = dirichlet.family_from_action(T, gamma, "disc_pi")
        pole = dirichlet.aq_bq(fam)
        rep = invariants.b_twisted(T, gamma)
        burn = burnside_orbit_count(gamma, invariants.minimal_index_set(T))
        ok = (pole.a == rep.a and pole.b == Fraction(rep.b)
              and burn == rep.b)
        failures += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} mblocal {entry.name}/{sub_name}"
                     f"/{preset}: pole=({pole.a},{pole.b}) invariants=({rep.a},{rep.b})")
    return failures


def _verify_mobius(filter_name, lines) -> int:
    failures = 0
    for n in range(2, 61):
        A = FiniteAbelianGroup([n])
        nodes = selmer.cyclic_subgroups(A)
        bad = 0
        for lo in nodes:
            for hi in nodes:
                if selmer.mobius(lo, hi) != selmer.mobius_recursive(lo, hi, nodes):
                    bad += 1
        failures += bad
        if bad:
            lines.append(f"FAIL mobius order {n}: {bad} mismatches")
    lines.append(f"{'FAIL' if failures else 'PASS'} mobius orders 2..60")
    return failures


def _verify_burnside(filter_name, lines) -> int:
    from .twist import burnside_orbit_count, orbits
    failures = 0
    cases = [c for c in catalog.twist_cases()
             if filter_name in (None, c[0].name)]
    for entry, sub_name, T, preset, gamma in cases:
        els = T.sorted_elements()
        avg = burnside_orbit_count(gamma, els)
        norb = len(orbits(gamma, els))
        ok = avg == norb
        failures += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} burnside {entry.name}/{sub_name}"
                     f"/{preset}: average={avg} orbits={norb}")
    return failures


def _verify_sieve(filter_name, lines) -> int:
    failures = 0
    specs = ["C4", "C3x3"]
    if filter_name:
        specs = [s for s in specs if s == filter_name]
    for spec in specs:
        A = parse_abelian(spec)
        limit = 2000 if A.order <= 4 else 600
        hist = counting.brute_histogram(A, "disc", limit, surjective_only=True)
        grid = list(range(2, limit + 1, max(limit // 64, 1))) + [limit]
        series = counting.count(A, "disc", limit, surjective_only=True, grid=grid)
        bad = sum(1 for X, got in zip(series.grid, series.counts)
                  if got != sum(c for v, c in hist.items() if v < X))
        failures += bad
        lines.append(f"{'PASS' if not bad else 'FAIL'} sieve {spec}: "
                     f"{len(series.grid)} boundaries compared")
    return failures


VERIFY_SUITES = {
    "mblocal": _verify_mblocal,
    "mobius": _verify_mobius,
    "burnside": _verify_burnside,
    "sieve": _verify_sieve,
}


def cmd_verify(args, config) -> int:
    names = list(VERIFY_SUITES) if args.suite == "all" else [args.suite]
    lines: list[str] = []
    failures = 0
    ran = 0
    for name in names:
        n = VERIFY_SUITES[name](args.filter, lines)
        failures += n
        ran += 1
    for line in lines:
        print(line)
    if args.filter and not any(args.filter in line for line in lines):
        print(f"WARNING: filter {args.filter!r} matched no cases; vacuous pass")
    print(f"{'FAIL' if failures else 'PASS'}: {ran} suite(s), "
          f"{failures} failing case(s)")
    return EXIT_VERIFY if failures else EXIT_OK


# -- svg ----------------------------------------------------------------------------


def _write_svg(series: counting.CountSeries, path: str) -> None:
    """Flat log-log scatter of the series with its fitted line, if any."""
    pts = [(math.log10(x), math.log10(c))
           for x, c in zip(series.grid, series.counts) if c > 0 and x > 1]
    if not pts:
        raise ValidationError("nothing to plot")
    w, h, pad = 480, 320, 40
    xs, ys = zip(*pts)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    sx = lambda x: pad + (x - x0) / max(x1 - x0, 1e-9) * (w - 2 * pad)
    sy = lambda y: h - pad - (y - y0) / max(y1 - y0, 1e-9) * (h - 2 * pad)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">',
             f'<rect width="{w}" height="{h}" fill="white"/>',
             f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="black"/>',
             f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="black"/>']
    for x, y in pts:
        parts.append(f'<circle cx="{sx(x):.1f}" cy="{sy(y):.1f}" r="3" fill="steelblue"/>')
    if series.a_hat:
        # fitted model anchored at the last point
        ln10 = math.log(10)
        def fit_log10(x):
            L = x * ln10
            return ((1.0 / series.a_hat) * L
                    + (series.b_hat - 1.0) * math.log(L)) / ln10
        anchor = ys[-1] - fit_log10(x1)
        parts.append(
            f'<line x1="{sx(x0):.1f}" y1="{sy(fit_log10(x0) + anchor):.1f}" '
            f'x2="{sx(x1):.1f}" y2="{sy(fit_log10(x1) + anchor):.1f}" '
            f'stroke="firebrick"/>')
    parts.append(f'<text x="{pad}" y="{pad - 10}" font-size="12">'
                 f'log10 N(X) vs log10 X [{series.ordering}]</text>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


# -- entry point --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="malle",
        description="Counting invariants, local Euler factors, and empirical "
                    "abelian field counts over Q")
    top.add_argument("--config", help="key=value config file (env MALLE_* overrides)")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="a, twisted b, modified B for a group/action")
    p.add_argument("--group", required=True, help="catalog name or group JSON file")
    p.add_argument("--subgroup", help="named normal subgroup (default per catalog)")
    p.add_argument("--action", help="preset name or action JSON file")
    p.add_argument("--skip-turkelli", action="store_true")
    p.add_argument("--json", help="write output here instead of stdout")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("local-factor", help="Euler factor polynomial of one class")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup")
    p.add_argument("--conjugator", default="e", help="cycle notation")
    p.add_argument("--unit", type=int, default=1)
    p.add_argument("--ordering", choices=localfactors.ORDERINGS, default="disc_pi")
    p.add_argument("--json")
    p.set_defaults(func=cmd_local_factor)

    p = sub.add_parser("euler", help="pole data and residual estimates of a family")
    p.add_argument("--family", help="family JSON file")
    p.add_argument("--group", help="catalog group (alternative to --family)")
    p.add_argument("--subgroup")
    p.add_argument("--action")
    p.add_argument("--ordering", choices=localfactors.ORDERINGS, default="disc_pi")
    p.add_argument("--s", type=float, help="evaluate right of the pole")
    p.add_argument("--prime-bound", default=None)
    p.add_argument("--assignment", default="all", help='"all" or "mod-e"')
    p.add_argument("--json")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("count", help="empirical hom counts over Q")
    p.add_argument("--group", required=True, help="abelian spec (C4, C3x3) or catalog name")
    p.add_argument("--ordering", choices=counting.ORDERINGS, default="disc")
    p.add_argument("--X", required=True)
    p.add_argument("--surjective", action="store_true")
    p.add_argument("--fields", action="store_true",
                   help="divide surjective counts by |Aut|")
    p.add_argument("--grid-from", help="lowest grid boundary (default automatic)")
    p.add_argument("--points-per-decade", type=int, default=None)
    p.add_argument("--json")
    p.add_argument("--svg", help="write a flat log-log plot")
    p.add_argument("--log", help="append the JSON record to this results log")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("mobius", help="cyclic-poset Mobius table")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--check", action="store_true",
                   help="compare against the recursive definition")
    p.add_argument("--json")
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("wiles-eval", help="evaluate the product formula from JSON")
    p.add_argument("--file", required=True)
    p.add_argument("--json")
    p.set_defaults(func=cmd_wiles_eval)

    p = sub.add_parser("verify", help="run cross-module verification suites")
    p.add_argument("suite", choices=list(VERIFY_SUITES) + ["all"])
    p.add_argument("--filter", help="restrict to one catalog group / target")
    p.set_defaults(func=cmd_verify)

    return top


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except ResolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOLVE
    except (ValidationError, NoAbelianWitness) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATE
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())

"""Command-line surface.

Exit codes: 0 on success, 1 on user error (bad files, bad formulas, caps),
2 on internal inconsistency (a theorem-checker violation).
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .density import (
    CheckReport,
    DensityValue,
    ExactRational,
    LimitDescribed,
    check_theorems,
    density_rel,
    estimate_density,
    exact_density,
)
from .eqlogic import parse
from .errors import SpecdensError
from .properties import PROPERTY_KEYS, Judgment, PropertyVector, Verdict
from .spectrum import count_upto, member
from .theory import (
    Theory,
    classify,
    decide_sat,
    load_theory_file,
    minmod,
    spec_rel,
    witness,
)
from .zoo import EXTRA_ROW_CONSTRUCTIONS, reproduce_table1, zoo_theory

ZOO_PREFIX = "zoo:"


def _load(spec: str) -> Theory:
    if spec.startswith(ZOO_PREFIX):
        return zoo_theory(spec[len(ZOO_PREFIX):])
    return load_theory_file(spec)


def _fmt_density(d: DensityValue) -> str:
    if isinstance(d, ExactRational):
        return f"{d.value} (exact)"
    if isinstance(d, LimitDescribed):
        tag = {True: "declared computable", False: "declared non-computable",
               None: "computability undeclared"}[d.declared_computable]
        return f"approx {float(d.best):.6f} = {d.best} at the last block ({tag})"
    return str(d)


def _print_check(report: CheckReport, out) -> None:
    for notice in report.notices:
        print(f"note: {notice}", file=out)
    if report.ok:
        print("theorem check: no violations", file=out)
    else:
        print("theorem check: VIOLATIONS", file=out)
        for v in report.violations:
            print(f"  {v}", file=out)


def _cmd_spec(args, out) -> int:
    theory = _load(args.theory)
    count = 0
    for k in range(1, args.upto + 1):
        if member(theory.spectrum, k):
            print(k, file=out)
            count += 1
    print(f"count {count}", file=out)
    return 0


def _cmd_density(args, out) -> int:
    theory = _load(args.theory)
    print(f"density: {_fmt_density(exact_density(theory.spectrum))}", file=out)
    if args.estimate is not None:
        report = estimate_density(theory.spectrum, args.estimate)
        for row in report.rows:
            print(
                f"n={row.n} count={row.count} ratio={row.ratio} "
                f"(approx {float(row.ratio):.6f})",
                file=out,
            )
        print(f"trend: {report.trend}", file=out)
        for note in report.notes:
            print(f"note: {note}", file=out)
        if args.csv:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                report.to_csv(fh)
            print(f"wrote {args.csv}", file=out)
    elif args.csv:
        print("error: --csv requires --estimate", file=sys.stderr)
        return 1
    return 0


def _cmd_classify(args, out) -> int:
    theory = _load(args.theory)
    result = classify(theory)
    print(f"theory: {theory.name}", file=out)
    for key, judgment in result.vector.items():
        print(f"{key}: {judgment}", file=out)
    print(f"density: {_fmt_density(result.density)}", file=out)
    print(f"classification: {result.row_label}", file=out)
    _print_check(result.check, out)
    return 0 if result.check.ok else 2


def _cmd_formula(args, out) -> int:
    theory = _load(args.theory)
    f = parse(args.formula)
    if args.minmod:
        print(minmod(theory, f), file=out)
    elif args.sat:
        print("sat" if decide_sat(theory, f) else "unsat", file=out)
    elif args.specrel is not None:
        rel = spec_rel(theory, f)
        members = [str(k) for k in range(1, args.specrel + 1) if member(rel, k)]
        print(" ".join(members), file=out)
    elif args.witness:
        print(witness(theory, f), file=out)
    elif args.density:
        print(_fmt_density(density_rel(theory, f)), file=out)
    else:
        print("error: pick one of --minmod/--sat/--specrel/--witness/--density",
              file=sys.stderr)
        return 1
    return 0


def _cmd_table1(args, out) -> int:
    rows = None
    if args.rows:
        rows = tuple(int(r) for r in args.rows.split(","))
    report = reproduce_table1(rows)
    for comparison in report.rows:
        cells = []
        for cell in comparison.cells:
            mark = {"match": "ok", "wildcard": "ok(unknown)",
                    "anomaly": "ANOMALY", "mismatch": "MISMATCH"}[cell.outcome]
            cells.append(f"{cell.key}={mark}")
        extras = EXTRA_ROW_CONSTRUCTIONS.get(comparison.row, ())
        suffix = f" (also: {', '.join(extras)})" if extras else ""
        print(
            f"row {comparison.row} [{comparison.construction}]{suffix}: "
            + " ".join(cells)
            + f" density={comparison.density_outcome} ({comparison.density_shown})",
            file=out,
        )
    print(
        f"rows compared: {len(report.rows)}, matches: "
        f"{sum(1 for r in report.rows if r.ok)}, anomaly cells: {report.anomaly_count}",
        file=out,
    )
    if not report.all_ok:
        return 2
    if args.strict and report.anomaly_count:
        return 2
    return 0


def _parse_verdict(text: str) -> Verdict:
    try:
        return Verdict(text.strip().lower())
    except ValueError:
        raise SpecdensError(
            f"bad verdict {text!r}; use yes/no/unknown"
        ) from None


def _cmd_check(args, out) -> int:
    verdicts = {k: Verdict.UNKNOWN for k in PROPERTY_KEYS}
    for part in args.vector.split(","):
        if "=" not in part:
            raise SpecdensError(f"bad vector entry {part!r}; use KEY=yes|no|unknown")
        key, _, value = part.partition("=")
        key = key.strip().upper()
        if key not in verdicts:
            raise SpecdensError(f"unknown property {key!r}")
        verdicts[key] = _parse_verdict(value)
    pv = PropertyVector(
        **{k.lower(): Judgment(v, "supplied") for k, v in verdicts.items()}
    )
    if args.density.strip().lower() == "unknown":
        from .density import UNKNOWN_DENSITY

        density: DensityValue = UNKNOWN_DENSITY
    else:
        density = ExactRational(Fraction(args.density))
    report = check_theorems(pv, density)
    _print_check(report, out)
    return 0 if report.ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specdens",
        description="Spectra, natural densities, and combination properties "
        "of equality-only theories.  Theories are YAML files or zoo:NAME "
        "fixtures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spec", help="list spectrum members up to a bound")
    p.add_argument("theory")
    p.add_argument("--upto", type=int, required=True)

    p = sub.add_parser("density", help="exact density and optional estimates")
    p.add_argument("theory")
    p.add_argument("--estimate", type=int, default=None)
    p.add_argument("--csv", default=None)

    p = sub.add_parser("classify", help="property vector, density, row match")
    p.add_argument("theory")

    p = sub.add_parser("formula", help="per-formula questions against a theory")
    p.add_argument("theory")
    p.add_argument("formula")
    p.add_argument("--minmod", action="store_true")
    p.add_argument("--sat", action="store_true")
    p.add_argument("--specrel", type=int, default=None)
    p.add_argument("--witness", action="store_true")
    p.add_argument("--density", action="store_true")

    p = sub.add_parser("table1", help="replay the nine-row classification")
    p.add_argument("--strict", action="store_true",
                   help="fail on the documented anomaly cell too")
    p.add_argument("--rows", default=None, help="comma-separated row numbers")

    p = sub.add_parser("check", help="run the theorem checker on a supplied vector")
    p.add_argument("--vector", required=True,
                   help="e.g. SI=yes,SM=no,FW=unknown,SW=no,FMP=yes,CF=yes,G=no")
    p.add_argument("--density", required=True, help="p/q or 'unknown'")

    return parser


_HANDLERS = {
    "spec": _cmd_spec,
    "density": _cmd_density,
    "classify": _cmd_classify,
    "formula": _cmd_formula,
    "table1": _cmd_table1,
    "check": _cmd_check,
}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args, out)
    except (SpecdensError, OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface: ``gmepauli analyze | scan | repro | make-state | sample``.

Exit codes: 0 success, 2 unreadable or invalid state input, 3 bad arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import numpy as np

from . import sampling
from .criteria import Bipartition, Mode, PreconditionError, detect
from .io import InvalidStateError, StateFileError, read_state, write_csv, write_state
from .scan import Criterion, CriterionKind, emit_curve, evaluate, scan
from .zoo import FAMILIES, family

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ARGS = 3

REPRO_TARGETS = ("table1", "table2", "example3", "fig1", "fig2")
TABLE_COLUMNS = ("criterion", "alpha", "beta", "slope", "bound", "threshold")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ARGS, f"{self.prog}: error: {message}\n")


def _real(text: str) -> float:
    """Accept decimals and fractions such as ``1/10``."""
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None


def _dims(text: str) -> tuple[int, ...]:
    try:
        dims = tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be a comma list of integers: {text!r}") from None
    if any(d < 2 for d in dims):
        raise argparse.ArgumentTypeError("every dimension must be >= 2")
    return dims


def _fmt(value: float | None) -> str:
    return "-" if value is None else f"{value:.4f}"


def _emit(text: str, dest):
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8") as fh:
            fh.write(text)


def _criterion(args, n: int) -> Criterion:
    if args.criterion == "bipartition":
        if not args.partition:
            raise UsageError("--criterion bipartition needs --partition, e.g. --partition '2|1,3'")
        return Criterion(CriterionKind.BIPARTITION, Bipartition.parse(args.partition, n))
    if args.partition:
        raise UsageError("--partition is only meaningful with --criterion bipartition")
    return Criterion(CriterionKind(args.criterion))


# -- analyze -----------------------------------------------------------------


def render_report(report, label: str = "") -> str:
    kind = "K" if report.mode is Mode.GENERAL else "J"
    out = []
    if label:
        out.append(f"state: {label}")
    out.append(
        f"dims {report.dims}  alpha={report.alpha:g} beta={report.beta:g}  mode={report.mode.value}"
    )
    out.append(f"{'bipartition':<14}{'||N||_tr':>10}{'bound':>10}  entangled")
    for r in report.records:
        out.append(
            f"{str(r.bipartition):<14}{r.trace_norm:>10.4f}{r.bound:>10.4f}  {'yes' if r.violated else 'no'}"
        )
    out.append(f"T(rho) = {report.score:.4f}")
    out.append(f"{kind} = {report.threshold:.4f}")
    out.append(f"verdict: {report.verdict.value}")
    return "\n".join(out) + "\n"


def cmd_analyze(args) -> int:
    sf = read_state(args.state)
    report = detect(sf.state, args.alpha, args.beta, Mode(args.mode))
    sys.stdout.write(render_report(report, label=str(args.state)))
    if args.json:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.json)
    return EXIT_OK


# -- scan --------------------------------------------------------------------


def _family_from_args(args):
    if args.family == "custom":
        if not args.state:
            raise UsageError("the custom family needs --state PATH")
        return family("custom", read_state(args.state).state)
    if args.state:
        raise UsageError("--state is only used with the custom family")
    try:
        return family(args.family)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_scan(args) -> int:
    fam = _family_from_args(args)
    crit = _criterion(args, len(fam.dims))
    result = scan(fam, args.alpha, args.beta, crit, tol=args.tol, grid=args.grid)
    print(f"family {result.family}  alpha={args.alpha:g} beta={args.beta:g}  criterion {crit}")
    print(f"bound = {result.bound:.4f}")
    if not result.monotone:
        print("gap is not monotone in x; sign changes at " + ", ".join(_fmt(x) for x in result.crossings))
    if result.threshold_x is None:
        print("not detected for any x in [0, 1]")
    else:
        print(f"threshold x* = {result.threshold_x:.4f}  (detected for {result.threshold_x:.4f} < x <= 1)")
    if args.csv:
        rows = [{"x": x, "score": s, "bound": b, "gap": s - b} for x, s, b in result.samples]
        _emit(write_csv(rows, ["x", "score", "bound", "gap"]), args.csv)
    return EXIT_OK


# -- repro -------------------------------------------------------------------


def _table_row(fam, alpha, beta, crit, tol):
    res = scan(fam, alpha, beta, crit, tol=tol)
    s1, bound = evaluate(fam.state_at(1.0), alpha, beta, crit)
    s0, _ = evaluate(fam.state_at(0.0), alpha, beta, crit)
    return {
        "criterion": str(crit),
        "alpha": alpha,
        "beta": beta,
        "slope": s1 - s0,
        "bound": bound,
        "threshold": res.threshold_x,
    }


def repro_rows(target: str, tol: float = 1e-6, grid: int = 101) -> tuple[list[dict], list[str]]:
    """Rows and column names for one reproduction target."""
    if target == "table1":
        fam = family("w3_noise")
        crit = Criterion(CriterionKind.GME_GENERAL)
        rows = [_table_row(fam, a, b, crit, tol) for a, b in ((1, 1), (0.5, 2), (0.1, 2))]
        return rows, list(TABLE_COLUMNS)
    if target == "table2":
        fam = family("example2_noise")
        crit = Criterion(CriterionKind.BIPARTITION, Bipartition.parse("2|1,3", 3))
        rows = [_table_row(fam, a, b, crit, tol) for a, b in ((1, 1), (0.5, 2), (0, 1))]
        rows.append(_table_row(fam, 1, 1, Criterion(CriterionKind.GME_GENERAL), tol))
        return rows, list(TABLE_COLUMNS)
    if target == "example3":
        fam = family("ghz4_noise")
        crits = [
            Criterion(CriterionKind.BIPARTITION, Bipartition.parse("1|2,3,4", 4)),
            Criterion(CriterionKind.GME_PERM_INVARIANT),
            Criterion(CriterionKind.GME_GENERAL),
        ]
        return [_table_row(fam, 1, 1, c, tol) for c in crits], list(TABLE_COLUMNS)
    if target == "fig1":
        fam = family("w3_noise")
        curve = emit_curve(fam, 0.1, 2, Criterion(CriterionKind.GME_GENERAL), grid=grid)
        rows = [{"x": r["x"], "f1": r["gap"], "g1": r["g1"], "g2": r["g2"]} for r in curve]
        return rows, ["x", "f1", "g1", "g2"]
    if target == "fig2":
        fam = family("ghz4_noise")
        crit = Criterion(CriterionKind.BIPARTITION, Bipartition.parse("1|2,3,4", 4))
        curve = emit_curve(fam, 1, 1, crit, grid=grid)
        rows = [{"x": r["x"], "f3": r["gap"], "g3": r["g3"]} for r in curve]
        return rows, ["x", "f3", "g3"]
    raise UsageError(f"unknown target {target!r}; expected one of {', '.join(REPRO_TARGETS)}")


def cmd_repro(args) -> int:
    rows, columns = repro_rows(args.target, tol=args.tol, grid=args.grid)
    text = write_csv(rows, columns)
    _emit(text, args.csv)
    return EXIT_OK


# -- state files ---------------------------------------------------------------


def cmd_make_state(args) -> int:
    try:
        fam = family(args.family)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not 0 <= args.x <= 1:
        raise UsageError(f"--x must lie in [0, 1], got {args.x}")
    state = fam.state_at(args.x)
    write_state(args.output, state, {"name": f"{args.family}(x={args.x!r})", "source": "gmepauli make-state"})
    return EXIT_OK


def cmd_sample(args) -> int:
    rng = np.random.default_rng(args.seed)
    dims = args.dims
    if args.kind == "pure":
        state = sampling.random_pure(dims, rng)
    elif args.kind == "mixed":
        state = sampling.random_mixed(dims, rng)
    else:
        if not args.partition:
            raise UsageError("--kind separable needs --partition")
        bp = Bipartition.parse(args.partition, len(dims))
        state = sampling.random_product_mixture(dims, bp.left, rng)
    meta = {"name": f"{args.kind} sample", "source": f"gmepauli sample --seed {args.seed}"}
    write_state(args.output, state, meta)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gmepauli", description="Genuine multipartite entanglement tests from generalized Pauli correlation tensors.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run the criteria on a state file")
    a.add_argument("state", help="state file (JSON)")
    a.add_argument("--alpha", type=_real, required=True)
    a.add_argument("--beta", type=_real, required=True)
    a.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.GENERAL.value)
    a.add_argument("--json", metavar="PATH", help="also write the report as JSON ('-' for stdout)")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("scan", help="find the detection threshold along a noise family")
    s.add_argument("family", help=f"one of {', '.join(list(FAMILIES) + ['custom'])}")
    s.add_argument("--state", help="base state file for the custom family")
    s.add_argument("--alpha", type=_real, required=True)
    s.add_argument("--beta", type=_real, required=True)
    s.add_argument("--criterion", choices=[k.value for k in CriterionKind], default=CriterionKind.GME_GENERAL.value)
    s.add_argument("--partition", help="bipartition as comma lists, e.g. '1,3|2,4'")
    s.add_argument("--tol", type=float, default=1e-6)
    s.add_argument("--grid", type=int, default=101)
    s.add_argument("--csv", metavar="PATH", help="write the sample grid as CSV ('-' for stdout)")
    s.set_defaults(func=cmd_scan)

    r = sub.add_parser("repro", help="emit the data behind a published table or figure as CSV")
    r.add_argument("target", choices=REPRO_TARGETS)
    r.add_argument("--tol", type=float, default=1e-6)
    r.add_argument("--grid", type=int, default=101)
    r.add_argument("--csv", metavar="PATH", help="output path (default stdout)")
    r.set_defaults(func=cmd_repro)

    m = sub.add_parser("make-state", help="write a member of a named family to a state file")
    m.add_argument("family", choices=list(FAMILIES))
    m.add_argument("--x", type=_real, default=1.0)
    m.add_argument("-o", "--output", required=True)
    m.set_defaults(func=cmd_make_state)

    r = sub.add_parser("sample", help="write a seeded random state to a state file")
    r.add_argument("--dims", type=_dims, required=True)
    r.add_argument("--kind", choices=["pure", "mixed", "separable"], default="pure")
    r.add_argument("--partition", help="split for --kind separable, e.g. '1|2,3'")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(func=cmd_sample)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0:
        parser.error("--tol must be positive")
    if getattr(args, "grid", 2) < 2:
        parser.error("--grid must be at least 2")
    try:
        return args.func(args)
    except (StateFileError, InvalidStateError) as exc:
        print(f"gmepauli: invalid state input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"gmepauli: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (UsageError, ValueError) as exc:
        print(f"gmepauli: {exc}", file=sys.stderr)
        return EXIT_ARGS


if __name__ == "__main__":
    sys.exit(main())

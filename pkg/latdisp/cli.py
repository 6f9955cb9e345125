"""
latdisp command line.

Every subcommand produces rows of exact values; the emitter renders each
exact number next to a decimal rounding (`--digits`). Domain errors exit
with status 1, usage errors with status 2.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import logging
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import config
from .core import boxwalk, dispersion, oracle, torus
from .core.contfrac import cf_expand, conjugate_expansion_identity
from .core.qfield import CertifiedInterval, QuadraticNumber, format_decimal
from .utils import file_handler
from .utils.errors import InvalidArgument, LatdispError
from .utils.parsing import parse_number, parse_quadratic, parse_rank_one, parse_sequence

logger = logging.getLogger(__name__)

BOUND_TABLE_FILE = "bound_table.json"


def _int_list(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


# -- handlers ------------------------------------------------------------------------
# Each handler returns (rows, status); status 1 reports a failed check.


def cmd_cf(args):
    parsed = parse_number(args.value)
    if parsed.kind == "sequence":
        seq = parsed.value
        row = {"sequence": str(seq), "kind": seq.kind.value}
        return [row], 0
    if parsed.kind != "number":
        raise InvalidArgument("cf expects a number or a sequence literal")
    x = parsed.value
    seq = cf_expand(x)
    row = {"value": x, "expansion": str(seq), "preperiod": len(seq.right_preperiod),
           "period": len(seq.right_period)}
    if seq.is_purely_periodic:
        row["conjugate_expansion"] = conjugate_expansion_identity(x)
    return [row], 0


def cmd_disp_seq(args):
    seq = parse_sequence(args.sequence)
    result = dispersion.disp_sequence(seq)
    witness = result.witness or (None, None)
    return [{
        "sequence": str(seq),
        "dispersion": result.value,
        "infinite": result.infinite,
        "attained": result.attained,
        "witness_i": witness[0],
        "witness_j": witness[1],
    }], 0


def cmd_disp_ring(args):
    spec = dispersion.SubringSpec(args.d, args.n)
    res = dispersion.disp_quadratic(spec)
    row = {"d": spec.d, "n": spec.n, "disc": spec.disc, "det": spec.det, "dispersion": res.value,
           "normalized": res.normalized}
    if args.walk:
        lattice = boxwalk.normal_form(boxwalk.ring_lattice(spec.d, spec.n))
        row["normalized_walk"] = dispersion.disp_lattice(lattice).value
    return [row], 0


def cmd_bounds(args):
    rows = []
    for a in args.a:
        lower, upper = dispersion.coefficient_bounds(a)
        rows.append({"a": a, "L": lower, "U": upper})
    return rows, 0


def cmd_tight_bounds(args):
    rows = []
    for a in args.a:
        lo, hi = dispersion.tight_bounds(a)
        rows.append({"a": a, "disp_periodic": lo, "disp_tail": hi})
    return rows, 0


def cmd_best(args):
    rows = []
    for rank in range(1, args.rank + 1):
        seq, value = dispersion.best_lattice(rank)
        rows.append({"rank": rank, "period": ",".join(map(str, seq.right_period)), "dispersion": value})
    return rows, 0


def cmd_bound_table(args):
    rows = dispersion.bound_table(args.a or dispersion.BOUND_TABLE_COEFFICIENTS)
    out = [row.cells() for row in rows]
    if not args.check:
        return out, 0
    mismatches = dispersion.bound_table_check(rows, file_handler.load_json(BOUND_TABLE_FILE))
    for a, column, printed, computed in mismatches:
        logger.warning("bound table mismatch a=%d %s: printed %s, computed %s", a, column, printed, computed)
    return out, 1 if mismatches else 0


def cmd_fib(args):
    lattice, profile = torus.fibonacci_lattice(args.m)
    result = torus.periodic_dispersion(lattice)
    logger.info("Fibonacci lattice (%d, %d): periodic dispersion %s", lattice.p, lattice.n, result.value)
    return [{"m": args.m, "p": lattice.p, "n": lattice.n, "k": k, "normalized_volume": v}
            for k, v in enumerate(profile)], 0


def _rank_one(args) -> torus.RankOneLattice:
    if args.lattice:
        return torus.RankOneLattice(*parse_rank_one(args.lattice))
    if args.p is None or args.n is None:
        raise InvalidArgument("give rank1(p,n) or both --p and --n")
    return torus.RankOneLattice(args.p, args.n)


def cmd_rank1(args):
    lattice = _rank_one(args)
    result = torus.periodic_dispersion(lattice)
    row = {"p": lattice.p, "n": lattice.n, "expansion": ",".join(map(str, lattice.expansion())),
           "dispersion": result.value, "normalized": result.normalized, "strip": result.strip}
    status = 0
    if args.oracle:
        value, _ = oracle.brute_periodic_dispersion(lattice)
        row["oracle"] = value
        if value != result.value:
            logger.warning("oracle disagrees: %s != %s", value, result.value)
            status = 1
    return [row], status


def cmd_zaremba(args):
    rows = torus.zaremba_scan(range(args.start, args.stop + 1), args.bound, workers=args.workers)
    constant = torus.zaremba_constant(args.bound)
    flagged = [row.n for row in rows if row.flagged]
    logger.info("C(%d) = %s; %d flagged", args.bound, constant, len(flagged))
    out = [{"n": row.n, "p": row.p, "reflection": row.reflection, "m": row.max_coefficient,
            "normalized": row.normalized, "below_C": row.normalized < constant,
            "flagged": row.flagged} for row in rows]
    return out, 0


def cmd_oracle(args):
    if args.rank1:
        lattice = torus.RankOneLattice(*parse_rank_one(args.rank1))
        value, box = oracle.brute_periodic_dispersion(lattice)
        return [{"p": lattice.p, "n": lattice.n, "dispersion": value, "normalized": value * lattice.n,
                 "y0": box.y0, "height": box.height, "x0": box.x0, "width": box.width}], 0
    try:
        with open(args.points, "r", encoding="utf-8") as f:
            points = oracle.PointSet.of(file_handler.read_points_csv(f))
    except OSError as exc:
        raise InvalidArgument(f"cannot read {args.points}: {exc.strerror}") from exc
    region = None
    if args.region:
        x0, x1, y0, y1 = (parse_quadratic(part) for part in args.region.split(","))
        region = oracle.Region(x0, x1, y0, y1)
    area, box = oracle.brute_dispersion(points, region)
    return [{"points": len(points), "dispersion": area, "normalized": area * len(points),
             "x0": box.x0, "x1": box.x1, "y0": box.y0, "y1": box.y1}], 0


def cmd_boxes(args):
    if args.ring:
        d, n = args.ring
        lattice = boxwalk.normal_form(boxwalk.ring_lattice(d, n))
    else:
        if args.delta is None:
            raise InvalidArgument("give --delta (and optionally --delta-tilde) or --ring D N")
        dl = parse_quadratic(args.delta)
        dt = parse_quadratic(args.delta_tilde) if args.delta_tilde else dl.conjugate()
        lattice = boxwalk.LatticeNormalForm(dl, dt, torus=args.torus)
    boxes = boxwalk.enumerate_boxes(lattice, args.start, args.stop)
    return boxwalk.box_table(boxes, lattice), 0


def cmd_norm_figure(args):
    x = parse_quadratic(args.delta)
    return [{"n": n, "norms": v} for n, v in dispersion.norm_figure(x, args.max_n)], 0


def cmd_coeff_scan(args):
    if args.delta:
        report = dispersion.coefficient_bound_check(parse_quadratic(args.delta))
        rows = [{"i": row.i, "a": row.a, "norm": row.norm, "lower": row.lower, "upper": row.upper, "ok": row.ok}
                for row in report.norms]
        logger.info("a_0=%d interior max=%s bound=%d passed=%s", report.a0, report.interior_max, report.bound,
                    report.passed)
        return rows, 0 if report.passed else 1
    rows = dispersion.coefficient_statistics_scan(args.trace_max, range(1, args.norm_max + 1))
    out = [{"delta": row.delta, "trace": row.trace, "norm": row.norm, "period_length": len(row.period),
            "coefficients": " ".join(map(str, row.coefficients)), "ratio": row.ratio,
            "consistent": row.consistent} for row in rows]
    return out, 0 if all(row.consistent for row in rows) else 1


# -- output --------------------------------------------------------------------------


def _pretty_cell(value, digits: int) -> str:
    if isinstance(value, (QuadraticNumber, CertifiedInterval, Fraction)):
        exact = file_handler.exact_text(value)
        decimal = format_decimal(value, digits)
        return decimal if exact == decimal else f"{decimal} ({exact})"
    return "" if value is None else str(value)


def write_pretty(rows, stream, digits: int) -> None:
    if not rows:
        return
    headers = list(rows[0].keys())
    table = [[_pretty_cell(row.get(h), digits) for h in headers] for row in rows]
    widths = [max(len(h), *(len(r[k]) for r in table)) for k, h in enumerate(headers)]
    stream.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    for r in table:
        stream.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


def emit(rows, fmt: str, stream, digits: int) -> None:
    if fmt == "csv":
        file_handler.write_csv(rows, stream, digits)
    elif fmt == "json":
        file_handler.write_json(rows, stream, digits)
    else:
        write_pretty(rows, stream, digits)


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="latdisp", description="Exact dispersion of planar lattices")
    parser.add_argument("--format", choices=("csv", "json", "pretty"), default="pretty")
    parser.add_argument("--digits", type=int, default=config.DEFAULT_DIGITS)
    parser.add_argument("--out", help="write output to FILE instead of stdout")
    parser.add_argument("--log-level", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Callable, help_text: str, aliases=()) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, aliases=list(aliases))
        p.set_defaults(handler=handler)
        return p

    p = add("cf", cmd_cf, "continued fraction expansion of a number")
    p.add_argument("value")

    p = add("disp-seq", cmd_disp_seq, "dispersion of a coefficient sequence")
    p.add_argument("sequence")

    p = add("disp-ring", cmd_disp_ring, "dispersion of the lattice of Z[n delta_d]")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--walk", action="store_true", help="also compute through the box walk")

    p = add("bounds", cmd_bounds, "coefficient bounds L(a) and U(a)")
    p.add_argument("--a", type=_int_list, required=True)

    p = add("tight-bounds", cmd_tight_bounds, "dispersion of the periods (a) and (a, 1)")
    p.add_argument("--a", type=_int_list, required=True)

    p = add("best", cmd_best, "lattices with the smallest normalized dispersion")
    p.add_argument("--rank", type=int, default=5)

    p = add("bound-table", cmd_bound_table, "bounds and tight bounds for selected coefficients", aliases=("table1",))
    p.add_argument("--a", type=_int_list, default=None)
    p.add_argument("--check", action="store_true", help="compare with the printed reference values")

    p = add("fib", cmd_fib, "Fibonacci lattice box profile")
    p.add_argument("--m", type=int, required=True)

    p = add("rank1", cmd_rank1, "periodic dispersion of a rank-1 lattice")
    p.add_argument("lattice", nargs="?", help="rank1(p,n)")
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--oracle", action="store_true", help="cross-check with the brute-force oracle")

    p = add("zaremba", cmd_zaremba, "smallest maximal coefficient over p / n")
    p.add_argument("--start", type=int, default=2)
    p.add_argument("--stop", type=int, required=True)
    p.add_argument("--bound", type=int, default=5)
    p.add_argument("--workers", type=int, default=None)

    p = add("oracle", cmd_oracle, "brute-force dispersion of a point set or rank-1 lattice")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--points", help="CSV file of exact x,y coordinates")
    group.add_argument("--rank1", help="rank1(p,n)")
    p.add_argument("--region", help="x0,x1,y0,y1 (default: unit square)")

    p = add("boxes", cmd_boxes, "maximal empty boxes bounded by the origin")
    p.add_argument("--delta")
    p.add_argument("--delta-tilde")
    p.add_argument("--ring", type=int, nargs=2, metavar=("D", "N"))
    p.add_argument("--torus", action="store_true")
    p.add_argument("--start", type=int, default=-5)
    p.add_argument("--stop", type=int, default=5)

    p = add("norm-figure", cmd_norm_figure, "series n -> |N(alpha_n)| + |N(beta_n)|")
    p.add_argument("--delta", required=True)
    p.add_argument("--max-n", type=int, default=None)

    p = add("coeff-scan", cmd_coeff_scan, "coefficient statistics of purely periodic quadratic integers")
    p.add_argument("--delta", help="check a single generator instead of scanning")
    p.add_argument("--trace-max", type=int, default=10)
    p.add_argument("--norm-max", type=int, default=10)
    return parser


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config.configure_logging(args.log_level)
    try:
        rows, status = args.handler(args)
    except LatdispError as exc:
        print(f"latdisp {args.command}: {exc}", file=stderr)
        return 1
    buffer = io.StringIO()
    emit(rows, args.format, buffer, args.digits)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8", newline="") as f:
                f.write(buffer.getvalue())
        except OSError as exc:
            print(f"latdisp {args.command}: cannot write {args.out}: {exc.strerror}", file=stderr)
            return 1
    else:
        stdout.write(buffer.getvalue())
    return status


def main() -> None:
    sys.exit(run())

"""Command-line front end.

Data records go to stdout as JSON lines (or CSV with ``--format csv``);
diagnostics go to stderr.  Exit status: 0 success, 1 some check failed,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from podq import congruence as cg
from podq import enumeration as en
from podq import pseries as ps
from podq import qproducts as qp

TARGETS = {
    "pod2": qp.POD2_PRODUCT,
    "pod1": qp.POD_PRODUCT,
    "psi": None,
    "phi": None,
    "A": qp.A_PRODUCT,
}

EPILOG = """\
commands:
  expand  --target pod2|pod1|psi|phi|A --order N [--mod M] [--dissect M R]
  expand  --product "(-q;q^2)^2 * (q^2;q^2)^-2" --order N [--mod M]
  oracle  --n K --stat b|c|d
  verify  --suite all --order N | --identity NAME --order N
  scan    --family thm3.1|thm3.2a|thm3.2b|thm4.1a|thm4.1b --alpha-max A --order N
  equidist --stat b|c --max-weight W

PODQ_THREADS caps the number of worker threads used by verify.
"""


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    order: int | None = None
    modulus: int | None = None
    selector: str | None = None
    product: str | None = None
    dissect: tuple[int, int] | None = None
    alpha_max: int | None = None
    max_weight: int | None = None
    fmt: str = "json"
    fail_fast: bool = False


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="podq",
        description="q-series expansion and congruence checks for bipartitions with odd parts distinct",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
        p.add_argument("--fail-fast", action="store_true", help="stop at the first failing record")

    p = sub.add_parser("expand", help="emit series coefficients")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--target", choices=tuple(TARGETS))
    what.add_argument("--product", help='product text, e.g. "(-q;q^2)^2 * (q^2;q^2)^-2"')
    p.add_argument("--order", type=_positive, required=True)
    p.add_argument("--mod", type=_positive, dest="modulus")
    p.add_argument("--dissect", type=_nonnegative, nargs=2, metavar=("M", "R"),
                   help="keep only the q^(M n + R) coefficients")
    common(p)

    p = sub.add_parser("oracle", help="tabulate a statistic by enumeration")
    p.add_argument("--n", type=_nonnegative, required=True, dest="max_weight")
    p.add_argument("--stat", choices=en.STATS, required=True)
    common(p)

    p = sub.add_parser("verify", help="run identity and congruence checks")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--suite", choices=("all",))
    which.add_argument("--identity", choices=tuple(cg.CHECKS), metavar="NAME")
    p.add_argument("--order", type=_positive, default=300)
    common(p)

    p = sub.add_parser("scan", help="scan a congruence family")
    p.add_argument("--family", choices=cg.FAMILY_TAGS, required=True)
    p.add_argument("--alpha-max", type=_nonnegative, required=True)
    p.add_argument("--order", type=_positive, required=True)
    common(p)

    p = sub.add_parser("equidist", help="check the mod-3 equidistribution of a birank")
    p.add_argument("--stat", choices=("b", "c"), required=True)
    p.add_argument("--max-weight", type=_nonnegative, required=True)
    common(p)
    return parser


def parse_args(argv: Sequence[str] | None) -> RunConfig:
    """Parse a command line; exits with status 2 (usage) or 0 (``--help``)."""
    args = build_parser().parse_args(argv)
    cmd = args.command
    if cmd == "expand":
        if args.dissect is not None and args.dissect[1] >= args.dissect[0]:
            raise SystemExit(_usage(f"--dissect needs R < M, got M={args.dissect[0]} R={args.dissect[1]}"))
        if args.modulus is not None and args.modulus < 2:
            raise SystemExit(_usage("--mod must be at least 2"))
        return RunConfig(cmd, order=args.order, modulus=args.modulus, selector=args.target,
                         product=args.product, dissect=tuple(args.dissect) if args.dissect else None,
                         fmt=args.fmt, fail_fast=args.fail_fast)
    if cmd == "oracle":
        return RunConfig(cmd, selector=args.stat, max_weight=args.max_weight, fmt=args.fmt,
                         fail_fast=args.fail_fast)
    if cmd == "verify":
        return RunConfig(cmd, order=args.order, selector=args.identity or "all", fmt=args.fmt,
                         fail_fast=args.fail_fast)
    if cmd == "scan":
        return RunConfig(cmd, order=args.order, selector=args.family, alpha_max=args.alpha_max,
                         fmt=args.fmt, fail_fast=args.fail_fast)
    return RunConfig(cmd, selector=args.stat, max_weight=args.max_weight, fmt=args.fmt,
                     fail_fast=args.fail_fast)


def _usage(message: str) -> int:
    print(f"podq: error: {message}", file=sys.stderr)
    return 2


def _expand(config: RunConfig) -> ps.Series:
    N = config.order
    if config.dissect is not None:
        M, R = config.dissect
        N = M * N + R
    if config.product is not None:
        try:
            spec = qp.parse_product(config.product)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        series = qp.expand_product(spec, N, config.modulus)
    elif config.selector == "psi":
        series = qp.psi(N, config.modulus)
    elif config.selector == "phi":
        series = qp.phi(N, config.modulus)
    else:
        series = qp.product(TARGETS[config.selector], N, config.modulus)
    if config.dissect is not None:
        series = ps.dissect(series, *config.dissect)
    return series


def _emit_rows(rows: list[dict], header: list[str], fmt: str, out: TextIO) -> None:
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([row[h] for h in header])
    else:
        for row in rows:
            out.write(json.dumps(row) + "\n")


def _emit_reports(reports, config: RunConfig, out: TextIO) -> int:
    status = 0
    if config.fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["check", "order", "pass", "n", "expected", "actual", "ms"])
    for r in reports:
        rec = r.to_json()
        if config.fmt == "csv":
            c = rec["counterexample"] or {}
            w.writerow([rec["check"], rec["order"], rec["pass"], c.get("n", ""),
                        c.get("expected", ""), c.get("actual", ""), rec["ms"]])
        else:
            out.write(json.dumps(rec) + "\n")
        out.flush()
        if not r.passed:
            status = 1
            if config.fail_fast:
                break
    return status


def _reports(config: RunConfig):
    if config.command == "verify":
        names = list(cg.CHECKS) if config.selector == "all" else [config.selector]
        if config.fail_fast:
            for name in names:
                yield from cg.run_checks([name], config.order, workers=1)
        else:
            yield from cg.run_checks(names, config.order)
    elif config.command == "scan":
        for spec in _family_specs(config):
            yield cg.family_scan(spec, config.order)
    else:
        yield cg.equidistribution_check(config.selector, config.max_weight)


def _family_specs(config: RunConfig) -> list[cg.FamilySpec]:
    smallest = cg.DEFAULT_ALPHAS[config.selector][0]
    if config.alpha_max < smallest:
        raise UsageError(f"{config.selector} needs --alpha-max >= {smallest}")
    specs = cg.default_family_specs(config.selector, config.order, config.alpha_max)
    if not specs:
        raise UsageError(f"no member of {config.selector} with alpha <= {config.alpha_max} "
                         f"has its first index within order {config.order}")
    return specs


def run(config: RunConfig, out: TextIO = sys.stdout) -> int:
    """Execute a parsed command, writing records to ``out``; returns the exit status."""
    try:
        if config.command == "expand":
            series = _expand(config)
            if config.fmt == "csv":
                rows = [{"n": n, "coeff": str(c)} for n, c in enumerate(series.coeffs)]
                _emit_rows(rows, ["n", "coeff"], "csv", out)
            else:
                out.write(series.dumps() + "\n")
            return 0
        if config.command == "oracle":
            if config.max_weight > cg.ENUMERATION_CAP:
                raise UsageError(f"--n is capped at {cg.ENUMERATION_CAP}")
            table = en.stat_table(config.selector, config.max_weight)
            _emit_rows(table.records(), ["stat", "m", "n", "count"], config.fmt, out)
            return 0
        if config.command == "scan":
            _family_specs(config)
        if config.command == "equidist" and config.max_weight > cg.ENUMERATION_CAP:
            raise UsageError(f"--max-weight is capped at {cg.ENUMERATION_CAP}")
        return _emit_reports(_reports(config), config, out)
    except UsageError as exc:
        return _usage(str(exc))


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

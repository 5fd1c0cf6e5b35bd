"""Command-line front end.

    hsine eval --t 7.67705050991057 --method all
    hsine zeros --count 45 --out zeros.csv
    hsine xray --box -2 30 -16 16 --res 600x400 --out xray.svg
    hsine crosscheck

Exit status: 0 on success, 1 on numerical failure (or a failed check),
2 on arguments outside the valid domain.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import asymptotics, quadrature, riesz, series, xray, zeros
from .errors import ConvergenceFailure, DomainError, PrecisionOverflow, SieveTooSmall
from .output import atomic_write
from .precision import PrecisionContext, to_fraction

DIGITS_ENV = "HSINE_DIGITS"
METHODS = ("series", "fourier", "laplace", "asymptotic", "oracle")


class UsageError(Exception):
    """Argument outside its valid range; reported with exit status 2."""


@dataclass
class CliConfig:
    digits: int = 30
    tol: float = 1e-12
    method: str = "series"
    output: str = "text"
    out_path: str | None = None

    def __post_init__(self):
        if self.digits < 15:
            raise UsageError("--digits must be >= 15")
        if not self.tol > 0:
            raise UsageError("--tol must be > 0")

    @property
    def ctx(self) -> PrecisionContext:
        return PrecisionContext(self.digits)


def _default_digits() -> int:
    raw = os.environ.get(DIGITS_ENV)
    if raw is None:
        return 30
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{DIGITS_ENV} must be an integer, got {raw!r}") from None


def _parse_t(text: str) -> Fraction:
    try:
        return to_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--t must be a real number, got {text!r}") from None


def _emit(text: str, config: CliConfig) -> None:
    if config.out_path:
        atomic_write(config.out_path, text)
    else:
        sys.stdout.write(text)


# evaluation


@dataclass
class Report:
    t: str
    method: str
    value: object
    error_bound: object
    digits: int
    terms: int

    def as_json(self, digits: int) -> dict:
        value = mpmath.mpmathify(self.value)
        return {
            "t": self.t,
            "method": self.method,
            "value": {"re": mpmath.nstr(mpmath.re(value), digits), "im": mpmath.nstr(mpmath.im(value), digits)},
            "error_bound": mpmath.nstr(mpmath.mpf(self.error_bound), 3),
            "digits": self.digits,
            "terms": self.terms,
        }


def _evaluate(method: str, t: Fraction, t_text: str, config: CliConfig, order: int) -> Report:
    ctx = config.ctx
    with ctx.workdps():
        t_mp = mpmath.mpf(t.numerator) / t.denominator
    if method == "series":
        ev = series.eval_f_series(t, eps=mpmath.mpf(10) ** -config.digits)
        return Report(t_text, "series", ev.value, ev.error_bound, ev.digits, ev.terms_used)
    if method == "fourier":
        ev = quadrature.eval_f_fourier(t_mp, config.tol, ctx)
        return Report(t_text, "fourier", ev.value, ev.error_bound, config.digits, ev.terms_used)
    if method == "laplace":
        if t < 1:
            raise UsageError("method laplace requires t >= 1")
        ev = quadrature.eval_f_laplace(t_mp, config.tol, ctx)
        return Report(t_text, "laplace", ev.value, ev.error_bound, config.digits, ev.terms_used)
    if method == "asymptotic":
        if t <= 1:
            raise UsageError("method asymptotic requires t > 1")
        ev = asymptotics.eval_J_asymptotic(t_mp, order, ctx)
        return Report(t_text, "asymptotic", ev.f, ev.residual_estimate, config.digits, order)
    if method == "oracle":
        if not 0 < t <= 5:
            raise UsageError("method oracle requires 0 < t <= 5")
        tol = max(config.tol, 1e-10)
        value = quadrature.triple_integral_direct(float(t), tol)
        return Report(t_text, "oracle", mpmath.mpf(value), tol, 15, 0)
    raise UsageError(f"unknown method {method!r}")


def _applicable(t: Fraction) -> list[str]:
    out = ["series", "fourier"]
    if t >= 1:
        out.append("laplace")
    if t > 1:
        out.append("asymptotic")
    if 0 < t <= 5:
        out.append("oracle")
    return out


def cmd_eval(args, config: CliConfig) -> int:
    t = _parse_t(args.t)
    methods = _applicable(t) if config.method == "all" else [config.method]
    reports = [_evaluate(m, t, args.t, config, args.order) for m in methods]
    if config.output == "json":
        payload = [r.as_json(config.digits) for r in reports]
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n"
    elif config.output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["t", "method", "re", "im", "error_bound", "digits", "terms"])
        for r in reports:
            j = r.as_json(config.digits)
            writer.writerow([j["t"], j["method"], j["value"]["re"], j["value"]["im"], j["error_bound"], j["digits"], j["terms"]])
        text = buf.getvalue()
    else:
        lines = [f"t = {args.t}"]
        for r in reports:
            lines.append(
                f"{r.method:<11} {mpmath.nstr(r.value, config.digits):>{config.digits + 8}}"
                f"  +/- {mpmath.nstr(mpmath.mpf(r.error_bound), 3)}  terms={r.terms}"
            )
        if len(reports) > 1:
            lines.append("")
            lines.append("pairwise |difference|")
            lines.append(" " * 12 + "".join(f"{r.method:>12}" for r in reports))
            for a in reports:
                row = "".join(f"{mpmath.nstr(abs(a.value - b.value), 3):>12}" for b in reports)
                lines.append(f"{a.method:<12}{row}")
        text = "\n".join(lines) + "\n"
    _emit(text, config)
    return 0


def cmd_coeffs(args, config: CliConfig) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "numerator", "denominator", "decimal"])
    with mpmath.workdps(config.digits):
        for n in range(args.count):
            c = series.series_coefficient(n)
            writer.writerow([n, c.numerator, c.denominator, mpmath.nstr(mpmath.mpf(c.numerator) / c.denominator, config.digits)])
    _emit(buf.getvalue(), config)
    return 0


def cmd_zeros(args, config: CliConfig) -> int:
    if not 0 <= args.count <= 100:
        raise UsageError("--count must be in 0..100")
    tol = min(config.tol, 1e-15)
    records = zeros.zeros_table(args.count, tol=tol, workers=args.jobs)
    _emit(zeros.zeros_csv(records), config)
    return 0


def _parse_res(text: str) -> tuple[int, int]:
    try:
        nx, ny = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--res must look like 600x400, got {text!r}") from None
    return nx, ny


def cmd_xray(args, config: CliConfig) -> int:
    nx, ny = _parse_res(args.res)
    try:
        spec = xray.GridSpec(box=tuple(args.box), nx=nx, ny=ny, eps=max(config.tol, 1e-30))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    grid = xray.sample_grid(spec, workers=args.jobs)
    out = config.out_path or ("xray.csv" if config.output == "csv" else "xray.svg")
    if config.output == "csv":
        xray.grid_csv(grid, out)
    else:
        contours = xray.extract_contours(grid)
        xray.render_svg(contours, out, box=spec.box)
    print(f"wrote {out}")
    return 0


def cmd_riesz(args, config: CliConfig) -> int:
    if args.count < 2 or args.xmax <= 1:
        raise UsageError("--count must be >= 2 and --xmax > 1")
    step = args.xmax ** (1 / (args.count - 1))
    xs = [step**k for k in range(args.count)]
    rows = riesz.riesz_report(xs, eps=max(config.tol, 1e-13))
    _emit(riesz.riesz_csv(rows), config)
    return 0


def cmd_asympt(args, config: CliConfig) -> int:
    t = _parse_t(args.t)
    if t <= 1:
        raise UsageError("asympt requires t > 1")
    ctx = config.ctx
    with ctx.workdps():
        t_mp = mpmath.mpf(t.numerator) / t.denominator
        ev = asymptotics.eval_J_asymptotic(t_mp, args.order, ctx)
        first = asymptotics.first_order_f(t_mp, ctx)
        ref = series.eval_f_series(t, eps=mpmath.mpf(10) ** -config.digits).value
        if config.output == "json":
            report = Report(args.t, "asymptotic", ev.f, ev.residual_estimate, config.digits, args.order).as_json(config.digits)
            report["J"] = {"re": mpmath.nstr(ev.value.real, config.digits), "im": mpmath.nstr(ev.value.imag, config.digits)}
            report["first_order"] = mpmath.nstr(first, config.digits)
            report["series"] = mpmath.nstr(ref, config.digits)
            text = json.dumps(report, indent=2) + "\n"
        else:
            n = config.digits
            text = (
                f"t = {args.t}, order = {args.order}\n"
                f"J(t)                {mpmath.nstr(ev.value, n)}\n"
                f"Im J(t)             {mpmath.nstr(ev.f, n)}\n"
                f"first block         {mpmath.nstr(ev.residual_estimate, 3)} (next omitted term)\n"
                f"first-order f(t)    {mpmath.nstr(first, n)}\n"
                f"series f(t)         {mpmath.nstr(ref, n)}\n"
                f"|Im J - series|     {mpmath.nstr(abs(ev.f - ref), 3)}\n"
                f"|first - series|    {mpmath.nstr(abs(first - ref), 3)}\n"
            )
    _emit(text, config)
    return 0


def cmd_crosscheck(args, config: CliConfig) -> int:
    from .checks import CHECKS

    unknown = sorted(set(args.only or ()) - {c.name for c in CHECKS})
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}")
    first_failure = None
    lines = []
    for check in CHECKS:
        if args.only and check.name not in args.only:
            continue
        start = time.perf_counter()
        try:
            ok, detail = check.run()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        elapsed = time.perf_counter() - start
        line = f"{'PASS' if ok else 'FAIL'} {check.name}: {detail}"
        print(line + f" [{elapsed:.1f}s]", flush=True)
        lines.append(line)
        if not ok and first_failure is None:
            first_failure = check.name
    if config.out_path:
        atomic_write(config.out_path, "\n".join(lines) + "\n")
    if first_failure:
        print(f"first failing check: {first_failure}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsine", description=__doc__.split("\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=int, default=None, help=f"working decimal digits (default 30, env {DIGITS_ENV})")
    common.add_argument("--tol", type=float, default=None, help="absolute tolerance (default 1e-12; 1e-10 for xray)")
    common.add_argument("--output", choices=("text", "json", "csv", "svg"), default=None)
    common.add_argument("--out", default=None, help="output file (written atomically)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common], help="evaluate f(t)")
    p.add_argument("--t", required=True)
    p.add_argument("--method", choices=METHODS + ("all",), default="series")
    p.add_argument("--order", type=int, default=asymptotics.DEFAULT_ORDER)
    p.set_defaults(func=cmd_eval, default_output="text")

    p = sub.add_parser("coeffs", parents=[common], help="exact series coefficients c_n")
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_coeffs, default_output="csv")

    p = sub.add_parser("zeros", parents=[common], help="table of the first real zeros")
    p.add_argument("--count", type=int, default=45)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_zeros, default_output="csv")

    p = sub.add_parser("xray", parents=[common], help="render the x-ray of f")
    p.add_argument("--box", type=float, nargs=4, default=list(xray.DEFAULT_BOX), metavar=("XMIN", "XMAX", "YMIN", "YMAX"))
    p.add_argument("--res", default="600x400")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for grid rows (default: all cores)")
    p.set_defaults(func=cmd_xray, default_output="svg", default_tol=1e-10)

    p = sub.add_parser("riesz", parents=[common], help="Riesz function on a geometric grid")
    p.add_argument("--count", type=int, default=9)
    p.add_argument("--xmax", type=float, default=1e4)
    p.set_defaults(func=cmd_riesz, default_output="csv")

    p = sub.add_parser("crosscheck", parents=[common], help="run every invariant check")
    p.add_argument("--only", nargs="*", default=None, help="restrict to the named checks")
    p.set_defaults(func=cmd_crosscheck, default_output="text")

    p = sub.add_parser("asympt", parents=[common], help="asymptotic expansion of J(t)")
    p.add_argument("--t", required=True)
    p.add_argument("--order", type=int, default=asymptotics.DEFAULT_ORDER)
    p.set_defaults(func=cmd_asympt, default_output="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        digits = args.digits if args.digits is not None else _default_digits()
        config = CliConfig(
            digits=digits,
            tol=args.tol if args.tol is not None else getattr(args, "default_tol", 1e-12),
            method=getattr(args, "method", "series"),
            output=args.output or args.default_output,
            out_path=args.out,
        )
        if hasattr(args, "order") and not 1 <= args.order <= asymptotics.MAX_ORDER:
            raise UsageError(f"--order must be in 1..{asymptotics.MAX_ORDER}")
        return args.func(args, config)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceFailure, PrecisionOverflow, SieveTooSmall, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

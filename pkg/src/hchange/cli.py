"""Command line front end: ``hchange {test,simulate,critvals,hplot}``."""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import sys
import warnings

from .asymptotics import kolmogorov_quantile
from .bootstrap import BOOT_METHODS, BootstrapConfig, fresh_seed, run_test
from .estimator import estimate_links
from .panel import DEFAULT_GRID_SIZE, PanelError, default_grid, load_panels
from .simulation import ALTERNATIVES, MODELS, ScenarioConfig, power_csv, power_study

EXIT_RETAIN, EXIT_REJECT, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _split(value: str, cast, name: str) -> list:
    try:
        items = [cast(v.strip()) for v in value.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--{name}: cannot parse {value!r}") from None
    if not items:
        raise UsageError(f"--{name}: empty list")
    return items


def _seed(value):
    if value is None:
        return fresh_seed()
    if not 0 <= value < 2**64:
        raise UsageError("--seed must be an unsigned 64-bit integer")
    return value


def _grid_size(M: int) -> int:
    if M < 1:
        raise UsageError(f"--grid must be >= 1, got {M}")
    return M


def _load(args):
    return load_panels(args.input, args.format, paired=args.paired)


def cmd_test(args) -> int:
    M = _grid_size(args.grid)
    cfg = BootstrapConfig(
        B=args.bootstrap, alpha=args.alpha, seed=_seed(args.seed),
        method=args.method, workers=args.workers,
    )
    pair = _load(args)
    grid = default_grid(pair, M)
    report = run_test(pair, grid, cfg)
    _emit(report.to_json() + "\n", args.out)
    if args.boot_csv:
        _emit("boot_stat\n" + "".join(f"{v!r}\n" for v in report.boot_stats), args.boot_csv)
    if args.figure:
        from .plotting import plot_bootstrap

        plot_bootstrap(report, args.figure)
    return EXIT_REJECT if report.reject else EXIT_RETAIN


def cmd_simulate(args) -> int:
    models = _split(args.model, str, "model")
    alts = _split(args.alt, str, "alt")
    for m in models:
        if m not in MODELS:
            raise UsageError(f"--model: unknown model {m!r}; choose from {', '.join(MODELS)}")
    for a in alts:
        if a not in ALTERNATIVES:
            raise UsageError(f"--alt: unknown alternative {a!r}; choose from {', '.join(ALTERNATIVES)}")
    Ns = _split(args.N, int, "N")
    ns = _split(args.n, int, "n")
    M = _grid_size(args.grid)
    cfg = BootstrapConfig(B=args.bootstrap, alpha=args.alpha, seed=_seed(args.seed), method=args.method)
    try:
        scenarios = [
            ScenarioConfig(
                model=m, alternative=a, N=N, n=n, rho=args.rho,
                a4_rate=args.a4_rate, a5_rate=args.a5_rate,
                squared_logistic=args.squared_logistic,
                replications=args.reps, cfg=cfg, M=M, workers=args.workers,
            )
            for m, a, N, n in itertools.product(models, alts, Ns, ns)
        ]
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = [power_study(sc) for sc in scenarios]
    _emit(power_csv(results), args.out)
    if args.figure:
        from .plotting import plot_power

        plot_power([r.row() for r in results], args.figure)
    return 0


def cmd_critvals(args) -> int:
    levels = _split(args.levels, float, "levels")
    for p in levels:
        if not 0.0 < p < 1.0:
            raise UsageError(f"--levels: {p} is outside (0, 1)")
    lines = ["p,z"] + [f"{p!r},{kolmogorov_quantile(p):.10f}" for p in levels]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_hplot(args) -> int:
    M = _grid_size(args.grid)
    pair = _load(args)
    grid = default_grid(pair, M)
    est = estimate_links(pair, grid)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["t", "x", "h_hat"])
    for t in range(est.h_hat.shape[0]):
        for i, x in enumerate(grid.points):
            writer.writerow([t + 1, repr(float(x)), repr(float(est.h_hat[t, i]))])
    _emit(buf.getvalue(), args.out)
    if args.figure:
        from .plotting import plot_links

        plot_links(est.h_hat, grid.points, args.figure)
    return 0


def _input_args(p):
    p.add_argument("input", help="long CSV, or for --format wide a directory with x.csv/y.csv or 'x.csv,y.csv'")
    p.add_argument("--format", choices=["long", "wide"], default="long")
    p.add_argument("--paired", action="store_true", help="X and Y rows belong to the same subjects")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID_SIZE, metavar="M", help="number of evaluation points")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hchange",
        description="Test whether the monotone link between two panels is constant over time.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="bootstrap test on a data file (exit 0 retain, 1 reject)")
    _input_args(p)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--bootstrap", type=int, default=200, metavar="B")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--method", choices=BOOT_METHODS, default="recentered")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-", help="JSON report path ('-' for stdout)")
    p.add_argument("--boot-csv", default=None, help="also write bootstrap replicates as CSV")
    p.add_argument("--figure", default=None, help="write a histogram of the bootstrap replicates")
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("simulate", help="Monte Carlo power study, CSV output")
    p.add_argument("--model", default="iid_gaussian", help=f"comma list of {', '.join(MODELS)}")
    p.add_argument("--alt", default="null", help=f"comma list of {', '.join(ALTERNATIVES)}")
    p.add_argument("--N", default="50", help="comma list of subjects per panel")
    p.add_argument("--n", default="20", help="comma list of time lengths")
    p.add_argument("--rho", type=float, default=0.5)
    p.add_argument("--a4-rate", type=float, default=0.01)
    p.add_argument("--a5-rate", type=float, default=0.05)
    p.add_argument("--squared-logistic", action="store_true", help="A4/A5 with (t-1)^2 in the exponent")
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--bootstrap", type=int, default=200, metavar="B")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID_SIZE, metavar="M")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--method", choices=BOOT_METHODS, default="recentered")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default="-")
    p.add_argument("--figure", default=None, help="write power curves")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("critvals", help="quantiles of the limiting sup|Brownian bridge| law")
    p.add_argument("--levels", default="0.90,0.95,0.99")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_critvals)

    p = sub.add_parser("hplot", help="estimated link h_hat_t(x) as long CSV t,x,h_hat")
    _input_args(p)
    p.add_argument("--out", default="-")
    p.add_argument("--figure", default=None, help="write a line plot of the estimated links")
    p.set_defaults(func=cmd_hplot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return args.func(args)
    except (UsageError, PanelError, ValueError, OSError) as exc:
        print(f"hchange {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

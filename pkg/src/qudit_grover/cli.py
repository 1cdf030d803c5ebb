"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad flags, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Iterable, Sequence

from . import analysis as an
from .errors import QuditGroverError
from .simulator import run_trials, summarize, tau_curve, RunStats
from .subspace import GroverConfig
from .verify import iter_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # one-line diagnostic instead of usage dump
        raise UsageError(message)


def fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


class Table:
    """Delimited output: optional leading comments, header, rows, one footer."""

    def __init__(self, columns: Sequence[str], sep: str = ","):
        self.columns = list(columns)
        self.sep = sep
        self.comments: list[str] = []
        self.rows: list[list[str]] = []
        self.footer: str | None = None

    def add(self, *values) -> None:
        self.rows.append([fmt(v) for v in values])

    def render(self) -> str:
        lines = [f"# {c}" for c in self.comments]
        lines.append(self.sep.join(self.columns))
        lines.extend(self.sep.join(r) for r in self.rows)
        if self.footer is not None:
            lines.append(f"# {self.footer}")
        return "\n".join(lines) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _sep(args) -> str:
    return "\t" if args.format == "tsv" else ","


def _config(args) -> GroverConfig:
    return GroverConfig(args.d, args.n, args.tau)


def cmd_verify(args) -> int:
    ok = True
    for check in iter_checks(args.d, args.n, args.tau):
        print(check.line(), flush=True)
        ok &= check.passed
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan_r(args) -> int:
    config = _config(args)
    curve = tau_curve(config, args.r_max)
    table = Table(["r", "probability", "analytic_envelope"], _sep(args))
    table.comments.append(f"d={config.d} n={config.n} N={config.N} tau={config.tau} k={config.k}")
    for r, p in enumerate(curve):
        if config.d == 2:
            env = float(an.binary_probability(config.N, r))
        else:
            env = an.success_probability(config.d, r / config.sqrt_n)
        table.add(r, an.clamp_probability(p), env)
    table.footer = f"r_opt={int(curve.argmax())}"
    _write(table.render(), args.out)
    return EXIT_OK


def cmd_complexity(args) -> int:
    table = Table(["N", "r_opt", "pi_over_2T", "quarter_pi_sqrtN"], _sep(args))
    table.comments.append(f"d={args.d}")
    for n in range(1, args.n_max + 1):
        config = GroverConfig(args.d, n)
        rep = an.r_opt_exact(config)
        table.add(config.N, rep.r_opt, rep.r_analytic, math.pi / 4 * config.sqrt_n)
    _write(table.render(), args.out)
    return EXIT_OK


def cmd_expected_runs(args) -> int:
    d = args.d
    rho_hat, p_hat = an.optimal_rho(d, "peak")
    rho_star, e_star = an.optimal_rho(d, "expected_calls")
    table = Table(["d", "rho_hat", "p_rho_hat", "e_rho_hat", "rho_star", "e_rho_star", "constant"], _sep(args))
    table.comments.append("expected oracle calls are per sqrt(N)")
    table.add(d, rho_hat, p_hat, an.expected_calls(d, rho_hat), rho_star, e_star, an.calls_constant())
    _write(table.render(), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _config(args)
    rho = args.rho if args.rho is not None else an.rho_hat(config.d)
    results = run_trials(config, rho, args.trials, args.seed)
    table = Table(["trial", "answer", "runs", "oracle_calls", "success"], _sep(args))
    table.comments.append(
        f"d={config.d} n={config.n} N={config.N} tau={config.tau} rho={fmt(rho)} "
        f"r={an.iterations_for(rho, config.N)} seed={args.seed}"
    )
    for i, res in enumerate(results):
        if isinstance(res, RunStats):
            table.add(i, res.answer, res.runs, res.oracle_calls, res.success)
        else:
            table.rows.append([str(i), "-1", "-1", "-1", "0"])
    analytic = an.expected_calls(config.d, rho) * config.sqrt_n
    summary = summarize(results, analytic)
    table.footer = (
        f"success_rate={fmt(summary.success_rate)} mean_oracle_calls={fmt(summary.mean_oracle_calls)} "
        f"analytic_E={fmt(analytic)} failed_trials={summary.failures}"
    )
    _write(table.render(), args.out)
    if args.out is not None:
        print(table.footer)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qudit-grover", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, *, n=True, tau=True, out=True):
        sp.add_argument("--d", type=int, required=True)
        if n:
            sp.add_argument("--n", type=int, required=True)
        if tau:
            sp.add_argument("--tau", type=int, default=None)
        if out:
            sp.add_argument("--out", default=None)
            sp.add_argument("--format", choices=["csv", "tsv"], default="csv")

    sp = sub.add_parser("verify", help="run every identity check for (d, n)")
    common(sp, out=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("scan-r", help="tau probability against iteration count")
    common(sp)
    sp.add_argument("--r-max", type=int, required=True)
    sp.set_defaults(func=cmd_scan_r)

    sp = sub.add_parser("complexity", help="optimal iteration counts for N = d..d^n_max")
    common(sp, n=False, tau=False)
    sp.add_argument("--n-max", type=int, required=True)
    sp.set_defaults(func=cmd_complexity)

    sp = sub.add_parser("expected-runs", help="peak and call-optimal rho with expected calls")
    common(sp, n=False, tau=False)
    sp.set_defaults(func=cmd_expected_runs)

    sp = sub.add_parser("simulate", help="Monte Carlo of the repeat-until-collision protocol")
    common(sp)
    sp.add_argument("--rho", type=float, default=None)
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_simulate)
    return p


def _validate(args) -> None:
    if not 2 <= args.d <= 16:
        raise UsageError(f"--d must lie in [2, 16], got {args.d}")
    for flag in ("n", "n_max", "trials"):
        v = getattr(args, flag, None)
        if v is not None and v < 1:
            raise UsageError(f"--{flag.replace('_', '-')} must be >= 1, got {v}")
    r_max = getattr(args, "r_max", None)
    if r_max is not None and r_max < 0:
        raise UsageError(f"--r-max must be >= 0, got {r_max}")
    rho = getattr(args, "rho", None)
    if rho is not None and not (math.isfinite(rho) and rho > 0):
        raise UsageError(f"--rho must be positive, got {rho}")
    tau = getattr(args, "tau", None)
    n = getattr(args, "n", None)
    if tau is not None and n is not None and not 0 <= tau < args.d**n:
        raise UsageError(f"--tau must lie in [0, {args.d ** n}), got {tau}")


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
        _validate(args)
    except UsageError as exc:
        print(f"qudit-grover: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except OSError as exc:
        print(f"qudit-grover: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except QuditGroverError as exc:
        print(f"qudit-grover: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: run experiments, render clusters, verify identities.

Data outputs (CSV, PPM) are byte-deterministic given the flags; runtime
chatter goes to stderr.  Exit codes: 0 success, 1 runtime or verification
failure, 2 bad usage.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import experiments as xp
from .render import MAX_RENDER, render_clusters
from .rng import Seed

EXPERIMENTS = ("coexistence", "conditional-coexistence", "n-law", "overtake")
SUITES = ("couplings", "oracle", "invariants", "all")

CSV_HEADER = "experiment,parameter,trials,point,half_width,censored"


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {raw!r} is not key=value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lppsim",
        description="Growth-model experiments, cluster images, and identity suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a Monte Carlo experiment and write CSV")
    run.add_argument("--experiment", choices=EXPERIMENTS)
    run.add_argument("--trials", type=int)
    run.add_argument("--n-max", type=int, dest="n_max")
    run.add_argument("--horizon", type=float)
    run.add_argument("--m", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--threads", type=int)
    run.add_argument("--out", type=str)
    run.add_argument("--config", type=str, help="key=value file; flags override it")
    run.add_argument("--no-plot", action="store_true", dest="no_plot")

    render = sub.add_parser("render", help="write a PPM image of the clusters")
    render.add_argument("--n-max", type=int, dest="n_max")
    render.add_argument("--seed", type=int)
    render.add_argument("--trial", type=int)
    render.add_argument("--out", type=str)
    render.add_argument("--trace", type=str, help="also write the interface trace as CSV")
    render.add_argument("--config", type=str)

    verify = sub.add_parser("verify", help="run identity suites; exit 0 iff all pass")
    verify.add_argument("--suite", choices=SUITES)
    verify.add_argument("--trials", type=int)
    verify.add_argument("--n-max", type=int, dest="n_max")
    verify.add_argument("--seed", type=int)
    verify.add_argument("--threads", type=int)
    verify.add_argument("--config", type=str)
    return parser


class _Options:
    """Flag values with config-file fallbacks; flags always win."""

    def __init__(self, ns: argparse.Namespace, parser: argparse.ArgumentParser):
        self.ns = ns
        self.parser = parser
        self.config = _load_config(ns.config) if getattr(ns, "config", None) else {}

    def get(self, name: str, cast, default=None, required: bool = False):
        value = getattr(self.ns, name, None)
        if value is None and name in self.config:
            value = cast(self.config[name])
        if value is None:
            value = default
        if value is None and required:
            self.parser.error(f"--{name.replace('_', '-')} is required")
        return value


def _csv_value(x) -> str:
    return repr(float(x)) if isinstance(x, float) else str(x)


def _write_rows(rows: list[tuple], out: str | None) -> None:
    text = "\n".join([CSV_HEADER] + [",".join(_csv_value(v) for v in row) for row in rows]) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _figure_path(out: str) -> Path:
    return Path(out).with_suffix(".png")


def _cmd_run(opts: _Options) -> int:
    experiment = opts.get("experiment", str, required=True)
    trials = opts.get("trials", int, required=True)
    seed = opts.get("seed", int, required=True)
    threads = opts.get("threads", int, default=None)
    out = opts.get("out", str, default=None)
    no_plot = getattr(opts.ns, "no_plot", False) or opts.config.get("no_plot") == "1"
    started = time.time()

    rows: list[tuple] = []
    fig_call = None  # (function name, args) resolved against lppsim.figures
    if experiment == "coexistence":
        n_max = opts.get("n_max", int, required=True)
        if n_max < 8:
            opts.parser.error("--n-max must be at least 8 for the coexistence experiment")
        checkpoints = sorted({c for c in (16, 64, 256) if c < n_max} | {n_max})
        estimates = xp.coexistence_sweep(trials, checkpoints, seed, threads)
        for est in estimates:
            rows.append(
                ("coexistence", int(est.horizon_or_nmax), est.trials, est.point,
                 est.half_width_95, est.censored)
            )
        fig_call = ("coexistence_figure", (estimates, xp.coexistence_target()))
    elif experiment == "conditional-coexistence":
        n_max = opts.get("n_max", int, required=True)
        m = opts.get("m", int, required=True)
        est = xp.estimate_conditional_coexistence(m, trials, n_max, seed, threads)
        rows.append(
            (experiment, f"m={m}", est.trials, est.point, est.half_width_95, est.censored)
        )
        fig_call = ("conditional_figure", ([m], [est]))
    elif experiment == "n-law":
        result = xp.estimate_N_law(trials, seed, threads)
        ge1 = result.p_ge1
        rows.append(("n-law", "N>=1", trials, ge1.point, ge1.half_width_95, 0))
        for n in range(0, 9):
            mass = result.mass(n)
            hw = 1.96 * (mass * (1 - mass) / trials) ** 0.5
            rows.append(("n-law", f"N={n}", trials, mass, hw, 0))
        base = trials - int(result.counts[0])
        for m_val in range(1, 7):
            mass, se = result.conditional_mass(m_val)
            rows.append(("n-law", f"N={m_val}|N>=1", base, mass, 1.96 * se, 0))
        fig_call = ("n_law_figure", (result,))
    elif experiment == "overtake":
        m = opts.get("m", int, required=True)
        horizon = opts.get("horizon", float, required=True)
        est = xp.estimate_overtake(m, trials, horizon, seed, threads)
        rows.append(("overtake", f"m={m}", est.trials, est.point, est.half_width_95, est.censored))
        fig_call = ("overtake_figure", (m, [est]))

    _write_rows(rows, out)
    if out and fig_call is not None and not no_plot:
        from . import figures  # deferred import: pulls in matplotlib

        name, args = fig_call
        getattr(figures, name)(_figure_path(out), *args)
        print(f"figure written to {_figure_path(out)}", file=sys.stderr)
    print(f"{experiment}: {trials} trials in {time.time() - started:.1f}s", file=sys.stderr)
    return 0


def _cmd_render(opts: _Options) -> int:
    n_max = opts.get("n_max", int, required=True)
    seed = opts.get("seed", int, required=True)
    trial = opts.get("trial", int, default=0)
    out = opts.get("out", str, required=True)
    trace_out = opts.get("trace", str, default=None)
    if n_max > MAX_RENDER:
        opts.parser.error(f"--n-max must be at most {MAX_RENDER}")
    render_clusters(Seed(seed, trial), n_max, out)
    print(f"image written to {out}", file=sys.stderr)
    if trace_out:
        from .interfaces import trace_interfaces
        from .lpp import passage_times
        from .weights import sample_field

        # same field as the image; the trace stays strictly inside it
        field = sample_field(Seed(seed, trial), n_max + 1, n_max + 1)
        trace = trace_interfaces(passage_times(field), n_max - 1)
        lines = ["n,x_minus,y_minus,x_plus,y_plus,met"]
        lines.extend(",".join(str(v) for v in row) for row in trace.csv_rows())
        Path(trace_out).write_text("\n".join(lines) + "\n")
        print(f"trace written to {trace_out}", file=sys.stderr)
    return 0


def _cmd_verify(opts: _Options) -> int:
    suite = opts.get("suite", str, required=True)
    trials = opts.get("trials", int, default=200)
    n_max = opts.get("n_max", int, default=32)
    seed = opts.get("seed", int, default=0)
    threads = opts.get("threads", int, default=None)
    reports = []
    if suite in ("couplings", "all"):
        reports.append(xp.verify_couplings(trials, n_max, None, seed, threads))
    if suite in ("oracle", "all"):
        reports.append(xp.run_oracle_suite(trials, seed, threads))
    if suite in ("invariants", "all"):
        reports.append(xp.run_invariants_suite(max(1, trials // 4), n_max, seed, threads))
        reports.append(xp.run_rost_border_suite(max(1, trials // 10), seed, threads=threads))
        reports.append(xp.run_psi_suite(max(1, trials // 4), seed, threads=threads))
    for report in reports:
        print(report.summary())
    return 0 if all(r.passed for r in reports) else 1


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    opts = _Options(ns, parser)
    try:
        if ns.command == "run":
            return _cmd_run(opts)
        if ns.command == "render":
            return _cmd_render(opts)
        return _cmd_verify(opts)
    except BrokenPipeError:
        return 1
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end: ``nbldpc {threshold,evolve,exit,stability,simulate}``.

Every command writes ``#``-prefixed header lines (ensemble, parameters, seed)
followed by CSV rows with 6 significant digits. ``--plot`` additionally
renders a PNG figure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .density import (
    DeOptions,
    bp_threshold,
    check_supported,
    decision_distribution,
    evolve,
    predicted_bit_erasure,
    stability_bound,
    stability_factor,
    stability_unstable,
)
from .ensemble import (
    ConfigError,
    EnsembleSpec,
    UnsupportedConfiguration,
    design_rate,
    lambda_prime_zero,
    load_config,
    parse_labels,
    parse_polynomial,
)

__all__ = ["main", "build_parser", "RunConfig"]

EXIT_OK, EXIT_CONFIG, EXIT_UNSUPPORTED = 0, 2, 3

# parameters that do not affect results and are kept out of the header
_EXECUTION_ONLY = frozenset({"workers", "hist_out"})

log = logging.getLogger("nbldpc")


def fmt(x) -> str:
    return f"{x:.6g}"


@dataclass
class RunConfig:
    """Validated inputs of one command invocation."""

    command: str
    ensembles: list[EnsembleSpec]
    params: dict = field(default_factory=dict)
    out: Path | None = None
    plot: Path | None = None

    @property
    def ensemble(self) -> EnsembleSpec:
        return self.ensembles[0]

    def header(self) -> list[str]:
        lines = [f"# nbldpc {__version__} {self.command}"]
        for e in self.ensembles:
            lines.append(f"# ensemble: {e.describe()}")
        for k, v in self.params.items():
            if k in _EXECUTION_ONLY:
                continue
            lines.append(f"# {k} = {v}")
        return lines


def _parse_ms(text: str) -> list[int]:
    try:
        ms = [int(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise ConfigError(f"--m: expected integer or comma list, got {text!r}") from None
    if not ms:
        raise ConfigError("--m: empty")
    return ms


def _ensembles(args) -> list[EnsembleSpec]:
    if args.config:
        try:
            base = load_config(args.config)
        except OSError as exc:
            raise ConfigError(f"{args.config}: {exc.strerror}") from None
        lam, rho, labels = base.lam, base.rho, base.labels
        ms = [base.m]
    else:
        if args.lam is None or args.rho is None:
            raise ConfigError("give --config or both --lambda and --rho")
        lam = parse_polynomial(args.lam, "lambda")
        rho = parse_polynomial(args.rho, "rho")
        labels = "GL"
        ms = None
    if args.m is not None:
        ms = _parse_ms(args.m)
    if ms is None:
        raise ConfigError("--m is required")
    if args.labels is not None:
        labels = parse_labels(args.labels)
    return [EnsembleSpec(lam, rho, m, labels) for m in ms]


def _de_options(args) -> DeOptions:
    return DeOptions(max_iters=args.max_iters)


@contextmanager
def _output(path: Path | None):
    if path is None:
        yield sys.stdout
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            yield fh


def _write_table(cfg: RunConfig, columns, rows, extra_header=()):
    with _output(cfg.out) as fh:
        for line in cfg.header() + list(extra_header):
            fh.write(line + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([v if isinstance(v, (int, np.integer, str)) else fmt(v) for v in r])


def cmd_threshold(cfg: RunConfig) -> int:
    opts = cfg.params["de_options"]
    rows = []
    for e in cfg.ensembles:
        rows.append((e.m, bp_threshold(e, opts), stability_bound(e)))
    summary = [f"# threshold m={m}: {fmt(t)}" for m, t, _ in rows]
    _write_table(cfg, ["m", "threshold", "stability_bound"], rows, summary)
    if cfg.out is not None:
        for line in summary:
            print(line[2:])
    if cfg.plot:
        from .report import plot_thresholds

        plot_thresholds(
            [r[0] for r in rows],
            [r[1] for r in rows],
            cfg.plot,
            stability=[r[2] for r in rows],
            shannon=1.0 - design_rate(cfg.ensemble),
        )
    return EXIT_OK


def cmd_evolve(cfg: RunConfig) -> int:
    e = cfg.ensemble
    eps = cfg.params["epsilon"]
    tr = evolve(e, eps, cfg.params["de_options"])
    rows = [(l, *p, p @ np.arange(e.m + 1)) for l, p in enumerate(tr.p_v)]
    extra = [f"# status = {tr.status}", f"# iterations = {tr.iterations}"]
    cols = ["iter"] + [f"p{k}" for k in range(e.m + 1)] + ["expected_dim"]
    _write_table(cfg, cols, rows, extra)
    if cfg.plot:
        from .report import plot_de_trace

        plot_de_trace(tr.p_v, cfg.plot, title=f"{e.describe()}, eps={fmt(eps)}")
    return EXIT_OK


def cmd_exit(cfg: RunConfig) -> int:
    from .exitchart import exit_curve, map_upper_bound

    opts = cfg.params["de_options"]
    step = cfg.params["step"]
    rows, summary, curves = [], [], {}
    many = len(cfg.ensembles) > 1
    for e in cfg.ensembles:
        mb = map_upper_bound(e, step=step, opts=opts)
        curve = exit_curve(e, step=max(step, 1e-3), opts=opts, threshold=mb.bp_threshold)
        curves[e.m] = (curve.grid, curve.values, mb.epsilon)
        note = " (area short of design rate; bound set to BP threshold)" if mb.saturated else ""
        summary.append(
            f"# map_upper_bound m={e.m}: {fmt(mb.epsilon)} area={fmt(mb.area)} "
            f"design_rate={fmt(mb.rate)} bp_threshold={fmt(mb.bp_threshold)}{note}"
        )
        for g, h in zip(curve.grid, curve.values):
            rows.append((e.m, g, h) if many else (g, h))
    cols = ["m", "epsilon", "h_bp"] if many else ["epsilon", "h_bp"]
    _write_table(cfg, cols, rows, summary)
    if cfg.out is not None:
        for line in summary:
            print(line[2:])
    if cfg.plot:
        from .report import plot_exit_curves

        plot_exit_curves(curves, cfg.plot, rate=design_rate(cfg.ensemble))
    return EXIT_OK


def cmd_stability(cfg: RunConfig) -> int:
    B = cfg.params.get("battacharyya")
    for e in cfg.ensembles:
        if lambda_prime_zero(e) == 0:
            print(f"m={e.m}: condition vacuous, bound = 1")
            continue
        print(f"m={e.m}: stability bound eps_stab = {fmt(stability_bound(e))}")
        if B is not None:
            verdict = "unstable" if stability_unstable(e, B) else "stable"
            print(f"m={e.m}: B={fmt(B)} factor={fmt(stability_factor(e, B))} -> {verdict}")
    return EXIT_OK


def cmd_simulate(cfg: RunConfig) -> int:
    from .decoder.algebra import MAX_TABLE_M
    from .decoder.experiment import run_experiment

    e = cfg.ensemble
    p = cfg.params
    if p["decoder"] == "subspace" and e.m > MAX_TABLE_M:
        raise UnsupportedConfiguration(f"subspace decoder supports m <= {MAX_TABLE_M}")
    if p["analysis"] == "de":
        check_supported(e)
    res = run_experiment(
        e, p["n"], p["epsilon"], p["trials"], p["max_iter"], p["seed"], p["decoder"], p["workers"]
    )
    sym, sym_se = res.symbol_erasure
    bit, bit_se = res.bit_erasure
    fail, _ = res.failure
    summary = [
        f"# MC symbol_erasure = {fmt(sym)} +- {fmt(sym_se)}",
        f"# MC bit_erasure = {fmt(bit)} +- {fmt(bit_se)}",
        f"# MC failure_rate = {fmt(fail)}",
    ]
    de_pv = None
    if p["analysis"] == "de":
        tr = evolve(e, p["epsilon"], DeOptions(max_iters=p["max_iter"], certify_radius=0.0))
        de_pv = tr.p_v
        dec = decision_distribution(e, tr.final_p_c, p["epsilon"])
        summary += [
            f"# DE symbol_erasure = {fmt(1.0 - dec[0])}",
            f"# DE bit_erasure = {fmt(predicted_bit_erasure(e, tr.final_p_c, p['epsilon']))}",
            f"# DE status = {tr.status} after {tr.iterations} iterations",
        ]
    rows = [
        (t.trial, t.iterations, t.symbol_erasure_rate, t.bit_erasure_rate) for t in res.trials
    ]
    _write_table(
        cfg, ["trial", "iterations", "symbol_erasure_rate", "bit_erasure_rate"], rows, summary
    )
    if cfg.out is not None:
        for line in summary:
            print(line[2:])
    if p["hist_out"] is not None:
        hist = res.hist_total
        hcfg = RunConfig(cfg.command, cfg.ensembles, cfg.params, out=p["hist_out"])
        _write_table(
            hcfg,
            ["iter", "dim", "count"],
            [(l, k, int(hist[l, k])) for l in range(hist.shape[0]) for k in range(e.m + 1)],
        )
    if cfg.plot:
        from .report import plot_simulation

        de = None
        if de_pv is not None:
            de = np.vstack([de_pv, np.repeat(de_pv[-1:], max(0, p["max_iter"] - len(de_pv)), axis=0)])
        plot_simulation(res.hist_mean, res.hist_stderr, de, cfg.plot, title=e.describe())
    return EXIT_OK


COMMANDS = {
    "threshold": cmd_threshold,
    "evolve": cmd_evolve,
    "exit": cmd_exit,
    "stability": cmd_stability,
    "simulate": cmd_simulate,
}


def _prob(text: str) -> float:
    x = float(text)
    if not 0.0 <= x <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} not in [0, 1]")
    return x


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", type=Path, help="ensemble file (key = value lines)")
    shared.add_argument("--lambda", dest="lam", help='variable edge distribution, e.g. "0.5 y + 0.5 y^4"')
    shared.add_argument("--rho", help='check edge distribution, e.g. "y^5"')
    shared.add_argument("--m", help="symbol size exponent (comma list where supported)")
    shared.add_argument("--labels", help="GL or GF:<polymask>, e.g. GF:0x7")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--out", type=Path, help="CSV output path (default stdout)")
    shared.add_argument("--plot", type=Path, help="also render a PNG figure here")
    shared.add_argument("--max-iters", type=int, default=DeOptions.max_iters, help="DE iteration budget")
    shared.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="nbldpc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("threshold", parents=[shared], help="BP threshold by density evolution")
    ev = sub.add_parser("evolve", parents=[shared], help="density-evolution trace as CSV")
    ev.add_argument("--eps", type=_prob, required=True)
    ex = sub.add_parser("exit", parents=[shared], help="BP EXIT curve and MAP upper bound")
    ex.add_argument("--step", type=float, default=1e-3)
    st = sub.add_parser("stability", parents=[shared], help="stability bound")
    st.add_argument("--battacharyya", type=_prob, help="also test a BMS channel with this constant")
    sm = sub.add_parser("simulate", parents=[shared], help="finite-length Monte Carlo")
    sm.add_argument("--n", type=int, default=1000, help="number of symbols")
    sm.add_argument("--eps", type=_prob, required=True)
    sm.add_argument("--trials", type=int, default=10)
    sm.add_argument("--max-iter", type=int, default=100, help="decoder rounds")
    sm.add_argument("--decoder", choices=["subspace", "probvec"], default="subspace")
    sm.add_argument("--analysis", choices=["de", "none"], default="de")
    sm.add_argument("--workers", type=int, default=1)
    sm.add_argument("--hist-out", type=Path, help="per-round dimension histogram CSV")
    return p


def make_config(args) -> RunConfig:
    ensembles = _ensembles(args)
    params: dict = {"seed": args.seed}
    if args.max_iters < 1:
        raise ConfigError("--max-iters must be >= 1")
    if args.command in ("threshold", "evolve", "exit"):
        params["de_options"] = _de_options(args)
    if args.command in ("evolve", "simulate") and len(ensembles) > 1:
        raise ConfigError(f"{args.command} takes a single --m")
    if args.command == "evolve":
        params["epsilon"] = args.eps
    if args.command == "exit":
        if not 0 < args.step <= 1e-3:
            raise ConfigError("--step must be in (0, 0.001]")
        params["step"] = args.step
    if args.command == "stability":
        params["battacharyya"] = args.battacharyya
    if args.command == "simulate":
        if args.n < 1 or args.trials < 1 or args.max_iter < 1 or args.workers < 1:
            raise ConfigError("--n, --trials, --max-iter and --workers must be >= 1")
        params.update(
            epsilon=args.eps,
            n=args.n,
            trials=args.trials,
            max_iter=args.max_iter,
            decoder=args.decoder,
            analysis=args.analysis,
            workers=args.workers,
            hist_out=args.hist_out,
        )
    return RunConfig(args.command, ensembles, params, out=args.out, plot=args.plot)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = make_config(args)
        if args.command in ("threshold", "evolve", "exit"):
            for e in cfg.ensembles:
                check_supported(e)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"nbldpc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except UnsupportedConfiguration as exc:
        print(f"nbldpc: unsupported configuration: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())

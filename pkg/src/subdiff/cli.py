"""Command-line experiment runner.

Subcommands:
    direct    forward solve, CSV of mode traces and flux
    invert    synthesize flux for the configured coefficient and recover it
    sweep     repeat invert across alpha / epsilon0 / delta values
    validate  check data assumptions and the special-function properties

Each run reads one JSON config (--config) and writes CSV tables, a
key-value summary, and the resolved config into the output directory.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .direct import add_noise
from .domains import project, validate_assumptions
from .experiments import ExperimentConfig, run_direct, run_invert, run_sweep, synthesize_flux
from .fracops import TimeGrid, caputo_l1, l1_weights, rl_integral
from .special import MlParams, _asymptotic_neg, _series_mp, mittag_leffler, ml_relaxation

__all__ = ["main"]


def _property_suite(alpha: float, quiet: bool) -> bool:
    """Quick special-function and scheme sanity checks."""
    checks: list[tuple[str, bool]] = []

    alphas = (0.3, 0.5, 0.7, 0.9)
    # series and asymptotic branches agree on the overlap band
    worst = 0.0
    for a in alphas:
        for frac in (1.0, 1.2):
            x = (30.0**a) * frac
            xr = x ** (1.0 / a)
            s = _series_mp(a, 1.0, -x, int(0.4343 * xr) + 5)
            worst = max(worst, abs(s - _asymptotic_neg(a, 1.0, x)))
    checks.append(("ml branch agreement <= 1e-8", worst <= 1e-8))

    # complete monotonicity of t -> E_{alpha,1}(-t^alpha), coarse grid
    ok = True
    for a in alphas:
        t = np.linspace(0.01, 10.0, 200)
        vals = np.array([ml_relaxation(a, 1.0, tk) for tk in t])
        ok &= bool(np.all(vals >= -1e-9))
        ok &= bool(np.all(np.diff(vals) <= 1e-9))
        ok &= bool(np.all(np.diff(vals, 2) >= -1e-9))
    checks.append(("complete monotonicity sign pattern", ok))

    # uniform bound x |E_{alpha,1}(-x)| on [1, 1e6]
    ok = True
    for a in alphas:
        xs = np.logspace(0.0, 6.0, 40)
        ok &= all(
            x * abs(mittag_leffler(MlParams(a, 1.0), -x)) <= 10.0 for x in xs
        )
    checks.append(("x*E bound <= 10 on [1, 1e6]", ok))

    # kernel positivity E_{alpha,alpha}(-x) >= 0
    ok = True
    for a in alphas:
        xs = np.logspace(-2.0, 4.0, 30)
        ok &= all(mittag_leffler(MlParams(a, a), -x) >= 0.0 for x in xs)
    checks.append(("kernel positivity", ok))

    # L1 weights strictly decreasing, positive
    b = l1_weights(alpha if 0.0 < alpha < 1.0 else 0.5, 400).b
    checks.append(("L1 weights decreasing", bool(np.all(np.diff(b) < 0) and b[-1] > 0)))

    # composition identity on a coarse grid
    grid = TimeGrid(1.0, 256)
    f = np.sin(grid.nodes)
    comp = rl_integral(caputo_l1(f, 0.5, grid), 0.5, grid)
    checks.append(("I^alpha(D^alpha f) = f - f(0)", np.abs(comp - f).max() <= 1e-2))

    all_ok = all(ok for _, ok in checks)
    if not quiet:
        for name, ok in checks:
            print(f"  [{'ok' if ok else 'FAIL'}] {name}")
    return all_ok


def _cmd_validate(cfg: ExperimentConfig, outdir: Path, quiet: bool) -> int:
    es = cfg.build_system()
    grid = TimeGrid(cfg.T, cfg.Nt)
    pd = project(es, cfg.u0, cfg.source_spec(), grid)
    g, _ = synthesize_flux(cfg, es)
    if cfg.delta > 0.0:
        g = add_noise(g, cfg.delta, cfg.seed)
    report = validate_assumptions(pd, es, g)
    if not quiet:
        print("data assumptions:")
        for line in report.summary().splitlines():
            print("  " + line)
        print("property suite:")
    props_ok = _property_suite(cfg.alpha, quiet)
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "validate.txt", "w", encoding="utf-8") as fh:
        fh.write(report.summary() + "\n")
        fh.write(f"property_suite_ok = {props_ok}\n")
    ok = report.direct_ok and props_ok
    if not quiet:
        print(f"validate: {'ok' if ok else 'FAILED'}")
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="subdiff",
        description="time-fractional diffusion: direct solves and "
        "diffusivity recovery from boundary flux data",
    )
    parser.add_argument("command", choices=["direct", "invert", "sweep", "validate"])
    parser.add_argument("--config", required=True, help="path to JSON config")
    parser.add_argument("--out", default=None, help="output directory override")
    parser.add_argument("--seed", type=int, default=None, help="noise seed override")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")
    parser.add_argument(
        "--param",
        default=None,
        choices=["alpha", "epsilon0", "delta"],
        help="sweep parameter (overrides config sweep.param)",
    )
    parser.add_argument(
        "--values",
        default=None,
        help="comma-separated sweep values (overrides config sweep.values)",
    )
    args = parser.parse_args(argv)

    try:
        cfg = ExperimentConfig.load(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        outdir = Path(args.out if args.out is not None else cfg.output_dir)

        if args.command == "validate":
            return _cmd_validate(cfg, outdir, args.quiet)
        if args.command == "direct":
            entries = run_direct(cfg, outdir)
        elif args.command == "invert":
            entries = run_invert(cfg, outdir)
        else:
            sweep_cfg = cfg.sweep or {}
            param = args.param or sweep_cfg.get("param")
            if args.values is not None:
                values = [float(v) for v in args.values.split(",")]
            else:
                values = sweep_cfg.get("values")
            if not param or not values:
                raise ValueError(
                    "sweep needs --param/--values or a config 'sweep' entry"
                )
            entries = run_sweep(cfg, param, values, outdir)
        if not args.quiet:
            for key, value in entries.items():
                print(f"{key} = {value}")
            print(f"outputs written to {outdir}")
        return 0
    except Exception as exc:
        print(f"subdiff: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

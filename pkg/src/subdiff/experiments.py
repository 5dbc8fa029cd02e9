"""Configuration-driven experiment runs: direct solves, reconstructions,
and parameter sweeps, emitting CSV tables plus key-value summaries.

A run is described by one JSON document (see README for the schema).  Every
output directory receives the resolved configuration back as JSON, so any
emitted result can be reproduced byte for byte by re-running from it.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .direct import CoefficientSamples, FluxTrace, flux_trace, solve_direct
from .domains import EigenSystem, build_interval, build_square, project, validate_assumptions
from .fracops import TimeGrid
from .inverse import InverseConfig, l2_norm, reconstruct

__all__ = [
    "ExperimentConfig",
    "coefficient_values",
    "synthesize_flux",
    "run_direct",
    "run_invert",
    "run_sweep",
]

_FLOAT_FMT = "%.12g"


# ---------------------------------------------------------------------------
# coefficient specs


def _smile(t: np.ndarray) -> np.ndarray:
    """Piecewise 'smile' profile; the middle branch owns the open interval
    (1/3, 2/3), the outer branches the closed ones."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    left = t <= 1.0 / 3.0
    right = t >= 2.0 / 3.0
    mid = ~(left | right)
    out[left] = 0.8 * np.sin(3.0 * np.pi * t[left]) + 1.5
    out[mid] = -0.5 * np.sin(3.0 * np.pi * t[mid] - np.pi) + 0.6
    out[right] = 0.8 * np.sin(3.0 * np.pi * t[right] - 2.0 * np.pi) + 1.5
    return out


def coefficient_values(spec: Union[str, dict], t: np.ndarray) -> np.ndarray:
    """Sample a coefficient spec on node times t.

    Specs: "a1" (sin 5 pi t + 1.3), "a2" (the smile profile),
    {"kind": "constant", "value": c}, or {"kind": "table", "values": [...]}
    (uniform samples on [0, T], linearly interpolated).
    """
    if isinstance(spec, str):
        spec = {"kind": spec}
    kind = spec.get("kind")
    if kind == "a1":
        return np.sin(5.0 * np.pi * t) + 1.3
    if kind == "a2":
        return _smile(t)
    if kind == "constant":
        return np.full(t.shape, float(spec["value"]))
    if kind == "table":
        table = np.asarray(spec["values"], dtype=float)
        if table.size < 2:
            raise ValueError("coefficient table needs at least two samples")
        xs = np.linspace(t[0], t[-1], table.size)
        return np.interp(t, xs, table)
    raise ValueError(f"unknown coefficient spec {spec!r}")


@dataclass
class ExperimentConfig:
    """One experiment: domain, data, grid, and iteration controls."""

    domain_kind: str = "interval"
    x0: Union[float, list] = 0.0
    alpha: float = 0.9
    T: float = 1.0
    Nt: int = 1000
    modes: int = 32
    u0: Union[str, list, None] = "neg_sin_pi_x"
    source: Optional[dict] = field(
        default_factory=lambda: {"w": "neg_sin_pi_x", "f": "t_plus_1"}
    )
    coefficient: Union[str, dict] = "a1"
    epsilon0: float = 1e-6
    max_iters: int = 2000
    delta: float = 0.0
    seed: int = 0
    inverse_crime: bool = False
    override_assumptions: bool = False
    record_iterates: bool = True
    sweep: Optional[dict] = None
    output_dir: str = "out"

    @classmethod
    def from_dict(cls, raw: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**raw)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                raw = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValueError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        return asdict(self)

    def build_system(self) -> EigenSystem:
        if self.domain_kind == "interval":
            return build_interval(self.modes, float(np.atleast_1d(self.x0)[0]))
        if self.domain_kind == "square":
            return build_square(self.modes, tuple(self.x0))
        raise ValueError(f"unknown domain kind {self.domain_kind!r}")

    def source_spec(self):
        if self.source is None:
            return None
        return (self.source["w"], self.source["f"])

    def inverse_config(self) -> InverseConfig:
        return InverseConfig(
            epsilon0=self.epsilon0,
            max_iters=self.max_iters,
            alpha=self.alpha,
            delta=self.delta,
            seed=self.seed,
            record_iterates=self.record_iterates,
        )


def synthesize_flux(
    cfg: ExperimentConfig, es: EigenSystem
) -> tuple[FluxTrace, np.ndarray]:
    """Exact flux data for cfg's true coefficient.

    By default the forward solve runs on a grid twice as fine and is
    restricted to the working nodes; inverse_crime=True synthesizes on the
    working grid itself, removing all model error (used when matching
    reported error magnitudes).  Returns (g, a_true working-grid samples).
    """
    grid = TimeGrid(cfg.T, cfg.Nt)
    a_work = coefficient_values(cfg.coefficient, grid.nodes)
    if cfg.inverse_crime:
        synth_grid, stride = grid, 1
    else:
        synth_grid, stride = TimeGrid(cfg.T, 2 * cfg.Nt), 2
    pd = project(es, cfg.u0, cfg.source_spec(), synth_grid)
    a_syn = CoefficientSamples(
        coefficient_values(cfg.coefficient, synth_grid.nodes), synth_grid
    )
    g_syn = flux_trace(es, solve_direct(es, pd, a_syn, cfg.alpha), a_syn)
    return FluxTrace(g=g_syn.g[::stride].copy(), grid=grid), a_work


# ---------------------------------------------------------------------------
# output helpers


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = zip(*columns)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_FLOAT_FMT % v for v in row])


def _write_summary(path: Path, entries: dict, cfg: ExperimentConfig) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for key, value in entries.items():
            fh.write(f"{key} = {value}\n")
        fh.write("\nresolved_config =\n")
        fh.write(json.dumps(cfg.to_dict(), indent=2, sort_keys=True))
        fh.write("\n")


def _emit_config(outdir: Path, cfg: ExperimentConfig) -> None:
    with open(outdir / "resolved_config.json", "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _mode_name(label) -> str:
    if isinstance(label, tuple):
        return "u_" + "_".join(str(x) for x in label)
    return f"u_{label}"


# ---------------------------------------------------------------------------
# runners


def run_direct(cfg: ExperimentConfig, outdir: Union[str, Path]) -> dict:
    """Forward solve: write direct.csv (t, a_true, excited modes, flux g)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = TimeGrid(cfg.T, cfg.Nt)
    es = cfg.build_system()
    pd = project(es, cfg.u0, cfg.source_spec(), grid)
    a_true = CoefficientSamples(coefficient_values(cfg.coefficient, grid.nodes), grid)
    mt = solve_direct(es, pd, a_true, cfg.alpha)
    g = flux_trace(es, mt, a_true)
    report = validate_assumptions(pd, es, g)

    excited = [i for i in range(len(es)) if np.any(mt.U[i] != 0.0)]
    header = ["t", "a_true"] + [_mode_name(es.modes[i].label) for i in excited] + ["g"]
    columns = [grid.nodes, a_true.values] + [mt.U[i] for i in excited] + [g.g]
    _write_csv(outdir / "direct.csv", header, columns)

    entries = {
        "experiment": "direct",
        "excited_modes": len(excited),
        "min_g": _FLOAT_FMT % g.g.min(),
        "max_g": _FLOAT_FMT % g.g.max(),
        "assumptions_ok": report.direct_ok,
    }
    _write_summary(outdir / "summary.txt", entries, cfg)
    _emit_config(outdir, cfg)
    return entries


def _invert_once(cfg: ExperimentConfig, es: EigenSystem):
    grid = TimeGrid(cfg.T, cfg.Nt)
    pd = project(es, cfg.u0, cfg.source_spec(), grid)
    g, a_true = synthesize_flux(cfg, es)
    res = reconstruct(
        g, es, pd, cfg.inverse_config(), skip_validation=cfg.override_assumptions
    )
    err = l2_norm(res.a_rec.values - a_true, grid)
    rel = err / l2_norm(a_true, grid)
    return grid, res, a_true, err, rel


def run_invert(cfg: ExperimentConfig, outdir: Union[str, Path]) -> dict:
    """Reconstruction run: write invert.csv and convergence summary."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    es = cfg.build_system()
    grid, res, a_true, err, rel = _invert_once(cfg, es)

    header = ["t", "a_true", "a_0"]
    columns = [grid.nodes, a_true]
    if res.iterates is not None:
        columns.append(res.iterates[0].values)
        for k in (1, 2, 3):
            if k < len(res.iterates):
                header.append(f"a_iter{k}")
                columns.append(res.iterates[k].values)
    else:
        columns.append(np.full(grid.Nt + 1, np.nan))
    header.append("a_rec")
    columns.append(res.a_rec.values)
    _write_csv(outdir / "invert.csv", header, columns)

    entries = {
        "experiment": "invert",
        "n_iters": res.n_iters,
        "converged": res.converged,
        "l2_error": _FLOAT_FMT % err,
        "rel_l2_error": _FLOAT_FMT % rel,
        "final_increment": _FLOAT_FMT % res.history[-1],
    }
    _write_summary(outdir / "summary.txt", entries, cfg)
    _emit_config(outdir, cfg)
    return entries


_SWEEPABLE = ("alpha", "epsilon0", "delta")


def run_sweep(
    cfg: ExperimentConfig,
    sweep: str,
    values: list[float],
    outdir: Union[str, Path],
) -> dict:
    """One reconstruction per sweep value; aggregate sweep.csv plus a
    log-log error slope where the sweep parameter drives the error."""
    if sweep not in _SWEEPABLE:
        raise ValueError(f"sweep parameter must be one of {_SWEEPABLE}, got {sweep!r}")
    if not values:
        raise ValueError("sweep needs at least one value")
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    es = cfg.build_system()

    rows = []
    for value in values:
        sub = ExperimentConfig(**{**cfg.to_dict(), sweep: value})
        try:
            _, res, _, err, rel = _invert_once(sub, es)
            rows.append(
                {
                    "value": value,
                    "n_iters": res.n_iters,
                    "converged": int(res.converged),
                    "l2_error": err,
                    "rel_l2_error": rel,
                    "status": "ok",
                }
            )
        except Exception as exc:  # record the failure, keep sweeping
            rows.append(
                {
                    "value": value,
                    "n_iters": 0,
                    "converged": 0,
                    "l2_error": float("nan"),
                    "rel_l2_error": float("nan"),
                    "status": f"error: {exc}",
                }
            )

    with open(outdir / "sweep.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["value", "n_iters", "converged", "l2_error", "rel_l2_error", "status"]
        )
        for row in rows:
            writer.writerow(
                [
                    _FLOAT_FMT % row["value"],
                    row["n_iters"],
                    row["converged"],
                    _FLOAT_FMT % row["l2_error"],
                    _FLOAT_FMT % row["rel_l2_error"],
                    row["status"],
                ]
            )

    entries = {"experiment": f"sweep_{sweep}", "n_values": len(values)}
    good = [r for r in rows if r["status"] == "ok"]
    entries["n_ok"] = len(good)
    if sweep in ("epsilon0", "delta") and len(good) >= 2:
        xs = np.log([r["value"] for r in good])
        key = "rel_l2_error" if sweep == "delta" else "l2_error"
        ys = np.log([r[key] for r in good])
        slope = float(np.polyfit(xs, ys, 1)[0])
        entries["loglog_slope"] = _FLOAT_FMT % slope
    if sweep == "alpha":
        iters = [r["n_iters"] for r in good]
        entries["iters_nonincreasing"] = bool(
            all(b <= a for a, b in zip(iters, iters[1:]))
        )
    _write_summary(outdir / "summary.txt", entries, cfg)
    _emit_config(outdir, cfg)
    return entries

"""Acceptance suite: every criterion prints one pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
are produced (pytest captures stdout otherwise).  Each test computes its
quantities from scratch; the whole suite takes a couple of minutes.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from subdiff import (
    CoefficientSamples,
    InverseConfig,
    MlParams,
    TimeGrid,
    analytic_mode_solution,
    apply_K,
    build_square,
    caputo_l1,
    flux_trace,
    initial_guess,
    l2_norm,
    mittag_leffler,
    ml_relaxation,
    project,
    reconstruct,
    rl_integral,
    solve_direct,
    solve_mode,
    validate_assumptions,
)

from conftest import a_smooth, erfc_scaled, smile

LAM1 = math.pi**2


def report(num: int, description: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {num:2d} [{'PASS' if ok else 'FAIL'}] {description}"
    if detail:
        line += f"  ({detail})"
    print(line)
    assert ok, line


def synth_flux(es, pd, grid, a_values, alpha):
    a_true = CoefficientSamples(a_values, grid)
    g = flux_trace(es, solve_direct(es, pd, a_true, alpha), a_true)
    return a_true, g


# ---------------------------------------------------------------------------


def test_criterion_01_special_function_golden_values():
    worst_exp = 0.0
    p11 = MlParams(1.0, 1.0)
    for x in np.linspace(-20.0, 5.0, 126):
        worst_exp = max(worst_exp, abs(mittag_leffler(p11, float(x)) - math.exp(x)))
    worst_erfc = 0.0
    p05 = MlParams(0.5, 1.0)
    for x in np.linspace(0.0, 10.0, 101):
        got = mittag_leffler(p05, -float(x))
        worst_erfc = max(worst_erfc, abs(got - erfc_scaled(float(x))))
    ok = worst_exp <= 1e-10 and worst_erfc <= 1e-9
    report(
        1,
        "Mittag-Leffler golden values (exp and scaled-erfc identities)",
        ok,
        f"max|E11-exp|={worst_exp:.2e}, max|E05-erfc oracle|={worst_erfc:.2e}",
    )


def test_criterion_02_complete_monotonicity():
    slack = 1e-9
    ok = True
    worst = 0.0
    for alpha in (0.3, 0.5, 0.7, 0.9):
        t = np.linspace(0.01, 10.0, 500)
        v = np.array([ml_relaxation(alpha, 1.0, tk) for tk in t])
        violations = max(
            float(np.max(-v)),
            float(np.max(np.diff(v))),
            float(np.max(-np.diff(v, 2))),
        )
        worst = max(worst, violations)
        ok &= violations <= slack
    report(
        2,
        "complete monotonicity sign alternation on 500-node grids",
        ok,
        f"worst violation={worst:.2e} (slack 1e-9)",
    )


def test_criterion_03_l1_scheme_order():
    # source data with F(0) = F'(0) = 0 keep the exact mode solution in
    # C^2, the premise under which the scheme attains 2 - alpha
    sizes = (128, 256, 512, 1024, 2048)
    details = []
    ok = True
    for alpha in (0.5, 0.9):
        errs = []
        for Nt in sizes:
            grid = TimeGrid(1.0, Nt)
            a = CoefficientSamples(np.ones(Nt + 1), grid)
            Fn = grid.nodes**2
            u = solve_mode(LAM1, a, Fn, 0.0, alpha)
            ua = analytic_mode_solution(LAM1, 1.0, Fn, 0.0, alpha, grid)
            errs.append(np.abs(u - ua).max())
        order = -np.polyfit(np.log2(sizes), np.log2(errs), 1)[0]
        ok &= 2.0 - alpha - 0.3 <= order <= 2.0 - alpha + 0.3
        details.append(f"alpha={alpha}: order={order:.3f} target={2.0 - alpha:.1f}")
    report(3, "L1 mode solve converges at its 2-alpha rate", ok, "; ".join(details))


def test_criterion_04_fractional_composition():
    grid = TimeGrid(1.0, 2048)
    f = np.sin(grid.nodes)
    comp = rl_integral(caputo_l1(f, 0.5, grid), 0.5, grid)
    err = float(np.abs(comp - (f - f[0])).max())
    report(
        4,
        "I^alpha(D^alpha f) = f - f(0) composition identity",
        err <= 5e-3,
        f"sup error={err:.2e} (tol 5e-3)",
    )


def test_criterion_05_headline_reconstruction(interval_problem):
    es, pd, grid = interval_problem
    a_true, g = synth_flux(es, pd, grid, a_smooth(grid.nodes), 0.9)
    cfg = InverseConfig(epsilon0=1e-6, max_iters=500, alpha=0.9)
    res = reconstruct(g, es, pd, cfg)
    err = l2_norm(res.a_rec.values - a_true.values, grid)
    ok = res.converged and err <= 1e-5
    report(
        5,
        "smooth-coefficient reconstruction at alpha=0.9, eps0=1e-6",
        ok,
        f"L2 error={err:.3e} in {res.n_iters} iterations (tol 1e-5)",
    )


def test_criterion_06_monotone_iteration_and_bounds(interval_problem):
    es, pd, grid = interval_problem
    ok = True
    details = []
    for profile, name in ((a_smooth, "smooth"), (smile, "smile")):
        for alpha in (0.3, 0.9):
            a_true, g = synth_flux(es, pd, grid, profile(grid.nodes), alpha)
            cfg = InverseConfig(
                epsilon0=1e-6, max_iters=3000, alpha=alpha, record_iterates=True
            )
            res = reconstruct(g, es, pd, cfg)
            it = np.array([c.values for c in res.iterates])
            mono = bool(np.all(np.diff(it, axis=0) >= -1e-10))
            low = bool(np.all(it >= it[0] - 1e-10))
            ok &= res.converged and mono and low
            details.append(f"{name}/a={alpha}: mono={mono} lower={low}")
    # the existence condition holds for a small constant coefficient;
    # iterates must then also respect the upper bound g / (sum b_n d_n)
    a_true, g = synth_flux(es, pd, grid, np.full(grid.Nt + 1, 0.05), 0.9)
    assert validate_assumptions(pd, es, g).existence_ok is True
    res = reconstruct(
        g, es, pd, InverseConfig(epsilon0=1e-8, max_iters=300, alpha=0.9, record_iterates=True)
    )
    upper = g.g / float(pd.b @ es.flux)
    it = np.array([c.values for c in res.iterates])
    upper_ok = bool(np.all(it <= upper + 1e-10))
    ok &= upper_ok
    details.append(f"existence-case upper bound={upper_ok}")
    report(6, "monotone iteration with admissible-set bounds", ok, "; ".join(details))


def test_criterion_07_epsilon0_scaling(interval_problem):
    es, pd, grid = interval_problem
    a_true, g = synth_flux(es, pd, grid, a_smooth(grid.nodes), 0.9)
    eps_values = (1e-3, 1e-4, 1e-5, 1e-6)
    errors = []
    for eps0 in eps_values:
        res = reconstruct(
            g, es, pd, InverseConfig(epsilon0=eps0, max_iters=500, alpha=0.9)
        )
        errors.append(l2_norm(res.a_rec.values - a_true.values, grid))
    slope = float(np.polyfit(np.log(eps_values), np.log(errors), 1)[0])
    report(
        7,
        "reconstruction error scales like O(eps0)",
        0.7 <= slope <= 1.3,
        f"log-log slope={slope:.3f} over eps0 in [1e-6, 1e-3]",
    )


def test_criterion_08_noise_scaling(interval_problem):
    es, pd, grid = interval_problem
    a_true, g = synth_flux(es, pd, grid, a_smooth(grid.nodes), 0.9)
    norm_a = l2_norm(a_true.values, grid)
    deltas = (0.005, 0.01, 0.02, 0.03, 0.05)
    rels = []
    all_monotone = True
    for delta in deltas:
        cfg = InverseConfig(
            epsilon0=1e-6,
            max_iters=500,
            alpha=0.9,
            delta=delta,
            seed=7,
            record_iterates=True,
        )
        res = reconstruct(g, es, pd, cfg)
        it = np.array([c.values for c in res.iterates])
        all_monotone &= bool(np.all(np.diff(it, axis=0) >= -1e-10))
        rels.append(l2_norm(res.a_rec.values - a_true.values, grid) / norm_a)
    slope = float(np.polyfit(np.log(deltas), np.log(rels), 1)[0])
    ok = 0.7 <= slope <= 1.3 and all_monotone
    report(
        8,
        "relative error scales like O(delta) with monotone iterations",
        ok,
        f"slope={slope:.3f}, monotone={all_monotone}",
    )


def test_criterion_09_alpha_dependence(interval_problem):
    es, pd, grid = interval_problem
    iters = []
    for alpha in (0.3, 0.5, 0.7, 0.9):
        a_true, g = synth_flux(es, pd, grid, a_smooth(grid.nodes), alpha)
        res = reconstruct(
            g, es, pd, InverseConfig(epsilon0=1e-6, max_iters=3000, alpha=alpha)
        )
        assert res.converged
        iters.append(res.n_iters)
    ok = all(b <= a for a, b in zip(iters, iters[1:]))
    report(
        9,
        "iteration count is nonincreasing in alpha",
        ok,
        f"iterations={iters} for alpha=(0.3, 0.5, 0.7, 0.9)",
    )


def test_criterion_10_nonsmooth_recovery(interval_problem):
    es, pd, grid = interval_problem
    a_true, g = synth_flux(es, pd, grid, smile(grid.nodes), 0.9)
    res = reconstruct(
        g, es, pd, InverseConfig(epsilon0=1e-6, max_iters=500, alpha=0.9)
    )
    err = l2_norm(res.a_rec.values - a_true.values, grid)
    ok = res.converged and err <= 1e-5
    report(
        10,
        "nonsmooth 'smile' coefficient is recovered",
        ok,
        f"L2 error={err:.3e} in {res.n_iters} iterations (tol 1e-5)",
    )


def test_criterion_11_square_domain(grid1000):
    es = build_square(64, (0.0, 0.5))
    pd = project(
        es, "neg_sin_pi_xy_bubble", ("neg_sin_pi_xy_bubble", "t_plus_1"), grid1000
    )
    a_true, g = synth_flux(es, pd, grid1000, a_smooth(grid1000.nodes), 0.9)
    # the bubble data carries tiny negative projections, so the assumption
    # gate is overridden explicitly (mirroring the reference experiment)
    assert not validate_assumptions(pd, es, g).initial_nonneg
    cfg = InverseConfig(
        epsilon0=1e-6, max_iters=1000, alpha=0.9, record_iterates=True
    )
    res = reconstruct(g, es, pd, cfg, skip_validation=True)
    err = l2_norm(res.a_rec.values - a_true.values, grid1000)
    it = np.array([c.values for c in res.iterates])
    mono = bool(np.all(np.diff(it, axis=0) >= -1e-10))
    ok = res.converged and mono and err <= 1e-4
    report(
        11,
        "square-domain reconstruction at 64 modes",
        ok,
        f"L2 error={err:.3e}, monotone={mono}, {res.n_iters} iterations (tol 1e-4)",
    )


def test_criterion_12_fixed_point_self_consistency(interval_problem):
    es, pd, grid = interval_problem
    a_true, g = synth_flux(es, pd, grid, a_smooth(grid.nodes), 0.9)
    ka = apply_K(a_true, g, es, pd, 0.9)
    self_err = float(np.abs(ka.values - a_true.values).max())
    cfg = InverseConfig(epsilon0=1e-6, max_iters=500, alpha=0.9)
    res_low = reconstruct(g, es, pd, cfg)
    a0 = initial_guess(g, es, pd, 0.9)
    res_high = reconstruct(
        g, es, pd, cfg, start=CoefficientSamples(a0.values * 1.7, grid)
    )
    gap = l2_norm(res_low.a_rec.values - res_high.a_rec.values, grid)
    ok = self_err <= 1e-12 and gap <= 10.0 * cfg.epsilon0
    report(
        12,
        "K fixes the true coefficient; distinct starts share the limit",
        ok,
        f"|K(a)-a|={self_err:.2e} (tol 1e-12), start gap={gap:.2e} (tol 1e-5)",
    )

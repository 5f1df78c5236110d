"""End-to-end acceptance gate: eleven numbered criteria, one verdict line each.

Every test prints ``[PASS] criterion <n>: <detail>`` (or ``[FAIL]``) through
the capture-disabled stream before asserting, so the verdicts show up in any
pytest run.  The heavy refinement ladders live in session fixtures shared by
the criteria that read them; the cheap coefficient and operator checks run
in well under a second each.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from subdelay.fem import uniform_mesh
from subdelay.oracle import (
    ModalSolution,
    QuadSettings,
    oracle_solution,
    singularity_probe,
)
from subdelay.problems import get_problem, single_mode_problem
from subdelay.quadrature import KBetaHelper, build_kernel, caputo_gl, frac_integral_gl
from subdelay.solver import TimeGrid, forcing_term_F, run, stability_bound_check
from subdelay.special import MLParams, mittag_leffler
from subdelay.studies import endpoint_error, spatial_study, window_error


def _verdict(capsys, num: int, ok: bool, detail: str) -> None:
    """Print one always-visible verdict line, then enforce it."""
    with capsys.disabled():
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
    assert ok, f"criterion {num}: {detail}"


def _rates(errors: list) -> list:
    return [math.log2(errors[i] / errors[i + 1]) for i in range(len(errors) - 1)]


def _in_band(values, lo: float, hi: float) -> bool:
    return all(lo <= v <= hi for v in values)


def _fmt(values) -> str:
    return "/".join(f"{v:.3f}" for v in values)


@pytest.fixture(scope="session")
def case1_ladder():
    """Manufactured case on a fixed mesh: step-doubling ladder plus the
    doubled tip the cascade differences need."""
    problem = get_problem("example1_case1", alpha=0.7, K=3)
    mesh = uniform_mesh(problem.spec.L, 200)
    start = time.perf_counter()
    runs = {
        N: run(problem.spec, mesh, TimeGrid(problem.spec.tau, 3, N), ftilde_mode="analytic")
        for N in (400, 800, 1600, 3200)
    }
    elapsed = time.perf_counter() - start
    return problem, runs, elapsed


@pytest.fixture(scope="session")
def case2_fine_reference():
    """Prescribed-source case with a deep fine-grid run as reference."""
    problem = get_problem("example1_case2", alpha=0.4, K=3)
    mesh = uniform_mesh(problem.spec.L, 1000)
    runs = {
        N: run(problem.spec, mesh, TimeGrid(problem.spec.tau, 3, N), ftilde_mode="analytic")
        for N in (400, 800, 6400)
    }
    return problem, runs


def test_criterion_1_temporal_window_rates(case1_ladder, capsys):
    problem, runs, elapsed = case1_ladder
    errors = {
        k: [window_error(runs[N], runs[2 * N], k) for N in (400, 800, 1600)]
        for k in (1, 2, 3)
    }
    rates = {k: _rates(errors[k]) for k in (1, 2, 3)}
    ok = (
        _in_band(rates[1], 0.60, 0.80)
        and _in_band(rates[2], 0.90, 1.10)
        and _in_band(rates[3], 0.90, 1.10)
        and elapsed <= 120.0
    )
    detail = (
        f"window rates w1={_fmt(rates[1])} w2={_fmt(rates[2])} w3={_fmt(rates[3])}, "
        f"ladder ran in {elapsed:.1f} s"
    )
    _verdict(capsys, 1, ok, detail)


def test_criterion_2_temporal_endpoint_rates(case1_ladder, capsys):
    problem, runs, _ = case1_ladder
    rates = {}
    for k in (1, 2, 3):
        errs = [endpoint_error(runs[N], runs[2 * N], k) for N in (400, 800, 1600)]
        rates[k] = _rates(errs)
    ok = all(_in_band(rates[k], 0.90, 1.10) for k in (1, 2, 3))
    detail = f"endpoint rates t=1: {_fmt(rates[1])}, t=2: {_fmt(rates[2])}, t=3: {_fmt(rates[3])}"
    _verdict(capsys, 2, ok, detail)


def test_criterion_3_spatial_rates(capsys):
    spans = []
    ok = True
    for name, alpha in (("example1_case1", 0.7), ("example1_case2", 0.4)):
        problem = get_problem(name, alpha=alpha, K=3)
        report = spatial_study(
            problem.spec,
            rho=1.0 / 4000,
            widths=[1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64],
            reference="cascade",
            ftilde_mode="analytic",
        )
        rates = report.rates[1:, :]
        ok = ok and bool(np.all((rates >= 1.90) & (rates <= 2.10)))
        spans.append(f"{name} {rates.min():.3f}..{rates.max():.3f}")
    _verdict(capsys, 3, ok, "mesh-halving rates " + ", ".join(spans))


def test_criterion_4_absolute_error_anchor(capsys):
    problem = get_problem("example1_case1", alpha=0.7, K=1)
    mesh = uniform_mesh(problem.spec.L, 1000)
    grid = TimeGrid(problem.spec.tau, 1, 400)
    exact = problem.exact_solution()
    e_quad = window_error(run(problem.spec, mesh, grid, ftilde_mode="quadrature"), exact, 1)
    e_ana = window_error(run(problem.spec, mesh, grid, ftilde_mode="analytic"), exact, 1)
    anchor = 9.4632e-4
    ok = anchor / 2.0 <= e_quad <= anchor * 2.0 and abs(e_ana - anchor) <= 0.10 * anchor
    detail = (
        f"first-window error {e_quad:.4e} (quadrature source) / {e_ana:.4e} (analytic source) "
        f"vs anchor {anchor:.4e}"
    )
    _verdict(capsys, 4, ok, detail)


def test_criterion_5_fine_reference_rates(case2_fine_reference, capsys):
    problem, runs = case2_fine_reference
    ref = runs[6400]
    rates = [
        math.log2(window_error(runs[400], ref, k) / window_error(runs[800], ref, k))
        for k in (1, 2, 3)
    ]
    ok = 0.30 <= rates[0] <= 0.50 and _in_band(rates[1:], 0.90, 1.10)
    _verdict(capsys, 5, ok, f"window rates {_fmt(rates)} against the deep run")


def test_criterion_6_coefficient_identities(capsys):
    worst_rel = 0.0
    bounds_ok = True
    for alpha in (0.4, 0.6, 0.7, 0.9):
        rho = 1.0 / 400
        kern = build_kernel(alpha, rho, 10_000)
        # weight table vs the increment of the scaled Gamma-ratio table
        rel = np.abs(kern.g_alpha[1:] - rho**alpha * np.diff(kern.A)) / np.abs(kern.g_alpha[1:])
        worst_rel = max(worst_rel, float(rel.max()))
        # scaled partial sums stay strictly under the continuous envelope
        sums = rho * np.cumsum(kern.A)
        n = np.arange(1, kern.A.shape[0], dtype=float)
        envelope = rho ** (1.0 - alpha) + (n * rho) ** (1.0 - alpha) / math.gamma(2.0 - alpha)
        bounds_ok = bounds_ok and bool(np.all(sums[1:] < envelope))

    # inversion identity: the P/A convolution is identically one
    kern = build_kernel(0.7, 1.0 / 400, 2000)
    conv = np.convolve(kern.P, kern.A)[:2001]
    worst_inv = float(np.abs(conv - 1.0).max())

    for alpha in (0.4, 0.7):
        kern = build_kernel(alpha, 1.0 / 400, 1000)
        P = kern.P
        for n in (10, 100, 1000):
            jj = np.arange(1, n + 1, dtype=float)
            half = n / 2.0
            for beta in (0.0, 0.5, 1.0):
                lhs = float(np.dot(jj ** (-beta), P[:n][::-1]))
                envelope = kern.rho**alpha * n ** (-beta) + kern.rho**alpha / math.gamma(
                    alpha
                ) * (
                    KBetaHelper(beta, n).value * half ** (alpha - 1.0)
                    + (1.0 / alpha) * half ** (alpha - beta)
                )
                bounds_ok = bounds_ok and lhs <= envelope
            # plain partial sum against the doubling envelope
            tn = n * kern.rho
            plain = float(P[:n].sum())
            bounds_ok = bounds_ok and plain <= 2.0**alpha * tn**alpha / math.gamma(1.0 + alpha)

    ok = worst_rel <= 1e-12 and worst_inv <= 1e-10 and bounds_ok
    detail = (
        f"weight identity rel {worst_rel:.1e}, inversion gap {worst_inv:.1e}, "
        f"sum bounds hold: {bounds_ok}"
    )
    _verdict(capsys, 6, ok, detail)


def test_criterion_7_discrete_operator_orders(capsys):
    pieces = []
    ok = True
    for alpha in (0.4, 0.7):
        caputo_errs = []
        integral_errs = []
        for N in (128, 256, 512, 1024):
            kern = build_kernel(alpha, 1.0 / N, N)
            t = np.arange(N + 1) / N
            caputo_errs.append(
                abs(caputo_gl(kern, t ** (1.0 + alpha), N) - math.gamma(2.0 + alpha))
            )
            # order-(1-alpha) integral of t^2 + t, evaluated at t = 1
            exact = 2.0 / math.gamma(4.0 - alpha) + 1.0 / math.gamma(3.0 - alpha)
            integral_errs.append(abs(frac_integral_gl(kern, t**2 + t, N) - exact))
        rc, ri = _rates(caputo_errs), _rates(integral_errs)
        ok = ok and _in_band(rc, 0.9, 1.1) and _in_band(ri, 0.9, 1.1)
        pieces.append(f"alpha={alpha:g} derivative {_fmt(rc)} integral {_fmt(ri)}")
    _verdict(capsys, 7, ok, "halving orders " + "; ".join(pieces))


def test_criterion_8_exactness_and_forms(capsys):
    # zero data propagates to the exact zero trajectory
    quiet = single_mode_problem(alpha=0.7, tau=1.0, K=2, p=0.2, b=1.0)
    mesh0 = uniform_mesh(quiet.spec.L, 40)
    zero_ok = bool(np.all(run(quiet.spec, mesh0, TimeGrid(1.0, 2, 64)).data == 0.0))

    # the two data-term branches agree at the window seam to rounding
    problem = get_problem("example1_case1", alpha=0.7, K=2)
    spec = problem.spec
    mesh = uniform_mesh(spec.L, 50)
    grid = TimeGrid(spec.tau, 2, 64)
    kern = build_kernel(spec.alpha, grid.rho, grid.total_steps)
    seam = forcing_term_F(spec, mesh, grid, kern, grid.N, ftilde_mode="analytic").values
    x = mesh.interior_coords
    tN = float(grid.time(grid.N))
    base = np.asarray(spec.forcing.ftilde(x, tN), dtype=float) + spec.b * tN ** (
        1.0 - spec.alpha
    ) / math.gamma(2.0 - spec.alpha) * np.asarray(spec.phi_minus_tau(x), dtype=float)
    dt = max(tN - spec.tau, 0.0)
    late = base - spec.b * dt ** (2.0 - spec.alpha) / math.gamma(3.0 - spec.alpha) * np.asarray(
        spec.dt_phi0(x), dtype=float
    )
    scale = float(np.abs(seam).max())
    seam_gap = max(float(np.abs(seam - base).max()), float(np.abs(seam - late).max())) / scale
    seam_ok = seam_gap <= 1e-13

    # the two Caputo summation forms march identically
    grid2 = TimeGrid(spec.tau, 2, 100)
    a_run = run(spec, mesh, grid2, ftilde_mode="analytic", caputo_form="a")
    g_run = run(spec, mesh, grid2, ftilde_mode="analytic", caputo_form="g")
    form_gap = float(np.abs(a_run.data - g_run.data).max())
    form_ok = form_gap <= 1e-11

    ok = zero_ok and seam_ok and form_ok
    detail = f"zero data exact: {zero_ok}, seam gap {seam_gap:.1e}, form gap {form_gap:.1e}"
    _verdict(capsys, 8, ok, detail)


def test_criterion_9_stability_bound(capsys):
    outcomes = []
    for name in ("example1_case1", "example1_case2"):
        for alpha in (0.4, 0.9):
            problem = get_problem(name, alpha=alpha, K=3)
            mesh = uniform_mesh(problem.spec.L, 100)
            grid = TimeGrid(problem.spec.tau, 3, 200)
            history = run(problem.spec, mesh, grid, ftilde_mode="analytic")
            report = stability_bound_check(history, problem.spec, ftilde_mode="analytic")
            outcomes.append((f"{name[-5:]} alpha={alpha:g}", report.satisfied))
    ok = all(sat for _, sat in outcomes)
    states = ", ".join(f"{label} {'ok' if sat else 'VIOLATED'}" for label, sat in outcomes)
    _verdict(capsys, 9, ok, "norm bound " + states)


def test_criterion_10_oracle_cross_validation(capsys):
    # alpha 0.7 keeps the intrinsic first-step startup error (~ rho^alpha at
    # t = rho) well under the agreement cap; smaller orders hit that floor
    problem = get_problem("example1_case2", alpha=0.7, K=2)
    mesh = uniform_mesh(problem.spec.L, 400)
    grid = TimeGrid(problem.spec.tau, 2, 3200)
    history = run(problem.spec, mesh, grid, ftilde_mode="analytic")
    sol = oracle_solution(problem, QuadSettings(tol=1e-6))
    modal, shape = sol.modal, sol.mode.shape

    def u_ref(x: np.ndarray, t: float) -> np.ndarray:
        return float(modal.values(np.asarray([t]))[0]) * shape(np.asarray(x))

    dist = max(window_error(history, u_ref, k) for k in (1, 2))
    field_ok = dist <= 2e-3

    # with no source and no feedback the modal profile is pure relaxation
    c, lam, alpha = 0.8, 2.5, 0.7
    relax = ModalSolution(
        alpha,
        lam,
        0.0,
        1.0,
        2,
        phi=lambda s: np.full_like(np.asarray(s, dtype=float), c),
        f=lambda s: np.zeros_like(np.asarray(s, dtype=float)),
    )
    ts = np.linspace(0.0, 2.0, 41)
    params = MLParams(mu=alpha)
    exact = np.array([c * mittag_leffler(params, -lam * tt**alpha) for tt in ts])
    relax_gap = float(np.abs(relax.values(ts) - exact).max())
    relax_ok = relax_gap <= 1e-6

    ok = field_ok and relax_ok
    detail = f"field distance {dist:.2e} (cap 2e-3), relaxation gap {relax_gap:.1e} (cap 1e-6)"
    _verdict(capsys, 10, ok, detail)


def test_criterion_11_singularity_probe(capsys):
    problem = get_problem("example1_case1", alpha=0.7, K=2)
    coeff = problem.exact_coeff
    report = singularity_probe(lambda t: float(coeff(t)), problem.spec.tau)
    target = problem.spec.alpha - 1.0
    ok = abs(report.first_slope - target) <= 0.1 and abs(report.second_slope - target) <= 0.1
    detail = (
        f"derivative-blowup slopes {report.first_slope:.3f} (start) / "
        f"{report.second_slope:.3f} (past the delay) vs target {target:g}"
    )
    _verdict(capsys, 11, ok, detail)
